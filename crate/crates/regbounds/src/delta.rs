//! The δ-norm (Schinzel norm), its determinant inequality, and the volume
//! of its unit ball.
//!
//! For x ∈ R^N, δ(x) = max(Σ xₘ⁺, Σ xₙ⁻), equivalently ½|Σ xₙ| + ½ Σ |xₙ|.
//! Its unit ball K_N has exact volume (2N)!/(N!)³, checked here both by the
//! closed form and by seeded Monte Carlo, and the determinant of any real
//! N×N matrix is bounded by the product of the δ-norms of its columns.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{det_exact, IntMatrix};
use crate::hp::{Ctx, HPReal};
use crate::rng::Rng;

/// Dense matrix of high-precision reals, row-major. Columns are the
/// vectors that δ-norm bounds and lattice enumeration operate on.
#[derive(Debug, Clone)]
pub struct RealMatrix {
    rows: usize,
    cols: usize,
    data: Vec<HPReal>,
}

impl RealMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<HPReal>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Schema {
                context: "matrix".into(),
                message: format!(
                    "expected {} entries for {rows}x{cols}, got {}",
                    rows * cols,
                    data.len()
                ),
            });
        }
        Ok(RealMatrix { rows, cols, data })
    }

    pub fn zero(ctx: &Ctx, rows: usize, cols: usize) -> Self {
        RealMatrix {
            rows,
            cols,
            data: vec![ctx.zero(); rows * cols],
        }
    }

    pub fn from_f64_rows(ctx: &Ctx, rows: &[&[f64]]) -> Self {
        let data = rows
            .iter()
            .flat_map(|r| r.iter().map(|&v| ctx.from_f64(v)))
            .collect();
        RealMatrix {
            rows: rows.len(),
            cols: rows.first().map_or(0, |r| r.len()),
            data,
        }
    }

    pub fn from_int(ctx: &Ctx, m: &IntMatrix) -> Self {
        let mut out = RealMatrix::zero(ctx, m.rows(), m.cols());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                out[(i, j)] = ctx.from_bigint(&m[(i, j)]);
            }
        }
        out
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn column(&self, j: usize) -> Vec<HPReal> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    /// A·ξ for an integer coordinate vector ξ.
    pub fn mul_int_vec(&self, ctx: &Ctx, xi: &[BigInt]) -> Vec<HPReal> {
        assert_eq!(self.cols, xi.len(), "dimension mismatch in A·xi");
        (0..self.rows)
            .map(|i| {
                let mut acc = ctx.zero();
                for j in 0..self.cols {
                    acc = ctx.add(&acc, &ctx.mul(&self[(i, j)], &ctx.from_bigint(&xi[j])));
                }
                acc
            })
            .collect()
    }

    /// A·B for an integer matrix B on the right.
    pub fn mul_int(&self, ctx: &Ctx, rhs: &IntMatrix) -> RealMatrix {
        assert_eq!(self.cols, rhs.rows(), "dimension mismatch in A·B");
        let mut out = RealMatrix::zero(ctx, self.rows, rhs.cols());
        for i in 0..self.rows {
            for j in 0..rhs.cols() {
                let mut acc = ctx.zero();
                for t in 0..self.cols {
                    acc = ctx.add(&acc, &ctx.mul(&self[(i, t)], &ctx.from_bigint(&rhs[(t, j)])));
                }
                out[(i, j)] = acc;
            }
        }
        out
    }
}

impl std::ops::Index<(usize, usize)> for RealMatrix {
    type Output = HPReal;
    fn index(&self, (i, j): (usize, usize)) -> &HPReal {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RealMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut HPReal {
        &mut self.data[i * self.cols + j]
    }
}

/// δ(x) = max(Σ xₘ⁺, Σ xₙ⁻). Also evaluates the half-sum form
/// ½|Σ xₙ| + ½ Σ |xₙ| and asserts the two agree within τ.
pub fn delta(ctx: &Ctx, x: &[HPReal]) -> Result<HPReal> {
    if x.is_empty() {
        return Err(Error::Empty("delta of empty vector"));
    }
    let pos = ctx.sum(x.iter().map(|v| ctx.pos(v)).collect::<Vec<_>>().iter());
    let neg = ctx.sum(x.iter().map(|v| ctx.negpart(v)).collect::<Vec<_>>().iter());
    let d = ctx.max(&pos, &neg);

    let total = ctx.sum(x.iter());
    let abs_sum = ctx.sum(x.iter().map(|v| ctx.abs(v)).collect::<Vec<_>>().iter());
    let half = ctx.from_f64(0.5);
    let half_form = ctx.mul(&half, &ctx.add(&ctx.abs(&total), &abs_sum));
    assert!(
        ctx.eq_tau(&d, &half_form),
        "delta max-form and half-sum form disagree beyond tolerance"
    );
    Ok(d)
}

/// δ of an integer vector, exactly.
pub fn delta_int(x: &[BigInt]) -> BigInt {
    let mut pos = BigInt::zero();
    let mut neg = BigInt::zero();
    for v in x {
        if v.is_positive() {
            pos += v;
        } else {
            neg -= v;
        }
    }
    pos.max(neg)
}

/// Outcome of a determinant-versus-column-norms comparison.
#[derive(Debug, Clone)]
pub struct SchinzelCheck {
    pub det_abs: HPReal,
    pub bound: HPReal,
    pub holds: bool,
}

/// |det A| ≤ ∏ⱼ δ(column j of A), at working precision.
pub fn schinzel_bound(ctx: &Ctx, a: &RealMatrix) -> Result<SchinzelCheck> {
    if !a.is_square() {
        return Err(Error::NonSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    if a.rows() == 0 {
        return Err(Error::Empty("schinzel bound of 0x0 matrix"));
    }
    let deltas: Vec<HPReal> = (0..a.cols())
        .map(|j| delta(ctx, &a.column(j)))
        .collect::<Result<_>>()?;
    let bound = ctx.product(deltas.iter());
    let det_abs = ctx.abs(&det_hp(ctx, a)?);
    let holds = ctx.le_tau(&det_abs, &bound);
    Ok(SchinzelCheck {
        det_abs,
        bound,
        holds,
    })
}

/// Exact-arithmetic form of the same check for integer matrices.
pub fn schinzel_bound_int(a: &IntMatrix) -> Result<(BigInt, BigInt, bool)> {
    if !a.is_square() {
        return Err(Error::NonSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    if a.rows() == 0 {
        return Err(Error::Empty("schinzel bound of 0x0 matrix"));
    }
    let det_abs = det_exact(a)?.abs();
    let bound: BigInt = (0..a.cols()).map(|j| delta_int(&a.column(j))).product();
    let holds = det_abs <= bound;
    Ok((det_abs, bound, holds))
}

/// Determinant by Gaussian elimination with partial pivoting.
pub fn det_hp(ctx: &Ctx, a: &RealMatrix) -> Result<HPReal> {
    if !a.is_square() {
        return Err(Error::NonSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let n = a.rows();
    let mut m = a.clone();
    let mut det = ctx.one();
    for k in 0..n {
        let pivot = (k..n)
            .max_by(|&i, &j| ctx.cmp(&ctx.abs(&m[(i, k)]), &ctx.abs(&m[(j, k)])))
            .expect("nonempty pivot range");
        if ctx.is_zero_tau(&m[(pivot, k)]) {
            return Ok(ctx.zero());
        }
        if pivot != k {
            for j in 0..n {
                let tmp = m[(k, j)].clone();
                m[(k, j)] = m[(pivot, j)].clone();
                m[(pivot, j)] = tmp;
            }
            det = ctx.neg(&det);
        }
        det = ctx.mul(&det, &m[(k, k)]);
        for i in k + 1..n {
            let f = ctx.div(&m[(i, k)], &m[(k, k)]);
            for j in k..n {
                let v = ctx.sub(&m[(i, j)], &ctx.mul(&f, &m[(k, j)]));
                m[(i, j)] = v;
            }
        }
    }
    Ok(det)
}

/// Exact volume of the δ-norm unit ball K_N: (2N)!/(N!)³.
pub fn delta_ball_volume(n: usize) -> Result<BigRational> {
    if n == 0 {
        return Err(Error::Empty("ball volume needs dimension >= 1"));
    }
    let nf = factorial(n);
    Ok(BigRational::new(factorial(2 * n), &nf * &nf * &nf))
}

/// Seeded hit-or-miss estimate of Vol(K_N).
#[derive(Debug, Clone)]
pub struct McEstimate {
    pub estimate: HPReal,
    pub stderr: HPReal,
    pub hits: u64,
    pub samples: u64,
}

/// Monte Carlo volume of K_N over the bounding box [−1,1]^N, which
/// contains K_N since δ(x) ≤ 1 forces every |xᵢ| ≤ 1.
pub fn delta_ball_volume_mc(ctx: &Ctx, n: usize, samples: u64, seed: u64) -> Result<McEstimate> {
    if n == 0 {
        return Err(Error::Empty("ball volume needs dimension >= 1"));
    }
    if samples == 0 {
        return Err(Error::Empty("monte carlo needs at least one sample"));
    }
    let mut rng = Rng::from_seed(seed);
    let mut hits: u64 = 0;
    let mut point = vec![0f64; n];
    for _ in 0..samples {
        for p in &mut point {
            *p = rng.next_symmetric();
        }
        let mut pos = 0f64;
        let mut neg = 0f64;
        for &p in &point {
            if p > 0.0 {
                pos += p;
            } else {
                neg -= p;
            }
        }
        if pos.max(neg) <= 1.0 {
            hits += 1;
        }
    }
    let box_volume = 2f64.powi(n as i32);
    let p_hat = hits as f64 / samples as f64;
    let estimate = box_volume * p_hat;
    let stderr = box_volume * (p_hat * (1.0 - p_hat) / samples as f64).sqrt();
    Ok(McEstimate {
        estimate: ctx.from_f64(estimate),
        stderr: ctx.from_f64(stderr),
        hits,
        samples,
    })
}

/// Verifies Σₘ (det J⁽ᵐ⁾)² = 4⁻ᴺ(N+1) exactly, where J is the (N+1)×N
/// matrix with ½·identity on top and a row of −½ at the bottom, and J⁽ᵐ⁾
/// drops the m-th row.
pub fn j_matrix_identity_check(n: usize) -> Result<bool> {
    let (lhs, rhs) = j_matrix_identity_sides(n)?;
    Ok(lhs == rhs)
}

/// The two sides of the J-matrix identity as exact rationals:
/// (Σₘ (det J⁽ᵐ⁾)², 4⁻ᴺ(N+1)).
pub fn j_matrix_identity_sides(n: usize) -> Result<(BigRational, BigRational)> {
    if n == 0 {
        return Err(Error::Empty("j-matrix identity needs dimension >= 1"));
    }
    // Work with 2J (integer entries); each squared minor picks up 4^N.
    let mut j2 = IntMatrix::zero(n + 1, n);
    for i in 0..n {
        j2[(i, i)] = BigInt::one();
    }
    for k in 0..n {
        j2[(n, k)] = BigInt::from(-1);
    }
    let four_n = BigInt::from(4).pow(n as u32);
    let mut sum = BigRational::zero();
    for m in 0..=n {
        let minor = IntMatrix::from_rows(
            (0..=n)
                .filter(|&i| i != m)
                .map(|i| (0..n).map(|k| j2[(i, k)].clone()).collect())
                .collect(),
        )?;
        let d = det_exact(&minor)?;
        sum += BigRational::new(&d * &d, four_n.clone());
    }
    Ok((sum, BigRational::new(BigInt::from(n as u64 + 1), four_n)))
}

pub(crate) fn factorial(n: usize) -> BigInt {
    (1..=n as u64).map(BigInt::from).product()
}
