//! Successive minima of a full-rank lattice under the δ-norm, and
//! extraction of a genuine lattice basis from independent vectors with
//! controlled growth of the norms.
//!
//! δ has no inner-product structure, so minima are found by Euclidean
//! branch-and-bound enumeration inside a provably sufficient radius
//! (‖x‖₂ ≤ ‖x‖₁ ≤ 2δ(x)) followed by exact filtering and an exact
//! integer-rank independence check. Floats only ever steer the search;
//! independence and basis certificates are integer arithmetic.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::delta::{delta, delta_ball_volume, det_hp, RealMatrix};
use crate::error::{Error, Result};
use crate::exact::{det_exact, rank, IntMatrix, UnimodularWitness};
use crate::hp::{Ctx, HPReal};

/// Full-rank lattice L = {Aξ : ξ ∈ Zᴺ} given by its basis matrix A
/// (columns are basis vectors).
#[derive(Debug, Clone)]
pub struct LatticeInstance {
    pub dim: usize,
    pub basis: RealMatrix,
}

impl LatticeInstance {
    pub fn new(ctx: &Ctx, basis: RealMatrix) -> Result<Self> {
        if !basis.is_square() {
            return Err(Error::NonSquare {
                rows: basis.rows(),
                cols: basis.cols(),
            });
        }
        if basis.rows() == 0 {
            return Err(Error::Empty("lattice basis"));
        }
        let det = det_hp(ctx, &basis)?;
        if ctx.is_zero_tau(&det) {
            return Err(Error::Singular(
                "lattice basis determinant is below tolerance".into(),
            ));
        }
        Ok(LatticeInstance {
            dim: basis.rows(),
            basis,
        })
    }
}

/// A lattice point: exact integer coordinates ξ, the embedded vector Aξ,
/// and its δ-norm.
#[derive(Debug, Clone)]
pub struct LatticePoint {
    pub coords: Vec<BigInt>,
    pub vector: Vec<HPReal>,
    pub delta: HPReal,
}

/// Successive minima λ₁ ≤ … ≤ λ_N with witnessing independent points,
/// together with the two product bounds they must satisfy.
#[derive(Debug, Clone)]
pub struct MinimaResult {
    pub lambdas: Vec<HPReal>,
    pub points: Vec<LatticePoint>,
    pub product: HPReal,
    pub det_abs: HPReal,
    /// Vol(K_N)·∏λₙ ≤ 2ᴺ·|det A| + τ
    pub minkowski_holds: bool,
    /// ∏δ(ℓₙ) ≤ 2ᴺ(N!)³/(2N)!·|det A| + τ
    pub product_bound_holds: bool,
}

/// The constant 2ᴺ(N!)³/(2N)! bounding ∏δ(ℓₙ)/|det A|; equals
/// 2ᴺ/Vol(K_N), e.g. 4/3 for N = 2.
pub fn minima_product_constant(n: usize) -> Result<BigRational> {
    let volume = delta_ball_volume(n)?;
    Ok(BigRational::from_integer(BigInt::from(2).pow(n as u32)) / volume)
}

/// All nonzero lattice points with Euclidean norm ≤ radius, one
/// representative per ± pair (first nonzero coordinate positive), sorted
/// by δ-value and then lexicographically by integer coordinates.
pub fn enumerate_short_vectors(
    ctx: &Ctx,
    lat: &LatticeInstance,
    radius: &HPReal,
) -> Result<Vec<LatticePoint>> {
    if ctx.cmp(radius, &ctx.zero()) != std::cmp::Ordering::Greater {
        return Err(Error::Schema {
            context: "enumerate_short_vectors".into(),
            message: "radius must be positive".into(),
        });
    }
    let n = lat.dim;
    let a: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| ctx.to_f64(&lat.basis[(i, j)])).collect())
        .collect();
    let mut gram = vec![vec![0f64; n]; n];
    for i in 0..n {
        for j in 0..n {
            gram[i][j] = (0..n).map(|k| a[k][i] * a[k][j]).sum();
        }
    }
    let r = cholesky_upper(&gram)
        .ok_or_else(|| Error::Singular("degenerate basis in enumeration".into()))?;

    let rf = ctx.to_f64(radius);
    let budget = (rf * (1.0 + 1e-9)).powi(2) + 1e-12;
    let mut coords = vec![0i64; n];
    let mut found: Vec<Vec<i64>> = Vec::new();
    let mut nodes: u64 = 0;
    search(&r, n, budget, &mut coords, &mut found, &mut nodes).map_err(|_| {
        Error::EnumerationCap {
            radius: format!("{rf:.6}"),
        }
    })?;

    let radius_sq = ctx.mul(radius, radius);
    let mut points = Vec::new();
    for c in found {
        let coords: Vec<BigInt> = c.iter().map(|&x| BigInt::from(x)).collect();
        let vector = lat.basis.mul_int_vec(ctx, &coords);
        let norm_sq = ctx.sum(
            vector
                .iter()
                .map(|v| ctx.mul(v, v))
                .collect::<Vec<_>>()
                .iter(),
        );
        if !ctx.le_tau(&norm_sq, &radius_sq) {
            continue;
        }
        let d = delta(ctx, &vector)?;
        points.push(LatticePoint {
            coords,
            vector,
            delta: d,
        });
    }
    points.sort_by(|p, q| {
        ctx.cmp(&p.delta, &q.delta)
            .then_with(|| p.coords.cmp(&q.coords))
    });
    Ok(points)
}

const NODE_CAP: u64 = 20_000_000;

/// Depth-first Schnorr–Euchner style scan over ‖Rξ‖² ≤ budget; keeps the
/// canonical representative of each ± pair.
fn search(
    r: &[Vec<f64>],
    level: usize,
    budget: f64,
    coords: &mut Vec<i64>,
    found: &mut Vec<Vec<i64>>,
    nodes: &mut u64,
) -> std::result::Result<(), ()> {
    *nodes += 1;
    if *nodes > NODE_CAP {
        return Err(());
    }
    if level == 0 {
        if let Some(first) = coords.iter().find(|&&x| x != 0) {
            if *first > 0 {
                found.push(coords.clone());
            }
        }
        return Ok(());
    }
    let i = level - 1;
    let t: f64 = (i + 1..coords.len()).map(|j| r[i][j] * coords[j] as f64).sum();
    let rii = r[i][i];
    let half_width = budget.max(0.0).sqrt();
    let lo = ((-half_width - t) / rii).ceil() as i64;
    let hi = ((half_width - t) / rii).floor() as i64;
    for x in lo..=hi {
        coords[i] = x;
        let term = rii * x as f64 + t;
        search(r, i, budget - term * term, coords, found, nodes)?;
    }
    coords[i] = 0;
    Ok(())
}

fn cholesky_upper(g: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = g.len();
    let mut r = vec![vec![0f64; n]; n];
    for i in 0..n {
        let mut d = g[i][i];
        for k in 0..i {
            d -= r[k][i] * r[k][i];
        }
        if d <= 0.0 {
            return None;
        }
        r[i][i] = d.sqrt();
        for j in i + 1..n {
            let mut v = g[i][j];
            for k in 0..i {
                v -= r[k][i] * r[k][j];
            }
            r[i][j] = v / r[i][i];
        }
    }
    Some(r)
}

const GROWTH_CAP_DOUBLINGS: usize = 10;

/// Successive minima of L under δ: grows a δ-radius from the shortest
/// basis column, enumerates the Euclidean ball of twice that radius
/// (sound since ‖x‖₂ ≤ 2δ(x)), and greedily selects independent points
/// in (δ, lexicographic) order with exact integer rank checks.
pub fn successive_minima_delta(ctx: &Ctx, lat: &LatticeInstance) -> Result<MinimaResult> {
    let n = lat.dim;
    let col_deltas: Vec<HPReal> = (0..n)
        .map(|j| delta(ctx, &lat.basis.column(j)))
        .collect::<Result<_>>()?;
    let mut r_delta = col_deltas[0].clone();
    for d in &col_deltas[1..] {
        if ctx.cmp(d, &r_delta) == std::cmp::Ordering::Less {
            r_delta = d.clone();
        }
    }
    let two = ctx.from_i64(2);
    for _ in 0..=GROWTH_CAP_DOUBLINGS {
        let euclid = ctx.mul(&two, &r_delta);
        let points = enumerate_short_vectors(ctx, lat, &euclid)?;
        let mut selected: Vec<LatticePoint> = Vec::new();
        let mut rows: Vec<Vec<BigInt>> = Vec::new();
        for p in points {
            if !ctx.le_tau(&p.delta, &r_delta) {
                continue;
            }
            rows.push(p.coords.clone());
            let candidate = IntMatrix::from_rows(rows.clone())?;
            if rank(&candidate) == rows.len() {
                selected.push(p);
            } else {
                rows.pop();
            }
            if selected.len() == n {
                break;
            }
        }
        if selected.len() == n {
            return finish_minima(ctx, lat, selected);
        }
        r_delta = ctx.mul(&two, &r_delta);
    }
    Err(Error::EnumerationCap {
        radius: format!("{:.6}", ctx.to_f64(&r_delta)),
    })
}

fn finish_minima(
    ctx: &Ctx,
    lat: &LatticeInstance,
    selected: Vec<LatticePoint>,
) -> Result<MinimaResult> {
    let n = lat.dim;
    let lambdas: Vec<HPReal> = selected.iter().map(|p| p.delta.clone()).collect();
    let product = ctx.product(lambdas.iter());
    let det_abs = ctx.abs(&det_hp(ctx, &lat.basis)?);
    let two_n = ctx.from_bigint(&BigInt::from(2).pow(n as u32));
    let volume = ctx.from_ratio(&delta_ball_volume(n)?);
    let minkowski_holds = ctx.le_tau(&ctx.mul(&volume, &product), &ctx.mul(&two_n, &det_abs));
    let constant = ctx.from_ratio(&minima_product_constant(n)?);
    let product_bound_holds = ctx.le_tau(&product, &ctx.mul(&constant, &det_abs));
    Ok(MinimaResult {
        lambdas,
        points: selected,
        product,
        det_abs,
        minkowski_holds,
        product_bound_holds,
    })
}

/// Exchanges N independent lattice points ℓ₁…ℓ_N for a genuine basis
/// b₁…b_N of L with δ(bⱼ) ≤ max(δ(ℓⱼ), ½(δ(ℓ₁)+⋯+δ(ℓⱼ))) + τ.
///
/// Construction: write Θ for the rational matrix expressing candidate
/// basis rows in terms of the ℓ's. A triangular Θ with Θⱼⱼ = 1/hⱼ comes
/// from a reversed Hermite form of |det Ξ|·Ξ⁻¹ (Ξ = coordinate rows of
/// the ℓ's); rows with hⱼ = 1 are replaced by ℓⱼ itself, all others are
/// size-reduced to |Θᵢⱼ| ≤ Θᵢᵢ/2 ≤ ½. The returned witness certifies
/// |det| = 1 for the output coordinates, i.e. a true basis of L.
pub fn mahler_weyl_basis(
    ctx: &Ctx,
    lat: &LatticeInstance,
    points: &[LatticePoint],
) -> Result<(Vec<LatticePoint>, UnimodularWitness)> {
    let n = lat.dim;
    if points.len() != n {
        return Err(Error::RankMismatch {
            expected: n,
            found: points.len(),
        });
    }
    let xi = IntMatrix::from_rows(points.iter().map(|p| p.coords.clone()).collect())?;
    let det = det_exact(&xi)?;
    if det.is_zero() {
        return Err(Error::Dependent("input lattice points".into()));
    }
    let det_abs = det.abs();

    // W = |det|·Ξ⁻¹ is integral; its rows span the coefficient lattice
    // {θ : θ·Ξ ∈ Zᴺ} scaled by |det|.
    let inv = rational_inverse(&xi)?;
    let mut w = IntMatrix::zero(n, n);
    for i in 0..n {
        for j in 0..n {
            let scaled = &inv[i][j] * BigRational::from_integer(det_abs.clone());
            assert!(scaled.is_integer(), "scaled inverse must be integral");
            w[(i, j)] = scaled.to_integer();
        }
    }

    // Reversed Hermite form: lower-left triangular L' = V·W with positive
    // diagonal; then Θ = L'/|det| and the basis coordinate rows are V.
    let (h_rev, u_rev) = crate::exact::hnf(&reversed(&w));
    let l_tri = reversed(&h_rev);
    let v = reversed(&u_rev.transform);

    let mut theta: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| BigRational::new(l_tri[(i, j)].clone(), det_abs.clone()))
                .collect()
        })
        .collect();
    let mut basis_rows: Vec<Vec<BigInt>> = (0..n).map(|i| v.row(i)).collect();

    let one = BigRational::one();
    for j in 0..n {
        assert!(theta[j][j].is_positive() && theta[j][j] <= one);
        if theta[j][j] == one {
            basis_rows[j] = points[j].coords.clone();
            for (idx, t) in theta[j].iter_mut().enumerate() {
                *t = if idx == j {
                    BigRational::one()
                } else {
                    BigRational::zero()
                };
            }
            continue;
        }
        for i in (0..j).rev() {
            let q = (&theta[j][i] / &theta[i][i]).round().to_integer();
            if q.is_zero() {
                continue;
            }
            for k in 0..n {
                let t = &theta[j][k] - BigRational::from_integer(q.clone()) * &theta[i][k];
                theta[j][k] = t;
                let b = &basis_rows[j][k] - &q * &basis_rows[i][k];
                basis_rows[j][k] = b;
            }
        }
    }

    let coord_matrix = IntMatrix::from_rows(basis_rows.clone())?;
    let witness = UnimodularWitness::new(coord_matrix)?;

    let half = ctx.from_f64(0.5);
    let mut out = Vec::with_capacity(n);
    let mut prefix = ctx.zero();
    for (j, row) in basis_rows.iter().enumerate() {
        let vector = lat.basis.mul_int_vec(ctx, row);
        let d = delta(ctx, &vector)?;
        prefix = ctx.add(&prefix, &points[j].delta);
        let bound = ctx.max(&points[j].delta, &ctx.mul(&half, &prefix));
        assert!(
            ctx.le_tau(&d, &bound),
            "basis vector {j} exceeds its norm bound"
        );
        out.push(LatticePoint {
            coords: row.clone(),
            vector,
            delta: d,
        });
    }
    Ok((out, witness))
}

fn reversed(m: &IntMatrix) -> IntMatrix {
    let (r, c) = (m.rows(), m.cols());
    let mut out = IntMatrix::zero(r, c);
    for i in 0..r {
        for j in 0..c {
            out[(i, j)] = m[(r - 1 - i, c - 1 - j)].clone();
        }
    }
    out
}

/// Exact inverse of a nonsingular integer matrix, by Gauss–Jordan over
/// the rationals.
fn rational_inverse(m: &IntMatrix) -> Result<Vec<Vec<BigRational>>> {
    let n = m.rows();
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| BigRational::from_integer(m[(i, j)].clone()))
                .collect()
        })
        .collect();
    let mut inv: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect();
    for k in 0..n {
        let pivot = (k..n)
            .find(|&i| !a[i][k].is_zero())
            .ok_or_else(|| Error::Singular("matrix inverse of singular matrix".into()))?;
        a.swap(k, pivot);
        inv.swap(k, pivot);
        let p = a[k][k].clone();
        for j in 0..n {
            a[k][j] /= &p;
            inv[k][j] /= &p;
        }
        for i in 0..n {
            if i == k || a[i][k].is_zero() {
                continue;
            }
            let f = a[i][k].clone();
            for j in 0..n {
                let av = &a[i][j] - &f * &a[k][j];
                a[i][j] = av;
                let iv = &inv[i][j] - &f * &inv[k][j];
                inv[i][j] = iv;
            }
        }
    }
    Ok(inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn lat_from_i64(ctx: &Ctx, rows: &[&[i64]]) -> LatticeInstance {
        let m = IntMatrix::from_i64_rows(rows);
        LatticeInstance::new(ctx, RealMatrix::from_int(ctx, &m)).unwrap()
    }

    fn coords_i64(p: &LatticePoint) -> Vec<i64> {
        p.coords.iter().map(|c| c.to_i64().unwrap()).collect()
    }

    #[test]
    fn enumerate_unit_lattice() {
        let ctx = Ctx::new(128);
        let lat = lat_from_i64(&ctx, &[&[1, 0], &[0, 1]]);
        let pts = enumerate_short_vectors(&ctx, &lat, &ctx.one()).unwrap();
        let coords: Vec<Vec<i64>> = pts.iter().map(coords_i64).collect();
        assert_eq!(coords, vec![vec![0, 1], vec![1, 0]]);

        let pts = enumerate_short_vectors(&ctx, &lat, &ctx.from_f64(1.5)).unwrap();
        let coords: Vec<Vec<i64>> = pts.iter().map(coords_i64).collect();
        assert_eq!(
            coords,
            vec![vec![0, 1], vec![1, -1], vec![1, 0], vec![1, 1]]
        );
    }

    #[test]
    fn enumerate_empty_when_radius_too_small() {
        let ctx = Ctx::new(128);
        let lat = lat_from_i64(&ctx, &[&[2, 0], &[0, 2]]);
        let pts = enumerate_short_vectors(&ctx, &lat, &ctx.one()).unwrap();
        assert!(pts.is_empty());
    }

    #[test]
    fn enumerate_rejects_nonpositive_radius() {
        let ctx = Ctx::new(128);
        let lat = lat_from_i64(&ctx, &[&[1, 0], &[0, 1]]);
        assert!(enumerate_short_vectors(&ctx, &lat, &ctx.zero()).is_err());
    }

    #[test]
    fn minima_unit_lattice() {
        let ctx = Ctx::new(128);
        let lat = lat_from_i64(&ctx, &[&[1, 0], &[0, 1]]);
        let res = successive_minima_delta(&ctx, &lat).unwrap();
        assert!(ctx.eq_tau(&res.lambdas[0], &ctx.one()));
        assert!(ctx.eq_tau(&res.lambdas[1], &ctx.one()));
        assert!(ctx.eq_tau(&res.product, &ctx.one()));
        assert!(res.minkowski_holds);
        assert!(res.product_bound_holds);
    }

    #[test]
    fn minima_rectangular_lattice() {
        let ctx = Ctx::new(128);
        let lat = lat_from_i64(&ctx, &[&[2, 0], &[0, 3]]);
        let res = successive_minima_delta(&ctx, &lat).unwrap();
        assert!(ctx.eq_tau(&res.lambdas[0], &ctx.from_i64(2)));
        assert!(ctx.eq_tau(&res.lambdas[1], &ctx.from_i64(3)));
        assert_eq!(coords_i64(&res.points[0]), vec![1, 0]);
        assert_eq!(coords_i64(&res.points[1]), vec![0, 1]);
    }

    #[test]
    fn minima_scale_equivariant() {
        let ctx = Ctx::new(128);
        let base = successive_minima_delta(&ctx, &lat_from_i64(&ctx, &[&[2, 0], &[0, 3]])).unwrap();
        let scaled =
            successive_minima_delta(&ctx, &lat_from_i64(&ctx, &[&[4, 0], &[0, 6]])).unwrap();
        for j in 0..2 {
            assert!(ctx.eq_tau(
                &scaled.lambdas[j],
                &ctx.mul(&ctx.from_i64(2), &base.lambdas[j])
            ));
            assert_eq!(coords_i64(&scaled.points[j]), coords_i64(&base.points[j]));
        }
    }

    #[test]
    fn mahler_weyl_on_scaled_sublattice() {
        let ctx = Ctx::new(128);
        let lat = lat_from_i64(&ctx, &[&[1, 0], &[0, 1]]);
        let two = BigInt::from(2);
        let pts: Vec<LatticePoint> = [(0usize, two.clone()), (1usize, two)]
            .into_iter()
            .map(|(axis, s)| {
                let mut coords = vec![BigInt::zero(), BigInt::zero()];
                coords[axis] = s;
                let vector = lat.basis.mul_int_vec(&ctx, &coords);
                let d = delta(&ctx, &vector).unwrap();
                LatticePoint {
                    coords,
                    vector,
                    delta: d,
                }
            })
            .collect();
        let (basis, witness) = mahler_weyl_basis(&ctx, &lat, &pts).unwrap();
        assert_eq!(witness.determinant.abs(), BigInt::one());
        for b in &basis {
            assert!(ctx.le_tau(&b.delta, &ctx.from_i64(2)));
        }
        // The output must be a basis of Z², index 1.
        let m = IntMatrix::from_rows(basis.iter().map(|b| b.coords.clone()).collect()).unwrap();
        assert_eq!(det_exact(&m).unwrap().abs(), BigInt::one());
    }

    #[test]
    fn mahler_weyl_keeps_existing_basis() {
        let ctx = Ctx::new(128);
        let lat = lat_from_i64(&ctx, &[&[1, 0], &[0, 1]]);
        let pts: Vec<LatticePoint> = [vec![1i64, 0], vec![1, 1]]
            .into_iter()
            .map(|c| {
                let coords: Vec<BigInt> = c.into_iter().map(BigInt::from).collect();
                let vector = lat.basis.mul_int_vec(&ctx, &coords);
                let d = delta(&ctx, &vector).unwrap();
                LatticePoint {
                    coords,
                    vector,
                    delta: d,
                }
            })
            .collect();
        let (basis, witness) = mahler_weyl_basis(&ctx, &lat, &pts).unwrap();
        assert_eq!(witness.determinant.abs(), BigInt::one());
        assert_eq!(coords_i64(&basis[0]), vec![1, 0]);
        assert_eq!(coords_i64(&basis[1]), vec![1, 1]);
    }

    #[test]
    fn mahler_weyl_rejects_dependent_points() {
        let ctx = Ctx::new(128);
        let lat = lat_from_i64(&ctx, &[&[1, 0], &[0, 1]]);
        let pts: Vec<LatticePoint> = [vec![1i64, 1], vec![2, 2]]
            .into_iter()
            .map(|c| {
                let coords: Vec<BigInt> = c.into_iter().map(BigInt::from).collect();
                let vector = lat.basis.mul_int_vec(&ctx, &coords);
                let d = delta(&ctx, &vector).unwrap();
                LatticePoint {
                    coords,
                    vector,
                    delta: d,
                }
            })
            .collect();
        assert!(mahler_weyl_basis(&ctx, &lat, &pts).is_err());
    }

    #[test]
    fn minima_match_brute_force_on_small_integer_lattices() {
        let ctx = Ctx::new(128);
        let cases: [&[&[i64]]; 4] = [
            &[&[1, 1], &[0, 1]],
            &[&[2, 1], &[1, 2]],
            &[&[3, -1], &[1, 2]],
            &[&[1, 2, 0], &[0, 1, 1], &[1, 0, 3]],
        ];
        for rows in cases {
            let m = IntMatrix::from_i64_rows(rows);
            let lat = LatticeInstance::new(&ctx, RealMatrix::from_int(&ctx, &m)).unwrap();
            let res = successive_minima_delta(&ctx, &lat).unwrap();
            let oracle = brute_force_profile(&m, 10);
            assert_eq!(res.lambdas.len(), oracle.len());
            for (l, o) in res.lambdas.iter().zip(&oracle) {
                assert!(ctx.eq_tau(l, &ctx.from_bigint(o)), "profile mismatch");
            }
            assert!(res.minkowski_holds && res.product_bound_holds);
        }
    }

    /// Independent oracle: scan the exponent box |ξᵢ| ≤ r exhaustively,
    /// sort by exact integer δ, and greedily pick an independent system.
    fn brute_force_profile(basis: &IntMatrix, r: i64) -> Vec<BigInt> {
        use crate::delta::delta_int;
        let n = basis.rows();
        let mut all: Vec<(BigInt, Vec<BigInt>)> = Vec::new();
        let mut xi = vec![-r; n];
        loop {
            let coords: Vec<BigInt> = xi.iter().map(|&x| BigInt::from(x)).collect();
            if let Some(first) = coords.iter().find(|c| !c.is_zero()) {
                if first.is_positive() {
                    let v = basis.mul_vec(&coords);
                    all.push((delta_int(&v), coords));
                }
            }
            let mut k = 0;
            while k < n {
                xi[k] += 1;
                if xi[k] <= r {
                    break;
                }
                xi[k] = -r;
                k += 1;
            }
            if k == n {
                break;
            }
        }
        all.sort();
        let mut rows: Vec<Vec<BigInt>> = Vec::new();
        let mut profile = Vec::new();
        for (d, coords) in all {
            rows.push(coords);
            let cand = IntMatrix::from_rows(rows.clone()).unwrap();
            if rank(&cand) == rows.len() {
                profile.push(d);
            } else {
                rows.pop();
            }
            if profile.len() == n {
                break;
            }
        }
        profile
    }
}
