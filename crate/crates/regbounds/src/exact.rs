//! Exact integer linear algebra: determinants, Hermite and Smith normal
//! forms, integer kernels, and unimodular basis-change certificates.
//!
//! Everything here is arbitrary precision and rounding-free. Subgroup
//! indices and independence certificates must be exact, so no operation
//! in this module ever touches a float.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Dense integer matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Schema {
                context: "matrix".into(),
                message: "ragged rows".into(),
            });
        }
        Ok(IntMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let data = rows
            .iter()
            .flat_map(|r| r.iter().map(|&v| BigInt::from(v)))
            .collect();
        IntMatrix {
            rows: rows.len(),
            cols: rows.first().map_or(0, |r| r.len()),
            data,
        }
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

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row(&self, i: usize) -> Vec<BigInt> {
        (0..self.cols).map(|j| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = BigInt::zero();
                for k in 0..self.cols {
                    acc += &self[(i, k)] * &other[(k, j)];
                }
                out[(i, j)] = acc;
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in matrix-vector product");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| &self[(i, j)] * &v[j]).sum())
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self[(i, j)].clone();
            self[(i, j)] = v;
        }
    }

    /// row[dst] += q * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = &self[(dst, j)] + q * &self[(src, j)];
            self[(dst, j)] = v;
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// col[dst] += q * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = &self[(i, dst)] + q * &self[(i, src)];
            self[(i, dst)] = v;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl std::fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.rows {
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Certifies that `transform` is a change of basis: |det| = 1, checked exactly.
#[derive(Debug, Clone)]
pub struct UnimodularWitness {
    pub transform: IntMatrix,
    pub determinant: BigInt,
}

impl UnimodularWitness {
    pub fn new(transform: IntMatrix) -> Result<Self> {
        let determinant = det_exact(&transform)?;
        if determinant.abs() != BigInt::one() {
            return Err(Error::Singular(format!(
                "transform determinant {determinant} is not a unit"
            )));
        }
        Ok(UnimodularWitness {
            transform,
            determinant,
        })
    }
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn det_exact(m: &IntMatrix) -> Result<BigInt> {
    if !m.is_square() {
        return Err(Error::NonSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let n = m.rows;
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[(k, k)].is_zero() {
            match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                Some(i) => {
                    a.swap_rows(k, i);
                    sign = -sign;
                }
                None => return Ok(BigInt::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)];
                a[(i, j)] = num / &prev;
            }
            a[(i, k)] = BigInt::zero();
        }
        prev = a[(k, k)].clone();
    }
    Ok(sign * a[(n - 1, n - 1)].clone())
}

/// Row Hermite normal form: H = U·M with U unimodular, pivots positive,
/// entries above each pivot reduced into [0, pivot).
pub fn hnf(m: &IntMatrix) -> (IntMatrix, UnimodularWitness) {
    let mut h = m.clone();
    let mut u = IntMatrix::identity(m.rows);
    let mut pivot_row = 0;
    for col in 0..m.cols {
        if pivot_row == m.rows {
            break;
        }
        // Clear below (pivot_row, col) by gcd steps on rows.
        loop {
            let best = (pivot_row..m.rows)
                .filter(|&i| !h[(i, col)].is_zero())
                .min_by_key(|&i| h[(i, col)].abs());
            let Some(best) = best else { break };
            h.swap_rows(pivot_row, best);
            u.swap_rows(pivot_row, best);
            let mut done = true;
            let p = h[(pivot_row, col)].clone();
            for i in pivot_row + 1..m.rows {
                if h[(i, col)].is_zero() {
                    continue;
                }
                let q = -(&h[(i, col)] / &p);
                h.add_row_multiple(i, pivot_row, &q);
                u.add_row_multiple(i, pivot_row, &q);
                if !h[(i, col)].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[(pivot_row, col)].is_zero() {
            continue;
        }
        if h[(pivot_row, col)].is_negative() {
            h.negate_row(pivot_row);
            u.negate_row(pivot_row);
        }
        // Reduce entries above the pivot into [0, pivot).
        let p = h[(pivot_row, col)].clone();
        for i in 0..pivot_row {
            let q = -h[(i, col)].div_floor(&p);
            h.add_row_multiple(i, pivot_row, &q);
            u.add_row_multiple(i, pivot_row, &q);
        }
        pivot_row += 1;
    }
    let witness = UnimodularWitness::new(u).expect("row operations preserve unimodularity");
    (h, witness)
}

/// Rank of an integer matrix (exact, via HNF).
pub fn rank(m: &IntMatrix) -> usize {
    let (h, _) = hnf(m);
    (0..h.rows)
        .filter(|&i| (0..h.cols).any(|j| !h[(i, j)].is_zero()))
        .count()
}

/// Smith normal form: D = U·M·V, diagonal, d_1 | d_2 | ..., d_i >= 0.
pub fn snf(m: &IntMatrix) -> (IntMatrix, UnimodularWitness, UnimodularWitness) {
    let mut d = m.clone();
    let mut u = IntMatrix::identity(m.rows);
    let mut v = IntMatrix::identity(m.cols);
    let n = m.rows.min(m.cols);
    let mut t = 0;
    while t < n {
        // Move a minimal-magnitude nonzero entry of the trailing block to (t, t).
        let mut min_pos: Option<(usize, usize)> = None;
        for i in t..m.rows {
            for j in t..m.cols {
                if d[(i, j)].is_zero() {
                    continue;
                }
                match min_pos {
                    Some((bi, bj)) if d[(bi, bj)].abs() <= d[(i, j)].abs() => {}
                    _ => min_pos = Some((i, j)),
                }
            }
        }
        let Some((bi, bj)) = min_pos else { break };
        d.swap_rows(t, bi);
        u.swap_rows(t, bi);
        d.swap_cols(t, bj);
        v.swap_cols(t, bj);

        // Clear row t and column t; restart whenever a remainder shrinks the pivot.
        let mut clean = false;
        while !clean {
            clean = true;
            for i in t + 1..m.rows {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = -(&d[(i, t)] / &d[(t, t)]);
                d.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                if !d[(i, t)].is_zero() {
                    d.swap_rows(t, i);
                    u.swap_rows(t, i);
                    clean = false;
                }
            }
            for j in t + 1..m.cols {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = -(&d[(t, j)] / &d[(t, t)]);
                d.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                if !d[(t, j)].is_zero() {
                    d.swap_cols(t, j);
                    v.swap_cols(t, j);
                    clean = false;
                }
            }
        }

        // Enforce divisibility: if d_t does not divide some trailing entry,
        // fold that row in and redo the cleaning.
        let mut offender = None;
        'scan: for i in t + 1..m.rows {
            for j in t + 1..m.cols {
                if !(&d[(i, j)] % &d[(t, t)]).is_zero() {
                    offender = Some(i);
                    break 'scan;
                }
            }
        }
        if let Some(i) = offender {
            let one = BigInt::one();
            d.add_row_multiple(t, i, &one);
            u.add_row_multiple(t, i, &one);
            continue;
        }
        t += 1;
    }
    for i in 0..n {
        if d[(i, i)].is_negative() {
            d.negate_row(i);
            u.negate_row(i);
        }
    }
    let uw = UnimodularWitness::new(u).expect("row operations preserve unimodularity");
    let vw = UnimodularWitness::new(v).expect("column operations preserve unimodularity");
    (d, uw, vw)
}

/// Basis of the integer kernel {x : Mx = 0}, primitive vectors with first
/// nonzero entry positive, ordered deterministically.
pub fn integer_kernel(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    let (d, _, vw) = snf(m);
    let v = &vw.transform;
    let nmin = m.rows.min(m.cols);
    let mut basis = Vec::new();
    for j in 0..m.cols {
        let free = j >= nmin || d[(j, j)].is_zero();
        if !free {
            continue;
        }
        let mut x = v.column(j);
        normalize_primitive(&mut x);
        basis.push(x);
    }
    basis
}

/// Divide out the gcd and make the first nonzero entry positive.
pub fn normalize_primitive(x: &mut [BigInt]) {
    let mut g = BigInt::zero();
    for e in x.iter() {
        g = g.gcd(e);
    }
    if g > BigInt::one() {
        for e in x.iter_mut() {
            *e /= &g;
        }
    }
    if let Some(first) = x.iter().find(|e| !e.is_zero()) {
        if first.is_negative() {
            for e in x.iter_mut() {
                *e = -e.clone();
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_i64_rows(rows)
    }

    #[test]
    fn det_diagonal_and_identity() {
        assert_eq!(det_exact(&m(&[&[2, 0], &[0, 3]])).unwrap(), BigInt::from(6));
        assert_eq!(det_exact(&IntMatrix::identity(5)).unwrap(), BigInt::one());
        assert_eq!(det_exact(&m(&[&[1, 2], &[3, 4]])).unwrap(), BigInt::from(-2));
    }

    #[test]
    fn det_rejects_non_square() {
        assert!(det_exact(&m(&[&[1, 2, 3]])).is_err());
    }

    #[test]
    fn det_multiplicative_under_unimodular() {
        let a = m(&[&[3, 1, 4], &[1, 5, 9], &[2, 6, 5]]);
        let u = m(&[&[1, 2, 0], &[0, 1, 0], &[3, 0, 1]]);
        let ua = u.mul(&a);
        assert_eq!(
            det_exact(&ua).unwrap(),
            det_exact(&u).unwrap() * det_exact(&a).unwrap()
        );
    }

    #[test]
    fn hnf_golden_cases() {
        let (h, w) = hnf(&IntMatrix::identity(3));
        assert_eq!(h, IntMatrix::identity(3));
        assert_eq!(w.transform, IntMatrix::identity(3));

        let (h, w) = hnf(&m(&[&[2, 4], &[6, 8]]));
        assert_eq!(h, m(&[&[2, 0], &[0, 4]]));
        assert_eq!(w.transform.mul(&m(&[&[2, 4], &[6, 8]])), h);

        let (h, _) = hnf(&m(&[&[0, 1], &[1, 0]]));
        assert_eq!(h, IntMatrix::identity(2));
    }

    #[test]
    fn hnf_idempotent() {
        let a = m(&[&[4, 7, 2], &[-3, 5, 11], &[0, 6, -2]]);
        let (h, _) = hnf(&a);
        let (h2, _) = hnf(&h);
        assert_eq!(h, h2);
    }

    #[test]
    fn snf_golden_cases() {
        let (d, _, _) = snf(&m(&[&[1, 0], &[0, 6]]));
        assert_eq!(d, m(&[&[1, 0], &[0, 6]]));

        let a = m(&[&[2, 4], &[6, 8]]);
        let (d, uw, vw) = snf(&a);
        assert_eq!(d, m(&[&[2, 0], &[0, 4]]));
        assert_eq!(uw.transform.mul(&a).mul(&vw.transform), d);

        let (d, _, _) = snf(&m(&[&[2, 0], &[0, 3]]));
        assert_eq!(d, m(&[&[1, 0], &[0, 6]]));
    }

    #[test]
    fn snf_diagonal_product_matches_det() {
        let a = m(&[&[3, 1, 4], &[1, 5, 9], &[2, 6, 5]]);
        let (d, _, _) = snf(&a);
        let prod: BigInt = (0..3).map(|i| d[(i, i)].clone()).product();
        assert_eq!(prod, det_exact(&a).unwrap().abs());
    }

    #[test]
    fn kernel_golden_cases() {
        let k = integer_kernel(&m(&[&[1, 1]]));
        assert_eq!(k, vec![vec![BigInt::from(1), BigInt::from(-1)]]);

        assert!(integer_kernel(&IntMatrix::identity(2)).is_empty());

        let k = integer_kernel(&m(&[&[2, 4]]));
        assert_eq!(k, vec![vec![BigInt::from(2), BigInt::from(-1)]]);
    }

    #[test]
    fn kernel_vectors_annihilate() {
        let a = m(&[&[2, 0, 1], &[0, 3, 3]]);
        let k = integer_kernel(&a);
        assert_eq!(k.len(), 1);
        for x in &k {
            assert!(a.mul_vec(x).iter().all(BigInt::is_zero));
        }
    }
}
