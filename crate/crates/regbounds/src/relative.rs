//! Relative units and relative regulators of an extension l/k of number
//! fields, from archimedean place data.
//!
//! The norm homomorphism on free unit quotients F_l → F_k is ingested as
//! an integer matrix; relative units are its integer kernel. The relative
//! regulator is |det M_{l/k}| over the archimedean places of l left after
//! selecting one place above each archimedean place of k, checked here to
//! be independent of that selection. The module verifies the fiberwise
//! norm identity, the regulator–index upper bound for subgroups of
//! relative units, and the index·Reg(k)·Reg(E) = Reg(l) identity relating
//! the three regulators.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::delta::{det_hp, RealMatrix};
use crate::error::{Error, Result};
use crate::exact::{det_exact, hnf, integer_kernel, rank, snf, IntMatrix};
use crate::hp::{Ctx, HPReal};
use crate::sunit::{BoundReport, BoundWitness, SUnitSystem, UnitRef};

/// Archimedean data for an extension l/k: the two unit systems, the
/// fiber map on places, the relative degree, and the norm map on free
/// unit quotients as an r(k)×r(l) integer matrix.
pub struct ExtensionData {
    k: SUnitSystem,
    l: SUnitSystem,
    relative_degree: u32,
    /// For each place of l (by index), the index of the place of k below it.
    fiber: Vec<usize>,
    norm_matrix: IntMatrix,
    declared_relative_units: Option<Vec<Vec<BigInt>>>,
}

impl ExtensionData {
    pub fn new(
        k: SUnitSystem,
        l: SUnitSystem,
        relative_degree: u32,
        fiber_map: &BTreeMap<String, String>,
        norm_matrix: IntMatrix,
        declared_relative_units: Option<Vec<Vec<BigInt>>>,
    ) -> Result<Self> {
        let schema = |message: String| Error::Schema {
            context: format!("extension {}/{}", l.label(), k.label()),
            message,
        };
        if !k.is_archimedean_only() || !l.is_archimedean_only() {
            return Err(Error::Unsupported(
                "relative regulators require archimedean place data only".into(),
            ));
        }
        if k.ctx().precision() != l.ctx().precision() {
            return Err(schema("k and l use different working precisions".into()));
        }
        if relative_degree == 0 {
            return Err(schema("relative degree must be positive".into()));
        }
        if l.degree() != relative_degree * k.degree() {
            return Err(schema(format!(
                "degree {} of l is not relative degree {} times degree {} of k",
                l.degree(),
                relative_degree,
                k.degree()
            )));
        }
        let mut fiber = Vec::with_capacity(l.places().len());
        for w in l.places() {
            let v_id = fiber_map
                .get(&w.id)
                .ok_or_else(|| Error::MissingData(format!("fiber entry for place `{}`", w.id)))?;
            let v = k
                .places()
                .iter()
                .position(|p| &p.id == v_id)
                .ok_or_else(|| schema(format!("fiber of `{}` names unknown place `{v_id}`", w.id)))?;
            fiber.push(v);
        }
        for extra in fiber_map.keys() {
            if !l.places().iter().any(|w| &w.id == extra) {
                return Err(schema(format!("fiber entry for unknown place `{extra}`")));
            }
        }
        for (v, p) in k.places().iter().enumerate() {
            let sum: u32 = l
                .places()
                .iter()
                .zip(&fiber)
                .filter(|(_, &below)| below == v)
                .map(|(w, _)| w.local_degree)
                .sum();
            if sum != relative_degree * p.local_degree {
                return Err(schema(format!(
                    "local degrees above `{}` sum to {sum}, expected {}",
                    p.id,
                    relative_degree * p.local_degree
                )));
            }
        }
        if norm_matrix.rows() != k.rank() || norm_matrix.cols() != l.rank() {
            return Err(schema(format!(
                "norm matrix is {}x{}, expected {}x{}",
                norm_matrix.rows(),
                norm_matrix.cols(),
                k.rank(),
                l.rank()
            )));
        }
        let norm_rank = rank(&norm_matrix);
        if norm_rank != k.rank() {
            return Err(Error::RankMismatch {
                expected: k.rank(),
                found: norm_rank,
            });
        }
        if l.rank() == k.rank() {
            return Err(Error::Unsupported(
                "relative unit rank is zero (CM-type extension)".into(),
            ));
        }
        Ok(ExtensionData {
            k,
            l,
            relative_degree,
            fiber,
            norm_matrix,
            declared_relative_units,
        })
    }

    pub fn k(&self) -> &SUnitSystem {
        &self.k
    }

    pub fn l(&self) -> &SUnitSystem {
        &self.l
    }

    pub fn relative_degree(&self) -> u32 {
        self.relative_degree
    }

    pub fn norm_matrix(&self) -> &IntMatrix {
        &self.norm_matrix
    }

    /// Rank r(l/k) = r(l) − r(k) of the relative unit group.
    pub fn relative_rank(&self) -> usize {
        self.l.rank() - self.k.rank()
    }

    fn ctx(&self) -> &Ctx {
        self.l.ctx()
    }

    /// Indices of the places of l above the k place with index `v`.
    fn places_above(&self, v: usize) -> Vec<usize> {
        self.fiber
            .iter()
            .enumerate()
            .filter(|(_, &below)| below == v)
            .map(|(w, _)| w)
            .collect()
    }

    /// All admissible selections of one place of l above each place of k,
    /// as vectors of l place indices parallel to the k places.
    fn all_selections(&self) -> Vec<Vec<usize>> {
        let fibers: Vec<Vec<usize>> = (0..self.k.places().len())
            .map(|v| self.places_above(v))
            .collect();
        let mut out = vec![Vec::new()];
        for fiber in &fibers {
            let mut next = Vec::with_capacity(out.len() * fiber.len());
            for partial in &out {
                for &w in fiber {
                    let mut grown = partial.clone();
                    grown.push(w);
                    next.push(grown);
                }
            }
            out = next;
        }
        out
    }

    fn resolve_selection(&self, selection: Option<&BTreeMap<String, String>>) -> Result<Vec<usize>> {
        match selection {
            None => Ok((0..self.k.places().len())
                .map(|v| self.places_above(v)[0])
                .collect()),
            Some(map) => {
                let mut chosen = Vec::with_capacity(self.k.places().len());
                for (v, p) in self.k.places().iter().enumerate() {
                    let w_id = map.get(&p.id).ok_or_else(|| {
                        Error::MissingData(format!("selection entry for place `{}`", p.id))
                    })?;
                    let w = self
                        .l
                        .places()
                        .iter()
                        .position(|q| &q.id == w_id)
                        .ok_or_else(|| Error::Schema {
                            context: "selection".into(),
                            message: format!("unknown place `{w_id}`"),
                        })?;
                    if self.fiber[w] != v {
                        return Err(Error::Schema {
                            context: "selection".into(),
                            message: format!("place `{w_id}` does not lie above `{}`", p.id),
                        });
                    }
                    chosen.push(w);
                }
                Ok(chosen)
            }
        }
    }

    /// The matrix (d_w·row_j[w]) over the places of l not in `selected`,
    /// columns indexed by the given log rows.
    fn dropped_row_matrix(&self, rows: &[Vec<HPReal>], selected: &[usize]) -> RealMatrix {
        let ctx = self.ctx();
        let cols = rows.len();
        let keep: Vec<usize> = (0..self.l.places().len())
            .filter(|w| !selected.contains(w))
            .collect();
        let mut data = Vec::with_capacity(keep.len() * cols);
        for &w in &keep {
            let dw = ctx.from_i64(i64::from(self.l.places()[w].local_degree));
            for row in rows {
                data.push(ctx.mul(&dw, &row[w]));
            }
        }
        RealMatrix::new(keep.len(), cols, data).expect("non-selected rows form a matrix")
    }

    /// Enforces the fiberwise consequence of the norm identity for a
    /// relative unit: Σ_{w|v} d_w·log‖η‖_w = 0 within τ at every v.
    fn check_fiber_sums(&self, name: &str, row: &[HPReal]) -> Result<()> {
        let ctx = self.ctx();
        for (v, p) in self.k.places().iter().enumerate() {
            let sum = ctx.sum(
                &self
                    .places_above(v)
                    .iter()
                    .map(|&w| {
                        ctx.mul(
                            &ctx.from_i64(i64::from(self.l.places()[w].local_degree)),
                            &row[w],
                        )
                    })
                    .collect::<Vec<_>>(),
            );
            if !ctx.is_zero_tau(&sum) {
                return Err(Error::Schema {
                    context: format!("relative unit `{name}`"),
                    message: format!(
                        "log sums above `{}` give {}, expected 0",
                        p.id,
                        ctx.format_sig(&sum, 6)
                    ),
                });
            }
        }
        Ok(())
    }
}

/// A basis (or at least an independent full-rank family) of relative
/// units, as exponent vectors in F_l coordinates with their derived log
/// rows. `certified` records that the vectors form a kernel basis.
pub struct RelativeUnitBasis {
    exponents: Vec<Vec<BigInt>>,
    log_rows: Vec<Vec<HPReal>>,
    certified: bool,
}

impl RelativeUnitBasis {
    /// Builds a family from explicit exponent vectors: each must lie in
    /// the kernel of the norm matrix, be independent, and number
    /// r(l/k). The family need not generate the full kernel.
    pub fn from_exponents(ext: &ExtensionData, vectors: Vec<Vec<BigInt>>) -> Result<Self> {
        if vectors.len() != ext.relative_rank() {
            return Err(Error::RankMismatch {
                expected: ext.relative_rank(),
                found: vectors.len(),
            });
        }
        for x in &vectors {
            if x.len() != ext.l.rank() {
                return Err(Error::RankMismatch {
                    expected: ext.l.rank(),
                    found: x.len(),
                });
            }
            if !ext.norm_matrix.mul_vec(x).iter().all(Zero::is_zero) {
                return Err(Error::Schema {
                    context: "relative units".into(),
                    message: format!("exponent vector {x:?} is not annihilated by the norm matrix"),
                });
            }
        }
        let cols = IntMatrix::from_rows(vectors.clone())?.transpose();
        if rank(&cols) != vectors.len() {
            return Err(Error::Dependent("relative units".into()));
        }
        let mut log_rows = Vec::with_capacity(vectors.len());
        for (j, x) in vectors.iter().enumerate() {
            let row = ext.l.log_row(&UnitRef::Exponents(x))?;
            ext.check_fiber_sums(&format!("eta{}", j + 1), &row)?;
            log_rows.push(row);
        }
        Ok(RelativeUnitBasis {
            exponents: vectors,
            log_rows,
            certified: false,
        })
    }

    pub fn rank(&self) -> usize {
        self.exponents.len()
    }

    pub fn exponents(&self) -> &[Vec<BigInt>] {
        &self.exponents
    }

    pub fn log_rows(&self) -> &[Vec<HPReal>] {
        &self.log_rows
    }

    pub fn certified(&self) -> bool {
        self.certified
    }
}

/// Coordinates of `target` in the row lattice spanned by `basis` (full
/// row rank), or None if it is not an integer combination.
fn coordinates_in_row_lattice(basis: &IntMatrix, target: &[BigInt]) -> Option<Vec<BigInt>> {
    let (h, u) = hnf(basis);
    let mut residue = target.to_vec();
    let mut h_coords = vec![BigInt::zero(); h.rows()];
    for i in 0..h.rows() {
        let pivot_col = (0..h.cols()).find(|&j| !h[(i, j)].is_zero())?;
        let (q, r) = num_integer::Integer::div_rem(&residue[pivot_col], &h[(i, pivot_col)]);
        if !r.is_zero() {
            return None;
        }
        for j in 0..h.cols() {
            residue[j] -= &q * &h[(i, j)];
        }
        h_coords[i] = q;
    }
    if !residue.iter().all(Zero::is_zero) {
        return None;
    }
    let coords = (0..u.transform.cols())
        .map(|j| {
            (0..u.transform.rows())
                .map(|i| &h_coords[i] * &u.transform[(i, j)])
                .sum::<BigInt>()
        })
        .collect();
    Some(coords)
}

/// Kernel basis of the norm matrix as a certified `RelativeUnitBasis`.
///
/// The kernel is computed by Smith reduction; its size must equal
/// r(l) − r(k). When the extension declares relative units, they are
/// verified to lie in the kernel and to span it (unimodular coordinate
/// change) and are returned in declared order.
pub fn relative_unit_kernel(ext: &ExtensionData) -> Result<RelativeUnitBasis> {
    let kernel = integer_kernel(&ext.norm_matrix);
    if kernel.len() != ext.relative_rank() {
        return Err(Error::RankMismatch {
            expected: ext.relative_rank(),
            found: kernel.len(),
        });
    }
    for x in &kernel {
        assert!(
            ext.norm_matrix.mul_vec(x).iter().all(Zero::is_zero),
            "kernel vector is not annihilated exactly"
        );
    }
    let chosen = match &ext.declared_relative_units {
        None => kernel,
        Some(declared) => {
            if declared.len() != kernel.len() {
                return Err(Error::RankMismatch {
                    expected: kernel.len(),
                    found: declared.len(),
                });
            }
            let kernel_rows = IntMatrix::from_rows(kernel)?;
            let mut coord_rows = Vec::with_capacity(declared.len());
            for x in declared {
                let coords = coordinates_in_row_lattice(&kernel_rows, x).ok_or_else(|| {
                    Error::Schema {
                        context: "relative units".into(),
                        message: format!("declared vector {x:?} is not in the norm-matrix kernel"),
                    }
                })?;
                coord_rows.push(coords);
            }
            let change = IntMatrix::from_rows(coord_rows)?;
            if !det_exact(&change)?.abs().is_one() {
                return Err(Error::Schema {
                    context: "relative units".into(),
                    message: "declared vectors do not form a kernel basis".into(),
                });
            }
            declared.clone()
        }
    };
    let mut basis = RelativeUnitBasis::from_exponents(ext, chosen)?;
    basis.certified = true;
    Ok(basis)
}

/// Relative regulator |det M_{l/k}|: rows are the archimedean places of
/// l left after removing one selected place above each place of k,
/// entries d_w·log‖ηⱼ‖_w. Recomputed for every admissible selection and
/// asserted equal within τ; the requested (or default first-in-fiber)
/// selection provides the returned value.
pub fn relative_regulator(
    ext: &ExtensionData,
    e: &RelativeUnitBasis,
    selection: Option<&BTreeMap<String, String>>,
) -> Result<HPReal> {
    let ctx = ext.ctx();
    if e.rank() != ext.relative_rank() {
        return Err(Error::RankMismatch {
            expected: ext.relative_rank(),
            found: e.rank(),
        });
    }
    let requested = ext.resolve_selection(selection)?;
    let value = ctx.abs(&det_hp(ctx, &ext.dropped_row_matrix(e.log_rows(), &requested))?);
    for candidate in ext.all_selections() {
        let det = ctx.abs(&det_hp(ctx, &ext.dropped_row_matrix(e.log_rows(), &candidate))?);
        assert!(
            ctx.eq_tau(&value, &det),
            "relative regulator depends on the selected places beyond tolerance"
        );
    }
    Ok(value)
}

/// Upper bound for a finite-index subgroup 𝔈 = ⟨ε₁,…,ε_{r(l/k)}⟩ of the
/// relative units: Reg(E)·|det C| ≤ ∏ⱼ [l:Q]·h(εⱼ) + τ, where column j
/// of C holds the exponents of εⱼ in the given relative unit basis. The
/// left side is also evaluated directly as the dropped-row determinant
/// of the ε log rows and cross-checked within τ.
pub fn check_relative_upper_bound(
    ext: &ExtensionData,
    e: &RelativeUnitBasis,
    c: &IntMatrix,
) -> Result<BoundReport> {
    let ctx = ext.ctx();
    let rk = ext.relative_rank();
    if c.rows() != rk || c.cols() != rk {
        return Err(Error::RankMismatch {
            expected: rk,
            found: c.rows().max(c.cols()),
        });
    }
    let det_c = det_exact(c)?;
    if det_c.is_zero() {
        return Err(Error::Dependent("relative generators".into()));
    }
    let degree = ctx.from_i64(i64::from(ext.l.degree()));
    let mut witnesses = Vec::with_capacity(rk);
    let mut eps_rows = Vec::with_capacity(rk);
    for j in 0..rk {
        let col = c.column(j);
        let mut fl_exponents = vec![BigInt::zero(); ext.l.rank()];
        for (i, coeff) in col.iter().enumerate() {
            for (t, x) in e.exponents()[i].iter().enumerate() {
                fl_exponents[t] += coeff * x;
            }
        }
        let row = ext.l.log_row(&UnitRef::Exponents(&fl_exponents))?;
        let height = ext.l.height_of_log_row(&row);
        eps_rows.push(row);
        witnesses.push(BoundWitness {
            name: format!("eps{}", j + 1),
            generator_exponents: col,
            basis_exponents: fl_exponents,
            scaled_height: ctx.mul(&degree, &height),
            height,
        });
    }
    let rhs = ctx.product(witnesses.iter().map(|w| &w.scaled_height));
    let reg_e = relative_regulator(ext, e, None)?;
    let lhs = ctx.mul(&reg_e, &ctx.from_bigint(&det_c.abs()));
    let selected = ext.resolve_selection(None)?;
    let direct = ctx.abs(&det_hp(ctx, &ext.dropped_row_matrix(&eps_rows, &selected))?);
    assert!(
        ctx.eq_tau(&lhs, &direct),
        "Reg(E)·index disagrees with the direct determinant beyond tolerance"
    );
    Ok(BoundReport {
        check: "relative_upper_bound",
        pass: ctx.le_tau(&lhs, &rhs),
        lhs,
        rhs,
        constant: BigRational::one(),
        witnesses,
        witness_det: Some(det_c),
        floor: None,
    })
}

/// Outcome of the regulator identity index·Reg(k)·Reg(E) = Reg(l).
#[derive(Debug, Clone)]
pub struct RegulatorIdentityReport {
    pub image_index: BigInt,
    pub reg_k: HPReal,
    pub reg_e: HPReal,
    pub reg_l: HPReal,
    pub lhs: HPReal,
    pub holds: bool,
}

/// Checks [F_k : I_{l/k}]·Reg(k)·Reg(E) = Reg(l) within τ. The image
/// index is the product of the elementary divisors of the norm matrix,
/// computed exactly by Smith reduction.
pub fn costa_friedman_check(ext: &ExtensionData, e: &RelativeUnitBasis) -> Result<RegulatorIdentityReport> {
    let ctx = ext.ctx();
    let reg_k = ext.k.regulator(None)?;
    let reg_l = ext.l.regulator(None)?;
    let reg_e = relative_regulator(ext, e, None)?;
    let (d, _, _) = snf(&ext.norm_matrix);
    let mut image_index = BigInt::one();
    for i in 0..ext.k.rank() {
        let divisor = &d[(i, i)];
        assert!(!divisor.is_zero(), "full row rank was checked at ingestion");
        image_index *= divisor;
    }
    let lhs = ctx.mul(&ctx.from_bigint(&image_index), &ctx.mul(&reg_k, &reg_e));
    Ok(RegulatorIdentityReport {
        holds: ctx.eq_tau(&lhs, &reg_l),
        image_index,
        reg_k,
        reg_e,
        reg_l,
        lhs,
    })
}

/// One norm-identity check: an element of l (a stored unit, or explicit
/// log data for elements that are not S-units) together with the log
/// data of its norm in k.
#[derive(Debug, Clone)]
pub struct NormCheck {
    pub name: String,
    /// log‖u‖_w per place of l; None means `name` refers to a stored unit.
    pub element_logs: Option<BTreeMap<String, String>>,
    /// log‖Norm(u)‖_v per place of k.
    pub norm_logs: BTreeMap<String, String>,
}

/// Outcome of a norm-identity check, with the largest residual over the
/// places of k.
#[derive(Debug, Clone)]
pub struct NormIdentityReport {
    pub name: String,
    pub holds: bool,
    pub max_residual: HPReal,
}

/// Verifies [l:k]·Σ_{w|v} log|u|_w = log|Norm(u)|_v within τ at every
/// place v of k, using the normalized absolute values of l on the left
/// and of k on the right.
pub fn check_norm_identity(ext: &ExtensionData, check: &NormCheck) -> Result<NormIdentityReport> {
    let ctx = ext.ctx();
    let row = match &check.element_logs {
        Some(map) => {
            let known: BTreeSet<&String> = ext.l.places().iter().map(|p| &p.id).collect();
            for id in map.keys() {
                if !known.contains(id) {
                    return Err(Error::Schema {
                        context: format!("norm check `{}`", check.name),
                        message: format!("log entry for unknown place `{id}`"),
                    });
                }
            }
            ext.l
                .places()
                .iter()
                .map(|p| match map.get(&p.id) {
                    Some(s) => ctx.parse(s),
                    None => Err(Error::MissingData(format!(
                        "log value at place `{}` for `{}`",
                        p.id, check.name
                    ))),
                })
                .collect::<Result<Vec<_>>>()?
        }
        None => ext.l.log_row(&UnitRef::Name(&check.name))?,
    };
    let l_degree = ctx.from_i64(i64::from(ext.l.degree()));
    let k_degree = ctx.from_i64(i64::from(ext.k.degree()));
    let rel_degree = ctx.from_i64(i64::from(ext.relative_degree));
    let mut holds = true;
    let mut max_residual = ctx.zero();
    for (v, p) in ext.k.places().iter().enumerate() {
        let norm_log = check.norm_logs.get(&p.id).ok_or_else(|| {
            Error::MissingData(format!(
                "norm log at place `{}` for `{}`",
                p.id, check.name
            ))
        })?;
        let lhs_sum = ctx.sum(
            &ext.places_above(v)
                .iter()
                .map(|&w| {
                    let dw = ctx.from_i64(i64::from(ext.l.places()[w].local_degree));
                    ctx.div(&ctx.mul(&dw, &row[w]), &l_degree)
                })
                .collect::<Vec<_>>(),
        );
        let lhs = ctx.mul(&rel_degree, &lhs_sum);
        let dv = ctx.from_i64(i64::from(p.local_degree));
        let rhs = ctx.div(&ctx.mul(&dv, &ctx.parse(norm_log)?), &k_degree);
        let residual = ctx.abs(&ctx.sub(&lhs, &rhs));
        if ctx.cmp(&residual, &max_residual) == std::cmp::Ordering::Greater {
            max_residual = residual;
        }
        if !ctx.eq_tau(&lhs, &rhs) {
            holds = false;
        }
    }
    Ok(NormIdentityReport {
        name: check.name.clone(),
        holds,
        max_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hp::DEFAULT_PRECISION;
    use crate::sunit::{Place, PlaceKind, UnitData, UnitInput};

    const LOG_2: &str = "0.693147180559945309417232121458176568075500";
    const TWO_LOG_2: &str = "1.386294361119890618834464242916353136151000";
    const LOG_SQRT2: &str = "0.346573590279972654708616060729088284037750";
    const LOG_1P_SQRT2: &str = "0.881373587019543025232609324979792309028160";
    const LOG_GOLDEN: &str = "0.481211825059603447497758913424368423135184";
    const LOG_3P_SQRT10: &str = "1.81844645923206682348369896356070899378625";
    const TWO_AC: &str = "3.20546135715270789334888991533712274424466";
    const FOUR_ABC: &str = "3.08501181966697583351494227174261555228028";
    const EPS: &str = "1e-32";

    fn ctx() -> Ctx {
        Ctx::new(DEFAULT_PRECISION)
    }

    fn assert_close(ctx: &Ctx, value: &HPReal, frozen: &str) {
        let target = ctx.parse(frozen).unwrap();
        let eps = ctx.parse(EPS).unwrap();
        let diff = ctx.abs(&ctx.sub(value, &target));
        assert!(
            ctx.cmp(&diff, &eps) != std::cmp::Ordering::Greater,
            "value {} differs from {} by {}",
            ctx.format_sig(value, 40),
            frozen,
            ctx.format_sig(&diff, 6)
        );
    }

    fn real_place(id: &str) -> Place {
        Place {
            id: id.into(),
            local_degree: 1,
            kind: PlaceKind::Archimedean,
        }
    }

    fn sign_row(log: &str, signs: &[i8]) -> BTreeMap<String, String> {
        signs
            .iter()
            .enumerate()
            .map(|(i, &s)| {
                let value = if s >= 0 {
                    log.to_string()
                } else {
                    format!("-{log}")
                };
                (format!("w{}", i + 1), value)
            })
            .collect()
    }

    fn rational_field() -> SUnitSystem {
        SUnitSystem::new(ctx(), "Q", 1, vec![real_place("v")], Vec::new(), &[]).unwrap()
    }

    fn sqrt2_field() -> SUnitSystem {
        let places = vec![real_place("w1"), real_place("w2")];
        let units = vec![UnitInput {
            name: "u".into(),
            data: UnitData::Logs(sign_row(LOG_1P_SQRT2, &[1, -1])),
        }];
        SUnitSystem::new(ctx(), "Q(sqrt2)", 2, places, units, &["u".to_string()]).unwrap()
    }

    fn sqrt2_extension() -> ExtensionData {
        let fiber = BTreeMap::from([
            ("w1".to_string(), "v".to_string()),
            ("w2".to_string(), "v".to_string()),
        ]);
        ExtensionData::new(
            rational_field(),
            sqrt2_field(),
            2,
            &fiber,
            IntMatrix::zero(0, 1),
            None,
        )
        .unwrap()
    }

    fn sqrt5_field() -> SUnitSystem {
        let places = vec![real_place("v1"), real_place("v2")];
        let units = vec![UnitInput {
            name: "e5k".into(),
            data: UnitData::Logs(BTreeMap::from([
                ("v1".to_string(), LOG_GOLDEN.to_string()),
                ("v2".to_string(), format!("-{LOG_GOLDEN}")),
            ])),
        }];
        SUnitSystem::new(ctx(), "Q(sqrt5)", 2, places, units, &["e5k".to_string()]).unwrap()
    }

    fn biquadratic_field() -> SUnitSystem {
        let places = vec![
            real_place("w1"),
            real_place("w2"),
            real_place("w3"),
            real_place("w4"),
        ];
        let units = vec![
            UnitInput {
                name: "e2".into(),
                data: UnitData::Logs(sign_row(LOG_1P_SQRT2, &[1, 1, -1, -1])),
            },
            UnitInput {
                name: "e5".into(),
                data: UnitData::Logs(sign_row(LOG_GOLDEN, &[1, -1, 1, -1])),
            },
            UnitInput {
                name: "e10".into(),
                data: UnitData::Logs(sign_row(LOG_3P_SQRT10, &[1, -1, -1, 1])),
            },
        ];
        SUnitSystem::new(
            ctx(),
            "Q(sqrt2,sqrt5)",
            4,
            places,
            units,
            &["e2".to_string(), "e5".to_string(), "e10".to_string()],
        )
        .unwrap()
    }

    fn biquadratic_extension(declared: Option<Vec<Vec<BigInt>>>) -> Result<ExtensionData> {
        let fiber = BTreeMap::from([
            ("w1".to_string(), "v1".to_string()),
            ("w2".to_string(), "v2".to_string()),
            ("w3".to_string(), "v1".to_string()),
            ("w4".to_string(), "v2".to_string()),
        ]);
        ExtensionData::new(
            sqrt5_field(),
            biquadratic_field(),
            2,
            &fiber,
            IntMatrix::from_i64_rows(&[&[0, 2, 0]]),
            declared,
        )
    }

    fn ints(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn kernel_of_trivial_norm_is_everything() {
        let ext = sqrt2_extension();
        let e = relative_unit_kernel(&ext).unwrap();
        assert!(e.certified());
        assert_eq!(e.exponents(), &[ints(&[1])]);
    }

    #[test]
    fn kernel_of_synthetic_norm_matrix() {
        let m = IntMatrix::from_i64_rows(&[&[2, 0, 1]]);
        assert_eq!(integer_kernel(&m), vec![ints(&[0, 1, 0]), ints(&[1, 0, -2])]);
    }

    #[test]
    fn kernel_of_biquadratic_extension() {
        let ext = biquadratic_extension(None).unwrap();
        let e = relative_unit_kernel(&ext).unwrap();
        assert_eq!(e.exponents(), &[ints(&[1, 0, 0]), ints(&[0, 0, 1])]);
    }

    #[test]
    fn declared_units_are_verified_and_used() {
        let declared = vec![ints(&[0, 0, 1]), ints(&[1, 0, 0])];
        let ext = biquadratic_extension(Some(declared.clone())).unwrap();
        let e = relative_unit_kernel(&ext).unwrap();
        assert!(e.certified());
        assert_eq!(e.exponents(), declared.as_slice());
    }

    #[test]
    fn declared_units_outside_kernel_are_rejected() {
        let ext = biquadratic_extension(Some(vec![ints(&[0, 1, 0]), ints(&[1, 0, 0])])).unwrap();
        assert!(matches!(
            relative_unit_kernel(&ext),
            Err(Error::Schema { .. })
        ));
    }

    #[test]
    fn declared_sublattice_is_rejected() {
        let ext = biquadratic_extension(Some(vec![ints(&[2, 0, 0]), ints(&[0, 0, 1])])).unwrap();
        assert!(matches!(
            relative_unit_kernel(&ext),
            Err(Error::Schema { .. })
        ));
    }

    #[test]
    fn cm_type_extension_is_rejected() {
        let places = vec![Place {
            id: "w".into(),
            local_degree: 2,
            kind: PlaceKind::Archimedean,
        }];
        let l = SUnitSystem::new(ctx(), "Q(i)", 2, places, Vec::new(), &[]).unwrap();
        let fiber = BTreeMap::from([("w".to_string(), "v".to_string())]);
        let err = ExtensionData::new(rational_field(), l, 2, &fiber, IntMatrix::zero(0, 0), None);
        assert!(matches!(err, Err(Error::Unsupported(_))));
    }

    #[test]
    fn degree_mismatch_is_rejected() {
        let fiber = BTreeMap::from([
            ("w1".to_string(), "v".to_string()),
            ("w2".to_string(), "v".to_string()),
        ]);
        let err = ExtensionData::new(
            rational_field(),
            sqrt2_field(),
            3,
            &fiber,
            IntMatrix::zero(0, 1),
            None,
        );
        assert!(matches!(err, Err(Error::Schema { .. })));
    }

    #[test]
    fn missing_fiber_entry_is_rejected() {
        let fiber = BTreeMap::from([("w1".to_string(), "v".to_string())]);
        let err = ExtensionData::new(
            rational_field(),
            sqrt2_field(),
            2,
            &fiber,
            IntMatrix::zero(0, 1),
            None,
        );
        assert!(matches!(err, Err(Error::MissingData(_))));
    }

    #[test]
    fn rank_deficient_norm_matrix_is_rejected() {
        let fiber = BTreeMap::from([
            ("w1".to_string(), "v1".to_string()),
            ("w2".to_string(), "v2".to_string()),
            ("w3".to_string(), "v1".to_string()),
            ("w4".to_string(), "v2".to_string()),
        ]);
        let err = ExtensionData::new(
            sqrt5_field(),
            biquadratic_field(),
            2,
            &fiber,
            IntMatrix::zero(1, 3),
            None,
        );
        assert!(matches!(err, Err(Error::RankMismatch { expected: 1, found: 0 })));
    }

    #[test]
    fn relative_regulator_of_sqrt2() {
        let ext = sqrt2_extension();
        let e = relative_unit_kernel(&ext).unwrap();
        let reg = relative_regulator(&ext, &e, None).unwrap();
        assert_close(ext.l().ctx(), &reg, LOG_1P_SQRT2);
        let alternate = BTreeMap::from([("v".to_string(), "w2".to_string())]);
        let reg2 = relative_regulator(&ext, &e, Some(&alternate)).unwrap();
        assert!(ext.l().ctx().eq_tau(&reg, &reg2));
    }

    #[test]
    fn doubling_the_unit_doubles_the_regulator() {
        let ext = sqrt2_extension();
        let e = RelativeUnitBasis::from_exponents(&ext, vec![ints(&[2])]).unwrap();
        assert!(!e.certified());
        let reg = relative_regulator(&ext, &e, None).unwrap();
        let ctx = ext.l().ctx();
        let expected = ctx.mul(&ctx.from_i64(2), &ctx.parse(LOG_1P_SQRT2).unwrap());
        assert!(ctx.eq_tau(&reg, &expected));
    }

    #[test]
    fn relative_regulator_of_biquadratic() {
        let ext = biquadratic_extension(None).unwrap();
        let e = relative_unit_kernel(&ext).unwrap();
        let reg = relative_regulator(&ext, &e, None).unwrap();
        assert_close(ext.l().ctx(), &reg, TWO_AC);
    }

    #[test]
    fn relative_upper_bound_equality() {
        let ext = sqrt2_extension();
        let e = relative_unit_kernel(&ext).unwrap();
        let report = check_relative_upper_bound(&ext, &e, &IntMatrix::identity(1)).unwrap();
        assert!(report.pass);
        assert_close(ext.l().ctx(), &report.lhs, LOG_1P_SQRT2);
        assert_close(ext.l().ctx(), &report.rhs, LOG_1P_SQRT2);
    }

    #[test]
    fn relative_upper_bound_for_squared_generator() {
        let ext = sqrt2_extension();
        let e = relative_unit_kernel(&ext).unwrap();
        let c = IntMatrix::from_i64_rows(&[&[2]]);
        let report = check_relative_upper_bound(&ext, &e, &c).unwrap();
        assert!(report.pass);
        let ctx = ext.l().ctx();
        let expected = ctx.mul(&ctx.from_i64(2), &ctx.parse(LOG_1P_SQRT2).unwrap());
        assert!(ctx.eq_tau(&report.lhs, &expected));
        assert!(ctx.eq_tau(&report.rhs, &expected));
    }

    #[test]
    fn relative_upper_bound_on_biquadratic() {
        let ext = biquadratic_extension(None).unwrap();
        let e = relative_unit_kernel(&ext).unwrap();
        let report = check_relative_upper_bound(&ext, &e, &IntMatrix::identity(2)).unwrap();
        assert!(report.pass);
        let ctx = ext.l().ctx();
        assert_close(ctx, &report.lhs, TWO_AC);
        let a = ctx.parse(LOG_1P_SQRT2).unwrap();
        let c = ctx.parse(LOG_3P_SQRT10).unwrap();
        let expected_rhs = ctx.mul(&ctx.from_i64(4), &ctx.mul(&a, &c));
        assert!(ctx.eq_tau(&report.rhs, &expected_rhs));
        assert_eq!(report.witnesses[0].name, "eps1");
        assert_eq!(report.witnesses[0].basis_exponents, ints(&[1, 0, 0]));
    }

    #[test]
    fn dependent_relative_generators_are_rejected() {
        let ext = biquadratic_extension(None).unwrap();
        let e = relative_unit_kernel(&ext).unwrap();
        let c = IntMatrix::from_i64_rows(&[&[1, 1], &[1, 1]]);
        assert!(matches!(
            check_relative_upper_bound(&ext, &e, &c),
            Err(Error::Dependent(_))
        ));
    }

    #[test]
    fn regulator_identity_on_sqrt2() {
        let ext = sqrt2_extension();
        let e = relative_unit_kernel(&ext).unwrap();
        let report = costa_friedman_check(&ext, &e).unwrap();
        assert!(report.holds);
        assert_eq!(report.image_index, BigInt::one());
        assert_close(ext.l().ctx(), &report.reg_l, LOG_1P_SQRT2);
    }

    #[test]
    fn regulator_identity_on_biquadratic() {
        let ext = biquadratic_extension(None).unwrap();
        let e = relative_unit_kernel(&ext).unwrap();
        let report = costa_friedman_check(&ext, &e).unwrap();
        assert!(report.holds);
        assert_eq!(report.image_index, BigInt::from(2));
        assert_close(ext.l().ctx(), &report.reg_l, FOUR_ABC);
        assert_close(ext.l().ctx(), &report.lhs, FOUR_ABC);
    }

    #[test]
    fn norm_identity_for_stored_unit() {
        let ext = sqrt2_extension();
        let check = NormCheck {
            name: "u".into(),
            element_logs: None,
            norm_logs: BTreeMap::from([("v".to_string(), "0".to_string())]),
        };
        let report = check_norm_identity(&ext, &check).unwrap();
        assert!(report.holds);
    }

    #[test]
    fn norm_identity_for_explicit_element() {
        let ext = sqrt2_extension();
        let check = NormCheck {
            name: "sqrt2".into(),
            element_logs: Some(BTreeMap::from([
                ("w1".to_string(), LOG_SQRT2.to_string()),
                ("w2".to_string(), LOG_SQRT2.to_string()),
            ])),
            norm_logs: BTreeMap::from([("v".to_string(), LOG_2.to_string())]),
        };
        let report = check_norm_identity(&ext, &check).unwrap();
        assert!(report.holds);
    }

    #[test]
    fn norm_identity_for_rational_element() {
        let ext = sqrt2_extension();
        let check = NormCheck {
            name: "2".into(),
            element_logs: Some(BTreeMap::from([
                ("w1".to_string(), LOG_2.to_string()),
                ("w2".to_string(), LOG_2.to_string()),
            ])),
            norm_logs: BTreeMap::from([("v".to_string(), TWO_LOG_2.to_string())]),
        };
        let report = check_norm_identity(&ext, &check).unwrap();
        assert!(report.holds);
    }

    #[test]
    fn norm_identity_detects_wrong_data() {
        let ext = sqrt2_extension();
        let check = NormCheck {
            name: "u".into(),
            element_logs: None,
            norm_logs: BTreeMap::from([("v".to_string(), "0.25".to_string())]),
        };
        let report = check_norm_identity(&ext, &check).unwrap();
        assert!(!report.holds);
    }

    #[test]
    fn norm_identity_on_biquadratic_units() {
        let ext = biquadratic_extension(None).unwrap();
        let zero_norms = BTreeMap::from([
            ("v1".to_string(), "0".to_string()),
            ("v2".to_string(), "0".to_string()),
        ]);
        for unit in ["e2", "e10"] {
            let report = check_norm_identity(
                &ext,
                &NormCheck {
                    name: unit.into(),
                    element_logs: None,
                    norm_logs: zero_norms.clone(),
                },
            )
            .unwrap();
            assert!(report.holds, "norm of {unit} is torsion");
        }
        let golden_sq = NormCheck {
            name: "e5".into(),
            element_logs: None,
            norm_logs: BTreeMap::from([
                ("v1".to_string(), format!("{}", "0.962423650119206894995517826848736846270368")),
                ("v2".to_string(), "-0.962423650119206894995517826848736846270368".to_string()),
            ]),
        };
        let report = check_norm_identity(&ext, &golden_sq).unwrap();
        assert!(report.holds);
    }
}
