//! S-unit systems over a number field: places with local degrees, Weil
//! heights, S-regulators, subgroup indices, and the three bound checks
//! (regulator–index upper bound, constructive minima reduction, small
//! basis extraction).
//!
//! A system carries log‖u‖_v data per unit and place, validated against
//! the product formula at ingestion. Heights use the normalized absolute
//! values |·|_v = ‖·‖_v^{d_v/d}, so h(u) = Σ_v log⁺|u|_v, and the
//! regulator is |det M^(v̂)| for the basis log-matrix with any one row
//! removed. Rational S-units over Q may be given as signed prime
//! factorizations; their logs are synthesized at working precision, which
//! keeps equality cases reproducible to full precision.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::delta::{det_hp, factorial, RealMatrix};
use crate::error::{Error, Result};
use crate::exact::{det_exact, IntMatrix, UnimodularWitness};
use crate::hp::{Ctx, HPReal};
use crate::lattice::{
    mahler_weyl_basis, minima_product_constant, successive_minima_delta, LatticeInstance,
};

/// Whether a place is archimedean. Informational for the arithmetic (only
/// the local degree enters formulas) but required for the regulator floor
/// report, which applies to archimedean-only systems.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlaceKind {
    Archimedean,
    NonArchimedean,
}

/// A place v of the field with its local degree d_v = [k_v : Q_v].
#[derive(Debug, Clone)]
pub struct Place {
    pub id: String,
    pub local_degree: u32,
    pub kind: PlaceKind,
}

/// Log data for one S-unit as supplied by the caller.
#[derive(Debug, Clone)]
pub enum UnitData {
    /// Explicit log‖u‖_v per place id, as decimal strings.
    Logs(BTreeMap<String, String>),
    /// Signed prime factorization ±∏ p^e of a rational S-unit; only valid
    /// for degree-1 systems. The sign is torsion and does not affect logs.
    Rational { factors: BTreeMap<u64, i64>, sign: i64 },
}

/// A named unit together with its log data.
#[derive(Debug, Clone)]
pub struct UnitInput {
    pub name: String,
    pub data: UnitData,
}

/// Reference to a multiplicative element of the system: a named unit or
/// an integer exponent vector with respect to the declared basis.
#[derive(Debug, Clone, Copy)]
pub enum UnitRef<'a> {
    Name(&'a str),
    Exponents(&'a [BigInt]),
}

/// Immutable S-unit data for one field: degree d = [k:Q], the r+1 places
/// of S, named unit log rows, and a declared basis of the free S-unit
/// group. Every ingested unit satisfies the product formula
/// Σ_v d_v·log‖u‖_v = 0 within τ, and the basis log-matrix is checked to
/// be nonsingular.
pub struct SUnitSystem {
    ctx: Ctx,
    label: String,
    degree: u32,
    places: Vec<Place>,
    unit_names: Vec<String>,
    unit_logs: Vec<Vec<HPReal>>,
    basis: Vec<usize>,
}

impl SUnitSystem {
    pub fn new(
        ctx: Ctx,
        label: &str,
        degree: u32,
        places: Vec<Place>,
        units: Vec<UnitInput>,
        basis: &[String],
    ) -> Result<Self> {
        let schema = |message: String| Error::Schema {
            context: label.to_string(),
            message,
        };
        if degree == 0 {
            return Err(schema("degree must be positive".into()));
        }
        if places.is_empty() {
            return Err(Error::Empty("place list"));
        }
        let mut seen = BTreeSet::new();
        for p in &places {
            if p.local_degree == 0 {
                return Err(schema(format!("place `{}` has local degree 0", p.id)));
            }
            if !seen.insert(p.id.clone()) {
                return Err(schema(format!("duplicate place id `{}`", p.id)));
            }
        }
        let rank = places.len() - 1;
        if basis.len() != rank {
            return Err(schema(format!(
                "basis lists {} units but |S| - 1 = {}",
                basis.len(),
                rank
            )));
        }

        let mut unit_names = Vec::with_capacity(units.len());
        let mut unit_logs = Vec::with_capacity(units.len());
        for unit in &units {
            if unit_names.contains(&unit.name) {
                return Err(schema(format!("duplicate unit name `{}`", unit.name)));
            }
            let row = ingest_row(&ctx, label, degree, &places, unit)?;
            let residual = ctx.sum(&row_weighted(&ctx, &places, &row));
            if !ctx.is_zero_tau(&residual) {
                return Err(Error::ProductFormula {
                    unit: unit.name.clone(),
                    residual: ctx.format_sig(&residual, 6),
                });
            }
            unit_names.push(unit.name.clone());
            unit_logs.push(row);
        }

        let mut basis_idx = Vec::with_capacity(rank);
        for name in basis {
            match unit_names.iter().position(|n| n == name) {
                Some(i) => basis_idx.push(i),
                None => return Err(Error::UnknownUnit(name.clone())),
            }
        }

        let sys = SUnitSystem {
            ctx,
            label: label.to_string(),
            degree,
            places,
            unit_names,
            unit_logs,
            basis: basis_idx,
        };
        if rank > 0 {
            let det = det_hp(&sys.ctx, &sys.basis_log_matrix_without(0))?;
            if sys.ctx.is_zero_tau(&det) {
                return Err(Error::Dependent("basis units".into()));
            }
        }
        Ok(sys)
    }

    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn places(&self) -> &[Place] {
        &self.places
    }

    /// Rank r = |S| − 1 of the free S-unit group.
    pub fn rank(&self) -> usize {
        self.places.len() - 1
    }

    pub fn unit_names(&self) -> &[String] {
        &self.unit_names
    }

    pub fn basis_names(&self) -> Vec<&str> {
        self.basis.iter().map(|&i| self.unit_names[i].as_str()).collect()
    }

    pub fn is_archimedean_only(&self) -> bool {
        self.places.iter().all(|p| p.kind == PlaceKind::Archimedean)
    }

    fn unit_index(&self, name: &str) -> Result<usize> {
        self.unit_names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownUnit(name.to_string()))
    }

    fn place_index(&self, id: &str) -> Result<usize> {
        self.places
            .iter()
            .position(|p| p.id == id)
            .ok_or_else(|| Error::Schema {
                context: self.label.clone(),
                message: format!("unknown place id `{id}`"),
            })
    }

    /// Log row (log‖u‖_v per place, unnormalized) of the referenced
    /// element: a stored row for a name, or the linear combination of
    /// basis rows for an exponent vector.
    pub fn log_row(&self, u: &UnitRef) -> Result<Vec<HPReal>> {
        match u {
            UnitRef::Name(name) => Ok(self.unit_logs[self.unit_index(name)?].clone()),
            UnitRef::Exponents(e) => {
                if e.len() != self.rank() {
                    return Err(Error::RankMismatch {
                        expected: self.rank(),
                        found: e.len(),
                    });
                }
                let mut row = vec![self.ctx.zero(); self.places.len()];
                for (j, exp) in e.iter().enumerate() {
                    let coeff = self.ctx.from_bigint(exp);
                    let basis_row = &self.unit_logs[self.basis[j]];
                    for (v, cell) in row.iter_mut().enumerate() {
                        *cell = self.ctx.add(cell, &self.ctx.mul(&coeff, &basis_row[v]));
                    }
                }
                Ok(row)
            }
        }
    }

    /// Weil height h(u) = Σ_v log⁺|u|_v with |u|_v = ‖u‖_v^{d_v/d}.
    ///
    /// Asserts the three-way agreement Σ log⁺ = Σ log⁻ = ½ Σ |log| and,
    /// for every omitted place v̂, the one-row-dropped form
    /// max{Σ_{v≠v̂} log⁺, Σ_{v≠v̂} log⁻} = h; both are consequences of the
    /// product formula enforced at ingestion.
    pub fn height(&self, u: &UnitRef) -> Result<HPReal> {
        let row = self.log_row(u)?;
        Ok(self.height_of_log_row(&row))
    }

    /// Height computed from a raw log‖·‖_v row over this system's places.
    pub fn height_of_log_row(&self, row: &[HPReal]) -> HPReal {
        assert_eq!(row.len(), self.places.len(), "log row length mismatch");
        let ctx = &self.ctx;
        let d = ctx.from_i64(i64::from(self.degree));
        let normalized: Vec<HPReal> = self
            .places
            .iter()
            .zip(row)
            .map(|(p, x)| {
                let dv = ctx.from_i64(i64::from(p.local_degree));
                ctx.div(&ctx.mul(&dv, x), &d)
            })
            .collect();
        let pos: Vec<HPReal> = normalized.iter().map(|x| ctx.pos(x)).collect();
        let neg: Vec<HPReal> = normalized.iter().map(|x| ctx.negpart(x)).collect();
        let sum_pos = ctx.sum(&pos);
        let sum_neg = ctx.sum(&neg);
        let half_abs = ctx.div(
            &ctx.sum(&normalized.iter().map(|x| ctx.abs(x)).collect::<Vec<_>>()),
            &ctx.from_i64(2),
        );
        assert!(
            ctx.eq_tau(&sum_pos, &sum_neg) && ctx.eq_tau(&sum_pos, &half_abs),
            "height log-sums disagree beyond tolerance"
        );
        for vhat in 0..self.places.len() {
            let pos_rest = ctx.sum(pos.iter().enumerate().filter(|(v, _)| *v != vhat).map(|(_, x)| x));
            let neg_rest = ctx.sum(neg.iter().enumerate().filter(|(v, _)| *v != vhat).map(|(_, x)| x));
            assert!(
                ctx.eq_tau(&ctx.max(&pos_rest, &neg_rest), &sum_pos),
                "one-row-dropped height form disagrees beyond tolerance"
            );
        }
        sum_pos
    }

    /// Full basis log-matrix M = (d_v·log‖ηⱼ‖_v), rows indexed by S,
    /// columns by the declared basis.
    fn basis_log_matrix(&self) -> RealMatrix {
        let ctx = &self.ctx;
        let mut m = RealMatrix::zero(ctx, self.places.len(), self.rank());
        for (j, &bi) in self.basis.iter().enumerate() {
            for (v, p) in self.places.iter().enumerate() {
                let dv = ctx.from_i64(i64::from(p.local_degree));
                m[(v, j)] = ctx.mul(&dv, &self.unit_logs[bi][v]);
            }
        }
        m
    }

    /// M^(v̂): the basis log-matrix with the row of place v̂ removed.
    fn basis_log_matrix_without(&self, vhat: usize) -> RealMatrix {
        let full = self.basis_log_matrix();
        let r = self.rank();
        let mut data = Vec::with_capacity(r * r);
        for v in 0..self.places.len() {
            if v == vhat {
                continue;
            }
            for j in 0..r {
                data.push(full[(v, j)].clone());
            }
        }
        RealMatrix::new(r, r, data).expect("square submatrix")
    }

    /// S-regulator |det M^(v̂)|. The determinant is recomputed for every
    /// admissible v̂ and all values are asserted equal within τ; a rank-0
    /// system returns 1 by the empty-determinant convention.
    pub fn regulator(&self, vhat: Option<&str>) -> Result<HPReal> {
        let ctx = &self.ctx;
        let vhat_idx = match vhat {
            Some(id) => self.place_index(id)?,
            None => 0,
        };
        if self.rank() == 0 {
            return Ok(ctx.one());
        }
        let mut dets = Vec::with_capacity(self.places.len());
        for v in 0..self.places.len() {
            let det = det_hp(ctx, &self.basis_log_matrix_without(v))?;
            dets.push(ctx.abs(&det));
        }
        let value = dets[vhat_idx].clone();
        if ctx.is_zero_tau(&value) {
            return Err(Error::Dependent("basis units".into()));
        }
        for other in &dets {
            assert!(
                ctx.eq_tau(&value, other),
                "regulator depends on the removed row beyond tolerance"
            );
        }
        Ok(value)
    }
}

fn ingest_row(
    ctx: &Ctx,
    label: &str,
    degree: u32,
    places: &[Place],
    unit: &UnitInput,
) -> Result<Vec<HPReal>> {
    let schema = |message: String| Error::Schema {
        context: format!("{label}, unit `{}`", unit.name),
        message,
    };
    match &unit.data {
        UnitData::Logs(map) => {
            for id in map.keys() {
                if !places.iter().any(|p| &p.id == id) {
                    return Err(schema(format!("log entry for unknown place `{id}`")));
                }
            }
            places
                .iter()
                .map(|p| match map.get(&p.id) {
                    Some(s) => ctx.parse(s),
                    None => Err(Error::MissingData(format!(
                        "log value at place `{}` for unit `{}`",
                        p.id, unit.name
                    ))),
                })
                .collect()
        }
        UnitData::Rational { factors, sign } => {
            if degree != 1 {
                return Err(schema("prime factorization data requires a degree-1 field".into()));
            }
            if *sign != 1 && *sign != -1 {
                return Err(schema(format!("sign must be 1 or -1, got {sign}")));
            }
            let arch: Vec<usize> = places
                .iter()
                .enumerate()
                .filter(|(_, p)| p.kind == PlaceKind::Archimedean)
                .map(|(i, _)| i)
                .collect();
            if arch.len() != 1 {
                return Err(schema(format!(
                    "prime factorization data requires exactly one archimedean place, found {}",
                    arch.len()
                )));
            }
            let mut row = vec![ctx.zero(); places.len()];
            for (&p, &e) in factors {
                let place = places
                    .iter()
                    .position(|q| q.kind == PlaceKind::NonArchimedean && q.id == p.to_string())
                    .ok_or_else(|| schema(format!("prime {p} is not a finite place of S")))?;
                let term = ctx.mul(&ctx.from_i64(e), &ctx.ln(&ctx.from_i64(p as i64)));
                row[arch[0]] = ctx.add(&row[arch[0]], &term);
                row[place] = ctx.sub(&row[place], &term);
            }
            Ok(row)
        }
    }
}

/// d_v-weighted log row (d_v·log‖u‖_v per place), whose sum is the
/// product-formula residual.
fn row_weighted(ctx: &Ctx, places: &[Place], row: &[HPReal]) -> Vec<HPReal> {
    places
        .iter()
        .zip(row)
        .map(|(p, x)| ctx.mul(&ctx.from_i64(i64::from(p.local_degree)), x))
        .collect()
}

/// A finite-index subgroup 𝔄 = ⟨α₁,…,α_r⟩ of the free S-unit group,
/// described by the integer matrix B whose column j holds the exponents
/// of αⱼ with respect to the declared basis.
#[derive(Debug, Clone)]
pub struct SubgroupSpec {
    b: IntMatrix,
    det: BigInt,
}

impl SubgroupSpec {
    pub fn new(b: IntMatrix) -> Result<Self> {
        let det = det_exact(&b)?;
        if det.is_zero() {
            return Err(Error::Dependent("subgroup generators".into()));
        }
        Ok(SubgroupSpec { b, det })
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.b
    }

    pub fn rank(&self) -> usize {
        self.b.rows()
    }

    /// Index [𝔘_S : 𝔄] = |det B|, exactly.
    pub fn index(&self) -> BigInt {
        self.det.abs()
    }
}

/// Index of the subgroup described by `spec`.
pub fn subgroup_index(spec: &SubgroupSpec) -> BigInt {
    spec.index()
}

/// One named element entering a bound, with its exponents both in terms
/// of the subgroup generators α and the declared basis η.
#[derive(Debug, Clone)]
pub struct BoundWitness {
    pub name: String,
    pub generator_exponents: Vec<BigInt>,
    pub basis_exponents: Vec<BigInt>,
    pub height: HPReal,
    /// [k:Q]·h, the factor that enters the product bounds.
    pub scaled_height: HPReal,
}

/// Report for the regulator floor on archimedean-only systems:
/// floor ≤ rhs/index, where floor is the smallest known regulator of a
/// number field other than Q. Also records the witness of largest
/// [k:Q]·h, which must itself reach the floor when r = 1.
#[derive(Debug, Clone)]
pub struct RegulatorFloor {
    pub floor: HPReal,
    pub ratio: HPReal,
    pub holds: bool,
    pub top_witness: String,
    pub top_scaled_height: HPReal,
    pub top_attains: bool,
}

/// The smallest known regulator of a number field other than Q, used as
/// an unconditional floor for archimedean systems.
pub const REGULATOR_FLOOR: &str = "0.2052";

/// Outcome of one product bound: lhs ≤ constant·(reference) + τ with the
/// exact rational constant recorded, plus the witnesses whose scaled
/// heights multiply to the bounded side.
#[derive(Debug, Clone)]
pub struct BoundReport {
    pub check: &'static str,
    pub lhs: HPReal,
    pub rhs: HPReal,
    pub constant: BigRational,
    pub pass: bool,
    pub witnesses: Vec<BoundWitness>,
    /// det of the witness coordinate matrix w.r.t. the generators, when
    /// the witnesses arise from lattice reduction.
    pub witness_det: Option<BigInt>,
    pub floor: Option<RegulatorFloor>,
}

fn check_rank(sys: &SUnitSystem, spec: &SubgroupSpec) -> Result<()> {
    if spec.rank() != sys.rank() {
        return Err(Error::RankMismatch {
            expected: sys.rank(),
            found: spec.rank(),
        });
    }
    Ok(())
}

fn unit_vector_name(sys: &SUnitSystem, col: &[BigInt]) -> Option<String> {
    let mut hit = None;
    for (i, x) in col.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        if !x.is_one() || hit.is_some() {
            return None;
        }
        hit = Some(i);
    }
    hit.map(|i| sys.unit_names[sys.basis[i]].clone())
}

fn generator_witnesses(sys: &SUnitSystem, spec: &SubgroupSpec) -> Result<Vec<BoundWitness>> {
    let ctx = sys.ctx();
    let d = ctx.from_i64(i64::from(sys.degree()));
    let r = sys.rank();
    let mut out = Vec::with_capacity(r);
    for j in 0..r {
        let col = spec.matrix().column(j);
        let height = sys.height(&UnitRef::Exponents(&col))?;
        let mut gen_exp = vec![BigInt::zero(); r];
        gen_exp[j] = BigInt::one();
        out.push(BoundWitness {
            name: unit_vector_name(sys, &col).unwrap_or_else(|| format!("alpha{}", j + 1)),
            generator_exponents: gen_exp,
            basis_exponents: col,
            scaled_height: ctx.mul(&d, &height),
            height,
        });
    }
    Ok(out)
}

fn regulator_floor(
    sys: &SUnitSystem,
    witnesses: &[BoundWitness],
    rhs: &HPReal,
    index: &BigInt,
) -> Option<RegulatorFloor> {
    if !sys.is_archimedean_only() || sys.rank() == 0 {
        return None;
    }
    let ctx = sys.ctx();
    let floor = ctx.parse(REGULATOR_FLOOR).expect("floor constant parses");
    let ratio = ctx.div(rhs, &ctx.from_bigint(index));
    let top = witnesses
        .iter()
        .max_by(|a, b| ctx.cmp(&a.scaled_height, &b.scaled_height))
        .expect("rank is positive");
    Some(RegulatorFloor {
        holds: ctx.le_tau(&floor, &ratio),
        top_attains: ctx.le_tau(&floor, &top.scaled_height),
        top_witness: top.name.clone(),
        top_scaled_height: top.scaled_height.clone(),
        ratio,
        floor,
    })
}

/// Regulator–index upper bound: Reg_S·[𝔘_S:𝔄] ≤ ∏ⱼ [k:Q]·h(αⱼ) + τ.
///
/// The left side is also evaluated directly as |det(d_v·log‖αⱼ‖_v)| over
/// the v̂-dropped rows and asserted to agree with Reg·index within τ. On
/// archimedean-only systems of positive rank the report carries the
/// regulator floor 0.2052 ≤ rhs/index.
pub fn check_upper_bound(sys: &SUnitSystem, spec: &SubgroupSpec) -> Result<BoundReport> {
    check_rank(sys, spec)?;
    let ctx = sys.ctx();
    let witnesses = generator_witnesses(sys, spec)?;
    let rhs = ctx.product(witnesses.iter().map(|w| &w.scaled_height));
    let index = spec.index();
    let reg = sys.regulator(None)?;
    let lhs = ctx.mul(&reg, &ctx.from_bigint(&index));
    if sys.rank() > 0 {
        let alpha_matrix = sys.basis_log_matrix_without(0).mul_int(ctx, spec.matrix());
        let direct = ctx.abs(&det_hp(ctx, &alpha_matrix)?);
        assert!(
            ctx.eq_tau(&lhs, &direct),
            "regulator·index disagrees with the direct determinant beyond tolerance"
        );
    }
    let floor = regulator_floor(sys, &witnesses, &rhs, &index);
    Ok(BoundReport {
        check: "upper_bound",
        pass: ctx.le_tau(&lhs, &rhs),
        lhs,
        rhs,
        constant: BigRational::one(),
        witnesses,
        witness_det: None,
        floor,
    })
}

fn subgroup_lattice(sys: &SUnitSystem, spec: &SubgroupSpec) -> Result<LatticeInstance> {
    let ctx = sys.ctx();
    let a = sys.basis_log_matrix_without(0).mul_int(ctx, spec.matrix());
    LatticeInstance::new(ctx, a)
}

fn reduction_witness(
    sys: &SUnitSystem,
    spec: &SubgroupSpec,
    name: String,
    coords: &[BigInt],
) -> Result<BoundWitness> {
    let ctx = sys.ctx();
    let d = ctx.from_i64(i64::from(sys.degree()));
    let basis_exponents = spec.matrix().mul_vec(coords);
    let height = sys.height(&UnitRef::Exponents(&basis_exponents))?;
    Ok(BoundWitness {
        name,
        generator_exponents: coords.to_vec(),
        basis_exponents,
        scaled_height: ctx.mul(&d, &height),
        height,
    })
}

/// Columns of the witness coordinate matrix F = (f_ij), fᵢⱼ being the
/// exponent of αᵢ in the j-th witness.
fn coordinate_matrix(witnesses: &[BoundWitness]) -> IntMatrix {
    let r = witnesses.len();
    let mut f = IntMatrix::zero(r, r);
    for (j, w) in witnesses.iter().enumerate() {
        for i in 0..r {
            f[(i, j)] = w.generator_exponents[i].clone();
        }
    }
    f
}

fn trivial_report(sys: &SUnitSystem, check: &'static str) -> BoundReport {
    let ctx = sys.ctx();
    BoundReport {
        check,
        lhs: ctx.one(),
        rhs: ctx.one(),
        constant: BigRational::one(),
        pass: true,
        witnesses: Vec::new(),
        witness_det: Some(BigInt::one()),
        floor: None,
    }
}

/// Constructive reduction: successive minima of the column lattice of
/// A^(v̂) = M^(v̂)·B mapped back to multiplicatively independent units
/// β₁,…,β_r in 𝔄 with
/// ∏ⱼ [k:Q]·h(βⱼ) ≤ (2^r (r!)³/(2r)!)·Reg_S·[𝔘_S:𝔄] + τ.
///
/// Each minimum's δ-norm is asserted to equal [k:Q]·h(βⱼ) within τ. At
/// r = 2 the constant is 4/3 and the two witnesses are checked to form a
/// basis of 𝔄 (|det F| = 1).
pub fn reduce_subgroup(sys: &SUnitSystem, spec: &SubgroupSpec) -> Result<BoundReport> {
    check_rank(sys, spec)?;
    let r = sys.rank();
    if r == 0 {
        return Ok(trivial_report(sys, "reduction"));
    }
    let ctx = sys.ctx();
    let lat = subgroup_lattice(sys, spec)?;
    let minima = successive_minima_delta(ctx, &lat)?;
    let mut witnesses = Vec::with_capacity(r);
    for (j, point) in minima.points.iter().enumerate() {
        let w = reduction_witness(sys, spec, format!("beta{}", j + 1), &point.coords)?;
        assert!(
            ctx.eq_tau(&minima.lambdas[j], &w.scaled_height),
            "minimum {} does not match [k:Q]·h of its unit beyond tolerance",
            j + 1
        );
        witnesses.push(w);
    }
    let lhs = ctx.product(witnesses.iter().map(|w| &w.scaled_height));
    let constant = minima_product_constant(r)?;
    let reg = sys.regulator(None)?;
    let rhs = ctx.mul(
        &ctx.from_ratio(&constant),
        &ctx.mul(&reg, &ctx.from_bigint(&spec.index())),
    );
    let witness_det = det_exact(&coordinate_matrix(&witnesses))?;
    if r == 2 {
        assert_eq!(
            constant,
            BigRational::new(BigInt::from(4), BigInt::from(3)),
            "rank-2 constant must be 4/3"
        );
        assert!(
            witness_det.abs().is_one(),
            "rank-2 minima must form a basis of the subgroup"
        );
    }
    Ok(BoundReport {
        check: "reduction",
        pass: ctx.le_tau(&lhs, &rhs),
        lhs,
        rhs,
        constant,
        witnesses,
        witness_det: Some(witness_det),
        floor: None,
    })
}

/// The constant 2·(r!)⁴/(2r)! of the small-basis bound.
pub fn small_basis_constant(r: usize) -> BigRational {
    let f = factorial(r);
    BigRational::new(BigInt::from(2) * f.pow(4), factorial(2 * r))
}

/// Small basis: applies basis extraction to the reduction minima, giving
/// γ₁,…,γ_r that form a basis of 𝔄 (certified by a unimodular coordinate
/// witness) with ∏ⱼ [k:Q]·h(γⱼ) ≤ (2·(r!)⁴/(2r)!)·Reg_S·[𝔘_S:𝔄] + τ.
pub fn small_basis(sys: &SUnitSystem, spec: &SubgroupSpec) -> Result<(BoundReport, UnimodularWitness)> {
    check_rank(sys, spec)?;
    let r = sys.rank();
    if r == 0 {
        let witness = UnimodularWitness::new(IntMatrix::identity(0))?;
        return Ok((trivial_report(sys, "small_basis"), witness));
    }
    let ctx = sys.ctx();
    let lat = subgroup_lattice(sys, spec)?;
    let minima = successive_minima_delta(ctx, &lat)?;
    let (basis_points, unimodular) = mahler_weyl_basis(ctx, &lat, &minima.points)?;
    let mut witnesses = Vec::with_capacity(r);
    for (j, point) in basis_points.iter().enumerate() {
        witnesses.push(reduction_witness(
            sys,
            spec,
            format!("gamma{}", j + 1),
            &point.coords,
        )?);
    }
    let lhs = ctx.product(witnesses.iter().map(|w| &w.scaled_height));
    let constant = small_basis_constant(r);
    let reg = sys.regulator(None)?;
    let rhs = ctx.mul(
        &ctx.from_ratio(&constant),
        &ctx.mul(&reg, &ctx.from_bigint(&spec.index())),
    );
    let witness_det = det_exact(&coordinate_matrix(&witnesses))?;
    assert!(
        witness_det.abs().is_one(),
        "small-basis coordinates must be unimodular"
    );
    Ok((
        BoundReport {
            check: "small_basis",
            pass: ctx.le_tau(&lhs, &rhs),
            lhs,
            rhs,
            constant,
            witnesses,
            witness_det: Some(witness_det),
            floor: None,
        },
        unimodular,
    ))
}
