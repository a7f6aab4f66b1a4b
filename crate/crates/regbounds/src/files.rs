//! Input parsing: integer matrix text, lattice basis files, and JSON
//! field/extension descriptions.
//!
//! Parsing is validating — every module-level invariant (product formula,
//! basis nonsingularity, fiber consistency, norm-matrix rank) is enforced
//! before an object is returned, so downstream code never sees raw data.

use std::collections::BTreeMap;
use std::path::Path;

use num_bigint::BigInt;
use serde::Deserialize;

use crate::delta::RealMatrix;
use crate::error::{Error, Result};
use crate::exact::IntMatrix;
use crate::hp::Ctx;
use crate::lattice::LatticeInstance;
use crate::relative::{ExtensionData, NormCheck};
use crate::sunit::{Place, PlaceKind, SUnitSystem, SubgroupSpec, UnitData, UnitInput};

/// Context for the requested precision, with τ = 2^(−precision/2) unless
/// an explicit tolerance is given.
pub fn make_ctx(precision: usize, tolerance: Option<&str>) -> Result<Ctx> {
    match tolerance {
        Some(t) => Ctx::with_tolerance(precision, t),
        None => Ok(Ctx::new(precision)),
    }
}

fn schema(context: &str, message: String) -> Error {
    Error::Schema {
        context: context.to_string(),
        message,
    }
}

/// Integer matrix text: `rows cols` followed by row-major entries,
/// whitespace-separated.
pub fn parse_matrix_text(context: &str, text: &str) -> Result<IntMatrix> {
    let mut tokens = text.split_whitespace();
    let mut dim = |what: &str| -> Result<usize> {
        tokens
            .next()
            .ok_or_else(|| schema(context, format!("missing {what}")))?
            .parse::<usize>()
            .map_err(|_| schema(context, format!("{what} is not a non-negative integer")))
    };
    let rows = dim("row count")?;
    let cols = dim("column count")?;
    let mut m = IntMatrix::zero(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            let token = tokens
                .next()
                .ok_or_else(|| schema(context, format!("missing entry ({i},{j})")))?;
            m[(i, j)] = token
                .parse::<BigInt>()
                .map_err(|_| schema(context, format!("entry ({i},{j}) `{token}` is not an integer")))?;
        }
    }
    if let Some(extra) = tokens.next() {
        return Err(schema(context, format!("unexpected trailing token `{extra}`")));
    }
    Ok(m)
}

/// Lattice file: `N` followed by an N×N basis matrix of decimal strings
/// (columns are basis vectors).
pub fn parse_lattice_text(ctx: &Ctx, context: &str, text: &str) -> Result<LatticeInstance> {
    let mut tokens = text.split_whitespace();
    let n = tokens
        .next()
        .ok_or_else(|| schema(context, "missing dimension".into()))?
        .parse::<usize>()
        .map_err(|_| schema(context, "dimension is not a non-negative integer".into()))?;
    let mut data = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let token = tokens
                .next()
                .ok_or_else(|| schema(context, format!("missing entry ({i},{j})")))?;
            data.push(ctx.parse(token)?);
        }
    }
    if let Some(extra) = tokens.next() {
        return Err(schema(context, format!("unexpected trailing token `{extra}`")));
    }
    LatticeInstance::new(ctx, RealMatrix::new(n, n, data)?)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PlaceEntry {
    id: String,
    local_degree: u32,
    kind: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RationalEntry {
    factors: BTreeMap<String, i64>,
    #[serde(default = "default_sign")]
    sign: i64,
}

fn default_sign() -> i64 {
    1
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct UnitEntry {
    name: String,
    #[serde(default)]
    log_abs: Option<BTreeMap<String, String>>,
    #[serde(default)]
    rational: Option<RationalEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FieldFile {
    label: String,
    degree: u32,
    places: Vec<PlaceEntry>,
    units: Vec<UnitEntry>,
    basis: Vec<String>,
}

fn to_place(context: &str, p: PlaceEntry) -> Result<Place> {
    let kind = match p.kind.as_str() {
        "archimedean" => PlaceKind::Archimedean,
        "non-archimedean" => PlaceKind::NonArchimedean,
        other => {
            return Err(schema(
                context,
                format!("place `{}` has unknown kind `{other}`", p.id),
            ))
        }
    };
    Ok(Place {
        id: p.id,
        local_degree: p.local_degree,
        kind,
    })
}

fn to_unit(context: &str, u: UnitEntry) -> Result<UnitInput> {
    let data = match (u.log_abs, u.rational) {
        (Some(logs), None) => UnitData::Logs(logs),
        (None, Some(r)) => {
            let mut factors = BTreeMap::new();
            for (prime, exponent) in r.factors {
                let p = prime.parse::<u64>().map_err(|_| {
                    schema(
                        context,
                        format!("unit `{}` lists non-integer prime `{prime}`", u.name),
                    )
                })?;
                factors.insert(p, exponent);
            }
            UnitData::Rational {
                factors,
                sign: r.sign,
            }
        }
        _ => {
            return Err(schema(
                context,
                format!("unit `{}` must have exactly one of `log_abs` and `rational`", u.name),
            ))
        }
    };
    Ok(UnitInput { name: u.name, data })
}

fn build_field(context: &str, file: FieldFile, precision: usize, tolerance: Option<&str>) -> Result<SUnitSystem> {
    let ctx = make_ctx(precision, tolerance)?;
    let places = file
        .places
        .into_iter()
        .map(|p| to_place(context, p))
        .collect::<Result<Vec<_>>>()?;
    let units = file
        .units
        .into_iter()
        .map(|u| to_unit(context, u))
        .collect::<Result<Vec<_>>>()?;
    SUnitSystem::new(ctx, &file.label, file.degree, places, units, &file.basis)
}

/// Field file: JSON with `label`, `degree`, `places`, `units`, `basis`.
pub fn parse_field_json(
    context: &str,
    text: &str,
    precision: usize,
    tolerance: Option<&str>,
) -> Result<SUnitSystem> {
    let file: FieldFile =
        serde_json::from_str(text).map_err(|e| schema(context, e.to_string()))?;
    build_field(context, file, precision, tolerance)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixEntry {
    rows: usize,
    cols: usize,
    entries: Vec<i64>,
}

fn to_int_matrix(context: &str, m: MatrixEntry) -> Result<IntMatrix> {
    if m.entries.len() != m.rows * m.cols {
        return Err(schema(
            context,
            format!(
                "matrix lists {} entries for shape {}x{}",
                m.entries.len(),
                m.rows,
                m.cols
            ),
        ));
    }
    let mut out = IntMatrix::zero(m.rows, m.cols);
    for i in 0..m.rows {
        for j in 0..m.cols {
            out[(i, j)] = BigInt::from(m.entries[i * m.cols + j]);
        }
    }
    Ok(out)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct NormCheckEntry {
    name: String,
    #[serde(default)]
    element_logs: Option<BTreeMap<String, String>>,
    norm_logs: BTreeMap<String, String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ExtensionFile {
    k: FieldFile,
    l: FieldFile,
    relative_degree: u32,
    fiber_map: BTreeMap<String, String>,
    norm_matrix: MatrixEntry,
    #[serde(default)]
    relative_units: Option<Vec<Vec<i64>>>,
    #[serde(default)]
    norm_checks: Vec<NormCheckEntry>,
}

/// An extension plus the norm-identity test data bundled with it.
pub struct ExtensionBundle {
    pub extension: ExtensionData,
    pub norm_checks: Vec<NormCheck>,
}

/// Extension file: JSON with `k`, `l` field blocks, `fiber_map`,
/// `relative_degree`, `norm_matrix`, optional `relative_units` and
/// `norm_checks`.
pub fn parse_extension_json(
    context: &str,
    text: &str,
    precision: usize,
    tolerance: Option<&str>,
) -> Result<ExtensionBundle> {
    let file: ExtensionFile =
        serde_json::from_str(text).map_err(|e| schema(context, e.to_string()))?;
    let k = build_field(&format!("{context} (k)"), file.k, precision, tolerance)?;
    let l = build_field(&format!("{context} (l)"), file.l, precision, tolerance)?;
    let norm_matrix = to_int_matrix(context, file.norm_matrix)?;
    let declared = file.relative_units.map(|rows| {
        rows.into_iter()
            .map(|r| r.into_iter().map(BigInt::from).collect())
            .collect()
    });
    let extension = ExtensionData::new(
        k,
        l,
        file.relative_degree,
        &file.fiber_map,
        norm_matrix,
        declared,
    )?;
    let norm_checks = file
        .norm_checks
        .into_iter()
        .map(|c| NormCheck {
            name: c.name,
            element_logs: c.element_logs,
            norm_logs: c.norm_logs,
        })
        .collect();
    Ok(ExtensionBundle {
        extension,
        norm_checks,
    })
}

/// Subgroup file: integer matrix text, validated to be square and
/// nonsingular.
pub fn parse_subgroup_text(context: &str, text: &str) -> Result<SubgroupSpec> {
    SubgroupSpec::new(parse_matrix_text(context, text)?)
}

/// Any parsed input object.
pub enum ParsedInput {
    Field(SUnitSystem),
    Extension(Box<ExtensionBundle>),
    Matrix(IntMatrix),
    Lattice(LatticeInstance),
}

/// Reads and dispatches a file by shape: JSON objects are field or
/// extension descriptions (extensions carry `fiber_map`); text whose
/// first line has two integers is a matrix; a single leading integer is
/// a lattice file.
pub fn parse_input(path: &Path, precision: usize, tolerance: Option<&str>) -> Result<ParsedInput> {
    let context = path.display().to_string();
    let text = std::fs::read_to_string(path)?;
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') {
        let probe: serde_json::Value =
            serde_json::from_str(&text).map_err(|e| schema(&context, e.to_string()))?;
        if probe.get("fiber_map").is_some() {
            return Ok(ParsedInput::Extension(Box::new(parse_extension_json(
                &context, &text, precision, tolerance,
            )?)));
        }
        return Ok(ParsedInput::Field(parse_field_json(
            &context, &text, precision, tolerance,
        )?));
    }
    let first_line_tokens = text
        .lines()
        .find(|l| !l.trim().is_empty())
        .map(|l| l.split_whitespace().count())
        .unwrap_or(0);
    match first_line_tokens {
        2 => Ok(ParsedInput::Matrix(parse_matrix_text(&context, &text)?)),
        1 => {
            let ctx = make_ctx(precision, tolerance)?;
            Ok(ParsedInput::Lattice(parse_lattice_text(&ctx, &context, &text)?))
        }
        _ => Err(schema(
            &context,
            "unrecognized input shape (expected JSON, matrix, or lattice text)".into(),
        )),
    }
}
