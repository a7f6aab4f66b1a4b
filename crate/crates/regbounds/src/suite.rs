//! Corpus suite: runs every check over a corpus of input files and
//! renders a deterministic report.
//!
//! A corpus is a flat set of files with a `manifest.json` listing the
//! entries in report order. The bundled corpus covers the rational field
//! with three S-sets, three real quadratic fields, a quadratic extension
//! of Q, and a synthetic rank-3 biquadratic extension, plus matrix and
//! lattice instances for the determinant and minima checks.

use std::collections::BTreeMap;
use std::path::Path;

use num_bigint::BigInt;
use serde::Deserialize;

use crate::delta::{delta_ball_volume, delta_ball_volume_mc, j_matrix_identity_sides};
use crate::error::{Error, Result};
use crate::exact::IntMatrix;
use crate::files::{make_ctx, parse_extension_json, parse_field_json, parse_lattice_text, parse_matrix_text, parse_subgroup_text, ExtensionBundle};
use crate::hp::{Ctx, HPReal, DEFAULT_PRECISION};
use crate::lattice::{minima_product_constant, successive_minima_delta};
use crate::relative::{check_norm_identity, check_relative_upper_bound, costa_friedman_check, relative_regulator, relative_unit_kernel};
use crate::report::{rational_label, CheckLine, Report};
use crate::sunit::{check_upper_bound, reduce_subgroup, small_basis, SUnitSystem, REGULATOR_FLOOR};

/// Settings shared by every check in a suite run.
pub struct SuiteConfig {
    pub precision: usize,
    pub tolerance: Option<String>,
    pub seed: u64,
    pub mc_samples: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            precision: DEFAULT_PRECISION,
            tolerance: None,
            seed: 0,
            mc_samples: 100_000,
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ManifestEntry {
    kind: String,
    path: String,
    #[serde(default)]
    expected: BTreeMap<String, String>,
    #[serde(default)]
    tolerance: Option<String>,
    #[serde(default)]
    subgroups: Vec<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Manifest {
    entries: Vec<ManifestEntry>,
}

/// The corpus shipped inside the binary.
pub fn bundled_corpus() -> BTreeMap<String, String> {
    macro_rules! bundle {
        ($($name:literal),+ $(,)?) => {
            BTreeMap::from([$(($name.to_string(), include_str!(concat!("../corpus/", $name)).to_string()),)+])
        };
    }
    bundle!(
        "manifest.json",
        "schinzel_equality.txt",
        "schinzel_identity.txt",
        "lattice_z2.txt",
        "lattice_diag23.txt",
        "subgroup_identity_1.txt",
        "subgroup_identity_2.txt",
        "subgroup_identity_3.txt",
        "subgroup_square.txt",
        "subgroup_cube.txt",
        "subgroup_6_23.txt",
        "q_s2.json",
        "q_s23.json",
        "q_s235.json",
        "sqrt2.json",
        "sqrt3.json",
        "sqrt5.json",
        "ext_sqrt2_over_q.json",
        "ext_biquadratic.json",
    )
}

/// Reads every regular file in a directory as a corpus.
pub fn load_corpus_dir(dir: &Path) -> Result<BTreeMap<String, String>> {
    let mut files = BTreeMap::new();
    for entry in std::fs::read_dir(dir)? {
        let entry = entry?;
        if entry.file_type()?.is_file() {
            let name = entry.file_name().to_string_lossy().into_owned();
            files.insert(name, std::fs::read_to_string(entry.path())?);
        }
    }
    Ok(files)
}

fn stem(path: &str) -> String {
    Path::new(path)
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.to_string())
}

fn lookup<'a>(files: &'a BTreeMap<String, String>, path: &str) -> Result<&'a str> {
    files
        .get(path)
        .map(String::as_str)
        .ok_or_else(|| Error::MissingData(format!("corpus file `{path}` not found")))
}

/// Golden-value comparison: |computed − golden| within the entry
/// tolerance, or within τ when none is given.
fn golden_check(
    ctx: &Ctx,
    name: String,
    computed: &HPReal,
    golden: &str,
    tolerance: Option<&str>,
) -> Result<CheckLine> {
    let target = ctx.parse(golden)?;
    let pass = match tolerance {
        None => ctx.eq_tau(computed, &target),
        Some(t) => {
            let tol = ctx.parse(t)?;
            let diff = ctx.abs(&ctx.sub(computed, &target));
            ctx.cmp(&diff, &tol) != std::cmp::Ordering::Greater
        }
    };
    Ok(CheckLine::from_values(ctx, name, computed, &target, "1", pass))
}

fn volume_checks(ctx: &Ctx, config: &SuiteConfig) -> Result<Vec<CheckLine>> {
    let mut lines = Vec::new();
    for n in 1..=5usize {
        let exact = delta_ball_volume(n)?;
        let mc = delta_ball_volume_mc(ctx, n, config.mc_samples, config.seed.wrapping_add(n as u64))?;
        let diff = ctx.abs(&ctx.sub(&mc.estimate, &ctx.from_ratio(&exact)));
        let window = ctx.mul(&ctx.from_i64(3), &mc.stderr);
        let pass = ctx.le_tau(&diff, &window);
        lines.push(CheckLine::from_values(
            ctx,
            format!("ball_volume_{n}"),
            &diff,
            &window,
            rational_label(&exact),
            pass,
        ));
    }
    for n in 1..=8usize {
        let (lhs, rhs) = j_matrix_identity_sides(n)?;
        let pass = lhs == rhs;
        lines.push(CheckLine::from_values(
            ctx,
            format!("j_matrix_{n}"),
            &ctx.from_ratio(&lhs),
            &ctx.from_ratio(&rhs),
            rational_label(&rhs),
            pass,
        ));
    }
    Ok(lines)
}

fn matrix_checks(ctx: &Ctx, entry: &ManifestEntry, text: &str) -> Result<Vec<CheckLine>> {
    let m = parse_matrix_text(&entry.path, text)?;
    let (det_abs, bound, holds) = crate::delta::schinzel_bound_int(&m)?;
    Ok(vec![CheckLine::from_values(
        ctx,
        format!("schinzel_{}", stem(&entry.path)),
        &ctx.from_bigint(&det_abs),
        &ctx.from_bigint(&bound),
        "1",
        holds,
    )])
}

fn lattice_checks(ctx: &Ctx, entry: &ManifestEntry, text: &str) -> Result<Vec<CheckLine>> {
    let lat = parse_lattice_text(ctx, &entry.path, text)?;
    let n = lat.dim;
    let minima = successive_minima_delta(ctx, &lat)?;
    let volume = delta_ball_volume(n)?;
    let constant = minima_product_constant(n)?;
    let s = stem(&entry.path);
    let two_n = ctx.from_bigint(&BigInt::from(2).pow(n as u32));
    Ok(vec![
        CheckLine::from_values(
            ctx,
            format!("minkowski_{s}"),
            &ctx.mul(&ctx.from_ratio(&volume), &minima.product),
            &ctx.mul(&two_n, &minima.det_abs),
            rational_label(&volume),
            minima.minkowski_holds,
        ),
        CheckLine::from_values(
            ctx,
            format!("minima_product_{s}"),
            &minima.product,
            &ctx.mul(&ctx.from_ratio(&constant), &minima.det_abs),
            rational_label(&constant),
            minima.product_bound_holds,
        ),
    ])
}

fn subgroup_checks(sys: &SUnitSystem, sg_stem: &str, text: &str) -> Result<Vec<CheckLine>> {
    let ctx = sys.ctx();
    let label = sys.label();
    let spec = parse_subgroup_text(sg_stem, text)?;
    let mut lines = Vec::new();

    let upper = check_upper_bound(sys, &spec)?;
    lines.push(CheckLine::from_values(
        ctx,
        format!("upper_{label}_{sg_stem}"),
        &upper.lhs,
        &upper.rhs,
        rational_label(&upper.constant),
        upper.pass,
    ));
    if let Some(floor) = &upper.floor {
        lines.push(CheckLine::from_values(
            ctx,
            format!("floor_{label}_{sg_stem}"),
            &floor.floor,
            &floor.ratio,
            REGULATOR_FLOOR,
            floor.holds,
        ));
    }

    let reduced = reduce_subgroup(sys, &spec)?;
    lines.push(CheckLine::from_values(
        ctx,
        format!("reduce_{label}_{sg_stem}"),
        &reduced.lhs,
        &reduced.rhs,
        rational_label(&reduced.constant),
        reduced.pass,
    ));

    let (basis, _) = small_basis(sys, &spec)?;
    lines.push(CheckLine::from_values(
        ctx,
        format!("basis_{label}_{sg_stem}"),
        &basis.lhs,
        &basis.rhs,
        rational_label(&basis.constant),
        basis.pass,
    ));

    Ok(lines)
}

fn field_checks(
    files: &BTreeMap<String, String>,
    config: &SuiteConfig,
    entry: &ManifestEntry,
    text: &str,
    report: &mut Report,
) -> Result<()> {
    let sys = parse_field_json(
        &entry.path,
        text,
        config.precision,
        config.tolerance.as_deref(),
    )?;
    let ctx = sys.ctx();
    let label = sys.label().to_string();

    if let Some(golden) = entry.expected.get("regulator") {
        let reg = sys.regulator(None)?;
        report.push_check(golden_check(
            ctx,
            format!("regulator_{label}"),
            &reg,
            golden,
            entry.tolerance.as_deref(),
        )?);
    }

    for sg_path in &entry.subgroups {
        let sg_stem = stem(sg_path);
        let result = lookup(files, sg_path).and_then(|sg_text| subgroup_checks(&sys, &sg_stem, sg_text));
        match result {
            Ok(lines) => {
                for line in lines {
                    report.push_check(line);
                }
            }
            Err(e) => {
                report.push_info(format!("# {sg_path}: {e}"));
                report.push_check(CheckLine::error(format!("subgroup_{label}_{sg_stem}")));
            }
        }
    }
    Ok(())
}

/// Appends the full battery of extension checks — norm identities,
/// kernel rank, optional golden values, the relative upper bound for the
/// given coordinate matrix (identity when None), and the regulator
/// factorisation — to a report.
pub fn extension_report(
    bundle: &ExtensionBundle,
    subgroup: Option<&IntMatrix>,
    expected: &BTreeMap<String, String>,
    tolerance: Option<&str>,
    report: &mut Report,
) -> Result<()> {
    let ext = &bundle.extension;
    let ctx = ext.l().ctx();
    let label = format!("{}_over_{}", ext.l().label(), ext.k().label());

    for check in &bundle.norm_checks {
        let outcome = check_norm_identity(ext, check)?;
        report.push_check(CheckLine::from_values(
            ctx,
            format!("norm_identity_{label}_{}", outcome.name),
            &outcome.max_residual,
            &ctx.zero(),
            "1",
            outcome.holds,
        ));
    }

    let e = relative_unit_kernel(ext)?;
    report.push_check(CheckLine::from_values(
        ctx,
        format!("kernel_rank_{label}"),
        &ctx.from_i64(e.rank() as i64),
        &ctx.from_i64(ext.relative_rank() as i64),
        "1",
        e.rank() == ext.relative_rank() && e.certified(),
    ));

    let reg_e = relative_regulator(ext, &e, None)?;
    if let Some(golden) = expected.get("relative_regulator") {
        report.push_check(golden_check(
            ctx,
            format!("relative_regulator_{label}"),
            &reg_e,
            golden,
            tolerance,
        )?);
    }
    if let Some(golden) = expected.get("regulator_l") {
        let reg_l = ext.l().regulator(None)?;
        report.push_check(golden_check(
            ctx,
            format!("regulator_l_{label}"),
            &reg_l,
            golden,
            tolerance,
        )?);
    }

    let identity_c;
    let c = match subgroup {
        Some(c) => c,
        None => {
            identity_c = IntMatrix::identity(ext.relative_rank());
            &identity_c
        }
    };
    let upper = check_relative_upper_bound(ext, &e, c)?;
    report.push_check(CheckLine::from_values(
        ctx,
        format!("relative_upper_{label}"),
        &upper.lhs,
        &upper.rhs,
        rational_label(&upper.constant),
        upper.pass,
    ));

    let identity = costa_friedman_check(ext, &e)?;
    report.push_check(CheckLine::from_values(
        ctx,
        format!("costa_friedman_{label}"),
        &identity.lhs,
        &identity.reg_l,
        identity.image_index.to_string(),
        identity.holds,
    ));
    Ok(())
}

fn extension_checks(
    config: &SuiteConfig,
    entry: &ManifestEntry,
    text: &str,
    report: &mut Report,
) -> Result<()> {
    let bundle = parse_extension_json(
        &entry.path,
        text,
        config.precision,
        config.tolerance.as_deref(),
    )?;
    extension_report(
        &bundle,
        None,
        &entry.expected,
        entry.tolerance.as_deref(),
        report,
    )
}

/// Runs every check over the corpus and returns the report. Entry-level
/// failures become FAIL lines; only a missing or malformed manifest is a
/// hard error.
pub fn run_suite(files: &BTreeMap<String, String>, config: &SuiteConfig) -> Result<Report> {
    let manifest_text = files.get("manifest.json").ok_or_else(|| Error::Schema {
        context: "corpus".into(),
        message: "missing manifest.json".into(),
    })?;
    let manifest: Manifest =
        serde_json::from_str(manifest_text).map_err(|e| Error::Schema {
            context: "manifest.json".into(),
            message: e.to_string(),
        })?;

    let mut report = Report::new();
    if manifest.entries.is_empty() {
        report.push_info("WARN empty corpus");
        return Ok(report);
    }

    let ctx = make_ctx(config.precision, config.tolerance.as_deref())?;
    for line in volume_checks(&ctx, config)? {
        report.push_check(line);
    }

    for entry in &manifest.entries {
        let entry_stem = stem(&entry.path);
        let outcome = lookup(files, &entry.path).and_then(|text| match entry.kind.as_str() {
            "matrix" => matrix_checks(&ctx, entry, text).map(Some),
            "lattice" => lattice_checks(&ctx, entry, text).map(Some),
            "field" => field_checks(files, config, entry, text, &mut report).map(|_| None),
            "extension" => extension_checks(config, entry, text, &mut report).map(|_| None),
            other => Err(Error::Schema {
                context: entry.path.clone(),
                message: format!("unknown corpus entry kind `{other}`"),
            }),
        });
        match outcome {
            Ok(Some(lines)) => {
                for line in lines {
                    report.push_check(line);
                }
            }
            Ok(None) => {}
            Err(e) => {
                report.push_info(format!("# {}: {e}", entry.path));
                report.push_check(CheckLine::error(format!("{}_{entry_stem}", entry.kind)));
            }
        }
    }
    Ok(report)
}
