//! Command-line front end: δ-ball volumes, determinant bounds, successive
//! minima, regulators, heights, subgroup sandwich bounds, relative-unit
//! checks, and the corpus suite.
//!
//! Exit codes: 0 when every requested check passes, 1 when a check fails,
//! 2 on input or usage errors.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use num_bigint::BigInt;

use regbounds::delta::{delta_ball_volume, delta_ball_volume_mc, schinzel_bound_int};
use regbounds::files::{
    make_ctx, parse_extension_json, parse_field_json, parse_lattice_text, parse_matrix_text,
    parse_subgroup_text,
};
use regbounds::hp::{Ctx, DEFAULT_PRECISION};
use regbounds::lattice::{minima_product_constant, successive_minima_delta};
use regbounds::relative::{relative_regulator, relative_unit_kernel};
use regbounds::report::{rational_label, CheckLine, Report, LINE_DIGITS};
use regbounds::suite::{bundled_corpus, extension_report, load_corpus_dir, run_suite, SuiteConfig};
use regbounds::sunit::{
    check_upper_bound, reduce_subgroup, small_basis, BoundReport, SUnitSystem, SubgroupSpec,
    UnitRef, REGULATOR_FLOOR,
};
use regbounds::Result;

/// Digits printed for regulator and height values.
const VALUE_DIGITS: usize = 40;

#[derive(Parser)]
#[command(
    name = "regbounds",
    version,
    about = "Sandwich bounds between S-regulators and products of unit heights"
)]
struct Cli {
    /// Working precision in bits
    #[arg(long, global = true, default_value_t = DEFAULT_PRECISION)]
    precision: usize,
    /// Comparison tolerance as a decimal string (default 2^(-precision/2))
    #[arg(long, global = true)]
    tolerance: Option<String>,
    /// Seed for the randomized checks
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// δ-norm unit-ball volume
    Delta {
        #[command(subcommand)]
        sub: DeltaCommand,
    },
    /// Determinant bound by the product of column δ-norms
    Schinzel {
        #[command(subcommand)]
        sub: SchinzelCommand,
    },
    /// Successive δ-minima of a lattice file
    Minima {
        /// Lattice file: dimension, then the basis matrix (columns are
        /// basis vectors)
        lattice: PathBuf,
    },
    /// S-regulator of a field file
    Regulator {
        field: PathBuf,
        /// Place id of the row to drop (default: first place; the value
        /// is the same for every choice)
        #[arg(long)]
        vhat: Option<String>,
    },
    /// Weil height of a named unit in a field file
    Height {
        field: PathBuf,
        unit: String,
    },
    /// Sandwich bounds for a finite-index subgroup
    Verify {
        #[command(subcommand)]
        sub: VerifyCommand,
    },
    /// Relative-unit checks for an extension file
    Relative {
        extension: PathBuf,
        /// Integer coordinate matrix for a finite-index subgroup of the
        /// relative units (default: identity)
        #[arg(long)]
        subgroup: Option<PathBuf>,
    },
    /// Run every check over a corpus directory (default: the bundled
    /// corpus)
    Suite {
        corpus: Option<PathBuf>,
        /// Samples per Monte Carlo volume estimate
        #[arg(long, default_value_t = 100_000)]
        mc_samples: u64,
    },
}

#[derive(Subcommand)]
enum DeltaCommand {
    /// Exact volume of the unit ball K_N, optionally cross-checked by
    /// Monte Carlo
    Vol {
        n: usize,
        /// Number of Monte Carlo samples
        #[arg(long)]
        mc: Option<u64>,
    },
}

#[derive(Subcommand)]
enum SchinzelCommand {
    /// Check |det A| against the product of column δ-norms for an
    /// integer matrix file
    Check {
        matrix: PathBuf,
    },
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Regulator·index against the product of generator heights
    Upper {
        field: PathBuf,
        #[arg(long)]
        subgroup: PathBuf,
    },
    /// Successive-minima reduction of the subgroup
    Reduce {
        field: PathBuf,
        #[arg(long)]
        subgroup: PathBuf,
    },
    /// Basis extraction with the small-basis constant
    Basis {
        field: PathBuf,
        #[arg(long)]
        subgroup: PathBuf,
    },
}

fn main() {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(2);
        }
    }
}

fn context(cli: &Cli) -> Result<Ctx> {
    make_ctx(cli.precision, cli.tolerance.as_deref())
}

fn read(path: &Path) -> Result<String> {
    Ok(std::fs::read_to_string(path)?)
}

fn load_field(cli: &Cli, path: &Path) -> Result<SUnitSystem> {
    parse_field_json(
        &path.display().to_string(),
        &read(path)?,
        cli.precision,
        cli.tolerance.as_deref(),
    )
}

fn load_subgroup(path: &Path) -> Result<SubgroupSpec> {
    parse_subgroup_text(&path.display().to_string(), &read(path)?)
}

fn coord_list(coords: &[BigInt]) -> String {
    let parts: Vec<String> = coords.iter().map(BigInt::to_string).collect();
    format!("({})", parts.join(","))
}

fn run(cli: &Cli) -> Result<i32> {
    match &cli.command {
        Command::Delta { sub } => {
            let DeltaCommand::Vol { n, mc } = sub;
            let exact = delta_ball_volume(*n)?;
            match mc {
                None => println!("VOL exact={}", rational_label(&exact)),
                Some(samples) => {
                    let ctx = context(cli)?;
                    let est = delta_ball_volume_mc(&ctx, *n, *samples, cli.seed)?;
                    println!(
                        "VOL exact={} mc={} stderr={}",
                        rational_label(&exact),
                        ctx.format_sig(&est.estimate, LINE_DIGITS),
                        ctx.format_sig(&est.stderr, LINE_DIGITS),
                    );
                }
            }
            Ok(0)
        }
        Command::Schinzel { sub } => {
            let SchinzelCommand::Check { matrix } = sub;
            let m = parse_matrix_text(&matrix.display().to_string(), &read(matrix)?)?;
            let (det_abs, bound, holds) = schinzel_bound_int(&m)?;
            println!(
                "SCHINZEL det={det_abs} bound={bound} {}",
                if holds { "PASS" } else { "FAIL" }
            );
            Ok(if holds { 0 } else { 1 })
        }
        Command::Minima { lattice } => {
            let ctx = context(cli)?;
            let lat = parse_lattice_text(&ctx, &lattice.display().to_string(), &read(lattice)?)?;
            let minima = successive_minima_delta(&ctx, &lat)?;
            for (j, point) in minima.points.iter().enumerate() {
                println!(
                    "LAMBDA j={} delta={} coords={}",
                    j + 1,
                    ctx.format_sig(&point.delta, LINE_DIGITS),
                    coord_list(&point.coords),
                );
            }
            let constant = minima_product_constant(lat.dim)?;
            let bound = ctx.mul(&ctx.from_ratio(&constant), &minima.det_abs);
            println!("PRODUCT {}", ctx.format_sig(&minima.product, LINE_DIGITS));
            println!(
                "BOUND {} const={}",
                ctx.format_sig(&bound, LINE_DIGITS),
                rational_label(&constant),
            );
            let pass = minima.minkowski_holds && minima.product_bound_holds;
            println!("{}", if pass { "PASS" } else { "FAIL" });
            Ok(if pass { 0 } else { 1 })
        }
        Command::Regulator { field, vhat } => {
            let sys = load_field(cli, field)?;
            let reg = sys.regulator(vhat.as_deref())?;
            println!(
                "REGULATOR {} {}",
                sys.label(),
                sys.ctx().format_sig(&reg, VALUE_DIGITS)
            );
            Ok(0)
        }
        Command::Height { field, unit } => {
            let sys = load_field(cli, field)?;
            let h = sys.height(&UnitRef::Name(unit))?;
            println!(
                "HEIGHT {} {unit} {}",
                sys.label(),
                sys.ctx().format_sig(&h, VALUE_DIGITS)
            );
            Ok(0)
        }
        Command::Verify { sub } => {
            let (field, subgroup, which) = match sub {
                VerifyCommand::Upper { field, subgroup } => (field, subgroup, "upper"),
                VerifyCommand::Reduce { field, subgroup } => (field, subgroup, "reduce"),
                VerifyCommand::Basis { field, subgroup } => (field, subgroup, "basis"),
            };
            let sys = load_field(cli, field)?;
            let spec = load_subgroup(subgroup)?;
            let sg_stem = subgroup
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
            let name = format!("{which}_{}_{sg_stem}", sys.label());
            let mut report = Report::new();
            let bound = match which {
                "upper" => check_upper_bound(&sys, &spec)?,
                "reduce" => reduce_subgroup(&sys, &spec)?,
                _ => {
                    let (bound, witness) = small_basis(&sys, &spec)?;
                    report.push_info(format!("UNIMODULAR det={}", witness.determinant));
                    bound
                }
            };
            render_bound(&sys, &name, &bound, &mut report);
            print!("{}", report.render());
            Ok(report.exit_code())
        }
        Command::Relative {
            extension,
            subgroup,
        } => {
            let bundle = parse_extension_json(
                &extension.display().to_string(),
                &read(extension)?,
                cli.precision,
                cli.tolerance.as_deref(),
            )?;
            let c_matrix = subgroup
                .as_ref()
                .map(|p| parse_matrix_text(&p.display().to_string(), &read(p)?))
                .transpose()?;
            let ext = &bundle.extension;
            let ctx = ext.l().ctx();
            let e = relative_unit_kernel(ext)?;
            let reg_e = relative_regulator(ext, &e, None)?;
            let mut report = Report::new();
            report.push_info(format!(
                "RELATIVE_REGULATOR {}_over_{} {}",
                ext.l().label(),
                ext.k().label(),
                ctx.format_sig(&reg_e, VALUE_DIGITS)
            ));
            extension_report(
                &bundle,
                c_matrix.as_ref(),
                &BTreeMap::new(),
                cli.tolerance.as_deref(),
                &mut report,
            )?;
            print!("{}", report.render());
            Ok(report.exit_code())
        }
        Command::Suite { corpus, mc_samples } => {
            let files = match corpus {
                Some(dir) => load_corpus_dir(dir)?,
                None => bundled_corpus(),
            };
            let config = SuiteConfig {
                precision: cli.precision,
                tolerance: cli.tolerance.clone(),
                seed: cli.seed,
                mc_samples: *mc_samples,
            };
            let report = run_suite(&files, &config)?;
            print!("{}", report.render());
            Ok(report.exit_code())
        }
    }
}

/// Prints one CHECK line for a bound report, a WITNESS line per element,
/// and the floor line when the report carries one.
fn render_bound(sys: &SUnitSystem, name: &str, bound: &BoundReport, report: &mut Report) {
    let ctx = sys.ctx();
    for w in &bound.witnesses {
        report.push_info(format!(
            "WITNESS {} height={} scaled={} exponents={}",
            w.name,
            ctx.format_sig(&w.height, LINE_DIGITS),
            ctx.format_sig(&w.scaled_height, LINE_DIGITS),
            coord_list(&w.generator_exponents),
        ));
    }
    report.push_check(CheckLine::from_values(
        ctx,
        name,
        &bound.lhs,
        &bound.rhs,
        rational_label(&bound.constant),
        bound.pass,
    ));
    if let Some(floor) = &bound.floor {
        report.push_info(format!(
            "WITNESS {} scaled={} attains_floor={}",
            floor.top_witness,
            ctx.format_sig(&floor.top_scaled_height, LINE_DIGITS),
            floor.top_attains,
        ));
        report.push_check(CheckLine::from_values(
            ctx,
            format!("floor_{name}"),
            &floor.floor,
            &floor.ratio,
            REGULATOR_FLOOR,
            floor.holds,
        ));
    }
}
