//! Command-line front end: computes Fitting ideals of JSON presentations,
//! shifted Fitting ideals of decomposition models, Stickelberger elements,
//! and runs the verification suites, emitting deterministic reports.
//!
//! Exit codes: 0 on success (including suites with skipped checks, which
//! warn on stderr), 1 when a verification check fails, 2 on input errors,
//! and 64 on usage errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use fitting_forge::fitting::{fitt, Presentation};
use fitting_forge::formats::{
    stickelberger_response, ModelDescriptor, PresentationDescriptor, SticklebergerRequest,
    SticklebergerResponse, SCHEMA,
};
use fitting_forge::group_ring::GroupRingElement;
use fitting_forge::verify::{
    assemble_report, execute_check, plan_suite, SuiteOptions, VerificationReport,
};

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Parser)]
#[command(name = "fitting-forge", version, about = "Exact Fitting-ideal and Stickelberger computations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute Fitt_e of a presentation file, or with --shift the shifted
    /// first Fitting ideal of a decomposition-model file.
    Fitt {
        /// Input JSON file (presentation, or model with --shift).
        #[arg(long)]
        input: PathBuf,
        /// Which Fitting ideal to compute.
        #[arg(long, default_value_t = 0)]
        e: usize,
        /// Treat the input as a decomposition model and compute the shifted
        /// first Fitting ideal of its resolution.
        #[arg(long)]
        shift: bool,
        /// Override the coefficient prime of the input file.
        #[arg(long)]
        p: Option<u64>,
        /// Override the coefficient precision of the input file.
        #[arg(long = "M")]
        precision: Option<u32>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Run a verification suite over the built-in model catalog.
    Verify {
        #[arg(long, value_parser = ["appendix", "limits", "transpose", "stickelberger", "all"], default_value = "all")]
        suite: String,
        /// Coefficient precision for the catalog models.
        #[arg(long = "M")]
        precision: Option<u32>,
        /// Override the catalog's high truncation level.
        #[arg(long)]
        level_m: Option<u32>,
        /// Override the catalog's low truncation level.
        #[arg(long)]
        level_n: Option<u32>,
        /// Enumeration budget for the intrinsic-decomposition search.
        #[arg(long)]
        bound: Option<u64>,
        /// Worker threads for executing independent checks.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Omit the timestamp and per-check wall times, making the report
        /// byte-reproducible.
        #[arg(long)]
        no_timestamp: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Compute a Stickelberger element from {"m", "S", "T"} JSON.
    Stickelberger {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 64,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Fitt { input, e, shift, p, precision, format } => {
            if shift {
                cmd_fitt_shift(&input, p, precision, format)
            } else {
                cmd_fitt(&input, e, p, precision, format)
            }
        }
        Command::Verify {
            suite,
            precision,
            level_m,
            level_n,
            bound,
            jobs,
            no_timestamp,
            format,
        } => cmd_verify(&suite, precision, level_m, level_n, bound, jobs, no_timestamp, format),
        Command::Stickelberger { input, format } => cmd_stickelberger(&input, format),
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> anyhow::Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| anyhow::anyhow!("cannot read {}: {e}", path.display()))?;
    serde_json::from_str(&text)
        .map_err(|e| anyhow::anyhow!("cannot parse {}: {e}", path.display()))
}

fn coeff_rows(elements: &[GroupRingElement]) -> Vec<Vec<u64>> {
    elements.iter().map(|g| g.coeffs().to_vec()).collect()
}

fn cmd_fitt(
    path: &Path,
    e: usize,
    p: Option<u64>,
    precision: Option<u32>,
    format: Format,
) -> anyhow::Result<ExitCode> {
    let mut desc: PresentationDescriptor = read_json(path)?;
    if let Some(p) = p {
        desc.modulus.p = p;
    }
    if let Some(m) = precision {
        desc.modulus.precision = m;
    }
    let pres = desc.to_presentation()?;
    let ideal = fitt(&pres, e)?;
    let minors = nonzero_minors(&pres, e)?;
    let generators = ideal.generators();
    match format {
        Format::Json => {
            let out = serde_json::json!({
                "schema": SCHEMA,
                "kind": "fitt",
                "e": e,
                "minors": coeff_rows(&minors),
                "generators": coeff_rows(&generators),
            });
            println!("{}", serde_json::to_string_pretty(&out)?);
        }
        Format::Text => {
            println!("Fitt_{e}: {} minor generators, {} canonical generators", minors.len(), generators.len());
            for g in &generators {
                println!("  {:?}", g.coeffs());
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

/// The nonzero k-minors that generate Fitt_e, mirroring the ideal's edge
/// cases: e at or above the target rank means the unit ideal, and minors
/// larger than the matrix mean the zero ideal.
fn nonzero_minors(pres: &Presentation, e: usize) -> anyhow::Result<Vec<GroupRingElement>> {
    let mat = pres.matrix();
    let a = pres.target_rank();
    if e >= a {
        return Ok(vec![GroupRingElement::one(mat.ring(), mat.group().clone())]);
    }
    let k = a - e;
    if k > mat.ncols() {
        return Ok(Vec::new());
    }
    Ok(mat.minors(k)?.into_iter().filter(|m| !m.is_zero()).collect())
}

fn cmd_fitt_shift(
    path: &Path,
    p: Option<u64>,
    precision: Option<u32>,
    format: Format,
) -> anyhow::Result<ExitCode> {
    let mut desc: ModelDescriptor = read_json(path)?;
    if let Some(p) = p {
        desc.p = p;
    }
    if let Some(m) = precision {
        desc.precision = m;
    }
    let model = desc.to_model()?;
    let res = fitting_forge::fitting::build_A_Q(&model)?;
    let shifted = fitting_forge::fitting::shifted_fitt1_gkk(&res)?;
    match format {
        Format::Json => {
            let out = serde_json::json!({
                "schema": SCHEMA,
                "kind": "shifted-fitt1",
                "numerator_generators": coeff_rows(&shifted.numerator().generators()),
                "denominator": shifted.denominator().coeffs(),
                "denominator_is_zero_divisor": shifted.denominator_is_zero_divisor(),
            });
            println!("{}", serde_json::to_string_pretty(&out)?);
        }
        Format::Text => {
            println!(
                "shifted Fitt^1: {} numerator generators over denominator {:?}{}",
                shifted.numerator().generators().len(),
                shifted.denominator().coeffs(),
                if shifted.denominator_is_zero_divisor() {
                    " (zero divisor at this level)"
                } else {
                    ""
                }
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    suite: &str,
    precision: Option<u32>,
    level_m: Option<u32>,
    level_n: Option<u32>,
    bound: Option<u64>,
    jobs: usize,
    no_timestamp: bool,
    format: Format,
) -> anyhow::Result<ExitCode> {
    let defaults = SuiteOptions::default();
    let opts = SuiteOptions {
        precision: precision.unwrap_or(defaults.precision),
        level_m,
        level_n,
        bound: bound.unwrap_or(defaults.bound),
        with_timing: !no_timestamp,
    };
    let plan = plan_suite(suite, &opts)?;
    let checks = if jobs > 1 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()?
            .install(|| plan.par_iter().map(|spec| execute_check(spec, &opts)).collect())
    } else {
        plan.iter().map(|spec| execute_check(spec, &opts)).collect()
    };
    let mut report = assemble_report(suite, checks);
    if !no_timestamp {
        let now = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        report.timestamp = Some(now.to_string());
    }
    print_report(&report, format)?;
    if report.has_skips() {
        eprintln!(
            "warning: {} check(s) skipped because their inputs exceed the configured bounds",
            report.skipped
        );
    }
    if report.all_green() {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(1))
    }
}

fn print_report(report: &VerificationReport, format: Format) -> anyhow::Result<()> {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(report)?),
        Format::Text => {
            println!(
                "suite {}: {} passed, {} projected-pass, {} failed, {} skipped",
                report.suite, report.passed, report.projected, report.failed, report.skipped
            );
            for check in &report.checks {
                let status = match serde_json::to_value(check.status)? {
                    serde_json::Value::String(s) => s,
                    _ => unreachable!("statuses serialize to strings"),
                };
                let mut line = format!("[{status}] {} :: {}", check.claim, check.subject);
                if let Some(level) = &check.level {
                    line.push_str(&format!(" (M={}, m={}, n={})", level.precision, level.m, level.n));
                }
                if let Some(detail) = &check.detail {
                    line.push_str(&format!(" -- {detail}"));
                }
                println!("{line}");
            }
        }
    }
    Ok(())
}

fn cmd_stickelberger(path: &Path, format: Format) -> anyhow::Result<ExitCode> {
    let req: SticklebergerRequest = read_json(path)?;
    let resp = stickelberger_response(&req)?;
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&resp)?),
        Format::Text => print_stickelberger_text(&resp),
    }
    Ok(ExitCode::SUCCESS)
}

fn print_stickelberger_text(resp: &SticklebergerResponse) {
    println!(
        "conductor {} with S = {:?}, T = {:?}",
        resp.m, resp.s, resp.t
    );
    for (a, [num, den]) in resp.residues.iter().zip(&resp.coeffs) {
        println!("  sigma_{a}: {num}/{den}");
    }
    let integral = if resp.integral_at.is_empty() {
        "not claimed (T empty)".to_string()
    } else {
        format!("{:?}", resp.integral_at)
    };
    println!("integral at: {integral}");
    println!("minus-pure: {}", resp.minus_pure);
}
