//! Command-line front end.
//!
//! Every subcommand prints one JSON summary to stdout (and writes it to
//! `--out` when given). The exit status is 0 when every check performed
//! passed, 1 when some check failed, and 2 on usage, input or I/O errors.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::capacity::product_mass_on;
use crate::capacity::ProductFrame;
use crate::capacity::{
    capacity_from_mass, check_axioms, check_total_monotonicity, dual_capacity, is_additive,
    Counterexample, Frame, MonotonicityReport, IDENTITY_TOLERANCE,
};
use crate::choquet::{choquet_integral, integral_interval, upper_choquet_integral};
use crate::document::{load_spec, CapacitySpec};
use crate::error::{Error, Result};
use crate::output::{emit_simulation, to_json, SimulationSummary};
use crate::random_sets::{aumann_integral, selection_integral_oracle, Interval, RealCompactSet};
use crate::representation::{compose_rv, correspondence_from_mass, lower_distribution};
use crate::slln::{
    run_slln_experiment, verify_identical_distribution, verify_pairwise_independence,
    ExperimentConfig, VerifierReport,
};

#[derive(Debug, Parser)]
#[command(
    name = "capacity-lln",
    version,
    about = "Totally monotone capacities, Choquet integrals and strong-law simulations"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Input document (JSON).
    #[arg(long)]
    pub spec: PathBuf,
    /// Read the `capacity` table instead of the `mass` section.
    #[arg(long)]
    pub table: bool,
    /// Directory for result files.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the capacity axioms and total monotonicity.
    Validate {
        #[command(flatten)]
        common: Common,
        /// Largest collection size for the total-monotonicity check.
        #[arg(long, default_value_t = 3)]
        nmax: usize,
    },
    /// Lower and upper Choquet integrals of the document's random variable.
    Choquet {
        #[command(flatten)]
        common: Common,
    },
    /// Focal-set correspondence and its round-trip checks.
    Represent {
        #[command(flatten)]
        common: Common,
    },
    /// Monte Carlo run of the strong law.
    Simulate {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 100_000)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        replications: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Gate tolerance; defaults to 4·σ/√n from the extreme selections.
        #[arg(long)]
        tolerance: Option<f64>,
        #[arg(long, default_value_t = 0.1)]
        tail_fraction: f64,
        /// Leading steps compared with the exact Minkowski average.
        #[arg(long, default_value_t = 12)]
        exact_n: usize,
        /// Rows kept per trace file.
        #[arg(long, default_value_t = 1000)]
        trace_points: usize,
    },
    /// Exact pairwise-independence and identical-distribution checks.
    VerifyIndependence {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, Serialize)]
struct LabeledCounterexample {
    axiom: crate::capacity::Axiom,
    sets: Vec<Vec<String>>,
    lhs: f64,
    rhs: f64,
}

#[derive(Debug, Serialize)]
struct LabeledReport {
    passed: bool,
    method: crate::capacity::CheckMethod,
    evaluated: u64,
    counterexamples: Vec<LabeledCounterexample>,
}

fn labeled(frame: &Frame, report: &MonotonicityReport) -> LabeledReport {
    let label = |c: &Counterexample| LabeledCounterexample {
        axiom: c.axiom,
        sets: c
            .sets
            .iter()
            .map(|s| frame.labels_of(*s).into_iter().map(String::from).collect())
            .collect(),
        lhs: c.lhs,
        rhs: c.rhs,
    };
    LabeledReport {
        passed: report.passed,
        method: report.method,
        evaluated: report.evaluated,
        counterexamples: report.counterexamples.iter().map(label).collect(),
    }
}

#[derive(Debug, Serialize)]
struct ValidateSummary {
    command: &'static str,
    pass: bool,
    axioms: LabeledReport,
    total_monotonicity: Option<LabeledReport>,
    additive: bool,
}

#[derive(Debug, Serialize)]
struct ChoquetSummary {
    command: &'static str,
    pass: bool,
    lower: f64,
    upper: f64,
    interval: Interval,
    upper_via_dual: f64,
    additive: bool,
}

#[derive(Debug, Serialize)]
struct CellView {
    weight: f64,
    focal: Vec<String>,
}

#[derive(Debug, Serialize)]
struct ComposedView {
    cells: Vec<(f64, RealCompactSet)>,
    aumann: Interval,
    integral_interval: Interval,
    selection_hull: Option<Interval>,
}

#[derive(Debug, Serialize)]
struct RepresentSummary {
    command: &'static str,
    pass: bool,
    cells: Vec<CellView>,
    round_trip_exact: bool,
    composed: Option<ComposedView>,
}

#[derive(Debug, Serialize)]
struct IndependenceSummary {
    command: &'static str,
    pass: bool,
    joint_source: &'static str,
    pairwise_independence: VerifierReport,
    identical_distribution: VerifierReport,
}

fn load(common: &Common) -> Result<CapacitySpec> {
    let text = fs::read_to_string(&common.spec)?;
    let spec = load_spec(&text)?;
    if common.table && spec.table.is_none() {
        return Err(Error::Usage(
            "--table given but the document has no capacity section".into(),
        ));
    }
    Ok(spec)
}

fn emit<T: Serialize>(value: &T, out: Option<&Path>, stdout: &mut dyn Write) -> Result<()> {
    let json = to_json(value)?;
    if let Some(dir) = out {
        fs::create_dir_all(dir)?;
        fs::write(dir.join("summary.json"), &json)?;
    }
    stdout.write_all(json.as_bytes())?;
    Ok(())
}

fn validate(common: &Common, nmax: usize, stdout: &mut dyn Write) -> Result<bool> {
    let spec = load(common)?;
    let capacity = match (&spec.table, common.table || spec.mass.is_none()) {
        (Some(table), true) => table.clone(),
        _ => capacity_from_mass(&spec.mass_function()?),
    };
    let axioms = check_axioms(&capacity);
    // total monotonicity presupposes the basic axioms
    let total = axioms
        .passed
        .then(|| check_total_monotonicity(&capacity, nmax))
        .transpose()?;
    let pass = axioms.passed && total.as_ref().is_some_and(|r| r.passed);
    let summary = ValidateSummary {
        command: "validate",
        pass,
        axioms: labeled(&spec.frame, &axioms),
        total_monotonicity: total.as_ref().map(|r| labeled(&spec.frame, r)),
        additive: axioms.passed && is_additive(&capacity),
    };
    emit(&summary, common.out.as_deref(), stdout)?;
    Ok(pass)
}

fn choquet(common: &Common, stdout: &mut dyn Write) -> Result<bool> {
    let spec = load(common)?;
    let capacity = capacity_from_mass(&spec.mass_function()?);
    let rv = spec.require_rv()?;
    let lower = choquet_integral(rv, &capacity)?;
    let upper = upper_choquet_integral(rv, &capacity)?;
    let interval = integral_interval(rv, &capacity)?;
    let upper_via_dual = choquet_integral(rv, &dual_capacity(&capacity))?;
    let pass =
        lower <= upper + IDENTITY_TOLERANCE && (upper - upper_via_dual).abs() <= IDENTITY_TOLERANCE;
    let summary = ChoquetSummary {
        command: "choquet",
        pass,
        lower,
        upper,
        interval,
        upper_via_dual,
        additive: is_additive(&capacity),
    };
    emit(&summary, common.out.as_deref(), stdout)?;
    Ok(pass)
}

fn represent(common: &Common, stdout: &mut dyn Write) -> Result<bool> {
    let spec = load(common)?;
    let mass = spec.mass_function()?;
    let capacity = capacity_from_mass(&mass);
    let correspondence = correspondence_from_mass(&mass);
    let round_trip_exact = lower_distribution(&correspondence) == capacity;
    let cells = correspondence
        .cells()
        .iter()
        .map(|c| CellView {
            weight: c.weight,
            focal: spec
                .frame
                .labels_of(c.focal)
                .into_iter()
                .map(String::from)
                .collect(),
        })
        .collect();
    let mut pass = round_trip_exact;
    let composed = match &spec.rv {
        None => None,
        Some(rv) => {
            let real = compose_rv(rv, &correspondence)?;
            let aumann = aumann_integral(&real);
            let target = integral_interval(rv, &capacity)?;
            let selection_hull = match selection_integral_oracle(&real) {
                Ok(hull) => Some(hull),
                Err(Error::SetTooLarge { .. }) => None,
                Err(e) => return Err(e),
            };
            pass &= (aumann.lo() - target.lo()).abs() <= IDENTITY_TOLERANCE
                && (aumann.hi() - target.hi()).abs() <= IDENTITY_TOLERANCE;
            pass &= selection_hull.is_none_or(|h| h == aumann);
            Some(ComposedView {
                cells: real
                    .cells()
                    .iter()
                    .map(|c| (c.weight, c.value.clone()))
                    .collect(),
                aumann,
                integral_interval: target,
                selection_hull,
            })
        }
    };
    let summary = RepresentSummary {
        command: "represent",
        pass,
        cells,
        round_trip_exact,
        composed,
    };
    emit(&summary, common.out.as_deref(), stdout)?;
    Ok(pass)
}

#[allow(clippy::too_many_arguments)]
fn simulate(
    common: &Common,
    n: usize,
    replications: usize,
    seed: u64,
    tolerance: Option<f64>,
    tail_fraction: f64,
    exact_n: usize,
    trace_points: usize,
    stdout: &mut dyn Write,
) -> Result<bool> {
    let spec = load(common)?;
    let mass = spec.mass_function()?;
    let rv = spec.require_rv()?.clone();
    let mut cfg = ExperimentConfig::new(mass, rv, n, replications, seed)?;
    cfg.tail_fraction = tail_fraction;
    if let Some(t) = tolerance {
        cfg.tolerance = t;
    }
    cfg.exact_n = exact_n;
    cfg.trace_points = trace_points;
    cfg.validate()?;
    let report = run_slln_experiment(&cfg)?;
    let summary = match &common.out {
        Some(dir) => emit_simulation(&report, dir)?.0,
        None => SimulationSummary {
            command: "simulate".into(),
            pass: report.pass && report.exact_bridge_ok(),
            exact_bridge_ok: report.exact_bridge_ok(),
            trace_files: Vec::new(),
            report,
        },
    };
    stdout.write_all(to_json(&summary)?.as_bytes())?;
    Ok(summary.pass)
}

fn verify_independence(common: &Common, stdout: &mut dyn Write) -> Result<bool> {
    let spec = load(common)?;
    let rv = spec.require_rv()?;
    let (product, joint, source) = match &spec.joint {
        Some((product, joint)) => (product.clone(), joint.clone(), "document"),
        None => {
            let mass = spec.mass_function()?;
            let product = ProductFrame::new(&spec.frame, &spec.frame)?;
            let joint = product_mass_on(&product, &mass, &mass)?;
            (product, joint, "product")
        }
    };
    let x1 = rv.lift_first(&product)?;
    let x2 = rv.lift_second(&product)?;
    let pairwise = verify_pairwise_independence(&joint, &x1, &x2)?;
    let identical = verify_identical_distribution(&joint, &x1, &x2)?;
    let summary = IndependenceSummary {
        command: "verify-independence",
        pass: pairwise.passed && identical.passed,
        joint_source: source,
        pairwise_independence: pairwise,
        identical_distribution: identical,
    };
    emit(&summary, common.out.as_deref(), stdout)?;
    Ok(summary.pass)
}

/// Runs a parsed command, writing the summary to `stdout`. Returns whether
/// every check passed.
pub fn run(cli: &Cli, stdout: &mut dyn Write) -> Result<bool> {
    match &cli.command {
        Command::Validate { common, nmax } => validate(common, *nmax, stdout),
        Command::Choquet { common } => choquet(common, stdout),
        Command::Represent { common } => represent(common, stdout),
        Command::Simulate {
            common,
            n,
            replications,
            seed,
            tolerance,
            tail_fraction,
            exact_n,
            trace_points,
        } => simulate(
            common,
            *n,
            *replications,
            *seed,
            *tolerance,
            *tail_fraction,
            *exact_n,
            *trace_points,
            stdout,
        ),
        Command::VerifyIndependence { common } => verify_independence(common, stdout),
    }
}

/// Parses `args`, runs, and maps the outcome to an exit code.
pub fn run_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        // --help and --version are not errors
        Err(e) if !e.use_stderr() => {
            let _ = write!(stdout, "{e}");
            return 0;
        }
        Err(e) => {
            let message = e.to_string();
            let message = message.strip_prefix("error: ").unwrap_or(&message);
            let usage = Error::Usage(message.trim_end().to_string());
            let _ = writeln!(stderr, "error[{}]: {usage}", usage.code());
            return 2;
        }
    };
    match run(&cli, stdout) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            let _ = writeln!(stderr, "error[{}]: {e}", e.code());
            2
        }
    }
}

pub fn main() -> ExitCode {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let code = run_with_args(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock());
    ExitCode::from(code)
}
