//! Command-line driver: solve a single matrix with any method, or run the
//! Monte Carlo verification harness.
//!
//! Exit codes: 0 success, 2 usage or validation error, 3 singular matrix,
//! 4 simulation discrepancy detected, 5 I/O error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use igm_cli::io::{parse_matrix, LoadError, MatrixFormat};
use igm_cli::output::SolveOutput;
use igm_core::{
    blankmeyer, ligm, nigm, optimize_wls, pigm, run_igm_equivalence, run_wls_verification,
    Error as CoreError, JudgmentScale64, MethodResult64, OptimizerConfig64, Prm64, SimulationMode,
    SimulationReport, VerificationConfig,
};

const EXIT_USAGE: u8 = 2;
const EXIT_SINGULAR: u8 = 3;
const EXIT_DISCREPANCY: u8 = 4;
const EXIT_IO: u8 = 5;

#[derive(Parser)]
#[command(
    name = "igm",
    about = "Priority weights from pairwise reciprocal matrices via inverse Gram matrix methods",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Derive priority weights from a matrix file.
    Solve(SolveArgs),
    /// Run a randomized verification and write trial/summary reports.
    Simulate(SimulateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    /// Inverse of the full Gram matrix, normalized row sums.
    Pigm,
    /// Inverse of the shifted reduced Gram matrix (see --r).
    Nigm,
    /// Bordered solve; also reports the constraint multiplier.
    Ligm,
    /// Legacy unshifted reduced form; fails on consistent matrices.
    Blankmeyer,
    /// Independent derivative-free optimizer (see --seed).
    Wls,
}

#[derive(clap::Args)]
struct SolveArgs {
    /// Matrix file to read.
    #[arg(long)]
    input: PathBuf,

    /// Input format; inferred from the file extension when omitted.
    #[arg(long, value_enum)]
    format: Option<MatrixFormat>,

    /// Prioritization method.
    #[arg(long, value_enum)]
    method: MethodArg,

    /// Shift for nigm (default 1) or ligm (default 0).
    #[arg(long, allow_hyphen_values = true)]
    r: Option<f64>,

    /// Optimizer seed for --method wls.
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Emit machine-readable JSON instead of the table.
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    /// All inverse-Gram methods must agree after rounding.
    IgmEquivalence,
    /// The independent optimizer must agree with the closed form.
    WlsOracle,
}

#[derive(clap::Args)]
struct SimulateArgs {
    /// Which equality to verify.
    #[arg(long, value_enum)]
    mode: ModeArg,

    /// Number of random trials.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    samples: u64,

    /// Largest matrix order to draw.
    #[arg(long, default_value_t = 15, value_parser = clap::value_parser!(u64).range(3..))]
    nmax: u64,

    /// Judgment scale parameter z (points 1/z ... 1 ... z).
    #[arg(long, default_value_t = 9, value_parser = clap::value_parser!(u32).range(1..))]
    scale: u32,

    /// Rounding decimals for the comparison; default 8 (igm-equivalence)
    /// or 4 (wls-oracle).
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=12))]
    epsilon: Option<u32>,

    /// Master seed; every trial seed derives from it.
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Lower end of the shift range.
    #[arg(long, default_value_t = -1000.0, allow_hyphen_values = true)]
    r_min: f64,

    /// Upper end of the shift range.
    #[arg(long, default_value_t = 1000.0, allow_hyphen_values = true)]
    r_max: f64,

    /// Directory for trials.csv and summary.json.
    #[arg(long, default_value = ".")]
    out: PathBuf,

    /// Worker threads (results are identical for any count).
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    workers: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Solve(args) => cmd_solve(&args),
        Command::Simulate(args) => cmd_simulate(&args),
    };
    match code {
        Ok(c) => ExitCode::from(c),
        Err((c, message)) => {
            eprintln!("error: {message}");
            ExitCode::from(c)
        }
    }
}

type CmdResult = Result<u8, (u8, String)>;

fn core_exit_code(e: &CoreError) -> u8 {
    match e {
        CoreError::SingularMatrix { .. } | CoreError::ZeroShiftOnConsistent => EXIT_SINGULAR,
        _ => EXIT_USAGE,
    }
}

fn load_exit(e: LoadError) -> (u8, String) {
    let code = match &e {
        LoadError::Io(_) => EXIT_IO,
        LoadError::Parse(_) => EXIT_USAGE,
        LoadError::Validation(v) => core_exit_code(v),
    };
    (code, e.to_string())
}

struct MethodOutcome {
    label: String,
    weights: igm_core::PriorityVector64,
    lambda: Option<f64>,
    warnings: Vec<String>,
}

fn run_method(prm: &Prm64, args: &SolveArgs) -> Result<MethodOutcome, CoreError> {
    if let MethodArg::Wls = args.method {
        let cfg = OptimizerConfig64 {
            seed: args.seed,
            ..OptimizerConfig64::default()
        };
        let solution = optimize_wls(prm, &cfg)?;
        let mut warnings = Vec::new();
        if solution.budget_exhausted {
            warnings.push(format!(
                "optimizer budget exhausted after {} evaluations",
                solution.evaluations
            ));
        }
        return Ok(MethodOutcome {
            label: "WLS".to_string(),
            weights: solution.weights,
            lambda: None,
            warnings,
        });
    }
    let result: MethodResult64 = match args.method {
        MethodArg::Pigm => pigm(prm)?,
        MethodArg::Nigm => nigm(prm, args.r.unwrap_or(1.0))?,
        MethodArg::Ligm => ligm(prm, args.r.unwrap_or(0.0))?,
        MethodArg::Blankmeyer => blankmeyer(prm)?,
        MethodArg::Wls => unreachable!("handled above"),
    };
    Ok(MethodOutcome {
        label: result.method().to_string(),
        lambda: result.multiplier(),
        warnings: result.diagnostics().iter().map(|d| d.to_string()).collect(),
        weights: result.weights().clone(),
    })
}

fn cmd_solve(args: &SolveArgs) -> CmdResult {
    let doc = parse_matrix(&args.input, args.format).map_err(load_exit)?;
    let prm = doc.prm;

    let outcome = run_method(&prm, args).map_err(|e| {
        let message = match (&e, args.method) {
            (CoreError::SingularMatrix { .. }, MethodArg::Blankmeyer) => format!(
                "{e}; the reduced Gram matrix of a perfectly consistent matrix is \
                 singular, which this legacy method cannot handle — use pigm, nigm \
                 with a nonzero shift, or ligm"
            ),
            _ => e.to_string(),
        };
        (core_exit_code(&e), message)
    })?;

    let objective = prm
        .wls_objective(&outcome.weights)
        .map_err(|e| (EXIT_USAGE, e.to_string()))?;
    let consistency = prm.consistency().map_err(|e| (EXIT_USAGE, e.to_string()))?;

    let out = SolveOutput {
        method: outcome.label,
        weights: outcome.weights.weights().to_vec(),
        lambda: outcome.lambda,
        objective,
        lambda_max: consistency.lambda_max,
        ci: consistency.ci,
        cr: consistency.cr,
        warnings: outcome.warnings,
    };
    if args.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&out.json()).expect("serializable output")
        );
    } else {
        print!("{}", out.table());
    }
    Ok(0)
}

fn cmd_simulate(args: &SimulateArgs) -> CmdResult {
    let mode = match args.mode {
        ModeArg::IgmEquivalence => SimulationMode::IgmEquivalence,
        ModeArg::WlsOracle => SimulationMode::WlsOracle,
    };
    let scale = JudgmentScale64::z_point(args.scale).map_err(|e| (EXIT_USAGE, e.to_string()))?;
    let base = match mode {
        SimulationMode::IgmEquivalence => {
            VerificationConfig::igm_equivalence(args.samples as usize, args.seed)
        }
        SimulationMode::WlsOracle => {
            VerificationConfig::wls_oracle(args.samples as usize, args.seed)
        }
    };
    let cfg = VerificationConfig {
        n_max: args.nmax as usize,
        scale,
        epsilon: args.epsilon.unwrap_or(base.epsilon),
        r_min: args.r_min,
        r_max: args.r_max,
        workers: args.workers as usize,
        ..base
    };

    let report = match mode {
        SimulationMode::IgmEquivalence => run_igm_equivalence(&cfg),
        SimulationMode::WlsOracle => run_wls_verification(&cfg),
    }
    .map_err(|e| (EXIT_USAGE, e.to_string()))?;

    write_reports(&report, &args.out).map_err(|e| (EXIT_IO, e.to_string()))?;

    println!(
        "{} trials of {} run in {:.2} s; reports in {}",
        report.trials.len(),
        cfg.mode.as_str(),
        report.total_elapsed.as_secs_f64(),
        args.out.display()
    );
    if report.budget_exhausted_trials > 0 {
        println!(
            "warning: {} trials exhausted the optimizer budget; raise it and re-run",
            report.budget_exhausted_trials
        );
    }
    if report.error_detected {
        let t = &report.trials[report.first_failure.expect("failure index present")];
        println!(
            "DISCREPANCY at trial {}: seed={} n={} r={} digest={} discrepancy={}{}",
            t.index,
            t.seed,
            t.n,
            t.r,
            t.prm_digest,
            t.discrepancy,
            t.error
                .as_ref()
                .map(|e| format!(" error={e}"))
                .unwrap_or_default()
        );
        Ok(EXIT_DISCREPANCY)
    } else {
        println!("no discrepancy detected");
        Ok(0)
    }
}

fn write_reports(report: &SimulationReport, dir: &std::path::Path) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    let trials = std::fs::File::create(dir.join("trials.csv"))?;
    report.write_trials_csv(trials)?;
    let summary = std::fs::File::create(dir.join("summary.json"))?;
    report.write_summary_json(summary)
}
