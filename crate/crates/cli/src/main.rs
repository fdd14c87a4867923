//! Command-line front end: sample protocol runs, print exact branch tables,
//! quantify information leakage, and run the verification suite.

mod report;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use ricsim_core::analysis::{
    default_grid, dense_grid, mutual_information, verify_all, verify_all_negative_control,
};
use ricsim_core::protocol::{enumerate_branches, sample_distribution, ResourceKind};
use ricsim_core::states::TelecloningParams;
use ricsim_core::tol;

use report::{
    branches_to_csv, counts_to_csv, leak_report, verify_results, verify_to_text, BranchResults,
    BranchRow, CountRow, GridParams, InputParams, Meta, Report, RunResults,
};

#[derive(Parser)]
#[command(
    name = "ricsim",
    version,
    about = "Simulate and verify remote information concentration over GHZ and Smolin resources"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample seeded protocol runs and report outcome counts and fidelity
    Run(RunArgs),
    /// Print the exact 64-row branch table (probability, correction, fidelity)
    Branches(BranchesArgs),
    /// Mutual information the measurement record leaks under a prior of inputs
    Leak(LeakArgs),
    /// Run the full invariant verification suite
    Verify(VerifyArgs),
}

#[derive(Copy, Clone, ValueEnum)]
enum ResourceArg {
    Ghz,
    Smolin,
}

impl From<ResourceArg> for ResourceKind {
    fn from(r: ResourceArg) -> Self {
        match r {
            ResourceArg::Ghz => ResourceKind::Ghz,
            ResourceArg::Smolin => ResourceKind::Smolin,
        }
    }
}

impl ResourceArg {
    fn name(self) -> &'static str {
        match self {
            ResourceArg::Ghz => "ghz",
            ResourceArg::Smolin => "smolin",
        }
    }
}

#[derive(Copy, Clone, PartialEq, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Args)]
struct StateArgs {
    /// Entangled resource shared before the run
    #[arg(long, value_enum)]
    resource: ResourceArg,
    /// Input amplitude alpha
    #[arg(long)]
    alpha: f64,
    /// Input amplitude beta; defaults to +sqrt(1 - alpha^2)
    #[arg(long)]
    beta: Option<f64>,
    /// Asymmetry weight p (q = 1 - p)
    #[arg(long)]
    p: f64,
}

impl StateArgs {
    fn params(&self) -> Result<TelecloningParams, CliError> {
        let params = match self.beta {
            Some(beta) => TelecloningParams::new(self.alpha, beta, self.p),
            None => TelecloningParams::with_default_beta(self.alpha, self.p),
        }
        .map_err(|e| CliError::Usage(e.to_string()))?;
        if !params.in_asymmetric_regime() {
            eprintln!(
                "warning: p = {} does not exceed q = {}; proceeding (the protocol is \
                 defined on all of [0, 1])",
                params.p(),
                params.q()
            );
        }
        Ok(params)
    }
}

#[derive(Args)]
struct OutputArgs {
    /// Output format
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    /// Write to this path instead of standard output
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    state: StateArgs,
    /// Number of protocol runs
    #[arg(long)]
    shots: u64,
    /// Root seed; run i draws from the stream (seed, i)
    #[arg(long, env = "RICSIM_SEED", default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct BranchesArgs {
    #[command(flatten)]
    state: StateArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct LeakArgs {
    /// Entangled resource shared before the run
    #[arg(long, value_enum)]
    resource: ResourceArg,
    /// JSON file holding the prior: an array of {"weight", "alpha", "p"}
    /// entries (optionally "beta"); weights must sum to 1
    #[arg(long)]
    prior: PathBuf,
    /// Write to this path instead of standard output
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Copy, Clone, ValueEnum)]
enum GridArg {
    Default,
    Dense,
}

#[derive(Copy, Clone, PartialEq, ValueEnum)]
enum VerifyFormatArg {
    Text,
    Json,
}

#[derive(Args)]
struct VerifyArgs {
    /// Parameter grid the invariants are swept over
    #[arg(long, value_enum, default_value_t = GridArg::Default)]
    grid: GridArg,
    /// Seed for the sampling consistency checks
    #[arg(long, env = "RICSIM_SEED", default_value_t = 0)]
    seed: u64,
    /// Output format
    #[arg(long, value_enum, default_value_t = VerifyFormatArg::Text)]
    format: VerifyFormatArg,
    /// Write to this path instead of standard output
    #[arg(long)]
    output: Option<PathBuf>,
    /// Corrupt one correction-table entry to prove the harness flags it
    #[arg(long, hide = true)]
    negative_control: bool,
}

enum CliError {
    /// Bad flags or inputs: exit 2.
    Usage(String),
    /// The protocol or an invariant failed: exit 1.
    Protocol(String),
}

fn core_usage(e: ricsim_core::Error) -> CliError {
    CliError::Usage(e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Branches(args) => cmd_branches(args),
        Command::Leak(args) => cmd_leak(args),
        Command::Verify(args) => cmd_verify(args),
    };
    match outcome {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Protocol(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn emit(output: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match output {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| CliError::Usage(format!("cannot write to standard output: {e}")))
        }
    }
}

fn cmd_run(args: RunArgs) -> Result<ExitCode, CliError> {
    let params = args.state.params()?;
    let resource: ResourceKind = args.state.resource.into();
    let counts =
        sample_distribution(resource, &params, args.shots, args.seed).map_err(core_usage)?;
    let branches = enumerate_branches(resource, &params).map_err(core_usage)?;

    // Every sampled run lands in some branch; its fidelity is the branch's
    // post-correction fidelity.
    let mut mean_fidelity = 0.0;
    let mut min_fidelity = 1.0f64;
    for branch in &branches {
        let count = counts[&branch.outcome];
        if count > 0 {
            mean_fidelity += count as f64 * branch.fidelity;
            min_fidelity = min_fidelity.min(branch.fidelity);
        }
    }
    mean_fidelity /= args.shots as f64;

    let count_rows: Vec<CountRow> = branches
        .iter()
        .map(|b| CountRow {
            l: b.outcome.l.value(),
            j: b.outcome.j.value(),
            k: b.outcome.k.value(),
            count: counts[&b.outcome],
        })
        .collect();

    let text = match args.output.format {
        FormatArg::Json => Report {
            meta: Meta::new(
                "run",
                Some(args.state.resource.name().into()),
                Some(args.seed),
            ),
            params: InputParams::from(&params),
            results: RunResults {
                shots: args.shots,
                mean_fidelity,
                min_fidelity,
                counts: count_rows,
            },
        }
        .to_json(),
        FormatArg::Csv => counts_to_csv(&count_rows),
    };
    emit(&args.output.output, &text)?;

    if min_fidelity < 1.0 - tol::ACCUMULATED {
        return Err(CliError::Protocol(format!(
            "post-correction fidelity {min_fidelity} fell below 1 - {:e}",
            tol::ACCUMULATED
        )));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_branches(args: BranchesArgs) -> Result<ExitCode, CliError> {
    let params = args.state.params()?;
    let resource: ResourceKind = args.state.resource.into();
    let rows: Vec<BranchRow> = enumerate_branches(resource, &params)
        .map_err(core_usage)?
        .iter()
        .map(BranchRow::from)
        .collect();

    let text = match args.output.format {
        FormatArg::Json => Report {
            meta: Meta::new("branches", Some(args.state.resource.name().into()), None),
            params: InputParams::from(&params),
            results: BranchResults { branches: rows },
        }
        .to_json(),
        FormatArg::Csv => branches_to_csv(&rows),
    };
    emit(&args.output.output, &text)?;
    Ok(ExitCode::SUCCESS)
}

/// One hypothesis of the prior file: {"weight", "alpha", "p"} with an
/// optional explicit "beta".
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PriorEntry {
    weight: f64,
    alpha: f64,
    #[serde(default)]
    beta: Option<f64>,
    p: f64,
}

fn cmd_leak(args: LeakArgs) -> Result<ExitCode, CliError> {
    let raw = fs::read_to_string(&args.prior)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", args.prior.display())))?;
    let entries: Vec<PriorEntry> = serde_json::from_str(&raw)
        .map_err(|e| CliError::Usage(format!("malformed prior file: {e}")))?;
    let prior: Vec<(f64, TelecloningParams)> = entries
        .iter()
        .map(|e| {
            let params = match e.beta {
                Some(beta) => TelecloningParams::new(e.alpha, beta, e.p),
                None => TelecloningParams::with_default_beta(e.alpha, e.p),
            }
            .map_err(core_usage)?;
            Ok((e.weight, params))
        })
        .collect::<Result<_, CliError>>()?;

    let resource: ResourceKind = args.resource.into();
    let leak = mutual_information(resource, &prior).map_err(core_usage)?;
    let (params, results) = leak_report(&leak);
    let text = Report {
        meta: Meta::new("leak", Some(args.resource.name().into()), None),
        params,
        results,
    }
    .to_json();
    emit(&args.output, &text)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode, CliError> {
    let (grid_name, grid) = match args.grid {
        GridArg::Default => ("default", default_grid()),
        GridArg::Dense => ("dense", dense_grid()),
    };
    let report = if args.negative_control {
        verify_all_negative_control(&grid, args.seed)
    } else {
        verify_all(&grid, args.seed)
    }
    .map_err(core_usage)?;

    let text = match args.format {
        VerifyFormatArg::Text => verify_to_text(&report),
        VerifyFormatArg::Json => Report {
            meta: Meta::new("verify", None, Some(args.seed)),
            params: GridParams {
                grid: grid_name.to_string(),
                points: grid.iter().map(InputParams::from).collect(),
            },
            results: verify_results(&report),
        }
        .to_json(),
    };
    emit(&args.output, &text)?;

    if report.passed() {
        Ok(ExitCode::SUCCESS)
    } else {
        Err(CliError::Protocol(
            "verification failed; see the report above".into(),
        ))
    }
}
