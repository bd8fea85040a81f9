use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use sosdiag::format::{edge_list, parse_ideal, read_form};
use sosdiag::report::{Envelope, Report};
use sosdiag::run::{self, AnalyzeOptions, RunError, VerifyOptions};
use sosdiag_core::hermitian::MinRankOptions;
use sosdiag_core::newton::NewtonGraph;
use sosdiag_core::verify::SweepMode;

/// Diagnostics for diagonal Hermitian sums of squares and monomial ball maps.
///
/// Exit codes: 0 pass, 1 violation found, 2 usage or parse error, 3 incomplete.
#[derive(Parser)]
#[command(name = "sosdiag", version)]
struct Cli {
    /// Print the report as JSON instead of a table.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for sweeps (default: available cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Seed for random sampling and the audit subsample.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Also write the JSON report to this file.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze one form q, or a set of negative generators with --ideal.
    Analyze(AnalyzeArgs),
    /// Sweep sign patterns in three variables.
    Verify(VerifyArgs),
    /// Search for the fewest-term proper monomial map of a given degree.
    Ballmap(BallmapArgs),
    /// Recompute the degree-3 fixture configurations.
    Fixtures,
    /// Print the table for a saved JSON report.
    Render {
        /// Report file, or `-` for stdin.
        path: String,
    },
}

#[derive(Args)]
struct AnalyzeArgs {
    /// File path, `-` for stdin, or the polynomial itself.
    input: String,
    /// Number of variables (default: largest index used).
    #[arg(long)]
    n: Option<usize>,
    /// Read the input as ideal generators, one monomial per line.
    #[arg(long)]
    ideal: bool,
    /// Compute minimum ranks over all magnitudes with this sign pattern.
    #[arg(long)]
    min_rank: bool,
    /// Draw the Newton diagram (three variables only).
    #[arg(long)]
    diagram: bool,
    /// Write the Newton graph as a tab-separated edge list.
    #[arg(long, value_name = "PATH")]
    edges: Option<PathBuf>,
    /// Largest ambiguous set the minimum-rank search accepts.
    #[arg(long, default_value_t = 24)]
    ambiguous_cap: usize,
    /// Give up the minimum-rank search after this many linear programs.
    #[arg(long)]
    lp_budget: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exhaustive,
    Random,
}

#[derive(Args)]
struct VerifyArgs {
    /// Degree d-1 of q.
    #[arg(long)]
    degree: u32,
    #[arg(long, value_enum, default_value_t = Mode::Exhaustive)]
    mode: Mode,
    /// Patterns drawn in random mode.
    #[arg(long, default_value_t = 100_000)]
    samples: u64,
    /// Also check the three-variable rank theorem on connected primitive patterns.
    #[arg(long)]
    lp: bool,
    #[arg(long, default_value_t = 24)]
    ambiguous_cap: usize,
}

#[derive(Args)]
struct BallmapArgs {
    #[arg(long, default_value_t = 2)]
    n: usize,
    #[arg(long)]
    d: u32,
    /// Give up after this many candidate supports.
    #[arg(long)]
    budget: Option<u64>,
}

fn read_source(source: &str) -> Result<String, RunError> {
    if source == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else if std::path::Path::new(source).is_file() {
        Ok(std::fs::read_to_string(source)?)
    } else {
        Ok(source.to_string())
    }
}

fn analyze(args: &AnalyzeArgs) -> Result<Report, RunError> {
    let text = read_source(&args.input)?;
    if args.ideal {
        return Ok(Report::Configuration(run::configuration(&parse_ideal(&text, args.n)?)?));
    }
    let q = read_form(&text, args.n)?;
    if let Some(path) = &args.edges {
        std::fs::write(path, edge_list(&NewtonGraph::of_form(&q)))?;
    }
    let opts = AnalyzeOptions {
        min_rank: args.min_rank,
        diagram: args.diagram,
        rank: MinRankOptions { ambiguous_cap: args.ambiguous_cap, reversed: false, lp_budget: args.lp_budget },
    };
    Ok(Report::Analyze(run::analyze(&q, &opts)?))
}

fn execute(cli: &Cli) -> Result<Report, RunError> {
    let workers = cli.workers.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    match &cli.command {
        Command::Analyze(args) => analyze(args),
        Command::Verify(args) => {
            let mode = match args.mode {
                Mode::Exhaustive => SweepMode::Exhaustive,
                Mode::Random => SweepMode::Random { samples: args.samples },
            };
            let opts = VerifyOptions {
                dm1: args.degree,
                mode,
                seed: cli.seed,
                workers,
                lp: args.lp,
                ambiguous_cap: args.ambiguous_cap,
            };
            Ok(Report::Verify(run::verify(&opts)?))
        }
        Command::Ballmap(args) => Ok(Report::Ballmap(run::ballmap(args.n, args.d, args.budget)?)),
        Command::Fixtures => Ok(Report::Fixtures(run::fixtures())),
        Command::Render { path } => {
            let text = read_source(path)?;
            Ok(Envelope::from_json(&text).map_err(RunError::Range)?.report)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = match execute(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code());
        }
    };
    let code = report.exit_code();
    let envelope = Envelope::new(report);
    if let Some(path) = &cli.out {
        if let Err(e) = std::fs::write(path, envelope.to_json() + "\n") {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    if cli.json {
        println!("{}", envelope.to_json());
    } else {
        print!("{envelope}");
    }
    ExitCode::from(code)
}
