//! `parabola`: construct, certify and measure the parabola graph.
//!
//! Exit codes: 0 when every certificate passes, 1 when one fails, 2 on
//! usage or input errors.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use parabola_core::Prime;

#[derive(Parser, Debug)]
#[command(name = "parabola", version, about = "Parabola graph constructions and certificates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Vertex and edge counts, loop census and degree profile.
    Info(InfoArgs),
    /// Certify C4-freeness, the degree profile and grid independence.
    Check(CheckArgs),
    /// The independent grid and its size against p^{3/2}/16.
    Grid(GridArgs),
    /// Independent sets by oracle, greedy, exact or best-of search.
    Mis(MisArgs),
    /// Adjacency spectrum diagnostics for one prime or a range.
    Spectrum(SpectrumArgs),
    /// One row per odd prime in a range, with an optional growth fit.
    Scan(ScanArgs),
    /// Write the edge list as DIMACS or CSV.
    Export(ExportArgs),
}

fn parse_prime(s: &str) -> Result<Prime, String> {
    let raw: u64 = s.trim().parse().map_err(|e| format!("{s:?}: {e}"))?;
    Prime::new(raw).map_err(|e| e.to_string())
}

#[derive(Args, Debug)]
struct PrimeArg {
    /// Odd prime p.
    #[arg(long, env = "PARABOLA_P", value_parser = parse_prime)]
    p: Prime,
}

#[derive(Args, Debug)]
struct InfoArgs {
    #[command(flatten)]
    prime: PrimeArg,
    /// Write a JSON report here.
    #[arg(long, env = "PARABOLA_OUT")]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[command(flatten)]
    prime: PrimeArg,
    /// Run the full pair scan even above the default cap of p = 31.
    #[arg(long)]
    full: bool,
    /// Only verify the grid; skip graph construction.
    #[arg(long, conflicts_with = "full")]
    grid_only: bool,
    /// Write the JSON certification report here.
    #[arg(long, env = "PARABOLA_OUT")]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Dimacs,
}

#[derive(Args, Debug)]
struct GridArgs {
    #[command(flatten)]
    prime: PrimeArg,
    #[arg(long, env = "PARABOLA_OUT")]
    out: Option<PathBuf>,
    /// Output format for --out (csv or json).
    #[arg(long, env = "PARABOLA_FORMAT", value_enum, default_value = "json")]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Oracle,
    Greedy,
    Exact,
    Best,
}

#[derive(Args, Debug)]
struct BudgetArgs {
    /// Wall-clock limit per exact solve.
    #[arg(long, env = "PARABOLA_BUDGET_SECS", default_value_t = 60)]
    budget_secs: u64,
    /// Branch-and-bound node limit per exact solve.
    #[arg(long, env = "PARABOLA_BUDGET_NODES")]
    budget_nodes: Option<u64>,
}

#[derive(Args, Debug)]
struct MisArgs {
    /// Odd prime p (not needed with --verify).
    #[arg(long, env = "PARABOLA_P", value_parser = parse_prime, required_unless_present = "verify")]
    p: Option<Prime>,
    #[arg(long, value_enum, default_value = "best")]
    method: Method,
    #[command(flatten)]
    budget: BudgetArgs,
    /// Write the JSON result here.
    #[arg(long, env = "PARABOLA_OUT")]
    out: Option<PathBuf>,
    /// Re-verify a previously written JSON result instead of solving.
    #[arg(long, conflicts_with = "method")]
    verify: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SpectrumArgs {
    #[arg(long, env = "PARABOLA_P", value_parser = parse_prime, conflicts_with_all = ["pmin", "pmax"])]
    p: Option<Prime>,
    #[arg(long, env = "PARABOLA_PMIN", requires = "pmax")]
    pmin: Option<u64>,
    #[arg(long, env = "PARABOLA_PMAX", requires = "pmin")]
    pmax: Option<u64>,
    /// Eigenpair residual tolerance; defaults to 1e-8 p.
    #[arg(long, env = "PARABOLA_TOL")]
    tol: Option<f64>,
    /// Write the CSV table here.
    #[arg(long, env = "PARABOLA_OUT")]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Fit {
    /// Largest set found per prime.
    Best,
    /// Grid size only.
    Grid,
}

#[derive(Args, Debug)]
struct ScanArgs {
    #[arg(long, env = "PARABOLA_PMIN")]
    pmin: u64,
    #[arg(long, env = "PARABOLA_PMAX")]
    pmax: u64,
    /// Run the exact solver on every constructed graph.
    #[arg(long)]
    exact: bool,
    /// Compute λ_min and the ratio diagnostic.
    #[arg(long)]
    spectral: bool,
    /// Wall-clock limit per exact solve.
    #[arg(long, env = "PARABOLA_BUDGET_SECS", default_value_t = 60)]
    budget_secs: u64,
    /// Node limit per exact solve.
    #[arg(long, env = "PARABOLA_BUDGET_NODES", default_value_t = parabola_core::scan::DEFAULT_EXACT_NODES)]
    budget_nodes: u64,
    /// Build graphs (and fill graph columns) only up to this p.
    #[arg(long, env = "PARABOLA_GRAPH_MAX", default_value_t = parabola_core::scan::DEFAULT_GRAPH_MAX_P)]
    graph_max: u64,
    #[arg(long, env = "PARABOLA_JOBS", default_value_t = 1)]
    jobs: usize,
    #[arg(long, env = "PARABOLA_TOL")]
    tol: Option<f64>,
    /// Append a log-log growth fit using this column.
    #[arg(long, value_enum)]
    fit: Option<Fit>,
    /// Fill elapsed_ms with wall-clock times (output is then not reproducible).
    #[arg(long)]
    timing: bool,
    #[arg(long, env = "PARABOLA_OUT")]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ExportArgs {
    #[command(flatten)]
    prime: PrimeArg,
    #[arg(long, env = "PARABOLA_FORMAT", value_enum, default_value = "dimacs")]
    format: Format,
    #[arg(long, env = "PARABOLA_OUT")]
    out: PathBuf,
}

/// Command outcome, mapped onto the exit-code contract.
#[derive(Debug)]
pub enum Outcome {
    Pass,
    CertificateFailed,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let result = match cli.command {
        Command::Info(a) => commands::info(a),
        Command::Check(a) => commands::check(a),
        Command::Grid(a) => commands::grid(a),
        Command::Mis(a) => commands::mis(a),
        Command::Spectrum(a) => commands::spectrum(a),
        Command::Scan(a) => commands::scan(a),
        Command::Export(a) => commands::export(a),
    };
    match result {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::CertificateFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
