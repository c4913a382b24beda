use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use adic_shifts::harness::{self, opspec, CheckParams, Report, ReportFormat};
use adic_shifts::hilbert::TruncatedSpace;
use adic_shifts::Result;

#[derive(Parser)]
#[command(name = "adic-shifts", version, about = "Truncated shifts on the s-adic tree and their identity checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Grid {
    /// Base of the tree
    #[arg(long, default_value_t = 2)]
    s: u32,
    /// Truncation depth N (levels 0..=N)
    #[arg(long, default_value_t = 6)]
    depth: u32,
}

#[derive(Args)]
struct Run {
    #[command(flatten)]
    grid: Grid,
    /// Override every check's tolerance
    #[arg(long)]
    tol: Option<f64>,
    /// Seed for randomized inputs
    #[arg(long, env = harness::SEED_ENV)]
    seed: Option<u64>,
}

impl Run {
    fn params(&self) -> CheckParams {
        let mut p = CheckParams::new(self.grid.s, self.grid.depth).with_seed(self.seed.unwrap_or(harness::DEFAULT_SEED));
        if let Some(t) = self.tol {
            p = p.with_tol(t);
        }
        p
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run one named check
    Check {
        #[arg(long)]
        name: String,
        #[command(flatten)]
        run: Run,
        #[arg(long, default_value = "json")]
        format: ReportFormat,
    },
    /// Run every check matching a glob or family name
    Suite {
        #[arg(long, default_value = "*")]
        filter: String,
        #[arg(long, default_value = "json")]
        format: ReportFormat,
        /// Write the report here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        run: Run,
    },
    /// List registered checks
    List,
    /// Print an operator's nonzero entries
    Dump {
        #[arg(long)]
        op: String,
        #[command(flatten)]
        grid: Grid,
    },
    /// Print an operator's spectral norm
    Norm {
        #[arg(long)]
        op: String,
        #[command(flatten)]
        grid: Grid,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
}

fn emit(report: &Report, format: ReportFormat, out: Option<&PathBuf>) -> Result<()> {
    match out {
        Some(path) => report.write(path, format),
        None => {
            println!("{}", report.render(format));
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Check { name, run, format } => {
            let params = run.params();
            let result = harness::run_check(&name, &params)?;
            let report = Report::new(name, params.s, params.depth, std::slice::from_ref(&result));
            emit(&report, format, None)?;
            Ok(report.passed)
        }
        Command::Suite {
            filter,
            format,
            out,
            run,
        } => {
            let params = run.params();
            let results = harness::run_suite(&filter, &params)?;
            let report = Report::new(filter, params.s, params.depth, &results);
            emit(&report, format, out.as_ref())?;
            for c in report.checks.iter().filter(|c| !c.pass) {
                eprintln!("FAIL {} residual={:e} tol={:e} {}", c.name, c.max_residual, c.tolerance, c.notes.join("; "));
            }
            Ok(report.passed)
        }
        Command::List => {
            for spec in harness::registry() {
                println!("{:<28} {:<14} {:<26} {:e}", spec.name, spec.family, spec.paper_ref, spec.tolerance);
            }
            Ok(true)
        }
        Command::Dump { op, grid } => {
            let space = TruncatedSpace::new(grid.s, grid.depth)?;
            print!("{}", opspec::parse(space, &op)?.dump());
            Ok(true)
        }
        Command::Norm { op, grid, tol } => {
            let space = TruncatedSpace::new(grid.s, grid.depth)?;
            println!("{:.16e}", opspec::parse(space, &op)?.spectral_norm(tol)?);
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
