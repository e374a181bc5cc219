use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use nckit::config::{ConfigFile, ThetaConfig};
use nckit::expr;
use nckit::gridcheck::grid_check_file;
use nckit::pwreport::planewave_report;
use nckit::report::{Body, ReduceReport, Report};
use nckit::suites::{default_cases, run_suite, SuiteOptions};
use nckit::{CliError, Result, EXIT_FAIL, EXIT_PASS, EXIT_USAGE};
use nckit_core::StarContext;

/// Exact computer algebra for time-dependent Moyal star products.
#[derive(Debug, Parser)]
#[command(name = "nckit", version)]
struct Cli {
    /// TOML file with a [theta] section; default theta^12 = t, others 0.
    #[arg(long, global = true, value_name = "FILE")]
    theta: Option<PathBuf>,

    /// Seed for verification suites.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,

    /// Number of cases (default depends on the suite).
    #[arg(long, global = true)]
    cases: Option<usize>,

    /// eps cutoff N: results are reduced mod eps^(N+1).
    #[arg(long, global = true, value_name = "N")]
    order: Option<u32>,

    /// Write the JSON report here ("-" for stdout instead of the table).
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Reduce an expression to normal-ordered canonical form ("-" reads stdin).
    Reduce { expr: String },
    /// Run a seeded verification suite: star, calculus, gauge, scalar, planewave or grid.
    Verify { suite: String },
    /// Effective action, polarisation and harmonics of a plane-wave spec file.
    Planewave { specfile: PathBuf },
    /// Trace, cyclicity, associativity and phase-law oracles on a grid file.
    GridCheck { gridfile: PathBuf },
}

fn theta_config(cli: &Cli, fallback: Option<ThetaConfig>) -> Result<ThetaConfig> {
    match &cli.theta {
        Some(path) => ConfigFile::load(path)?
            .theta
            .ok_or_else(|| CliError::Config(format!("{}: no [theta] section", path.display()))),
        None => Ok(fallback.unwrap_or_default()),
    }
}

fn context(theta: &ThetaConfig, order: Option<u32>) -> Result<StarContext> {
    let ctx = StarContext::new(theta.profile()?);
    Ok(match order {
        Some(n) => ctx.with_cutoff(n),
        None => ctx,
    })
}

fn execute(cli: &Cli) -> Result<Report> {
    let start = Instant::now();
    let (body, theta) = match &cli.command {
        Command::Reduce { expr: src } => {
            let src = if src == "-" {
                let mut s = String::new();
                std::io::stdin().read_to_string(&mut s).map_err(|source| CliError::Io {
                    path: "<stdin>".into(),
                    source,
                })?;
                s
            } else {
                src.clone()
            };
            let th = theta_config(cli, None)?;
            let output = expr::reduce(&src, &context(&th, cli.order)?)?;
            (
                Body::Reduce(ReduceReport {
                    input: src,
                    output,
                }),
                Some(th),
            )
        }
        Command::Verify { suite } => {
            let mut opts = SuiteOptions::new(cli.seed, cli.cases.unwrap_or_else(|| default_cases(suite)));
            if let Some(n) = cli.order {
                opts.order = n;
            }
            let mut theta = None;
            if let Some(path) = &cli.theta {
                let file = ConfigFile::load(path)?;
                if let Some(g) = file.grid {
                    opts.grid = g;
                }
                if let Some(t) = file.theta {
                    opts.theta = Some(t.profile()?);
                    theta = Some(t);
                }
            }
            (Body::Verify(run_suite(suite, &opts)?), theta)
        }
        Command::Planewave { specfile } => {
            let file = ConfigFile::load(specfile)?;
            let pw = file
                .planewave
                .ok_or_else(|| CliError::Config(format!("{}: no [planewave] section", specfile.display())))?;
            let th = theta_config(cli, file.theta)?;
            let report = planewave_report(&pw.spec()?, &context(&th, None)?)?;
            (Body::Planewave(report), Some(th))
        }
        Command::GridCheck { gridfile } => (Body::GridCheck(grid_check_file(gridfile)?), None),
    };
    Ok(Report::new(body, theta, start.elapsed().as_millis()))
}

fn emit(cli: &Cli, report: &Report) -> Result<()> {
    match &cli.json {
        Some(p) if p.as_os_str() == "-" => println!("{}", report.to_json()),
        Some(p) => {
            print!("{report}");
            std::fs::write(p, report.to_json() + "\n").map_err(|source| CliError::Io {
                path: p.display().to_string(),
                source,
            })?;
        }
        None => print!("{report}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    let code = match execute(&cli).and_then(|r| emit(&cli, &r).map(|_| r.passed)) {
        Ok(true) => EXIT_PASS,
        Ok(false) => EXIT_FAIL,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    };
    ExitCode::from(code as u8)
}
