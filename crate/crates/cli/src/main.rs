use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use solvlie::config::RunConfig;
use solvlie::error::Error;
use solvlie::scalars::expr::parse_assignments;
use solvlie_cli::{cmd_coframe, cmd_multiply, cmd_pfaff, cmd_reduce, cmd_validate, error_json, parse_mode, Outcome};

#[derive(Parser)]
#[command(name = "solvlie", version, about = "Coframes, group laws and first integrals for solvable Lie algebras")]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Opts {
    /// Coefficients at or below this magnitude are treated as zero
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol_zero: f64,
    /// Relative tolerance for sampled checks
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol_sample: f64,
    #[arg(long, global = true, default_value_t = 100)]
    samples: usize,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Integration basepoint, e.g. "ux=1,uxx=1"
    #[arg(long, global = true)]
    basepoint: Option<String>,
    /// Stop the reduction after this many quadratures
    #[arg(long, global = true)]
    stop_after: Option<usize>,
    /// symbolic, numeric or auto
    #[arg(long, global = true, default_value = "auto")]
    mode: String,
    /// Write the report here instead of stdout
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check Jacobi, solvability and build an adapted chain
    Validate { algebra: PathBuf },
    /// Left-invariant coframe and frame on R^n
    Coframe { algebra: PathBuf },
    /// Group law with axiom checks and the pre-adjoint cross-check
    Multiply { algebra: PathBuf },
    /// Reduce a Maurer-Cartan system to exact differentials
    Reduce { algebra: PathBuf, forms: PathBuf },
    /// First integrals of a Pfaffian system with solvable symmetry
    Pfaff { system: PathBuf },
}

fn config(o: &Opts) -> Result<RunConfig, Error> {
    let cfg = RunConfig {
        zero_tol: o.tol_zero,
        sample_tol: o.tol_sample,
        samples: o.samples,
        seed: o.seed,
        basepoint: o.basepoint.as_deref().map(parse_assignments).transpose()?.unwrap_or_default(),
        mode: parse_mode(&o.mode)?,
        stop_after: o.stop_after,
    };
    cfg.apply()?;
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    let cfg = config(&cli.opts)?;
    match &cli.cmd {
        Cmd::Validate { algebra } => cmd_validate(algebra, &cfg),
        Cmd::Coframe { algebra } => cmd_coframe(algebra, &cfg),
        Cmd::Multiply { algebra } => cmd_multiply(algebra, &cfg),
        Cmd::Reduce { algebra, forms } => cmd_reduce(algebra, forms, &cfg),
        Cmd::Pfaff { system } => cmd_pfaff(system, &cfg),
    }
}

fn emit(cli: &Cli, v: &serde_json::Value) {
    let text = serde_json::to_string_pretty(v).expect("serializable") + "\n";
    match &cli.opts.output {
        Some(p) => {
            if let Err(e) = std::fs::write(p, text) {
                eprintln!("cannot write {}: {e}", p.display());
            }
        }
        None => print!("{text}"),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            emit(&cli, &out.report);
            if out.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            emit(&cli, &error_json(&e));
            ExitCode::from(2)
        }
    }
}
