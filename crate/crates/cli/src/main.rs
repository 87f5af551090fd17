mod complexes;
mod input;
mod maps;
mod output;
mod transform;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::output::{Outcome, Report};

const DEFAULT_SEED: u64 = 20240611;

#[derive(Parser, Debug)]
#[command(name = "novikov", version, about = "Counting functions, Novikov complexes, torsion and zeta functions")]
struct Cli {
  #[command(flatten)]
  global: Global,
  #[command(subcommand)]
  command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
  /// Truncation level K (integer or p/q).
  #[arg(long, global = true, default_value = "16")]
  truncation: String,
  /// Seed for randomized checks.
  #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
  seed: u64,
  /// Tail bound below which a truncated sum counts as converged.
  #[arg(long, global = true, default_value_t = novikov_core::tolerances::DEFAULT_VERDICT_TOL)]
  tolerance: f64,
  #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
  format: Format,
  /// Write the report here instead of stdout.
  #[arg(long, global = true)]
  out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
  Json,
  Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
  /// Laplace transform of orbit or instanton counts along a ray of weights.
  Transform(transform::TransformArgs),
  /// δ² = 0, Betti numbers and gauge conjugacy for a complex or a counting file.
  CheckComplex(complexes::CheckArgs),
  /// Torsion of a based complex, a mapping cone, or a Novikov complex.
  Torsion(complexes::TorsionArgs),
  /// Lefschetz numbers, fixed-point counts and the zeta function of a map.
  Zeta(maps::ZetaArgs),
  /// Torsion of the algebraic mapping torus against the Lefschetz zeta function.
  VerifyTor(maps::VerifyArgs),
  /// Abscissa of convergence of orbit or instanton counts.
  Abscissa(maps::AbscissaArgs),
}

fn run(cli: &Cli) -> anyhow::Result<Report> {
  let g = &cli.global;
  match &cli.command {
    Command::Transform(a) => transform::run(a, g),
    Command::CheckComplex(a) => complexes::check(a, g),
    Command::Torsion(a) => complexes::torsion(a, g),
    Command::Zeta(a) => maps::zeta(a, g),
    Command::VerifyTor(a) => maps::verify(a, g),
    Command::Abscissa(a) => maps::abscissa(a, g),
  }
}

/// 2 for bad input, 3 for a failed mathematical precondition.
fn error_code(e: &anyhow::Error) -> u8 {
  match e.downcast_ref::<novikov_core::error::Error>() {
    Some(core) if !core.is_input_error() => 3,
    _ => 2,
  }
}

fn main() -> ExitCode {
  let cli = Cli::parse();
  let report = match run(&cli) {
    Ok(r) => r,
    Err(e) => {
      eprintln!("error: {e:#}");
      return ExitCode::from(error_code(&e));
    }
  };
  if let Err(e) = output::emit(&report, &cli.global) {
    eprintln!("error: {e:#}");
    return ExitCode::from(2);
  }
  match report.outcome {
    Outcome::Pass => ExitCode::SUCCESS,
    Outcome::Fail => ExitCode::from(1),
  }
}
