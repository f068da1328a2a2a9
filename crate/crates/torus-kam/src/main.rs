use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use torus_kam::{execute, CliError, ExperimentConfig, RunKind, THREADS_ENV};

#[derive(Parser)]
#[command(name = "torus-kam", version, about = "Traveling-wave experiments for 2D non-resistive MHD")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Approximate solution over a lambda grid.
    Approx(Common),
    /// Newton iteration at one lambda.
    Solve(Common),
    /// Taylor test of the linearized operator.
    LinearizeCheck(Common),
    /// Reduction chain against the dense Galerkin solve.
    ReduceCheck(Common),
    /// Monte Carlo measure of resonant frequencies.
    Measure(Common),
    /// Physical field sizes over a lambda grid.
    Scaling(Common),
}

#[derive(Args)]
struct Common {
    /// JSON experiment config.
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides `output_dir` in the config.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides `seed` in the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads for sweeps.
    #[arg(long, env = THREADS_ENV)]
    threads: Option<usize>,
}

impl Command {
    fn split(self) -> (RunKind, Common) {
        match self {
            Command::Approx(c) => (RunKind::Approx, c),
            Command::Solve(c) => (RunKind::Solve, c),
            Command::LinearizeCheck(c) => (RunKind::LinearizeCheck, c),
            Command::ReduceCheck(c) => (RunKind::ReduceCheck, c),
            Command::Measure(c) => (RunKind::Measure, c),
            Command::Scaling(c) => (RunKind::Scaling, c),
        }
    }
}

fn run(kind: RunKind, args: Common) -> Result<bool, CliError> {
    if let Some(n) = args.threads {
        if n == 0 {
            return Err(CliError::Invalid("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Invalid(e.to_string()))?;
    }
    let (mut cfg, base) = ExperimentConfig::load(&args.config)?;
    if cfg.run_kind != kind {
        return Err(CliError::Invalid(format!(
            "config run_kind is {} but the subcommand is {}",
            cfg.run_kind.name(),
            kind.name()
        )));
    }
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    let out = args
        .out
        .or_else(|| cfg.output_dir.as_ref().map(|d| base.join(d)))
        .unwrap_or_else(|| PathBuf::from("out"));
    let rc = cfg.resolve(&base)?;
    let summary = execute(&rc, &out)?;
    for (name, ok) in &summary.checks {
        eprintln!("{:<32} {}", name, if *ok { "pass" } else { "FAIL" });
    }
    for f in &summary.files {
        println!("{}", out.join(f).display());
    }
    Ok(summary.all_checks_pass())
}

fn main() -> ExitCode {
    let (kind, args) = Cli::parse().command.split();
    match run(kind, args) {
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
