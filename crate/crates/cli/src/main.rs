use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use fracsqg_cli::{execute, Command};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Cmd {
    Verify,
    Simulate,
    Attractor,
    Convergence,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Self {
        match c {
            Cmd::Verify => Command::Verify,
            Cmd::Simulate => Command::Simulate,
            Cmd::Attractor => Command::Attractor,
            Cmd::Convergence => Command::Convergence,
        }
    }
}

/// Fractional Dirichlet Laplacian toolkit: inequality checks, forced SQG
/// runs, attractor diagnostics and convergence studies.
#[derive(Debug, Parser)]
#[command(name = "fracsqg", version)]
struct Args {
    command: Cmd,
    /// TOML run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory.
    #[arg(long, default_value = "fracsqg-out")]
    out: PathBuf,
    /// Overrides the configuration seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; defaults to all cores.
    #[arg(long, env = "FRACSQG_THREADS")]
    threads: Option<usize>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    if let Some(n) = args.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("fracsqg: cannot size the thread pool: {e}");
            return ExitCode::from(2);
        }
    }
    match execute(args.command.into(), &args.config, &args.out, args.seed, args.threads) {
        Ok(o) if o.failures == 0 => ExitCode::SUCCESS,
        Ok(o) => {
            eprintln!("fracsqg: {} check(s) failed; see {}", o.failures, args.out.display());
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("fracsqg: {e}");
            ExitCode::from(2)
        }
    }
}
