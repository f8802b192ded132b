use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use microcanon_cli::{run, Command, Overrides};

#[derive(Parser)]
#[command(
    name = "microcanon",
    version,
    about = "Purity and entropy of microcanonically constrained bipartite systems"
)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Evaluate the closed-form averages, purity floor and maximal entropy.
    Analytic(RunArgs),
    /// Monte Carlo estimates over the allowed region.
    Sample(RunArgs),
    /// Exact time evolution under a random constrained Hamiltonian.
    Evolve(RunArgs),
    /// Purity histogram over the allowed region.
    Histogram(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Run configuration (JSON).
    config: PathBuf,
    /// Override the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override the worker count of sampling sections.
    #[arg(long)]
    workers: Option<usize>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, args) = match cli.command {
        Sub::Analytic(a) => (Command::Analytic, a),
        Sub::Sample(a) => (Command::Sample, a),
        Sub::Evolve(a) => (Command::Evolve, a),
        Sub::Histogram(a) => (Command::Histogram, a),
    };
    let overrides = Overrides {
        seed: args.seed,
        out: args.out,
        workers: args.workers,
    };
    match run(command, &args.config, &overrides) {
        Ok(r) => {
            for w in &r.warnings {
                eprintln!("warning: {w}");
            }
            println!("seed {}", r.manifest.seed);
            for line in &r.report {
                println!("{line}");
            }
            for o in &r.manifest.outputs {
                println!("wrote {}", r.dir.join(&o.file).display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
