use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use parmagic::experiments::{exit_code, run, ExperimentConfig, Overrides};
use parmagic::Error;

#[derive(Parser)]
#[command(name = "parmagic", version, about = "Parallel Magic Square experiments")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Exact classical or leakage value of a game
    Value(Flags),
    /// Shot-level Magic Square export
    Shots(Flags),
    /// Acceptance of the honest prover over many rounds
    Completeness(Flags),
    /// Honest rounds as JSON lines
    Round(Flags),
    /// Communication of compiled circuits against the cut bound
    Scaling(Flags),
    /// Acceptance of a classical adversary
    Probe(Flags),
    /// Parallel repetition of a general Bell game
    Parbell(Flags),
}

#[derive(Args)]
struct Flags {
    /// Number of games, or a comma-separated sweep
    #[arg(long, value_delimiter = ',')]
    n: Option<Vec<usize>>,
    /// Circuit depth sweep
    #[arg(long, value_delimiter = ',')]
    depth: Option<Vec<usize>>,
    /// Lattice dimension
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    delta: Option<f64>,
    /// Gate error rate, or a comma-separated sweep; defaults to delta/100
    #[arg(long, value_delimiter = ',')]
    epsilon: Option<Vec<f64>>,
    /// Trials, rounds, or circuits per scaling cell
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Cap on enumerated candidates
    #[arg(long)]
    cap: Option<u128>,
    /// Output directory
    #[arg(long)]
    out: Option<PathBuf>,
    /// `magic-square` or a game file
    #[arg(long)]
    game: Option<String>,
    /// Built-in adversary name or adversary file
    #[arg(long)]
    adversary: Option<String>,
    /// Leakage budgets in bits
    #[arg(long, value_delimiter = ',')]
    leakage: Option<Vec<u32>>,
    /// Quantum strategy plugin
    #[arg(long)]
    plugin: Option<String>,
    /// Play the best classical strategy instead of a plugin
    #[arg(long)]
    no_plugin: bool,
    /// Run parties over a local socket pair
    #[arg(long)]
    two_process: bool,
    /// Config file; flags override it
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write the resolved config here and exit
    #[arg(long)]
    save_config: Option<PathBuf>,
}

impl Flags {
    fn overrides(&self) -> Overrides {
        Overrides {
            n: self.n.clone(),
            depth: self.depth.clone(),
            dim: self.dim,
            delta: self.delta,
            epsilon: self.epsilon.clone(),
            trials: self.trials,
            seed: self.seed,
            cap: self.cap,
            out: self.out.clone(),
            game: self.game.clone(),
            adversary: self.adversary.clone(),
            leakage: self.leakage.clone(),
            plugin: self.plugin.clone(),
            no_plugin: self.no_plugin,
            two_process: self.two_process,
        }
    }
}

fn main_inner(name: &str, flags: &Flags) -> Result<(), Error> {
    let config = ExperimentConfig::resolve(name, flags.config.as_deref(), &flags.overrides())?;
    if let Some(path) = &flags.save_config {
        std::fs::write(path, config.to_json())?;
        return Ok(());
    }
    let outputs = run(&config)?;
    for line in &outputs.summary {
        println!("{line}");
    }
    match &config.out {
        Some(dir) => outputs.write_to(dir, &config)?,
        None => {
            for (file, body) in &outputs.files {
                println!("== {file}");
                print!("{body}");
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, flags) = match &cli.command {
        Cmd::Value(f) => ("value", f),
        Cmd::Shots(f) => ("shots", f),
        Cmd::Completeness(f) => ("completeness", f),
        Cmd::Round(f) => ("round", f),
        Cmd::Scaling(f) => ("scaling", f),
        Cmd::Probe(f) => ("probe", f),
        Cmd::Parbell(f) => ("parbell", f),
    };
    match main_inner(name, flags) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("parmagic: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
