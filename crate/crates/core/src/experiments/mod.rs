//! Reproducible experiments over the whole workbench, driven by
//! serializable configs.

mod config;
mod parbell;
mod run;

pub use config::{Command, ExperimentConfig, Overrides, SUBCOMMANDS};
pub use parbell::{builtin_strategy, run_parbell, MagicSquareStrategy, ParbellResult, QuantumStrategy};
pub use run::{cmd_value, exit_code, load_adversary, load_game, run, Outputs};
