use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::circuit::Placement;
use crate::error::{Error, Result};
use crate::game::EnumerationCaps;

/// One experiment, fully determined by its fields.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    #[serde(flatten)]
    pub command: Command,
    pub seed: u64,
    #[serde(default)]
    pub two_process: bool,
    #[serde(default)]
    pub caps: EnumerationCaps,
    /// Output directory; `None` prints to stdout only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

/// An `epsilon` of `None` means `delta / 100`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Exact value of a game, one row per leakage budget.
    Value { game: String, leakage: Vec<u32> },
    /// Shot-level Magic Square export on uniform inputs.
    Shots { n: usize, epsilon: f64 },
    /// Honest rounds, one summary row per noise level.
    Completeness {
        n: usize,
        delta: f64,
        epsilon: Vec<f64>,
        rounds: usize,
    },
    /// Honest rounds logged one per line.
    Round {
        n: usize,
        delta: f64,
        epsilon: Option<f64>,
        rounds: usize,
    },
    Scaling {
        dimension: usize,
        n: Vec<usize>,
        depth: Vec<usize>,
        circuits_per_cell: usize,
        placement: Placement,
    },
    /// Soundness probe, one row per `n`. `adversary` is a built-in name or
    /// a file path.
    Probe {
        adversary: String,
        n: Vec<usize>,
        delta: f64,
        trials: usize,
    },
    Parbell {
        game: String,
        plugin: Option<String>,
        n: usize,
        delta: f64,
        epsilon: Option<f64>,
        trials: usize,
    },
}

pub const SUBCOMMANDS: [&str; 7] = ["value", "shots", "completeness", "round", "scaling", "probe", "parbell"];

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Value { .. } => "value",
            Command::Shots { .. } => "shots",
            Command::Completeness { .. } => "completeness",
            Command::Round { .. } => "round",
            Command::Scaling { .. } => "scaling",
            Command::Probe { .. } => "probe",
            Command::Parbell { .. } => "parbell",
        }
    }

    pub fn defaults(name: &str) -> Result<Self> {
        Ok(match name {
            "value" => Command::Value {
                game: "magic-square".into(),
                leakage: vec![0],
            },
            "shots" => Command::Shots { n: 10_000, epsilon: 0.0 },
            "completeness" => Command::Completeness {
                n: 1000,
                delta: 0.1,
                epsilon: Vec::new(),
                rounds: 1000,
            },
            "round" => Command::Round {
                n: 100,
                delta: 0.1,
                epsilon: None,
                rounds: 10,
            },
            "scaling" => Command::Scaling {
                dimension: 2,
                n: vec![16, 64, 256],
                depth: vec![4, 8, 16],
                circuits_per_cell: 8,
                placement: Placement::Connected,
            },
            "probe" => Command::Probe {
                adversary: "best-classical".into(),
                n: vec![50, 100, 200],
                delta: 0.1,
                trials: 1000,
            },
            "parbell" => Command::Parbell {
                game: "magic-square".into(),
                plugin: Some("magic-square".into()),
                n: 1000,
                delta: 0.1,
                epsilon: None,
                trials: 100,
            },
            _ => return Err(Error::Config(format!("unknown subcommand {name:?}"))),
        })
    }
}

/// Values given on the command line; `None` keeps the lower layer.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Overrides {
    pub n: Option<Vec<usize>>,
    pub depth: Option<Vec<usize>>,
    pub dim: Option<usize>,
    pub delta: Option<f64>,
    pub epsilon: Option<Vec<f64>>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
    pub cap: Option<u128>,
    pub out: Option<PathBuf>,
    pub game: Option<String>,
    pub adversary: Option<String>,
    pub leakage: Option<Vec<u32>>,
    pub plugin: Option<String>,
    pub no_plugin: bool,
    pub two_process: bool,
}

fn unused(flag: &str, cmd: &str) -> Error {
    Error::Config(format!("--{flag} does not apply to {cmd}"))
}

fn single<T: Copy>(flag: &str, v: &[T]) -> Result<T> {
    match v {
        [x] => Ok(*x),
        _ => Err(Error::Config(format!("--{flag} takes one value here"))),
    }
}

fn single_eps(v: &[f64]) -> Result<Option<f64>> {
    single("epsilon", v).map(Some)
}

impl ExperimentConfig {
    pub fn defaults(subcommand: &str) -> Result<Self> {
        Ok(Self {
            command: Command::defaults(subcommand)?,
            seed: 0,
            two_process: false,
            caps: EnumerationCaps::default(),
            out: None,
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("bad config: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Defaults, then the config file, then flags.
    pub fn resolve(subcommand: &str, file: Option<&Path>, flags: &Overrides) -> Result<Self> {
        let mut cfg = match file {
            Some(p) => {
                let cfg = Self::load(p)?;
                if cfg.command.name() != subcommand {
                    return Err(Error::Config(format!(
                        "config file is for {}, not {subcommand}",
                        cfg.command.name()
                    )));
                }
                cfg
            }
            None => Self::defaults(subcommand)?,
        };
        cfg.apply(flags)?;
        Ok(cfg)
    }

    pub fn apply(&mut self, f: &Overrides) -> Result<()> {
        if let Some(s) = f.seed {
            self.seed = s;
        }
        if let Some(c) = f.cap {
            self.caps.strategy_pairs = c;
            self.caps.leakage_work = c;
            self.caps.repetition_table = c;
        }
        if f.out.is_some() {
            self.out = f.out.clone();
        }
        self.two_process |= f.two_process;
        let name = self.command.name();
        let reject = |flag: &str, given: bool| if given { Err(unused(flag, name)) } else { Ok(()) };
        match &mut self.command {
            Command::Value { game, leakage } => {
                for (flag, given) in [
                    ("n", f.n.is_some()),
                    ("depth", f.depth.is_some()),
                    ("dim", f.dim.is_some()),
                    ("delta", f.delta.is_some()),
                    ("epsilon", f.epsilon.is_some()),
                    ("trials", f.trials.is_some()),
                    ("adversary", f.adversary.is_some()),
                ] {
                    reject(flag, given)?;
                }
                if let Some(g) = &f.game {
                    *game = g.clone();
                }
                if let Some(l) = &f.leakage {
                    *leakage = l.clone();
                }
            }
            Command::Shots { n, epsilon } => {
                for (flag, given) in [
                    ("depth", f.depth.is_some()),
                    ("dim", f.dim.is_some()),
                    ("delta", f.delta.is_some()),
                    ("trials", f.trials.is_some()),
                    ("game", f.game.is_some()),
                    ("adversary", f.adversary.is_some()),
                ] {
                    reject(flag, given)?;
                }
                if let Some(v) = &f.n {
                    *n = single("n", v)?;
                }
                if let Some(e) = &f.epsilon {
                    *epsilon = single("epsilon", e)?;
                }
            }
            Command::Completeness { n, delta, epsilon, rounds } => {
                for (flag, given) in [
                    ("depth", f.depth.is_some()),
                    ("dim", f.dim.is_some()),
                    ("game", f.game.is_some()),
                    ("adversary", f.adversary.is_some()),
                ] {
                    reject(flag, given)?;
                }
                if let Some(v) = &f.n {
                    *n = single("n", v)?;
                }
                if let Some(d) = f.delta {
                    *delta = d;
                }
                if let Some(e) = &f.epsilon {
                    *epsilon = e.clone();
                }
                if let Some(t) = f.trials {
                    *rounds = t;
                }
            }
            Command::Round { n, delta, epsilon, rounds } => {
                for (flag, given) in [
                    ("depth", f.depth.is_some()),
                    ("dim", f.dim.is_some()),
                    ("game", f.game.is_some()),
                    ("adversary", f.adversary.is_some()),
                ] {
                    reject(flag, given)?;
                }
                if let Some(v) = &f.n {
                    *n = single("n", v)?;
                }
                if let Some(d) = f.delta {
                    *delta = d;
                }
                if let Some(e) = &f.epsilon {
                    *epsilon = single_eps(e)?;
                }
                if let Some(t) = f.trials {
                    *rounds = t;
                }
            }
            Command::Scaling {
                dimension,
                n,
                depth,
                circuits_per_cell,
                ..
            } => {
                for (flag, given) in [
                    ("delta", f.delta.is_some()),
                    ("epsilon", f.epsilon.is_some()),
                    ("game", f.game.is_some()),
                    ("adversary", f.adversary.is_some()),
                ] {
                    reject(flag, given)?;
                }
                if let Some(v) = &f.n {
                    *n = v.clone();
                }
                if let Some(v) = &f.depth {
                    *depth = v.clone();
                }
                if let Some(d) = f.dim {
                    *dimension = d;
                }
                if let Some(t) = f.trials {
                    *circuits_per_cell = t;
                }
            }
            Command::Probe { adversary, n, delta, trials } => {
                for (flag, given) in [
                    ("depth", f.depth.is_some()),
                    ("dim", f.dim.is_some()),
                    ("epsilon", f.epsilon.is_some()),
                    ("game", f.game.is_some()),
                ] {
                    reject(flag, given)?;
                }
                if let Some(a) = &f.adversary {
                    *adversary = a.clone();
                }
                if let Some(v) = &f.n {
                    *n = v.clone();
                }
                if let Some(d) = f.delta {
                    *delta = d;
                }
                if let Some(t) = f.trials {
                    *trials = t;
                }
            }
            Command::Parbell {
                game,
                plugin,
                n,
                delta,
                epsilon,
                trials,
            } => {
                for (flag, given) in [
                    ("depth", f.depth.is_some()),
                    ("dim", f.dim.is_some()),
                    ("adversary", f.adversary.is_some()),
                ] {
                    reject(flag, given)?;
                }
                if let Some(g) = &f.game {
                    *game = g.clone();
                }
                if f.no_plugin {
                    *plugin = None;
                } else if let Some(p) = &f.plugin {
                    *plugin = Some(p.clone());
                }
                if let Some(v) = &f.n {
                    *n = single("n", v)?;
                }
                if let Some(d) = f.delta {
                    *delta = d;
                }
                if let Some(e) = &f.epsilon {
                    *epsilon = single_eps(e)?;
                }
                if let Some(t) = f.trials {
                    *trials = t;
                }
            }
        }
        if !matches!(self.command, Command::Value { .. }) && f.leakage.is_some() {
            return Err(unused("leakage", name));
        }
        if !matches!(self.command, Command::Parbell { .. }) && (f.plugin.is_some() || f.no_plugin) {
            return Err(unused("plugin", name));
        }
        Ok(())
    }
}
