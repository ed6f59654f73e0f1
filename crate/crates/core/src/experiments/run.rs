use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::advantage::{completeness, protocol_delta, run_round, run_round_framed, run_soundness_probe, AdversarySpec};
use crate::error::{Error, Result};
use crate::game::magic::magic_square;
use crate::game::text::parse_game;
use crate::game::{brute_force_classical_value, brute_force_leakage_value, sample_inputs, EnumerationCaps, GameSpec};
use crate::protocol::{comm_scaling_experiment, ScalingOptions};
use crate::quantum::{run_parmagic, shot_records, write_shots_csv, NoiseModel};

use super::config::{Command, ExperimentConfig};
use super::parbell::{builtin_strategy, run_parbell};

/// Files produced by one experiment, by name, plus human-readable lines.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Outputs {
    pub files: BTreeMap<String, String>,
    pub summary: Vec<String>,
}

impl Outputs {
    /// Write every file, and the config that produced them, into `dir`.
    pub fn write_to(&self, dir: &Path, config: &ExperimentConfig) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        for (name, body) in &self.files {
            std::fs::write(dir.join(name), body)?;
        }
        std::fs::write(dir.join("config.json"), config.to_json())?;
        Ok(())
    }
}

fn f6(x: f64) -> String {
    format!("{x:.6}")
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(T::to_string).unwrap_or_default()
}

/// `magic-square` or a path to a game file.
pub fn load_game(source: &str) -> Result<GameSpec> {
    if source == "magic-square" {
        return Ok(magic_square());
    }
    let path = Path::new(source);
    let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read game {source}: {e}")))?;
    let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or(source);
    parse_game(name, &text)
}

fn noise_for(epsilon: Option<f64>, delta: f64) -> Result<NoiseModel> {
    NoiseModel::new(epsilon.unwrap_or(delta / 100.0)).map_err(|e| Error::Config(e.to_string()))
}

fn check_delta(delta: f64) -> Result<()> {
    protocol_delta(delta).map(|_| ()).map_err(|e| Error::Config(e.to_string()))
}

/// Value column: exact rational for every leakage budget.
pub fn cmd_value(game: &GameSpec, leakage: &[u32], caps: &EnumerationCaps) -> Result<Outputs> {
    let mut csv = String::from("game,leakage_bits,value,enumerated\n");
    let mut summary = Vec::new();
    for &c in leakage {
        let (value, enumerated) = if c == 0 {
            let v = brute_force_classical_value(game, caps)?;
            (v.value, v.pairs_enumerated)
        } else {
            let v = brute_force_leakage_value(game, c, caps)?;
            (v.value, v.work)
        };
        writeln!(csv, "{},{c},{value},{enumerated}", game.name()).expect("string write");
        summary.push(format!("{} with {c} bits of leakage: {value}", game.name()));
    }
    Ok(Outputs {
        files: BTreeMap::from([("value.csv".into(), csv)]),
        summary,
    })
}

fn cmd_shots(n: usize, epsilon: f64, seed: u64) -> Result<Outputs> {
    let noise = NoiseModel::new(epsilon).map_err(|e| Error::Config(e.to_string()))?;
    let inputs = sample_inputs(&magic_square(), n, seed)?;
    let (a, b) = run_parmagic(&inputs, &noise, seed)?;
    let records = shot_records(&inputs, &a, &b);
    let won = records.iter().filter(|r| r.satisfied == 1).count();
    let mut buf = Vec::new();
    write_shots_csv(&mut buf, &records)?;
    Ok(Outputs {
        files: BTreeMap::from([("shots.csv".into(), String::from_utf8(buf).expect("csv is utf-8"))]),
        summary: vec![format!("{won} of {n} games satisfied")],
    })
}

fn jsonl<T: serde::Serialize>(rows: &[T]) -> String {
    rows.iter()
        .map(|r| serde_json::to_string(r).expect("log serializes") + "\n")
        .collect()
}

fn cmd_completeness(n: usize, delta: f64, epsilons: &[f64], rounds: usize, cfg: &ExperimentConfig) -> Result<Outputs> {
    check_delta(delta)?;
    let epsilons = if epsilons.is_empty() { vec![delta / 100.0] } else { epsilons.to_vec() };
    let mut csv = String::from(
        "n,delta,epsilon,rounds,accepted,acceptance_rate,ci_low,ci_high,failure_rate,max_round_failure_rate\n",
    );
    let mut logs = Vec::new();
    let mut summary = Vec::new();
    for &eps in &epsilons {
        let noise = noise_for(Some(eps), delta)?;
        let (s, l) = completeness(n, delta, &noise, rounds, cfg.seed, cfg.two_process)?;
        writeln!(
            csv,
            "{},{},{},{},{},{},{},{},{},{}",
            s.n,
            f6(s.delta),
            f6(s.epsilon),
            s.rounds,
            s.accepted,
            f6(s.acceptance_rate),
            f6(s.ci_low),
            f6(s.ci_high),
            f6(s.failure_rate),
            f6(s.max_round_failure_rate)
        )
        .expect("string write");
        summary.push(format!(
            "epsilon {}: {} of {} rounds accepted, game failure rate {}",
            f6(eps),
            s.accepted,
            s.rounds,
            f6(s.failure_rate)
        ));
        logs.extend(l);
    }
    Ok(Outputs {
        files: BTreeMap::from([("completeness.csv".into(), csv), ("rounds.jsonl".into(), jsonl(&logs))]),
        summary,
    })
}

fn cmd_round(n: usize, delta: f64, epsilon: Option<f64>, rounds: usize, cfg: &ExperimentConfig) -> Result<Outputs> {
    check_delta(delta)?;
    let noise = noise_for(epsilon, delta)?;
    let runner = if cfg.two_process { run_round_framed } else { run_round };
    let logs = (0..rounds as u64)
        .map(|r| runner(r, n, delta, &noise, cfg.seed).map(|(l, _)| l))
        .collect::<Result<Vec<_>>>()?;
    let accepted = logs.iter().filter(|l| l.accept).count();
    Ok(Outputs {
        files: BTreeMap::from([("rounds.jsonl".into(), jsonl(&logs))]),
        summary: vec![format!("{accepted} of {rounds} rounds accepted")],
    })
}

fn cmd_scaling(opts: &ScalingOptions) -> Result<Outputs> {
    let rows = comm_scaling_experiment(opts)?;
    let mut csv = String::from("dimension,n,depth,cut_pairs,measured_bits,bound_bits,max_mixed_per_layer\n");
    let mut summary = Vec::new();
    for r in &rows {
        writeln!(
            csv,
            "{},{},{},{},{},{},{}",
            r.dimension, r.n, r.depth, r.cut_pairs, r.measured_bits, r.bound_bits, r.max_mixed_per_layer
        )
        .expect("string write");
        summary.push(format!("n {} d {}: {} bits (bound {})", r.n, r.depth, r.measured_bits, r.bound_bits));
    }
    Ok(Outputs {
        files: BTreeMap::from([("scaling.csv".into(), csv)]),
        summary,
    })
}

/// A built-in adversary name, or a file holding one.
pub fn load_adversary(source: &str, n: usize, seed: u64) -> Result<AdversarySpec> {
    let path = Path::new(source);
    if path.is_file() {
        let text = std::fs::read_to_string(path)?;
        let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or(source);
        return AdversarySpec::parse(name, &text);
    }
    AdversarySpec::builtin(source, n, seed).map_err(|e| Error::Config(e.to_string()))
}

fn cmd_probe(adversary: &str, ns: &[usize], delta: f64, trials: usize, seed: u64) -> Result<Outputs> {
    check_delta(delta)?;
    let mut csv = String::from(
        "adversary,n,delta,threshold,trials,accepted,acceptance_rate,ci_low,ci_high,exact_acceptance,\
         per_game_win,depth,toffoli_depth,communication_bits,communication_bound\n",
    );
    let mut summary = Vec::new();
    for &n in ns {
        let spec = load_adversary(adversary, n, seed)?;
        let r = run_soundness_probe(&spec, n, delta, trials, seed)?;
        let m = &r.metadata;
        writeln!(
            csv,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.adversary,
            r.n,
            f6(r.delta),
            r.threshold,
            r.trials,
            r.accepted,
            f6(r.acceptance_rate),
            f6(r.ci_low),
            f6(r.ci_high),
            r.exact_acceptance.map(f6).unwrap_or_default(),
            opt(&m.per_game_win),
            opt(&m.depth),
            opt(&m.toffoli_depth),
            m.communication_bits,
            opt(&m.communication_bound)
        )
        .expect("string write");
        summary.push(format!(
            "{} at n {}: accepted {} of {} (95% CI {} to {})",
            r.adversary,
            n,
            r.accepted,
            r.trials,
            f6(r.ci_low),
            f6(r.ci_high)
        ));
    }
    Ok(Outputs {
        files: BTreeMap::from([("probe.csv".into(), csv)]),
        summary,
    })
}

fn cmd_parbell(
    game: &str,
    plugin: Option<&str>,
    n: usize,
    delta: f64,
    epsilon: Option<f64>,
    trials: usize,
    cfg: &ExperimentConfig,
) -> Result<Outputs> {
    let game = load_game(game)?;
    let strategy = plugin.map(builtin_strategy).transpose()?;
    let noise = noise_for(epsilon, delta)?;
    let r = run_parbell(&game, strategy.as_deref(), n, delta, &noise, trials, cfg.seed, &cfg.caps)?;
    let mut csv = String::from(
        "game,strategy,n,delta,epsilon,omega_c,omega_q,threshold,trials,accepted,acceptance_rate,ci_low,ci_high,\
         win_rate,constant_depth_declared\n",
    );
    writeln!(
        csv,
        "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
        r.game,
        r.strategy,
        r.n,
        f6(r.delta),
        f6(r.epsilon),
        opt(&r.omega_c),
        opt(&r.omega_q),
        r.threshold,
        r.trials,
        r.accepted,
        f6(r.acceptance_rate),
        f6(r.ci_low),
        f6(r.ci_high),
        f6(r.win_rate),
        r.constant_depth_declared
    )
    .expect("string write");
    Ok(Outputs {
        files: BTreeMap::from([("parbell.csv".into(), csv)]),
        summary: vec![format!(
            "{} with {}: {} of {} runs reached {} wins, win rate {}",
            r.game,
            r.strategy,
            r.accepted,
            r.trials,
            r.threshold,
            f6(r.win_rate)
        )],
    })
}

/// Run an experiment. Outputs depend only on `config`.
pub fn run(config: &ExperimentConfig) -> Result<Outputs> {
    match &config.command {
        Command::Value { game, leakage } => cmd_value(&load_game(game)?, leakage, &config.caps),
        Command::Shots { n, epsilon } => cmd_shots(*n, *epsilon, config.seed),
        Command::Completeness { n, delta, epsilon, rounds } => cmd_completeness(*n, *delta, epsilon, *rounds, config),
        Command::Round { n, delta, epsilon, rounds } => cmd_round(*n, *delta, *epsilon, *rounds, config),
        Command::Scaling {
            dimension,
            n,
            depth,
            circuits_per_cell,
            placement,
        } => cmd_scaling(&ScalingOptions {
            circuits_per_cell: *circuits_per_cell,
            placement: *placement,
            two_party: config.two_process,
            ..ScalingOptions::new(*dimension, n.clone(), depth.clone(), config.seed)
        }),
        Command::Probe { adversary, n, delta, trials } => cmd_probe(adversary, n, *delta, *trials, config.seed),
        Command::Parbell {
            game,
            plugin,
            n,
            delta,
            epsilon,
            trials,
        } => cmd_parbell(game, plugin.as_deref(), *n, *delta, *epsilon, *trials, config),
    }
}

/// Exit status for an error: 2 for configuration, 3 for resource caps.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) | Error::Parse { .. } | Error::Json(_) => 2,
        Error::Resource { .. } => 3,
        _ => 1,
    }
}
