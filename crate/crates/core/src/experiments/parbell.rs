use rayon::prelude::*;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::game::magic::magic_square;
use crate::game::{brute_force_classical_value, sample_inputs, DeterministicStrategy, EnumerationCaps, GameSpec, Prob};
use crate::quantum::{play_game, NoiseModel};
use crate::rng::derive_seed;
use crate::stats::{big, ceil_fraction, clopper_pearson, decimal_rational};

/// A quantum strategy for one Bell game, played game by game.
pub trait QuantumStrategy: Send + Sync {
    fn name(&self) -> &str;

    /// The game the strategy is built for.
    fn game(&self) -> GameSpec;

    /// Win probability of the noiseless strategy.
    fn quantum_value(&self) -> Prob;

    /// Whether the strategy declares an implementation by constant-depth
    /// 1D geometrically-local circuits. Recorded, never checked.
    fn constant_depth_1d(&self) -> bool;

    /// Answers for game `index` of a run. Must depend only on the
    /// arguments.
    fn play(&self, index: usize, x: usize, y: usize, noise: &NoiseModel, seed: u64) -> Result<(usize, usize)>;
}

/// The Magic Square strategy on two Bell pairs.
#[derive(Clone, Copy, Debug, Default)]
pub struct MagicSquareStrategy;

impl QuantumStrategy for MagicSquareStrategy {
    fn name(&self) -> &str {
        "magic-square"
    }

    fn game(&self) -> GameSpec {
        magic_square()
    }

    fn quantum_value(&self) -> Prob {
        Prob::new(1, 1)
    }

    fn constant_depth_1d(&self) -> bool {
        true
    }

    fn play(&self, index: usize, x: usize, y: usize, noise: &NoiseModel, seed: u64) -> Result<(usize, usize)> {
        play_game(index, x, y, noise, seed)
    }
}

/// Look up a built-in strategy.
pub fn builtin_strategy(name: &str) -> Result<Box<dyn QuantumStrategy>> {
    match name {
        "magic-square" => Ok(Box::new(MagicSquareStrategy)),
        _ => Err(Error::Config(format!("unknown strategy plugin {name:?}"))),
    }
}

fn same_game(a: &GameSpec, b: &GameSpec) -> bool {
    a.sizes() == b.sizes() && a.distribution() == b.distribution() && a.predicate_table() == b.predicate_table()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ParbellResult {
    pub game: String,
    /// Plugin name, or `classical` for the best deterministic strategy.
    pub strategy: String,
    pub n: usize,
    pub delta: f64,
    pub epsilon: f64,
    pub omega_c: Option<String>,
    pub omega_q: Option<String>,
    /// `ceil(n (omega - delta))` for the value `omega` of the strategy played.
    pub threshold: usize,
    pub trials: usize,
    pub accepted: usize,
    pub acceptance_rate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    /// Won games over all games played.
    pub win_rate: f64,
    pub constant_depth_declared: bool,
}

enum Player<'a> {
    Quantum(&'a dyn QuantumStrategy),
    Classical(DeterministicStrategy),
}

/// Play `trials` runs of `n` parallel copies of `game`, each accepted iff
/// at least `ceil(n (omega - delta))` copies are won.
///
/// With a plugin, `omega` is its quantum value and `delta` must lie in
/// `[0, omega_q - omega_c)` when `omega_c` is computable under `caps`.
/// Without one the best deterministic strategy plays against `omega_c`;
/// a game whose classical value is out of reach then has no mode to run.
#[allow(clippy::too_many_arguments)]
pub fn run_parbell(
    game: &GameSpec,
    plugin: Option<&dyn QuantumStrategy>,
    n: usize,
    delta: f64,
    noise: &NoiseModel,
    trials: usize,
    seed: u64,
    caps: &EnumerationCaps,
) -> Result<ParbellResult> {
    noise.check()?;
    if n == 0 || trials == 0 {
        return Err(Error::Config("n and trials must be positive".into()));
    }
    let d = decimal_rational(delta)?;
    if d < big(Prob::new(0, 1)) {
        return Err(Error::Config(format!("delta {delta} is negative")));
    }
    let classical = match brute_force_classical_value(game, caps) {
        Ok(v) => Some(v),
        Err(Error::Resource { .. }) if plugin.is_some() => None,
        Err(Error::Resource { required, cap }) => {
            return Err(Error::Config(format!(
                "no strategy plugin given and the classical value needs {required} pairs (cap {cap})"
            )))
        }
        Err(e) => return Err(e),
    };
    let (player, omega) = match plugin {
        Some(p) => {
            if !same_game(&p.game(), game) {
                return Err(Error::Config(format!("plugin {:?} is built for a different game", p.name())));
            }
            let wq = p.quantum_value();
            if let Some(c) = &classical {
                if d >= big(wq) - big(c.value) {
                    return Err(Error::Config(format!(
                        "delta {delta} must be below omega_q - omega_c = {}",
                        wq - c.value
                    )));
                }
            }
            (Player::Quantum(p), wq)
        }
        None => {
            let c = classical.as_ref().expect("classical value computed");
            (Player::Classical(c.strategy.clone()), c.value)
        }
    };
    let threshold = ceil_fraction(n, &(big(omega) - &d));

    let wins: Vec<usize> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let s = derive_seed(seed, t);
            let inputs = sample_inputs(game, n, s)?;
            let mut won = 0;
            for (i, (x, y)) in inputs.pairs().enumerate() {
                let (a, b) = match &player {
                    Player::Quantum(p) => p.play(i, x, y, noise, s)?,
                    Player::Classical(st) => (st.alice[x], st.bob[y]),
                };
                if a >= game.a_size() || b >= game.b_size() {
                    return Err(domain(format!("strategy answered ({a}, {b}) outside the answer alphabet")));
                }
                won += usize::from(game.wins(x, y, a, b));
            }
            Ok(won)
        })
        .collect::<Result<_>>()?;
    let accepted = wins.iter().filter(|&&w| w >= threshold).count();
    let (ci_low, ci_high) = clopper_pearson(accepted as u64, trials as u64, 0.95)?;
    Ok(ParbellResult {
        game: game.name().to_string(),
        strategy: plugin.map_or("classical".to_string(), |p| p.name().to_string()),
        n,
        delta,
        epsilon: noise.epsilon,
        omega_c: classical.map(|c| c.value.to_string()),
        omega_q: plugin.map(|p| p.quantum_value().to_string()),
        threshold,
        trials,
        accepted,
        acceptance_rate: accepted as f64 / trials as f64,
        ci_low,
        ci_high,
        win_rate: wins.iter().sum::<usize>() as f64 / (n * trials) as f64,
        constant_depth_declared: plugin.is_some_and(|p| p.constant_depth_1d()),
    })
}
