//! A quantum strategy plugin for a game other than Magic Square: CHSH
//! played with a fixed sampler that wins each copy with probability 27/32.

use parmagic::experiments::{run_parbell, QuantumStrategy};
use parmagic::game::{EnumerationCaps, GameSpec, Prob};
use parmagic::quantum::NoiseModel;
use parmagic::rng;
use rand::Rng;

fn chsh() -> GameSpec {
    GameSpec::from_fn("chsh", [2, 2, 2, 2], GameSpec::uniform_distribution(2, 2), |x, y, a, b| (a ^ b) == (x & y))
        .expect("chsh table")
}

/// Samples from the ideal correlation, rounded to a rational value.
struct RoundedChsh;

impl QuantumStrategy for RoundedChsh {
    fn name(&self) -> &str {
        "rounded-chsh"
    }

    fn game(&self) -> GameSpec {
        chsh()
    }

    fn quantum_value(&self) -> Prob {
        Prob::new(27, 32)
    }

    fn constant_depth_1d(&self) -> bool {
        true
    }

    fn play(&self, index: usize, x: usize, y: usize, _noise: &NoiseModel, seed: u64) -> parmagic::Result<(usize, usize)> {
        let mut r = rng::stream(seed, rng::domain::GAME, index as u64);
        let a = r.gen_range(0..2);
        let win = r.gen_ratio(27, 32);
        let b = if win { a ^ (x & y) } else { 1 ^ a ^ (x & y) };
        Ok((a, b))
    }
}

fn main() -> parmagic::Result<()> {
    let game = chsh();
    let caps = EnumerationCaps::default();
    let noise = NoiseModel::noiseless();
    let q = run_parbell(&game, Some(&RoundedChsh), 2000, 0.05, &noise, 200, 0, &caps)?;
    println!(
        "plugin: omega_c {:?}, omega_q {:?}, threshold {}, accepted {} of {}",
        q.omega_c, q.omega_q, q.threshold, q.accepted, q.trials
    );
    let c = run_parbell(&game, None, 2000, 0.05, &noise, 200, 0, &caps)?;
    println!("classical: win rate {:.4}, accepted {} of {}", c.win_rate, c.accepted, c.trials);
    Ok(())
}
