use rand::Rng;
use rayon::prelude::*;

use crate::error::Result;
use crate::quantum::{fault_paulis, play_game, NoiseModel};
use crate::rng;

use super::message::PaddedMessage;

/// SWAP gates acting on each populated register while it is routed past
/// its two blanks onto the game inputs; one per register qubit.
pub const SWAPS_PER_REGISTER: usize = 2;

/// Route one 2-bit register through its SWAPs. On a computational basis
/// state only the `X`/`Y` part of a fault on the destination qubit matters:
/// it flips the routed bit.
fn route<R: Rng + ?Sized>(code: u8, noise: &NoiseModel, rng: &mut R) -> u8 {
    if !noise.noisy_swap_network {
        return code;
    }
    let mut out = code;
    for bit in 0..SWAPS_PER_REGISTER {
        if let Some(fault) = noise.sample_fault(2, rng) {
            if matches!(fault_paulis(fault, 2)[1], 1 | 2) {
                out ^= 1 << (SWAPS_PER_REGISTER - 1 - bit);
            }
        }
    }
    out
}

/// Answers of the honest prover: route every register, then play game `i`
/// on registers `i` and `n + i` with the routed codes. A register corrupted
/// to `11` selects setting 0.
///
/// Register `k` routes with stream `(seed, SWAP, k)`; game `i` uses the same
/// streams as the parallel Magic Square runner.
pub fn honest_prover(message: &PaddedMessage, noise: &NoiseModel, seed: u64) -> Result<(Vec<usize>, Vec<usize>)> {
    noise.check()?;
    let n = message.n();
    let answers: Vec<(usize, usize)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rx = rng::stream(seed, rng::domain::SWAP, i as u64);
            let mut ry = rng::stream(seed, rng::domain::SWAP, (n + i) as u64);
            let x = route(message.register(i), noise, &mut rx);
            let y = route(message.register(n + i), noise, &mut ry);
            play_game(i, x as usize, y as usize, noise, seed)
        })
        .collect::<Result<_>>()?;
    Ok(answers.into_iter().unzip())
}
