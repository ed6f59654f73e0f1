use std::os::unix::net::UnixStream;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::game::LineInput;
use crate::protocol::{read_frame, write_frame, Frame, MAX_FRAME_BITS};
use crate::quantum::NoiseModel;
use crate::rng::derive_seed;
use crate::stats::clopper_pearson;

use super::message::{protocol_delta, verifier_round, PaddedMessage};
use super::prover::honest_prover;
use super::verify::{verify_exact, Verdict};

/// One line of the round log.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoundLog {
    pub round: u64,
    pub seed: u64,
    pub n: usize,
    pub delta: f64,
    pub epsilon: f64,
    pub win_count: usize,
    pub accept: bool,
}

/// Seed of round `round` under a master seed.
pub fn round_seed(seed: u64, round: u64) -> u64 {
    derive_seed(seed, round)
}

fn log(round: u64, seed: u64, n: usize, delta: f64, noise: &NoiseModel, v: &Verdict) -> RoundLog {
    RoundLog {
        round,
        seed,
        n,
        delta,
        epsilon: noise.epsilon,
        win_count: v.win_count,
        accept: v.accept,
    }
}

/// One verifier-prover round with the honest prover, in process.
pub fn run_round(round: u64, n: usize, delta: f64, noise: &NoiseModel, seed: u64) -> Result<(RoundLog, Verdict)> {
    let d = protocol_delta(delta)?;
    let s = round_seed(seed, round);
    let (message, inputs) = verifier_round(n, delta, s)?;
    let (a, b) = honest_prover(&message, noise, s)?;
    let v = verify_exact(&inputs, &a, &b, &d)?;
    Ok((log(round, s, n, delta, noise, &v), v))
}

fn answer_frames(a: &[usize], b: &[usize]) -> Vec<bool> {
    a.iter()
        .chain(b)
        .flat_map(|&v| (0..3).map(move |i| (v >> i) & 1 == 1))
        .collect()
}

fn unpack_answers(bits: &[bool], n: usize) -> Result<(Vec<usize>, Vec<usize>)> {
    if bits.len() != 6 * n {
        return Err(domain(format!("prover sent {} answer bits, expected {}", bits.len(), 6 * n)));
    }
    let vals: Vec<usize> = bits
        .chunks(3)
        .map(|c| c.iter().enumerate().fold(0, |acc, (i, &b)| acc | (usize::from(b) << i)))
        .collect();
    Ok((vals[..n].to_vec(), vals[n..].to_vec()))
}

/// A message ends with the first frame shorter than the maximum, so a
/// payload filling its last frame is followed by an empty one.
fn send(stream: &mut UnixStream, sender: u8, bits: &[bool]) -> Result<()> {
    for chunk in bits.chunks(MAX_FRAME_BITS) {
        write_frame(stream, &Frame { layer: 0, sender, bits: chunk.to_vec() })?;
    }
    if bits.len() % MAX_FRAME_BITS == 0 {
        write_frame(stream, &Frame { layer: 0, sender, bits: Vec::new() })?;
    }
    Ok(())
}

fn receive(stream: &mut UnixStream) -> Result<Vec<bool>> {
    let mut bits = Vec::new();
    loop {
        let f = read_frame(stream)?;
        let last = f.bits.len() < MAX_FRAME_BITS;
        bits.extend(f.bits);
        if last {
            return Ok(bits);
        }
    }
}

/// The same round with verifier and prover on separate threads exchanging
/// framed messages over a socket pair: the verifier sends the padded
/// message, the prover answers with `6n` bits (`a_1 .. a_n b_1 .. b_n`,
/// three bits each, entry 0 first).
pub fn run_round_framed(round: u64, n: usize, delta: f64, noise: &NoiseModel, seed: u64) -> Result<(RoundLog, Verdict)> {
    let d = protocol_delta(delta)?;
    let s = round_seed(seed, round);
    let (mut verifier_end, mut prover_end) = UnixStream::pair()?;
    std::thread::scope(|scope| {
        let prover = scope.spawn(move || -> Result<()> {
            let message = PaddedMessage::from_bits(&receive(&mut prover_end)?)?;
            let (a, b) = honest_prover(&message, noise, s)?;
            send(&mut prover_end, 1, &answer_frames(&a, &b))
        });
        let (message, inputs): (PaddedMessage, LineInput) = verifier_round(n, delta, s)?;
        send(&mut verifier_end, 0, &message.to_bits())?;
        let bits = receive(&mut verifier_end)?;
        prover.join().map_err(|_| domain("prover thread panicked"))??;
        let (a, b) = unpack_answers(&bits, n)?;
        let v = verify_exact(&inputs, &a, &b, &d)?;
        Ok((log(round, s, n, delta, noise, &v), v))
    })
}

/// Acceptance statistics over independent honest rounds.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CompletenessSummary {
    pub n: usize,
    pub delta: f64,
    pub epsilon: f64,
    pub rounds: usize,
    pub accepted: usize,
    pub acceptance_rate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    /// Lost games over all games played.
    pub failure_rate: f64,
    /// Worst per-round fraction of lost games.
    pub max_round_failure_rate: f64,
}

/// Run `rounds` honest rounds, optionally each over a socket pair.
pub fn completeness(
    n: usize,
    delta: f64,
    noise: &NoiseModel,
    rounds: usize,
    seed: u64,
    framed: bool,
) -> Result<(CompletenessSummary, Vec<RoundLog>)> {
    if rounds == 0 {
        return Err(domain("at least one round is required"));
    }
    // framed rounds block a thread on the socket while the prover needs the
    // pool, so they run one at a time
    let logs: Vec<RoundLog> = if framed {
        (0..rounds as u64)
            .map(|r| run_round_framed(r, n, delta, noise, seed).map(|(l, _)| l))
            .collect::<Result<_>>()?
    } else {
        (0..rounds as u64)
            .into_par_iter()
            .map(|r| run_round(r, n, delta, noise, seed).map(|(l, _)| l))
            .collect::<Result<_>>()?
    };
    let accepted = logs.iter().filter(|l| l.accept).count();
    let lost: usize = logs.iter().map(|l| n - l.win_count).sum();
    let worst = logs.iter().map(|l| n - l.win_count).max().unwrap_or(0);
    let (ci_low, ci_high) = clopper_pearson(accepted as u64, rounds as u64, 0.95)?;
    Ok((
        CompletenessSummary {
            n,
            delta,
            epsilon: noise.epsilon,
            rounds,
            accepted,
            acceptance_rate: accepted as f64 / rounds as f64,
            ci_low,
            ci_high,
            failure_rate: lost as f64 / (rounds * n) as f64,
            max_round_failure_rate: worst as f64 / n as f64,
        },
        logs,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn noiseless_rounds_always_accept() {
        for n in [1, 7, 100, 10_000] {
            let (l, v) = run_round(0, n, 0.0, &NoiseModel::noiseless(), n as u64).unwrap();
            assert!(l.accept && v.win_count == n);
        }
    }

    #[test]
    fn framed_round_matches_in_process() {
        let noise = NoiseModel::new(0.02).unwrap();
        for (round, n) in [(0, 1), (1, 50), (2, 6000)] {
            assert_eq!(run_round(round, n, 0.1, &noise, 3).unwrap(), run_round_framed(round, n, 0.1, &noise, 3).unwrap());
        }
    }

    #[test]
    fn answers_roundtrip() {
        let (a, b) = (vec![0, 3, 7], vec![1, 6, 2]);
        assert_eq!(unpack_answers(&answer_frames(&a, &b), 3).unwrap(), (a, b));
    }

    #[test]
    fn completeness_is_reproducible() {
        let noise = NoiseModel::new(0.01).unwrap();
        let x = completeness(40, 0.1, &noise, 20, 6, false).unwrap();
        assert_eq!(x, completeness(40, 0.1, &noise, 20, 6, true).unwrap());
        assert_eq!(x.1.len(), 20);
    }
}
