//! The honest Magic Square prover on two Bell pairs.
//!
//! Qubits 0..4 of each game: Alice holds `{0, 2}`, Bob holds `{1, 3}`, and
//! the pairs are `(0, 1)` and `(2, 3)`. For a grid entry `P ⊗ Q`, `P` acts
//! on the party's first qubit (0 or 1) and `Q` on its second (2 or 3).

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{domain, Result};
use crate::game::magic::{format_answer, predicate};
use crate::game::LineInput;
use crate::rng;

use super::grid::verified_grid;
use super::noise::{apply_gate, NoiseModel};
use super::state::{Gate, StateVector};

pub const ALICE_QUBITS: [usize; 2] = [0, 2];
pub const BOB_QUBITS: [usize; 2] = [1, 3];

fn prepare_one<R: rand::Rng + ?Sized>(noise: &NoiseModel, rng: &mut R) -> Result<StateVector> {
    let mut s = StateVector::zero(4)?;
    for g in [Gate::H(0), Gate::Cnot(0, 1), Gate::H(2), Gate::Cnot(2, 3)] {
        if noise.noisy_resource_prep {
            apply_gate(&mut s, g, noise, rng)?;
        } else {
            s.apply(g)?;
        }
    }
    Ok(s)
}

/// `n` copies of `|φ+⟩ ⊗ |φ+⟩`, game `i` drawing from stream `(seed, RESOURCE, i)`.
pub fn prepare_resource(n: usize, noise: &NoiseModel, seed: u64) -> Result<Vec<StateVector>> {
    if n == 0 {
        return Err(domain("at least one game is required"));
    }
    noise.check()?;
    (0..n)
        .into_par_iter()
        .map(|i| prepare_one(noise, &mut rng::stream(seed, rng::domain::RESOURCE, i as u64)))
        .collect()
}

/// Basis change for Alice's row `x` on her qubits `(p, q)`.
fn alice_gates(x: usize, p: usize, q: usize) -> Vec<Gate> {
    match x {
        1 => vec![Gate::H(p), Gate::H(q)],
        2 => vec![Gate::Cz(p, q), Gate::H(p), Gate::H(q)],
        _ => vec![],
    }
}

/// Row answer from the measured bits; the third bit closes even parity.
fn alice_decode(x: usize, mp: u8, mq: u8) -> usize {
    let (a0, a1) = match x {
        1 => (mp, mq),
        2 => (1 ^ mp, 1 ^ mq),
        _ => (mq, mp),
    };
    let a2 = a0 ^ a1;
    (a0 as usize) | (a1 as usize) << 1 | (a2 as usize) << 2
}

fn bob_gates(y: usize, p: usize, q: usize) -> Vec<Gate> {
    match y {
        1 => vec![Gate::H(q)],
        2 => vec![Gate::Cnot(p, q), Gate::H(p)],
        _ => vec![Gate::H(p)],
    }
}

/// Column answer; the third bit closes odd parity.
fn bob_decode(y: usize, mp: u8, mq: u8) -> usize {
    let (b0, b1) = match y {
        1 => (mp, mq),
        _ => (mq, mp),
    };
    let b2 = 1 ^ b0 ^ b1;
    (b0 as usize) | (b1 as usize) << 1 | (b2 as usize) << 2
}

/// Measurement settings indexed by a 2-bit register code. The invalid code
/// `3` fires neither classically controlled block and lands on setting 0.
pub(crate) fn setting_for_code(code: usize) -> usize {
    if code > 2 {
        0
    } else {
        code
    }
}

/// Run both parties' measurement circuits on a 4-qubit resource state.
///
/// Every gate is followed by a draw from the noise model. Answers are packed
/// with bit `i` holding entry `i`; eigenvalue `+1` reads as bit 0.
pub fn measure_magic_square<R: rand::Rng + ?Sized>(
    state: &mut StateVector,
    x: usize,
    y: usize,
    noise: &NoiseModel,
    rng: &mut R,
) -> Result<(usize, usize)> {
    if x > 2 || y > 2 {
        return Err(domain(format!("questions ({x}, {y}) are not trits")));
    }
    measure_codes(state, x, y, noise, rng)
}

pub(crate) fn measure_codes<R: rand::Rng + ?Sized>(
    state: &mut StateVector,
    x_code: usize,
    y_code: usize,
    noise: &NoiseModel,
    rng: &mut R,
) -> Result<(usize, usize)> {
    if state.qubits() != 4 {
        return Err(domain(format!("resource state has {} qubits, expected 4", state.qubits())));
    }
    verified_grid();
    let (x, y) = (setting_for_code(x_code), setting_for_code(y_code));
    let [ap, aq] = ALICE_QUBITS;
    let [bp, bq] = BOB_QUBITS;
    for g in alice_gates(x, ap, aq).into_iter().chain(bob_gates(y, bp, bq)) {
        apply_gate(state, g, noise, rng)?;
    }
    let outcome = state.measure_all(rng);
    let m = |q| state.bit_of(outcome, q);
    Ok((alice_decode(x, m(ap), m(aq)), bob_decode(y, m(bp), m(bq))))
}

/// Play game `i` with register codes from its own streams.
pub(crate) fn play_game(i: usize, x_code: usize, y_code: usize, noise: &NoiseModel, seed: u64) -> Result<(usize, usize)> {
    let mut state = prepare_one(noise, &mut rng::stream(seed, rng::domain::RESOURCE, i as u64))?;
    let mut r = rng::stream(seed, rng::domain::GAME, i as u64);
    measure_codes(&mut state, x_code, y_code, noise, &mut r)
}

/// Answers of the honest prover on every game of a line input.
///
/// Games run in parallel; game `i` uses streams indexed by `i`, so results
/// do not depend on the thread count.
pub fn run_parmagic(inputs: &LineInput, noise: &NoiseModel, seed: u64) -> Result<(Vec<usize>, Vec<usize>)> {
    noise.check()?;
    if let Some(bad) = inputs.xs.iter().chain(&inputs.ys).find(|&&t| t > 2) {
        return Err(domain(format!("{bad} is not a trit")));
    }
    let answers: Vec<(usize, usize)> = inputs
        .xs
        .par_iter()
        .zip(inputs.ys.par_iter())
        .enumerate()
        .map(|(i, (&x, &y))| play_game(i, x, y, noise, seed))
        .collect::<Result<_>>()?;
    Ok(answers.into_iter().unzip())
}

/// One row of the shot-level export.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShotRecord {
    pub game_index: usize,
    pub x: usize,
    pub y: usize,
    pub a: String,
    pub b: String,
    pub satisfied: u8,
}

pub fn shot_records(inputs: &LineInput, alice: &[usize], bob: &[usize]) -> Vec<ShotRecord> {
    inputs
        .pairs()
        .zip(alice.iter().zip(bob))
        .enumerate()
        .map(|(i, ((x, y), (&a, &b)))| ShotRecord {
            game_index: i,
            x,
            y,
            a: format_answer(a),
            b: format_answer(b),
            satisfied: u8::from(predicate(x, y, a, b)),
        })
        .collect()
}

/// CSV with columns `game_index,x,y,a,b,satisfied`.
pub fn write_shots_csv<W: Write>(out: W, records: &[ShotRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(r).map_err(|e| domain(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::magic::parity;
    use crate::game::sample_inputs;
    use crate::game::magic::magic_square;
    use crate::quantum::grid::{Pauli, PauliString2};
    use num_complex::Complex64;

    type Mat = Vec<Vec<Complex64>>;

    fn pauli_mat(p: Pauli) -> Mat {
        let c = Complex64::new;
        match p {
            Pauli::I => vec![vec![c(1., 0.), c(0., 0.)], vec![c(0., 0.), c(1., 0.)]],
            Pauli::X => vec![vec![c(0., 0.), c(1., 0.)], vec![c(1., 0.), c(0., 0.)]],
            Pauli::Y => vec![vec![c(0., 0.), c(0., -1.)], vec![c(0., 1.), c(0., 0.)]],
            Pauli::Z => vec![vec![c(1., 0.), c(0., 0.)], vec![c(0., 0.), c(-1., 0.)]],
        }
    }

    fn kron(a: &Mat, b: &Mat) -> Mat {
        let (n, m) = (a.len(), b.len());
        let mut out = vec![vec![Complex64::new(0., 0.); n * m]; n * m];
        for i in 0..n {
            for j in 0..n {
                for k in 0..m {
                    for l in 0..m {
                        out[i * m + k][j * m + l] = a[i][j] * b[k][l];
                    }
                }
            }
        }
        out
    }

    fn matmul(a: &Mat, b: &Mat) -> Mat {
        let n = a.len();
        (0..n)
            .map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect())
            .collect()
    }

    fn dagger(a: &Mat) -> Mat {
        let n = a.len();
        (0..n).map(|i| (0..n).map(|j| a[j][i].conj()).collect()).collect()
    }

    fn observable(p: PauliString2) -> Mat {
        let s = [1.0, 0.0, -1.0, 0.0][p.phase as usize];
        kron(&pauli_mat(p.ops[0]), &pauli_mat(p.ops[1]))
            .into_iter()
            .map(|r| r.into_iter().map(|v| v * s).collect())
            .collect()
    }

    /// Unitary of a two-qubit circuit on local qubits (0, 1).
    fn unitary(gates: &[Gate]) -> Mat {
        let mut cols = Vec::new();
        for basis in 0..4 {
            let mut amps = vec![Complex64::new(0., 0.); 4];
            amps[basis] = Complex64::new(1., 0.);
            let mut s = StateVector::from_amplitudes(amps).unwrap();
            for &g in gates {
                s.apply(g).unwrap();
            }
            cols.push(s.amplitudes().to_vec());
        }
        (0..4).map(|i| (0..4).map(|j| cols[j][i]).collect()).collect()
    }

    fn close(a: &Mat, b: &Mat) -> bool {
        a.iter().flatten().zip(b.iter().flatten()).all(|(x, y)| (x - y).norm() < 1e-12)
    }

    /// Observable whose eigenvalue `(-1)^bit` is read when the decoder maps
    /// the measured `(mp, mq)` to answer bit `k`: recover it as the signed
    /// `U† Z U` for whichever local Z the decoder uses.
    fn check_reads(gates: Vec<Gate>, decode: impl Fn(u8, u8) -> usize, expected: [PauliString2; 2]) {
        let u = unitary(&gates);
        let z_first = kron(&pauli_mat(Pauli::Z), &pauli_mat(Pauli::I));
        let z_second = kron(&pauli_mat(Pauli::I), &pauli_mat(Pauli::Z));
        for (k, want) in expected.iter().enumerate() {
            // answer bit k as a function of (mp, mq): it is mp, mq, or a flip
            let f = |mp, mq| ((decode(mp, mq) >> k) & 1) as u8;
            let (z, flip) = if f(1, 0) != f(0, 0) {
                (&z_first, f(0, 0) == 1)
            } else {
                (&z_second, f(0, 0) == 1)
            };
            let mut measured = matmul(&dagger(&u), &matmul(z, &u));
            if flip {
                measured = measured.into_iter().map(|r| r.into_iter().map(|v| -v).collect()).collect();
            }
            assert!(close(&measured, &observable(*want)), "entry {k}: expected {want}");
        }
    }

    #[test]
    fn circuits_measure_the_grid() {
        let grid = verified_grid();
        for x in 0..3 {
            check_reads(
                alice_gates(x, 0, 1),
                |mp, mq| alice_decode(x, mp, mq),
                [grid.entries[x][0], grid.entries[x][1]],
            );
        }
        for y in 0..3 {
            check_reads(
                bob_gates(y, 0, 1),
                |mp, mq| bob_decode(y, mp, mq),
                [grid.entries[0][y], grid.entries[1][y]],
            );
        }
    }

    #[test]
    fn resource_state_amplitudes() {
        let states = prepare_resource(1, &NoiseModel::noiseless(), 0).unwrap();
        for (i, a) in states[0].amplitudes().iter().enumerate() {
            let expected = if [0b0000, 0b0011, 0b1100, 0b1111].contains(&i) { 0.5 } else { 0.0 };
            assert!((a.re - expected).abs() < 1e-12 && a.im.abs() < 1e-12, "index {i:04b}");
        }
        assert!(prepare_resource(0, &NoiseModel::noiseless(), 0).is_err());
    }

    #[test]
    fn noiseless_prover_always_wins() {
        let noise = NoiseModel::noiseless();
        let mut r = rng::stream(5, 77, 0);
        for x in 0..3 {
            for y in 0..3 {
                for _ in 0..500 {
                    let mut s = prepare_one(&noise, &mut r).unwrap();
                    let (a, b) = measure_magic_square(&mut s, x, y, &noise, &mut r).unwrap();
                    assert!(predicate(x, y, a, b), "x={x} y={y} a={a:03b} b={b:03b}");
                }
            }
        }
    }

    #[test]
    fn parities_hold_under_heavy_noise() {
        let noise = NoiseModel::new(0.5).unwrap();
        let g = magic_square();
        let inputs = sample_inputs(&g, 2000, 3).unwrap();
        let (a, b) = run_parmagic(&inputs, &noise, 3).unwrap();
        assert!(a.iter().all(|&a| parity(a) == 0));
        assert!(b.iter().all(|&b| parity(b) == 1));
        let wins = crate::game::count_satisfied(&g, &inputs, &a, &b).unwrap();
        assert!(wins < 2000);
    }

    #[test]
    fn invalid_trits_rejected() {
        let mut s = StateVector::zero(4).unwrap();
        let mut r = rng::stream(0, 0, 0);
        assert!(measure_magic_square(&mut s, 3, 0, &NoiseModel::noiseless(), &mut r).is_err());
    }

    #[test]
    fn independent_of_thread_count() {
        let g = magic_square();
        let inputs = sample_inputs(&g, 3000, 8).unwrap();
        let noise = NoiseModel::new(0.05).unwrap();
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| run_parmagic(&inputs, &noise, 21).unwrap())
        };
        assert_eq!(run(1), run(4));
    }

    #[test]
    fn shot_csv_columns() {
        let inputs = LineInput::trits(vec![0, 2], vec![1, 2]).unwrap();
        let (a, b) = run_parmagic(&inputs, &NoiseModel::noiseless(), 1).unwrap();
        let mut buf = Vec::new();
        write_shots_csv(&mut buf, &shot_records(&inputs, &a, &b)).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("game_index,x,y,a,b,satisfied"));
        assert!(lines.all(|l| l.ends_with(",1")));
    }
}
