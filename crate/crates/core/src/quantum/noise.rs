use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

use super::state::{Gate, StateVector};

/// Per-gate depolarizing noise.
///
/// After every gate a fault occurs with probability `epsilon`; the fault is
/// a uniformly random non-identity Pauli on the gate's support.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub epsilon: f64,
    #[serde(default)]
    pub noisy_resource_prep: bool,
    #[serde(default = "default_true")]
    pub noisy_swap_network: bool,
}

fn default_true() -> bool {
    true
}

impl Default for NoiseModel {
    fn default() -> Self {
        Self::noiseless()
    }
}

impl NoiseModel {
    pub fn new(epsilon: f64) -> Result<Self> {
        let n = Self {
            epsilon,
            noisy_resource_prep: false,
            noisy_swap_network: true,
        };
        n.check()?;
        Ok(n)
    }

    pub fn noiseless() -> Self {
        Self {
            epsilon: 0.0,
            noisy_resource_prep: false,
            noisy_swap_network: true,
        }
    }

    pub fn check(&self) -> Result<()> {
        if !(0.0..1.0).contains(&self.epsilon) {
            return Err(domain(format!("epsilon {} outside [0, 1)", self.epsilon)));
        }
        Ok(())
    }

    /// Draw the fault after one gate on `support_len` qubits.
    ///
    /// Both the fault decision and the Pauli index are always drawn, so the
    /// consumption of a stream does not depend on `epsilon` and runs at
    /// different noise levels share their randomness: the set of faulty
    /// gates grows monotonically with `epsilon`.
    pub fn sample_fault<R: Rng + ?Sized>(&self, support_len: usize, rng: &mut R) -> Option<usize> {
        let u: f64 = rng.gen();
        let options = (1usize << (2 * support_len)) - 1;
        let pauli = rng.gen_range(1..=options);
        (u < self.epsilon).then_some(pauli)
    }
}

/// Apply single-qubit Pauli `p` (0 = I, 1 = X, 2 = Y, 3 = Z).
pub fn apply_pauli(state: &mut StateVector, q: usize, p: usize) -> Result<()> {
    match p {
        0 => Ok(()),
        1 => state.apply(Gate::X(q)),
        2 => state.apply(Gate::Y(q)),
        3 => state.apply(Gate::Z(q)),
        _ => Err(domain(format!("pauli index {p} out of range"))),
    }
}

/// Split a fault index into one Pauli per support qubit, first qubit most
/// significant (base 4).
pub fn fault_paulis(fault: usize, support_len: usize) -> Vec<usize> {
    (0..support_len)
        .map(|k| (fault >> (2 * (support_len - 1 - k))) & 3)
        .collect()
}

/// Apply `gate`, then a depolarizing fault drawn from `rng`.
pub fn apply_gate<R: Rng + ?Sized>(
    state: &mut StateVector,
    gate: Gate,
    noise: &NoiseModel,
    rng: &mut R,
) -> Result<()> {
    state.apply(gate)?;
    let support = gate.support();
    if let Some(fault) = noise.sample_fault(support.len(), rng) {
        for (q, p) in support.iter().zip(fault_paulis(fault, support.len())) {
            apply_pauli(state, *q, p)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;

    #[test]
    fn epsilon_range() {
        assert!(NoiseModel::new(1.0).is_err());
        assert!(NoiseModel::new(-0.1).is_err());
        assert!(NoiseModel::new(0.999).is_ok());
    }

    #[test]
    fn faults_are_never_identity_and_cover_all_paulis() {
        let noise = NoiseModel::new(0.5).unwrap();
        let mut r = rng::stream(1, 99, 0);
        let mut seen = [0usize; 16];
        for _ in 0..20_000 {
            if let Some(f) = noise.sample_fault(2, &mut r) {
                seen[f] += 1;
            }
        }
        assert_eq!(seen[0], 0);
        assert!(seen[1..].iter().all(|&c| c > 400));
        let total: usize = seen.iter().sum();
        assert!((total as f64 / 20_000.0 - 0.5).abs() < 0.02);
    }

    #[test]
    fn fault_sets_grow_with_epsilon() {
        let low = NoiseModel::new(0.01).unwrap();
        let high = NoiseModel::new(0.2).unwrap();
        let mut a = rng::stream(3, 99, 0);
        let mut b = rng::stream(3, 99, 0);
        for _ in 0..5000 {
            let fl = low.sample_fault(1, &mut a);
            let fh = high.sample_fault(1, &mut b);
            if let Some(p) = fl {
                assert_eq!(fh, Some(p));
            }
        }
    }

    #[test]
    fn fault_split() {
        assert_eq!(fault_paulis(0b0111, 2), vec![1, 3]);
        assert_eq!(fault_paulis(2, 1), vec![2]);
    }

    #[test]
    fn noiseless_gate_is_exact() {
        let mut s = StateVector::zero(2).unwrap();
        let mut r = rng::stream(0, 0, 0);
        apply_gate(&mut s, Gate::I(0), &NoiseModel::noiseless(), &mut r).unwrap();
        assert_eq!(s, StateVector::zero(2).unwrap());
    }
}
