use num_complex::Complex64;
use rand::Rng;

use crate::error::{domain, Result};

pub const DEFAULT_MAX_QUBITS: usize = 8;

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Clifford gates on explicit qubit indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gate {
    I(usize),
    H(usize),
    X(usize),
    Y(usize),
    Z(usize),
    S(usize),
    /// Control, target.
    Cnot(usize, usize),
    Cz(usize, usize),
    Swap(usize, usize),
}

impl Gate {
    pub fn support(&self) -> Vec<usize> {
        match *self {
            Gate::I(q) | Gate::H(q) | Gate::X(q) | Gate::Y(q) | Gate::Z(q) | Gate::S(q) => vec![q],
            Gate::Cnot(a, b) | Gate::Cz(a, b) | Gate::Swap(a, b) => vec![a, b],
        }
    }
}

/// Dense state of `qubits` qubits. Qubit 0 is the most significant bit of
/// the basis index.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// `|0...0>` on `qubits` qubits, at most [`DEFAULT_MAX_QUBITS`].
    pub fn zero(qubits: usize) -> Result<Self> {
        Self::zero_with_limit(qubits, DEFAULT_MAX_QUBITS)
    }

    pub fn zero_with_limit(qubits: usize, max_qubits: usize) -> Result<Self> {
        if qubits == 0 || qubits > max_qubits {
            return Err(domain(format!("qubit count {qubits} outside 1..={max_qubits}")));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << qubits];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(Self { qubits, amps })
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(domain(format!("{len} amplitudes is not a power of two")));
        }
        Ok(Self {
            qubits: len.trailing_zeros() as usize,
            amps,
        })
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    #[inline]
    fn mask(&self, q: usize) -> usize {
        1 << (self.qubits - 1 - q)
    }

    fn check(&self, support: &[usize]) -> Result<()> {
        if let Some(&q) = support.iter().find(|&&q| q >= self.qubits) {
            return Err(domain(format!("qubit {q} out of range for {} qubits", self.qubits)));
        }
        if support.len() == 2 && support[0] == support[1] {
            return Err(domain(format!("two-qubit gate on repeated qubit {}", support[0])));
        }
        Ok(())
    }

    fn apply_single(&mut self, q: usize, m: [[Complex64; 2]; 2]) {
        let bit = self.mask(q);
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                let (a0, a1) = (self.amps[i], self.amps[i | bit]);
                self.amps[i] = m[0][0] * a0 + m[0][1] * a1;
                self.amps[i | bit] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
    }

    /// Apply a gate without noise.
    pub fn apply(&mut self, gate: Gate) -> Result<()> {
        self.check(&gate.support())?;
        let c = |re: f64, im: f64| Complex64::new(re, im);
        let (o, z) = (c(1.0, 0.0), c(0.0, 0.0));
        let h = c(FRAC_1_SQRT_2, 0.0);
        match gate {
            Gate::I(_) => {}
            Gate::H(q) => self.apply_single(q, [[h, h], [h, -h]]),
            Gate::X(q) => self.apply_single(q, [[z, o], [o, z]]),
            Gate::Y(q) => self.apply_single(q, [[z, c(0.0, -1.0)], [c(0.0, 1.0), z]]),
            Gate::Z(q) => self.apply_single(q, [[o, z], [z, -o]]),
            Gate::S(q) => self.apply_single(q, [[o, z], [z, c(0.0, 1.0)]]),
            Gate::Cnot(ctl, tgt) => {
                let (cm, tm) = (self.mask(ctl), self.mask(tgt));
                for i in 0..self.amps.len() {
                    if i & cm != 0 && i & tm == 0 {
                        self.amps.swap(i, i | tm);
                    }
                }
            }
            Gate::Cz(a, b) => {
                let m = self.mask(a) | self.mask(b);
                for (i, amp) in self.amps.iter_mut().enumerate() {
                    if i & m == m {
                        *amp = -*amp;
                    }
                }
            }
            Gate::Swap(a, b) => {
                let (am, bm) = (self.mask(a), self.mask(b));
                for i in 0..self.amps.len() {
                    if i & am != 0 && i & bm == 0 {
                        self.amps.swap(i, (i & !am) | bm);
                    }
                }
            }
        }
        Ok(())
    }

    /// Measure every qubit in the computational basis with one uniform draw;
    /// returns the basis index. The state collapses onto it.
    pub fn measure_all<R: Rng + ?Sized>(&mut self, rng: &mut R) -> usize {
        let u: f64 = rng.gen::<f64>() * self.norm_sqr();
        let mut acc = 0.0;
        let mut outcome = self.amps.len() - 1;
        for (i, a) in self.amps.iter().enumerate() {
            acc += a.norm_sqr();
            if u < acc {
                outcome = i;
                break;
            }
        }
        // rounding can leave the tail pointing at a zero-amplitude index
        if self.amps[outcome].norm_sqr() == 0.0 {
            outcome = self
                .amps
                .iter()
                .rposition(|a| a.norm_sqr() > 0.0)
                .unwrap_or(outcome);
        }
        for (i, a) in self.amps.iter_mut().enumerate() {
            *a = if i == outcome {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            };
        }
        outcome
    }

    /// Bit of qubit `q` in a basis index.
    pub fn bit_of(&self, index: usize, q: usize) -> u8 {
        u8::from(index & self.mask(q) != 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn hadamard_on_zero() {
        let mut s = StateVector::zero(1).unwrap();
        s.apply(Gate::H(0)).unwrap();
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        assert!(close(s.amplitudes()[0], h) && close(s.amplitudes()[1], h));
    }

    #[test]
    fn cnot_makes_bell_pair() {
        let mut s = StateVector::zero(2).unwrap();
        s.apply(Gate::H(0)).unwrap();
        s.apply(Gate::Cnot(0, 1)).unwrap();
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        let z = Complex64::new(0.0, 0.0);
        let expected = [h, z, z, h];
        assert!(s.amplitudes().iter().zip(expected).all(|(&a, b)| close(a, b)));
    }

    #[test]
    fn identity_leaves_state() {
        let mut s = StateVector::zero(3).unwrap();
        s.apply(Gate::H(1)).unwrap();
        let before = s.clone();
        s.apply(Gate::I(2)).unwrap();
        assert_eq!(s, before);
    }

    #[test]
    fn qubit_zero_is_most_significant() {
        let mut s = StateVector::zero(3).unwrap();
        s.apply(Gate::X(0)).unwrap();
        assert!(close(s.amplitudes()[0b100], Complex64::new(1.0, 0.0)));
        s.apply(Gate::Swap(0, 2)).unwrap();
        assert!(close(s.amplitudes()[0b001], Complex64::new(1.0, 0.0)));
    }

    #[test]
    fn bad_targets_rejected() {
        let mut s = StateVector::zero(2).unwrap();
        assert!(s.apply(Gate::H(2)).is_err());
        assert!(s.apply(Gate::Cnot(1, 1)).is_err());
        assert!(StateVector::zero(9).is_err());
        assert!(StateVector::zero_with_limit(9, 10).is_ok());
    }

    fn gate_strategy(n: usize) -> impl Strategy<Value = Gate> {
        (0..9usize, 0..n, 1..n).prop_map(move |(k, a, off)| {
            let b = (a + off) % n;
            match k {
                0 => Gate::I(a),
                1 => Gate::H(a),
                2 => Gate::X(a),
                3 => Gate::Y(a),
                4 => Gate::Z(a),
                5 => Gate::S(a),
                6 => Gate::Cnot(a, b),
                7 => Gate::Cz(a, b),
                _ => Gate::Swap(a, b),
            }
        })
    }

    proptest! {
        #[test]
        fn norm_is_preserved(gates in proptest::collection::vec(gate_strategy(4), 0..60)) {
            let mut s = StateVector::zero(4).unwrap();
            for g in gates {
                s.apply(g).unwrap();
                prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-10);
            }
        }
    }
}
