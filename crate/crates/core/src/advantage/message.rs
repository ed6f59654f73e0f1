use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::game::{magic::magic_square, sample_inputs, LineInput};
use crate::stats::decimal_rational;

/// Two-bit code of the blank symbol.
pub const BLANK: u8 = 0b11;

/// The verifier's message: `␣ ␣ x_1 ␣ ␣ x_2 … ␣ ␣ x_n ␣ ␣ y_1 … ␣ ␣ y_n`,
/// one 2-bit code per symbol (`00`, `01`, `10` for trits, `11` for `␣`).
///
/// Symbol `3k + 2` carries register `k`; registers `0..n` are `x`, the rest
/// `y`. Blank positions may hold any code, the prover never reads them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PaddedMessage {
    codes: Vec<u8>,
}

impl PaddedMessage {
    pub fn pad(inputs: &LineInput) -> Result<Self> {
        if inputs.n() == 0 {
            return Err(domain("at least one game is required"));
        }
        let mut codes = Vec::with_capacity(6 * inputs.n());
        for &t in inputs.xs.iter().chain(&inputs.ys) {
            if t > 2 {
                return Err(domain(format!("{t} is not a trit")));
            }
            codes.extend([BLANK, BLANK, t as u8]);
        }
        Ok(Self { codes })
    }

    pub fn from_codes(codes: Vec<u8>) -> Result<Self> {
        if codes.is_empty() || codes.len() % 6 != 0 {
            return Err(domain(format!("{} symbols is not a positive multiple of 6", codes.len())));
        }
        if let Some(c) = codes.iter().find(|&&c| c > 3) {
            return Err(domain(format!("symbol code {c} does not fit two bits")));
        }
        if let Some(k) = (0..codes.len() / 3).find(|&k| codes[Self::position(k)] > 2) {
            return Err(domain(format!("register {k} holds a blank instead of a trit")));
        }
        Ok(Self { codes })
    }

    /// Symbol index of register `k`.
    pub fn position(k: usize) -> usize {
        3 * k + 2
    }

    pub fn n(&self) -> usize {
        self.codes.len() / 6
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    pub fn codes(&self) -> &[u8] {
        &self.codes
    }

    /// Code of register `k`.
    pub fn register(&self, k: usize) -> u8 {
        self.codes[Self::position(k)]
    }

    /// Whether every non-register symbol is encoded as `11`.
    pub fn is_canonical(&self) -> bool {
        self.codes
            .iter()
            .enumerate()
            .all(|(i, &c)| i % 3 == 2 || c == BLANK)
    }

    pub fn inputs(&self) -> LineInput {
        let n = self.n();
        let regs: Vec<usize> = (0..2 * n).map(|k| self.register(k) as usize).collect();
        LineInput {
            xs: regs[..n].to_vec(),
            ys: regs[n..].to_vec(),
        }
    }

    /// Two bits per symbol, high bit first.
    pub fn to_bits(&self) -> Vec<bool> {
        self.codes.iter().flat_map(|&c| [c & 2 != 0, c & 1 != 0]).collect()
    }

    pub fn from_bits(bits: &[bool]) -> Result<Self> {
        if bits.len() % 2 != 0 {
            return Err(domain("odd number of message bits"));
        }
        Self::from_codes(bits.chunks(2).map(|c| (u8::from(c[0]) << 1) | u8::from(c[1])).collect())
    }
}

impl fmt::Display for PaddedMessage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, &c) in self.codes.iter().enumerate() {
            if i % 3 == 2 {
                write!(f, "{c}")?;
            } else {
                f.write_str("␣")?;
            }
        }
        Ok(())
    }
}

/// `delta` as an exact rational in `[0, 1/10]`.
pub fn protocol_delta(delta: f64) -> Result<BigRational> {
    let d = decimal_rational(delta)?;
    if d < BigRational::zero() || d > BigRational::one() / BigRational::from_integer(10.into()) {
        return Err(domain(format!("delta {delta} outside [0, 0.1]")));
    }
    Ok(d)
}

/// Step one and two of a round: uniform trits for both registers and the
/// padded message carrying them.
pub fn verifier_round(n: usize, delta: f64, seed: u64) -> Result<(PaddedMessage, LineInput)> {
    protocol_delta(delta)?;
    let inputs = sample_inputs(&magic_square(), n, seed)?;
    Ok((PaddedMessage::pad(&inputs)?, inputs))
}
