use rand::Rng;

use crate::error::{domain, Result};
use crate::rng;

use super::spec::GameSpec;

/// Questions for `n` parallel games laid out along a line:
/// `x_1 .. x_n` followed by `y_1 .. y_n`, with `x_n` next to `y_1`.
///
/// Each symbol is encoded big-endian in a fixed number of bits. For trit
/// alphabets this is two bits with `0 -> 00`, `1 -> 01`, `2 -> 10`; the code
/// `11` is invalid.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LineInput {
    pub xs: Vec<usize>,
    pub ys: Vec<usize>,
}

/// Bits needed to encode an alphabet of the given size.
pub fn symbol_width(alphabet: usize) -> usize {
    let mut w = 1;
    while (1usize << w) < alphabet {
        w += 1;
    }
    w
}

impl LineInput {
    pub fn new(xs: Vec<usize>, ys: Vec<usize>) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(domain(format!(
                "x has {} symbols but y has {}",
                xs.len(),
                ys.len()
            )));
        }
        Ok(Self { xs, ys })
    }

    /// Trit inputs for the Magic Square relation.
    pub fn trits(xs: Vec<usize>, ys: Vec<usize>) -> Result<Self> {
        if let Some(bad) = xs.iter().chain(&ys).find(|&&t| t > 2) {
            return Err(domain(format!("{bad} is not a trit")));
        }
        Self::new(xs, ys)
    }

    pub fn n(&self) -> usize {
        self.xs.len()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.xs.iter().copied().zip(self.ys.iter().copied())
    }

    fn encode(symbols: &[usize], width: usize) -> Vec<bool> {
        symbols
            .iter()
            .flat_map(|&s| (0..width).rev().map(move |k| (s >> k) & 1 == 1))
            .collect()
    }

    fn decode(bits: &[bool], width: usize, alphabet: usize) -> Result<Vec<usize>> {
        if bits.len() % width != 0 {
            return Err(domain(format!(
                "{} bits is not a multiple of the symbol width {width}",
                bits.len()
            )));
        }
        bits.chunks(width)
            .map(|c| {
                let v = c.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize);
                if v < alphabet {
                    Ok(v)
                } else {
                    Err(domain(format!("code {v} is outside an alphabet of {alphabet}")))
                }
            })
            .collect()
    }

    /// The `x` register as bits (`width` bits per symbol).
    pub fn x_bits(&self, width: usize) -> Vec<bool> {
        Self::encode(&self.xs, width)
    }

    pub fn y_bits(&self, width: usize) -> Vec<bool> {
        Self::encode(&self.ys, width)
    }

    /// Decode two bit registers for a game with the given question alphabets.
    pub fn from_bits(x: &[bool], y: &[bool], game: &GameSpec) -> Result<Self> {
        let xs = Self::decode(x, symbol_width(game.x_size()), game.x_size())?;
        let ys = Self::decode(y, symbol_width(game.y_size()), game.y_size())?;
        Self::new(xs, ys)
    }
}

/// Draw `n` i.i.d. question pairs from the game distribution.
pub fn sample_inputs(game: &GameSpec, n: usize, seed: u64) -> Result<LineInput> {
    if n == 0 {
        return Err(domain("at least one game is required"));
    }
    let mut cumulative = Vec::with_capacity(game.x_size() * game.y_size());
    let mut acc = 0u64;
    for x in 0..game.x_size() {
        for y in 0..game.y_size() {
            acc += game.weight(x, y);
            cumulative.push(acc);
        }
    }
    let mut r = rng::stream(seed, rng::domain::INPUTS, 0);
    let mut xs = Vec::with_capacity(n);
    let mut ys = Vec::with_capacity(n);
    for _ in 0..n {
        let u = r.gen_range(0..game.denominator());
        let idx = cumulative.partition_point(|&c| c <= u);
        xs.push(idx / game.y_size());
        ys.push(idx % game.y_size());
    }
    LineInput::new(xs, ys)
}

/// Number of games whose tuple satisfies the predicate.
pub fn count_satisfied(
    game: &GameSpec,
    inputs: &LineInput,
    alice: &[usize],
    bob: &[usize],
) -> Result<usize> {
    let n = inputs.n();
    if alice.len() != n || bob.len() != n {
        return Err(domain(format!(
            "answer lists have lengths {} and {}, expected {n}",
            alice.len(),
            bob.len()
        )));
    }
    let mut count = 0;
    for (i, (x, y)) in inputs.pairs().enumerate() {
        if game.eval_predicate(x, y, alice[i], bob[i])? {
            count += 1;
        }
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::magic::{magic_square, parse_answer};

    #[test]
    fn trit_encoding_is_pinned() {
        let li = LineInput::trits(vec![0, 1, 2], vec![2, 2, 0]).unwrap();
        let bits: String = li.x_bits(2).iter().map(|&b| if b { '1' } else { '0' }).collect();
        assert_eq!(bits, "000110");
        let g = magic_square();
        let back = LineInput::from_bits(&li.x_bits(2), &li.y_bits(2), &g).unwrap();
        assert_eq!(back, li);
        assert!(LineInput::from_bits(&[true, true], &[false, false], &g).is_err());
        assert!(LineInput::trits(vec![3], vec![0]).is_err());
    }

    #[test]
    fn count_examples() {
        let g = magic_square();
        let a = parse_answer("000").unwrap();
        let win_b = parse_answer("010").unwrap();
        let lose_b = parse_answer("111").unwrap();
        let one = LineInput::trits(vec![0], vec![0]).unwrap();
        assert_eq!(count_satisfied(&g, &one, &[a], &[win_b]).unwrap(), 1);
        let three = LineInput::trits(vec![0, 0, 0], vec![0, 0, 0]).unwrap();
        assert_eq!(count_satisfied(&g, &three, &[a; 3], &[win_b; 3]).unwrap(), 3);
        let two = LineInput::trits(vec![0, 0], vec![0, 0]).unwrap();
        assert_eq!(count_satisfied(&g, &two, &[a; 2], &[win_b, lose_b]).unwrap(), 1);
        assert!(count_satisfied(&g, &two, &[a], &[win_b, lose_b]).is_err());
    }

    #[test]
    fn sampling_is_deterministic_and_rejects_zero() {
        let g = magic_square();
        assert_eq!(sample_inputs(&g, 50, 9).unwrap(), sample_inputs(&g, 50, 9).unwrap());
        assert_ne!(sample_inputs(&g, 50, 9).unwrap(), sample_inputs(&g, 50, 10).unwrap());
        assert!(sample_inputs(&g, 0, 9).is_err());
    }

    #[test]
    fn sampling_frequencies_are_uniform() {
        let g = magic_square();
        let n = 100_000;
        let li = sample_inputs(&g, n, 2024).unwrap();
        let mut counts = [0usize; 9];
        for (x, y) in li.pairs() {
            counts[x * 3 + y] += 1;
        }
        let expected = n as f64 / 9.0;
        let chi2: f64 = counts
            .iter()
            .map(|&c| (c as f64 - expected).powi(2) / expected)
            .sum();
        for &c in &counts {
            assert!((c as f64 / n as f64 - 1.0 / 9.0).abs() < 0.01);
        }
        // 8 degrees of freedom, 99.9% quantile is 26.12
        assert!(chi2 < 26.12, "chi2 = {chi2}");
    }

    #[test]
    fn width_matches_alphabet() {
        assert_eq!(symbol_width(2), 1);
        assert_eq!(symbol_width(3), 2);
        assert_eq!(symbol_width(4), 2);
        assert_eq!(symbol_width(5), 3);
    }
}
