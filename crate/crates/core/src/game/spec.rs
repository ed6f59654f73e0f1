use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::error::{domain, Result};

/// Exact probability. Denominators stay small for the games handled here
/// (`9^m` for `m`-fold Magic Square).
pub type Prob = Ratio<u64>;

/// A finite two-prover one-round game: alphabet sizes, a question
/// distribution and a total predicate table.
///
/// Symbols are indices `0..size`. The predicate is stored densely in
/// `(x, y, a, b)` row-major order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameSpec {
    name: String,
    x_size: usize,
    y_size: usize,
    a_size: usize,
    b_size: usize,
    distribution: Vec<Prob>,
    predicate: Vec<bool>,
    /// `distribution[i] == weights[i] / denominator`.
    weights: Vec<u64>,
    denominator: u64,
}

impl GameSpec {
    pub fn new(
        name: impl Into<String>,
        sizes: [usize; 4],
        distribution: Vec<Prob>,
        predicate: Vec<bool>,
    ) -> Result<Self> {
        let [x_size, y_size, a_size, b_size] = sizes;
        if sizes.iter().any(|&s| s == 0) {
            return Err(domain("alphabets must be nonempty"));
        }
        if distribution.len() != x_size * y_size {
            return Err(domain(format!(
                "distribution has {} entries, expected {}",
                distribution.len(),
                x_size * y_size
            )));
        }
        let table = x_size
            .checked_mul(y_size)
            .and_then(|v| v.checked_mul(a_size))
            .and_then(|v| v.checked_mul(b_size))
            .ok_or_else(|| domain("predicate table size overflows"))?;
        if predicate.len() != table {
            return Err(domain(format!(
                "predicate has {} entries, expected {table}",
                predicate.len()
            )));
        }
        let denominator = distribution
            .iter()
            .fold(1u64, |acc, p| acc.lcm(p.denom()));
        let weights: Vec<u64> = distribution
            .iter()
            .map(|p| p.numer() * (denominator / p.denom()))
            .collect();
        let total: u128 = weights.iter().map(|&w| w as u128).sum();
        if total != denominator as u128 {
            let sum = distribution.iter().fold(Prob::zero(), |acc, p| acc + *p);
            return Err(domain(format!("distribution sums to {sum}, not 1")));
        }
        Ok(Self {
            name: name.into(),
            x_size,
            y_size,
            a_size,
            b_size,
            distribution,
            predicate,
            weights,
            denominator,
        })
    }

    /// Build a game from a predicate closure.
    pub fn from_fn(
        name: impl Into<String>,
        sizes: [usize; 4],
        distribution: Vec<Prob>,
        predicate: impl Fn(usize, usize, usize, usize) -> bool,
    ) -> Result<Self> {
        let [xs, ys, as_, bs] = sizes;
        let mut table = Vec::with_capacity(xs * ys * as_ * bs);
        for x in 0..xs {
            for y in 0..ys {
                for a in 0..as_ {
                    for b in 0..bs {
                        table.push(predicate(x, y, a, b));
                    }
                }
            }
        }
        Self::new(name, sizes, distribution, table)
    }

    /// Uniform distribution over all question pairs.
    pub fn uniform_distribution(x_size: usize, y_size: usize) -> Vec<Prob> {
        let d = (x_size * y_size) as u64;
        vec![Prob::new(1, d); x_size * y_size]
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn x_size(&self) -> usize {
        self.x_size
    }

    pub fn y_size(&self) -> usize {
        self.y_size
    }

    pub fn a_size(&self) -> usize {
        self.a_size
    }

    pub fn b_size(&self) -> usize {
        self.b_size
    }

    pub fn sizes(&self) -> [usize; 4] {
        [self.x_size, self.y_size, self.a_size, self.b_size]
    }

    pub fn prob(&self, x: usize, y: usize) -> Prob {
        self.distribution[x * self.y_size + y]
    }

    pub fn distribution(&self) -> &[Prob] {
        &self.distribution
    }

    /// Integer weight of `(x, y)` over [`Self::denominator`].
    #[inline]
    pub fn weight(&self, x: usize, y: usize) -> u64 {
        self.weights[x * self.y_size + y]
    }

    pub fn denominator(&self) -> u64 {
        self.denominator
    }

    #[inline]
    fn index(&self, x: usize, y: usize, a: usize, b: usize) -> usize {
        ((x * self.y_size + y) * self.a_size + a) * self.b_size + b
    }

    /// Unchecked predicate lookup for hot loops.
    #[inline]
    pub fn wins(&self, x: usize, y: usize, a: usize, b: usize) -> bool {
        self.predicate[self.index(x, y, a, b)]
    }

    pub fn predicate_table(&self) -> &[bool] {
        &self.predicate
    }

    /// Predicate lookup with alphabet checks.
    pub fn eval_predicate(&self, x: usize, y: usize, a: usize, b: usize) -> Result<bool> {
        if x >= self.x_size || y >= self.y_size || a >= self.a_size || b >= self.b_size {
            return Err(domain(format!(
                "symbol out of alphabet: (x={x}, y={y}, a={a}, b={b}) for sizes {:?}",
                self.sizes()
            )));
        }
        Ok(self.wins(x, y, a, b))
    }

    /// Answers for question `x` that win on at least one supported `(y, b)`.
    ///
    /// Any other answer is dominated, so strategy searches may restrict to
    /// this set without changing the optimum. Falls back to `[0]` when no
    /// answer can ever win.
    pub fn useful_alice_answers(&self, x: usize) -> Vec<usize> {
        let v: Vec<usize> = (0..self.a_size)
            .filter(|&a| {
                (0..self.y_size).any(|y| {
                    self.weight(x, y) > 0 && (0..self.b_size).any(|b| self.wins(x, y, a, b))
                })
            })
            .collect();
        if v.is_empty() {
            vec![0]
        } else {
            v
        }
    }

    /// Bob-side counterpart of [`Self::useful_alice_answers`].
    pub fn useful_bob_answers(&self, y: usize) -> Vec<usize> {
        let v: Vec<usize> = (0..self.b_size)
            .filter(|&b| {
                (0..self.x_size).any(|x| {
                    self.weight(x, y) > 0 && (0..self.a_size).any(|a| self.wins(x, y, a, b))
                })
            })
            .collect();
        if v.is_empty() {
            vec![0]
        } else {
            v
        }
    }

    /// `numerator / denominator()` as an exact probability.
    pub(crate) fn to_prob(&self, numerator: u64) -> Prob {
        Prob::new(numerator, self.denominator)
    }

    /// The `m`-fold parallel repetition: questions and answers are tuples
    /// (first coordinate most significant), the predicate requires every
    /// coordinate to win.
    pub fn parallel_repetition(&self, m: usize, max_table: u128) -> Result<GameSpec> {
        if m == 0 {
            return Err(domain("repetition count must be at least 1"));
        }
        let pow = |s: usize| -> Option<usize> { s.checked_pow(m as u32) };
        let (xs, ys, as_, bs) = match (
            pow(self.x_size),
            pow(self.y_size),
            pow(self.a_size),
            pow(self.b_size),
        ) {
            (Some(a), Some(b), Some(c), Some(d)) => (a, b, c, d),
            _ => return Err(domain("repeated alphabet size overflows")),
        };
        let table = (xs as u128) * (ys as u128) * (as_ as u128) * (bs as u128);
        if table > max_table {
            return Err(crate::error::Error::Resource {
                required: table,
                cap: max_table,
            });
        }
        let digits = |mut v: usize, base: usize| -> Vec<usize> {
            let mut out = vec![0; m];
            for slot in out.iter_mut().rev() {
                *slot = v % base;
                v /= base;
            }
            out
        };
        let mut dist = Vec::with_capacity(xs * ys);
        for xv in 0..xs {
            let xd = digits(xv, self.x_size);
            for yv in 0..ys {
                let yd = digits(yv, self.y_size);
                let p = xd
                    .iter()
                    .zip(&yd)
                    .fold(Prob::one(), |acc, (&x, &y)| acc * self.prob(x, y));
                dist.push(p);
            }
        }
        let a_digits: Vec<Vec<usize>> = (0..as_).map(|a| digits(a, self.a_size)).collect();
        let b_digits: Vec<Vec<usize>> = (0..bs).map(|b| digits(b, self.b_size)).collect();
        let mut pred = Vec::with_capacity(table as usize);
        for xv in 0..xs {
            let xd = digits(xv, self.x_size);
            for yv in 0..ys {
                let yd = digits(yv, self.y_size);
                for ad in &a_digits {
                    for bd in &b_digits {
                        pred.push((0..m).all(|i| self.wins(xd[i], yd[i], ad[i], bd[i])));
                    }
                }
            }
        }
        GameSpec::new(
            format!("{}^{m}", self.name),
            [xs, ys, as_, bs],
            dist,
            pred,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coin_game() -> GameSpec {
        // win iff a xor b == x and y
        GameSpec::from_fn(
            "chsh",
            [2, 2, 2, 2],
            GameSpec::uniform_distribution(2, 2),
            |x, y, a, b| (a ^ b) == (x & y),
        )
        .unwrap()
    }

    #[test]
    fn rejects_bad_distribution() {
        let err = GameSpec::new(
            "bad",
            [1, 1, 1, 1],
            vec![Prob::new(1, 2)],
            vec![true],
        );
        assert!(err.is_err());
    }

    #[test]
    fn rejects_partial_predicate() {
        let err = GameSpec::new(
            "bad",
            [1, 2, 1, 1],
            GameSpec::uniform_distribution(1, 2),
            vec![true],
        );
        assert!(err.is_err());
    }

    #[test]
    fn out_of_alphabet_is_domain_error() {
        let g = coin_game();
        assert!(g.eval_predicate(2, 0, 0, 0).is_err());
        assert!(g.eval_predicate(1, 1, 1, 0).unwrap());
    }

    #[test]
    fn repetition_multiplies_weights() {
        let g = coin_game();
        let g2 = g.parallel_repetition(2, 1 << 20).unwrap();
        assert_eq!(g2.sizes(), [4, 4, 4, 4]);
        assert_eq!(g2.prob(3, 1), Prob::new(1, 16));
        // questions (1,1),(1,0) with answers (0,0),(1,0): both coordinates win
        assert!(g2.wins(0b11, 0b10, 0b00, 0b10));
        assert!(!g2.wins(0b11, 0b10, 0b00, 0b00));
    }

    #[test]
    fn repetition_respects_cap() {
        let g = coin_game();
        assert!(matches!(
            g.parallel_repetition(4, 100),
            Err(crate::error::Error::Resource { .. })
        ));
    }
}
