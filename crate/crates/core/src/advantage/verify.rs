use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{domain, Result};
use crate::game::{magic, LineInput};
use crate::stats::{acceptance_threshold, decimal_rational};

/// Outcome of the threshold check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub accept: bool,
    pub win_count: usize,
    pub per_game: Vec<bool>,
    /// `ceil(n (1 - delta))`.
    pub threshold: usize,
}

/// Evaluate every game and accept iff at least `ceil(n (1 - delta))` are
/// won. Answers outside the 3-bit alphabet lose their game.
pub fn verify(inputs: &LineInput, alice: &[usize], bob: &[usize], delta: f64) -> Result<Verdict> {
    verify_exact(inputs, alice, bob, &decimal_rational(delta)?)
}

pub fn verify_exact(inputs: &LineInput, alice: &[usize], bob: &[usize], delta: &BigRational) -> Result<Verdict> {
    let n = inputs.n();
    if alice.len() != n || bob.len() != n {
        return Err(domain(format!(
            "answer lists have lengths {} and {}, expected {n}",
            alice.len(),
            bob.len()
        )));
    }
    if delta < &BigRational::zero() || delta > &BigRational::one() {
        return Err(domain(format!("delta {delta} outside [0, 1]")));
    }
    let per_game: Vec<bool> = inputs
        .pairs()
        .zip(alice.iter().zip(bob))
        .map(|((x, y), (&a, &b))| a < magic::ANSWERS && b < magic::ANSWERS && magic::predicate(x, y, a, b))
        .collect();
    let win_count = per_game.iter().filter(|&&w| w).count();
    let threshold = acceptance_threshold(n, delta);
    Ok(Verdict {
        accept: win_count >= threshold,
        win_count,
        per_game,
        threshold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::magic::parse_answer;
    use proptest::prelude::*;

    #[test]
    fn threshold_arithmetic() {
        let inputs = LineInput::trits(vec![0; 10], vec![0; 10]).unwrap();
        let good = (parse_answer("000").unwrap(), parse_answer("001").unwrap());
        let bad = (parse_answer("110").unwrap(), parse_answer("001").unwrap());
        let play = |wins: usize| {
            let (a, b): (Vec<usize>, Vec<usize>) = (0..10).map(|i| if i < wins { good } else { bad }).unzip();
            verify(&inputs, &a, &b, 0.1).unwrap()
        };
        assert!(play(10).accept);
        assert!(play(9).accept);
        assert_eq!(play(9).threshold, 9);
        assert!(!play(8).accept);
        assert_eq!(play(8).win_count, 8);
    }

    #[test]
    fn malformed_answers_lose() {
        let inputs = LineInput::trits(vec![0], vec![0]).unwrap();
        assert!(!verify(&inputs, &[8], &[4], 0.0).unwrap().per_game[0]);
        assert!(!verify(&inputs, &[0], &[9], 0.0).unwrap().per_game[0]);
        assert!(verify(&inputs, &[0], &[4], 0.0).unwrap().per_game[0]);
        assert!(verify(&inputs, &[0], &[1, 1], 0.0).is_err());
    }

    proptest! {
        #[test]
        fn verdict_invariant_under_permutation(
            games in proptest::collection::vec((0usize..3, 0usize..3, 0usize..8, 0usize..8), 1..40),
            rot in 0usize..40,
        ) {
            let split = |g: &[(usize, usize, usize, usize)]| {
                let inputs = LineInput::trits(g.iter().map(|t| t.0).collect(), g.iter().map(|t| t.1).collect()).unwrap();
                let a: Vec<usize> = g.iter().map(|t| t.2).collect();
                let b: Vec<usize> = g.iter().map(|t| t.3).collect();
                verify(&inputs, &a, &b, 0.1).unwrap()
            };
            let mut moved = games.clone();
            moved.rotate_left(rot % games.len());
            let (v, w) = (split(&games), split(&moved));
            prop_assert_eq!(v.accept, w.accept);
            prop_assert_eq!(v.win_count, w.win_count);
            prop_assert_eq!(v.accept, v.win_count >= v.threshold);
        }
    }
}
