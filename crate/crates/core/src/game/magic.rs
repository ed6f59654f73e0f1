//! The Magic Square game.
//!
//! Questions are trits (row for Alice, column for Bob). Answers are three
//! bits stored as an integer with `a[i] = (a >> i) & 1`; the textual form
//! lists `a[0]` first, so `"010"` means `a[1] = 1`.

use crate::error::{domain, Result};

use super::spec::{GameSpec, Prob};

pub const QUESTIONS: usize = 3;
pub const ANSWERS: usize = 8;

/// Bit `i` of a packed three-bit answer.
#[inline]
pub fn bit(answer: usize, i: usize) -> u8 {
    ((answer >> i) & 1) as u8
}

#[inline]
pub fn parity(answer: usize) -> u8 {
    (answer.count_ones() & 1) as u8
}

/// The predicate: Alice's row has even parity, Bob's column odd parity, and
/// they agree on the shared cell.
#[inline]
pub fn predicate(x: usize, y: usize, a: usize, b: usize) -> bool {
    parity(a) == 0 && parity(b) == 1 && bit(a, y) == bit(b, x)
}

pub fn magic_square() -> GameSpec {
    GameSpec::from_fn(
        "magic-square",
        [QUESTIONS, QUESTIONS, ANSWERS, ANSWERS],
        vec![Prob::new(1, 9); 9],
        predicate,
    )
    .expect("magic square table is well formed")
}

/// Parse `"b0b1b2"` into a packed answer.
pub fn parse_answer(s: &str) -> Result<usize> {
    let s = s.trim();
    if s.len() != 3 {
        return Err(domain(format!("answer {s:?} must have exactly 3 bits")));
    }
    s.chars().enumerate().try_fold(0usize, |acc, (i, c)| match c {
        '0' => Ok(acc),
        '1' => Ok(acc | (1 << i)),
        _ => Err(domain(format!("answer {s:?} contains non-bit {c:?}"))),
    })
}

pub fn format_answer(a: usize) -> String {
    (0..3).map(|i| if bit(a, i) == 1 { '1' } else { '0' }).collect()
}
