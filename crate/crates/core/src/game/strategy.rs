use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

use super::spec::{GameSpec, Prob};

/// A pair of answer tables, one entry per question.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DeterministicStrategy {
    pub alice: Vec<usize>,
    pub bob: Vec<usize>,
}

impl DeterministicStrategy {
    pub fn check(&self, game: &GameSpec) -> Result<()> {
        if self.alice.len() != game.x_size() || self.bob.len() != game.y_size() {
            return Err(domain("strategy tables do not cover the question alphabets"));
        }
        if self.alice.iter().any(|&a| a >= game.a_size())
            || self.bob.iter().any(|&b| b >= game.b_size())
        {
            return Err(domain("strategy answer outside the answer alphabet"));
        }
        Ok(())
    }

    /// Exact win probability under the game distribution.
    pub fn win_probability(&self, game: &GameSpec) -> Result<Prob> {
        self.check(game)?;
        let mut num = 0u64;
        for x in 0..game.x_size() {
            for y in 0..game.y_size() {
                if game.wins(x, y, self.alice[x], self.bob[y]) {
                    num += game.weight(x, y);
                }
            }
        }
        Ok(game.to_prob(num))
    }
}

/// One-way leakage protocol: Alice sends `budget` bits depending on her
/// question, then both answer. Bob's table is indexed by
/// `y * 2^budget + message`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeakageProtocol {
    pub budget: u32,
    pub messages: Vec<u32>,
    pub alice: Vec<usize>,
    pub bob: Vec<usize>,
}

impl LeakageProtocol {
    pub fn message_count(&self) -> usize {
        1usize << self.budget
    }

    pub fn bob_answer(&self, y: usize, message: u32) -> usize {
        self.bob[y * self.message_count() + message as usize]
    }

    pub fn check(&self, game: &GameSpec) -> Result<()> {
        if self.budget > 16 {
            return Err(domain("leakage budget above 16 bits is not supported"));
        }
        let m = self.message_count();
        if self.messages.len() != game.x_size()
            || self.alice.len() != game.x_size()
            || self.bob.len() != game.y_size() * m
        {
            return Err(domain("protocol tables do not match the game alphabets"));
        }
        if self.messages.iter().any(|&msg| msg as usize >= m) {
            return Err(domain(format!(
                "message longer than the {}-bit budget",
                self.budget
            )));
        }
        if self.alice.iter().any(|&a| a >= game.a_size())
            || self.bob.iter().any(|&b| b >= game.b_size())
        {
            return Err(domain("protocol answer outside the answer alphabet"));
        }
        Ok(())
    }

    pub fn win_probability(&self, game: &GameSpec) -> Result<Prob> {
        self.check(game)?;
        let mut num = 0u64;
        for x in 0..game.x_size() {
            let msg = self.messages[x];
            for y in 0..game.y_size() {
                if game.wins(x, y, self.alice[x], self.bob_answer(y, msg)) {
                    num += game.weight(x, y);
                }
            }
        }
        Ok(game.to_prob(num))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::magic::{magic_square, parse_answer};

    #[test]
    fn trivial_strategy_wins_two_thirds() {
        let g = magic_square();
        let a = parse_answer("000").unwrap();
        let b = parse_answer("001").unwrap();
        let s = DeterministicStrategy {
            alice: vec![a; 3],
            bob: vec![b; 3],
        };
        assert_eq!(s.win_probability(&g).unwrap(), Prob::new(2, 3));
    }

    #[test]
    fn malformed_protocol_rejected() {
        let g = magic_square();
        let p = LeakageProtocol {
            budget: 1,
            messages: vec![0, 2, 1],
            alice: vec![0; 3],
            bob: vec![1; 6],
        };
        assert!(p.win_probability(&g).is_err());
    }
}
