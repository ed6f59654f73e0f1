//! Exact game values by exhaustive search.
//!
//! Every search runs over a mixed-radix enumeration of answer tables whose
//! digit order is the lexicographic order of the tables themselves, so
//! "first maximum in enumeration order" is the lexicographically smallest
//! optimal strategy. The outer enumeration is split into contiguous
//! partitions searched in parallel; partition results are merged in order,
//! which makes the answer independent of the partition count.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::rng;

use super::spec::{GameSpec, Prob};
use super::strategy::{DeterministicStrategy, LeakageProtocol};

/// Upper bounds on search sizes. Exceeding one is an error, never a
/// truncated search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationCaps {
    /// Strategy pairs visited by [`brute_force_classical_value`].
    pub strategy_pairs: u128,
    /// Inner evaluations in [`brute_force_leakage_value`]:
    /// outer protocols times `(y, message, b)` candidates.
    pub leakage_work: u128,
    /// Predicate entries of a repeated game.
    pub repetition_table: u128,
    /// Parallel partitions of the outer enumeration.
    pub partitions: usize,
}

impl Default for EnumerationCaps {
    fn default() -> Self {
        Self {
            strategy_pairs: 1_000_000_000,
            leakage_work: 2_000_000_000,
            repetition_table: 1 << 26,
            partitions: 16,
        }
    }
}

/// Mixed-radix counter over per-position option lists.
struct Odometer<'a> {
    options: &'a [Vec<usize>],
    digits: Vec<usize>,
}

impl<'a> Odometer<'a> {
    fn at(options: &'a [Vec<usize>], mut index: u128) -> Self {
        let mut digits = vec![0; options.len()];
        for (slot, opts) in digits.iter_mut().zip(options).rev() {
            let base = opts.len() as u128;
            *slot = (index % base) as usize;
            index /= base;
        }
        Self { options, digits }
    }

    fn value(&self, pos: usize) -> usize {
        self.options[pos][self.digits[pos]]
    }

    fn values(&self) -> Vec<usize> {
        (0..self.digits.len()).map(|p| self.value(p)).collect()
    }

    fn advance(&mut self) {
        for pos in (0..self.digits.len()).rev() {
            self.digits[pos] += 1;
            if self.digits[pos] < self.options[pos].len() {
                return;
            }
            self.digits[pos] = 0;
        }
    }
}

fn space(options: &[Vec<usize>]) -> u128 {
    options
        .iter()
        .fold(1u128, |acc, o| acc.saturating_mul(o.len() as u128))
}

/// Split `0..total` into `parts` contiguous ranges.
fn partition(total: u128, parts: usize) -> Vec<(u128, u128)> {
    let parts = (parts.max(1) as u128).min(total.max(1));
    let step = total / parts;
    let extra = total % parts;
    let mut out = Vec::with_capacity(parts as usize);
    let mut start = 0;
    for p in 0..parts {
        let len = step + u128::from(p < extra);
        out.push((start, start + len));
        start += len;
    }
    out
}

/// Best `(score, index)` with ties resolved to the smaller index.
fn better(a: (u64, u128), b: (u64, u128)) -> (u64, u128) {
    if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
        b
    } else {
        a
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassicalValue {
    pub value: Prob,
    /// Lexicographically smallest optimal strategy.
    pub strategy: DeterministicStrategy,
    pub pairs_enumerated: u128,
}

/// Exact classical value by enumerating every deterministic strategy pair.
///
/// Answers that can never win are pruned first; shared randomness is a
/// convex mixture of deterministic strategies and never does better.
pub fn brute_force_classical_value(game: &GameSpec, caps: &EnumerationCaps) -> Result<ClassicalValue> {
    let a_opts: Vec<Vec<usize>> = (0..game.x_size()).map(|x| game.useful_alice_answers(x)).collect();
    let b_opts: Vec<Vec<usize>> = (0..game.y_size()).map(|y| game.useful_bob_answers(y)).collect();
    let total_a = space(&a_opts);
    let total_b = space(&b_opts);
    let pairs = total_a.saturating_mul(total_b);
    if pairs > caps.strategy_pairs {
        return Err(Error::Resource {
            required: pairs,
            cap: caps.strategy_pairs,
        });
    }

    let ys = game.y_size();
    let chunks = partition(total_a, caps.partitions);
    let best = chunks
        .par_iter()
        .map(|&(start, end)| {
            let mut best = (0u64, u128::MAX);
            let mut alice = Odometer::at(&a_opts, start);
            // partial[y][j]: weight won on column y if Bob answers b_opts[y][j]
            let mut partial: Vec<Vec<u64>> = b_opts.iter().map(|o| vec![0; o.len()]).collect();
            for ai in start..end {
                for (y, row) in partial.iter_mut().enumerate() {
                    for (j, slot) in row.iter_mut().enumerate() {
                        let b = b_opts[y][j];
                        *slot = (0..game.x_size())
                            .filter(|&x| game.wins(x, y, alice.value(x), b))
                            .map(|x| game.weight(x, y))
                            .sum();
                    }
                }
                let mut bob = Odometer::at(&b_opts, 0);
                for bi in 0..total_b {
                    let score: u64 = (0..ys).map(|y| partial[y][bob.digits[y]]).sum();
                    best = better(best, (score, ai * total_b + bi));
                    bob.advance();
                }
                alice.advance();
            }
            best
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold((0u64, u128::MAX), better);

    let (score, index) = best;
    let strategy = DeterministicStrategy {
        alice: Odometer::at(&a_opts, index / total_b).values(),
        bob: Odometer::at(&b_opts, index % total_b).values(),
    };
    Ok(ClassicalValue {
        value: game.to_prob(score),
        strategy,
        pairs_enumerated: pairs,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeakageValue {
    pub value: Prob,
    pub protocol: LeakageProtocol,
    /// Size of the explicit protocol space `(2^c)^|X| * |A|^|X| * |B|^(|Y| 2^c)`
    /// after pruning dominated answers, saturating at `u128::MAX`.
    pub protocols_covered: u128,
    pub work: u128,
}

/// Exact value with `budget` bits sent one way from Alice to Bob.
///
/// Bob's answer for each `(y, message)` is chosen independently, so for a
/// fixed message map and Alice table the optimum over Bob tables is the sum
/// of per-cell maxima; the search enumerates message maps and Alice tables
/// explicitly. One-way leakage lower-bounds interactive leakage of the same
/// length.
pub fn brute_force_leakage_value(
    game: &GameSpec,
    budget: u32,
    caps: &EnumerationCaps,
) -> Result<LeakageValue> {
    if budget > 16 {
        return Err(domain("leakage budget above 16 bits is not supported"));
    }
    let msgs = 1usize << budget;
    let a_opts: Vec<Vec<usize>> = (0..game.x_size()).map(|x| game.useful_alice_answers(x)).collect();
    let b_opts: Vec<Vec<usize>> = (0..game.y_size()).map(|y| game.useful_bob_answers(y)).collect();
    let msg_opts: Vec<Vec<usize>> = vec![(0..msgs).collect(); game.x_size()];

    let total_msg = space(&msg_opts);
    let total_a = space(&a_opts);
    let outer = total_msg.saturating_mul(total_a);
    let inner: u128 = (msgs as u128) * b_opts.iter().map(|o| o.len() as u128).sum::<u128>();
    let work = outer.saturating_mul(inner);
    if work > caps.leakage_work {
        return Err(Error::Resource {
            required: work,
            cap: caps.leakage_work,
        });
    }
    let protocols_covered = outer.saturating_mul(
        b_opts
            .iter()
            .fold(1u128, |acc, o| acc.saturating_mul((o.len() as u128).saturating_pow(msgs as u32))),
    );

    let cell_best = |messages: &[usize], alice: &[usize], y: usize, m: usize| -> (u64, usize) {
        let mut best = (0u64, 0usize);
        for (j, &b) in b_opts[y].iter().enumerate() {
            let s: u64 = (0..game.x_size())
                .filter(|&x| messages[x] == m && game.wins(x, y, alice[x], b))
                .map(|x| game.weight(x, y))
                .sum();
            if s > best.0 {
                best = (s, j);
            }
        }
        best
    };

    let chunks = partition(outer, caps.partitions);
    let best = chunks
        .par_iter()
        .map(|&(start, end)| {
            let mut best = (0u64, u128::MAX);
            let mut msg_od = Odometer::at(&msg_opts, start / total_a);
            let mut alice_od = Odometer::at(&a_opts, start % total_a);
            let mut messages = msg_od.values();
            for idx in start..end {
                if idx % total_a == 0 && idx != start {
                    msg_od.advance();
                    messages = msg_od.values();
                }
                let alice = alice_od.values();
                let mut score = 0u64;
                for y in 0..game.y_size() {
                    for m in 0..msgs {
                        score += cell_best(&messages, &alice, y, m).0;
                    }
                }
                best = better(best, (score, idx));
                alice_od.advance();
            }
            best
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold((0u64, u128::MAX), better);

    let (score, index) = best;
    let messages = Odometer::at(&msg_opts, index / total_a).values();
    let alice = Odometer::at(&a_opts, index % total_a).values();
    let mut bob = Vec::with_capacity(game.y_size() * msgs);
    for y in 0..game.y_size() {
        for m in 0..msgs {
            bob.push(b_opts[y][cell_best(&messages, &alice, y, m).1]);
        }
    }
    Ok(LeakageValue {
        value: game.to_prob(score),
        protocol: LeakageProtocol {
            budget,
            messages: messages.into_iter().map(|m| m as u32).collect(),
            alice,
            bob,
        },
        protocols_covered,
        work,
    })
}

/// Result of [`best_response_search`] on the `m`-fold repeated game.
#[derive(Clone, Debug)]
pub struct SearchResult {
    /// Value of the returned strategy, a lower bound on `val(G^m)`.
    pub lower_bound: Prob,
    pub strategy: DeterministicStrategy,
    pub repeated: GameSpec,
    /// Best value found by each restart, product initialisation first.
    pub restart_values: Vec<Prob>,
}

fn alice_best_response(g: &GameSpec, opts: &[Vec<usize>], bob: &[usize]) -> Vec<usize> {
    (0..g.x_size())
        .map(|x| {
            let mut best = (0u64, opts[x][0]);
            for &a in &opts[x] {
                let s: u64 = (0..g.y_size())
                    .filter(|&y| g.wins(x, y, a, bob[y]))
                    .map(|y| g.weight(x, y))
                    .sum();
                if s > best.0 {
                    best = (s, a);
                }
            }
            best.1
        })
        .collect()
}

fn bob_best_response(g: &GameSpec, opts: &[Vec<usize>], alice: &[usize]) -> Vec<usize> {
    (0..g.y_size())
        .map(|y| {
            let mut best = (0u64, opts[y][0]);
            for &b in &opts[y] {
                let s: u64 = (0..g.x_size())
                    .filter(|&x| g.wins(x, y, alice[x], b))
                    .map(|x| g.weight(x, y))
                    .sum();
                if s > best.0 {
                    best = (s, b);
                }
            }
            best.1
        })
        .collect()
}

fn score(g: &GameSpec, s: &DeterministicStrategy) -> u64 {
    let mut num = 0;
    for x in 0..g.x_size() {
        for y in 0..g.y_size() {
            if g.wins(x, y, s.alice[x], s.bob[y]) {
                num += g.weight(x, y);
            }
        }
    }
    num
}

/// Alternate exact best responses until the value stops improving.
fn climb(g: &GameSpec, a_opts: &[Vec<usize>], b_opts: &[Vec<usize>], alice: Vec<usize>) -> (u64, DeterministicStrategy) {
    let bob = bob_best_response(g, b_opts, &alice);
    let mut current = DeterministicStrategy { alice, bob };
    let mut value = score(g, &current);
    loop {
        let alice = alice_best_response(g, a_opts, &current.bob);
        let bob = bob_best_response(g, b_opts, &alice);
        let next = DeterministicStrategy { alice, bob };
        let v = score(g, &next);
        if v <= value {
            return (value, current);
        }
        value = v;
        current = next;
    }
}

/// Lower bound on the classical value of the `m`-fold repetition by
/// alternating best responses.
///
/// Restart 0 starts from the product of single-game optimal strategies, so
/// the bound is at least `val(G)^m`; restarts `1..=restarts` start from
/// random Alice tables drawn from independent streams. The best restart
/// wins, ties going to the lexicographically smallest strategy.
pub fn best_response_search(
    game: &GameSpec,
    m: usize,
    restarts: usize,
    seed: u64,
    caps: &EnumerationCaps,
) -> Result<SearchResult> {
    let single = brute_force_classical_value(game, caps)?;
    let g = game.parallel_repetition(m, caps.repetition_table)?;
    let a_opts: Vec<Vec<usize>> = (0..g.x_size()).map(|x| g.useful_alice_answers(x)).collect();
    let b_opts: Vec<Vec<usize>> = (0..g.y_size()).map(|y| g.useful_bob_answers(y)).collect();

    let product: Vec<usize> = (0..g.x_size())
        .map(|xv| {
            let mut rest = xv;
            let mut digits = vec![0; m];
            for d in digits.iter_mut().rev() {
                *d = rest % game.x_size();
                rest /= game.x_size();
            }
            digits
                .iter()
                .fold(0usize, |acc, &x| acc * game.a_size() + single.strategy.alice[x])
        })
        .collect();

    let mut runs = vec![climb(&g, &a_opts, &b_opts, product)];
    runs.extend((1..=restarts).into_par_iter().map(|r| {
        let mut rand = rng::stream(seed, rng::domain::SEARCH, r as u64);
        let alice = a_opts.iter().map(|o| o[rand.gen_range(0..o.len())]).collect();
        climb(&g, &a_opts, &b_opts, alice)
    }).collect::<Vec<_>>());

    let restart_values = runs.iter().map(|(v, _)| g.to_prob(*v)).collect();
    let (value, strategy) = runs
        .into_iter()
        .reduce(|best, next| {
            if next.0 > best.0 || (next.0 == best.0 && next.1 < best.1) {
                next
            } else {
                best
            }
        })
        .expect("at least one run");
    Ok(SearchResult {
        lower_bound: g.to_prob(value),
        strategy,
        repeated: g,
        restart_values,
    })
}

/// The two-bit protocol that wins Magic Square with certainty: Alice
/// announces her row, Bob copies the shared cell into his column and fixes
/// parity with the remaining two bits.
pub fn magic_square_two_bit_protocol(alice: [usize; 3]) -> LeakageProtocol {
    use super::magic::{bit, parity};
    assert!(alice.iter().all(|&a| parity(a) == 0), "rows need even parity");
    let mut bob = Vec::with_capacity(12);
    for y in 0..3 {
        for x in 0..4usize {
            if x > 2 {
                bob.push(0b001);
                continue;
            }
            let cell = bit(alice[x], y) as usize;
            let others: Vec<usize> = (0..3).filter(|&i| i != x).collect();
            let b = (cell << x) | ((1 ^ cell) << others[0]);
            bob.push(b);
        }
    }
    LeakageProtocol {
        budget: 2,
        messages: vec![0, 1, 2],
        alice: alice.to_vec(),
        bob,
    }
}
