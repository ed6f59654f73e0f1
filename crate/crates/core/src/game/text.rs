//! Plain-text game and strategy tables.
//!
//! Game format:
//!
//! ```text
//! bellgame <|X|> <|Y|> <|A|> <|B|>
//! pi <x> <y> <p/q>          # omitted pairs have weight 0
//! <x> <y> <a> <b> <0|1>     # one line per tuple, all tuples required
//! ```
//!
//! Strategy format:
//!
//! ```text
//! strategy
//! alice <x> <a>
//! bob <y> <b>
//! ```
//!
//! Blank lines and `#` comments are ignored in both.

use std::fmt::Write as _;
use std::str::FromStr;

use num_traits::Zero;

use crate::error::{Error, Result};

use super::spec::{GameSpec, Prob};
use super::strategy::DeterministicStrategy;

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

/// Non-comment lines with 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("");
        let fields: Vec<&str> = body.split_whitespace().collect();
        (!fields.is_empty()).then_some((i + 1, fields))
    })
}

fn num<T: FromStr>(line: usize, field: &str, what: &str) -> Result<T> {
    field
        .parse()
        .map_err(|_| parse_err(line, format!("{what} {field:?} is not a nonnegative integer")))
}

fn bounded(line: usize, field: &str, what: &str, size: usize) -> Result<usize> {
    let v: usize = num(line, field, what)?;
    if v >= size {
        return Err(parse_err(line, format!("{what} {v} outside alphabet of size {size}")));
    }
    Ok(v)
}

fn parse_prob(line: usize, field: &str) -> Result<Prob> {
    let (p, q) = match field.split_once('/') {
        Some((p, q)) => (num::<u64>(line, p, "numerator")?, num::<u64>(line, q, "denominator")?),
        None => (num::<u64>(line, field, "weight")?, 1),
    };
    if q == 0 {
        return Err(parse_err(line, "zero denominator"));
    }
    Ok(Prob::new(p, q))
}

pub fn parse_game(name: &str, text: &str) -> Result<GameSpec> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| parse_err(0, "empty game file"))?;
    if header.len() != 5 || header[0] != "bellgame" {
        return Err(parse_err(hl, "expected `bellgame <X> <Y> <A> <B>`"));
    }
    let mut sizes = [0usize; 4];
    for (slot, f) in sizes.iter_mut().zip(&header[1..]) {
        *slot = num(hl, f, "alphabet size")?;
        if *slot == 0 {
            return Err(parse_err(hl, "alphabet sizes must be positive"));
        }
    }
    let [xs, ys, as_, bs] = sizes;
    let total = xs
        .checked_mul(ys)
        .and_then(|v| v.checked_mul(as_))
        .and_then(|v| v.checked_mul(bs))
        .filter(|&t| t <= 1 << 28)
        .ok_or_else(|| parse_err(hl, "predicate table too large"))?;

    let mut dist: Vec<Option<Prob>> = vec![None; xs * ys];
    let mut pred: Vec<Option<bool>> = vec![None; total];
    for (ln, f) in lines {
        if f[0] == "pi" {
            if f.len() != 4 {
                return Err(parse_err(ln, "expected `pi <x> <y> <p/q>`"));
            }
            let x = bounded(ln, f[1], "x", xs)?;
            let y = bounded(ln, f[2], "y", ys)?;
            let slot = &mut dist[x * ys + y];
            if slot.is_some() {
                return Err(parse_err(ln, format!("duplicate weight for ({x}, {y})")));
            }
            *slot = Some(parse_prob(ln, f[3])?);
        } else {
            if f.len() != 5 {
                return Err(parse_err(ln, "expected `<x> <y> <a> <b> <0|1>`"));
            }
            let x = bounded(ln, f[0], "x", xs)?;
            let y = bounded(ln, f[1], "y", ys)?;
            let a = bounded(ln, f[2], "a", as_)?;
            let b = bounded(ln, f[3], "b", bs)?;
            let v = match f[4] {
                "0" => false,
                "1" => true,
                other => return Err(parse_err(ln, format!("predicate value {other:?} is not 0 or 1"))),
            };
            let slot = &mut pred[((x * ys + y) * as_ + a) * bs + b];
            if slot.is_some() {
                return Err(parse_err(ln, format!("duplicate entry for ({x}, {y}, {a}, {b})")));
            }
            *slot = Some(v);
        }
    }
    let missing = pred.iter().filter(|p| p.is_none()).count();
    if missing > 0 {
        return Err(parse_err(0, format!("predicate table is missing {missing} entries")));
    }
    GameSpec::new(
        name,
        sizes,
        dist.into_iter().map(|p| p.unwrap_or_else(Prob::zero)).collect(),
        pred.into_iter().map(|p| p.unwrap_or(false)).collect(),
    )
}

pub fn write_game(game: &GameSpec) -> String {
    let [xs, ys, as_, bs] = game.sizes();
    let mut out = format!("bellgame {xs} {ys} {as_} {bs}\n");
    for x in 0..xs {
        for y in 0..ys {
            let p = game.prob(x, y);
            if !p.is_zero() {
                let _ = writeln!(out, "pi {x} {y} {}/{}", p.numer(), p.denom());
            }
        }
    }
    for x in 0..xs {
        for y in 0..ys {
            for a in 0..as_ {
                for b in 0..bs {
                    let _ = writeln!(out, "{x} {y} {a} {b} {}", u8::from(game.wins(x, y, a, b)));
                }
            }
        }
    }
    out
}

/// Parse a strategy table; every question of `game` needs exactly one line.
pub fn parse_strategy(text: &str, game: &GameSpec) -> Result<DeterministicStrategy> {
    let mut lines = content_lines(text);
    match lines.next() {
        Some((_, f)) if f == ["strategy"] => {}
        Some((ln, _)) => return Err(parse_err(ln, "expected `strategy` header")),
        None => return Err(parse_err(0, "empty strategy file")),
    }
    let mut alice = vec![None; game.x_size()];
    let mut bob = vec![None; game.y_size()];
    for (ln, f) in lines {
        if f.len() != 3 {
            return Err(parse_err(ln, "expected `alice <x> <a>` or `bob <y> <b>`"));
        }
        let (table, q_size, ans_size) = match f[0] {
            "alice" => (&mut alice, game.x_size(), game.a_size()),
            "bob" => (&mut bob, game.y_size(), game.b_size()),
            other => return Err(parse_err(ln, format!("unknown party {other:?}"))),
        };
        let q = bounded(ln, f[1], "question", q_size)?;
        let ans = bounded(ln, f[2], "answer", ans_size)?;
        if table[q].replace(ans).is_some() {
            return Err(parse_err(ln, format!("duplicate {} answer for question {q}", f[0])));
        }
    }
    let collect = |t: Vec<Option<usize>>, who: &str| -> Result<Vec<usize>> {
        t.into_iter()
            .enumerate()
            .map(|(q, a)| a.ok_or_else(|| parse_err(0, format!("{who} has no answer for question {q}"))))
            .collect()
    };
    Ok(DeterministicStrategy {
        alice: collect(alice, "alice")?,
        bob: collect(bob, "bob")?,
    })
}

pub fn write_strategy(s: &DeterministicStrategy) -> String {
    let mut out = String::from("strategy\n");
    for (x, a) in s.alice.iter().enumerate() {
        let _ = writeln!(out, "alice {x} {a}");
    }
    for (y, b) in s.bob.iter().enumerate() {
        let _ = writeln!(out, "bob {y} {b}");
    }
    out
}
