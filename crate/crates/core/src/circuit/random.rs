use std::collections::HashMap;

use rand::seq::{index, SliceRandom};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::rng;

use super::geometry::{fan_out_limit, sites_local};
use super::ir::{Gate, GateKind, LayeredCircuit};
use super::layout::GridLayout;

/// Which neighbour groups a random gate may act on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Placement {
    /// Any connected group inside a radius-1 ball.
    Connected,
    /// Groups lying on one line parallel to axis 0.
    AxisAligned,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RandomCircuitOptions {
    pub per_side: usize,
    pub depth: usize,
    pub dimension: usize,
    pub kind: GateKind,
    pub seed: u64,
    /// Sites turned into shared-randomness wires.
    pub randomness_wires: usize,
    /// Probability that a visited site anchors a gate.
    pub fill: f64,
    pub placement: Placement,
}

impl RandomCircuitOptions {
    pub fn new(per_side: usize, depth: usize, dimension: usize, kind: GateKind, seed: u64) -> Self {
        Self {
            per_side,
            depth,
            dimension,
            kind,
            seed,
            randomness_wires: 0,
            fill: 1.0,
            placement: Placement::Connected,
        }
    }
}

/// Random geometrically local circuit on a [`GridLayout`], one wire per
/// site, `x` wires first.
pub fn random_circuit(per_side: usize, depth: usize, dimension: usize, kind: GateKind, seed: u64) -> Result<LayeredCircuit> {
    random_circuit_with(&RandomCircuitOptions::new(per_side, depth, dimension, kind, seed))
}

/// Every visited anchor site picks uniformly among the admissible gates
/// containing it (as output for NAND); sites are visited in a fresh random
/// order per layer.
pub fn random_circuit_with(opts: &RandomCircuitOptions) -> Result<LayeredCircuit> {
    if !(0.0..=1.0).contains(&opts.fill) {
        return Err(domain(format!("fill {} outside [0, 1]", opts.fill)));
    }
    let layout = GridLayout::new(opts.dimension, opts.per_side)?;
    let sites: Vec<Vec<i64>> = layout.x_sites().into_iter().chain(layout.y_sites()).collect();
    let n = sites.len();
    if opts.randomness_wires > n {
        return Err(domain("more randomness wires than sites"));
    }
    let lookup: HashMap<&[i64], usize> = sites.iter().enumerate().map(|(w, s)| (s.as_slice(), w)).collect();

    let offsets: Vec<Vec<i64>> = match opts.placement {
        Placement::AxisAligned => vec![
            std::iter::once(-1).chain(std::iter::repeat(0).take(opts.dimension - 1)).collect(),
            std::iter::once(1).chain(std::iter::repeat(0).take(opts.dimension - 1)).collect(),
        ],
        Placement::Connected => (0..3usize.pow(opts.dimension as u32))
            .map(|mut k| {
                (0..opts.dimension)
                    .map(|_| {
                        let d = (k % 3) as i64 - 1;
                        k /= 3;
                        d
                    })
                    .collect::<Vec<i64>>()
            })
            .filter(|o| o.iter().any(|&d| d != 0))
            .collect(),
    };
    let neighbours: Vec<Vec<usize>> = sites
        .iter()
        .map(|s| {
            offsets
                .iter()
                .filter_map(|o| {
                    let t: Vec<i64> = s.iter().zip(o).map(|(a, b)| a + b).collect();
                    lookup.get(t.as_slice()).copied()
                })
                .collect()
        })
        .collect();

    let mut r = rng::stream(opts.seed, rng::domain::CIRCUIT, 0);
    let mut randomness: Vec<usize> = index::sample(&mut r, n, opts.randomness_wires).into_vec();
    randomness.sort_unstable();

    let cap = fan_out_limit(opts.dimension, 1);
    let mut layers = Vec::with_capacity(opts.depth);
    let mut order: Vec<usize> = (0..n).collect();
    for _ in 0..opts.depth {
        order.shuffle(&mut r);
        let mut layer = Vec::new();
        match opts.kind {
            GateKind::Toffoli => {
                let mut used = vec![false; n];
                for &s in &order {
                    if !r.gen_bool(opts.fill) || used[s] {
                        continue;
                    }
                    let mut triples: Vec<[usize; 3]> = Vec::new();
                    for &a in neighbours[s].iter().filter(|&&a| !used[a]) {
                        for &b in neighbours[s].iter().chain(&neighbours[a]) {
                            if b == s || b == a || used[b] {
                                continue;
                            }
                            let mut t = [s, a, b];
                            t.sort_unstable();
                            let group: Vec<&[i64]> = t.iter().map(|&w| sites[w].as_slice()).collect();
                            if sites_local(&group, 1) {
                                triples.push(t);
                            }
                        }
                    }
                    triples.sort_unstable();
                    triples.dedup();
                    if let Some(t) = triples.choose(&mut r) {
                        let mut roles = *t;
                        roles.shuffle(&mut r);
                        for &w in &roles {
                            used[w] = true;
                        }
                        layer.push(Gate::toffoli(roles[0], roles[1], roles[2]));
                    }
                }
            }
            GateKind::Nand => {
                let mut written = vec![false; n];
                let mut readers = vec![0usize; n];
                for &s in &order {
                    if !r.gen_bool(opts.fill) || written[s] || readers[s] >= cap {
                        continue;
                    }
                    let choices: Vec<usize> = neighbours[s].iter().copied().filter(|&j| readers[j] < cap).collect();
                    if let Some(&j) = choices.choose(&mut r) {
                        written[s] = true;
                        readers[s] += 1;
                        readers[j] += 1;
                        layer.push(Gate::nand(s, j));
                    }
                }
            }
        }
        layers.push(layer);
    }
    let mut c = LayeredCircuit::new(opts.dimension, sites, layers);
    c.randomness_wires = randomness;
    Ok(c)
}
