use crate::error::{domain, Result};

use super::geometry::validate_geometry;
use super::ir::{Gate, GateKind, LayeredCircuit};

/// Toffoli layers emitted per NAND layer.
pub const TOFFOLI_LAYERS_PER_NAND_LAYER: usize = 3;

/// Rewrite a 1D NAND circuit with one wire per site into an equivalent 1D
/// Toffoli circuit of depth exactly `3d`.
///
/// Every site becomes a cell holding its original wire, a constant-1 wire
/// and fresh constant targets. NAND layer `l` becomes:
///
/// 1. a copy layer `Toffoli(v, 1, 0)` for each value that two gates of the
///    same sublayer below would otherwise both read;
/// 2. `Toffoli(a, b, 1) = NAND(a, b)` into fresh targets for gates writing
///    even sites;
/// 3. the same for gates writing odd sites.
///
/// Gates writing even sites only touch sites `p - 1, p, p + 1` with `p`
/// even, so two of them share at most one odd input, which the copy layer
/// duplicates; likewise for odd. Controls are never modified, so both
/// sublayers read the values left by layer `l - 1`.
pub fn nand_to_toffoli(source: &LayeredCircuit) -> Result<LayeredCircuit> {
    if source.dimension != 1 {
        return Err(domain("the transpiler handles 1D circuits only"));
    }
    if source.radius != 1 {
        return Err(domain("the transpiler needs radius 1"));
    }
    if source.layers.iter().flatten().any(|g| g.kind != GateKind::Nand) {
        return Err(domain("source circuit must contain only NAND gates"));
    }
    let report = validate_geometry(source);
    if !report.is_empty() {
        return Err(domain(format!("source circuit is not local: {}", report.violations[0].message)));
    }
    let mut seen = std::collections::HashSet::new();
    if !source.wires.iter().all(|s| seen.insert(s[0])) {
        return Err(domain("the transpiler needs one wire per site"));
    }

    let mut out = source.clone();
    out.layers = Vec::with_capacity(source.depth() * TOFFOLI_LAYERS_PER_NAND_LAYER);
    let site = |w: usize| source.wires[w][0];
    let fresh = |out: &mut LayeredCircuit, at: i64, bit: u8| -> usize {
        out.wires.push(vec![at]);
        let w = out.wires.len() - 1;
        out.constants.push((w, bit));
        w
    };
    let ones: Vec<usize> = (0..source.wire_count()).map(|w| fresh(&mut out, site(w), 1)).collect();
    // physical wire holding each source wire's current value
    let mut cur: Vec<usize> = (0..source.wire_count()).collect();

    for layer in &source.layers {
        let parity = |g: &Gate| site(g.wires[0]).rem_euclid(2) as usize;
        let mut readers = vec![[0u8; 2]; source.wire_count()];
        for g in layer {
            for &w in &g.wires {
                readers[w][parity(g)] += 1;
            }
        }
        let mut copy_layer = Vec::new();
        // second reader of a doubly read value uses the copy
        let mut copy: Vec<Option<usize>> = vec![None; source.wire_count()];
        for w in 0..source.wire_count() {
            match readers[w].iter().max() {
                Some(&c) if c > 2 => {
                    return Err(domain(format!("wire {w} read by {c} gates of one sublayer")));
                }
                Some(2) => {
                    let z = fresh(&mut out, site(w), 0);
                    copy_layer.push(Gate::toffoli(cur[w], ones[w], z));
                    copy[w] = Some(z);
                }
                _ => {}
            }
        }
        out.layers.push(copy_layer);

        let mut next = cur.clone();
        for p in 0..2 {
            let mut taken = vec![false; source.wire_count()];
            let mut sub = Vec::new();
            for g in layer.iter().filter(|g| parity(g) == p) {
                let mut src = |w: usize| {
                    if std::mem::replace(&mut taken[w], true) {
                        copy[w].expect("copy exists for doubly read wire")
                    } else {
                        cur[w]
                    }
                };
                let (a, b) = (src(g.wires[0]), src(g.wires[1]));
                let t = fresh(&mut out, site(g.wires[0]), 1);
                sub.push(Gate::toffoli(a, b, t));
                next[g.wires[0]] = t;
            }
            out.layers.push(sub);
        }
        cur = next;
    }
    out.outputs = source.output_wires().iter().map(|&w| cur[w]).collect();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::random::random_circuit;
    use crate::circuit::ir::GateKind;
    use proptest::prelude::*;

    fn bits(v: u64, n: usize) -> Vec<bool> {
        (0..n).map(|i| (v >> i) & 1 == 1).collect()
    }

    #[test]
    fn single_nand_exhaustive() {
        let c = LayeredCircuit::line(2, vec![vec![Gate::nand(0, 1)]]);
        let t = nand_to_toffoli(&c).unwrap();
        assert_eq!(t.depth(), 3);
        assert_eq!(t.kind(), Some(GateKind::Toffoli));
        assert!(validate_geometry(&t).is_empty());
        for v in 0..4 {
            let input = bits(v, 2);
            assert_eq!(t.evaluate(&input, &[]).unwrap(), c.evaluate(&input, &[]).unwrap());
        }
    }

    #[test]
    fn fan_out_three_needs_no_extra_depth() {
        // wire 1 feeds gates writing 0, 1 and 2
        let c = LayeredCircuit::line(3, vec![vec![Gate::nand(0, 1), Gate::nand(1, 0), Gate::nand(2, 1)]]);
        let t = nand_to_toffoli(&c).unwrap();
        assert_eq!(t.depth(), 3);
        for v in 0..8 {
            let input = bits(v, 3);
            assert_eq!(t.evaluate(&input, &[]).unwrap(), c.evaluate(&input, &[]).unwrap());
        }
    }

    #[test]
    fn rejects_non_nand_and_non_local() {
        let tof = LayeredCircuit::line(3, vec![vec![Gate::toffoli(0, 1, 2)]]);
        assert!(nand_to_toffoli(&tof).is_err());
        let far = LayeredCircuit::line(4, vec![vec![Gate::nand(0, 3)]]);
        assert!(nand_to_toffoli(&far).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn equivalent_on_random_circuits(per_side in 1usize..12, depth in 0usize..10, seed in any::<u64>(), input in any::<u64>(), coins in any::<u64>()) {
            let mut c = random_circuit(per_side, depth, 1, GateKind::Nand, seed).unwrap();
            if coins % 3 == 0 && per_side > 1 {
                c.randomness_wires = vec![0];
            }
            let t = nand_to_toffoli(&c).unwrap();
            prop_assert!(validate_geometry(&t).is_empty());
            prop_assert_eq!(t.depth(), 3 * depth);
            let data = bits(input, c.data_wires().len());
            let rand = bits(coins, c.randomness_wires.len());
            prop_assert_eq!(t.evaluate(&data, &rand).unwrap(), c.evaluate(&data, &rand).unwrap());
        }
    }
}
