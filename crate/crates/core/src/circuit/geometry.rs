use serde::Serialize;

use super::ir::LayeredCircuit;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ViolationKind {
    Structure,
    Locality,
    FanOut,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub layer: Option<usize>,
    pub gate: Option<usize>,
    pub message: String,
}

/// Every locality, fan-in and fan-out violation of a circuit. Empty iff the
/// circuit is geometrically local.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Chebyshev distance between two sites.
pub fn chebyshev(a: &[i64], b: &[i64]) -> u64 {
    a.iter().zip(b).map(|(x, y)| x.abs_diff(*y)).max().unwrap_or(0)
}

/// Sites are local iff they fit in one radius-`r` ball (span at most `2r` on
/// every axis) and are connected under Chebyshev distance at most `r`.
pub fn sites_local(sites: &[&[i64]], radius: u32) -> bool {
    let Some(first) = sites.first() else {
        return true;
    };
    let r = u64::from(radius);
    for axis in 0..first.len() {
        let lo = sites.iter().map(|s| s[axis]).min().unwrap_or(0);
        let hi = sites.iter().map(|s| s[axis]).max().unwrap_or(0);
        if hi.abs_diff(lo) > 2 * r {
            return false;
        }
    }
    let mut reached = vec![false; sites.len()];
    reached[0] = true;
    let mut frontier = vec![0];
    while let Some(i) = frontier.pop() {
        for j in 0..sites.len() {
            if !reached[j] && chebyshev(sites[i], sites[j]) <= r {
                reached[j] = true;
                frontier.push(j);
            }
        }
    }
    reached.into_iter().all(|r| r)
}

/// Largest number of gates in one layer that may read the same wire:
/// the size of a radius-`r` neighbourhood, `(2r + 1)^D`.
pub fn fan_out_limit(dimension: usize, radius: u32) -> usize {
    (2 * radius as usize + 1).pow(dimension as u32)
}

pub fn validate_geometry(circuit: &LayeredCircuit) -> ValidationReport {
    let mut report = ValidationReport::default();
    if let Err(e) = circuit.check_structure() {
        report.violations.push(Violation {
            kind: ViolationKind::Structure,
            layer: None,
            gate: None,
            message: e.to_string(),
        });
        return report;
    }
    let limit = fan_out_limit(circuit.dimension, circuit.radius);
    for (li, layer) in circuit.layers.iter().enumerate() {
        let mut readers = vec![0usize; circuit.wire_count()];
        for (gi, g) in layer.iter().enumerate() {
            let sites: Vec<&[i64]> = g.wires.iter().map(|&w| circuit.wires[w].as_slice()).collect();
            if !sites_local(&sites, circuit.radius) {
                report.violations.push(Violation {
                    kind: ViolationKind::Locality,
                    layer: Some(li),
                    gate: Some(gi),
                    message: format!("wires {:?} at sites {:?} are not within radius {}", g.wires, sites, circuit.radius),
                });
            }
            for &w in &g.wires {
                readers[w] += 1;
            }
        }
        for (w, &count) in readers.iter().enumerate() {
            if count > limit {
                report.violations.push(Violation {
                    kind: ViolationKind::FanOut,
                    layer: Some(li),
                    gate: None,
                    message: format!("wire {w} feeds {count} gates, limit {limit}"),
                });
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::ir::Gate;

    #[test]
    fn adjacent_nand_is_local() {
        let c = LayeredCircuit::line(2, vec![vec![Gate::nand(0, 1)]]);
        assert!(validate_geometry(&c).is_empty());
    }

    #[test]
    fn distant_nand_is_one_violation() {
        let c = LayeredCircuit::line(6, vec![vec![Gate::nand(0, 5)]]);
        let r = validate_geometry(&c);
        assert_eq!(r.violations.len(), 1);
        assert_eq!(r.violations[0].kind, ViolationKind::Locality);
    }

    #[test]
    fn toffoli_needs_contiguous_sites() {
        let ok = LayeredCircuit::line(3, vec![vec![Gate::toffoli(0, 2, 1)]]);
        assert!(validate_geometry(&ok).is_empty());
        let mut gap = LayeredCircuit::line(3, vec![vec![Gate::toffoli(0, 1, 2)]]);
        gap.wires[2] = vec![3];
        assert!(!validate_geometry(&gap).is_empty());
    }

    #[test]
    fn fan_out_is_bounded() {
        // wire 2 feeds four NAND gates
        let mut c = LayeredCircuit::new(
            1,
            vec![vec![0], vec![1], vec![2], vec![2], vec![3]],
            vec![vec![Gate::nand(1, 2), Gate::nand(2, 1), Gate::nand(3, 2), Gate::nand(4, 2)]],
        );
        let r = validate_geometry(&c);
        assert_eq!(r.violations.iter().filter(|v| v.kind == ViolationKind::FanOut).count(), 1);
        c.layers[0].pop();
        assert!(validate_geometry(&c).is_empty());
    }

    #[test]
    fn diagonal_neighbours_in_2d() {
        let a: &[i64] = &[0, 0];
        let b: &[i64] = &[1, 1];
        let c: &[i64] = &[2, 2];
        assert!(sites_local(&[a, b], 1));
        assert!(sites_local(&[a, b, c], 1));
        assert!(!sites_local(&[a, c], 1));
        assert_eq!(fan_out_limit(2, 1), 9);
    }

    #[test]
    fn structure_errors_become_data() {
        let c = LayeredCircuit::line(2, vec![vec![Gate::nand(0, 9)]]);
        let r = validate_geometry(&c);
        assert_eq!(r.violations[0].kind, ViolationKind::Structure);
    }
}
