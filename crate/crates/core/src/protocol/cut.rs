use serde::Serialize;

use crate::circuit::{is_x_site, GateKind, InputGeometry, LayeredCircuit, WireRole};
use crate::error::{domain, Result};

/// Which party knows a wire's value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Side {
    /// Upper set, held by Alice.
    U,
    /// Lower set, held by Bob.
    D,
    /// Constants and shared randomness, known to both.
    Shared,
}

/// Gate classes of one layer, by the labels of the gate's wires.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum GateClass {
    /// Private wires all in `U`.
    Upper,
    /// Private wires all in `D`.
    Lower,
    /// Private wires in both `U` and `D`.
    Mixed,
    /// No private wires; both parties simulate it.
    Shared,
}

/// Wire labels before each layer: `labels[i][w]` for `i` in `0..=depth`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CutPartition {
    pub labels: Vec<Vec<Side>>,
}

impl CutPartition {
    fn set(&self, layer: usize, side: Side) -> Vec<usize> {
        self.labels[layer]
            .iter()
            .enumerate()
            .filter(|(_, s)| **s == side)
            .map(|(w, _)| w)
            .collect()
    }

    pub fn upper(&self, layer: usize) -> Vec<usize> {
        self.set(layer, Side::U)
    }

    pub fn lower(&self, layer: usize) -> Vec<usize> {
        self.set(layer, Side::D)
    }

    pub fn shared(&self, layer: usize) -> Vec<usize> {
        self.set(layer, Side::Shared)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LayerClassification {
    pub classes: Vec<GateClass>,
}

impl LayerClassification {
    fn of(&self, class: GateClass) -> Vec<usize> {
        self.classes
            .iter()
            .enumerate()
            .filter(|(_, c)| **c == class)
            .map(|(g, _)| g)
            .collect()
    }

    pub fn upper(&self) -> Vec<usize> {
        self.of(GateClass::Upper)
    }

    pub fn lower(&self) -> Vec<usize> {
        self.of(GateClass::Lower)
    }

    pub fn mixed(&self) -> Vec<usize> {
        self.of(GateClass::Mixed)
    }

    pub fn shared(&self) -> Vec<usize> {
        self.of(GateClass::Shared)
    }
}

pub fn classify(labels: &[Side], wires: &[usize]) -> GateClass {
    let has = |s: Side| wires.iter().any(|&w| labels[w] == s);
    match (has(Side::U), has(Side::D)) {
        (true, true) => GateClass::Mixed,
        (true, false) => GateClass::Upper,
        (false, true) => GateClass::Lower,
        (false, false) => GateClass::Shared,
    }
}

fn propagate(class: GateClass) -> Side {
    match class {
        GateClass::Upper | GateClass::Mixed => Side::U,
        GateClass::Lower => Side::D,
        GateClass::Shared => Side::Shared,
    }
}

/// Initial labels: data wires on the `x` side are `U`, the rest of the
/// data wires `D`, constants and randomness `Shared`.
pub fn initial_labels(circuit: &LayeredCircuit) -> Vec<Side> {
    circuit
        .roles()
        .iter()
        .zip(&circuit.wires)
        .map(|(role, site)| match role {
            WireRole::Data if is_x_site(site) => Side::U,
            WireRole::Data => Side::D,
            _ => Side::Shared,
        })
        .collect()
}

/// Label every wire before every layer and classify every gate.
///
/// Untouched wires keep their label; all three wires of a gate take the
/// label its class propagates.
pub fn horizontal_cut(
    circuit: &LayeredCircuit,
    geometry: &InputGeometry,
) -> Result<(CutPartition, Vec<LayerClassification>)> {
    circuit.check_structure()?;
    if circuit.layers.iter().flatten().any(|g| g.kind != GateKind::Toffoli) {
        return Err(domain("horizontal cut needs a Toffoli circuit; transpile NAND circuits first"));
    }
    if circuit.dimension != geometry.dimension() {
        return Err(domain(format!(
            "circuit is {}-dimensional, input geometry {}-dimensional",
            circuit.dimension,
            geometry.dimension()
        )));
    }
    let mut labels = initial_labels(circuit);
    let mut partition = Vec::with_capacity(circuit.depth() + 1);
    let mut classes = Vec::with_capacity(circuit.depth());
    for layer in &circuit.layers {
        let layer_classes: Vec<GateClass> = layer.iter().map(|g| classify(&labels, &g.wires)).collect();
        let mut next = labels.clone();
        for (g, &c) in layer.iter().zip(&layer_classes) {
            for &w in &g.wires {
                next[w] = propagate(c);
            }
        }
        partition.push(std::mem::replace(&mut labels, next));
        classes.push(LayerClassification { classes: layer_classes });
    }
    partition.push(labels);
    Ok((CutPartition { labels: partition }, classes))
}

/// Check the propagation rules on a partition: the first layer splits
/// data wires by side, and each later layer follows from the previous one.
pub fn check_partition(circuit: &LayeredCircuit, partition: &CutPartition, classes: &[LayerClassification]) -> Result<()> {
    if partition.labels.len() != circuit.depth() + 1 || classes.len() != circuit.depth() {
        return Err(domain("partition does not cover every layer"));
    }
    if partition.labels[0] != initial_labels(circuit) {
        return Err(domain("first layer does not split the inputs by side"));
    }
    for (i, layer) in circuit.layers.iter().enumerate() {
        let before = &partition.labels[i];
        let after = &partition.labels[i + 1];
        let mut touched = vec![false; circuit.wire_count()];
        for (g, &c) in layer.iter().zip(&classes[i].classes) {
            if classify(before, &g.wires) != c {
                return Err(domain(format!("layer {i}: gate class disagrees with labels")));
            }
            for &w in &g.wires {
                touched[w] = true;
                if after[w] != propagate(c) {
                    return Err(domain(format!("layer {i}: wire {w} labelled against its gate class")));
                }
            }
        }
        for w in 0..circuit.wire_count() {
            if !touched[w] && after[w] != before[w] {
                return Err(domain(format!("layer {i}: untouched wire {w} changed label")));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Gate;

    fn line(n: usize, layers: Vec<Vec<Gate>>) -> (LayeredCircuit, InputGeometry) {
        let geometry = InputGeometry::Line { bits_per_side: n };
        let sites = geometry.x_sites().into_iter().chain(geometry.y_sites()).collect();
        (LayeredCircuit::new(1, sites, layers), geometry)
    }

    #[test]
    fn x_side_gates_stay_upper() {
        let (c, g) = line(3, vec![vec![Gate::toffoli(0, 1, 2)]]);
        let (p, cl) = horizontal_cut(&c, &g).unwrap();
        assert_eq!(cl[0].upper(), vec![0]);
        assert_eq!(p.upper(1), vec![0, 1, 2]);
        assert_eq!(p.lower(1), vec![3, 4, 5]);
        check_partition(&c, &p, &cl).unwrap();
    }

    #[test]
    fn straddling_gate_moves_outputs_up() {
        // wires 2 | 3 straddle the cut
        let (c, g) = line(3, vec![vec![Gate::toffoli(1, 3, 2)], vec![Gate::toffoli(3, 4, 5)]]);
        let (p, cl) = horizontal_cut(&c, &g).unwrap();
        assert_eq!(cl[0].mixed(), vec![0]);
        assert_eq!(p.upper(1), vec![0, 1, 2, 3]);
        assert_eq!(cl[1].mixed(), vec![0]);
        assert_eq!(p.upper(2), vec![0, 1, 2, 3, 4, 5]);
        check_partition(&c, &p, &cl).unwrap();
    }

    #[test]
    fn labels_partition_wires() {
        let (c, g) = line(2, vec![vec![Gate::toffoli(1, 2, 3)]]);
        let (p, _) = horizontal_cut(&c, &g).unwrap();
        for i in 0..p.labels.len() {
            let mut all = [p.upper(i), p.lower(i), p.shared(i)].concat();
            all.sort();
            assert_eq!(all, (0..4).collect::<Vec<_>>());
        }
    }

    #[test]
    fn nand_rejected() {
        let (c, g) = line(1, vec![vec![Gate::nand(0, 1)]]);
        assert!(horizontal_cut(&c, &g).is_err());
    }

    #[test]
    fn tampered_partition_fails_check() {
        let (c, g) = line(2, vec![vec![Gate::toffoli(0, 1, 2)]]);
        let (mut p, cl) = horizontal_cut(&c, &g).unwrap();
        p.labels[1][2] = Side::D;
        assert!(check_partition(&c, &p, &cl).is_err());
    }
}
