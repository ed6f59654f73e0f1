use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::circuit::{apply_gate, InputGeometry, LayeredCircuit, WireRole};
use crate::error::{domain, Result};

use super::cut::{horizontal_cut, CutPartition, GateClass, LayerClassification, Side};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Party {
    Alice,
    Bob,
}

impl Party {
    /// Wire code used in frames.
    pub fn code(self) -> u8 {
        match self {
            Party::Alice => 0,
            Party::Bob => 1,
        }
    }

    pub fn from_code(code: u8) -> Option<Self> {
        match code {
            0 => Some(Party::Alice),
            1 => Some(Party::Bob),
            _ => None,
        }
    }

    fn owns(self, side: Side) -> bool {
        matches!(
            (self, side),
            (_, Side::Shared) | (Party::Alice, Side::U) | (Party::Bob, Side::D)
        )
    }

    fn simulates(self, class: GateClass) -> bool {
        matches!(
            (self, class),
            (_, GateClass::Shared)
                | (Party::Alice, GateClass::Upper | GateClass::Mixed)
                | (Party::Bob, GateClass::Lower)
        )
    }
}

/// Bob's message before a layer: the `D`-side wires of that layer's mixed
/// gates, in gate order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlannedMessage {
    pub layer: usize,
    pub wires: Vec<usize>,
}

/// A compiled two-party protocol.
#[derive(Clone, Debug)]
pub struct ProtocolSpec {
    pub circuit: LayeredCircuit,
    pub geometry: InputGeometry,
    pub partition: CutPartition,
    pub classes: Vec<LayerClassification>,
    pub messages: Vec<PlannedMessage>,
}

impl ProtocolSpec {
    /// Bits the protocol will send on every input.
    pub fn predicted_bits(&self) -> usize {
        self.messages.iter().map(|m| m.wires.len()).sum()
    }

    pub fn max_mixed_per_layer(&self) -> usize {
        self.classes.iter().map(|c| c.mixed().len()).max().unwrap_or(0)
    }

    pub fn depth(&self) -> usize {
        self.circuit.depth()
    }

    fn planned(&self, layer: usize) -> Option<&PlannedMessage> {
        self.messages
            .binary_search_by_key(&layer, |m| m.layer)
            .ok()
            .map(|i| &self.messages[i])
    }

    /// Data wires known to each party initially, in wire order.
    pub fn input_wires(&self, party: Party) -> Vec<usize> {
        let side = if party == Party::Alice { Side::U } else { Side::D };
        self.partition.labels[0]
            .iter()
            .enumerate()
            .filter(|(_, s)| **s == side)
            .map(|(w, _)| w)
            .collect()
    }

    /// Split a full data input (wire order) into the two registers.
    pub fn split_input(&self, input: &[bool]) -> Result<(Vec<bool>, Vec<bool>)> {
        let data = self.circuit.data_wires();
        if input.len() != data.len() {
            return Err(domain(format!("input has {} bits, circuit has {} data wires", input.len(), data.len())));
        }
        let labels = &self.partition.labels[0];
        let mut x = Vec::new();
        let mut y = Vec::new();
        for (&w, &b) in data.iter().zip(input) {
            if labels[w] == Side::U {
                x.push(b);
            } else {
                y.push(b);
            }
        }
        Ok((x, y))
    }

    /// Inverse of [`Self::split_input`].
    pub fn join_input(&self, x: &[bool], y: &[bool]) -> Result<Vec<bool>> {
        let labels = &self.partition.labels[0];
        let (mut xi, mut yi) = (x.iter(), y.iter());
        let joined: Option<Vec<bool>> = self
            .circuit
            .data_wires()
            .iter()
            .map(|&w| if labels[w] == Side::U { xi.next() } else { yi.next() }.copied())
            .collect();
        match joined {
            Some(v) if xi.next().is_none() && yi.next().is_none() => Ok(v),
            _ => Err(domain("register lengths do not match the circuit")),
        }
    }
}

/// Compile a Toffoli circuit into a Bob-to-Alice protocol.
pub fn compile(circuit: &LayeredCircuit, geometry: &InputGeometry) -> Result<ProtocolSpec> {
    let (partition, classes) = horizontal_cut(circuit, geometry)?;
    let mut messages = Vec::new();
    for (i, layer) in circuit.layers.iter().enumerate() {
        let wires: Vec<usize> = classes[i]
            .mixed()
            .into_iter()
            .flat_map(|g| layer[g].wires.iter().copied())
            .filter(|&w| partition.labels[i][w] == Side::D)
            .collect();
        if !wires.is_empty() {
            messages.push(PlannedMessage { layer: i, wires });
        }
    }
    Ok(ProtocolSpec {
        circuit: circuit.clone(),
        geometry: *geometry,
        partition,
        classes,
        messages,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Message {
    pub layer: usize,
    pub sender: Party,
    pub bits: Vec<bool>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Transcript {
    pub messages: Vec<Message>,
}

impl Transcript {
    pub fn total_bits(&self) -> usize {
        self.messages.iter().map(|m| m.bits.len()).sum()
    }
}

#[derive(Serialize)]
struct TranscriptRow<'a> {
    layer: usize,
    sender: Party,
    bits: &'a str,
}

/// CSV with columns `layer,sender,bits`; `bits` is the payload as a 0/1 string.
pub fn write_transcript_csv<W: Write>(out: W, transcript: &Transcript) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for m in &transcript.messages {
        let bits: String = m.bits.iter().map(|&b| if b { '1' } else { '0' }).collect();
        w.serialize(TranscriptRow {
            layer: m.layer,
            sender: m.sender,
            bits: &bits,
        })
        .map_err(|e| domain(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

/// One party's view: values of the wires it is entitled to know.
pub(crate) struct PartyState<'a> {
    spec: &'a ProtocolSpec,
    party: Party,
    known: Vec<Option<bool>>,
}

impl<'a> PartyState<'a> {
    pub(crate) fn new(spec: &'a ProtocolSpec, party: Party, own_input: &[bool], randomness: &[bool]) -> Result<Self> {
        let c = &spec.circuit;
        let mine = spec.input_wires(party);
        if own_input.len() != mine.len() {
            return Err(domain(format!(
                "{party:?} input has {} bits, expected {}",
                own_input.len(),
                mine.len()
            )));
        }
        if randomness.len() != c.randomness_wires.len() {
            return Err(domain(format!(
                "randomness has {} bits, circuit has {} randomness wires",
                randomness.len(),
                c.randomness_wires.len()
            )));
        }
        let mut known = vec![None; c.wire_count()];
        for (&w, &b) in mine.iter().zip(own_input) {
            known[w] = Some(b);
        }
        for (&w, &b) in c.randomness_wires.iter().zip(randomness) {
            known[w] = Some(b);
        }
        for (w, role) in c.roles().iter().enumerate() {
            if let WireRole::Constant(b) = role {
                known[w] = Some(*b);
            }
        }
        Ok(Self { spec, party, known })
    }

    fn value(&self, view: &[Option<bool>], w: usize) -> Result<bool> {
        view[w].ok_or_else(|| domain(format!("{:?} does not know wire {w}", self.party)))
    }

    /// The message this party sends before `layer`, if any.
    pub(crate) fn outgoing(&self, layer: usize) -> Result<Option<Vec<bool>>> {
        if self.party != Party::Bob {
            return Ok(None);
        }
        self.spec
            .planned(layer)
            .map(|m| m.wires.iter().map(|&w| self.value(&self.known, w)).collect())
            .transpose()
    }

    pub(crate) fn expects(&self, layer: usize) -> usize {
        match self.party {
            Party::Alice => self.spec.planned(layer).map_or(0, |m| m.wires.len()),
            Party::Bob => 0,
        }
    }

    /// Simulate this party's gates of `layer`.
    pub(crate) fn step(&mut self, layer: usize, incoming: Option<&[bool]>) -> Result<()> {
        let mut view = self.known.clone();
        if let Some(bits) = incoming {
            let plan = self
                .spec
                .planned(layer)
                .ok_or_else(|| domain(format!("unexpected message at layer {layer}")))?;
            if plan.wires.len() != bits.len() {
                return Err(domain(format!("layer {layer}: message has {} bits, expected {}", bits.len(), plan.wires.len())));
            }
            for (&w, &b) in plan.wires.iter().zip(bits) {
                view[w] = Some(b);
            }
        } else if self.expects(layer) > 0 {
            return Err(domain(format!("layer {layer}: missing message")));
        }
        let gates = &self.spec.circuit.layers[layer];
        let mut old = vec![false; view.len()];
        for (g, &class) in gates.iter().zip(&self.spec.classes[layer].classes) {
            if self.party.simulates(class) {
                for &w in &g.wires {
                    old[w] = self.value(&view, w)?;
                }
            }
        }
        let mut new = old.clone();
        for (g, &class) in gates.iter().zip(&self.spec.classes[layer].classes) {
            if self.party.simulates(class) {
                apply_gate(g, &old, &mut new);
                for &w in &g.wires {
                    view[w] = Some(new[w]);
                }
            }
        }
        let after = &self.spec.partition.labels[layer + 1];
        for (w, slot) in view.iter_mut().enumerate() {
            if !self.party.owns(after[w]) {
                *slot = None;
            }
        }
        self.known = view;
        Ok(())
    }

    pub(crate) fn known(&self, w: usize) -> Option<bool> {
        self.known[w]
    }
}

/// Output wire values, each taken from the party that owns it at the end.
pub(crate) fn assemble_outputs(spec: &ProtocolSpec, alice: &[Option<bool>], bob: &[Option<bool>]) -> Result<Vec<bool>> {
    let last = &spec.partition.labels[spec.depth()];
    spec.circuit
        .output_wires()
        .iter()
        .enumerate()
        .map(|(k, &w)| {
            let src = if last[w] == Side::D { bob[k] } else { alice[k] };
            src.ok_or_else(|| domain(format!("no party holds output wire {w}")))
        })
        .collect()
}

/// Run both parties in lockstep in this thread, metering every message.
pub fn execute_protocol(
    spec: &ProtocolSpec,
    x: &[bool],
    y: &[bool],
    randomness: &[bool],
) -> Result<(Vec<bool>, Transcript)> {
    let mut alice = PartyState::new(spec, Party::Alice, x, randomness)?;
    let mut bob = PartyState::new(spec, Party::Bob, y, randomness)?;
    let mut transcript = Transcript::default();
    for layer in 0..spec.depth() {
        let msg = bob.outgoing(layer)?;
        bob.step(layer, None)?;
        alice.step(layer, msg.as_deref())?;
        if let Some(bits) = msg {
            transcript.messages.push(Message {
                layer,
                sender: Party::Bob,
                bits,
            });
        }
    }
    let outs = spec.circuit.output_wires();
    let a: Vec<Option<bool>> = outs.iter().map(|&w| alice.known(w)).collect();
    let b: Vec<Option<bool>> = outs.iter().map(|&w| bob.known(w)).collect();
    Ok((assemble_outputs(spec, &a, &b)?, transcript))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{random_circuit, Gate, GateKind, GridLayout};
    use crate::rng;
    use proptest::prelude::*;
    use rand::Rng;

    #[test]
    fn no_crossing_means_no_bits() {
        let geometry = InputGeometry::Line { bits_per_side: 3 };
        let sites = geometry.x_sites().into_iter().chain(geometry.y_sites()).collect();
        let c = LayeredCircuit::new(1, sites, vec![vec![Gate::toffoli(0, 1, 2), Gate::toffoli(3, 4, 5)]]);
        let spec = compile(&c, &geometry).unwrap();
        assert_eq!(spec.predicted_bits(), 0);
        let (out, t) = execute_protocol(&spec, &[true, true, false], &[true, true, true], &[]).unwrap();
        assert_eq!(out, vec![true, true, true, true, true, false]);
        assert_eq!(t.total_bits(), 0);
    }

    #[test]
    fn zero_depth_is_identity() {
        let geometry = InputGeometry::Line { bits_per_side: 2 };
        let sites = geometry.x_sites().into_iter().chain(geometry.y_sites()).collect();
        let c = LayeredCircuit::new(1, sites, vec![]);
        let spec = compile(&c, &geometry).unwrap();
        let (out, t) = execute_protocol(&spec, &[true, false], &[false, true], &[]).unwrap();
        assert_eq!(out, vec![true, false, false, true]);
        assert!(t.messages.is_empty());
    }

    #[test]
    fn crossing_gate_sends_lower_inputs() {
        let geometry = InputGeometry::Line { bits_per_side: 2 };
        let sites = geometry.x_sites().into_iter().chain(geometry.y_sites()).collect();
        // controls 2, 3 on Bob's side, target 1 on Alice's
        let c = LayeredCircuit::new(1, sites, vec![vec![Gate::toffoli(2, 3, 1)]]);
        let spec = compile(&c, &geometry).unwrap();
        assert_eq!(spec.messages, vec![PlannedMessage { layer: 0, wires: vec![2, 3] }]);
        let (out, t) = execute_protocol(&spec, &[false, false], &[true, true], &[]).unwrap();
        assert_eq!(out, vec![false, true, true, true]);
        assert_eq!(t.total_bits(), 2);
        let mut csv = Vec::new();
        write_transcript_csv(&mut csv, &t).unwrap();
        assert_eq!(String::from_utf8(csv).unwrap(), "layer,sender,bits\n0,bob,11\n");
    }

    #[test]
    fn input_length_mismatch() {
        let c = random_circuit(2, 2, 1, GateKind::Toffoli, 0).unwrap();
        let spec = compile(&c, &InputGeometry::Grid(GridLayout::new(1, 2).unwrap())).unwrap();
        assert!(execute_protocol(&spec, &[true], &[true, false], &[]).is_err());
        assert!(execute_protocol(&spec, &[true, true], &[true, false], &[false]).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn protocol_matches_evaluation(per_side in 1usize..24, depth in 0usize..12, seed in any::<u64>(), rand_wires in 0usize..3) {
            let mut o = crate::circuit::RandomCircuitOptions::new(per_side, depth, 1, GateKind::Toffoli, seed);
            o.randomness_wires = rand_wires.min(per_side);
            let c = crate::circuit::random_circuit_with(&o).unwrap();
            let geometry = InputGeometry::Grid(GridLayout::new(1, per_side).unwrap());
            let data = c.data_wires().len();
            let spec = compile(&c, &geometry).unwrap();
            let mut r = rng::stream(seed, 0xAA, 0);
            for _ in 0..8 {
                let input: Vec<bool> = (0..data).map(|_| r.gen()).collect();
                let coins: Vec<bool> = (0..c.randomness_wires.len()).map(|_| r.gen()).collect();
                let (x, y) = spec.split_input(&input).unwrap();
                let (out, t) = execute_protocol(&spec, &x, &y, &coins).unwrap();
                prop_assert_eq!(&out, &c.evaluate(&input, &coins).unwrap());
                prop_assert_eq!(t.total_bits(), spec.predicted_bits());
                prop_assert!(t.total_bits() <= 2 * depth);
            }
            prop_assert!(spec.max_mixed_per_layer() <= 1);
        }
    }
}
