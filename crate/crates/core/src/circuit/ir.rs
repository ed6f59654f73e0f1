use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GateKind {
    /// `[i, j]`: wire `i` becomes `NAND(i, j)`.
    Nand,
    /// `[c0, c1, t]`: wire `t` becomes `t ^ (c0 & c1)`.
    Toffoli,
}

impl GateKind {
    pub fn arity(self) -> usize {
        match self {
            GateKind::Nand => 2,
            GateKind::Toffoli => 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Gate {
    pub kind: GateKind,
    pub wires: Vec<usize>,
}

impl Gate {
    pub fn nand(out: usize, other: usize) -> Self {
        Self {
            kind: GateKind::Nand,
            wires: vec![out, other],
        }
    }

    pub fn toffoli(c0: usize, c1: usize, target: usize) -> Self {
        Self {
            kind: GateKind::Toffoli,
            wires: vec![c0, c1, target],
        }
    }

    /// The wire whose value this gate may change.
    pub fn written(&self) -> usize {
        match self.kind {
            GateKind::Nand => self.wires[0],
            GateKind::Toffoli => self.wires[2],
        }
    }
}

fn default_radius() -> u32 {
    1
}

fn is_default_radius(r: &u32) -> bool {
    *r == 1
}

/// A layered circuit over wires placed at integer grid sites.
///
/// Several wires may share a site. Layers are evaluated synchronously: each
/// gate reads the values left by the previous layer. Wires that are neither
/// randomness nor constants are data wires and receive the input, in wire
/// order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayeredCircuit {
    pub dimension: usize,
    pub wires: Vec<Vec<i64>>,
    pub layers: Vec<Vec<Gate>>,
    #[serde(default)]
    pub randomness_wires: Vec<usize>,
    /// `[wire, bit]` pairs fixed before the first layer.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub constants: Vec<(usize, u8)>,
    /// Wires read out after the last layer; empty means the data wires.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub outputs: Vec<usize>,
    /// Chebyshev locality radius.
    #[serde(default = "default_radius", skip_serializing_if = "is_default_radius")]
    pub radius: u32,
}

/// Role of a wire before the first layer.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WireRole {
    Data,
    Randomness,
    Constant(bool),
}

impl LayeredCircuit {
    pub fn new(dimension: usize, wires: Vec<Vec<i64>>, layers: Vec<Vec<Gate>>) -> Self {
        Self {
            dimension,
            wires,
            layers,
            randomness_wires: Vec::new(),
            constants: Vec::new(),
            outputs: Vec::new(),
            radius: 1,
        }
    }

    /// Wires on the 1D sites `0..n`, one per site.
    pub fn line(n: usize, layers: Vec<Vec<Gate>>) -> Self {
        Self::new(1, (0..n as i64).map(|s| vec![s]).collect(), layers)
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn wire_count(&self) -> usize {
        self.wires.len()
    }

    pub fn gate_count(&self) -> usize {
        self.layers.iter().map(Vec::len).sum()
    }

    /// The single gate kind used, or `None` for an empty or mixed circuit.
    pub fn kind(&self) -> Option<GateKind> {
        let mut kinds = self.layers.iter().flatten().map(|g| g.kind);
        let first = kinds.next()?;
        kinds.all(|k| k == first).then_some(first)
    }

    pub fn roles(&self) -> Vec<WireRole> {
        let mut roles = vec![WireRole::Data; self.wires.len()];
        for &w in &self.randomness_wires {
            if let Some(r) = roles.get_mut(w) {
                *r = WireRole::Randomness;
            }
        }
        for &(w, b) in &self.constants {
            if let Some(r) = roles.get_mut(w) {
                *r = WireRole::Constant(b == 1);
            }
        }
        roles
    }

    pub fn data_wires(&self) -> Vec<usize> {
        self.roles()
            .iter()
            .enumerate()
            .filter(|(_, r)| **r == WireRole::Data)
            .map(|(w, _)| w)
            .collect()
    }

    pub fn output_wires(&self) -> Vec<usize> {
        if self.outputs.is_empty() {
            self.data_wires()
        } else {
            self.outputs.clone()
        }
    }

    /// Structural well-formedness: coordinates, wire indices, gate arity,
    /// and per-layer write discipline. Locality is checked separately.
    pub fn check_structure(&self) -> Result<()> {
        if self.dimension == 0 {
            return Err(domain("dimension must be positive"));
        }
        let n = self.wires.len();
        if let Some((w, _)) = self.wires.iter().enumerate().find(|(_, c)| c.len() != self.dimension) {
            return Err(domain(format!("wire {w} has coordinates of the wrong dimension")));
        }
        let in_range = |w: usize, what: &str| {
            if w < n {
                Ok(())
            } else {
                Err(domain(format!("{what} wire {w} out of range ({n} wires)")))
            }
        };
        let mut special = vec![false; n];
        for &w in &self.randomness_wires {
            in_range(w, "randomness")?;
            if std::mem::replace(&mut special[w], true) {
                return Err(domain(format!("wire {w} declared twice as randomness")));
            }
        }
        for &(w, b) in &self.constants {
            in_range(w, "constant")?;
            if b > 1 {
                return Err(domain(format!("constant on wire {w} is {b}, not a bit")));
            }
            if std::mem::replace(&mut special[w], true) {
                return Err(domain(format!("wire {w} is constant and also randomness or constant")));
            }
        }
        for &w in &self.outputs {
            in_range(w, "output")?;
        }
        for (li, layer) in self.layers.iter().enumerate() {
            let mut written = vec![false; n];
            let mut toffoli_touched = vec![false; n];
            let mut touched = vec![false; n];
            for (gi, g) in layer.iter().enumerate() {
                let ctx = || format!("layer {li} gate {gi}");
                if g.wires.len() != g.kind.arity() {
                    return Err(domain(format!("{}: {:?} needs {} wires", ctx(), g.kind, g.kind.arity())));
                }
                for &w in &g.wires {
                    in_range(w, &ctx())?;
                }
                for (a, &w) in g.wires.iter().enumerate() {
                    if g.wires[..a].contains(&w) {
                        return Err(domain(format!("{}: repeated wire {w}", ctx())));
                    }
                }
                let out = g.written();
                if std::mem::replace(&mut written[out], true) {
                    return Err(domain(format!("{}: wire {out} written twice in one layer", ctx())));
                }
                for &w in &g.wires {
                    if toffoli_touched[w] || (g.kind == GateKind::Toffoli && touched[w]) {
                        return Err(domain(format!("{}: Toffoli gates must not share wires within a layer", ctx())));
                    }
                }
                for &w in &g.wires {
                    touched[w] = true;
                    if g.kind == GateKind::Toffoli {
                        toffoli_touched[w] = true;
                    }
                }
            }
        }
        Ok(())
    }

    /// Initial wire values from data input and randomness, in wire order.
    pub fn initial_state(&self, input: &[bool], randomness: &[bool]) -> Result<Vec<bool>> {
        let roles = self.roles();
        let data = roles.iter().filter(|r| **r == WireRole::Data).count();
        if input.len() != data {
            return Err(domain(format!("input has {} bits, circuit has {data} data wires", input.len())));
        }
        if randomness.len() != self.randomness_wires.len() {
            return Err(domain(format!(
                "randomness has {} bits, circuit has {} randomness wires",
                randomness.len(),
                self.randomness_wires.len()
            )));
        }
        let mut state = vec![false; self.wires.len()];
        let mut inputs = input.iter();
        for (w, role) in roles.iter().enumerate() {
            state[w] = match role {
                WireRole::Data => *inputs.next().expect("counted above"),
                WireRole::Constant(b) => *b,
                WireRole::Randomness => false,
            };
        }
        for (&w, &r) in self.randomness_wires.iter().zip(randomness) {
            state[w] = r;
        }
        Ok(state)
    }

    /// Apply one layer synchronously.
    pub fn apply_layer(&self, layer: usize, state: &mut [bool]) {
        let old = state.to_vec();
        for g in &self.layers[layer] {
            apply_gate(g, &old, state);
        }
    }

    /// Every wire value after the last layer.
    pub fn evaluate_state(&self, input: &[bool], randomness: &[bool]) -> Result<Vec<bool>> {
        self.check_structure()?;
        let mut state = self.initial_state(input, randomness)?;
        for layer in 0..self.layers.len() {
            self.apply_layer(layer, &mut state);
        }
        Ok(state)
    }

    /// Output wire values after synchronous layer-by-layer evaluation.
    pub fn evaluate(&self, input: &[bool], randomness: &[bool]) -> Result<Vec<bool>> {
        let state = self.evaluate_state(input, randomness)?;
        Ok(self.output_wires().iter().map(|&w| state[w]).collect())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("circuit serializes")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("circuit serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let c: Self = serde_json::from_str(text)?;
        c.check_structure()?;
        Ok(c)
    }
}

/// Apply `g` reading `old` and writing `new`.
#[inline]
pub(crate) fn apply_gate(g: &Gate, old: &[bool], new: &mut [bool]) {
    match g.kind {
        GateKind::Nand => new[g.wires[0]] = !(old[g.wires[0]] && old[g.wires[1]]),
        GateKind::Toffoli => {
            let [a, b, t] = [g.wires[0], g.wires[1], g.wires[2]];
            new[t] = old[t] ^ (old[a] && old[b]);
        }
    }
}

/// Evaluate a circuit via [`LayeredCircuit::evaluate`].
pub fn evaluate(circuit: &LayeredCircuit, input: &[bool], randomness: &[bool]) -> Result<Vec<bool>> {
    circuit.evaluate(input, randomness)
}
