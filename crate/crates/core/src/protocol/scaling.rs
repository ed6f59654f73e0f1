use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::{random_circuit_with, GateKind, GridLayout, InputGeometry, Placement, RandomCircuitOptions};
use crate::error::{domain, Result};
use crate::rng::{self, derive_seed};

use super::compile::{compile, execute_protocol};
use super::framing::execute_two_party;

/// One `(n, d)` cell of the communication sweep.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub dimension: usize,
    pub n: usize,
    pub depth: usize,
    pub cut_pairs: usize,
    /// Maximum metered bits over the circuits of the cell.
    pub measured_bits: usize,
    /// `2 * d * cut_pairs`.
    pub bound_bits: usize,
    pub max_mixed_per_layer: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingOptions {
    pub dimension: usize,
    pub n_sweep: Vec<usize>,
    pub d_sweep: Vec<usize>,
    pub circuits_per_cell: usize,
    pub seed: u64,
    pub placement: Placement,
    pub fill: f64,
    /// Run each protocol with the parties on two threads over a socket.
    #[serde(default)]
    pub two_party: bool,
}

impl ScalingOptions {
    pub fn new(dimension: usize, n_sweep: Vec<usize>, d_sweep: Vec<usize>, seed: u64) -> Self {
        Self {
            dimension,
            n_sweep,
            d_sweep,
            circuits_per_cell: 8,
            seed,
            placement: Placement::Connected,
            fill: 1.0,
            two_party: false,
        }
    }
}

/// Compile random Toffoli circuits with one wire per site, run each
/// protocol on one random input and meter the transcript. Cell `(i, j)`
/// uses seeds derived from `i * |d_sweep| + j`.
pub fn comm_scaling_experiment(opts: &ScalingOptions) -> Result<Vec<ScalingRow>> {
    let mut rows = Vec::with_capacity(opts.n_sweep.len() * opts.d_sweep.len());
    for (i, &n) in opts.n_sweep.iter().enumerate() {
        let layout = GridLayout::new(opts.dimension, n)?;
        let geometry = InputGeometry::Grid(layout);
        for (j, &depth) in opts.d_sweep.iter().enumerate() {
            let cell_seed = derive_seed(opts.seed, (i * opts.d_sweep.len() + j) as u64);
            let mut measured = 0;
            let mut mixed = 0;
            for k in 0..opts.circuits_per_cell {
                let circuit_seed = derive_seed(cell_seed, k as u64);
                let circuit = random_circuit_with(&RandomCircuitOptions {
                    placement: opts.placement,
                    fill: opts.fill,
                    ..RandomCircuitOptions::new(n, depth, opts.dimension, GateKind::Toffoli, circuit_seed)
                })?;
                let spec = compile(&circuit, &geometry)?;
                let mut r = rng::stream(circuit_seed, rng::domain::INPUTS, 0);
                let x: Vec<bool> = (0..n).map(|_| r.gen()).collect();
                let y: Vec<bool> = (0..n).map(|_| r.gen()).collect();
                let (out, transcript) = if opts.two_party {
                    execute_two_party(&spec, &x, &y, &[])?
                } else {
                    execute_protocol(&spec, &x, &y, &[])?
                };
                if out != circuit.evaluate(&spec.join_input(&x, &y)?, &[])? {
                    return Err(domain(format!("protocol disagrees with the circuit at n = {n}, d = {depth}")));
                }
                if transcript.total_bits() != spec.predicted_bits() {
                    return Err(domain("metered bits differ from the plan"));
                }
                measured = measured.max(transcript.total_bits());
                mixed = mixed.max(spec.max_mixed_per_layer());
            }
            rows.push(ScalingRow {
                dimension: opts.dimension,
                n,
                depth,
                cut_pairs: layout.cut_pairs(),
                measured_bits: measured,
                bound_bits: 2 * depth * layout.cut_pairs(),
                max_mixed_per_layer: mixed,
            });
        }
    }
    Ok(rows)
}
