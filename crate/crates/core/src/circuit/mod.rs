//! Geometrically local layered circuits of NAND and Toffoli gates.

mod geometry;
mod ir;
mod layout;
mod random;
mod transpile;

pub use geometry::{
    chebyshev, fan_out_limit, sites_local, validate_geometry, ValidationReport, Violation,
    ViolationKind,
};
pub use ir::{evaluate, Gate, GateKind, LayeredCircuit, WireRole};
pub(crate) use ir::apply_gate;
pub use layout::{is_x_site, GridInput, GridLayout, InputGeometry};
pub use random::{random_circuit, random_circuit_with, Placement, RandomCircuitOptions};
pub use transpile::{nand_to_toffoli, TOFFOLI_LAYERS_PER_NAND_LAYER};
