//! Statevector simulation of the honest Magic Square prover.

mod grid;
mod noise;
mod prover;
mod state;

pub use grid::{verified_grid, ObservableGrid, Pauli, PauliString2};
pub use noise::{apply_gate, apply_pauli, fault_paulis, NoiseModel};
pub use prover::{
    measure_magic_square, prepare_resource, run_parmagic, shot_records, write_shots_csv, ShotRecord,
    ALICE_QUBITS, BOB_QUBITS,
};
pub(crate) use prover::play_game;
pub use state::{Gate, StateVector, DEFAULT_MAX_QUBITS};
