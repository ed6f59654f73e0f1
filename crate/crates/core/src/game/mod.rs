//! Finite two-prover games, strategies and exact values.

mod input;
pub mod magic;
mod spec;
mod strategy;
pub mod text;
mod value;

pub use input::{count_satisfied, sample_inputs, symbol_width, LineInput};
pub use spec::{GameSpec, Prob};
pub use strategy::{DeterministicStrategy, LeakageProtocol};
pub use value::{
    best_response_search, brute_force_classical_value, brute_force_leakage_value,
    magic_square_two_bit_protocol, ClassicalValue, EnumerationCaps, LeakageValue, SearchResult,
};
