//! Workbench for the parallel Magic Square relation: exact game values, a
//! noisy shallow quantum prover, geometrically-local classical circuits and
//! their two-party simulation, and the verifier round with soundness probes.

pub mod advantage;
pub mod circuit;
pub mod error;
pub mod experiments;
pub mod game;
pub mod protocol;
pub mod quantum;
pub mod rng;
pub mod stats;

pub use error::{Error, Result};
