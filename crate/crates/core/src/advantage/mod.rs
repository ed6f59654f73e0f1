//! Verifier and provers of the parallel Magic Square round.

mod adversary;
mod message;
mod prover;
mod round;
mod verify;

pub use adversary::{run_soundness_probe, Adversary, AdversaryMetadata, AdversarySpec, ProbeResult};
pub use message::{protocol_delta, verifier_round, PaddedMessage, BLANK};
pub use prover::{honest_prover, SWAPS_PER_REGISTER};
pub use round::{completeness, round_seed, run_round, run_round_framed, CompletenessSummary, RoundLog};
pub use verify::{verify, verify_exact, Verdict};
