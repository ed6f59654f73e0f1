//! Two-party simulation of local Toffoli circuits across a fixed cut.

mod compile;
mod cut;
mod framing;
mod scaling;

pub use compile::{
    compile, execute_protocol, write_transcript_csv, Message, Party, PlannedMessage, ProtocolSpec, Transcript,
};
pub use cut::{check_partition, classify, horizontal_cut, initial_labels, CutPartition, GateClass, LayerClassification, Side};
pub use framing::{execute_two_party, frames_for, read_frame, write_frame, Frame, MAX_FRAME_BITS};
pub use scaling::{comm_scaling_experiment, ScalingOptions, ScalingRow};
