//! Compile a 1D Toffoli circuit into a two-party protocol across the cut
//! and run it in process and over a socket pair.

use parmagic::circuit::{random_circuit, GateKind, GridLayout, InputGeometry};
use parmagic::protocol::{compile, execute_protocol, execute_two_party, write_transcript_csv};
use parmagic::rng;
use rand::Rng;

fn main() -> parmagic::Result<()> {
    let n = 32;
    let circuit = random_circuit(n, 12, 1, GateKind::Toffoli, 4)?;
    let spec = compile(&circuit, &InputGeometry::Grid(GridLayout::new(1, n)?))?;
    println!(
        "depth {}: {} bits planned, at most {} mixed gate per layer",
        spec.depth(),
        spec.predicted_bits(),
        spec.max_mixed_per_layer()
    );

    let mut r = rng::stream(4, rng::domain::INPUTS, 0);
    let x: Vec<bool> = (0..n).map(|_| r.gen()).collect();
    let y: Vec<bool> = (0..n).map(|_| r.gen()).collect();
    let (out, transcript) = execute_protocol(&spec, &x, &y, &[])?;
    assert_eq!(out, circuit.evaluate(&spec.join_input(&x, &y)?, &[])?);
    assert_eq!(execute_two_party(&spec, &x, &y, &[])?, (out, transcript.clone()));
    write_transcript_csv(std::io::stdout(), &transcript)?;
    Ok(())
}
