//! Build a small 1D circuit, check its locality, store it as JSON and
//! evaluate it.

use parmagic::circuit::{random_circuit, validate_geometry, Gate, GateKind, LayeredCircuit};

fn main() -> parmagic::Result<()> {
    let c = LayeredCircuit::line(4, vec![vec![Gate::toffoli(0, 1, 2)], vec![Gate::nand(3, 2)]]);
    println!("{}", c.to_json_pretty());
    println!("outputs on 1111: {:?}", c.evaluate(&[true; 4], &[])?);

    let far = LayeredCircuit::line(4, vec![vec![Gate::nand(0, 3)]]);
    for v in validate_geometry(&far).violations {
        println!("rejected: {}", v.message);
    }

    let r = random_circuit(16, 6, 2, GateKind::Toffoli, 5)?;
    let back = LayeredCircuit::from_json(&r.to_json())?;
    assert_eq!(back, r);
    println!("random 2D circuit: {} wires, {} gates, local: {}", r.wire_count(), r.gate_count(), validate_geometry(&r).is_empty());
    Ok(())
}
