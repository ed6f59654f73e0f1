//! Rewrite a random 1D NAND circuit as a Toffoli circuit and compare them
//! on random inputs.

use parmagic::circuit::{nand_to_toffoli, random_circuit, validate_geometry, GateKind};
use parmagic::rng;
use rand::Rng;

fn main() -> parmagic::Result<()> {
    let source = random_circuit(16, 8, 1, GateKind::Nand, 11)?;
    let target = nand_to_toffoli(&source)?;
    println!(
        "NAND depth {} with {} wires -> Toffoli depth {} with {} wires, local: {}",
        source.depth(),
        source.wire_count(),
        target.depth(),
        target.wire_count(),
        validate_geometry(&target).is_empty()
    );
    let mut r = rng::stream(11, rng::domain::INPUTS, 0);
    let inputs = source.data_wires().len();
    for _ in 0..1000 {
        let x: Vec<bool> = (0..inputs).map(|_| r.gen()).collect();
        assert_eq!(source.evaluate(&x, &[])?, target.evaluate(&x, &[])?);
    }
    println!("agree on 1000 random inputs");
    Ok(())
}
