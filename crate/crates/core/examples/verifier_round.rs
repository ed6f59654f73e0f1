//! One verifier round: padded message, honest prover with a noisy swap
//! network, threshold check.

use parmagic::advantage::{honest_prover, run_round_framed, verifier_round, verify};
use parmagic::quantum::NoiseModel;

fn main() -> parmagic::Result<()> {
    let (small, _) = verifier_round(4, 0.1, 2)?;
    println!("message {small}");

    let (message, inputs) = verifier_round(1000, 0.1, 2)?;
    for eps in [0.0, 0.001, 0.05] {
        let (a, b) = honest_prover(&message, &NoiseModel::new(eps)?, 2)?;
        let v = verify(&inputs, &a, &b, 0.1)?;
        println!("epsilon {eps}: {} of 1000 won, threshold {}, accept {}", v.win_count, v.threshold, v.accept);
    }

    let (log, _) = run_round_framed(0, 500, 0.1, &NoiseModel::new(0.001)?, 9)?;
    println!("{}", serde_json::to_string(&log)?);
    Ok(())
}
