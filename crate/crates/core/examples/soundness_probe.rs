//! Classical adversaries against the verifier, next to the exact binomial
//! tail of their per-game win probability.

use parmagic::advantage::{run_soundness_probe, AdversarySpec};

fn main() -> parmagic::Result<()> {
    let adversaries = [
        AdversarySpec::best_classical()?,
        AdversarySpec::fixed_parity(),
        AdversarySpec::two_bit_leakage(),
    ];
    for spec in &adversaries {
        for n in [50, 100, 200] {
            let r = run_soundness_probe(spec, n, 0.1, 2000, 1)?;
            println!(
                "{:>16} n={n:<3} accepted {:.4} [{:.4}, {:.4}] exact {:?}, {} bits",
                r.adversary, r.acceptance_rate, r.ci_low, r.ci_high, r.exact_acceptance, r.metadata.communication_bits
            );
        }
    }
    let circuit = AdversarySpec::random_nand(50, 6, 3)?;
    let r = run_soundness_probe(&circuit, 50, 0.1, 200, 1)?;
    println!(
        "{}: accepted {}, {} bits across the cut (bound {:?})",
        r.adversary, r.accepted, r.metadata.communication_bits, r.metadata.communication_bound
    );
    Ok(())
}
