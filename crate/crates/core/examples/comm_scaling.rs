//! Communication of compiled random circuits on a 2D lattice against
//! `2 d n^(1/2)`.

use parmagic::protocol::{comm_scaling_experiment, ScalingOptions};

fn main() -> parmagic::Result<()> {
    let rows = comm_scaling_experiment(&ScalingOptions::new(2, vec![16, 64, 256], vec![4, 8, 16], 0))?;
    println!("{:>4} {:>3} {:>9} {:>6} {:>6}", "n", "d", "cut pairs", "bits", "bound");
    for r in rows {
        println!("{:>4} {:>3} {:>9} {:>6} {:>6}", r.n, r.depth, r.cut_pairs, r.measured_bits, r.bound_bits);
    }
    Ok(())
}
