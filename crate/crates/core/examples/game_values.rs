//! Exact values of the Magic Square game: classical, with leakage, and a
//! lower bound for two parallel copies.

use parmagic::game::magic::{format_answer, magic_square};
use parmagic::game::{
    best_response_search, brute_force_classical_value, brute_force_leakage_value, EnumerationCaps,
};

fn main() -> parmagic::Result<()> {
    let game = magic_square();
    let caps = EnumerationCaps::default();

    let classical = brute_force_classical_value(&game, &caps)?;
    println!("classical value {} over {} strategy pairs", classical.value, classical.pairs_enumerated);
    let rows: Vec<String> = classical.strategy.alice.iter().map(|&a| format_answer(a)).collect();
    let cols: Vec<String> = classical.strategy.bob.iter().map(|&b| format_answer(b)).collect();
    println!("  rows {rows:?}, columns {cols:?}");

    for c in 0..=2 {
        let v = brute_force_leakage_value(&game, c, &caps)?;
        println!("{c} bits of leakage: {} ({} evaluations)", v.value, v.work);
    }

    let two = best_response_search(&game, 2, 4, 7, &caps)?;
    println!("two copies: value at least {}", two.lower_bound);
    Ok(())
}
