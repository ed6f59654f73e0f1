//! The honest quantum strategy on every question pair, then many parallel
//! games with and without gate noise.

use parmagic::game::magic::{format_answer, magic_square, predicate};
use parmagic::game::{count_satisfied, sample_inputs};
use parmagic::quantum::{measure_magic_square, prepare_resource, run_parmagic, NoiseModel};
use parmagic::rng;

fn main() -> parmagic::Result<()> {
    let noise = NoiseModel::noiseless();
    let mut r = rng::stream(1, rng::domain::GAME, 0);
    for x in 0..3 {
        for y in 0..3 {
            let mut state = prepare_resource(1, &noise, 1)?.remove(0);
            let (a, b) = measure_magic_square(&mut state, x, y, &noise, &mut r)?;
            println!("x={x} y={y}: a={} b={} wins={}", format_answer(a), format_answer(b), predicate(x, y, a, b));
        }
    }

    let game = magic_square();
    let inputs = sample_inputs(&game, 10_000, 3)?;
    for eps in [0.0, 0.001, 0.01] {
        let (a, b) = run_parmagic(&inputs, &NoiseModel::new(eps)?, 3)?;
        println!("epsilon {eps}: {} of {} games won", count_satisfied(&game, &inputs, &a, &b)?, inputs.n());
    }
    Ok(())
}
