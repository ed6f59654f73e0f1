//! Every acceptance criterion at its stated tolerance, one line each.
//!
//! Oracles for derived quantities live here and share no code with the
//! library: the Magic Square predicate, a naive strategy enumeration, and an
//! exact binomial tail.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use parmagic::advantage::{completeness, run_soundness_probe, AdversarySpec};
use parmagic::circuit::{
    nand_to_toffoli, random_circuit, random_circuit_with, validate_geometry, GateKind, GridLayout, InputGeometry,
    RandomCircuitOptions,
};
use parmagic::experiments::{run, Command, ExperimentConfig, Overrides};
use parmagic::game::magic::magic_square;
use parmagic::game::{
    brute_force_leakage_value, magic_square_two_bit_protocol, sample_inputs, EnumerationCaps, LineInput, Prob,
};
use parmagic::protocol::{compile, comm_scaling_experiment, execute_protocol, ScalingOptions};
use parmagic::quantum::{measure_magic_square, prepare_resource, run_parmagic, NoiseModel};
use parmagic::rng;
use rand::Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(limit: Duration, took: Duration, what: &str) -> Result<(), String> {
    ensure(took < limit, || format!("{what} took {took:?}, limit {limit:?}"))
}

/// Row parity even, column parity odd, shared cell agrees; `a[i] = (a >> i) & 1`.
fn ms_wins(x: usize, y: usize, a: usize, b: usize) -> bool {
    let bit = |v: usize, i: usize| (v >> i) & 1;
    let par = |v: usize| (bit(v, 0) + bit(v, 1) + bit(v, 2)) % 2;
    a < 8 && b < 8 && par(a) == 0 && par(b) == 1 && bit(a, y) == bit(b, x)
}

/// Best deterministic strategy over all `8^3 x 8^3` answer tables, in ninths.
fn naive_classical_value() -> usize {
    let mut best = 0;
    for alice in 0..512usize {
        let rows = [alice & 7, (alice >> 3) & 7, (alice >> 6) & 7];
        // Bob's best column is independent per question
        let total: usize = (0..3)
            .map(|y| (0..8).map(|b| (0..3).filter(|&x| ms_wins(x, y, rows[x], b)).count()).max().unwrap())
            .sum();
        best = best.max(total);
    }
    best
}

fn tail_oracle(n: u64, p: &BigRational, k: u64) -> BigRational {
    let q = BigRational::one() - p;
    let mut sum = BigRational::zero();
    for j in k..=n {
        let mut c = BigInt::one();
        for i in 0..j {
            c = c * BigInt::from(n - i) / BigInt::from(i + 1);
        }
        let mut term = BigRational::from_integer(c);
        for _ in 0..j {
            term *= p;
        }
        for _ in 0..n - j {
            term *= &q;
        }
        sum += term;
    }
    sum
}

fn ratio_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap()
}

fn isqrt(n: usize) -> usize {
    (0..=n).take_while(|k| k * k <= n).last().unwrap()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let out = run(&ExperimentConfig::defaults("value").unwrap()).map_err(|e| e.to_string())?;
    let took = start.elapsed();
    let csv = &out.files["value.csv"];
    let row: Vec<&str> = csv.lines().nth(1).ok_or("empty value.csv")?.split(',').collect();
    ensure(row[2] == "8/9", || format!("value {}", row[2]))?;
    ensure(row[3] == "4096", || format!("{} strategy pairs enumerated, expected 64 x 64", row[3]))?;
    ensure(naive_classical_value() == 8, || "oracle enumeration disagrees".into())?;
    within(Duration::from_secs(1), took, "value")?;
    Ok(format!("value 8/9 over 4096 pairs in {took:.2?}"))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let noise = NoiseModel::noiseless();
    let shots = 10_000;
    for x in 0..3 {
        for y in 0..3 {
            let seed = (3 * x + y) as u64;
            let states = prepare_resource(shots, &noise, seed).map_err(|e| e.to_string())?;
            let mut r = rng::stream(seed, rng::domain::GAME, 0);
            for mut s in states {
                let (a, b) = measure_magic_square(&mut s, x, y, &noise, &mut r).map_err(|e| e.to_string())?;
                ensure(ms_wins(x, y, a, b), || format!("pair ({x}, {y}) lost with a={a} b={b}"))?;
            }
        }
    }
    let n = 10_000;
    for seed in 0..10 {
        let inputs = sample_inputs(&magic_square(), n, 100 + seed).map_err(|e| e.to_string())?;
        let (a, b) = run_parmagic(&inputs, &noise, seed).map_err(|e| e.to_string())?;
        let wins = inputs.pairs().zip(a.iter().zip(&b)).filter(|((x, y), (a, b))| ms_wins(*x, *y, **a, **b)).count();
        ensure(wins == n, || format!("seed {seed}: {wins} of {n}"))?;
    }
    let took = start.elapsed();
    within(Duration::from_secs(60), took, "noiseless completeness")?;
    Ok(format!("90000 shots and 10 x 10^4 games without a loss in {took:.2?}"))
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let (s, logs) = completeness(1000, 0.1, &NoiseModel::new(0.001).unwrap(), 1000, 2024, false).map_err(|e| e.to_string())?;
    let took = start.elapsed();
    ensure(logs.len() == 1000, || "missing rounds".into())?;
    ensure(s.acceptance_rate >= 0.999, || format!("acceptance {}", s.acceptance_rate))?;
    ensure(s.failure_rate <= 0.05, || format!("per-game failure {}", s.failure_rate))?;
    within(Duration::from_secs(300), took, "noisy completeness")?;
    Ok(format!(
        "acceptance {:.4}, per-game failure {:.5} (worst round {:.3}) in {took:.2?}",
        s.acceptance_rate, s.failure_rate, s.max_round_failure_rate
    ))
}

fn criterion_4() -> Outcome {
    let mut pick = rng::stream(4, rng::domain::TRIAL, 0);
    let mut max_ratio: BTreeMap<usize, f64> = BTreeMap::new();
    for k in 0..200u64 {
        let depth = 1 + (k as usize % 16);
        let n = pick.gen_range(1..=32);
        let mut opts = RandomCircuitOptions::new(n, depth, 1, GateKind::Nand, k);
        opts.randomness_wires = if k % 5 == 0 { 1.min(2 * n - 1) } else { 0 };
        let source = random_circuit_with(&opts).map_err(|e| e.to_string())?;
        let target = nand_to_toffoli(&source).map_err(|e| format!("circuit {k}: {e}"))?;
        ensure(validate_geometry(&target).is_empty(), || format!("circuit {k}: output not local"))?;
        let inputs = source.data_wires().len();
        let coins = source.randomness_wires.len();
        let mut r = rng::stream(k, rng::domain::INPUTS, 0);
        for _ in 0..1000 {
            let x: Vec<bool> = (0..inputs).map(|_| r.gen()).collect();
            let c: Vec<bool> = (0..coins).map(|_| r.gen()).collect();
            let want = source.evaluate(&x, &c).map_err(|e| e.to_string())?;
            let got = target.evaluate(&x, &c).map_err(|e| e.to_string())?;
            ensure(want == got, || format!("circuit {k} differs on {x:?}"))?;
        }
        let ratio = target.depth() as f64 / source.depth() as f64;
        let e = max_ratio.entry(depth).or_insert(0.0);
        *e = e.max(ratio);
    }
    let (r8, r16) = (max_ratio[&8], max_ratio[&16]);
    ensure(r8 == r16, || format!("max depth ratio {r8} at d=8, {r16} at d=16"))?;
    let worst = max_ratio.values().cloned().fold(0.0, f64::max);
    Ok(format!("200 circuits x 1000 inputs agree; max depth ratio {r16} at d=8 and d=16, {worst} overall"))
}

fn criterion_5() -> Outcome {
    let mut pick = rng::stream(5, rng::domain::TRIAL, 0);
    let mut worst_bits = 0.0f64;
    let mut worst_mixed = 0;
    for k in 0..200u64 {
        let n = pick.gen_range(1..=64);
        let depth = pick.gen_range(1..=32);
        let mut opts = RandomCircuitOptions::new(n, depth, 1, GateKind::Toffoli, 1000 + k);
        opts.randomness_wires = (k % 3) as usize % (2 * n);
        let circuit = random_circuit_with(&opts).map_err(|e| e.to_string())?;
        let geometry = InputGeometry::Grid(GridLayout::new(1, n).unwrap());
        let spec = compile(&circuit, &geometry).map_err(|e| e.to_string())?;
        worst_mixed = worst_mixed.max(spec.max_mixed_per_layer());
        ensure(spec.max_mixed_per_layer() <= 1, || format!("circuit {k}: {} mixed gates in a layer", spec.max_mixed_per_layer()))?;
        let data = circuit.data_wires().len();
        let coins = circuit.randomness_wires.len();
        let mut r = rng::stream(k, rng::domain::INPUTS, 1);
        for _ in 0..100 {
            let input: Vec<bool> = (0..data).map(|_| r.gen()).collect();
            let c: Vec<bool> = (0..coins).map(|_| r.gen()).collect();
            let (x, y) = spec.split_input(&input).map_err(|e| e.to_string())?;
            let (out, transcript) = execute_protocol(&spec, &x, &y, &c).map_err(|e| e.to_string())?;
            ensure(out == circuit.evaluate(&input, &c).map_err(|e| e.to_string())?, || format!("circuit {k}: protocol output differs"))?;
            let bits = transcript.total_bits();
            ensure(bits <= 2 * depth, || format!("circuit {k}: {bits} bits for depth {depth}"))?;
            worst_bits = worst_bits.max(bits as f64 / depth as f64);
        }
    }
    Ok(format!("200 circuits x 100 inputs match; worst bits/d {worst_bits:.2}, max mixed gates per layer {worst_mixed}"))
}

fn criterion_6() -> Outcome {
    let ns = [16, 64, 256];
    let ds = [4, 8, 16];
    let rows = comm_scaling_experiment(&ScalingOptions::new(2, ns.to_vec(), ds.to_vec(), 0)).map_err(|e| e.to_string())?;
    ensure(rows.len() == 9, || "missing cells".into())?;
    let mut cells = BTreeMap::new();
    for r in &rows {
        let bound = 2 * r.depth * isqrt(r.n);
        ensure(r.bound_bits == bound, || format!("bound column {} for n={} d={}", r.bound_bits, r.n, r.depth))?;
        ensure(r.measured_bits <= bound, || format!("n={} d={}: {} bits > {bound}", r.n, r.depth, r.measured_bits))?;
        cells.insert((r.n, r.depth), r.measured_bits as f64 / r.depth as f64);
    }
    for d in ds {
        let per_d: Vec<f64> = ns.iter().map(|&n| cells[&(n, d)]).collect();
        ensure(per_d.windows(2).all(|w| w[0] < w[1]), || format!("measured/d at d={d} is not increasing in n: {per_d:?}"))?;
    }
    let fmt: Vec<String> = rows.iter().map(|r| format!("{}/{}", r.measured_bits, r.bound_bits)).collect();
    Ok(format!("bits/bound by (n, d): {}", fmt.join(" ")))
}

fn criterion_7() -> Outcome {
    let game = magic_square();
    let caps = EnumerationCaps::default();
    let mut values = Vec::new();
    let mut c1_time = Duration::ZERO;
    for c in 0..=2 {
        let start = Instant::now();
        let v = brute_force_leakage_value(&game, c, &caps).map_err(|e| e.to_string())?;
        if c == 1 {
            c1_time = start.elapsed();
        }
        values.push(v.value);
    }
    ensure(values.windows(2).all(|w| w[0] <= w[1]), || format!("not monotone: {values:?}"))?;
    ensure(values[0] == Prob::new(8, 9), || format!("c=0 gives {}", values[0]))?;
    ensure(values[2] == Prob::new(1, 1), || format!("c=2 gives {}", values[2]))?;
    let protocol = magic_square_two_bit_protocol([0, 0, 0]);
    ensure(protocol.budget == 2, || "constructive protocol uses more than 2 bits".into())?;
    for x in 0..3 {
        for y in 0..3 {
            let (a, b) = (protocol.alice[x], protocol.bob_answer(y, protocol.messages[x]));
            ensure(ms_wins(x, y, a, b), || format!("constructive protocol loses ({x}, {y})"))?;
        }
    }
    within(Duration::from_secs(300), c1_time, "c=1 enumeration")?;
    Ok(format!("values {} {} {} for c = 0, 1, 2; c=1 in {c1_time:.2?}", values[0], values[1], values[2]))
}

fn criterion_8() -> Outcome {
    let spec = AdversarySpec::best_classical().map_err(|e| e.to_string())?;
    let p = BigRational::new(8.into(), 9.into());
    let mut tails = Vec::new();
    let mut lines = Vec::new();
    for n in [50usize, 100, 200] {
        let threshold = (9 * n).div_ceil(10) as u64;
        let exact = tail_oracle(n as u64, &p, threshold);
        let r = run_soundness_probe(&spec, n, 0.1, 4000, 8).map_err(|e| e.to_string())?;
        ensure(r.threshold as u64 == threshold, || format!("n={n}: threshold {}", r.threshold))?;
        let e = ratio_f64(&exact);
        ensure(r.ci_low <= e && e <= r.ci_high, || format!("n={n}: exact {e:.4} outside [{:.4}, {:.4}]", r.ci_low, r.ci_high))?;
        lines.push(format!("n={n} {:.4} vs {e:.4}", r.acceptance_rate));
        tails.push(exact);
    }
    ensure(tails.windows(2).all(|w| w[0] > w[1]), || "exact tail not strictly decreasing".into())?;
    Ok(lines.join(", "))
}

fn small_configs() -> Vec<ExperimentConfig> {
    let mk = |name: &str, f: Overrides| {
        let mut c = ExperimentConfig::defaults(name).unwrap();
        c.apply(&f).unwrap();
        c
    };
    let mut value = ExperimentConfig::defaults("value").unwrap();
    if let Command::Value { leakage, .. } = &mut value.command {
        *leakage = vec![0, 1];
    }
    vec![
        value,
        mk("shots", Overrides { n: Some(vec![500]), epsilon: Some(vec![0.01]), seed: Some(3), ..Default::default() }),
        mk("completeness", Overrides { n: Some(vec![100]), epsilon: Some(vec![0.0, 0.01]), trials: Some(20), seed: Some(4), ..Default::default() }),
        mk("round", Overrides { n: Some(vec![64]), trials: Some(5), seed: Some(5), two_process: true, ..Default::default() }),
        mk("scaling", Overrides { n: Some(vec![16, 64]), depth: Some(vec![4, 8]), trials: Some(3), seed: Some(6), ..Default::default() }),
        mk("probe", Overrides { n: Some(vec![20, 40]), trials: Some(50), seed: Some(7), ..Default::default() }),
        mk("probe", Overrides { adversary: Some("random-nand:3".into()), n: Some(vec![10]), trials: Some(20), ..Default::default() }),
        mk("parbell", Overrides { n: Some(vec![100]), trials: Some(10), seed: Some(8), ..Default::default() }),
    ]
}

fn criterion_9() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut files = 0;
    for (i, cfg) in small_configs().into_iter().enumerate() {
        let first_dir = dir.path().join(format!("{i}-a"));
        let first = run(&cfg).map_err(|e| format!("{}: {e}", cfg.command.name()))?;
        first.write_to(&first_dir, &cfg).map_err(|e| e.to_string())?;
        let reloaded = ExperimentConfig::load(&first_dir.join("config.json")).map_err(|e| e.to_string())?;
        ensure(reloaded == cfg, || format!("{}: config changed on reload", cfg.command.name()))?;
        let second_dir = dir.path().join(format!("{i}-b"));
        run(&reloaded).map_err(|e| e.to_string())?.write_to(&second_dir, &reloaded).map_err(|e| e.to_string())?;
        for name in first.files.keys() {
            let a = std::fs::read(first_dir.join(name)).map_err(|e| e.to_string())?;
            let b = std::fs::read(second_dir.join(name)).map_err(|e| e.to_string())?;
            ensure(a == b, || format!("{}: {name} differs on rerun", cfg.command.name()))?;
            files += 1;
        }
    }
    Ok(format!("{files} output files reproduced byte for byte across 7 subcommands"))
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("exact classical value", criterion_1),
        ("noiseless completeness", criterion_2),
        ("noisy completeness", criterion_3),
        ("transpiler equivalence", criterion_4),
        ("compiler equivalence and cost", criterion_5),
        ("2D communication scaling", criterion_6),
        ("leakage value curve", criterion_7),
        ("soundness probe vs binomial tail", criterion_8),
        ("determinism from serialized config", criterion_9),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail}", i + 1),
            Err(why) => {
                println!("criterion {}: FAIL {name}: {why}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

#[test]
fn sanity_of_the_oracles() {
    let inputs = LineInput::trits(vec![0], vec![0]).unwrap();
    assert_eq!(inputs.n(), 1);
    assert!(ms_wins(0, 0, 0, 4) && !ms_wins(0, 0, 0, 1));
    let half = BigRational::new(1.into(), 2.into());
    assert_eq!(tail_oracle(3, &half, 2), BigRational::new(1.into(), 2.into()));
    assert_eq!(isqrt(256), 16);
    assert_eq!(isqrt(63), 7);
    let _ = random_circuit(2, 1, 1, GateKind::Nand, 0).unwrap();
}
