use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circuit::{
    is_x_site, nand_to_toffoli, random_circuit, validate_geometry, GateKind, InputGeometry, LayeredCircuit,
    WireRole,
};
use crate::error::{domain, Result};
use crate::game::magic::{magic_square, parse_answer};
use crate::game::text::parse_strategy;
use crate::game::{
    brute_force_classical_value, magic_square_two_bit_protocol, DeterministicStrategy, EnumerationCaps,
    LeakageProtocol, LineInput, Prob,
};
use crate::protocol::compile;
use crate::rng;
use crate::stats::{big, binomial_tail, clopper_pearson, to_f64};

use super::message::{protocol_delta, verifier_round, PaddedMessage};
use super::round::round_seed;
use super::verify::verify_exact;

/// A classical prover.
///
/// A circuit adversary for `n` games has `4n` data wires, the `2n` bits of
/// `x` (2 bits per trit, high bit first) on the `x` side of the cut
/// followed by the `2n` bits of `y`, and `6n` outputs: `a_1 .. a_n` then
/// `b_1 .. b_n`, three bits each, entry 0 first.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Adversary {
    Circuit { circuit: LayeredCircuit },
    Leakage { protocol: LeakageProtocol },
    StrategyTable { strategy: DeterministicStrategy },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdversarySpec {
    pub name: String,
    #[serde(flatten)]
    pub adversary: Adversary,
}

/// Resources of an adversary on `n` games.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdversaryMetadata {
    pub kind: String,
    /// Depth of the circuit as given.
    pub depth: Option<usize>,
    /// Depth after transpiling NAND gates.
    pub toffoli_depth: Option<usize>,
    /// Bits exchanged across the cut on one run.
    pub communication_bits: usize,
    /// `2 * toffoli_depth` for circuits.
    pub communication_bound: Option<usize>,
    pub max_mixed_per_layer: Option<usize>,
    /// Exact per-game win probability for game-wise adversaries.
    pub per_game_win: Option<String>,
}

impl AdversarySpec {
    pub fn new(name: impl Into<String>, adversary: Adversary) -> Self {
        Self {
            name: name.into(),
            adversary,
        }
    }

    /// Replays the lexicographically smallest optimal deterministic
    /// strategy in every game.
    pub fn best_classical() -> Result<Self> {
        let v = brute_force_classical_value(&magic_square(), &EnumerationCaps::default())?;
        Ok(Self::new("best-classical", Adversary::StrategyTable { strategy: v.strategy }))
    }

    /// Alice always answers `000`, Bob always `001`.
    pub fn fixed_parity() -> Self {
        let (a, b) = (parse_answer("000").expect("literal"), parse_answer("001").expect("literal"));
        Self::new(
            "fixed-parity",
            Adversary::StrategyTable {
                strategy: DeterministicStrategy {
                    alice: vec![a; 3],
                    bob: vec![b; 3],
                },
            },
        )
    }

    /// Two bits per game from Alice to Bob; wins every game.
    pub fn two_bit_leakage() -> Self {
        Self::new(
            "two-bit-leakage",
            Adversary::Leakage {
                protocol: magic_square_two_bit_protocol([0; 3]),
            },
        )
    }

    /// A depth-0 circuit winning with probability 8/9 per game: Alice
    /// outputs `(0, h, h)` with `h` the high bit of her trit, Bob `(0, 0, 1)`.
    pub fn depth_zero_circuit(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(domain("at least one game is required"));
        }
        let mut wires: Vec<Vec<i64>> = (0..2 * n as i64).map(|k| vec![-1 - k]).collect();
        wires.extend((0..2 * n as i64).map(|k| vec![k]));
        let zero_a = wires.len();
        wires.push(vec![-1]);
        let zero_b = wires.len();
        wires.push(vec![0]);
        let one_b = wires.len();
        wires.push(vec![0]);
        let mut c = LayeredCircuit::new(1, wires, Vec::new());
        c.constants = vec![(zero_a, 0), (zero_b, 0), (one_b, 1)];
        for i in 0..n {
            c.outputs.extend([zero_a, 2 * i, 2 * i]);
        }
        for _ in 0..n {
            c.outputs.extend([zero_b, zero_b, one_b]);
        }
        Ok(Self::new("depth-zero", Adversary::Circuit { circuit: c }))
    }

    /// A random 1D NAND circuit of the given depth over the `4n` input bits,
    /// reading answers off the input register positions.
    pub fn random_nand(n: usize, depth: usize, seed: u64) -> Result<Self> {
        let mut c = random_circuit(2 * n, depth, 1, GateKind::Nand, seed)?;
        for side in [0, 2 * n] {
            for i in 0..n {
                let (p, q) = (side + 2 * i, side + 2 * i + 1);
                c.outputs.extend([p, q, q]);
            }
        }
        Ok(Self::new(format!("random-nand-d{depth}"), Adversary::Circuit { circuit: c }))
    }

    /// A built-in adversary by name: `best-classical`, `fixed-parity`,
    /// `two-bit-leakage`, `depth-zero` or `random-nand:<depth>`.
    pub fn builtin(name: &str, n: usize, seed: u64) -> Result<Self> {
        match name {
            "best-classical" => Self::best_classical(),
            "fixed-parity" => Ok(Self::fixed_parity()),
            "two-bit-leakage" => Ok(Self::two_bit_leakage()),
            "depth-zero" => Self::depth_zero_circuit(n),
            _ => match name.strip_prefix("random-nand:").map(str::parse::<usize>) {
                Some(Ok(d)) => Self::random_nand(n, d, rng::derive_seed(seed, n as u64)),
                _ => Err(domain(format!("unknown adversary {name:?}"))),
            },
        }
    }

    /// Parse an adversary file: a tagged adversary JSON object, a bare
    /// circuit JSON object, or a strategy table in text form.
    pub fn parse(name: &str, text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            if let Ok(spec) = serde_json::from_str::<AdversarySpec>(text) {
                return Ok(spec);
            }
            let circuit = LayeredCircuit::from_json(text)?;
            return Ok(Self::new(name, Adversary::Circuit { circuit }));
        }
        let strategy = parse_strategy(text, &magic_square())?;
        Ok(Self::new(name, Adversary::StrategyTable { strategy }))
    }

    /// Check the adversary against `n` games.
    pub fn check(&self, n: usize) -> Result<()> {
        match &self.adversary {
            Adversary::StrategyTable { strategy } => strategy.check(&magic_square()),
            Adversary::Leakage { protocol } => protocol.check(&magic_square()),
            Adversary::Circuit { circuit } => {
                circuit.check_structure()?;
                let report = validate_geometry(circuit);
                if let Some(v) = report.violations.first() {
                    return Err(domain(format!("adversary circuit is not geometrically local: {}", v.message)));
                }
                let data = circuit.data_wires();
                if data.len() != 4 * n {
                    return Err(domain(format!("circuit has {} data wires, {n} games need {}", data.len(), 4 * n)));
                }
                let sides_ok = data.iter().enumerate().all(|(k, &w)| is_x_site(&circuit.wires[w]) == (k < 2 * n));
                if !sides_ok {
                    return Err(domain("the first 2n data wires must hold x, on the x side of the cut"));
                }
                if circuit.output_wires().len() != 6 * n {
                    return Err(domain(format!("circuit has {} outputs, expected {}", circuit.output_wires().len(), 6 * n)));
                }
                Ok(())
            }
        }
    }

    pub fn per_game_win(&self) -> Result<Option<Prob>> {
        let g = magic_square();
        Ok(match &self.adversary {
            Adversary::StrategyTable { strategy } => Some(strategy.win_probability(&g)?),
            Adversary::Leakage { protocol } => Some(protocol.win_probability(&g)?),
            Adversary::Circuit { .. } => None,
        })
    }

    pub fn metadata(&self, n: usize) -> Result<AdversaryMetadata> {
        self.check(n)?;
        let per_game_win = self.per_game_win()?.map(|p| p.to_string());
        Ok(match &self.adversary {
            Adversary::StrategyTable { .. } => AdversaryMetadata {
                kind: "strategy-table".into(),
                per_game_win,
                ..Default::default()
            },
            Adversary::Leakage { protocol } => AdversaryMetadata {
                kind: "leakage".into(),
                communication_bits: protocol.budget as usize * n,
                per_game_win,
                ..Default::default()
            },
            Adversary::Circuit { circuit } => {
                let toffoli = if circuit.layers.iter().flatten().any(|g| g.kind == GateKind::Nand) {
                    nand_to_toffoli(circuit)?
                } else {
                    circuit.clone()
                };
                let geometry = InputGeometry::Line { bits_per_side: 2 * n };
                let geometry = if circuit.dimension == 1 {
                    geometry
                } else {
                    return Err(domain("only 1D circuit adversaries are metered"));
                };
                let spec = compile(&toffoli, &geometry)?;
                AdversaryMetadata {
                    kind: "circuit".into(),
                    depth: Some(circuit.depth()),
                    toffoli_depth: Some(toffoli.depth()),
                    communication_bits: spec.predicted_bits(),
                    communication_bound: Some(2 * toffoli.depth()),
                    max_mixed_per_layer: Some(spec.max_mixed_per_layer()),
                    per_game_win,
                }
            }
        })
    }

    /// Answers to one padded message; `rng` feeds randomness wires.
    pub fn answer<R: Rng + ?Sized>(&self, message: &PaddedMessage, rng: &mut R) -> Result<(Vec<usize>, Vec<usize>)> {
        let inputs = message.inputs();
        let n = inputs.n();
        match &self.adversary {
            Adversary::StrategyTable { strategy } => Ok((
                inputs.xs.iter().map(|&x| strategy.alice[x]).collect(),
                inputs.ys.iter().map(|&y| strategy.bob[y]).collect(),
            )),
            Adversary::Leakage { protocol } => Ok((
                inputs.xs.iter().map(|&x| protocol.alice[x]).collect(),
                inputs
                    .pairs()
                    .map(|(x, y)| protocol.bob_answer(y, protocol.messages[x]))
                    .collect(),
            )),
            Adversary::Circuit { circuit } => {
                let mut bits = inputs.x_bits(2);
                bits.extend(inputs.y_bits(2));
                let randomness: Vec<bool> = circuit
                    .roles()
                    .iter()
                    .filter(|r| **r == WireRole::Randomness)
                    .map(|_| rng.gen())
                    .collect();
                let out = circuit.evaluate(&bits, &randomness)?;
                let vals: Vec<usize> = out
                    .chunks(3)
                    .map(|c| c.iter().enumerate().fold(0, |acc, (i, &b)| acc | (usize::from(b) << i)))
                    .collect();
                Ok((vals[..n].to_vec(), vals[n..].to_vec()))
            }
        }
    }
}

/// Empirical acceptance of an adversary against the verifier.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbeResult {
    pub adversary: String,
    pub n: usize,
    pub delta: f64,
    pub threshold: usize,
    pub trials: usize,
    pub accepted: usize,
    pub acceptance_rate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    /// `Pr[Bin(n, p) >= threshold]` when the per-game win probability `p`
    /// is known exactly.
    pub exact_acceptance: Option<f64>,
    pub metadata: AdversaryMetadata,
}

/// Play `trials` independent rounds against the adversary. Trial `t` uses
/// the verifier randomness of round `t` and adversary stream `(seed, ADVERSARY, t)`.
pub fn run_soundness_probe(adversary: &AdversarySpec, n: usize, delta: f64, trials: usize, seed: u64) -> Result<ProbeResult> {
    if trials == 0 {
        return Err(domain("at least one trial is required"));
    }
    let d = protocol_delta(delta)?;
    let metadata = adversary.metadata(n)?;
    let verdicts: Vec<(bool, usize)> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let (message, inputs): (PaddedMessage, LineInput) = verifier_round(n, delta, round_seed(seed, t))?;
            let mut r = rng::stream(seed, rng::domain::ADVERSARY, t);
            let (a, b) = adversary.answer(&message, &mut r)?;
            let v = verify_exact(&inputs, &a, &b, &d)?;
            Ok((v.accept, v.threshold))
        })
        .collect::<Result<_>>()?;
    let accepted = verdicts.iter().filter(|v| v.0).count();
    let threshold = verdicts[0].1;
    let (ci_low, ci_high) = clopper_pearson(accepted as u64, trials as u64, 0.95)?;
    let exact_acceptance = match adversary.per_game_win()? {
        Some(p) => Some(to_f64(&binomial_tail(n as u64, &big(p), threshold as u64)?)),
        None => None,
    };
    Ok(ProbeResult {
        adversary: adversary.name.clone(),
        n,
        delta,
        threshold,
        trials,
        accepted,
        acceptance_rate: accepted as f64 / trials as f64,
        ci_low,
        ci_high,
        exact_acceptance,
        metadata,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::magic;

    /// Per-game win rate of a circuit adversary over all 9 question pairs.
    fn circuit_table_value(spec: &AdversarySpec) -> usize {
        let mut wins = 0;
        for x in 0..3 {
            for y in 0..3 {
                let m = PaddedMessage::pad(&LineInput::trits(vec![x], vec![y]).unwrap()).unwrap();
                let (a, b) = spec.answer(&m, &mut rng::stream(0, 0, 0)).unwrap();
                wins += usize::from(magic::predicate(x, y, a[0], b[0]));
            }
        }
        wins
    }

    #[test]
    fn depth_zero_circuit_wins_eight_of_nine() {
        let spec = AdversarySpec::depth_zero_circuit(1).unwrap();
        assert_eq!(circuit_table_value(&spec), 8);
        let m = spec.metadata(1).unwrap();
        assert_eq!((m.depth, m.communication_bits), (Some(0), 0));
    }

    #[test]
    fn builtin_win_probabilities() {
        assert_eq!(AdversarySpec::best_classical().unwrap().per_game_win().unwrap(), Some(Prob::new(8, 9)));
        assert_eq!(AdversarySpec::two_bit_leakage().per_game_win().unwrap(), Some(Prob::new(1, 1)));
        // 000 / 001 agree unless x = 2
        assert_eq!(AdversarySpec::fixed_parity().per_game_win().unwrap(), Some(Prob::new(2, 3)));
    }

    #[test]
    fn leakage_adversary_always_accepted() {
        let r = run_soundness_probe(&AdversarySpec::two_bit_leakage(), 30, 0.0, 20, 1).unwrap();
        assert_eq!(r.accepted, 20);
        assert_eq!(r.metadata.communication_bits, 60);
    }

    #[test]
    fn random_nand_metadata_respects_bound() {
        for d in [1, 4, 8] {
            let spec = AdversarySpec::builtin(&format!("random-nand:{d}"), 10, 5).unwrap();
            let m = spec.metadata(10).unwrap();
            assert_eq!(m.toffoli_depth, Some(3 * d));
            assert!(m.communication_bits <= m.communication_bound.unwrap());
            run_soundness_probe(&spec, 10, 0.1, 5, 0).unwrap();
        }
    }

    #[test]
    fn wrong_size_and_non_local_circuits_rejected() {
        let spec = AdversarySpec::depth_zero_circuit(2).unwrap();
        assert!(run_soundness_probe(&spec, 3, 0.1, 1, 0).is_err());
        let Adversary::Circuit { mut circuit } = spec.adversary else { unreachable!() };
        circuit.layers.push(vec![crate::circuit::Gate::nand(0, 7)]);
        assert!(AdversarySpec::new("far", Adversary::Circuit { circuit }).check(2).is_err());
    }

    #[test]
    fn parse_round_trips() {
        let spec = AdversarySpec::depth_zero_circuit(2).unwrap();
        let json = serde_json::to_string(&spec).unwrap();
        assert_eq!(AdversarySpec::parse("x", &json).unwrap(), spec);
        let Adversary::Circuit { circuit } = &spec.adversary else { unreachable!() };
        assert_eq!(AdversarySpec::parse("bare", &circuit.to_json()).unwrap().adversary, spec.adversary);
        let text = crate::game::text::write_strategy(&DeterministicStrategy { alice: vec![0; 3], bob: vec![4; 3] });
        assert_eq!(AdversarySpec::parse("t", &text).unwrap().adversary, AdversarySpec::fixed_parity().adversary);
    }

    #[test]
    fn probe_is_reproducible() {
        let spec = AdversarySpec::best_classical().unwrap();
        assert_eq!(run_soundness_probe(&spec, 50, 0.1, 100, 4).unwrap(), run_soundness_probe(&spec, 50, 0.1, 100, 4).unwrap());
    }
}
