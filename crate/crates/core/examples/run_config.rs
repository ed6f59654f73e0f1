//! Resolve an experiment config, run it, save it, and rerun it from disk.

use parmagic::experiments::{run, ExperimentConfig, Overrides};

fn main() -> parmagic::Result<()> {
    let dir = std::env::temp_dir().join("parmagic-run-config");
    let flags = Overrides {
        n: Some(vec![64]),
        trials: Some(50),
        seed: Some(21),
        out: Some(dir.clone()),
        ..Default::default()
    };
    let cfg = ExperimentConfig::resolve("completeness", None, &flags)?;
    let first = run(&cfg)?;
    first.write_to(&dir, &cfg)?;

    let again = ExperimentConfig::load(&dir.join("config.json"))?;
    assert_eq!(run(&again)?, first);
    for line in &first.summary {
        println!("{line}");
    }
    println!("outputs in {}", dir.display());
    Ok(())
}
