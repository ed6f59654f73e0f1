use std::path::Path;
use std::process::{Command, Output};

fn parmagic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_parmagic")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn read(dir: &Path, file: &str) -> String {
    std::fs::read_to_string(dir.join(file)).unwrap()
}

#[test]
fn value_prints_eight_ninths() {
    let o = parmagic(&["value"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("magic-square,0,8/9,4096"));
    let o = parmagic(&["value", "--leakage", "2"]);
    assert!(stdout(&o).contains("magic-square,2,1,"));
}

#[test]
fn constant_true_game_file() {
    let dir = tempfile::tempdir().unwrap();
    let game = dir.path().join("always.txt");
    std::fs::write(&game, "# one question, always won\nbellgame 1 1 1 1\npi 0 0 1\n0 0 0 0 1\n").unwrap();
    let o = parmagic(&["value", "--game", game.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("always,0,1,"));
    std::fs::write(&game, "bellgame 1 1 1 1\n").unwrap();
    assert_eq!(parmagic(&["value", "--game", game.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn exit_codes() {
    assert_eq!(parmagic(&["value", "--cap", "5"]).status.code(), Some(3));
    assert_eq!(parmagic(&["round", "--delta", "0.5"]).status.code(), Some(2));
    assert_eq!(parmagic(&["value", "--depth", "3"]).status.code(), Some(2));
    assert_eq!(parmagic(&["parbell", "--delta", "0.2", "--n", "10", "--trials", "1"]).status.code(), Some(2));
    assert_eq!(parmagic(&["probe", "--adversary", "nobody"]).status.code(), Some(2));
    assert_eq!(parmagic(&["value", "--config", "/nonexistent.json"]).status.code(), Some(2));
}

#[test]
fn saved_config_reruns_identically() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    let o = parmagic(&[
        "completeness", "--n", "80", "--trials", "6", "--epsilon", "0.01", "--seed", "12", "--save-config", cfg.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(parmagic(&["completeness", "--config", cfg.to_str().unwrap(), "--out", a.to_str().unwrap()]).status.code(), Some(0));
    assert_eq!(parmagic(&["completeness", "--config", cfg.to_str().unwrap(), "--out", b.to_str().unwrap()]).status.code(), Some(0));
    for f in ["completeness.csv", "rounds.jsonl"] {
        assert_eq!(read(&a, f), read(&b, f));
    }
    assert!(read(&a, "completeness.csv").starts_with("n,delta,epsilon,rounds,accepted"));
    // flags override the file
    let c = dir.path().join("c");
    parmagic(&["completeness", "--config", cfg.to_str().unwrap(), "--seed", "13", "--out", c.to_str().unwrap()]);
    assert!(read(&c, "config.json").contains("\"seed\": 13"));
    assert!(read(&c, "config.json").contains("\"rounds\": 6"));
    assert_eq!(parmagic(&["value", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn two_process_modes_match_in_process() {
    let dir = tempfile::tempdir().unwrap();
    for (sub, file, extra) in [
        ("scaling", "scaling.csv", vec!["--n", "16,64", "--depth", "4", "--trials", "2"]),
        ("round", "rounds.jsonl", vec!["--n", "40", "--trials", "3"]),
    ] {
        let (a, b) = (dir.path().join(format!("{sub}-a")), dir.path().join(format!("{sub}-b")));
        let mut args = vec![sub, "--out", a.to_str().unwrap()];
        args.extend(&extra);
        assert_eq!(parmagic(&args).status.code(), Some(0));
        let mut args = vec![sub, "--two-process", "--out", b.to_str().unwrap()];
        args.extend(&extra);
        assert_eq!(parmagic(&args).status.code(), Some(0));
        assert_eq!(read(&a, file), read(&b, file));
    }
}

#[test]
fn adversary_from_strategy_file() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("fixed.txt");
    std::fs::write(&file, "strategy\nalice 0 0\nalice 1 0\nalice 2 0\nbob 0 4\nbob 1 4\nbob 2 4\n").unwrap();
    let o = parmagic(&["probe", "--adversary", file.to_str().unwrap(), "--n", "10", "--trials", "20"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("fixed,10,0.100000,9,20,"));
    assert!(stdout(&o).contains(",2/3,"));
}

#[test]
fn parbell_classical_mode() {
    let o = parmagic(&["parbell", "--no-plugin", "--n", "900", "--trials", "10", "--delta", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let row = stdout(&o).lines().find(|l| l.starts_with("magic-square,classical")).unwrap().to_string();
    let win_rate: f64 = row.split(',').nth(13).unwrap().parse().unwrap();
    assert!((win_rate - 8.0 / 9.0).abs() < 0.01, "{row}");
}
