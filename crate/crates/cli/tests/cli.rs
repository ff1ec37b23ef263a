use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_shogi-reach"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).env_remove("SHOGI_REACH_WORKERS").env_remove("SHOGI_REACH_CHECKPOINT_DIR").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn count_prints_exact_totals() {
    let o = run(&["count", "--variant", "minishogi"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "16014219505238849250");
    let o = run(&["count", "--variant", "shogi"]);
    assert_eq!(
        stdout(&o).trim(),
        "80880932079767835177773204009328769812438521503800714936366945233084532"
    );
}

#[test]
fn rank_and_unrank_are_inverse() {
    let o = run(&["unrank", "--variant", "minishogi", "--rank", "987654321987654321"]);
    assert!(o.status.success());
    let sfen = stdout(&o).trim().to_string();
    let o = run(&["rank", "--variant", "minishogi", "--sfen", &sfen]);
    assert_eq!(stdout(&o).trim(), "987654321987654321");
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["count"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["unrank", "--variant", "minishogi", "--rank", "16014219505238849250"]).status.code(), Some(3));
    assert_eq!(run(&["rank", "--variant", "shogi", "--sfen", "garbage"]).status.code(), Some(3));
    let o = run(&["check", "--variant", "shogi", "--sfen", "initial", "--max-nodes", "1"]);
    assert_eq!(o.status.code(), Some(4));
    assert_eq!(json(&o)["verdict"], "resourceLimit");
}

#[test]
fn check_reports_verdicts() {
    let o = run(&["check", "--variant", "shogi", "--sfen", "initial", "--witness"]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["verdict"], "reachable");
    assert!(v["witness"]["moves"].as_array().unwrap().len() > 10);
    let o = run(&["check", "--variant", "shogi", "--sfen", "4k4/9/9/9/9/9/9/3g1g3/4K4 b 2r2b2g4s4n4l18p 1"]);
    let v = json(&o);
    assert_eq!(v["verdict"], "unreachableProven");
    assert_eq!(v["maxTraceback"], 0);
}

#[test]
fn prev_lists_predecessors() {
    let o = run(&["prev", "--variant", "shogi", "--sfen", "4k4/9/9/9/9/9/9/3g1g3/4K4 b 2r2b2g4s4n4l18p 1"]);
    assert_eq!(json(&o)["count"], 0);
    let o = run(&["prev", "--variant", "minishogi", "--sfen", "initial"]);
    let v = json(&o);
    assert_eq!(v["count"].as_u64().unwrap() as usize, v["predecessors"].as_array().unwrap().len());
}

#[test]
fn replay_reports_final_position() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("moves.txt");
    fs::write(&f, "# opening\n7g7f 3c3d\n8h2b+\n").unwrap();
    let o = run(&["replay", "--variant", "shogi", "--moves", f.to_str().unwrap()]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["legal"], true);
    assert_eq!(v["plies"], 3);

    fs::write(&f, "7g7f 7g7f").unwrap();
    let o = run(&["replay", "--variant", "shogi", "--moves", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(json(&o)["plies"], 1);

    let table = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/data/shogi_init_to_kk.txt");
    let o = run(&["replay", "--variant", "shogi", "--traditional", "--moves", table]);
    let v = json(&o);
    assert_eq!(v["plies"], 44);
    assert_eq!(v["isKk"], true);
}

#[test]
fn theory_demos_verify() {
    for variant in ["shogi", "minishogi"] {
        for demo in ["init-to-kk", "kk-path", "hand-transfer"] {
            let o = run(&["theory", "--variant", variant, "--demo", demo, "--seed", "5"]);
            assert!(o.status.success(), "{variant} {demo}");
            assert_eq!(json(&o)["verified"], true);
        }
    }
}

#[test]
fn estimate_is_byte_identical_and_resumes() {
    let dir = tempfile::tempdir().unwrap();
    let base = ["estimate", "--variant", "minishogi", "--samples", "600", "--seed", "1", "--block-size", "200", "-q"];
    let mut args: Vec<&str> = base.to_vec();
    args.extend(["--workers", "2"]);
    let first = run(&args);
    let second = run(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);

    // a checkpoint holding one finished block gives the same report
    let ck = dir.path().join("ck");
    let c = dir.path().join("c.json");
    let d = dir.path().join("d.json");
    let mut args: Vec<&str> = base.to_vec();
    args.extend(["--out", c.to_str().unwrap(), "--checkpoint", ck.to_str().unwrap()]);
    assert!(run(&args).status.success());
    let file = fs::read_dir(&ck).unwrap().next().unwrap().unwrap().path();
    let lines: Vec<String> = fs::read_to_string(&file).unwrap().lines().map(String::from).collect();
    assert_eq!(lines.len(), 4);
    fs::write(&file, format!("{}\n{}\n", lines[0], lines[2])).unwrap();
    let o = bin()
        .args(base)
        .args(["--out", d.to_str().unwrap()])
        .env("SHOGI_REACH_CHECKPOINT_DIR", &ck)
        .output()
        .unwrap();
    assert!(o.status.success());
    let rc: Value = serde_json::from_slice(&fs::read(&c).unwrap()).unwrap();
    let rd: Value = serde_json::from_slice(&fs::read(&d).unwrap()).unwrap();
    assert_eq!(rc["report"], rd["report"]);
    assert_eq!(rd["report"]["sampleSize"], 600);
}

#[test]
fn estimate_writes_records() {
    let dir = tempfile::tempdir().unwrap();
    let r = dir.path().join("r.jsonl");
    let o = run(&[
        "estimate", "--variant", "shogi", "--samples", "50", "-q", "--records", r.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let text = fs::read_to_string(&r).unwrap();
    assert_eq!(text.lines().count(), 50);
    let first: Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
    assert!(first["rank"].is_string());
    assert!(first["stageReached"].is_string());
    let report: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["runConfig"]["samples"], 50);
}
