use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use mbgames::{Hypergraph, WorkGuard};
use serde_json::Value;

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("mbg-commands-{}-{name}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn mbg(dir: &PathBuf, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mbg"))
        .args(args)
        .current_dir(dir)
        .output()
        .unwrap()
}

fn error_line(out: &Output) -> Value {
    let text = String::from_utf8(out.stderr.clone()).unwrap();
    assert_eq!(text.lines().count(), 1, "{text}");
    serde_json::from_str(&text).unwrap()
}

#[test]
fn exit_codes() {
    let dir = scratch("codes");
    fs::write(dir.join("one.json"), "{\"n\":3,\"s\":3,\"edges\":[[0,1,2]]}\n").unwrap();
    fs::write(dir.join("bad.json"), "{\"n\":3,\"edges\":[[0,1,7]]}").unwrap();
    fs::write(dir.join("big.json"), "{\"n\":70,\"s\":2,\"edges\":[[0,69]]}").unwrap();

    let ok = mbg(&dir, &["solve", "one.json", "--m", "1", "--b", "1", "--first", "maker"]);
    assert_eq!(ok.status.code(), Some(0));
    let report: Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert_eq!(report["winner"], "breaker");

    let usage = mbg(&dir, &["solve", "one.json", "--m", "x"]);
    assert_eq!(usage.status.code(), Some(1));
    assert_eq!(error_line(&usage)["error"], "usage");

    let malformed = mbg(&dir, &["solve", "bad.json", "--m", "1", "--b", "1"]);
    assert_eq!(malformed.status.code(), Some(2));
    assert_eq!(error_line(&malformed)["error"], "malformed_input");

    let too_big = mbg(&dir, &["solve", "big.json", "--m", "1", "--b", "1"]);
    assert_eq!(too_big.status.code(), Some(3));
    assert_eq!(error_line(&too_big)["error"], "board_too_large");

    let opponent = mbg(&dir, &["play", "big.json", "--opponent", "optimal"]);
    assert_eq!(opponent.status.code(), Some(3));

    let inapplicable = mbg(&dir, &["play", "one.json", "--opponent", "star"]);
    assert_eq!(inapplicable.status.code(), Some(3));
    assert_eq!(error_line(&inapplicable)["error"], "inapplicable");

    let _ = fs::remove_dir_all(&dir);
}

#[test]
fn work_guard_comes_from_the_environment() {
    let dir = scratch("guard");
    let edges: Vec<String> = (0..40)
        .flat_map(|a| (a + 1..40).map(move |b| format!("[{a},{b}]")))
        .collect();
    fs::write(dir.join("k40.json"), format!("{{\"n\":40,\"s\":2,\"edges\":[{}]}}", edges.join(","))).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_mbg"))
        .args(["analyze", "k40.json", "--d", "3"])
        .env("MB_WORK_GUARD", "100")
        .current_dir(&dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(error_line(&out)["error"], "guard_exceeded");
    let _ = fs::remove_dir_all(&dir);
}

#[test]
fn analyze_matches_the_library() {
    let dir = scratch("analyze");
    let gen = mbg(&dir, &["gen", "--n", "30", "--s", "3", "--p", "0.003", "--seed", "2", "--out", "h.json"]);
    assert!(gen.status.success());
    let text = fs::read_to_string(dir.join("h.json")).unwrap();
    let h = Hypergraph::from_json(&text).unwrap();
    assert_eq!(h.to_json(), text);

    let out = mbg(&dir, &["analyze", "h.json", "--d", "2"]);
    assert!(out.status.success());
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    let summary = h.components();
    assert_eq!(report["components"], serde_json::to_value(&summary.components).unwrap());
    assert_eq!(report["isolated"], serde_json::to_value(&summary.isolated).unwrap());
    let excess: Vec<Option<i64>> = summary.components.iter().map(|c| c.excess).collect();
    assert_eq!(report["excess"], serde_json::to_value(excess).unwrap());
    assert_eq!(report["max_degree"], h.max_degree());
    assert_eq!(report["all_tree_unicycle"], h.is_tree_unicycle_collection().unwrap());
    let stars = h.max_disjoint_d_stars(2, WorkGuard::default()).unwrap();
    assert_eq!(report["star_system"]["stars"], serde_json::to_value(&stars).unwrap());
    let _ = fs::remove_dir_all(&dir);
}

#[test]
fn extracted_system_is_readable_and_easier() {
    let dir = scratch("extract");
    fs::write(dir.join("path.json"), "{\"n\":7,\"s\":3,\"edges\":[[0,1,2],[2,3,4],[4,5,6]]}").unwrap();
    let out = mbg(&dir, &["analyze", "path.json", "--extract", "small.json"]);
    assert!(out.status.success());
    let small = Hypergraph::from_json(&fs::read_to_string(dir.join("small.json")).unwrap()).unwrap();
    let big = Hypergraph::from_json(&fs::read_to_string(dir.join("path.json")).unwrap()).unwrap();
    assert_eq!(small.uniformity(), Some(2));
    assert!(small.is_easier(&big).unwrap());
    let _ = fs::remove_dir_all(&dir);
}

#[test]
fn arena_marks_inapplicable_rows() {
    let dir = scratch("arena");
    let out = mbg(
        &dir,
        &[
            "arena", "--n", "9", "--s", "3", "--p", "0.3", "--seed", "1", "--games", "4", "--maker", "optimal",
            "--breaker", "kill",
        ],
    );
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("board_seed,maker,breaker,winner,turns"));
    assert!(lines.all(|l| l.ends_with(",inapplicable,0")), "{text}");
    let _ = fs::remove_dir_all(&dir);
}

#[test]
fn play_log_replays() {
    let dir = scratch("play");
    fs::write(dir.join("h.json"), "{\"n\":5,\"s\":2,\"edges\":[[0,1],[0,2],[3,4]]}").unwrap();
    let mut child = Command::new(env!("CARGO_BIN_EXE_mbg"))
        .args(["play", "h.json", "--opponent", "optimal", "--human", "breaker", "--log", "log.json"])
        .current_dir(&dir)
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    {
        use std::io::Write;
        child.stdin.take().unwrap().write_all(b"0\n1\n2\n3\n4\n").unwrap();
    }
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    let replay = mbg(&dir, &["play", "--replay", "log.json"]);
    assert!(replay.status.success());
    let text = String::from_utf8(replay.stdout).unwrap();
    let last: Value = serde_json::from_str(text.lines().last().unwrap()).unwrap();
    assert_eq!(last["winner"], "maker");
    let _ = fs::remove_dir_all(&dir);
}
