//! End-to-end checks of the command-line interface.

use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_wavebench"))
}

fn write_temp(name: &str, content: &str) -> std::path::PathBuf {
    let path = std::env::temp_dir().join(format!("wavebench-test-{}-{name}", std::process::id()));
    std::fs::write(&path, content).unwrap();
    path
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

const TWO_NODE_TREE: &str = "node t0 ground e p ; uniform 1 ; uniform 1\n\
                             node t1 ground p g ; uniform 1\n\
                             edge t0 t1 p\n\
                             root t0 e\n";

#[test]
fn verify_suite_exits_zero_and_emits_json() {
    let out = bin().args(["verify", "blockstr", "--emit", "json"]).output().unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["suite"], "blockstr");
    assert_eq!(v["failures"], 0);

    let again = bin().args(["verify", "blockstr", "--emit", "json"]).output().unwrap();
    assert_eq!(out.stdout, again.stdout, "json reports reproduce byte-for-byte");
}

#[test]
fn verify_unknown_suite_is_usage_error() {
    let out = bin().args(["verify", "nonsense"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn solve_game_trace_two_node_example() {
    let path = write_temp("tree", TWO_NODE_TREE);
    let out = bin()
        .args(["solve-game", path.to_str().unwrap(), "--promise", "M-", "--trace"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("winner: Packer"), "{text}");
    assert!(text.contains("Coverina stuck"), "{text}");
    assert!(text.contains("challenges p"), "{text}");
}

#[test]
fn solve_game_covering_promise() {
    let path = write_temp("tree-cover", TWO_NODE_TREE);
    let out = bin()
        .args(["solve-game", path.to_str().unwrap(), "--promise", "M-*", "--trace"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("Covering game"), "{text}");
}

#[test]
fn assemble_then_packing_covering() {
    let tree = write_temp("tree-asm", TWO_NODE_TREE);
    let out = bin().args(["assemble", tree.to_str().unwrap()]).output().unwrap();
    assert!(out.status.success());
    let pair_text = stdout(&out);
    assert_eq!(pair_text, "ground e g\nuniform 1\nuniform 1\n");

    let pair = write_temp("pair", &pair_text);
    let out = bin().args(["packing-covering", pair.to_str().unwrap()]).output().unwrap();
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("P = {e,g}"), "{text}");
}

#[test]
fn syntax_errors_carry_position() {
    let pair = write_temp("bad-pair", "ground a b\ncircuits {a,{b}\nuniform 1\n");
    let out = bin().args(["packing-covering", pair.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr).into_owned();
    assert!(err.contains("line 2"), "{err}");
}

#[test]
fn ground_cap_env_lowers_only() {
    let pair = write_temp("cap-pair", "ground a b c d e\nuniform 2\nuniform 3\n");
    let ok = bin()
        .env("PC_MAX_GROUND", "64") // above the compiled cap: ignored
        .args(["packing-covering", pair.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(ok.status.success());
    let blocked = bin()
        .env("PC_MAX_GROUND", "4")
        .args(["packing-covering", pair.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(blocked.status.code(), Some(2));
    let err = String::from_utf8_lossy(&blocked.stderr).into_owned();
    assert!(err.contains("cap is 4"), "{err}");
}
