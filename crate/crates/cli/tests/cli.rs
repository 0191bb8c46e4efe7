use std::process::{Command, Output};

use serde_json::Value;

fn bgcrys(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bgcrys"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn klein_four_homology() {
    let out = bgcrys(&["group-homology", "--group", "2,2", "--max-degree", "2", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["groups"]["2"], "Z/2");
    assert_eq!(v["homology"]["2"]["torsion"], serde_json::json!(["2"]));
}

#[test]
fn stable_h2_of_z4() {
    let args = [
        "stack-cohomology",
        "--constant-group",
        "4",
        "--p",
        "2",
        "--witt-length",
        "3",
        "--max-degree",
        "2",
    ];
    let text = bgcrys(&args);
    assert_eq!(text.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&text.stdout).contains("H^2 = Z/4  (stable Z/4)"));
    let mut with_json = args.to_vec();
    with_json.push("--json");
    let v = json_of(&bgcrys(&with_json));
    assert_eq!(v["stable"]["2"]["group"], "Z/4");
}

#[test]
fn csv_has_one_row_per_invariant_factor() {
    let out = bgcrys(&["group-homology", "--group", "2,4", "--max-degree", "2", "--csv"]);
    let s = String::from_utf8(out.stdout).unwrap();
    assert_eq!(s, "section,degree,invariant_factor\nH,0,0\nH,1,2\nH,1,4\nH,2,2\n");
}

#[test]
fn config_supplies_defaults_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(
        &cfg,
        r#"{"json": true, "group-homology": {"group": "3", "max-degree": 3, "coefficients": "9"}}"#,
    )
    .unwrap();
    let cfg = cfg.to_str().unwrap();
    let v = json_of(&bgcrys(&["group-homology", "--config", cfg]));
    assert_eq!(v["group"], "Z/3");
    assert_eq!(v["coefficients"], "Z/9");
    assert_eq!(v["groups"]["3"], "Z/3");
    let v = json_of(&bgcrys(&[
        "group-homology",
        "--config",
        cfg,
        "--group",
        "2",
        "--max-degree",
        "1",
    ]));
    assert_eq!(v["group"], "Z/2");
    assert!(v["groups"].get("2").is_none());
    let out = bgcrys(&["group-homology", "--config", cfg, "--csv"]);
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("section,"));
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(bgcrys(&["nonsense"]).status.code(), Some(2));
    assert_eq!(bgcrys(&["witt", "--witt-length", "2"]).status.code(), Some(2));
    assert_eq!(
        bgcrys(&["witt", "--p", "4", "--witt-length", "2", "--a", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(bgcrys(&["verify", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(
        bgcrys(&["group-homology", "--group", "2", "--json", "--csv"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn exhausted_budget_is_a_failure() {
    let out = bgcrys(&[
        "group-homology",
        "--group",
        "64",
        "--max-degree",
        "3",
        "--max-group-order",
        "16",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn witt_arithmetic() {
    let v = json_of(&bgcrys(&[
        "witt",
        "--p",
        "3",
        "--witt-length",
        "3",
        "--a",
        "5",
        "--b",
        "7",
        "--op",
        "mul",
        "--json",
    ]));
    assert_eq!(v["result"]["integer"], "8");
    let v = json_of(&bgcrys(&[
        "witt",
        "--p",
        "2",
        "--witt-length",
        "3",
        "--a",
        "3",
        "--op",
        "verschiebung",
        "--json",
    ]));
    assert_eq!(v["result"]["integer"], "6");
}

#[test]
fn verify_reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for d in [&a, &b] {
        let out = bgcrys(&["verify", "--suite", "all", "--out", d.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    }
    let ra = std::fs::read(a.join("report.json")).unwrap();
    let rb = std::fs::read(b.join("report.json")).unwrap();
    assert_eq!(ra, rb);
    let v: Value = serde_json::from_slice(&ra).unwrap();
    assert_eq!(v["total"], 13);
    assert_eq!(v["pass"], true);
    assert!(v["assertions"]
        .as_array()
        .unwrap()
        .iter()
        .all(|x| x["statement"].is_string()));
}
