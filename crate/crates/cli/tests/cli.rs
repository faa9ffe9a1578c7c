use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cyclic-potts"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn term(q: u64, v: u64, coeff: &str) -> Value {
    serde_json::json!({"Q": q, "v": v, "Q0": 0, "coeff": coeff})
}

#[test]
fn width_one_characters() {
    let out = json(&[
        "characters",
        "--lattice",
        "square:1x2",
        "--l",
        "all",
        "--format",
        "json",
    ]);
    let k = &out["characters"];
    assert_eq!(
        k["K_1,1"],
        Value::Array(vec![term(0, 2, "1"), term(1, 1, "2"), term(2, 0, "1")])
    );
    assert_eq!(k["K_1,3"], Value::Array(vec![term(0, 2, "1")]));
}

#[test]
fn single_character() {
    let out = json(&["characters", "--lattice", "square:2x2", "--l", "2"]);
    let k = out["characters"].as_object().unwrap();
    assert_eq!(k.len(), 1);
    assert_eq!(k["K_1,5"], Value::Array(vec![term(0, 4, "1")]));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(
        run(&["characters", "--lattice", "square:0x2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["characters", "--lattice", "hex:2x2"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["characters", "--lattice", "square:2x2", "--l", "x"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["decompose", "--target", "z2j", "--lattice", "square:2x2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["decompose", "--target", "zff", "--lattice", "square:2x2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&[
            "decompose",
            "--target",
            "z",
            "--lattice",
            "square:2x2",
            "--p",
            "5"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        run(&["verify", "--suite", "everything"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn verify_small_grid_passes() {
    let out = run(&["verify", "--suite", "cyclic", "--Lmax", "2", "--Nmax", "3"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let checks = v["checks"].as_object().unwrap();
    assert!(!checks.is_empty());
    assert!(checks.values().all(|c| c["status"] == "pass"));
}

#[test]
fn decomposition_agrees_with_oracle() {
    let d = json(&["decompose", "--target", "z", "--lattice", "square:2x2"]);
    let o = json(&["oracle", "--lattice", "square:2x2"]);
    assert_eq!(d["value"]["num"], o["Z"]);
    assert_eq!(d["value"]["den"], Value::Array(vec![term(0, 0, "1")]));

    let d = json(&[
        "decompose",
        "--target",
        "z2j",
        "--j",
        "1",
        "--lattice",
        "square:2x3",
    ]);
    let o = json(&["oracle", "--count-ntc", "--lattice", "square:2x3"]);
    assert_eq!(d["value"]["num"], o["ntc"]["Z_3"]);
}

#[test]
fn fixed_boundary_minimal_characters() {
    let d = json(&[
        "decompose",
        "--target",
        "zff",
        "--lattice",
        "square:3x2",
        "--p",
        "4",
    ]);
    assert_eq!(d["minimal"]["chi_1,1"], Value::Array(vec![term(0, 0, "1")]));
    assert_eq!(d["minimal"]["chi_1,3"], Value::Array(vec![]));
}

#[test]
fn spin_oracle_is_exact() {
    // single site with a self-loop: Q * (1 + v)
    let out = json(&["oracle", "--lattice", "square:1x1", "--spin", "3,1/2"]);
    assert_eq!(out["spin"], "9/2");
}

#[test]
fn csv_and_text_formats() {
    let out = run(&["characters", "--lattice", "square:1x1", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(
        text,
        "name,Q,v,Q0,coeff\n\
         lattice,,,,square:1x1\n\
         \"characters.K_1,1\",0,1,0,1\n\
         \"characters.K_1,1\",1,0,0,1\n\
         \"characters.K_1,3\",0,1,0,1\n"
    );
    let out = run(&["blockcheck", "--lattice", "square:2x1", "--format", "text"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("passed = true"));
}

#[test]
fn output_is_independent_of_worker_count() {
    let args = ["oracle", "--lattice", "square:2x3", "--count-ntc", "--dual"];
    let one = run(&[&args[..], &["--workers", "1"]].concat());
    let four = run(&[&args[..], &["--workers", "4"]].concat());
    assert!(one.status.success());
    assert_eq!(one.stdout, four.stdout);
}
