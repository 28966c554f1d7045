//! End-to-end runs of the `conescale` binary.

use std::process::{Command, Output};

use serde_json::Value;

fn conescale(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_conescale"))
        .args(args)
        .env_remove("CONESCALE_SEED")
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

const ORTHANT: &str = r#"{"kind":"orthant","dim":2}"#;

#[test]
fn scalarize_inline() {
    let out = conescale(&[
        "scalarize",
        "--cone",
        ORTHANT,
        "--e",
        "[1,1]",
        "--y",
        "[3,5]",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["value"], 5.0);
    assert_eq!(v["method"], "closed_form");
}

#[test]
fn inputs_from_files() {
    let dir = std::env::temp_dir().join(format!("conescale-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cone = dir.join("cone.json");
    std::fs::write(
        &cone,
        r#"{"kind":"polyhedral","normals":[[1,0],[0,1]],"interior_witness":[1,1]}"#,
    )
    .unwrap();
    let out = conescale(&[
        "norm",
        "--cone",
        cone.to_str().unwrap(),
        "--e",
        "[1,1]",
        "--x",
        "[-3,2]",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!((stdout_json(&out)["norm"].as_f64().unwrap() - 3.0).abs() < 1e-9);
}

#[test]
fn equiv_and_order() {
    let out = conescale(&["equiv", "--cone", ORTHANT, "--e", "[1,1]", "--e2", "[1,2]"]);
    assert_eq!(
        stdout_json(&out),
        serde_json::json!({"lower": 0.5, "upper": 1.0})
    );

    let out = conescale(&[
        "order",
        "--cone",
        ORTHANT,
        "--x",
        "[1,1]",
        "--y",
        "[2,3]",
        "--samples",
        "4",
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["leq_membership"], true);
    assert_eq!(v["leq_scalarized"], true);
}

#[test]
fn validate_cone_and_metric() {
    let out = conescale(&["validate-cone", "--cone", r#"{"kind":"lorentz","dim":3}"#]);
    assert_eq!(out.status.code(), Some(0));

    let space = r#"{"cone":{"kind":"orthant","dim":2},"n_points":3,
        "d":[[[0,0],[1,2],[2,2]],[[1,2],[0,0],[1,1]],[[2,2],[1,1],[0,0]]]}"#;
    let out = conescale(&["metric-validate", "--space", space, "--e", "[1,1]"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    assert_eq!(stdout_json(&out)["induced"][0][1], 2.0);

    let broken = r#"{"cone":{"kind":"orthant","dim":2},"n_points":3,
        "d":[[[0,0],[1,2],[5,5]],[[1,2],[0,0],[1,1]],[[5,5],[1,1],[0,0]]]}"#;
    assert_eq!(
        conescale(&["metric-validate", "--space", broken])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn solve_codes() {
    let good = r#"{"metric":{"kind":"abs"},"f":{"F":[[0.5]],"b":[1]},"gauges":{"kind":"linear","k":0.6},"x0":[0]}"#;
    let out = conescale(&["solve", "--config", good]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert!((v["limit"][0].as_f64().unwrap() - 2.0).abs() < 1e-8);
    assert!(v["iterations"].as_u64().unwrap() <= 60);

    let shift =
        r#"{"f":{"F":[[1]],"b":[1]},"gauges":{"kind":"linear","k":0.5},"x0":[0],"max_iter":500}"#;
    let out = conescale(&["solve", "--config", shift]);
    assert_eq!(out.status.code(), Some(2));
    assert!(
        stdout_json(&out)["contraction_violation_count"]
            .as_u64()
            .unwrap()
            > 0
    );

    let singular = r#"{"f":{"F":[[0.5]],"b":[1]},"g":{"F":[[0]],"b":[0]},"gauges":{"kind":"linear","k":0.5},"x0":[0]}"#;
    assert_eq!(
        conescale(&["solve", "--config", singular]).status.code(),
        Some(1)
    );
}

#[test]
fn solve_tvs_operator() {
    let cfg = r#"{"cone":{"kind":"orthant","dim":2},"distance":{"kind":"coordinatewise_abs"},"e":[1,1],
        "f":{"F":[[0.5,0],[0,0.25]],"b":[0,0]},
        "psi":{"kind":"operator","matrix":[[0.5,0],[0,0.25]],"epsilon":0.2},"x0":[3,-5]}"#;
    let out = conescale(&["solve-tvs", "--config", cfg]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["tvs_violation_count"], 0);
    assert_eq!(v["check_disagreements"], serde_json::json!([]));
}

#[test]
fn bad_input_exits_one() {
    assert_eq!(
        conescale(&["scalarize", "--cone", ORTHANT]).status.code(),
        Some(1)
    );
    assert_eq!(conescale(&["frobnicate"]).status.code(), Some(1));
    let out = conescale(&[
        "scalarize",
        "--cone",
        r#"{"kind":"cube","dim":2}"#,
        "--e",
        "[1,1]",
        "--y",
        "[0,0]",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout_json(&out)["error"]["kind"], "parse");
}

#[test]
fn seed_env_overrides_flag() {
    let run = |env: Option<&str>, seed: &str| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_conescale"));
        cmd.args([
            "order",
            "--cone",
            r#"{"kind":"lorentz","dim":3}"#,
            "--x",
            "[0,0,1]",
            "--y",
            "[0.5,0,2]",
            "--seed",
            seed,
        ]);
        cmd.env_remove("CONESCALE_SEED");
        if let Some(v) = env {
            cmd.env("CONESCALE_SEED", v);
        }
        cmd.output().unwrap()
    };
    assert_eq!(run(None, "1").stdout, run(None, "1").stdout);
    assert_eq!(run(Some("x"), "1").status.code(), Some(1));
    assert_eq!(run(Some("9"), "1").status.code(), Some(0));
}

#[test]
fn selftest_single_suite() {
    let out = conescale(&["selftest", "--suite", "gauges", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["seed"], 7);
    assert_eq!(v["suites"][0]["suite"], "gauges");
    assert_eq!(
        conescale(&["selftest", "--suite", "nope"]).status.code(),
        Some(1)
    );
}
