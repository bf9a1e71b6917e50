use std::process::{Command, Output};

fn prodsurf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_prodsurf"))
        .args(args)
        .output()
        .expect("binary runs")
}

const VES: &str = r#"{"k":1.0,"beta":0.5,"rho":0.5,"delta":2.0}"#;

#[test]
fn verify_runs_exit_zero() {
    for cmd in ["verify-t1", "verify-t2"] {
        let out = prodsurf(&[cmd, "--seed", "7"]);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{cmd}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(v["failed"], 0);
    }
}

#[test]
fn grid_csv_is_byte_deterministic() {
    for model in ["ves", "kadiyala"] {
        let args = ["grid", "--model", model, "--seed", "13", "--format", "csv"];
        let a = prodsurf(&args);
        let b = prodsurf(&args);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout);
        let text = String::from_utf8(a.stdout).unwrap();
        assert_eq!(text.lines().next(), Some("u,v,f,K,H,valid,sign"));
        assert_eq!(text.lines().count(), 401);
    }
}

#[test]
fn grid_json_is_byte_deterministic() {
    let args = [
        "grid",
        "--model",
        "ves",
        "--params",
        VES,
        "--format",
        "json",
        "--strict-domain",
    ];
    let a = prodsurf(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, prodsurf(&args).stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["model"]["domain"], "strict");
    assert_eq!(v["rows"].as_array().unwrap().len(), 400);
}

#[test]
fn params_from_file() {
    let dir = std::env::temp_dir().join(format!("prodsurf-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("ves.json");
    std::fs::write(&path, VES).unwrap();
    let out = prodsurf(&[
        "eval",
        "--model",
        "ves",
        "--params",
        path.to_str().unwrap(),
        "--point",
        "1,2",
    ]);
    std::fs::remove_dir_all(&dir).unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let k = v["curvature"]["K"].as_f64().unwrap();
    assert!((k + 0.034_026_465_028_355_39).abs() < 1e-12);
}

#[test]
fn specialize_and_classify() {
    let out = prodsurf(&[
        "specialize",
        "--params",
        r#"{"k1":0.0,"k2":0.5,"k3":0.0,"beta1":0.3,"beta2":0.9,"delta":1.0}"#,
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["tag"], "cobb_douglas_type");

    let out = prodsurf(&["classify", "--model", "ves", "--params", VES]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["verdict"]["sign"], "negative");
    assert_eq!(v["grid"]["positive"], 0);
}

#[test]
fn input_errors_exit_two() {
    let cases: [&[&str]; 5] = [
        &[
            "eval",
            "--model",
            "ves",
            "--params",
            r#"{"k":1,"beta":0.5,"rho":3,"delta":1}"#,
            "--point",
            "1,1",
        ],
        &["eval", "--model", "ves", "--params", VES, "--point", "1"],
        &["grid", "--model", "ves", "--grid", "1,0,2,1,10,2"],
        &[
            "eval",
            "--model",
            "kadiyala",
            "--params",
            "/nonexistent/params.json",
            "--point",
            "1,1",
        ],
        &["verify-t1", "--tol", "-1"],
    ];
    for args in cases {
        let out = prodsurf(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty());
    }
}
