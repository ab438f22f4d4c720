use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_diluted-spectra")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn series_row() {
    assert_eq!(stdout(&["series", "--name", "D", "--order", "6"]), "0,0,0,1,16,130\n");
    assert_eq!(stdout(&["series", "--name", "B_hat", "--order", "6"]), "0,-1,-3,-9,-28,-90\n");
}

#[test]
fn hat_tables_by_source() {
    let closed = stdout(&["series", "--table", "d_hat", "--order", "5", "--d-source", "paper"]);
    let oracle = stdout(&["series", "--table", "d_hat", "--order", "5", "--d-source", "oracle"]);
    assert!(closed.ends_with("4,30\n"));
    assert!(oracle.ends_with("4,28\n"));
}

#[test]
fn oracle_counts() {
    let v: Value = serde_json::from_str(&stdout(&["oracle", "--k", "4"])).unwrap();
    let counts = &v["counts"];
    assert_eq!(counts["alpha=4"], 14);
    assert_eq!(counts["alpha=3"], 28);
    assert_eq!(counts["alpha=2"], 14);
    assert_eq!(counts["alpha=1"], 1);
    let v: Value = serde_json::from_str(&stdout(&["oracle", "--k", "2", "--model", "regular", "--c", "3"])).unwrap();
    assert_eq!(v["exact_moment"], "5/3");
}

#[test]
fn recursion_consistent_leading_term() {
    let v: Value = serde_json::from_str(&stdout(&[
        "recursion", "--eq", "14", "--k", "4", "--transcription", "consistent",
    ]))
    .unwrap();
    assert_eq!(v["recursion_in_inverse_c"][2], "8");
    assert_eq!(v["enumeration_in_inverse_c"][2], "6");
    let v: Value = serde_json::from_str(&stdout(&["recursion", "--eq", "6", "--k", "2", "--c", "7/2"])).unwrap();
    assert_eq!(v["recursion"], "2");
    assert_eq!(v["agree"], true);
}

#[test]
fn density_and_stieltjes() {
    let s: f64 = stdout(&["density", "--name", "sigma", "--at", "0"]).trim().parse().unwrap();
    assert!((s - std::f64::consts::FRAC_1_PI).abs() < 1e-15);
    assert_eq!(stdout(&["density", "--name", "sigma1", "--moment", "3"]), "6\n");
    let h = stdout(&["stieltjes", "--name", "H1", "--at", "0"]);
    assert!((h.trim().parse::<f64>().unwrap() - 1.0 / (2.0 * std::f64::consts::PI)).abs() < 1e-5);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["series", "--bogus"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["series", "--name", "nope", "--order", "3"]).status.code(), Some(1));
    assert_eq!(run(&["density", "--name", "kesten_mckay", "--c", "1", "--at", "0"]).status.code(), Some(2));
    assert_eq!(run(&["stieltjes", "--name", "H", "--z", "1,0"]).status.code(), Some(2));
    let big = run(&["simulate", "--n", "5000", "--c", "3", "--dense-limit", "100"]);
    assert_eq!(big.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&big.stderr).contains("dense"));
}

#[test]
fn compare_is_reproducible() {
    let dir = std::env::temp_dir().join(format!("ds-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let args = |tag: &str| {
        vec![
            "compare".to_string(), "--figure".into(), "4R".into(), "--n".into(), "300".into(), "--c".into(),
            "10".into(), "--reps".into(), "3".into(), "--seed".into(), "9".into(), "--out".into(),
            dir.join(tag).display().to_string(), "--svg".into(), dir.join(format!("{tag}.svg")).display().to_string(),
        ]
    };
    for tag in ["a", "b"] {
        let a = args(tag);
        let refs: Vec<&str> = a.iter().map(String::as_str).collect();
        stdout(&refs);
    }
    let a = std::fs::read(dir.join("a.csv")).unwrap();
    assert_eq!(a, std::fs::read(dir.join("b.csv")).unwrap());
    assert!(String::from_utf8_lossy(&a).starts_with("bin_left,bin_right,empirical,theory,diff\n"));
    let mut ja: Value = serde_json::from_slice(&std::fs::read(dir.join("a.json")).unwrap()).unwrap();
    let mut jb: Value = serde_json::from_slice(&std::fs::read(dir.join("b.json")).unwrap()).unwrap();
    ja["runtime_ms"] = Value::Null;
    jb["runtime_ms"] = Value::Null;
    assert_eq!(ja, jb);
    for key in ["model", "n", "c", "reps", "seed", "l1", "correlation", "moments"] {
        assert!(ja.get(key).is_some(), "{key}");
    }
    assert!(std::fs::read_to_string(dir.join("a.svg")).unwrap().contains("<polyline"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn quick_report() {
    let out = run(&["report", "--quick"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let crit = v["criteria"].as_array().unwrap();
    assert_eq!(crit.len(), 10);
    for c in &crit[..7] {
        assert_eq!(c["pass"], true, "{c}");
    }
    for c in crit {
        for key in ["pass", "value", "expected", "tolerance"] {
            assert!(c.get(key).is_some());
        }
    }
    assert!(v["d_coefficient_table"].as_array().unwrap().len() > 4);
    assert!(v["hat_moment_table"].is_array());
    assert_eq!(v["config"]["k_max"], 8);
}
