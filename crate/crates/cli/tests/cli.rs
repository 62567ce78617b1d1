use std::process::{Command, Output};

use serde_json::Value;

fn clonelab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_clonelab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn exit_codes() {
    assert_eq!(clonelab(&["--help"]).status.code(), Some(0));
    assert_eq!(clonelab(&["--version"]).status.code(), Some(0));
    assert_eq!(clonelab(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(clonelab(&["point", "--b", "0"]).status.code(), Some(1));

    let infeasible = clonelab(&["point", "--b", "0", "--gamma", "0.1", "--theta", "0.2"]);
    assert_eq!(infeasible.status.code(), Some(1));
    let message = String::from_utf8_lossy(&infeasible.stderr);
    assert!(message.starts_with("error:"), "{message}");

    let outside = clonelab(&["point", "--b", "0.9", "--gamma", "1", "--theta", "0"]);
    assert_eq!(outside.status.code(), Some(1));
}

#[test]
fn point_report_is_json() {
    let out = clonelab(&["point", "--b=-0.1", "--gamma", "0.9", "--theta", "pi/20", "--branch", "2+"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["branch"], "2+");
    assert_eq!(report["b"], -0.1);
    assert!((report["theta"].as_f64().unwrap() - std::f64::consts::PI / 20.0).abs() < 1e-15);
    let fidelity = report["fidelity"].as_f64().unwrap();
    assert!((fidelity - report["oracle"]["fidelity"].as_f64().unwrap()).abs() < 1e-12);
}

#[test]
fn sweep_rows_are_reproduced_by_point() {
    let out = clonelab(&[
        "sweep", "--figure", "fig1", "--thetas", "pi/10", "--gammas", "0.8", "--b-points", "7",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("figure,branch,curve,theta,gamma,s,b,correlation,fidelity")
    );
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert!(rows.len() >= 7);
    // the range edges print rounded to just outside the feasible range
    let interior = rows.iter().filter(|r| r[7] != "0.800000000000");
    for row in interior.step_by(2) {
        let point = clonelab(&[
            "point", &format!("--b={}", row[6]), "--gamma", row[4], "--theta", "pi/10",
            "--branch", row[1],
        ]);
        assert!(point.status.success());
        let report: Value = serde_json::from_str(&stdout(&point)).unwrap();
        let parse = |s: &str| s.parse::<f64>().unwrap();
        // CSV values carry 12 significant digits
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-10 * a.abs().max(1.0);
        assert!(close(report["fidelity"].as_f64().unwrap(), parse(row[8])), "{row:?}");
        assert!(
            close(report["correlations"]["concurrence"].as_f64().unwrap(), parse(row[7])),
            "{row:?}"
        );
    }
}

#[test]
fn flags_override_the_config_file() {
    let dir = std::env::temp_dir().join(format!("clonelab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let config = dir.join("sweep.toml");
    std::fs::write(
        &config,
        "figure = \"fig5\"\nthetas = [\"pi/8\"]\ngammas = [0.9, 1.0]\nb_points = 3\n",
    )
    .unwrap();
    let path = config.to_str().unwrap();

    let out = clonelab(&["sweep", "--config", path, "--json"]);
    assert!(out.status.success());
    let records: Vec<Value> = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(records.iter().all(|r| r["figure"] == "fig5"));
    let gammas: Vec<f64> = records.iter().map(|r| r["gamma"].as_f64().unwrap()).collect();
    assert!(gammas.contains(&0.9) && gammas.contains(&1.0));

    let out = clonelab(&["sweep", "--config", path, "--json", "--gammas", "1"]);
    let records: Vec<Value> = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(!records.is_empty());
    for r in &records {
        assert_eq!(r["gamma"], 1.0);
        assert_eq!(r["correlation"], 0.0);
    }

    std::fs::write(&config, "figure = \"fig5\"\ncolour = 1\n").unwrap();
    assert_eq!(clonelab(&["sweep", "--config", path]).status.code(), Some(1));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn nocorr_reports_product_outputs() {
    let out = clonelab(&["nocorr", "--s", "0.5"]);
    assert!(out.status.success());
    let reports: Vec<Value> = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(reports.len(), 2);
    for r in &reports {
        // eigenvalue route; the closed form is checked to be exactly zero elsewhere
        assert!(r["concurrence"].as_f64().unwrap() < 1e-12);
        assert!(r["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
    }
    assert_eq!(clonelab(&["nocorr", "--s", "1.5"]).status.code(), Some(1));
}

#[test]
fn verify_summary() {
    let out = clonelab(&["verify", "--seed", "7", "--trials", "5"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.lines().any(|l| l.starts_with("result: PASS")), "{text}");
    assert!(!text.contains("FAIL"));
}
