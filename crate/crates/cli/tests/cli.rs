use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_swap-tur"))
        .args(args)
        .output()
        .unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("swap-tur-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn point_heat_engine_violates_tur1() {
    let out = bin(&[
        "point", "--nu1", "4.78559", "--nu2", "11.81291", "--beta1h", "0.177", "--beta2h", "0.02",
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["regime"], "HeatEngine");
    assert_eq!(v["tur1_violated"], true);
    assert_eq!(v["tur2_violated"], false);
}

#[test]
fn point_at_crossover_is_degenerate() {
    let b2 = format!("{}", 0.177 * 4.78559 / 11.81291);
    let out = bin(&["point", "--beta1h", "0.177", "--beta2h", &b2, "--json"]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["degenerate"], true);
    assert_eq!(v["regime"], "Crossover");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(bin(&["point", "--beta2h", "nope"]).status.code(), Some(2));
    assert_eq!(bin(&["point", "--beta2h", "0.1"]).status.code(), Some(2));
    assert_eq!(
        bin(&["point", "--beta1h", "-1", "--beta2h", "0.1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        bin(&[
            "sweep",
            "--beta1h",
            "0.1",
            "--beta2h-start",
            "0.2",
            "--beta2h-end",
            "0.1"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        bin(&["threshold", "--beta2h-start", "1", "--beta2h-end", "0.5"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        bin(&["mc", "--preset", "pps-0177", "--beta2h", "0.02", "--n", "0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(bin(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn unwritable_output_exits_1() {
    let out = bin(&[
        "sweep",
        "--preset",
        "pps-0177",
        "--out",
        "/nonexistent-dir/rows.csv",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn sweep_is_byte_identical_and_matches_json() {
    let a = bin(&["sweep", "--preset", "pps-0289"]);
    let b = bin(&["sweep", "--preset", "pps-0289"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let csv = String::from_utf8(a.stdout).unwrap();
    assert!(!csv.contains('\r'));
    let mut lines = csv.lines();
    assert_eq!(
        lines.next(),
        Some("beta2_h,q1,q2,w_ext,sigma,inv_snr,tur1_rhs,tur2_rhs,regime,tur1_violated,tur2_violated,degenerate")
    );
    let rows: Vec<Vec<String>> = lines
        .map(|l| l.split(',').map(String::from).collect())
        .collect();
    assert_eq!(rows.len(), 402);

    let j: Value =
        serde_json::from_slice(&bin(&["sweep", "--preset", "pps-0289", "--json"]).stdout).unwrap();
    let jrows = j["rows"].as_array().unwrap();
    assert_eq!(jrows.len(), rows.len());
    for (r, jr) in rows.iter().zip(jrows) {
        for (k, key) in ["beta2_h", "q1", "q2", "w_ext", "sigma"].iter().enumerate() {
            assert_eq!(
                r[k].parse::<f64>().unwrap(),
                jr[key].as_f64().unwrap(),
                "{key}"
            );
        }
        assert_eq!(r[8], jr["regime"].as_str().unwrap());
    }
}

#[test]
fn sweep_files_and_config_precedence() {
    let cfg = scratch("sweep.cfg");
    fs::write(
        &cfg,
        "# test\nbeta1_h = 0.2\nbeta2_h_start = 0\nbeta2_h_end = 0.1\npoints = 7\n",
    )
    .unwrap();
    let csv = scratch("rows.csv");
    let out = bin(&[
        "sweep",
        "--config",
        cfg.to_str().unwrap(),
        "--points",
        "3",
        "--outputs",
        "csv,json,gnuplot",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = fs::read_to_string(&csv).unwrap();
    // 3 grid points plus the inserted crossover row
    assert_eq!(text.lines().count(), 1 + 4);
    assert!(text.lines().nth(1).unwrap().starts_with("0,"));
    let gp = fs::read_to_string(scratch("rows.csv.gp")).unwrap();
    assert!(gp.contains("rows.csv"));
    let j: Value =
        serde_json::from_str(&fs::read_to_string(scratch("rows.csv.json")).unwrap()).unwrap();
    assert_eq!(j["beta1_h"].as_f64(), Some(0.2));

    fs::write(&cfg, "beta1_h = 0.2\nbogus line\n").unwrap();
    let out = bin(&["sweep", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn threshold_tur2_is_empty() {
    let out = bin(&["threshold", "--which", "tur2", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["boundaries"].as_array().unwrap().is_empty());
    assert!(v["reference"]["caveat"].as_str().unwrap().len() > 20);
}

#[test]
fn circuit_runs_and_reports_line_numbers() {
    let file = scratch("prep.circ");
    fs::write(&file, "ry 1 1.0472\nry 2 0.7854\ndephase\nswap\n").unwrap();
    let out = bin(&["circuit", file.to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    for i in 0..4 {
        for j in 0..4 {
            if i != j {
                assert_eq!(v["re"][i][j].as_f64(), Some(0.0));
                assert_eq!(v["im"][i][j].as_f64(), Some(0.0));
            }
        }
    }

    let empty = scratch("empty.circ");
    fs::write(&empty, "init mixed\n").unwrap();
    let reference = scratch("mixed.ref");
    fs::write(
        &reference,
        "0.25 0 0 0\n0 0.25 0 0\n0 0 0.25 0\n0 0 0 0.25\n",
    )
    .unwrap();
    let out = bin(&[
        "circuit",
        empty.to_str().unwrap(),
        "--reference",
        reference.to_str().unwrap(),
        "--json",
    ]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["fidelity"].as_f64(), Some(1.0));

    fs::write(&file, "swap\n\nry 1\n").unwrap();
    let out = bin(&["circuit", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
}

#[test]
fn verify_passes_and_detects_injected_fault() {
    let ok = bin(&["verify", "--json"]);
    assert_eq!(ok.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert_eq!(v["passed"], true);
    assert!(!v["informational"].as_array().unwrap().is_empty());

    let bad = bin(&["verify", "--inject-fault"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stdout).contains("FAIL second_law"));
}
