use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_expsum"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn records(out: &Output) -> Vec<Value> {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone())
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).expect("each line is one JSON record"))
        .collect()
}

fn f(v: &Value) -> f64 {
    v.as_f64().expect("number")
}

#[test]
fn es_gauss_example() {
    let r = &records(&run(&[
        "es",
        "--n",
        "2",
        "--weights",
        "uniform",
        "--f",
        "poly:0,0,0.25",
        "--part",
        "re",
        "--ae",
        "exact",
        "--compare-oracle",
    ]))[0];
    assert!((f(&r["result"][0]) - 0.5).abs() < 1e-10);
    assert!(f(&r["deviation"]) < 1e-10);
    assert_eq!(r["command"], "es");
    assert!(r["wall_time_ms"].is_null());
}

#[test]
fn es_flat_phase() {
    let r = &records(&run(&[
        "es",
        "--n",
        "3",
        "--weights",
        "uniform",
        "--f",
        "poly:0",
        "--part",
        "re",
        "--ae",
        "exact",
    ]))[0];
    assert!((f(&r["result"][0]) - 1.0).abs() < 1e-12);
}

#[test]
fn es_imaginary_part_and_files() {
    let dir = std::env::temp_dir().join(format!("expsum-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let fpath = dir.join("f.txt");
    let wpath = dir.join("w.txt");
    std::fs::write(&fpath, "# k  f(k)\n0 0\n1 0.25\n2 0\n3 0.25\n").unwrap();
    std::fs::write(&wpath, "0 1\n1 1\n2 1\n3 1\n").unwrap();
    let r = &records(&run(&[
        "es",
        "--n",
        "2",
        "--weights",
        wpath.to_str().unwrap(),
        "--f",
        fpath.to_str().unwrap(),
        "--part",
        "im",
        "--compare-oracle",
    ]))[0];
    assert!(f(&r["result"][0]).abs() < 1e-15);
    assert!((f(&r["result"][1]) - 0.5).abs() < 1e-10);
    assert!(f(&r["deviation"]) < 1e-10);
    std::fs::write(&fpath, "0 0\n9 0.5\n").unwrap();
    assert_eq!(
        run(&["es", "--n", "2", "--f", fpath.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn es_magnitude_methods() {
    for method in ["inversion", "hadamard"] {
        let r = &records(&run(&[
            "es",
            "--n",
            "2",
            "--f",
            "poly:0,0,0.25",
            "--part",
            "mag",
            "--method",
            method,
            "--compare-oracle",
        ]))[0];
        assert!((f(&r["result"][0]) - 2f64.sqrt()).abs() < 1e-10);
    }
    let bad = run(&[
        "es",
        "--n",
        "2",
        "--f",
        "poly:0",
        "--part",
        "re",
        "--method",
        "inversion",
    ]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(bad.stdout.is_empty());
}

#[test]
fn usage_errors_exit_two_without_stdout() {
    for args in [
        vec!["es", "--n", "2", "--f", "poly:0", "--bogus"],
        vec!["es", "--n", "2", "--f", "poly:0", "--ae", "qft"],
        vec!["es", "--n", "2", "--f", "poly:x"],
        vec!["zeta", "--sigma", "0.5"],
        vec!["ae-bench", "--a", "0.5", "--methods", "grover"],
        vec!["nonsense"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn zeta_examples() {
    let r = &records(&run(&[
        "zeta", "--sigma", "2", "--t", "0", "--method", "em", "--digits", "12",
    ]))[0];
    assert!((f(&r["result"][0]) - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-12);
    assert!(r["method_params"]["n"].as_u64().unwrap() > 0);
    assert!(r["method_params"]["k"].as_u64().unwrap() > 0);

    let r = &records(&run(&[
        "zeta",
        "--sigma",
        "0.5",
        "--t",
        "14.134725141734695",
        "--method",
        "rs",
    ]))[0];
    assert!(f(&r["result"][0]).hypot(f(&r["result"][1])) < 1e-6);

    let out = run(&["zeta", "--sigma", "1", "--t", "0"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("pole"));

    let r = &records(&run(&[
        "zeta",
        "--sigma",
        "0.5",
        "--t",
        "30",
        "--method",
        "hybrid-em",
        "--ae",
        "qft:10",
    ]))[0];
    let split = &r["error_split"];
    assert!((f(&split["ae"]) + f(&split["classical"]) - f(&r["error_bound"])).abs() < 1e-15);
    assert_eq!(r["q_applications"].as_u64(), Some(2 * 1023));
}

#[test]
fn ae_bench_rows() {
    let rows = records(&run(&["ae-bench", "--a", "1", "--trials", "10"]));
    assert_eq!(rows.len(), 12);
    assert!(rows.iter().all(|r| f(&r["max_abs_error"]) == 0.0));

    let rows = records(&run(&[
        "ae-bench",
        "--a",
        "0.6",
        "--methods",
        "cpp",
        "--trials",
        "20",
    ]));
    let apps: Vec<u64> = rows
        .iter()
        .map(|r| r["q_applications"].as_u64().unwrap())
        .collect();
    for w in apps.windows(2) {
        assert!(w[1] >= 2 * w[0]);
    }

    let rows = records(&run(&[
        "ae-bench",
        "--a",
        "0.6",
        "--methods",
        "qft",
        "--trials",
        "50",
    ]));
    for r in rows {
        let eps = f(&r["params"]["epsilon"]);
        let m = (std::f64::consts::PI / eps).log2().ceil() as i32;
        let resolution = std::f64::consts::PI * 2f64.powi(-m);
        assert!(resolution <= eps);
        assert_eq!(r["params"]["ae"], format!("qft:{m}"));
    }
}

#[test]
fn scan_zeros_examples() {
    let recs = records(&run(&[
        "scan-zeros",
        "--t-min",
        "10",
        "--t-max",
        "30",
        "--step",
        "0.5",
    ]));
    let roots: Vec<f64> = recs
        .iter()
        .filter(|r| r["kind"] == "zero")
        .map(|r| f(&r["root"]))
        .collect();
    let want = [
        14.134_725_141_734_695,
        21.022_039_638_771_556,
        25.010_857_580_145_69,
    ];
    assert_eq!(roots.len(), 3);
    for (r, w) in roots.iter().zip(want) {
        assert!((r - w).abs() < 1e-8);
    }
    let keys: Vec<Vec<&String>> = recs
        .iter()
        .map(|r| r.as_object().unwrap().keys().collect())
        .collect();
    assert!(keys.windows(2).all(|w| w[0] == w[1]));

    let recs = records(&run(&[
        "scan-zeros",
        "--t-min",
        "2",
        "--t-max",
        "10",
        "--step",
        "0.5",
        "--method",
        "rs",
    ]));
    assert!(recs.iter().all(|r| r["kind"] == "sample"));

    let recs = records(&run(&[
        "scan-zeros",
        "--t-min",
        "2",
        "--t-max",
        "3",
        "--step",
        "5",
    ]));
    assert_eq!(recs.len(), 1);
}

#[test]
fn csv_has_one_header() {
    let out = run(&[
        "--format",
        "csv",
        "es",
        "--n",
        "2",
        "--f",
        "poly:0,0.1",
        "--ae",
        "qft:6",
        "--runs",
        "4",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let header = rdr.headers().unwrap().clone();
    assert_eq!(&header[0], "command");
    assert!(header.iter().any(|h| h == "result.1"));
    assert_eq!(rdr.records().count(), 4);
}

#[test]
fn floats_carry_seventeen_digits() {
    let out = run(&["zeta", "--sigma", "2", "--t", "0"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let v: Value = serde_json::from_str(text.trim()).unwrap();
    let repr = v["result"][0].to_string();
    let mantissa = repr.split('e').next().unwrap().replace(['.', '-'], "");
    assert_eq!(mantissa.len(), 17, "{repr}");
}

#[test]
fn timing_is_opt_in() {
    let r = &records(&run(&["--timing", "zeta", "--sigma", "2", "--t", "0"]))[0];
    assert!(r["wall_time_ms"].as_f64().unwrap() >= 0.0);
}

#[test]
fn repeated_runs_are_byte_identical() {
    for args in [
        vec![
            "es",
            "--n",
            "4",
            "--weights",
            "power:0.5",
            "--f",
            "poly:0.1,0.3,0.05",
            "--ae",
            "qft:7",
            "--seed",
            "9",
            "--runs",
            "5",
        ],
        vec!["ae-bench", "--a", "0.3", "--trials", "30", "--seed", "2"],
        vec![
            "zeta",
            "--sigma",
            "0.5",
            "--t",
            "40",
            "--method",
            "hybrid-rs",
            "--ae",
            "kitaev:8",
            "--seed",
            "3",
        ],
    ] {
        let a = run(&args);
        let b = run(&args);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
    let one = run(&["ae-bench", "--a", "0.3", "--trials", "30"]);
    let many = Command::new(env!("CARGO_BIN_EXE_expsum"))
        .env("EXPSUM_THREADS", "1")
        .args(["ae-bench", "--a", "0.3", "--trials", "30"])
        .output()
        .unwrap();
    assert_eq!(one.stdout, many.stdout);
}

#[test]
fn oracle_deviation_within_advertised_bound() {
    for (part, method) in [
        ("re", "phase"),
        ("im", "phase"),
        ("mag", "inversion"),
        ("mag", "hadamard"),
    ] {
        let recs = records(&run(&[
            "es",
            "--n",
            "3",
            "--weights",
            "power:0.7",
            "--f",
            "poly:0.05,0.13,0.021",
            "--part",
            part,
            "--method",
            method,
            "--ae",
            "qft:8",
            "--runs",
            "100",
            "--compare-oracle",
        ]));
        assert_eq!(recs.len(), 100);
        let inside = recs
            .iter()
            .filter(|r| f(&r["deviation"]) <= f(&r["error_bound"]))
            .count();
        assert!(inside >= 95, "{part}/{method}: {inside}/100");
    }
}
