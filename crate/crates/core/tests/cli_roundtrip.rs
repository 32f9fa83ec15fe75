use std::process::Command;

use trotterkit::cli::run;
use trotterkit::io;
use trotterkit::linalg::ComplexMatrix;

fn capture(args: &[&str], env_seed: Option<&str>) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("trotterkit").chain(args.iter().copied());
    let code = run(argv, env_seed, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn sweep_csv_and_json_agree() {
    let base = ["trotter-sweep", "--pauli", "S=1*X", "--pauli", "T=1*Z", "--t", "1", "--n", "4,8,16,32"];
    let (code, csv, _) = capture(&base, None);
    assert_eq!(code, 0);
    let rows = io::report_rows_from_csv(&csv).unwrap();
    let mut json_args = base.to_vec();
    json_args.extend(["--format", "json"]);
    let (code, json, _) = capture(&json_args, None);
    assert_eq!(code, 0);
    let report = io::report_from_json::<f64>(&json).unwrap();
    assert_eq!(report.step_counts, vec![4, 8, 16, 32]);
    for ((n, e), (m, f)) in rows.iter().zip(report.rows()) {
        assert_eq!(*n, m);
        assert!((e - f).abs() <= 1e-15 * f);
    }
    assert!(report.fitted_order_valid);
}

#[test]
fn expm_matrix_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let h = ComplexMatrix::<f64>::from_real_rows(&[&[1.0, 0.5], &[0.5, -1.0]]).unwrap();
    let input = dir.path().join("h.json");
    std::fs::write(&input, io::matrix_to_json(&h)).unwrap();
    let output = dir.path().join("u.json");
    let (code, _, err) = capture(
        &[
            "expm", "--matrix", input.to_str().unwrap(), "--t", "0.4",
            "--taylor-terms", "30", "--format", "json", "-o", output.to_str().unwrap(),
        ],
        None,
    );
    assert_eq!(code, 0, "{err}");
    let payload = io::expm_from_json(&std::fs::read_to_string(&output).unwrap()).unwrap();
    let exact: ComplexMatrix<f64> = payload.exact.to_matrix().unwrap();
    let direct = trotterkit::exact_expm(&h, 0.4).unwrap().matrix;
    assert!((&exact - &direct).frobenius_norm() < 1e-15);
    assert!(payload.frobenius_difference.unwrap() < 1e-12);
}

#[test]
fn seed_selects_random_instance_and_env_overrides() {
    let args = ["trotter-sweep", "--random", "4", "--t", "1", "--n", "4,8"];
    let with = |seed: &str, env: Option<&str>| {
        let mut a = args.to_vec();
        a.extend(["--seed", seed]);
        capture(&a, env).1
    };
    assert_eq!(with("3", None), with("3", None));
    assert_ne!(with("3", None), with("4", None));
    assert_eq!(with("4", Some("3")), with("3", None));
    let (code, _, _) = capture(&args, Some("not-a-number"));
    assert_ne!(code, 0);
}

#[test]
fn splitstep_writes_trajectory_and_snapshots() {
    let dir = tempfile::tempdir().unwrap();
    let snaps = dir.path().join("snaps.json");
    let (code, csv, err) = capture(
        &[
            "splitstep", "--points", "128", "--t", "1", "--steps", "32", "--stride", "8",
            "--snapshots", snaps.to_str().unwrap(), "--snapshot-stride", "16",
        ],
        None,
    );
    assert_eq!(code, 0, "{err}");
    let rows = io::trajectory_from_csv(&csv).unwrap();
    assert_eq!(rows.iter().map(|r| r.step).collect::<Vec<_>>(), vec![0, 8, 16, 24, 32]);
    assert!((rows[4].time - 1.0).abs() < 1e-15);
    let snapshots = io::snapshots_from_json(&std::fs::read_to_string(&snaps).unwrap()).unwrap();
    assert_eq!(snapshots.iter().map(|s| s.step).collect::<Vec<_>>(), vec![0, 16, 32]);
    assert_eq!(snapshots[0].state.dim, 128);
}

#[test]
fn defect_rows_parse_back() {
    let (code, csv, _) = capture(
        &["defect", "--tight-binding", "3", "--onsite", "0,1,2", "--t", "0.5", "--steps", "0.1,0.01"],
        None,
    );
    assert_eq!(code, 0);
    let rows = io::defect_rows_from_csv(&csv).unwrap();
    assert_eq!(rows.len(), 2);
    assert!(rows[1].defect_supremum < rows[0].defect_supremum);
}

#[test]
fn exit_codes() {
    assert_eq!(capture(&["trotter-sweep", "--t", "1", "--bogus"], None).0, 1);
    assert_eq!(capture(&["expm", "--matrix", "/nonexistent/h.json", "--t", "1"], None).0, 2);
    assert_eq!(capture(&["expm", "--diag", "1,x", "--t", "1"], None).0, 2);
    assert_eq!(capture(&["splitstep", "--points", "100", "--t", "1"], None).0, 1);
    assert_eq!(capture(&["--help"], None).0, 0);
}

#[test]
fn binary_honours_env_seed() {
    let bin = env!("CARGO_BIN_EXE_trotterkit");
    let output = |seed: &str, env: Option<&str>| {
        let mut cmd = Command::new(bin);
        cmd.args(["expm", "--random", "3", "--t", "1", "--seed", seed]);
        match env {
            Some(v) => cmd.env("TROTTERKIT_SEED", v),
            None => cmd.env_remove("TROTTERKIT_SEED"),
        };
        let out = cmd.output().unwrap();
        assert!(out.status.success());
        out.stdout
    };
    assert_eq!(output("1", Some("9")), output("9", None));
    assert_ne!(output("1", None), output("9", None));
}
