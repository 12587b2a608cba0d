use std::path::{Path, PathBuf};
use std::process::Command;

use cartan_cli::{run, Outcome, Report};
use cartan_core::domain::{matrixize, sample_shilov, DomainDescriptor, Factor};
use cartan_core::io::{MatrixFile, ModelFile, TupleFile};
use cartan_core::lifting::Atom;
use cartan_core::linalg::{
    canonical_matrix, gaussian_matrix, haar_unitary, svd, CommutingTuple, ComplexMatrix, C64,
};
use serde::Serialize;
use tempfile::TempDir;

fn run_ok(args: &[&str]) -> Outcome {
    run(std::iter::once("cartan").chain(args.iter().copied())).unwrap()
}

fn write<T: Serialize>(dir: &TempDir, name: &str, v: &T) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, serde_json::to_string(v).unwrap()).unwrap();
    p
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn d(s: &str) -> DomainDescriptor {
    s.parse().unwrap()
}

fn diag_tuple_file(desc: &str, points: &[Vec<C64>]) -> TupleFile {
    TupleFile::new(d(desc), &CommutingTuple::diagonal(points).unwrap())
}

fn classify(file: &TupleFile, mode: &str) -> Outcome {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "tuple.json", file);
    run_ok(&["classify", "--input", path(&p), "--mode", mode])
}

#[test]
fn classify_unitary_passes_and_agrees() {
    let u = haar_unitary(3, 1);
    let f = TupleFile::new(d("IV(1)"), &CommutingTuple::new(vec![u]).unwrap());
    let o = classify(&f, "both");
    assert_eq!(o.exit_status(), 0, "{}", o.text);
    assert_eq!(o.report.results["agreement"], true);
}

#[test]
fn classify_scaled_type_one_fails_and_agrees() {
    let pts: Vec<Vec<C64>> = sample_shilov(&d("I(2,2)"), 3, 5)
        .into_iter()
        .map(|p| p.iter().map(|z| z * 0.9).collect())
        .collect();
    let o = classify(&diag_tuple_file("I(2,2)", &pts), "both");
    assert_eq!(o.exit_status(), 1, "{}", o.text);
    assert_eq!(o.report.results["spectral_pass"], false);
    assert_eq!(o.report.results["identity_pass"], false);
    assert_eq!(o.report.results["agreement"], true);
}

#[test]
fn classify_type_two_shilov_diagonal_passes() {
    let o = classify(
        &diag_tuple_file("II(2)", &sample_shilov(&d("II(2)"), 4, 9)),
        "both",
    );
    assert_eq!(o.exit_status(), 0, "{}", o.text);
    assert_eq!(o.report.results["spectral_pass"], true);
    assert_eq!(o.report.results["identity_pass"], true);
}

#[test]
fn classify_spectral_reports_non_normal() {
    let j = ComplexMatrix::from_fn(2, 2, |i, k| {
        C64::new(if i == 1 && k == 0 { 1.0 } else { 0.0 }, 0.0)
    });
    let f = TupleFile::new(d("IV(1)"), &CommutingTuple::new(vec![j]).unwrap());
    let o = classify(&f, "spectral");
    assert_eq!(o.exit_status(), 1);
    assert!(o.report.results["note"]
        .as_str()
        .unwrap()
        .contains("not normal"));
}

#[test]
fn classify_rejects_wrong_matrix_count_and_domain() {
    let f = TupleFile {
        descriptor: d("IV(2)"),
        matrices: vec![MatrixFile::from(&ComplexMatrix::identity(2))],
    };
    assert_eq!(classify(&f, "both").exit_status(), 2);
    let dir = TempDir::new().unwrap();
    let p = write(
        &dir,
        "t.json",
        &diag_tuple_file("IV(1)", &[vec![C64::new(1.0, 0.0)]]),
    );
    assert_eq!(
        run_ok(&["classify", "--domain", "IV(2)", "--input", path(&p)]).exit_status(),
        2
    );
    std::fs::write(&p, "{ not json").unwrap();
    assert_eq!(run_ok(&["classify", "--input", path(&p)]).exit_status(), 2);
}

fn canonical(z: &ComplexMatrix) -> Outcome {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "z.json", &MatrixFile::from(z));
    run_ok(&["canonical", "--input", path(&p)])
}

#[test]
fn canonical_examples() {
    let o = canonical(&canonical_matrix(3, &[1.0]));
    assert_eq!(o.exit_status(), 0);
    assert_eq!(o.report.summary["sigmas"], serde_json::json!([1.0]));
    assert!(o.report.summary["residual"].as_f64().unwrap() < 1e-14);

    let g = gaussian_matrix(4, 4, 3);
    let z = &g - &g.transpose();
    let o = canonical(&z);
    assert!(o.report.summary["residual"].as_f64().unwrap() < 1e-10);
    let u: MatrixFile = serde_json::from_value(o.report.results["u"].clone()).unwrap();
    assert_eq!(u.rows, 4);

    let o = canonical(&ComplexMatrix::zeros(4, 4));
    assert_eq!(o.report.summary["sigmas"], serde_json::json!([0.0, 0.0]));

    assert_eq!(canonical(&ComplexMatrix::identity(3)).exit_status(), 2);
}

fn model(desc: &str, atoms: Vec<Atom>, generators: Vec<Vec<C64>>) -> ModelFile {
    let degree = atoms.len();
    ModelFile {
        descriptor: d(desc),
        atoms,
        generators,
        degree,
    }
}

fn lift(s: &ModelFile, t: &ModelFile, extra: &[&str]) -> Outcome {
    let dir = TempDir::new().unwrap();
    let ps = write(&dir, "s.json", s);
    let pt = write(&dir, "t.json", t);
    let mut args = vec!["lift", "--model-s", path(&ps), "--model-t", path(&pt)];
    args.extend_from_slice(extra);
    run_ok(&args)
}

#[test]
fn lift_identical_single_atom_models() {
    let z = sample_shilov(&d("IV(2)"), 1, 2).remove(0);
    let m = model(
        "IV(2)",
        vec![Atom {
            point: z,
            weight: 1.0,
        }],
        vec![vec![C64::new(1.0, 0.0)]],
    );
    let o = lift(&m, &m, &[]);
    assert_eq!(o.exit_status(), 0, "{}", o.text);
    assert_eq!(o.report.summary["intertwiner_dimension"], 1);
    assert!(o.report.results[0]["norm_gap"].as_f64().unwrap() < 1e-12);
}

#[test]
fn lift_random_models_dominate() {
    let pts = sample_shilov(&d("IV(2)"), 3, 8);
    let atoms: Vec<Atom> = pts
        .iter()
        .chain(&pts[..2])
        .enumerate()
        .map(|(i, p)| Atom {
            point: p.clone(),
            weight: 0.5 + i as f64 * 0.3,
        })
        .collect();
    let g = gaussian_matrix(2, atoms.len(), 1);
    let row = |i: usize| -> Vec<C64> { (0..atoms.len()).map(|j| g[(i, j)]).collect() };
    let s = model("IV(2)", atoms.clone(), vec![row(0)]);
    let t = model("IV(2)", atoms.clone(), vec![row(0), row(1)]);
    let o = lift(&s, &t, &["--seed", "3"]);
    assert_eq!(o.exit_status(), 0, "{}", o.text);
    let checks = o.report.results.as_array().unwrap();
    assert!(!checks.is_empty());
    assert!(checks
        .iter()
        .all(|c| c["domination"] == true && c["lifted"] == true));
    assert!(checks.iter().any(|c| c["source"] == "combination"));
}

#[test]
fn lift_disjoint_spectra_gives_empty_space() {
    let one = |x: f64, y: f64| Atom {
        point: vec![C64::new(x, y)],
        weight: 1.0,
    };
    let c1 = vec![C64::new(1.0, 0.0)];
    let s = model("IV(1)", vec![one(1.0, 0.0)], vec![c1.clone()]);
    let t = model("IV(1)", vec![one(0.0, 1.0)], vec![c1]);
    let o = lift(&s, &t, &["--seed", "1"]);
    assert_eq!(o.exit_status(), 0, "{}", o.text);
    assert_eq!(o.report.summary["intertwiner_dimension"], 0);
    assert_eq!(o.report.summary["checks"], 0);
}

#[test]
fn lift_rejects_descriptor_mismatch() {
    let c1 = vec![C64::new(1.0, 0.0)];
    let s = model(
        "IV(1)",
        vec![Atom {
            point: vec![C64::new(1.0, 0.0)],
            weight: 1.0,
        }],
        vec![c1.clone()],
    );
    let t = model(
        "I(1,1)",
        vec![Atom {
            point: vec![C64::new(1.0, 0.0)],
            weight: 1.0,
        }],
        vec![c1],
    );
    assert_eq!(lift(&s, &t, &[]).exit_status(), 2);
}

#[test]
fn sample_type_three_odd_has_rank_two() {
    let o = run_ok(&[
        "sample", "--domain", "III(3)", "--count", "1", "--seed", "1",
    ]);
    let p: Vec<C64> = serde_json::from_value(o.report.results[0]["point"].clone()).unwrap();
    assert_eq!(p.len(), 3);
    let s = svd(&matrixize(Factor::TypeIII { p: 3 }, &p).unwrap())
        .unwrap()
        .sigmas;
    assert!(
        (s[0] - 1.0).abs() < 1e-12 && (s[1] - 1.0).abs() < 1e-12 && s[2].abs() < 1e-12,
        "{s:?}"
    );
}

#[test]
fn equiv_examples_are_clean() {
    for args in [
        vec![
            "equiv", "--domain", "III(5)", "--trials", "50", "--seed", "1",
        ],
        vec!["equiv", "--domain", "II(2)xIII(4)", "--trials", "50"],
    ] {
        let o = run_ok(&args);
        assert_eq!(o.exit_status(), 0, "{}", o.text);
        assert_eq!(o.report.summary["disagreements"], 0);
    }
}

#[test]
fn reports_are_deterministic() {
    let args = [
        "equiv", "--domain", "I(2,2)", "--trials", "30", "--seed", "9", "--json",
    ];
    assert_eq!(run_ok(&args).report, run_ok(&args).report);
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cartan"))
}

#[test]
fn binary_exit_codes_and_json_stdout() {
    let out = bin()
        .args([
            "sample", "--domain", "IV(1)", "--count", "3", "--seed", "7", "--json",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let r: Report = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(
        r.command,
        ["sample", "--domain", "IV(1)", "--count", "3", "--seed", "7", "--json"]
    );
    for p in r.results.as_array().unwrap() {
        let z: Vec<C64> = serde_json::from_value(p["point"].clone()).unwrap();
        assert!((z[0].norm() - 1.0).abs() < 1e-12);
    }

    let out = bin()
        .args(["explain", "--domain", "III(2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("III(2"));

    // usage errors from argument parsing also exit 2
    assert_eq!(
        bin().args(["equiv"]).output().unwrap().status.code(),
        Some(2)
    );
}

#[test]
fn binary_writes_out_file() {
    let dir = TempDir::new().unwrap();
    let p = dir.path().join("report.json");
    let out = bin()
        .args(["explain", "--domain", "IV(2)", "--out", path(&p)])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("spherical isometry"));
    let r: Report = serde_json::from_str(&std::fs::read_to_string(&p).unwrap()).unwrap();
    assert_eq!(r.summary["constraints"], 2);
}
