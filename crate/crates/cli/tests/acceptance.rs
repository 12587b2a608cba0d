//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any failure.
//!
//! Criterion 8 re-runs criteria 1-7 with the same seeds and compares their
//! reports field by field.

use std::time::Instant;

use cartan_core::domain::{matrixize, sample_shilov, DomainDescriptor, Factor};
use cartan_core::hereditary::{
    charpoly_coeffs, evaluate, identity_set, positivity_certificate, scalar_eval,
    HereditaryPolynomial, Monomial,
};
use cartan_core::lifting::lifting_sweep;
use cartan_core::linalg::{
    gaussian_matrix, haar_unitary, orthonormal_closure, youla_canonical, youla_residual,
    CommutingTuple, ComplexMatrix, C64, ONE, ZERO,
};
use cartan_core::verify::compress;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

const DESCRIPTORS: [&str; 13] = [
    "I(1,2)",
    "I(2,2)",
    "I(2,3)",
    "II(2)",
    "II(3)",
    "III(3)",
    "III(4)",
    "III(5)",
    "IV(2)",
    "IV(3)",
    "IV(4)",
    "I(2,2)xIV(2)",
    "II(2)xIII(4)",
];
const SEED: u64 = 20240601;

struct Verdict {
    pass: bool,
    detail: String,
    /// Everything the criterion computed that should be reproducible.
    report: Value,
}

fn d(s: &str) -> DomainDescriptor {
    s.parse().unwrap()
}

/// Scalar identities on 10⁴ Shilov samples and 10⁴ points scaled into the interior.
fn criterion1() -> Verdict {
    const N: usize = 10_000;
    let mut pass = true;
    let mut rows = Vec::new();
    let mut worst_on: f64 = 0.0;
    let mut least_off = f64::INFINITY;
    for (k, name) in DESCRIPTORS.iter().enumerate() {
        let desc = d(name);
        let set = identity_set(&desc).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(SEED + k as u64);
        let (mut on_max, mut off_min) = (0.0f64, f64::INFINITY);
        for z in sample_shilov(&desc, N, SEED + 100 + k as u64) {
            on_max = on_max.max(set.scalar_defect(&z).unwrap());
            let s = rng.random_range(0.5..=0.99);
            let inner: Vec<C64> = z.iter().map(|w| w * s).collect();
            off_min = off_min.min(set.scalar_defect(&inner).unwrap());
        }
        pass &= on_max < 1e-9 && off_min > 1e-3;
        worst_on = worst_on.max(on_max);
        least_off = least_off.min(off_min);
        rows.push(json!({ "descriptor": name, "max_shilov_residual": on_max, "min_interior_violation": off_min }));
    }
    Verdict {
        pass,
        detail: format!("13 descriptors; max Shilov residual {worst_on:.2e}, min interior violation {least_off:.3e}"),
        report: Value::Array(rows),
    }
}

/// `cartan equiv` with 200 trials per descriptor.
fn criterion2() -> Verdict {
    let mut pass = true;
    let mut rows = Vec::new();
    let (mut dis, mut marginal, mut truth) = (0, 0, 0);
    for name in DESCRIPTORS {
        let seed = SEED.to_string();
        let o = cartan_cli::run([
            "cartan", "equiv", "--domain", name, "--trials", "200", "--seed", &seed,
        ])
        .unwrap();
        let s = &o.report.summary;
        dis += s["disagreements"].as_u64().unwrap_or(u64::MAX);
        marginal += s["marginal"].as_u64().unwrap_or(0);
        truth += s["truth_mismatches"].as_u64().unwrap_or(0);
        pass &= o.exit_status() == 0;
        rows.push(serde_json::to_value(&o.report).unwrap());
    }
    Verdict {
        pass,
        detail: format!("2600 trials; {dis} disagreements, {marginal} marginal, {truth} ground-truth mismatches"),
        report: Value::Array(rows),
    }
}

fn binomial(n: i64, k: i64) -> i64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn det(m: &ComplexMatrix) -> C64 {
    let n = m.rows();
    let mut a: Vec<Vec<C64>> = (0..n)
        .map(|i| (0..n).map(|j| m[(i, j)]).collect())
        .collect();
    let mut det = ONE;
    for c in 0..n {
        let piv = (c..n)
            .max_by(|&x, &y| a[x][c].norm().total_cmp(&a[y][c].norm()))
            .unwrap();
        if a[piv][c] == ZERO {
            return ZERO;
        }
        if piv != c {
            a.swap(piv, c);
            det = -det;
        }
        det *= a[c][c];
        let (top, rest) = a.split_at_mut(c + 1);
        let pivot = &top[c];
        for row in rest {
            let f = row[c] / pivot[c];
            for (x, &y) in row[c..].iter_mut().zip(&pivot[c..]) {
                *x -= f * y;
            }
        }
    }
    det
}

/// Coefficients of `λ(λ − 1)^{2p}`, lowest degree first, by repeated multiplication.
fn expanded_target(p: usize) -> Vec<i64> {
    let mut c = vec![0, 1];
    for _ in 0..2 * p {
        let mut next = vec![0; c.len() + 1];
        for (i, &x) in c.iter().enumerate() {
            next[i + 1] += x;
            next[i] -= x;
        }
        c = next;
    }
    c
}

/// Characteristic coefficients at 100 `UKUᵗ` points for p = 1, 2.
fn criterion3() -> Verdict {
    let mut pass = true;
    let (mut coef_err, mut det_err) = (0.0f64, 0.0f64);
    for p in 1..=2usize {
        let q = charpoly_coeffs(p).unwrap();
        let expanded = expanded_target(p);
        // closed form of the identity targets against the expansion
        for (m, &e) in expanded.iter().enumerate() {
            let closed = if m == 0 {
                0
            } else {
                (-1i64).pow(m as u32 - 1) * binomial(2 * p as i64, m as i64 - 1)
            };
            pass &= closed == e;
        }
        let n = 2 * p + 1;
        let desc = d(&format!("III({n})"));
        for z in sample_shilov(&desc, 100, SEED + p as u64) {
            let vals: Vec<C64> = q.iter().map(|qm| scalar_eval(qm, &z).unwrap()).collect();
            for (m, v) in vals.iter().enumerate() {
                coef_err = coef_err.max((v - C64::new(expanded[m] as f64, 0.0)).norm());
            }
            let zm = matrixize(Factor::TypeIII { p: n }, &z).unwrap();
            let gram = zm.adjoint().matmul(&zm);
            for lambda in [-1.5, -0.3, 0.4, 1.7, 3.0] {
                let lhs = det(&(&ComplexMatrix::identity(n).scale_re(lambda) - &gram));
                let rhs: C64 = vals
                    .iter()
                    .enumerate()
                    .map(|(m, v)| v * lambda.powi(m as i32))
                    .sum();
                det_err = det_err.max((lhs - rhs).norm());
            }
        }
    }
    pass &= coef_err < 1e-8 && det_err < 1e-8;
    Verdict {
        pass,
        detail: format!(
            "p = 1, 2; max |q_m - target| {coef_err:.2e}, det cross-check {det_err:.2e}"
        ),
        report: json!({ "coef_err": coef_err, "det_err": det_err }),
    }
}

/// Canonical form of 500 random antisymmetric matrices and of odd Shilov points.
fn criterion4() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst: f64 = 0.0;
    for i in 0..500 {
        let n = rng.random_range(2..=7);
        let g = gaussian_matrix(n, n, SEED + i);
        let z = &g - &g.transpose();
        worst = worst.max(youla_residual(&z, &youla_canonical(&z, 1e-10).unwrap()));
    }
    let mut pattern: f64 = 0.0;
    for p in 1..=2usize {
        let n = 2 * p + 1;
        for z in sample_shilov(&d(&format!("III({n})")), 100, SEED + 7 + p as u64) {
            let form =
                youla_canonical(&matrixize(Factor::TypeIII { p: n }, &z).unwrap(), 1e-10).unwrap();
            // sigmas (σ_1..σ_p) each cover two singular values; the last one is the zero padding
            pattern = pattern.max(
                form.sigmas
                    .iter()
                    .map(|s| (s - 1.0).abs())
                    .fold(0.0, f64::max),
            );
            pattern = pattern.max(youla_residual(
                &matrixize(Factor::TypeIII { p: n }, &z).unwrap(),
                &form,
            ));
        }
    }
    Verdict {
        pass: worst < 1e-9 && pattern < 1e-8,
        detail: format!("500 matrices, max residual {worst:.2e}; III(3)/III(5) pattern (1^2p, 0) deviation {pattern:.2e}"),
        report: json!({ "residual": worst, "pattern": pattern }),
    }
}

fn random_poly(n: usize, rng: &mut ChaCha8Rng) -> HereditaryPolynomial {
    let mut p = HereditaryPolynomial::zero(n);
    for _ in 0..rng.random_range(1..=6) {
        let mut m = Monomial::one(n);
        for _ in 0..rng.random_range(0..=4) {
            let slot = rng.random_range(0..2 * n);
            if slot < n {
                m.z[slot] += 1;
            } else {
                m.w[slot - n] += 1;
            }
        }
        p.add_term(
            m,
            C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
        );
    }
    p
}

/// Normal tuple with doubled atoms in the closure and an orbit-closure subspace.
fn random_compression(
    desc: &DomainDescriptor,
    rng: &mut ChaCha8Rng,
) -> (CommutingTuple, ComplexMatrix) {
    let atoms = rng.random_range(1..=3);
    let mut pts = Vec::new();
    for z in sample_shilov(desc, atoms, rng.random()) {
        let s = if rng.random_bool(0.5) {
            1.0
        } else {
            rng.random_range(0.5..1.0)
        };
        let z: Vec<C64> = z.iter().map(|w| w * s).collect();
        pts.push(z.clone());
        pts.push(z);
    }
    let n = CommutingTuple::diagonal(&pts)
        .unwrap()
        .conjugate_by(&haar_unitary(pts.len(), rng.random()));
    let v = gaussian_matrix(n.size(), 1, rng.random()).column(0);
    let b = orthonormal_closure(n.size(), &[v], n.coords(), 1e-10);
    (n, b)
}

/// `p(B*NB) = B* p(N) B` on 200 random invariant compressions.
fn criterion5() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 5);
    let mut worst: f64 = 0.0;
    let mut proper = 0;
    for i in 0..200 {
        let desc = d(DESCRIPTORS[i % DESCRIPTORS.len()]);
        let (n, b) = random_compression(&desc, &mut rng);
        proper += usize::from(b.cols() < n.size());
        let s = compress(&n, &b, 1e-9).unwrap();
        let p = random_poly(n.arity(), &mut rng);
        let lhs = evaluate(&p, &s).unwrap();
        let rhs = b.adjoint().matmul(&evaluate(&p, &n).unwrap()).matmul(&b);
        let scale: f64 = p.terms().values().map(|c| c.norm()).sum::<f64>().max(1.0);
        worst = worst.max((&lhs - &rhs).norm_fro() / scale);
    }
    Verdict {
        pass: worst < 1e-9,
        detail: format!("200 triples ({proper} proper subspaces), max scaled gap {worst:.2e}"),
        report: json!({ "worst": worst, "proper": proper }),
    }
}

/// Certificates at K = 3 on compressions of Shilov diagonal tuples; Jordan block at K = 2.
fn criterion6() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 6);
    let mut pass = true;
    let mut count = 0;
    let mut worst_min = f64::INFINITY;
    // (K+1)^n entries per certificate: descriptors with at most 6 coordinates
    let names: Vec<&str> = DESCRIPTORS
        .iter()
        .copied()
        .filter(|n| d(n).dimension() <= 6)
        .collect();
    for name in &names {
        let desc = d(name);
        for _ in 0..4 {
            let atoms = rng.random_range(1..=3);
            let pts: Vec<Vec<C64>> = sample_shilov(&desc, atoms, rng.random())
                .into_iter()
                .flat_map(|z| [z.clone(), z])
                .collect();
            let n = CommutingTuple::diagonal(&pts)
                .unwrap()
                .conjugate_by(&haar_unitary(pts.len(), rng.random()));
            let v = gaussian_matrix(n.size(), 1, rng.random()).column(0);
            let b = orthonormal_closure(n.size(), &[v], n.coords(), 1e-10);
            let r = positivity_certificate(&compress(&n, &b, 1e-9).unwrap(), 3, 1e-8).unwrap();
            worst_min = worst_min.min(
                r.entries
                    .iter()
                    .map(|e| e.min_eigenvalue)
                    .fold(f64::INFINITY, f64::min),
            );
            pass &= r.pass;
            count += 1;
        }
    }
    let jordan = ComplexMatrix::from_fn(2, 2, |i, k| if i == 1 && k == 0 { ONE } else { ZERO });
    let r = positivity_certificate(&CommutingTuple::new(vec![jordan]).unwrap(), 3, 1e-8).unwrap();
    let fail = r
        .first_failure()
        .map(|e| (e.degrees.clone(), e.min_eigenvalue));
    pass &= fail == Some((vec![2], -1.0));
    Verdict {
        pass,
        detail: format!(
            "{count} compressions over {} descriptors (<= 6 coordinates), min eigenvalue {worst_min:.2e}; Jordan block first fails at {:?}",
            names.len(),
            fail
        ),
        report: json!({ "count": count, "worst_min": worst_min, "jordan": fail }),
    }
}

/// Lifting sweep, 200 model pairs per descriptor.
fn criterion7() -> Verdict {
    let mut pass = true;
    let mut rows = Vec::new();
    let (mut checks, mut antecedents, mut bad) = (0, 0, 0);
    for name in ["IV(2)", "I(1,2)", "II(2)"] {
        let r = lifting_sweep(&d(name), 200, SEED, 1e-8).unwrap();
        pass &= r.clean();
        checks += r.checks;
        antecedents += r.transfer_antecedents;
        bad += r.domination_failures
            + r.lift_failures
            + r.norm_gap_violations
            + r.restriction_violations
            + r.transfer_violations
            + r.errors;
        rows.push(serde_json::to_value(&r).unwrap());
    }
    Verdict {
        pass,
        detail: format!("600 model pairs, {checks} intertwiners checked, {antecedents} with a true antecedent, {bad} violations"),
        report: Value::Array(rows),
    }
}

type Criterion = fn() -> Verdict;

fn main() {
    let criteria: [(&str, Criterion); 7] = [
        ("scalar boundary equivalence", criterion1),
        ("classifier equivalence sweeps", criterion2),
        ("characteristic coefficients on odd type III", criterion3),
        ("antisymmetric canonical form", criterion4),
        ("compression transport", criterion5),
        ("positivity certificates", criterion6),
        ("lifting lab", criterion7),
    ];
    let mut all = true;
    let mut reports = Vec::new();
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let v = f();
        all &= v.pass;
        println!(
            "criterion {}: {} {name}: {} [{:.1}s]",
            i + 1,
            if v.pass { "PASS" } else { "FAIL" },
            v.detail,
            t.elapsed().as_secs_f64()
        );
        reports.push(v.report);
    }
    let t = Instant::now();
    let differing: Vec<usize> = criteria
        .iter()
        .enumerate()
        .filter(|(i, (_, f))| f().report != reports[*i])
        .map(|(i, _)| i + 1)
        .collect();
    let det = differing.is_empty();
    all &= det;
    println!(
        "criterion 8: {} determinism: re-ran criteria 1-7, {} [{:.1}s]",
        if det { "PASS" } else { "FAIL" },
        if det {
            "all reports identical".to_string()
        } else {
            format!("criteria {differing:?} differ")
        },
        t.elapsed().as_secs_f64()
    );
    if !all {
        std::process::exit(1);
    }
}
