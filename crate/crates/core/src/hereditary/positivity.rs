use serde::Serialize;

use super::eval::Evaluator;
use super::poly::{HereditaryPolynomial, Monomial};
use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::linalg::{min_eigenvalue_hermitian_part, operator_norm, CommutingTuple};

/// Upper bound on the number of multi-degrees `(K+1)^n` one certificate may check.
pub const MAX_CERTIFICATE_ENTRIES: usize = 1 << 14;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PositivityEntry {
    pub degrees: Vec<usize>,
    pub psd: bool,
    pub min_eigenvalue: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PositivityReport {
    pub max_degree: usize,
    pub entries: Vec<PositivityEntry>,
    pub pass: bool,
}

impl PositivityReport {
    pub fn first_failure(&self) -> Option<&PositivityEntry> {
        self.entries.iter().find(|e| !e.psd)
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `Π_i (1 − z_i w_i)^{k_i} = Σ_{j ≤ k} Π_i (−1)^{j_i} C(k_i, j_i) z^j w^j`.
fn defect_power(k: &[usize]) -> HereditaryPolynomial {
    let n = k.len();
    let mut terms = Vec::new();
    let mut j = vec![0usize; n];
    loop {
        let c: f64 = k
            .iter()
            .zip(&j)
            .map(|(&ki, &ji)| {
                if ji % 2 == 1 {
                    -binomial(ki, ji)
                } else {
                    binomial(ki, ji)
                }
            })
            .product();
        let e: Vec<u8> = j.iter().map(|&x| x as u8).collect();
        terms.push((Monomial { z: e.clone(), w: e }, C64::new(c, 0.0)));
        let Some(i) = (0..n).find(|&i| j[i] < k[i]) else {
            break;
        };
        j[i] += 1;
        j[..i].iter_mut().for_each(|x| *x = 0);
    }
    HereditaryPolynomial::from_terms(n, terms)
}

/// Checks `Π_i (1 − z_i w_i)^{k_i}(S, S*) ⪰ 0` for every `0 ≤ k_i ≤ max_degree`.
///
/// An entry is PSD when its smallest eigenvalue is at least
/// `−tol · max(1, ‖value‖_F)`.
pub fn positivity_certificate(
    s: &CommutingTuple,
    max_degree: usize,
    tol: f64,
) -> Result<PositivityReport> {
    for (index, m) in s.coords().iter().enumerate() {
        let norm = operator_norm(m);
        if norm > 1.0 + tol {
            return Err(Error::NotContraction { index, norm });
        }
    }
    let n = s.arity();
    let count = (max_degree + 1)
        .checked_pow(n as u32)
        .filter(|&c| c <= MAX_CERTIFICATE_ENTRIES);
    let Some(count) = count else {
        return Err(Error::CapExceeded(format!(
            "{} multi-degrees exceed the certificate cap {MAX_CERTIFICATE_ENTRIES}",
            if n > 0 {
                format!("({}+1)^{n}", max_degree)
            } else {
                "0".into()
            }
        )));
    };
    let mut ev = Evaluator::new(s, tol)?;

    let mut entries = Vec::with_capacity(count);
    let mut degrees = vec![0usize; n];
    for _ in 0..count {
        let poly = defect_power(&degrees);
        let value = ev.evaluate(&poly)?;
        let min_eigenvalue = min_eigenvalue_hermitian_part(&value);
        let psd = min_eigenvalue >= -tol * value.norm_fro().max(1.0);
        entries.push(PositivityEntry {
            degrees: degrees.clone(),
            psd,
            min_eigenvalue,
        });
        // odometer, first coordinate fastest
        for d in degrees.iter_mut() {
            if *d < max_degree {
                *d += 1;
                break;
            }
            *d = 0;
        }
    }
    let pass = entries.iter().all(|e| e.psd);
    Ok(PositivityReport {
        max_degree,
        entries,
        pass,
    })
}
