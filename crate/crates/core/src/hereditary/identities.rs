use std::fmt;

use super::charpoly::charpoly_coeffs;
use super::eval::scalar_eval;
use super::poly::HereditaryPolynomial;
use crate::domain::{DomainDescriptor, Factor};
use crate::error::Result;
use crate::linalg::{C64, ZERO};

/// `poly(S, S*) = target · I`.
#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    /// Index of the factor the constraint belongs to.
    pub factor: usize,
    pub label: String,
    pub poly: HereditaryPolynomial,
    pub target: C64,
}

impl Constraint {
    /// `|value − target| / max(1, |target|)`.
    pub fn defect(&self, value: C64) -> f64 {
        (value - self.target).norm() / self.target.norm().max(1.0)
    }
}

/// Defining identities of the Shilov-boundary normal tuples of a domain.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentitySet {
    descriptor: DomainDescriptor,
    names: Vec<String>,
    constraints: Vec<Constraint>,
}

impl IdentitySet {
    pub fn descriptor(&self) -> &DomainDescriptor {
        &self.descriptor
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    /// Variable names, e.g. `[1,2]` for a matrix entry or `2[1,2]` inside the
    /// second factor of a product. Prefix with `z` or `w` to display.
    pub fn variable_names(&self) -> &[String] {
        &self.names
    }

    /// Largest constraint defect at a scalar point, `w := z̄`.
    pub fn scalar_defect(&self, z: &[C64]) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for c in &self.constraints {
            worst = worst.max(c.defect(scalar_eval(&c.poly, z)?));
        }
        Ok(worst)
    }
}

impl fmt::Display for IdentitySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let factors = self.descriptor.factors();
        for c in &self.constraints {
            let target = if c.target.im == 0.0 {
                format!("{}", c.target.re)
            } else {
                format!("{}", c.target)
            };
            writeln!(
                f,
                "[{}] {}: {} = {}·I",
                factors[c.factor],
                c.label,
                c.poly.display_with(&self.names),
                target
            )?;
        }
        Ok(())
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Variable and sign behind entry `(i, k)` of a matrix-shaped factor.
fn entry_var(factor: Factor, i: usize, k: usize) -> Option<(usize, f64)> {
    match factor {
        Factor::TypeI { q, .. } => Some((i * q + k, 1.0)),
        Factor::TypeII { p } => {
            let (a, b) = (i.min(k), i.max(k));
            Some((a * p - a * a.saturating_sub(1) / 2 + (b - a), 1.0))
        }
        Factor::TypeIII { p } => {
            if i == k {
                return None;
            }
            let (a, b) = (i.min(k), i.max(k));
            Some((
                a * p - a * (a + 1) / 2 + (b - a - 1),
                if i < k { 1.0 } else { -1.0 },
            ))
        }
        Factor::TypeIV { .. } => None,
    }
}

fn factor_constraints(factor: Factor) -> Result<Vec<(String, HereditaryPolynomial, C64)>> {
    let nv = factor.dimension();
    let mut out = Vec::new();
    match factor {
        Factor::TypeIV { n } => {
            let mut sphere = HereditaryPolynomial::one(nv);
            for i in 0..n {
                sphere = &sphere - &HereditaryPolynomial::z_w(nv, i, i);
            }
            out.push(("spherical isometry".to_string(), sphere, ZERO));
            for i in 0..n {
                for j in i + 1..n {
                    let p =
                        &HereditaryPolynomial::z_w(nv, j, i) - &HereditaryPolynomial::z_w(nv, i, j);
                    out.push((format!("S{}*S{} self-adjoint", i + 1, j + 1), p, ZERO));
                }
            }
        }
        Factor::TypeIII { p } if p % 2 == 1 => {
            let half = (p - 1) / 2;
            for (m, q) in charpoly_coeffs(half)?.into_iter().enumerate() {
                let target = if m == 0 {
                    0.0
                } else {
                    let sign = if (m - 1) % 2 == 0 { 1.0 } else { -1.0 };
                    sign * binomial(2 * half as u64, m as u64 - 1) as f64
                };
                out.push((
                    format!("characteristic coefficient q{m}"),
                    q,
                    C64::new(target, 0.0),
                ));
            }
        }
        _ => {
            let (rows, cols) = match factor {
                Factor::TypeI { p, q } => (p, q),
                Factor::TypeII { p } | Factor::TypeIII { p } => (p, p),
                Factor::TypeIV { .. } => unreachable!(),
            };
            for i in 0..rows {
                for j in i..rows {
                    let mut poly = if i == j {
                        HereditaryPolynomial::one(nv)
                    } else {
                        HereditaryPolynomial::zero(nv)
                    };
                    for k in 0..cols {
                        if let (Some((vi, si)), Some((vj, sj))) =
                            (entry_var(factor, i, k), entry_var(factor, j, k))
                        {
                            poly = &poly
                                - &HereditaryPolynomial::z_w(nv, vi, vj)
                                    .scale(C64::new(si * sj, 0.0));
                        }
                    }
                    let label = if i == j {
                        format!("row {} unit", i + 1)
                    } else {
                        format!("rows {} and {} orthogonal", i + 1, j + 1)
                    };
                    out.push((label, poly, ZERO));
                }
            }
        }
    }
    Ok(out)
}

fn factor_names(factor: Factor, prefix: &str) -> Vec<String> {
    match factor {
        Factor::TypeIV { n } => (1..=n)
            .map(|i| {
                if prefix.is_empty() {
                    i.to_string()
                } else {
                    format!("{prefix}[{i}]")
                }
            })
            .collect(),
        Factor::TypeI { p, q } => (1..=p)
            .flat_map(|i| (1..=q).map(move |j| (i, j)))
            .map(|(i, j)| format!("{prefix}[{i},{j}]"))
            .collect(),
        Factor::TypeII { p } => (1..=p)
            .flat_map(|i| (i..=p).map(move |j| (i, j)))
            .map(|(i, j)| format!("{prefix}[{i},{j}]"))
            .collect(),
        Factor::TypeIII { p } => (1..=p)
            .flat_map(|i| (i + 1..=p).map(move |j| (i, j)))
            .map(|(i, j)| format!("{prefix}[{i},{j}]"))
            .collect(),
    }
}

/// The identity set of a domain: per factor, on its own block of variables.
///
/// * `IV(n)`: `1 − Σ z_i w_i` and `z_j w_i − z_i w_j` (`i < j`)
/// * `I(p,q)`, `II(p)`, `III(2p)`: `δ_{ij} − Σ_k z_{i,k} w_{j,k}` (`i ≤ j`) with
///   the symmetric or antisymmetric substitution for `II`, `III`
/// * `III(2p+1)`: characteristic coefficients `q_0 = 0` and
///   `q_m = (−1)^{m−1} C(2p, m−1)`
///
/// Fails only when an odd type III factor exceeds the characteristic
/// polynomial cap.
pub fn identity_set(d: &DomainDescriptor) -> Result<IdentitySet> {
    let total = d.dimension();
    let product = d.factors().len() > 1;
    let mut names = Vec::with_capacity(total);
    let mut constraints = Vec::new();
    for (idx, (factor, range)) in d.blocks().into_iter().enumerate() {
        let prefix = if product {
            (idx + 1).to_string()
        } else {
            String::new()
        };
        names.extend(factor_names(factor, &prefix));
        for (label, poly, target) in factor_constraints(factor)? {
            constraints.push(Constraint {
                factor: idx,
                label,
                poly: poly.embed(range.start, total),
                target,
            });
        }
    }
    Ok(IdentitySet {
        descriptor: d.clone(),
        names,
        constraints,
    })
}
