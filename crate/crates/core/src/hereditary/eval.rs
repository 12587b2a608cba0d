use std::collections::{BTreeMap, HashMap};

use super::poly::HereditaryPolynomial;
use crate::error::{Error, Result};
use crate::linalg::{CommutingTuple, ComplexMatrix, C64, DEFAULT_TOL, ONE, ZERO};

/// Largest total degree accepted by the evaluators.
pub const MAX_TOTAL_DEGREE: usize = 64;

fn check_poly(p: &HereditaryPolynomial, arity: usize) -> Result<()> {
    if p.nvars() != arity {
        return Err(Error::ArityMismatch {
            expected: p.nvars(),
            got: arity,
        });
    }
    if p.total_degree() > MAX_TOTAL_DEGREE {
        return Err(Error::CapExceeded(format!(
            "total degree {} exceeds {MAX_TOTAL_DEGREE}",
            p.total_degree()
        )));
    }
    Ok(())
}

/// Evaluates many polynomials on one tuple, sharing the powers `S^α`.
pub struct Evaluator<'a> {
    tuple: &'a CommutingTuple,
    powers: HashMap<Vec<u8>, ComplexMatrix>,
}

impl<'a> Evaluator<'a> {
    /// Fails with `NotCommuting` when some `‖[S_i, S_j]‖` exceeds `tol` (relative).
    pub fn new(tuple: &'a CommutingTuple, tol: f64) -> Result<Self> {
        tuple.ensure_commuting(tol)?;
        Ok(Self {
            tuple,
            powers: HashMap::new(),
        })
    }

    pub fn tuple(&self) -> &CommutingTuple {
        self.tuple
    }

    fn ensure_power(&mut self, alpha: &[u8]) {
        if self.powers.contains_key(alpha) {
            return;
        }
        let m = match alpha.iter().position(|&e| e > 0) {
            None => ComplexMatrix::identity(self.tuple.size()),
            Some(i) => {
                let mut prev = alpha.to_vec();
                prev[i] -= 1;
                self.ensure_power(&prev);
                self.tuple.coords()[i].matmul(&self.powers[&prev])
            }
        };
        self.powers.insert(alpha.to_vec(), m);
    }

    /// `S^α` (memoized).
    pub fn power(&mut self, alpha: &[u8]) -> &ComplexMatrix {
        self.ensure_power(alpha);
        &self.powers[alpha]
    }

    /// `Σ a_{α,β} S*^β S^α`. Terms are grouped by `β` so each adjoint power
    /// multiplies once from the left.
    pub fn evaluate(&mut self, p: &HereditaryPolynomial) -> Result<ComplexMatrix> {
        check_poly(p, self.tuple.arity())?;
        let n = self.tuple.size();
        let mut by_beta: BTreeMap<&[u8], ComplexMatrix> = BTreeMap::new();
        for (m, c) in p.terms() {
            self.ensure_power(&m.z);
            let sa = &self.powers[&m.z];
            by_beta
                .entry(m.w.as_slice())
                .or_insert_with(|| ComplexMatrix::zeros(n, n))
                .axpy(*c, sa);
        }
        let mut out = ComplexMatrix::zeros(n, n);
        for (beta, inner) in by_beta {
            if beta.iter().all(|&e| e == 0) {
                out.axpy(ONE, &inner);
            } else {
                let left = self.power(beta).adjoint();
                out.axpy(ONE, &left.matmul(&inner));
            }
        }
        Ok(out)
    }
}

/// `p(S, S*)` with the adjoints on the left. Commutation is checked at
/// [`DEFAULT_TOL`]; use [`Evaluator`] to pick another tolerance.
pub fn evaluate(p: &HereditaryPolynomial, s: &CommutingTuple) -> Result<ComplexMatrix> {
    check_poly(p, s.arity())?;
    Evaluator::new(s, DEFAULT_TOL)?.evaluate(p)
}

/// `p(z, z̄)`.
pub fn scalar_eval(p: &HereditaryPolynomial, z: &[C64]) -> Result<C64> {
    check_poly(p, z.len())?;
    let deg = p.total_degree();
    let table = |conj: bool| -> Vec<Vec<C64>> {
        z.iter()
            .map(|&x| {
                let x = if conj { x.conj() } else { x };
                let mut row = vec![ONE; deg + 1];
                for k in 1..=deg {
                    row[k] = row[k - 1] * x;
                }
                row
            })
            .collect()
    };
    let (zp, wp) = (table(false), table(true));
    let mut acc = ZERO;
    for (m, c) in p.terms() {
        let mut t = *c;
        for (i, (&a, &b)) in m.z.iter().zip(&m.w).enumerate() {
            if a > 0 {
                t *= zp[i][a as usize];
            }
            if b > 0 {
                t *= wp[i][b as usize];
            }
        }
        acc += t;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::sample_shilov;
    use crate::hereditary::poly::Monomial;
    use crate::linalg::{haar_unitary, seeded_rng};
    use rand::Rng;

    fn one_minus_zw(n: usize, i: usize) -> HereditaryPolynomial {
        &HereditaryPolynomial::one(n) - &HereditaryPolynomial::z_w(n, i, i)
    }

    fn random_poly(nvars: usize, terms: usize, max_exp: u8, seed: u64) -> HereditaryPolynomial {
        let mut rng = seeded_rng(seed);
        let mut p = HereditaryPolynomial::zero(nvars);
        for _ in 0..terms {
            let z = (0..nvars).map(|_| rng.random_range(0..=max_exp)).collect();
            let w = (0..nvars).map(|_| rng.random_range(0..=max_exp)).collect();
            p.add_term(
                Monomial { z, w },
                C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
            );
        }
        p
    }

    #[test]
    fn unitary_isometry_defect_vanishes() {
        let u = haar_unitary(4, 1);
        let s = CommutingTuple::new(vec![u]).unwrap();
        assert!(evaluate(&one_minus_zw(1, 0), &s).unwrap().norm_fro() < 1e-12);
    }

    #[test]
    fn sphere_defect_vanishes_on_diagonal_shilov_tuple() {
        let d = "IV(3)".parse().unwrap();
        let pts = sample_shilov(&d, 5, 2);
        let s = CommutingTuple::diagonal(&pts).unwrap();
        let mut p = HereditaryPolynomial::one(3);
        for i in 0..3 {
            p = &p - &HereditaryPolynomial::z_w(3, i, i);
        }
        assert!(evaluate(&p, &s).unwrap().norm_fro() < 1e-12);
    }

    #[test]
    fn jordan_block_square_defect() {
        // S e1 = e2, S e2 = 0
        let j = ComplexMatrix::from_fn(2, 2, |i, k| if i == 1 && k == 0 { ONE } else { ZERO });
        let s = CommutingTuple::new(vec![j]).unwrap();
        let v = evaluate(&one_minus_zw(1, 0).pow(2), &s).unwrap();
        let want = ComplexMatrix::from_diag(&[C64::new(-1.0, 0.0), ONE]);
        assert!((&v - &want).norm_fro() < 1e-15);
    }

    #[test]
    fn stars_stay_on_the_left() {
        // z w on the Jordan block is S*S = diag(1, 0); SS* would be diag(0, 1)
        let j = ComplexMatrix::from_fn(2, 2, |i, k| if i == 1 && k == 0 { ONE } else { ZERO });
        let s = CommutingTuple::new(vec![j]).unwrap();
        let v = evaluate(&HereditaryPolynomial::z_w(1, 0, 0), &s).unwrap();
        assert_eq!(v[(0, 0)], ONE);
        assert_eq!(v[(1, 1)], ZERO);
    }

    #[test]
    fn scalar_points() {
        let z = C64::from_polar(1.0, 0.7);
        assert!(scalar_eval(&one_minus_zw(1, 0), &[z]).unwrap().norm() < 1e-15);
        let ph = C64::from_polar(1.0, -1.1);
        let x = [ph * 0.3, ph * -0.8];
        let p = &HereditaryPolynomial::z_w(2, 1, 0) - &HereditaryPolynomial::z_w(2, 0, 1);
        assert!(scalar_eval(&p, &x).unwrap().norm() < 1e-15);
    }

    #[test]
    fn scalar_matches_one_by_one_matrices() {
        let mut rng = seeded_rng(8);
        for seed in 0..20 {
            let p = random_poly(3, 6, 3, seed);
            let z: Vec<C64> = (0..3)
                .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect();
            let s = CommutingTuple::diagonal(std::slice::from_ref(&z)).unwrap();
            let m = evaluate(&p, &s).unwrap();
            assert!((m[(0, 0)] - scalar_eval(&p, &z).unwrap()).norm() < 1e-12);
        }
    }

    #[test]
    fn diagonal_consistency_and_linearity() {
        let d = "I(1,2)".parse().unwrap();
        let pts = sample_shilov(&d, 4, 5);
        let s = CommutingTuple::diagonal(&pts).unwrap();
        let (p, q) = (random_poly(2, 5, 2, 1), random_poly(2, 5, 2, 2));
        let mut ev = Evaluator::new(&s, 1e-10).unwrap();
        let (ep, eq, es) = (
            ev.evaluate(&p).unwrap(),
            ev.evaluate(&q).unwrap(),
            ev.evaluate(&(&p + &q)).unwrap(),
        );
        assert!((&es - &(&ep + &eq)).norm_fro() < 1e-12 * (1.0 + es.norm_fro()));
        for (k, z) in pts.iter().enumerate() {
            assert!((ep[(k, k)] - scalar_eval(&p, z).unwrap()).norm() < 1e-12);
        }
    }

    #[test]
    fn errors() {
        let a = ComplexMatrix::from_fn(2, 2, |i, j| if i < j { ONE } else { ZERO });
        let b = a.transpose();
        let s = CommutingTuple::new(vec![a, b]).unwrap();
        assert!(matches!(
            evaluate(&one_minus_zw(2, 0), &s),
            Err(Error::NotCommuting { .. })
        ));
        assert!(matches!(
            evaluate(&one_minus_zw(3, 0), &s),
            Err(Error::ArityMismatch { .. })
        ));
        assert!(matches!(
            scalar_eval(&one_minus_zw(3, 0), &[ONE]),
            Err(Error::ArityMismatch { .. })
        ));
        let big = one_minus_zw(1, 0).pow(33);
        assert!(matches!(
            scalar_eval(&big, &[ONE]),
            Err(Error::CapExceeded(_))
        ));
    }
}
