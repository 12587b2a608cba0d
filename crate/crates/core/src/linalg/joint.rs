//! Simultaneous diagonalisation of commuting normal matrices.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::eigen::hermitian_eig;
use super::haar::seeded_rng;
use super::matrix::{ComplexMatrix, C64};
use super::tuple::CommutingTuple;
use crate::error::{Error, Result};

/// Joint eigenvalue tuples with multiplicities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub points: Vec<Vec<C64>>,
    pub multiplicities: Vec<usize>,
}

impl Spectrum {
    pub fn total_multiplicity(&self) -> usize {
        self.multiplicities.iter().sum()
    }

    /// Agglomerative merge of raw joint eigenvalues at Euclidean distance ≤ `radius`.
    pub fn from_raw(raw: Vec<Vec<C64>>, radius: f64) -> Self {
        let mut points: Vec<Vec<C64>> = Vec::new();
        let mut multiplicities = Vec::new();
        for p in raw {
            let hit = points.iter().position(|q: &Vec<C64>| {
                q.iter()
                    .zip(&p)
                    .map(|(a, b)| (a - b).norm_sqr())
                    .sum::<f64>()
                    .sqrt()
                    <= radius
            });
            match hit {
                Some(k) => multiplicities[k] += 1,
                None => {
                    points.push(p);
                    multiplicities.push(1);
                }
            }
        }
        Self {
            points,
            multiplicities,
        }
    }
}

const MAX_DEPTH: usize = 64;
const RETRIES: usize = 8;
// Fixed so that the decomposition is a pure function of its input.
const COMBINATION_SEED: u64 = 0x6a6f_696e_7464_6961;

/// Returns `U` with `U* T_i U` diagonal for every coordinate, and the joint spectrum.
pub fn joint_diagonalize(tuple: &CommutingTuple, tol: f64) -> Result<(ComplexMatrix, Spectrum)> {
    tuple.ensure_normal(tol)?;
    tuple.ensure_commuting(tol)?;
    let k = tuple.size();
    if tuple.arity() == 0 || k == 0 {
        return Ok((
            ComplexMatrix::identity(k),
            Spectrum {
                points: vec![vec![]; k.min(1)],
                multiplicities: vec![k; k.min(1)],
            },
        ));
    }
    let scale = tuple
        .coords()
        .iter()
        .map(ComplexMatrix::norm_fro)
        .fold(0.0, f64::max)
        .max(1.0);
    let mut rng = seeded_rng(COMBINATION_SEED);
    let u = refine(tuple.coords(), tol, scale, &mut rng, 0)?;

    let diagonals: Vec<Vec<C64>> = tuple
        .coords()
        .iter()
        .map(|m| u.adjoint().matmul(m).matmul(&u).diag())
        .collect();
    let raw = (0..k)
        .map(|j| diagonals.iter().map(|d| d[j]).collect())
        .collect();
    Ok((u, Spectrum::from_raw(raw, tol * scale)))
}

fn is_scalar(m: &ComplexMatrix, tol: f64, scale: f64) -> bool {
    let n = m.rows();
    let mean = m.trace() / n as f64;
    (m - &ComplexMatrix::identity(n).scale(mean)).norm_fro() <= tol * scale
}

fn refine(
    mats: &[ComplexMatrix],
    tol: f64,
    scale: f64,
    rng: &mut ChaCha8Rng,
    depth: usize,
) -> Result<ComplexMatrix> {
    let n = mats[0].rows();
    if n == 1 || mats.iter().all(|m| is_scalar(m, tol, scale)) {
        return Ok(ComplexMatrix::identity(n));
    }
    if depth > MAX_DEPTH {
        return Err(Error::NoConvergence("joint_diagonalize"));
    }
    for _ in 0..RETRIES {
        // Real and imaginary parts of commuting normal matrices all commute,
        // so a generic real combination of them has the joint eigenbasis.
        let mut comb = ComplexMatrix::zeros(n, n);
        for m in mats {
            let ma = m.adjoint();
            let re = (m + &ma).scale_re(0.5);
            let im = (m - &ma).scale(C64::new(0.0, -0.5));
            comb.axpy(C64::new(rng.random_range(-1.0..1.0), 0.0), &re);
            comb.axpy(C64::new(rng.random_range(-1.0..1.0), 0.0), &im);
        }
        let (vals, vecs) = hermitian_eig(&comb, 1e-8)?;
        let spread = vals.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        let gap = 1e-8 * spread.max(f64::MIN_POSITIVE);
        let mut clusters: Vec<Vec<usize>> = vec![vec![0]];
        for j in 1..n {
            if vals[j] - vals[j - 1] <= gap {
                clusters.last_mut().unwrap().push(j);
            } else {
                clusters.push(vec![j]);
            }
        }
        if clusters.len() == 1 {
            continue;
        }
        let mut out = ComplexMatrix::zeros(n, n);
        for cluster in &clusters {
            let q = vecs.select_columns(cluster);
            let sub: Vec<ComplexMatrix> = mats
                .iter()
                .map(|m| q.adjoint().matmul(m).matmul(&q))
                .collect();
            let w = refine(&sub, tol, scale, rng, depth + 1)?;
            let qw = q.matmul(&w);
            for (c, &col) in cluster.iter().enumerate() {
                out.set_column(col, &qw.column(c));
            }
        }
        return Ok(out);
    }
    Err(Error::NoConvergence("joint_diagonalize"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::haar::{haar_unitary, seeded_rng};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn already_diagonal_pair() {
        let t = CommutingTuple::diagonal(&[
            vec![c(1.0, 0.0), c(3.0, 0.0)],
            vec![c(2.0, 0.0), c(4.0, 0.0)],
        ])
        .unwrap();
        let (u, spec) = joint_diagonalize(&t, 1e-10).unwrap();
        assert!(u.unitarity_defect() < 1e-14);
        assert_eq!(spec.points.len(), 2);
        for want in [[1.0, 3.0], [2.0, 4.0]] {
            assert!(spec
                .points
                .iter()
                .any(|p| (p[0].re - want[0]).abs() < 1e-12 && (p[1].re - want[1]).abs() < 1e-12));
        }
    }

    #[test]
    fn conjugated_diagonals_recovered_with_multiplicity() {
        let mut rng = seeded_rng(5);
        let atoms: Vec<Vec<C64>> = (0..3)
            .map(|_| (0..2).map(|_| c(rng.random(), rng.random())).collect())
            .collect();
        let pts = vec![
            atoms[0].clone(),
            atoms[1].clone(),
            atoms[0].clone(),
            atoms[2].clone(),
            atoms[1].clone(),
        ];
        let u0 = haar_unitary(5, 77);
        let t = CommutingTuple::diagonal(&pts).unwrap().conjugate_by(&u0);
        let (u, spec) = joint_diagonalize(&t, 1e-10).unwrap();
        assert_eq!(spec.points.len(), 3);
        assert_eq!(spec.total_multiplicity(), 5);
        for (a, want_mult) in atoms.iter().zip([2, 2, 1]) {
            let k = spec
                .points
                .iter()
                .position(|p| p.iter().zip(a).all(|(x, y)| (x - y).norm() < 1e-10))
                .expect("atom recovered");
            assert_eq!(spec.multiplicities[k], want_mult);
        }
        for m in t.coords() {
            let d = u.adjoint().matmul(m).matmul(&u);
            let off = (&d - &ComplexMatrix::from_diag(&d.diag())).norm_fro();
            assert!(off < 1e-9, "off-diagonal {off}");
        }
    }

    #[test]
    fn rejects_non_normal() {
        let j = ComplexMatrix::from_fn(2, 2, |i, k| {
            if i == 1 && k == 0 {
                c(1.0, 0.0)
            } else {
                c(0.0, 0.0)
            }
        });
        let t = CommutingTuple::new(vec![j]).unwrap();
        assert!(matches!(
            joint_diagonalize(&t, 1e-10),
            Err(Error::NotNormal { .. })
        ));
    }
}
