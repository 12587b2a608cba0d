use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

/// Ordered list of equal-size square matrices `(S_1, …, S_n)`.
///
/// Commutativity is a checked property, not a construction invariant: use
/// [`CommutingTuple::check_commuting`].
#[derive(Debug, Clone, PartialEq)]
pub struct CommutingTuple {
    coords: Vec<ComplexMatrix>,
}

impl CommutingTuple {
    pub fn new(coords: Vec<ComplexMatrix>) -> Result<Self> {
        if let Some(first) = coords.first() {
            let k = first.rows();
            for (i, m) in coords.iter().enumerate() {
                if m.rows() != k || m.cols() != k {
                    return Err(Error::SizeMismatch(format!(
                        "coordinate {i} is {}x{}, expected {k}x{k}",
                        m.rows(),
                        m.cols()
                    )));
                }
            }
        }
        Ok(Self { coords })
    }

    /// Diagonal tuple over joint points: `S_i = diag(points[j][i])`.
    pub fn diagonal(points: &[Vec<super::C64>]) -> Result<Self> {
        let arity = points.first().map_or(0, Vec::len);
        if let Some(bad) = points.iter().find(|p| p.len() != arity) {
            return Err(Error::WrongLength {
                expected: arity,
                got: bad.len(),
            });
        }
        let coords = (0..arity)
            .map(|i| ComplexMatrix::from_diag(&points.iter().map(|p| p[i]).collect::<Vec<_>>()))
            .collect();
        Ok(Self { coords })
    }

    pub fn arity(&self) -> usize {
        self.coords.len()
    }

    /// Common matrix size `k` (0 for the empty tuple).
    pub fn size(&self) -> usize {
        self.coords.first().map_or(0, ComplexMatrix::rows)
    }

    pub fn coords(&self) -> &[ComplexMatrix] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<ComplexMatrix> {
        self.coords
    }

    /// Sub-tuple of coordinates `range`.
    pub fn block(&self, range: std::ops::Range<usize>) -> Self {
        Self {
            coords: self.coords[range].to_vec(),
        }
    }

    /// Conjugates every coordinate: `U · S_i · U*`.
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> Self {
        let ua = u.adjoint();
        Self {
            coords: self
                .coords
                .iter()
                .map(|m| u.matmul(m).matmul(&ua))
                .collect(),
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            coords: self.coords.iter().map(|m| m.scale_re(s)).collect(),
        }
    }

    /// Largest commutator defect relative to `max(1, ‖S_i‖‖S_j‖)`,
    /// with the indices where it occurs (Frobenius norms).
    pub fn commutator_defect(&self) -> (f64, usize, usize) {
        let norms: Vec<f64> = self.coords.iter().map(ComplexMatrix::norm_fro).collect();
        let mut worst = (0.0, 0, 0);
        for i in 0..self.coords.len() {
            for j in i + 1..self.coords.len() {
                let (a, b) = (&self.coords[i], &self.coords[j]);
                let d = (&a.matmul(b) - &b.matmul(a)).norm_fro() / (norms[i] * norms[j]).max(1.0);
                if d > worst.0 {
                    worst = (d, i, j);
                }
            }
        }
        worst
    }

    /// `‖S_iS_j − S_jS_i‖ ≤ tol · max(1, ‖S_i‖‖S_j‖)` for all pairs.
    pub fn check_commuting(&self, tol: f64) -> bool {
        self.commutator_defect().0 <= tol
    }

    pub fn ensure_commuting(&self, tol: f64) -> Result<()> {
        let (defect, i, j) = self.commutator_defect();
        if defect > tol {
            return Err(Error::NotCommuting { i, j, defect });
        }
        Ok(())
    }

    /// Largest relative normality defect `‖S_iS_i* − S_i*S_i‖ / ‖S_i‖²`.
    pub fn normality_defect(&self) -> (f64, usize) {
        let mut worst = (0.0, 0);
        for (i, m) in self.coords.iter().enumerate() {
            let n2 = m.norm_fro().powi(2);
            let d = if n2 == 0.0 {
                0.0
            } else {
                m.normality_defect() / n2
            };
            if d > worst.0 {
                worst = (d, i);
            }
        }
        worst
    }

    pub fn check_normal(&self, tol: f64) -> bool {
        self.normality_defect().0 <= tol
    }

    pub fn ensure_normal(&self, tol: f64) -> Result<()> {
        let (defect, index) = self.normality_defect();
        if defect > tol {
            return Err(Error::NotNormal { index, defect });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{haar::haar_unitary, C64};

    fn shift(n: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(n, n, |i, j| {
            if i == j + 1 {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
    }

    #[test]
    fn diagonal_tuples_commute() {
        let t = CommutingTuple::diagonal(&[
            vec![C64::new(1.0, 0.0), C64::new(0.0, 2.0)],
            vec![C64::new(3.0, 0.0), C64::new(4.0, -1.0)],
        ])
        .unwrap();
        assert_eq!(t.arity(), 2);
        assert!(t.check_commuting(1e-12) && t.check_normal(1e-12));
    }

    #[test]
    fn shift_and_adjoint_do_not_commute() {
        let s = shift(3);
        let t = CommutingTuple::new(vec![s.clone(), s.adjoint()]).unwrap();
        assert!(!t.check_commuting(1e-10));
        assert!(matches!(
            t.ensure_commuting(1e-10),
            Err(Error::NotCommuting { i: 0, j: 1, .. })
        ));
    }

    #[test]
    fn single_matrix_commutes() {
        assert!(CommutingTuple::new(vec![shift(4)])
            .unwrap()
            .check_commuting(0.0));
    }

    #[test]
    fn normality() {
        let u = haar_unitary(4, 1);
        assert!(CommutingTuple::new(vec![u.clone()])
            .unwrap()
            .check_normal(1e-12));
        assert!(!CommutingTuple::new(vec![shift(2)])
            .unwrap()
            .check_normal(1e-10));
        let d = ComplexMatrix::from_diag(&[
            C64::new(1.0, 1.0),
            C64::new(-2.0, 0.5),
            C64::new(0.3, 0.0),
            C64::new(0.0, 0.0),
        ]);
        let udu = u.matmul(&d).matmul(&u.adjoint());
        assert!(CommutingTuple::new(vec![udu]).unwrap().check_normal(1e-12));
    }

    #[test]
    fn rejects_mixed_sizes() {
        let r = CommutingTuple::new(vec![ComplexMatrix::identity(2), ComplexMatrix::identity(3)]);
        assert!(matches!(r, Err(Error::SizeMismatch(_))));
    }
}
