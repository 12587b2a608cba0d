//! Cyclic Jacobi eigensolver for Hermitian matrices and one-sided Jacobi SVD.

use super::matrix::{inner, norm, ComplexMatrix, C64, ZERO};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// Unitary 2×2 rotation `[[c, s], [-s e^{-iφ}, c e^{-iφ}]]` that diagonalises
/// the Hermitian block `[[a, g], [conj(g), b]]` under `J* · J`.
#[derive(Clone, Copy)]
struct Rotation {
    j00: C64,
    j01: C64,
    j10: C64,
    j11: C64,
}

impl Rotation {
    fn annihilating(a: f64, b: f64, g: C64) -> Self {
        let mag = g.norm();
        let phase = g / mag;
        let tau = (b - a) / (2.0 * mag);
        let t = if tau >= 0.0 {
            1.0 / (tau + (1.0 + tau * tau).sqrt())
        } else {
            -1.0 / (-tau + (1.0 + tau * tau).sqrt())
        };
        let c = 1.0 / (1.0 + t * t).sqrt();
        let s = t * c;
        let ph = phase.conj();
        Self {
            j00: C64::new(c, 0.0),
            j01: C64::new(s, 0.0),
            j10: ph * (-s),
            j11: ph * c,
        }
    }

    /// Columns `p`, `q` of `m` ← `[m_p, m_q] · J`.
    fn apply_right(&self, m: &mut ComplexMatrix, p: usize, q: usize) {
        for r in 0..m.rows() {
            let (x, y) = (m[(r, p)], m[(r, q)]);
            m[(r, p)] = x * self.j00 + y * self.j10;
            m[(r, q)] = x * self.j01 + y * self.j11;
        }
    }

    /// Rows `p`, `q` of `m` ← `J* · [m_p; m_q]`.
    fn apply_left_adjoint(&self, m: &mut ComplexMatrix, p: usize, q: usize) {
        for c in 0..m.cols() {
            let (x, y) = (m[(p, c)], m[(q, c)]);
            m[(p, c)] = self.j00.conj() * x + self.j10.conj() * y;
            m[(q, c)] = self.j01.conj() * x + self.j11.conj() * y;
        }
    }
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Eigendecomposition `A = U · diag(λ) · U*` of a Hermitian matrix.
/// Eigenvalues are returned in ascending order, eigenvectors as columns of `U`.
pub fn hermitian_eig(a: &ComplexMatrix, tol: f64) -> Result<(Vec<f64>, ComplexMatrix)> {
    if !a.is_square() {
        return Err(Error::SizeMismatch(format!(
            "hermitian_eig needs a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let n = a.rows();
    let scale = a.norm_fro();
    let defect = a.hermitian_defect();
    if defect > tol * scale {
        return Err(Error::NotHermitian { defect });
    }
    // symmetrise so rounding in the input cannot leak into the rotations
    let mut m = (a + &a.adjoint()).scale_re(0.5);
    for i in 0..n {
        m[(i, i)] = C64::new(m[(i, i)].re, 0.0);
    }
    let mut u = ComplexMatrix::identity(n);

    if scale > 0.0 {
        let target = 1e-15 * scale;
        let mut converged = false;
        for _ in 0..MAX_SWEEPS {
            if off_diagonal_norm(&m) <= target {
                converged = true;
                break;
            }
            let mut rotated = false;
            for p in 0..n {
                for q in p + 1..n {
                    let g = m[(p, q)];
                    if g.norm() <= 1e-300 || g.norm() < 1e-18 * scale {
                        continue;
                    }
                    let rot = Rotation::annihilating(m[(p, p)].re, m[(q, q)].re, g);
                    rot.apply_right(&mut m, p, q);
                    rot.apply_left_adjoint(&mut m, p, q);
                    m[(p, q)] = ZERO;
                    m[(q, p)] = ZERO;
                    m[(p, p)] = C64::new(m[(p, p)].re, 0.0);
                    m[(q, q)] = C64::new(m[(q, q)].re, 0.0);
                    rot.apply_right(&mut u, p, q);
                    rotated = true;
                }
            }
            if !rotated {
                converged = true;
                break;
            }
        }
        if !converged && off_diagonal_norm(&m) > 1e-12 * scale {
            return Err(Error::NoConvergence("hermitian_eig"));
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].re.total_cmp(&m[(j, j)].re));
    let values = order.iter().map(|&i| m[(i, i)].re).collect();
    Ok((values, u.select_columns(&order)))
}

/// Full singular value decomposition `A = U · Σ · V*`.
#[derive(Debug, Clone)]
pub struct Svd {
    /// `rows × rows` unitary.
    pub u: ComplexMatrix,
    /// `min(rows, cols)` singular values, descending.
    pub sigmas: Vec<f64>,
    /// `cols × cols` unitary.
    pub v: ComplexMatrix,
}

impl Svd {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let (m, n) = (self.u.rows(), self.v.rows());
        let mut sigma = ComplexMatrix::zeros(m, n);
        for (k, &s) in self.sigmas.iter().enumerate() {
            sigma[(k, k)] = C64::new(s, 0.0);
        }
        self.u.matmul(&sigma).matmul(&self.v.adjoint())
    }

    /// Number of singular values above `tol · max(1, σ_max)`.
    pub fn rank(&self, tol: f64) -> usize {
        let cutoff = tol * self.sigmas.first().copied().unwrap_or(0.0).max(1.0);
        self.sigmas.iter().filter(|&&s| s > cutoff).count()
    }

    /// Orthonormal basis of the numerical null space: the columns of `V`
    /// past [`Svd::rank`].
    pub fn null_space(&self, tol: f64) -> Vec<Vec<C64>> {
        (self.rank(tol)..self.v.cols())
            .map(|j| self.v.column(j))
            .collect()
    }

    /// Minimum-norm least-squares solution of `A x = b`, treating singular
    /// values at or below the [`Svd::rank`] cutoff as zero.
    pub fn solve_min_norm(&self, b: &[C64], tol: f64) -> Vec<C64> {
        assert_eq!(b.len(), self.u.rows(), "right-hand side length mismatch");
        let mut x = vec![C64::new(0.0, 0.0); self.v.rows()];
        for k in 0..self.rank(tol) {
            let coef = (0..b.len())
                .map(|i| self.u[(i, k)].conj() * b[i])
                .sum::<C64>()
                / self.sigmas[k];
            for (i, xi) in x.iter_mut().enumerate() {
                *xi += self.v[(i, k)] * coef;
            }
        }
        x
    }
}

pub fn svd(a: &ComplexMatrix) -> Result<Svd> {
    if a.rows() < a.cols() {
        let t = one_sided_jacobi(&a.adjoint())?;
        return Ok(Svd {
            u: t.v,
            sigmas: t.sigmas,
            v: t.u,
        });
    }
    one_sided_jacobi(a)
}

/// Hestenes one-sided Jacobi for `rows ≥ cols`.
fn one_sided_jacobi(a: &ComplexMatrix) -> Result<Svd> {
    let (m, n) = (a.rows(), a.cols());
    let mut w = a.clone();
    let mut v = ComplexMatrix::identity(n);
    let eps = 1e-15;

    let mut converged = n < 2;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let (cp, cq) = (w.column(p), w.column(q));
                let alpha = norm(&cp).powi(2);
                let beta = norm(&cq).powi(2);
                let gamma = inner(&cp, &cq);
                if alpha == 0.0 || beta == 0.0 || gamma.norm() <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                let rot = Rotation::annihilating(alpha, beta, gamma);
                rot.apply_right(&mut w, p, q);
                rot.apply_right(&mut v, p, q);
                rotated = true;
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence("svd"));
    }

    let norms: Vec<f64> = (0..n).map(|j| norm(&w.column(j))).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));
    let sigmas: Vec<f64> = order.iter().map(|&j| norms[j]).collect();
    let v = v.select_columns(&order);

    let smax = sigmas.first().copied().unwrap_or(0.0);
    let cutoff = smax * 1e-14 * (m.max(1) as f64);
    let mut u_cols: Vec<Vec<C64>> = Vec::with_capacity(m);
    for (k, &j) in order.iter().enumerate() {
        if sigmas[k] > cutoff && sigmas[k] > 0.0 {
            u_cols.push(w.column(j).iter().map(|z| z / sigmas[k]).collect());
        } else {
            break;
        }
    }
    let u = complete_orthonormal(m, u_cols);
    Ok(Svd { u, sigmas, v })
}

/// Extends orthonormal columns to a full unitary by Gram–Schmidt against the
/// standard basis.
pub(crate) fn complete_orthonormal(m: usize, mut cols: Vec<Vec<C64>>) -> ComplexMatrix {
    // re-orthogonalise what we were given; singular vectors of tiny σ are noisy
    let given = std::mem::take(&mut cols);
    for c in given {
        push_orthogonal(&mut cols, c, 1e-8);
    }
    let mut e = 0;
    while cols.len() < m && e < m {
        let mut v = vec![ZERO; m];
        v[e] = C64::new(1.0, 0.0);
        push_orthogonal(&mut cols, v, 1e-8);
        e += 1;
    }
    ComplexMatrix::from_columns(m, &cols)
}

/// Orthogonalises `v` against `basis` (two passes) and appends it when the
/// residual norm exceeds `threshold · ‖v‖`. Returns whether it was added.
pub(crate) fn push_orthogonal(basis: &mut Vec<Vec<C64>>, mut v: Vec<C64>, threshold: f64) -> bool {
    let original = norm(&v);
    if original == 0.0 {
        return false;
    }
    for _ in 0..2 {
        for b in basis.iter() {
            let c = inner(b, &v);
            for (x, y) in v.iter_mut().zip(b) {
                *x -= c * y;
            }
        }
    }
    let r = norm(&v);
    if r <= threshold * original {
        return false;
    }
    for x in v.iter_mut() {
        *x /= r;
    }
    basis.push(v);
    true
}

/// Largest singular value.
pub fn operator_norm(a: &ComplexMatrix) -> f64 {
    if a.rows() == 0 || a.cols() == 0 {
        return 0.0;
    }
    match svd(a) {
        Ok(s) => s.sigmas[0],
        // Jacobi on finite input does not fail in practice; fall back to a bound
        Err(_) => a.norm_fro(),
    }
}

/// PSD test: smallest eigenvalue ≥ `-tol · max(1, ‖A‖)`.
pub fn is_psd(a: &ComplexMatrix, tol: f64) -> Result<bool> {
    Ok(min_eigenvalue(a, tol)? >= -tol * a.norm_fro().max(1.0))
}

/// Smallest eigenvalue of `(A + A*)/2`; no Hermitian precondition.
pub fn min_eigenvalue_hermitian_part(a: &ComplexMatrix) -> f64 {
    if a.rows() == 0 {
        return 0.0;
    }
    let sym = (a + &a.adjoint()).scale_re(0.5);
    hermitian_eig(&sym, f64::INFINITY)
        .map(|(v, _)| v[0])
        .unwrap_or(f64::NAN)
}

pub fn min_eigenvalue(a: &ComplexMatrix, tol: f64) -> Result<f64> {
    if a.rows() == 0 {
        return Ok(0.0);
    }
    let (vals, _) = hermitian_eig(a, tol)?;
    Ok(vals[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::haar::gaussian_matrix;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn identity_eigenvalues() {
        let (vals, u) = hermitian_eig(&ComplexMatrix::identity(3), 1e-10).unwrap();
        assert_eq!(vals, vec![1.0, 1.0, 1.0]);
        assert_eq!(u, ComplexMatrix::identity(3));
    }

    #[test]
    fn swap_matrix_eigenvalues() {
        let a = ComplexMatrix::new(2, 2, vec![c(0.0), c(1.0), c(1.0), c(0.0)]).unwrap();
        let (vals, _) = hermitian_eig(&a, 1e-10).unwrap();
        assert!((vals[0] + 1.0).abs() < 1e-15 && (vals[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn random_hermitian_reconstructs() {
        for seed in 0..20 {
            let b = gaussian_matrix(8, 8, seed);
            let a = &b + &b.adjoint();
            let (vals, u) = hermitian_eig(&a, 1e-10).unwrap();
            let d = ComplexMatrix::from_diag(&vals.iter().map(|&x| c(x)).collect::<Vec<_>>());
            let res = (&a - &u.matmul(&d).matmul(&u.adjoint())).norm_fro() / a.norm_fro();
            assert!(res < 1e-12, "residual {res}");
            assert!(u.unitarity_defect() < 1e-12);
            assert!(vals.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let a = ComplexMatrix::new(2, 2, vec![c(0.0), c(1.0), c(0.0), c(0.0)]).unwrap();
        assert!(matches!(
            hermitian_eig(&a, 1e-10),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn svd_small_cases() {
        let z = svd(&ComplexMatrix::zeros(3, 2)).unwrap();
        assert_eq!(z.sigmas, vec![0.0, 0.0]);
        assert!(z.u.unitarity_defect() < 1e-14);
        let d = svd(&ComplexMatrix::from_diag(&[c(3.0), c(4.0)])).unwrap();
        assert!((d.sigmas[0] - 4.0).abs() < 1e-15 && (d.sigmas[1] - 3.0).abs() < 1e-15);
    }

    #[test]
    fn svd_random_rectangular() {
        for seed in 0..10 {
            for (m, n) in [(5, 7), (7, 5), (4, 4), (1, 6)] {
                let a = gaussian_matrix(m, n, seed);
                let s = svd(&a).unwrap();
                let res = (&a - &s.reconstruct()).norm_fro() / a.norm_fro();
                assert!(res < 1e-12, "{m}x{n} residual {res}");
                assert!(s.u.unitarity_defect() < 1e-12 && s.v.unitarity_defect() < 1e-12);
                assert!(s.sigmas.windows(2).all(|w| w[0] >= w[1]));
            }
        }
    }

    #[test]
    fn operator_norm_examples() {
        assert!((operator_norm(&ComplexMatrix::identity(4)) - 1.0).abs() < 1e-15);
        assert!((operator_norm(&ComplexMatrix::from_diag(&[c(0.5), c(-2.0)])) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn psd_examples() {
        assert!(is_psd(&ComplexMatrix::identity(2), 1e-10).unwrap());
        assert!(!is_psd(&ComplexMatrix::from_diag(&[c(1.0), c(-0.1)]), 1e-10).unwrap());
        let b = gaussian_matrix(4, 6, 3);
        assert!(is_psd(&b.adjoint().matmul(&b), 1e-10).unwrap());
    }
}
