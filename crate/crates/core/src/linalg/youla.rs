//! Unitary congruence normal form of complex antisymmetric matrices.
//!
//! For `Zᵗ = -Z` there is a unitary `U` with `U Z Uᵗ` equal to a direct sum of
//! blocks `[[0, σ], [-σ, 0]]` followed by zeros. The construction works inside
//! each eigenspace `E` of `Z*Z` for eigenvalue `σ² > 0`: the map
//! `x ↦ conj(Z x) / σ` is antiunitary on `E` and squares to `-1`, so `E`
//! splits into orthogonal pairs `{x, conj(Zx)/σ}`. Singular values at or
//! below `tol · ‖Z‖_F` are treated as zero.

use super::eigen::{push_orthogonal, svd};
use super::matrix::{norm, ComplexMatrix, C64};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct YoulaForm {
    pub u: ComplexMatrix,
    /// One value per 2×2 block, `⌊n/2⌋` of them, descending.
    pub sigmas: Vec<f64>,
}

impl YoulaForm {
    /// The block-diagonal canonical matrix built from `sigmas`.
    pub fn canonical(&self) -> ComplexMatrix {
        canonical_matrix(self.u.rows(), &self.sigmas)
    }
}

/// `⊕ [[0, σ_j], [-σ_j, 0]] ⊕ 0` of size `n`.
pub fn canonical_matrix(n: usize, sigmas: &[f64]) -> ComplexMatrix {
    let mut k = ComplexMatrix::zeros(n, n);
    for (j, &s) in sigmas.iter().enumerate() {
        k[(2 * j, 2 * j + 1)] = C64::new(s, 0.0);
        k[(2 * j + 1, 2 * j)] = C64::new(-s, 0.0);
    }
    k
}

pub fn youla_canonical(z: &ComplexMatrix, tol: f64) -> Result<YoulaForm> {
    if !z.is_square() {
        return Err(Error::SizeMismatch(format!(
            "antisymmetric input must be square, got {}x{}",
            z.rows(),
            z.cols()
        )));
    }
    let n = z.rows();
    let scale = z.norm_fro();
    let defect = z.antisymmetry_defect();
    if defect > tol * scale.max(1.0) {
        return Err(Error::NotAntisymmetric { defect });
    }
    let z = (z - &z.transpose()).scale_re(0.5);

    // Right singular vectors are eigenvectors of Z*Z; the SVD resolves small
    // singular values to ~ε‖Z‖ where the Gram route would only reach √ε‖Z‖.
    let dec = svd(&z)?;
    let vals = &dec.sigmas;
    let vecs = &dec.v;
    let zero_cut = tol * scale;
    let cluster_gap = 1e-8 * vals.first().copied().unwrap_or(0.0);

    let mut blocks: Vec<(f64, Vec<C64>, Vec<C64>)> = Vec::new();
    let mut null_vecs: Vec<Vec<C64>> = Vec::new();
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && vals[end - 1] - vals[end] <= cluster_gap {
            end += 1;
        }
        let mut used: Vec<Vec<C64>> = Vec::new();
        for c in start..end {
            if !push_orthogonal(&mut used, vecs.column(c), 0.5) {
                continue;
            }
            let x = used.last().unwrap().clone();
            let zx = z.matvec(&x);
            let sigma = norm(&zx);
            if sigma <= zero_cut {
                null_vecs.push(x);
                continue;
            }
            let partner: Vec<C64> = zx.iter().map(|w| w.conj() / sigma).collect();
            if !push_orthogonal(&mut used, partner, 0.5) {
                return Err(Error::NoConvergence("youla_canonical pairing"));
            }
            // columns of V = U*: a = Zx/σ, b = conj(x)
            let a: Vec<C64> = zx.iter().map(|w| w / sigma).collect();
            let b: Vec<C64> = x.iter().map(|w| w.conj()).collect();
            blocks.push((sigma, a, b));
        }
        if used.len() != end - start {
            return Err(Error::NoConvergence("youla_canonical pairing"));
        }
        start = end;
    }

    blocks.sort_by(|l, r| r.0.total_cmp(&l.0));
    let mut v_cols: Vec<Vec<C64>> = Vec::with_capacity(n);
    let mut sigmas = Vec::with_capacity(n / 2);
    for (s, a, b) in blocks {
        sigmas.push(s);
        v_cols.push(a);
        v_cols.push(b);
    }
    for y in null_vecs {
        v_cols.push(y.iter().map(|w| w.conj()).collect());
    }
    while sigmas.len() < n / 2 {
        sigmas.push(0.0);
    }
    let v = ComplexMatrix::from_columns(n, &v_cols);
    let mut u = v.adjoint();

    // Tidy rounding: recompute the block values from the final U and
    // rotate away any leftover phase so the blocks are real and positive.
    let k = u.matmul(&z).matmul(&u.transpose());
    for (j, s) in sigmas.iter_mut().enumerate() {
        let val = k[(2 * j, 2 * j + 1)];
        if val.norm() > 0.0 && *s > 0.0 {
            let ph = (val / val.norm()).conj().sqrt();
            for c in 0..n {
                u[(2 * j, c)] *= ph;
                u[(2 * j + 1, c)] *= ph;
            }
            *s = val.norm();
        }
    }
    Ok(YoulaForm { u, sigmas })
}

/// Residual `‖U Z Uᵗ − canonical‖_F`.
pub fn youla_residual(z: &ComplexMatrix, form: &YoulaForm) -> f64 {
    (&form.u.matmul(z).matmul(&form.u.transpose()) - &form.canonical()).norm_fro()
}
