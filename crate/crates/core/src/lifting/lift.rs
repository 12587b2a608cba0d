use serde::Serialize;

use super::{intertwining_residual, SubnormalModel};
use crate::error::{Error, Result};
use crate::linalg::{min_eigenvalue_hermitian_part, operator_norm, svd, ComplexMatrix, C64};
use crate::verify::reducing_span;

/// Singular values below this fraction of the largest count as zero when
/// solving for the lift and measuring its solution set.
const LIFT_RANK_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LiftResult {
    /// Matrix of `X̃` from the extension of `H` to the extension of `J`, in
    /// the bases `ext_s` and `ext_t`.
    #[serde(skip)]
    pub x_tilde: ComplexMatrix,
    #[serde(skip)]
    pub ext_s: ComplexMatrix,
    #[serde(skip)]
    pub ext_t: ComplexMatrix,
    pub ext_s_dimension: usize,
    pub ext_t_dimension: usize,
    /// `‖A x̃ − b‖ / max(1, ‖X‖_F)` for the stacked lifting system.
    pub existence_residual: f64,
    /// Dimension of the affine solution set; 0 means unique.
    pub solution_dimension: usize,
    pub norm_x: f64,
    pub norm_lift: f64,
    pub norm_gap: f64,
    /// `‖P_J X̃|_H − X‖_F`.
    pub restriction_residual: f64,
    /// `max_i ‖X̃ M_i − N_i X̃‖_F` for the restricted normal tuples.
    pub intertwining_residual: f64,
}

fn check_pair(x: &ComplexMatrix, ms: &SubnormalModel, mt: &SubnormalModel, tol: f64) -> Result<()> {
    if ms.descriptor() != mt.descriptor() {
        return Err(Error::SizeMismatch(format!(
            "models over {} and {}",
            ms.descriptor(),
            mt.descriptor()
        )));
    }
    if (x.rows(), x.cols()) != (mt.s.size(), ms.s.size()) {
        return Err(Error::SizeMismatch(format!(
            "X is {}x{}, expected {}x{}",
            x.rows(),
            x.cols(),
            mt.s.size(),
            ms.s.size()
        )));
    }
    let residual = intertwining_residual(x, &ms.s, &mt.s);
    if residual > tol * x.norm_fro().max(1.0) {
        return Err(Error::NotIntertwiner { residual });
    }
    Ok(())
}

/// Solves for `X̃` with `X̃ M_i = N_i X̃` and `P_J X̃|_H = X`, where `M`, `N`
/// are the model tuples restricted to the reducing spans of `H` and `J`.
///
/// The stacked system is solved in the minimum-norm least-squares sense, so
/// when the extensions exceed the cyclic parts the reported lift is the one
/// vanishing on their orthogonal complements.
pub fn lift(
    x: &ComplexMatrix,
    ms: &SubnormalModel,
    mt: &SubnormalModel,
    tol: f64,
) -> Result<LiftResult> {
    check_pair(x, ms, mt, tol)?;
    let (ext_s, m) = reducing_span(&ms.n, &ms.h, tol)?;
    let (ext_t, n) = reducing_span(&mt.n, &mt.h, tol)?;
    let (es, et) = (ext_s.cols(), ext_t.cols());
    // coordinates of H in ext_s and of J in ext_t
    let cs = ext_s.adjoint().matmul(&ms.h);
    let ct = ext_t.adjoint().matmul(&mt.h);

    // vec(Y M) = (Mᵗ ⊗ I) vec Y, vec(N Y) = (I ⊗ N) vec Y, vec(A Y B) = (Bᵗ ⊗ A) vec Y
    let mut blocks: Vec<ComplexMatrix> = m
        .coords()
        .iter()
        .zip(n.coords())
        .map(|(mi, ni)| {
            &mi.transpose().kron(&ComplexMatrix::identity(et))
                - &ComplexMatrix::identity(es).kron(ni)
        })
        .collect();
    let restriction = cs.transpose().kron(&ct.adjoint());
    blocks.push(restriction.clone());
    let a = ComplexMatrix::vstack(&blocks);
    let mut b = vec![C64::new(0.0, 0.0); a.rows() - restriction.rows()];
    b.extend(x.vec_col_major());

    let (y, solution_dimension) = if a.cols() == 0 {
        (Vec::new(), 0)
    } else {
        let dec = svd(&a)?;
        (
            dec.solve_min_norm(&b, LIFT_RANK_TOL),
            a.cols() - dec.rank(LIFT_RANK_TOL),
        )
    };
    let ay = a.matvec(&y);
    let raw: f64 = ay
        .iter()
        .zip(&b)
        .map(|(p, q)| (p - q).norm_sqr())
        .sum::<f64>()
        .sqrt();
    let existence_residual = raw / x.norm_fro().max(1.0);
    if existence_residual > tol {
        return Err(Error::NoLiftExists {
            residual: existence_residual,
        });
    }
    let x_tilde = ComplexMatrix::from_vec_col_major(et, es, &y);
    let restriction_residual = (&ct.adjoint().matmul(&x_tilde).matmul(&cs) - x).norm_fro();
    let norm_x = operator_norm(x);
    let norm_lift = operator_norm(&x_tilde);
    Ok(LiftResult {
        intertwining_residual: intertwining_residual(&x_tilde, &m, &n),
        x_tilde,
        ext_s,
        ext_t,
        ext_s_dimension: es,
        ext_t_dimension: et,
        existence_residual,
        solution_dimension,
        norm_x,
        norm_lift,
        norm_gap: (norm_lift - norm_x).abs(),
        restriction_residual,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DominationReport {
    pub pass: bool,
    /// Number of distinct support points checked.
    pub points: usize,
    /// Smallest eigenvalue of `‖X‖² ρ_S({δ}) − X* ρ_T({δ}) X` over all points.
    pub min_eigenvalue: f64,
}

fn atom_projection(model: &SubnormalModel, point: &[C64], radius: f64) -> ComplexMatrix {
    let diag: Vec<C64> = model
        .measure
        .atoms()
        .iter()
        .map(|a| {
            let dist = a
                .point
                .iter()
                .zip(point)
                .map(|(p, q)| (p - q).norm_sqr())
                .sum::<f64>()
                .sqrt();
            C64::new(if dist <= radius { 1.0 } else { 0.0 }, 0.0)
        })
        .collect();
    let e = ComplexMatrix::from_diag(&diag);
    model.h.adjoint().matmul(&e).matmul(&model.h)
}

/// Checks `X* ρ_T({δ}) X ⪯ ‖X‖² ρ_S({δ})` at every support point `δ` of
/// either measure, with `ρ({δ})` the compression of the atom projection to
/// the model subspace. Points closer than `tol` are identified.
pub fn semispectral_domination(
    x: &ComplexMatrix,
    ms: &SubnormalModel,
    mt: &SubnormalModel,
    tol: f64,
) -> Result<DominationReport> {
    check_pair(x, ms, mt, tol)?;
    let mut points: Vec<&[C64]> = Vec::new();
    for a in ms.measure.atoms().iter().chain(mt.measure.atoms()) {
        let seen = points.iter().any(|p| {
            p.iter()
                .zip(&a.point)
                .map(|(u, v)| (u - v).norm_sqr())
                .sum::<f64>()
                .sqrt()
                <= tol
        });
        if !seen {
            points.push(&a.point);
        }
    }
    let nx2 = operator_norm(x).powi(2);
    let xa = x.adjoint();
    let mut worst = f64::INFINITY;
    for p in &points {
        let rs = atom_projection(ms, p, tol);
        let rt = atom_projection(mt, p, tol);
        let gap = &rs.scale_re(nx2) - &xa.matmul(&rt).matmul(x);
        worst = worst.min(min_eigenvalue_hermitian_part(&gap));
    }
    if points.is_empty() || x.cols() == 0 {
        worst = 0.0;
    }
    Ok(DominationReport {
        pass: worst >= -tol * nx2.max(1.0),
        points: points.len(),
        min_eigenvalue: worst,
    })
}

/// `(hypothesis, conclusion)` of one implication; it holds unless the
/// hypothesis is true and the conclusion false.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Implication {
    pub hypothesis: bool,
    pub conclusion: bool,
}

impl Implication {
    pub fn holds(self) -> bool {
        !self.hypothesis || self.conclusion
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TransferReport {
    pub isometric: Implication,
    pub dense_range: Implication,
    pub bijective: Implication,
}

impl TransferReport {
    pub fn holds(&self) -> bool {
        self.isometric.holds() && self.dense_range.holds() && self.bijective.holds()
    }
}

fn is_isometric(m: &ComplexMatrix, tol: f64) -> bool {
    m.unitarity_defect() <= tol
}

fn rank(m: &ComplexMatrix, tol: f64) -> usize {
    if m.rows() == 0 || m.cols() == 0 {
        return 0;
    }
    svd(m).map(|d| d.rank(tol)).unwrap_or(0)
}

fn is_surjective(m: &ComplexMatrix, tol: f64) -> bool {
    rank(m, tol) == m.rows()
}

fn is_bijective(m: &ComplexMatrix, tol: f64) -> bool {
    m.rows() == m.cols() && rank(m, tol) == m.rows()
}

/// Whether isometry, surjectivity and bijectivity of `X` carry over to `X̃`.
/// In finite dimensions dense range is surjectivity; ranks are numerical at
/// cutoff `tol · max(1, σ_max)`.
pub fn transfer_checks(x: &ComplexMatrix, x_tilde: &ComplexMatrix, tol: f64) -> TransferReport {
    TransferReport {
        isometric: Implication {
            hypothesis: is_isometric(x, tol),
            conclusion: is_isometric(x_tilde, tol),
        },
        dense_range: Implication {
            hypothesis: is_surjective(x, tol),
            conclusion: is_surjective(x_tilde, tol),
        },
        bijective: Implication {
            hypothesis: is_bijective(x, tol),
            conclusion: is_bijective(x_tilde, tol),
        },
    }
}
