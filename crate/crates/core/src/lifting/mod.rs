//! Finite atomic models of `S_Ω`-isometries and the intertwiner lifting
//! experiment.
//!
//! A model is a finite atomic measure `μ` on the Shilov boundary, the
//! diagonal multiplication tuple `N` on `L²(μ)` and an `N`-invariant
//! subspace `H` spanned by polynomial orbits of generator functions. The
//! weighted space is identified with `ℂ^atoms` by multiplying function values
//! by `√weight`, so every operator is a plain matrix.
//!
//! Invariant subspaces of a normal tuple on a finite-dimensional space are
//! reducing, so the "extension" of a model's `H` (its reducing span in `L²(μ)`)
//! is `H` itself. The lab still computes it rather than assuming it.

mod lift;
mod sweep;

pub use lift::{
    lift, semispectral_domination, transfer_checks, DominationReport, Implication, LiftResult,
    TransferReport,
};
pub use sweep::{check_intertwiner, lifting_sweep, LiftCheck, LiftingSweepReport, ModelTrial};

use serde::{Deserialize, Serialize};

use crate::domain::{shilov_defect, DomainDescriptor};
use crate::error::{Error, Result};
use crate::linalg::eigen::push_orthogonal;
use crate::linalg::{invariance_residual, svd, CommutingTuple, ComplexMatrix, C64};
use crate::verify::compress;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub point: Vec<C64>,
    pub weight: f64,
}

/// Finitely many weighted Shilov points. Points may repeat.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AtomicMeasure {
    descriptor: DomainDescriptor,
    atoms: Vec<Atom>,
}

impl AtomicMeasure {
    /// Checks non-emptiness, positive finite weights and `on_shilov` at `tol`.
    pub fn new(descriptor: DomainDescriptor, atoms: Vec<Atom>, tol: f64) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::EmptyMeasure);
        }
        for (k, a) in atoms.iter().enumerate() {
            if !(a.weight.is_finite() && a.weight > 0.0) {
                return Err(Error::InvalidMeasure(format!(
                    "atom {k} has weight {}",
                    a.weight
                )));
            }
            let defect = shilov_defect(&descriptor, &a.point)?;
            if defect > tol {
                return Err(Error::InvalidMeasure(format!(
                    "atom {k} is off the Shilov boundary (defect {defect:.3e})"
                )));
            }
        }
        Ok(Self { descriptor, atoms })
    }

    pub fn descriptor(&self) -> &DomainDescriptor {
        &self.descriptor
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// `√w_k · f(k)`: a function on the atoms as a vector of the standard space.
    pub fn embed_function(&self, f: &[C64]) -> Result<Vec<C64>> {
        if f.len() != self.atoms.len() {
            return Err(Error::WrongLength {
                expected: self.atoms.len(),
                got: f.len(),
            });
        }
        Ok(f.iter()
            .zip(&self.atoms)
            .map(|(v, a)| v * a.weight.sqrt())
            .collect())
    }
}

/// `N_i = diag(ζ_i)` over the atoms `ζ` of `μ`.
pub fn multiplication_tuple(mu: &AtomicMeasure) -> Result<CommutingTuple> {
    if mu.is_empty() {
        return Err(Error::EmptyMeasure);
    }
    let points: Vec<Vec<C64>> = mu.atoms.iter().map(|a| a.point.clone()).collect();
    CommutingTuple::diagonal(&points)
}

#[derive(Debug, Clone, PartialEq)]
pub struct InvariantSubspace {
    /// Orthonormal columns spanning `{N^α g : |α| ≤ degree}`.
    pub basis: ComplexMatrix,
    /// `max_i ‖(I − P) N_i P‖_F`.
    pub residual: f64,
    pub invariant: bool,
}

/// Span of the polynomial orbits `N^α g`, `|α| ≤ degree`, of the generators,
/// with an honest invariance verdict (`residual ≤ tol · max(1, ‖N‖)`).
pub fn invariant_subspace(
    n: &CommutingTuple,
    generators: &[Vec<C64>],
    degree: usize,
    tol: f64,
) -> Result<InvariantSubspace> {
    let dim = n.size();
    let mut basis: Vec<Vec<C64>> = Vec::new();
    let mut frontier: Vec<Vec<C64>> = Vec::new();
    for g in generators {
        if g.len() != dim {
            return Err(Error::WrongLength {
                expected: dim,
                got: g.len(),
            });
        }
        if push_orthogonal(&mut basis, g.clone(), tol) {
            frontier.push(basis.last().unwrap().clone());
        }
    }
    // Images of the newest level only: older levels' images are already in the span.
    for _ in 0..degree {
        let mut next = Vec::new();
        for b in &frontier {
            for m in n.coords() {
                if push_orthogonal(&mut basis, m.matvec(b), tol) {
                    next.push(basis.last().unwrap().clone());
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    let basis = ComplexMatrix::from_columns(dim, &basis);
    let residual = invariance_residual(&basis, n.coords());
    let scale = n
        .coords()
        .iter()
        .map(ComplexMatrix::norm_fro)
        .fold(1.0, f64::max);
    Ok(InvariantSubspace {
        basis,
        residual,
        invariant: residual <= tol * scale,
    })
}

/// `μ`, its multiplication tuple `N`, an `N`-invariant subspace `H` and the
/// compression `S = N|H`.
#[derive(Debug, Clone, PartialEq)]
pub struct SubnormalModel {
    pub measure: AtomicMeasure,
    pub n: CommutingTuple,
    pub h: ComplexMatrix,
    pub s: CommutingTuple,
}

impl SubnormalModel {
    /// `generators` are functions on the atoms (one value per atom); `H` is
    /// the span of their orbits up to total degree `degree`. Fails with
    /// `NotInvariant` if that span is not invariant, e.g. when `degree` is too
    /// small to saturate.
    pub fn build(
        measure: AtomicMeasure,
        generators: &[Vec<C64>],
        degree: usize,
        tol: f64,
    ) -> Result<Self> {
        let n = multiplication_tuple(&measure)?;
        let gens = generators
            .iter()
            .map(|g| measure.embed_function(g))
            .collect::<Result<Vec<_>>>()?;
        let sub = invariant_subspace(&n, &gens, degree, tol)?;
        if !sub.invariant {
            return Err(Error::NotInvariant {
                residual: sub.residual,
            });
        }
        let s = compress(&n, &sub.basis, tol)?;
        Ok(Self {
            measure,
            n,
            h: sub.basis,
            s,
        })
    }

    pub fn descriptor(&self) -> &DomainDescriptor {
        self.measure.descriptor()
    }
}

/// Orthonormal basis (Frobenius inner product) of `{X : X S_i = T_i X ∀ i}`,
/// `X` mapping the space of `S` to the space of `T`.
///
/// Column-major `vec` turns each condition into `(S_iᵗ ⊗ I − I ⊗ T_i) vec X = 0`;
/// the null space of the stacked operator is read off an SVD with cutoff
/// `tol · max(1, σ_max)`.
pub fn intertwiner_space(
    s: &CommutingTuple,
    t: &CommutingTuple,
    tol: f64,
) -> Result<Vec<ComplexMatrix>> {
    if s.arity() != t.arity() {
        return Err(Error::ArityMismatch {
            expected: s.arity(),
            got: t.arity(),
        });
    }
    let (k, m) = (s.size(), t.size());
    if k == 0 || m == 0 {
        return Ok(Vec::new());
    }
    let blocks: Vec<ComplexMatrix> = s
        .coords()
        .iter()
        .zip(t.coords())
        .map(|(si, ti)| {
            &si.transpose().kron(&ComplexMatrix::identity(m)) - &ComplexMatrix::identity(k).kron(ti)
        })
        .collect();
    let stacked = if blocks.is_empty() {
        ComplexMatrix::zeros(1, k * m)
    } else {
        ComplexMatrix::vstack(&blocks)
    };
    let dec = svd(&stacked)?;
    Ok(dec
        .null_space(tol)
        .iter()
        .map(|v| ComplexMatrix::from_vec_col_major(m, k, v))
        .collect())
}

/// `max_i ‖X S_i − T_i X‖_F`.
pub fn intertwining_residual(x: &ComplexMatrix, s: &CommutingTuple, t: &CommutingTuple) -> f64 {
    s.coords()
        .iter()
        .zip(t.coords())
        .map(|(si, ti)| (&x.matmul(si) - &ti.matmul(x)).norm_fro())
        .fold(0.0, f64::max)
}
