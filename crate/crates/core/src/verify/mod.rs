//! Two independent classifiers for `S_Ω`-isometries (joint spectrum inside
//! the Shilov boundary, and the domain's hereditary identities) plus the
//! compression machinery used to cross-check them.

mod equiv;

pub use equiv::{trial_seed, verify_equivalence, EquivalenceReport, TrialOutcome, MAX_TRIAL_SIZE};

use serde::Serialize;

use crate::domain::{shilov_defect, DomainDescriptor};
use crate::error::{Error, Result};
use crate::hereditary::{identity_set, Evaluator, IdentitySet};
use crate::linalg::{
    invariance_residual, joint_diagonalize, operator_norm, orthonormal_closure, CommutingTuple,
    ComplexMatrix, Spectrum,
};

/// Disagreements whose failing side lies within this multiple of `tol` are marginal.
pub const MARGINAL_FACTOR: f64 = 10.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstraintResidual {
    pub factor: usize,
    pub label: String,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub descriptor: DomainDescriptor,
    pub commuting: bool,
    pub normal: bool,
    pub spectral_pass: Option<bool>,
    /// Largest Shilov defect over the joint spectrum, when it was computed.
    pub spectral_defect: Option<f64>,
    pub spectrum: Option<Spectrum>,
    pub identity_residuals: Vec<ConstraintResidual>,
    pub identity_pass: bool,
    pub agreement: Option<bool>,
    /// The classifiers disagree but the failing side is within `10·tol`.
    pub marginal: bool,
}

impl VerificationReport {
    pub fn max_residual(&self) -> f64 {
        self.identity_residuals
            .iter()
            .map(|r| r.residual)
            .fold(0.0, f64::max)
    }
}

fn check_arity(s: &CommutingTuple, d: &DomainDescriptor) -> Result<()> {
    if s.arity() != d.dimension() {
        return Err(Error::ArityMismatch {
            expected: d.dimension(),
            got: s.arity(),
        });
    }
    Ok(())
}

/// Joint spectrum of a normal tuple and its largest Shilov defect.
pub fn spectral_defect(
    s: &CommutingTuple,
    d: &DomainDescriptor,
    tol: f64,
) -> Result<(f64, Spectrum)> {
    check_arity(s, d)?;
    let (_, spectrum) = joint_diagonalize(s, tol)?;
    let mut worst: f64 = 0.0;
    for p in &spectrum.points {
        worst = worst.max(shilov_defect(d, p)?);
    }
    Ok((worst, spectrum))
}

/// Whether every joint eigenvalue of the normal tuple lies on the Shilov boundary.
pub fn classify_spectral(
    s: &CommutingTuple,
    d: &DomainDescriptor,
    tol: f64,
) -> Result<(bool, Spectrum)> {
    let (defect, spectrum) = spectral_defect(s, d, tol)?;
    Ok((defect <= tol, spectrum))
}

/// `‖p(S,S*) − target·I‖ / max(1, |target|)` (spectral norm) for every
/// constraint of `set`, evaluated on the whole tuple.
pub fn identity_residuals(
    s: &CommutingTuple,
    set: &IdentitySet,
    tol: f64,
) -> Result<Vec<ConstraintResidual>> {
    if s.arity() != set.nvars() {
        return Err(Error::ArityMismatch {
            expected: set.nvars(),
            got: s.arity(),
        });
    }
    let mut ev = Evaluator::new(s, tol)?;
    let id = ComplexMatrix::identity(s.size());
    set.constraints()
        .iter()
        .map(|c| {
            let v = ev.evaluate(&c.poly)?;
            let residual = operator_norm(&(&v - &id.scale(c.target))) / c.target.norm().max(1.0);
            Ok(ConstraintResidual {
                factor: c.factor,
                label: c.label.clone(),
                residual,
            })
        })
        .collect()
}

/// Per-factor identity sets, built once and reused across tuples.
pub(crate) struct FactorSets {
    descriptor: DomainDescriptor,
    sets: Vec<(std::ops::Range<usize>, IdentitySet)>,
}

impl FactorSets {
    pub(crate) fn new(d: &DomainDescriptor) -> Result<Self> {
        let sets = d
            .blocks()
            .into_iter()
            .map(|(f, r)| Ok((r, identity_set(&DomainDescriptor::single(f)?)?)))
            .collect::<Result<_>>()?;
        Ok(Self {
            descriptor: d.clone(),
            sets,
        })
    }

    /// Evaluates each factor's identities on its own coordinate block.
    pub(crate) fn residuals(
        &self,
        s: &CommutingTuple,
        tol: f64,
    ) -> Result<Vec<ConstraintResidual>> {
        check_arity(s, &self.descriptor)?;
        s.ensure_commuting(tol)?;
        let mut out = Vec::new();
        for (idx, (range, set)) in self.sets.iter().enumerate() {
            for mut r in identity_residuals(&s.block(range.clone()), set, tol)? {
                r.factor = idx;
                out.push(r);
            }
        }
        Ok(out)
    }
}

/// Evaluates the identity set of `d` on `S`, factor by factor on the
/// corresponding coordinate blocks. When `S` is also normal the spectral
/// classifier runs as well and the two verdicts are compared.
pub fn classify_identities(
    s: &CommutingTuple,
    d: &DomainDescriptor,
    tol: f64,
) -> Result<VerificationReport> {
    classify_with(&FactorSets::new(d)?, s, tol)
}

pub(crate) fn classify_with(
    sets: &FactorSets,
    s: &CommutingTuple,
    tol: f64,
) -> Result<VerificationReport> {
    let d = &sets.descriptor;
    check_arity(s, d)?;
    s.ensure_commuting(tol)?;
    let commuting = true;
    let normal = s.check_normal(tol);
    let identity_residuals = sets.residuals(s, tol)?;
    let max_res = identity_residuals
        .iter()
        .map(|r| r.residual)
        .fold(0.0, f64::max);
    let identity_pass = max_res <= tol;
    let (spectral_pass, spectral_defect_value, spectrum) = if normal {
        let (defect, spectrum) = spectral_defect(s, d, tol)?;
        (Some(defect <= tol), Some(defect), Some(spectrum))
    } else {
        (None, None, None)
    };
    let agreement = spectral_pass.map(|sp| sp == identity_pass);
    let marginal = match (agreement, spectral_defect_value) {
        (Some(false), Some(defect)) => {
            let failing = if identity_pass { defect } else { max_res };
            failing <= MARGINAL_FACTOR * tol
        }
        _ => false,
    };
    Ok(VerificationReport {
        descriptor: d.clone(),
        commuting,
        normal,
        spectral_pass,
        spectral_defect: spectral_defect_value,
        spectrum,
        identity_residuals,
        identity_pass,
        agreement,
        marginal,
    })
}

/// `S_i = B* N_i B` for an orthonormal basis `B` of an `N`-invariant subspace.
///
/// Invariance means `‖(I − BB*) N_i B‖ ≤ tol · max(1, ‖N_i‖)` for every `i`.
pub fn compress(n: &CommutingTuple, basis: &ComplexMatrix, tol: f64) -> Result<CommutingTuple> {
    if basis.rows() != n.size() {
        return Err(Error::SizeMismatch(format!(
            "basis has {} rows, tuple acts on dimension {}",
            basis.rows(),
            n.size()
        )));
    }
    let scale = n
        .coords()
        .iter()
        .map(ComplexMatrix::norm_fro)
        .fold(1.0, f64::max);
    let residual = invariance_residual(basis, n.coords());
    if residual > tol * scale {
        return Err(Error::NotInvariant { residual });
    }
    let bt = basis.adjoint();
    CommutingTuple::new(
        n.coords()
            .iter()
            .map(|m| bt.matmul(&m.matmul(basis)))
            .collect(),
    )
}

/// Smallest subspace containing the columns of `basis` and invariant under
/// every `N_i` and `N_i*`, with `N` restricted to it.
pub fn reducing_span(
    n: &CommutingTuple,
    basis: &ComplexMatrix,
    tol: f64,
) -> Result<(ComplexMatrix, CommutingTuple)> {
    if basis.rows() != n.size() {
        return Err(Error::SizeMismatch(format!(
            "basis has {} rows, tuple acts on dimension {}",
            basis.rows(),
            n.size()
        )));
    }
    let mut appliers: Vec<ComplexMatrix> = n.coords().to_vec();
    appliers.extend(n.coords().iter().map(ComplexMatrix::adjoint));
    let ext = orthonormal_closure(n.size(), &basis.columns(), &appliers, tol);
    let et = ext.adjoint();
    let restricted = CommutingTuple::new(
        n.coords()
            .iter()
            .map(|m| et.matmul(&m.matmul(&ext)))
            .collect(),
    )?;
    Ok((ext, restricted))
}
