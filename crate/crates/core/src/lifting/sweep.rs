use rand::Rng;
#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::Serialize;

use super::{
    intertwiner_space, lift, semispectral_domination, transfer_checks, Atom, AtomicMeasure,
    SubnormalModel, TransferReport,
};
use crate::domain::{sample_shilov_with, DomainDescriptor};
use crate::error::Result;
use crate::linalg::haar::complex_normal;
use crate::linalg::{operator_norm, seeded_rng, ComplexMatrix, C64};
use crate::verify::trial_seed;

/// At most this many intertwiner basis elements are checked per trial.
const MAX_BASIS_CHECKS: usize = 6;
const NORM_GAP_BOUND: f64 = 1e-8;
const RESTRICTION_BOUND: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LiftCheck {
    /// `basis k`, `combination` or `embedding`.
    pub source: String,
    pub norm_x: f64,
    pub domination: bool,
    pub domination_min_eigenvalue: f64,
    pub lifted: bool,
    pub existence_residual: Option<f64>,
    pub solution_dimension: Option<usize>,
    pub norm_gap: Option<f64>,
    pub restriction_residual: Option<f64>,
    pub transfer: Option<TransferReport>,
    pub error: Option<String>,
}

impl LiftCheck {
    /// Domination holds, the lift exists and every quantitative check passes.
    pub fn ok(&self) -> bool {
        self.domination
            && self.lifted
            && self.norm_ok()
            && self.restriction_ok()
            && self.transfer.as_ref().is_none_or(TransferReport::holds)
    }

    fn norm_ok(&self) -> bool {
        self.norm_gap
            .is_none_or(|g| g <= NORM_GAP_BOUND * self.norm_x.max(1.0))
    }

    fn restriction_ok(&self) -> bool {
        self.restriction_residual
            .is_none_or(|r| r <= RESTRICTION_BOUND)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelTrial {
    pub index: usize,
    pub seed: u64,
    /// `embedding` (J contains a copy of H) or `random`.
    pub kind: String,
    pub atoms_s: usize,
    pub atoms_t: usize,
    pub dim_h: usize,
    pub dim_j: usize,
    pub intertwiner_dimension: usize,
    pub checks: Vec<LiftCheck>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LiftingSweepReport {
    pub descriptor: DomainDescriptor,
    pub trials: usize,
    pub seed: u64,
    pub tol: f64,
    pub checks: usize,
    pub domination_failures: usize,
    pub lift_failures: usize,
    pub norm_gap_violations: usize,
    pub restriction_violations: usize,
    /// Checks where some implication had a true hypothesis.
    pub transfer_antecedents: usize,
    pub transfer_violations: usize,
    pub errors: usize,
    pub outcomes: Vec<ModelTrial>,
}

impl LiftingSweepReport {
    pub fn clean(&self) -> bool {
        self.domination_failures == 0
            && self.lift_failures == 0
            && self.norm_gap_violations == 0
            && self.restriction_violations == 0
            && self.transfer_violations == 0
            && self.errors == 0
    }
}

fn random_function<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Vec<C64> {
    (0..len).map(|_| complex_normal(rng)).collect()
}

fn random_atoms<R: Rng + ?Sized>(
    pool: &[Vec<C64>],
    d: &DomainDescriptor,
    extra: usize,
    rng: &mut R,
) -> Vec<Atom> {
    let mut atoms = Vec::new();
    for p in pool {
        for _ in 0..rng.random_range(1..=2) {
            atoms.push(Atom {
                point: p.clone(),
                weight: rng.random_range(0.2..2.0),
            });
        }
    }
    for _ in 0..extra {
        atoms.push(Atom {
            point: sample_shilov_with(d, rng),
            weight: rng.random_range(0.2..2.0),
        });
    }
    atoms
}

/// Domination, lift and transfer checks for one intertwiner `x`.
pub fn check_intertwiner(
    source: String,
    x: &ComplexMatrix,
    ms: &SubnormalModel,
    mt: &SubnormalModel,
    tol: f64,
) -> LiftCheck {
    let mut c = LiftCheck {
        source,
        norm_x: operator_norm(x),
        domination: false,
        domination_min_eigenvalue: f64::NAN,
        lifted: false,
        existence_residual: None,
        solution_dimension: None,
        norm_gap: None,
        restriction_residual: None,
        transfer: None,
        error: None,
    };
    match semispectral_domination(x, ms, mt, tol) {
        Ok(d) => {
            c.domination = d.pass;
            c.domination_min_eigenvalue = d.min_eigenvalue;
        }
        Err(e) => c.error = Some(e.to_string()),
    }
    match lift(x, ms, mt, tol) {
        Ok(r) => {
            c.lifted = true;
            c.existence_residual = Some(r.existence_residual);
            c.solution_dimension = Some(r.solution_dimension);
            c.norm_gap = Some(r.norm_gap);
            c.restriction_residual = Some(r.restriction_residual);
            c.transfer = Some(transfer_checks(x, &r.x_tilde, tol));
        }
        Err(e) => c.error = c.error.take().or(Some(e.to_string())),
    }
    c
}

/// One random model pair. Both measures share a pool of `1..=3` Shilov
/// points (each repeated once or twice with random weights). In `embedding`
/// trials `T`'s measure extends `S`'s atom list and its generators contain
/// `S`'s, so `H` sits isometrically inside `J`; otherwise `T` is drawn
/// independently over the same pool plus at most one extra point.
fn run_trial(d: &DomainDescriptor, index: usize, seed: u64, tol: f64) -> ModelTrial {
    let mut rng = seeded_rng(seed);
    let embedding = rng.random_bool(0.5);
    let mut out = ModelTrial {
        index,
        seed,
        kind: if embedding { "embedding" } else { "random" }.into(),
        atoms_s: 0,
        atoms_t: 0,
        dim_h: 0,
        dim_j: 0,
        intertwiner_dimension: 0,
        checks: Vec::new(),
        error: None,
    };
    let result = (|| -> Result<()> {
        let pool: Vec<Vec<C64>> = (0..rng.random_range(1..=3))
            .map(|_| sample_shilov_with(d, &mut rng))
            .collect();
        let atoms_s = random_atoms(&pool, d, 0, &mut rng);
        let gens_s: Vec<Vec<C64>> = (0..rng.random_range(1..=2))
            .map(|_| random_function(atoms_s.len(), &mut rng))
            .collect();

        let (atoms_t, gens_t) = if embedding {
            let mut atoms = atoms_s.clone();
            let extra = rng.random_range(0..=2);
            for _ in 0..extra {
                atoms.push(Atom {
                    point: sample_shilov_with(d, &mut rng),
                    weight: rng.random_range(0.2..2.0),
                });
            }
            let mut gens: Vec<Vec<C64>> = gens_s
                .iter()
                .map(|g| {
                    let mut v = g.clone();
                    v.resize(atoms.len(), C64::new(0.0, 0.0));
                    v
                })
                .collect();
            if rng.random_bool(0.5) {
                gens.push(random_function(atoms.len(), &mut rng));
            }
            (atoms, gens)
        } else {
            let extra = rng.random_range(0..=1);
            let atoms = random_atoms(&pool, d, extra, &mut rng);
            let gens = (0..rng.random_range(1..=2))
                .map(|_| random_function(atoms.len(), &mut rng))
                .collect();
            (atoms, gens)
        };
        out.atoms_s = atoms_s.len();
        out.atoms_t = atoms_t.len();
        let (ns, nt) = (atoms_s.len(), atoms_t.len());
        let ms = SubnormalModel::build(
            AtomicMeasure::new(d.clone(), atoms_s, tol)?,
            &gens_s,
            ns,
            tol,
        )?;
        let mt = SubnormalModel::build(
            AtomicMeasure::new(d.clone(), atoms_t, tol)?,
            &gens_t,
            nt,
            tol,
        )?;
        out.dim_h = ms.s.size();
        out.dim_j = mt.s.size();

        let basis = intertwiner_space(&ms.s, &mt.s, tol)?;
        out.intertwiner_dimension = basis.len();
        for (k, x) in basis.iter().take(MAX_BASIS_CHECKS).enumerate() {
            out.checks
                .push(check_intertwiner(format!("basis {k}"), x, &ms, &mt, tol));
        }
        if basis.len() > 1 {
            let mut x = ComplexMatrix::zeros(mt.s.size(), ms.s.size());
            for b in &basis {
                x.axpy(complex_normal(&mut rng), b);
            }
            out.checks
                .push(check_intertwiner("combination".into(), &x, &ms, &mt, tol));
        }
        if embedding {
            // inclusion of the S atom space as the leading coordinates of the T atom space
            let incl = ComplexMatrix::from_fn(nt, ns, |i, j| {
                C64::new(if i == j { 1.0 } else { 0.0 }, 0.0)
            });
            let x = mt.h.adjoint().matmul(&incl).matmul(&ms.h);
            out.checks
                .push(check_intertwiner("embedding".into(), &x, &ms, &mt, tol));
        }
        Ok(())
    })();
    if let Err(e) = result {
        out.error = Some(e.to_string());
    }
    out
}

/// Random model pairs over `d`: semi-spectral domination, lifting and the
/// isometry / range / bijectivity transfer for every checked intertwiner.
/// Trial `i` is seeded by `trial_seed(seed, i)`.
pub fn lifting_sweep(
    d: &DomainDescriptor,
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<LiftingSweepReport> {
    let run = |i: usize| run_trial(d, i, trial_seed(seed, i), tol);
    #[cfg(feature = "parallel")]
    let outcomes: Vec<ModelTrial> = (0..trials).into_par_iter().map(run).collect();
    #[cfg(not(feature = "parallel"))]
    let outcomes: Vec<ModelTrial> = (0..trials).map(run).collect();

    let checks: Vec<&LiftCheck> = outcomes.iter().flat_map(|t| &t.checks).collect();
    let antecedent = |r: &TransferReport| {
        r.isometric.hypothesis || r.dense_range.hypothesis || r.bijective.hypothesis
    };
    Ok(LiftingSweepReport {
        descriptor: d.clone(),
        trials,
        seed,
        tol,
        checks: checks.len(),
        domination_failures: checks.iter().filter(|c| !c.domination).count(),
        lift_failures: checks.iter().filter(|c| !c.lifted).count(),
        norm_gap_violations: checks.iter().filter(|c| !c.norm_ok()).count(),
        restriction_violations: checks.iter().filter(|c| !c.restriction_ok()).count(),
        transfer_antecedents: checks
            .iter()
            .filter(|c| c.transfer.as_ref().is_some_and(antecedent))
            .count(),
        transfer_violations: checks
            .iter()
            .filter(|c| c.transfer.as_ref().is_some_and(|r| !r.holds()))
            .count(),
        errors: outcomes.iter().filter(|t| t.error.is_some()).count(),
        outcomes,
    })
}
