use rand::Rng;
#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::Serialize;

use super::{classify_with, identity_residuals, FactorSets};
use crate::domain::{perturb_off_shilov, sample_shilov_with, DomainDescriptor, Factor};
use crate::error::{Error, Result};
use crate::hereditary::identity_set;
use crate::linalg::{haar_unitary_with, seeded_rng, CommutingTuple, C64};

const MAX_ATOMS: usize = 4;
const MAX_MULTIPLICITY: usize = 2;
/// Largest matrix size a trial produces.
pub const MAX_TRIAL_SIZE: usize = MAX_ATOMS * MAX_MULTIPLICITY;
const MAX_FACTORS: usize = 3;

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

/// Seed of trial `index`: the `index`-th output of a SplitMix64 stream started at `master`.
pub fn trial_seed(master: u64, index: usize) -> u64 {
    let mut z = master.wrapping_add((index as u64).wrapping_add(1).wrapping_mul(GOLDEN_GAMMA));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialOutcome {
    pub index: usize,
    pub seed: u64,
    pub size: usize,
    pub atoms: usize,
    /// Ground truth: every atom was drawn on the Shilov boundary.
    pub all_shilov: bool,
    pub spectral_pass: bool,
    pub identity_pass: bool,
    /// Identities evaluated on the whole tuple instead of factor blocks.
    pub whole_identity_pass: bool,
    pub spectral_defect: f64,
    pub max_residual: f64,
    pub agree: bool,
    pub marginal: bool,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquivalenceReport {
    pub descriptor: DomainDescriptor,
    pub trials: usize,
    pub seed: u64,
    pub tol: f64,
    /// Non-marginal disagreements between the spectral and identity classifiers.
    pub disagreements: usize,
    pub marginal: usize,
    /// Trials where block-wise and whole-tuple identity verdicts differ.
    pub block_mismatches: usize,
    /// Trials where the spectral verdict differs from the ground-truth label.
    pub truth_mismatches: usize,
    pub errors: usize,
    pub outcomes: Vec<TrialOutcome>,
}

impl EquivalenceReport {
    pub fn clean(&self) -> bool {
        self.disagreements == 0 && self.errors == 0 && self.block_mismatches == 0
    }
}

fn check_caps(d: &DomainDescriptor) -> Result<()> {
    if d.factors().len() > MAX_FACTORS {
        return Err(Error::CapExceeded(format!(
            "{d}: at most {MAX_FACTORS} factors"
        )));
    }
    for &f in d.factors() {
        let ok = match f {
            Factor::TypeI { p, q } => p <= 3 && q <= 3,
            Factor::TypeII { p } => p <= 3,
            Factor::TypeIII { p } => p <= 5,
            Factor::TypeIV { n } => n <= 5,
        };
        if !ok {
            return Err(Error::CapExceeded(format!(
                "{f} exceeds the sweep caps (I: p,q <= 3; II: p <= 3; III: p <= 5; IV: n <= 5)"
            )));
        }
    }
    Ok(())
}

struct Trial {
    points: Vec<Vec<C64>>,
    atoms: usize,
    all_shilov: bool,
    tuple: CommutingTuple,
}

/// A random normal tuple: `1..=4` atoms with multiplicity `1..=2` on the
/// diagonal, conjugated by a Haar unitary. Half the trials use Shilov atoms
/// only; the other half scale each atom off the boundary with probability
/// 1/2 (at least one) by a factor uniform in `[0.5, 0.99]`.
fn build_trial(d: &DomainDescriptor, seed: u64) -> Result<Trial> {
    let mut rng = seeded_rng(seed);
    let atoms = rng.random_range(1..=MAX_ATOMS);
    let mults: Vec<usize> = (0..atoms)
        .map(|_| rng.random_range(1..=MAX_MULTIPLICITY))
        .collect();
    let mixed = rng.random_bool(0.5);
    let mut off: Vec<bool> = (0..atoms).map(|_| mixed && rng.random_bool(0.5)).collect();
    if mixed && !off.iter().any(|&o| o) {
        off[rng.random_range(0..atoms)] = true;
    }
    let mut points = Vec::new();
    for (a, &m) in mults.iter().enumerate() {
        let mut z = sample_shilov_with(d, &mut rng);
        if off[a] {
            let scale = rng.random_range(0.5..=0.99);
            z = perturb_off_shilov(d, &z, scale, 1e-8)?;
        }
        points.extend(std::iter::repeat_n(z, m));
    }
    let u = haar_unitary_with(points.len(), &mut rng);
    let tuple = CommutingTuple::diagonal(&points)?.conjugate_by(&u);
    Ok(Trial {
        points,
        atoms,
        all_shilov: !mixed,
        tuple,
    })
}

fn run_trial(
    d: &DomainDescriptor,
    sets: &FactorSets,
    whole: &crate::hereditary::IdentitySet,
    index: usize,
    seed: u64,
    tol: f64,
) -> TrialOutcome {
    let mut out = TrialOutcome {
        index,
        seed,
        size: 0,
        atoms: 0,
        all_shilov: false,
        spectral_pass: false,
        identity_pass: false,
        whole_identity_pass: false,
        spectral_defect: f64::NAN,
        max_residual: f64::NAN,
        agree: false,
        marginal: false,
        error: None,
    };
    let result = (|| -> Result<()> {
        let trial = build_trial(d, seed)?;
        out.size = trial.points.len();
        out.atoms = trial.atoms;
        out.all_shilov = trial.all_shilov;
        let report = classify_with(sets, &trial.tuple, tol)?;
        out.identity_pass = report.identity_pass;
        out.max_residual = report.max_residual();
        out.marginal = report.marginal;
        match (report.spectral_pass, report.spectral_defect) {
            (Some(pass), Some(defect)) => {
                out.spectral_pass = pass;
                out.spectral_defect = defect;
            }
            _ => {
                return Err(Error::NotNormal {
                    index: 0,
                    defect: trial.tuple.normality_defect().0,
                })
            }
        }
        out.agree = report.agreement == Some(true);
        let whole_max = identity_residuals(&trial.tuple, whole, tol)?
            .iter()
            .map(|r| r.residual)
            .fold(0.0, f64::max);
        out.whole_identity_pass = whole_max <= tol;
        Ok(())
    })();
    if let Err(e) = result {
        out.error = Some(e.to_string());
    }
    out
}

/// Cross-checks the spectral and identity classifiers on `trials` random
/// normal tuples. Each trial is seeded by [`trial_seed`], so the report is
/// the same with or without the `parallel` feature.
pub fn verify_equivalence(
    d: &DomainDescriptor,
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<EquivalenceReport> {
    check_caps(d)?;
    let sets = FactorSets::new(d)?;
    let whole = identity_set(d)?;
    let run = |i: usize| run_trial(d, &sets, &whole, i, trial_seed(seed, i), tol);
    #[cfg(feature = "parallel")]
    let outcomes: Vec<TrialOutcome> = (0..trials).into_par_iter().map(run).collect();
    #[cfg(not(feature = "parallel"))]
    let outcomes: Vec<TrialOutcome> = (0..trials).map(run).collect();

    let ok = |o: &&TrialOutcome| o.error.is_none();
    Ok(EquivalenceReport {
        descriptor: d.clone(),
        trials,
        seed,
        tol,
        disagreements: outcomes
            .iter()
            .filter(ok)
            .filter(|o| !o.agree && !o.marginal)
            .count(),
        marginal: outcomes
            .iter()
            .filter(ok)
            .filter(|o| !o.agree && o.marginal)
            .count(),
        block_mismatches: outcomes
            .iter()
            .filter(ok)
            .filter(|o| o.identity_pass != o.whole_identity_pass)
            .count(),
        truth_mismatches: outcomes
            .iter()
            .filter(ok)
            .filter(|o| o.spectral_pass != o.all_shilov)
            .count(),
        errors: outcomes.iter().filter(|o| o.error.is_some()).count(),
        outcomes,
    })
}
