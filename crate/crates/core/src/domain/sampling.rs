use rand::Rng;
use rand_distr::StandardNormal;

use super::membership::{flatten, shilov_defect};
use super::{DomainDescriptor, Factor};
use crate::error::{Error, Result};
use crate::linalg::{canonical_matrix, haar_unitary_with, seeded_rng, C64};

/// One Shilov boundary point of a single factor.
///
/// * `I(p,q)`: first `p` rows of a Haar `q × q` unitary
/// * `II(p)`: `U Uᵗ`
/// * `III(p)`: `U K Uᵗ` with `K` the block matrix `⊕ [[0,1],[-1,0]]` (plus `[0]` for odd `p`)
/// * `IV(n)`: uniform real unit vector times a uniform phase
pub fn sample_factor_with<R: Rng + ?Sized>(factor: Factor, rng: &mut R) -> Vec<C64> {
    match factor {
        Factor::TypeI { p, q } => {
            let u = haar_unitary_with(q, rng);
            u.data()[..p * q].to_vec()
        }
        Factor::TypeII { p } => {
            let u = haar_unitary_with(p, rng);
            flatten(factor, &u.matmul(&u.transpose())).expect("square matrix")
        }
        Factor::TypeIII { p } => {
            let u = haar_unitary_with(p, rng);
            let k = canonical_matrix(p, &vec![1.0; p / 2]);
            flatten(factor, &u.matmul(&k).matmul(&u.transpose())).expect("square matrix")
        }
        Factor::TypeIV { n } => {
            let x: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
            let len = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            let theta = rng.random_range(0.0..std::f64::consts::TAU);
            let ph = C64::from_polar(1.0, theta);
            x.iter().map(|v| ph * (v / len)).collect()
        }
    }
}

pub fn sample_shilov_with<R: Rng + ?Sized>(d: &DomainDescriptor, rng: &mut R) -> Vec<C64> {
    d.factors()
        .iter()
        .flat_map(|&f| sample_factor_with(f, rng))
        .collect()
}

/// `count` Shilov boundary points, deterministic in `seed`.
pub fn sample_shilov(d: &DomainDescriptor, count: usize, seed: u64) -> Vec<Vec<C64>> {
    let mut rng = seeded_rng(seed);
    (0..count)
        .map(|_| sample_shilov_with(d, &mut rng))
        .collect()
}

/// `scale · z` for a Shilov point `z`. Stays in the closure (the domains are
/// convex and contain the origin) and leaves the Shilov boundary for
/// `scale < 1`.
pub fn perturb_off_shilov(
    d: &DomainDescriptor,
    z: &[C64],
    scale: f64,
    tol: f64,
) -> Result<Vec<C64>> {
    let defect = shilov_defect(d, z)?;
    if defect > tol {
        return Err(Error::NotOnShilov { defect });
    }
    Ok(z.iter().map(|w| w * scale).collect())
}
