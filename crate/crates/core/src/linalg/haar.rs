//! Householder QR and Haar-distributed unitaries.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::matrix::{ComplexMatrix, C64, ZERO};

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard complex normal: real and imaginary parts independent N(0, 1/2).
pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn gaussian_matrix_with<R: Rng + ?Sized>(
    rows: usize,
    cols: usize,
    rng: &mut R,
) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| complex_normal(rng))
}

/// Ginibre matrix from a fixed seed.
pub fn gaussian_matrix(rows: usize, cols: usize, seed: u64) -> ComplexMatrix {
    gaussian_matrix_with(rows, cols, &mut seeded_rng(seed))
}

/// Householder QR: `A = Q R` with `Q` square unitary and `R` upper trapezoidal.
pub fn qr(a: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    let (m, n) = (a.rows(), a.cols());
    let mut r = a.clone();
    let mut q = ComplexMatrix::identity(m);
    for k in 0..m.min(n) {
        let x: Vec<C64> = (k..m).map(|i| r[(i, k)]).collect();
        let xnorm = super::matrix::norm(&x);
        if xnorm == 0.0 {
            continue;
        }
        let phase = if x[0].norm() > 0.0 {
            x[0] / x[0].norm()
        } else {
            C64::new(1.0, 0.0)
        };
        let alpha = -phase * xnorm;
        let mut v = x;
        v[0] -= alpha;
        let vnorm = super::matrix::norm(&v);
        if vnorm == 0.0 {
            continue;
        }
        for z in v.iter_mut() {
            *z /= vnorm;
        }
        // R[k.., k..] -= 2 v (v* R[k.., k..])
        for j in k..n {
            let s: C64 = v
                .iter()
                .enumerate()
                .map(|(t, vt)| vt.conj() * r[(k + t, j)])
                .sum();
            for (t, vt) in v.iter().enumerate() {
                r[(k + t, j)] -= 2.0 * vt * s;
            }
        }
        // Q[:, k..] -= 2 (Q[:, k..] v) v*
        for i in 0..m {
            let s: C64 = v.iter().enumerate().map(|(t, vt)| q[(i, k + t)] * vt).sum();
            for (t, vt) in v.iter().enumerate() {
                q[(i, k + t)] -= 2.0 * s * vt.conj();
            }
        }
        for i in k + 1..m {
            r[(i, k)] = ZERO;
        }
    }
    (q, r)
}

pub fn haar_unitary_with<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let g = gaussian_matrix_with(n, n, rng);
    let (mut q, r) = qr(&g);
    // Phase-correct so that R has a positive diagonal; this makes Q Haar.
    for j in 0..n {
        let d = r[(j, j)];
        let ph = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        for i in 0..n {
            q[(i, j)] *= ph;
        }
    }
    q
}

/// Haar-random `n × n` unitary, deterministic in `seed`.
pub fn haar_unitary(n: usize, seed: u64) -> ComplexMatrix {
    haar_unitary_with(n, &mut seeded_rng(seed))
}
