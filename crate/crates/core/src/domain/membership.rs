use super::{DomainDescriptor, Factor};
use crate::error::{Error, Result};
use crate::linalg::{svd, ComplexMatrix, C64, ZERO};

/// Matrix form of a factor's flat coordinates.
///
/// Type II fills `z_{j,i} := z_{i,j}`, type III fills `z_{j,i} := -z_{i,j}`
/// with a zero diagonal. Type IV has no matrix form.
pub fn matrixize(factor: Factor, coords: &[C64]) -> Result<ComplexMatrix> {
    if coords.len() != factor.dimension() {
        return Err(Error::WrongLength {
            expected: factor.dimension(),
            got: coords.len(),
        });
    }
    Ok(match factor {
        Factor::TypeI { p, q } => ComplexMatrix::new(p, q, coords.to_vec())?,
        Factor::TypeII { p } => {
            let mut m = ComplexMatrix::zeros(p, p);
            let mut it = coords.iter();
            for i in 0..p {
                for j in i..p {
                    let z = *it.next().unwrap();
                    m[(i, j)] = z;
                    m[(j, i)] = z;
                }
            }
            m
        }
        Factor::TypeIII { p } => {
            let mut m = ComplexMatrix::zeros(p, p);
            let mut it = coords.iter();
            for i in 0..p {
                for j in i + 1..p {
                    let z = *it.next().unwrap();
                    m[(i, j)] = z;
                    m[(j, i)] = -z;
                }
            }
            m
        }
        Factor::TypeIV { .. } => return Err(Error::NotMatrixShaped(factor.to_string())),
    })
}

/// Inverse of [`matrixize`]: reads the coordinates of a factor off its matrix
/// (upper triangle for types II and III).
pub fn flatten(factor: Factor, m: &ComplexMatrix) -> Result<Vec<C64>> {
    let shape_err = || {
        Error::SizeMismatch(format!(
            "{factor} needs a different matrix shape than {}x{}",
            m.rows(),
            m.cols()
        ))
    };
    match factor {
        Factor::TypeI { p, q } => {
            if (m.rows(), m.cols()) != (p, q) {
                return Err(shape_err());
            }
            Ok(m.data().to_vec())
        }
        Factor::TypeII { p } | Factor::TypeIII { p } => {
            if (m.rows(), m.cols()) != (p, p) {
                return Err(shape_err());
            }
            let off = usize::from(matches!(factor, Factor::TypeIII { .. }));
            Ok((0..p)
                .flat_map(|i| (i + off..p).map(move |j| (i, j)))
                .map(|ij| m[ij])
                .collect())
        }
        Factor::TypeIV { .. } => Err(Error::NotMatrixShaped(factor.to_string())),
    }
}

/// `(‖z‖² + √(‖z‖⁴ − |Σ z_i²|²))^{1/2}`; the Lie ball is where this is < 1.
pub fn lie_norm(z: &[C64]) -> f64 {
    let n2: f64 = z.iter().map(|w| w.norm_sqr()).sum();
    let s: C64 = z.iter().map(|w| w * w).sum();
    (n2 + (n2 * n2 - s.norm_sqr()).max(0.0).sqrt()).sqrt()
}

fn gram_rows(m: &ComplexMatrix) -> ComplexMatrix {
    m.matmul(&m.adjoint())
}

pub fn factor_contains_closure(factor: Factor, z: &[C64], tol: f64) -> Result<bool> {
    if z.len() != factor.dimension() {
        return Err(Error::WrongLength {
            expected: factor.dimension(),
            got: z.len(),
        });
    }
    Ok(match factor {
        Factor::TypeIV { .. } => lie_norm(z) <= 1.0 + tol,
        _ => {
            let m = matrixize(factor, z)?;
            // I − ZZ* ⪰ −tol  ⇔  σ_max² ≤ 1 + tol
            let smax = svd(&m)?.sigmas[0];
            smax * smax <= 1.0 + tol
        }
    })
}

/// Non-strict membership in the closure of every factor.
pub fn contains_closure(d: &DomainDescriptor, z: &[C64], tol: f64) -> Result<bool> {
    d.check_len(z.len())?;
    for (f, r) in d.blocks() {
        if !factor_contains_closure(f, &z[r], tol)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// How far a point is from satisfying the Shilov boundary equations of one
/// factor; zero exactly on the boundary.
///
/// * types I, II, III(even): `‖I − ZZ*‖_F`
/// * type III(odd): distance of the singular values from `(1, …, 1, 0)`
/// * type IV: `max(|Σ|z_i|² − 1|, max_{i<j} |z̄_i z_j − z̄_j z_i|)`
pub fn factor_shilov_defect(factor: Factor, z: &[C64]) -> Result<f64> {
    if z.len() != factor.dimension() {
        return Err(Error::WrongLength {
            expected: factor.dimension(),
            got: z.len(),
        });
    }
    Ok(match factor {
        Factor::TypeIV { .. } => {
            let sphere = (z.iter().map(|w| w.norm_sqr()).sum::<f64>() - 1.0).abs();
            let mut sym: f64 = 0.0;
            for i in 0..z.len() {
                for j in i + 1..z.len() {
                    sym = sym.max((z[i].conj() * z[j] - z[j].conj() * z[i]).norm());
                }
            }
            sphere.max(sym)
        }
        Factor::TypeIII { p } if p % 2 == 1 => {
            let s = svd(&matrixize(factor, z)?)?.sigmas;
            let ones = s[..p - 1]
                .iter()
                .map(|x| (x - 1.0).abs())
                .fold(0.0, f64::max);
            ones.max(s[p - 1])
        }
        _ => {
            let m = matrixize(factor, z)?;
            let g = gram_rows(&m);
            (&ComplexMatrix::identity(g.rows()) - &g).norm_fro()
        }
    })
}

/// Largest factor defect of a product point.
pub fn shilov_defect(d: &DomainDescriptor, z: &[C64]) -> Result<f64> {
    d.check_len(z.len())?;
    let mut worst: f64 = 0.0;
    for (f, r) in d.blocks() {
        worst = worst.max(factor_shilov_defect(f, &z[r])?);
    }
    Ok(worst)
}

/// Membership in `S_Ω = S_{Ω_1} × ⋯ × S_{Ω_m}`.
pub fn on_shilov(d: &DomainDescriptor, z: &[C64], tol: f64) -> Result<bool> {
    Ok(shilov_defect(d, z)? <= tol)
}

/// Lie sphere test through its parametrisation `z = x e^{iθ}` with `x` a real
/// unit vector. The phase is taken from the largest-modulus coordinate.
pub fn on_lie_sphere_parametric(z: &[C64], tol: f64) -> bool {
    let Some(big) = z
        .iter()
        .copied()
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
    else {
        return false;
    };
    if big == ZERO {
        return false;
    }
    let unphase = (big / big.norm()).conj();
    let x: Vec<C64> = z.iter().map(|w| w * unphase).collect();
    let imag = x.iter().map(|w| w.im.abs()).fold(0.0, f64::max);
    let sphere = (x.iter().map(|w| w.re * w.re).sum::<f64>() - 1.0).abs();
    imag <= tol && sphere <= tol
}
