use std::collections::HashMap;
use std::sync::OnceLock;

use super::poly::{HereditaryPolynomial, Monomial};
use crate::error::{Error, Result};
use crate::linalg::C64;

/// Largest `p` accepted by [`charpoly_coeffs`] (matrices of size `2p+1 = 7`).
pub const MAX_CHARPOLY_P: usize = 3;

/// Exponent vector packed 3 bits per variable. A minor of an antisymmetric
/// matrix uses each variable at most twice and `p ≤ 3` gives at most 21
/// variables, so 63 bits suffice.
type Packed = u64;
type IntPoly = HashMap<Packed, i64>;

const BITS: u32 = 3;

fn unpack(mut key: Packed, nv: usize) -> Vec<u8> {
    (0..nv)
        .map(|_| {
            let e = (key & ((1 << BITS) - 1)) as u8;
            key >>= BITS;
            e
        })
        .collect()
}

/// Position of `x_{i,j}` (`i < j`) in the strict-upper-triangle ordering.
fn var_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// `det X[rows, cols]` for the generic `n × n` antisymmetric matrix `X`, by
/// Leibniz expansion with exact integer coefficients.
fn antisym_minor(n: usize, rows: &[usize], cols: &[usize]) -> IntPoly {
    struct Walk<'a> {
        n: usize,
        rows: &'a [usize],
        cols: &'a [usize],
        used: Vec<bool>,
        out: IntPoly,
    }

    impl Walk<'_> {
        fn go(&mut self, r: usize, key: Packed, sign: i64) {
            if r == self.rows.len() {
                *self.out.entry(key).or_insert(0) += sign;
                return;
            }
            for c in 0..self.cols.len() {
                let (i, j) = (self.rows[r], self.cols[c]);
                if self.used[c] || i == j {
                    continue;
                }
                let inversions = self.used[c + 1..].iter().filter(|&&u| u).count();
                let v = if i < j {
                    var_index(self.n, i, j)
                } else {
                    var_index(self.n, j, i)
                };
                let mut s = if i < j { sign } else { -sign };
                if inversions % 2 == 1 {
                    s = -s;
                }
                self.used[c] = true;
                self.go(r + 1, key + (1 << (BITS as usize * v)), s);
                self.used[c] = false;
            }
        }
    }

    let mut walk = Walk {
        n,
        rows,
        cols,
        used: vec![false; cols.len()],
        out: IntPoly::new(),
    };
    walk.go(0, 0, 1);
    let mut out = walk.out;
    out.retain(|_, c| *c != 0);
    out
}

/// `E_k(WᵗZ)`, the sum of the `k × k` principal minors, via Cauchy–Binet:
/// `det (WᵗZ)[S,S] = Σ_J det W[J,S] · det Z[J,S]`.
fn elementary(n: usize, k: usize) -> HashMap<(Packed, Packed), i64> {
    let mut acc = HashMap::new();
    if k == 0 {
        acc.insert((0, 0), 1);
        return acc;
    }
    let sets = subsets(n, k);
    for s in &sets {
        for j in &sets {
            let d: Vec<(Packed, i64)> = antisym_minor(n, j, s).into_iter().collect();
            for &(zm, zc) in &d {
                for &(wm, wc) in &d {
                    *acc.entry((zm, wm)).or_insert(0) += zc * wc;
                }
            }
        }
    }
    acc.retain(|_, c| *c != 0);
    acc
}

fn compute(p: usize) -> Vec<HereditaryPolynomial> {
    let n = 2 * p + 1;
    let nv = n * (n - 1) / 2;
    debug_assert!(nv * BITS as usize <= Packed::BITS as usize);
    (0..=n)
        .map(|m| {
            let sign = if (n - m).is_multiple_of(2) { 1.0 } else { -1.0 };
            let terms = elementary(n, n - m).into_iter().map(|((z, w), c)| {
                (
                    Monomial {
                        z: unpack(z, nv),
                        w: unpack(w, nv),
                    },
                    C64::new(sign * c as f64, 0.0),
                )
            });
            HereditaryPolynomial::from_terms(nv, terms)
        })
        .collect()
}

/// Coefficients `q_0, …, q_{2p+1}` of `det(λ I − WᵗZ)` for the generic
/// antisymmetric `(2p+1) × (2p+1)` matrices `Z`, `W`, in the variables
/// `z_{i,j}`, `w_{i,j}` (`i < j`, row-major). Results are cached per `p`.
pub fn charpoly_coeffs(p: usize) -> Result<Vec<HereditaryPolynomial>> {
    static CACHE: [OnceLock<Vec<HereditaryPolynomial>>; MAX_CHARPOLY_P] =
        [OnceLock::new(), OnceLock::new(), OnceLock::new()];
    if p == 0 || p > MAX_CHARPOLY_P {
        return Err(Error::CapExceeded(format!(
            "characteristic polynomial needs 1 <= p <= {MAX_CHARPOLY_P}, got p = {p}"
        )));
    }
    Ok(CACHE[p - 1].get_or_init(|| compute(p)).clone())
}
