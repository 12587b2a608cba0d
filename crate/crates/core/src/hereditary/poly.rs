use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::ops::{Add, Mul, Neg, Sub};

use crate::linalg::{C64, ONE, ZERO};

/// Exponent vectors `(α, β)` of `z^α w^β`. Ordered by total degree, then
/// with higher powers of earlier variables first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub z: Vec<u8>,
    pub w: Vec<u8>,
}

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Self {
            z: vec![0; nvars],
            w: vec![0; nvars],
        }
    }

    pub fn degree(&self) -> usize {
        self.z.iter().chain(&self.w).map(|&e| e as usize).sum()
    }

    fn times(&self, other: &Self) -> Self {
        let add = |a: &[u8], b: &[u8]| {
            a.iter()
                .zip(b)
                .map(|(x, y)| x.checked_add(*y).expect("exponent overflow"))
                .collect()
        };
        Self {
            z: add(&self.z, &other.z),
            w: add(&self.w, &other.w),
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.z.cmp(&self.z))
            .then_with(|| other.w.cmp(&self.w))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// `p(z, w) = Σ a_{α,β} z^α w^β` in `nvars` commuting `z` variables and as
/// many `w` variables. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct HereditaryPolynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, C64>,
}

impl HereditaryPolynomial {
    pub fn zero(nvars: usize) -> Self {
        Self {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: C64) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::one(nvars), c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, ONE)
    }

    /// The monomial `z_i w_j`.
    pub fn z_w(nvars: usize, i: usize, j: usize) -> Self {
        let mut m = Monomial::one(nvars);
        m.z[i] += 1;
        m.w[j] += 1;
        let mut p = Self::zero(nvars);
        p.add_term(m, ONE);
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, C64)>) -> Self {
        let mut p = Self::zero(nvars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: C64) {
        assert!(
            m.z.len() == self.nvars && m.w.len() == self.nvars,
            "monomial arity mismatch"
        );
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                if c != ZERO {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if *o.get() == ZERO {
                    o.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, C64> {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> usize {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::from_terms(
            self.nvars,
            self.terms.iter().map(|(m, c)| (m.clone(), c * s)),
        )
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut out = Self::one(self.nvars);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Re-indexes into `total` variables, shifting every variable by `offset`.
    pub fn embed(&self, offset: usize, total: usize) -> Self {
        assert!(offset + self.nvars <= total, "embedding out of range");
        let shift = |e: &[u8]| {
            let mut v = vec![0; total];
            v[offset..offset + e.len()].copy_from_slice(e);
            v
        };
        Self::from_terms(
            total,
            self.terms.iter().map(|(m, c)| {
                (
                    Monomial {
                        z: shift(&m.z),
                        w: shift(&m.w),
                    },
                    *c,
                )
            }),
        )
    }

    /// Renders with caller-supplied variable names, e.g. `1 - z1·w1`.
    pub fn display_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let factors = monomial_string(m, names);
            let (neg, mag) = signed_coefficient(*c);
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            match (mag.as_str(), factors.is_empty()) {
                (m, true) => out.push_str(m),
                ("1", false) => out.push_str(&factors),
                (m, false) => {
                    let _ = write!(out, "{m}·{factors}");
                }
            }
        }
        out
    }
}

fn monomial_string(m: &Monomial, names: &[String]) -> String {
    let mut parts = Vec::new();
    for (letter, exps) in [("z", &m.z), ("w", &m.w)] {
        for (i, &e) in exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let base = names
                .get(i)
                .map_or_else(|| format!("{letter}{}", i + 1), |n| format!("{letter}{n}"));
            parts.push(if e == 1 { base } else { format!("{base}^{e}") });
        }
    }
    parts.join("·")
}

fn fmt_real(x: f64) -> String {
    if x.fract() == 0.0 && x.abs() < 1e15 {
        format!("{}", x as i64)
    } else {
        format!("{x}")
    }
}

fn signed_coefficient(c: C64) -> (bool, String) {
    if c.im == 0.0 {
        (c.re < 0.0, fmt_real(c.re.abs()))
    } else if c.re == 0.0 {
        (c.im < 0.0, format!("{}i", fmt_real(c.im.abs())))
    } else {
        (
            false,
            format!(
                "({}{}{}i)",
                fmt_real(c.re),
                if c.im < 0.0 { "-" } else { "+" },
                fmt_real(c.im.abs())
            ),
        )
    }
}

impl fmt::Display for HereditaryPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.nvars).map(|i| i.to_string()).collect();
        f.write_str(&self.display_with(&names))
    }
}

impl Add for &HereditaryPolynomial {
    type Output = HereditaryPolynomial;
    fn add(self, rhs: &HereditaryPolynomial) -> HereditaryPolynomial {
        assert_eq!(self.nvars, rhs.nvars, "polynomial arity mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), *c);
        }
        out
    }
}

impl Sub for &HereditaryPolynomial {
    type Output = HereditaryPolynomial;
    fn sub(self, rhs: &HereditaryPolynomial) -> HereditaryPolynomial {
        self + &(-rhs)
    }
}

impl Neg for &HereditaryPolynomial {
    type Output = HereditaryPolynomial;
    fn neg(self) -> HereditaryPolynomial {
        self.scale(C64::new(-1.0, 0.0))
    }
}

impl Mul for &HereditaryPolynomial {
    type Output = HereditaryPolynomial;
    fn mul(self, rhs: &HereditaryPolynomial) -> HereditaryPolynomial {
        assert_eq!(self.nvars, rhs.nvars, "polynomial arity mismatch");
        let mut out = HereditaryPolynomial::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.times(mb), ca * cb);
            }
        }
        out
    }
}
