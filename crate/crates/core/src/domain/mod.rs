//! Classical Cartan domains and finite products of them.
//!
//! Points are flat coordinate vectors. Per factor the layout is:
//!
//! * `I(p,q)`: row-major `z_{1,1}, …, z_{1,q}; …; z_{p,1}, …, z_{p,q}`
//! * `II(p)`: upper triangle with diagonal, row by row (`z_{1,1}, …, z_{1,p}; z_{2,2}, …`)
//! * `III(p)`: strict upper triangle, row by row (`z_{1,2}, …, z_{1,p}; z_{2,3}, …`)
//! * `IV(n)`: plain coordinates
//!
//! and a product concatenates its factors in order.

mod membership;
mod sampling;

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use membership::{
    contains_closure, factor_contains_closure, factor_shilov_defect, flatten, lie_norm, matrixize,
    on_lie_sphere_parametric, on_shilov, shilov_defect,
};
pub use sampling::{perturb_off_shilov, sample_factor_with, sample_shilov, sample_shilov_with};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Factor {
    /// `p × q` matrices, `1 ≤ p ≤ q`.
    TypeI { p: usize, q: usize },
    /// Symmetric `p × p` matrices, `p ≥ 1`.
    TypeII { p: usize },
    /// Antisymmetric `p × p` matrices, `p ≥ 2`.
    TypeIII { p: usize },
    /// Lie ball in `ℂⁿ`, `n ≥ 1`.
    TypeIV { n: usize },
}

impl Factor {
    pub fn validate(self) -> Result<Self> {
        let ok = match self {
            Factor::TypeI { p, q } => p >= 1 && p <= q,
            Factor::TypeII { p } => p >= 1,
            Factor::TypeIII { p } => p >= 2,
            Factor::TypeIV { n } => n >= 1,
        };
        if ok {
            Ok(self)
        } else {
            let reason = match self {
                Factor::TypeI { .. } => "type I needs 1 <= p <= q",
                Factor::TypeII { .. } => "type II needs p >= 1",
                Factor::TypeIII { .. } => "type III needs p >= 2",
                Factor::TypeIV { .. } => "type IV needs n >= 1",
            };
            Err(Error::Parse {
                token: self.to_string(),
                reason: reason.into(),
            })
        }
    }

    pub fn dimension(self) -> usize {
        match self {
            Factor::TypeI { p, q } => p * q,
            Factor::TypeII { p } => p * (p + 1) / 2,
            Factor::TypeIII { p } => p * (p - 1) / 2,
            Factor::TypeIV { n } => n,
        }
    }

    /// Side length of the square matrix form (rows for type I), `None` for type IV.
    pub fn matrix_rows(self) -> Option<usize> {
        match self {
            Factor::TypeI { p, .. } | Factor::TypeII { p } | Factor::TypeIII { p } => Some(p),
            Factor::TypeIV { .. } => None,
        }
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Factor::TypeI { p, q } => write!(f, "I({p},{q})"),
            Factor::TypeII { p } => write!(f, "II({p})"),
            Factor::TypeIII { p } => write!(f, "III({p})"),
            Factor::TypeIV { n } => write!(f, "IV({n})"),
        }
    }
}

impl FromStr for Factor {
    type Err = Error;

    fn from_str(token: &str) -> Result<Self> {
        let err = |reason: &str| Error::Parse {
            token: token.to_string(),
            reason: reason.to_string(),
        };
        let open = token.find('(').ok_or_else(|| err("expected `(`"))?;
        let args = token[open + 1..]
            .strip_suffix(')')
            .ok_or_else(|| err("expected `)` at end"))?;
        let nums = args
            .split(',')
            .map(|a| {
                if a.is_empty() || !a.bytes().all(|b| b.is_ascii_digit()) {
                    Err(err("parameters must be unsigned integers"))
                } else {
                    a.parse::<usize>()
                        .map_err(|_| err("parameter out of range"))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let factor = match (&token[..open], nums.as_slice()) {
            ("I", &[p, q]) => Factor::TypeI { p, q },
            ("II", &[p]) => Factor::TypeII { p },
            ("III", &[p]) => Factor::TypeIII { p },
            ("IV", &[n]) => Factor::TypeIV { n },
            ("I" | "II" | "III" | "IV", _) => return Err(err("wrong number of parameters")),
            _ => return Err(err("unknown domain type (expected I, II, III or IV)")),
        };
        factor.validate()
    }
}

/// A classical Cartan domain or a finite product of them.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DomainDescriptor {
    factors: Vec<Factor>,
}

impl DomainDescriptor {
    pub fn new(factors: Vec<Factor>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::Parse {
                token: String::new(),
                reason: "descriptor needs at least one factor".into(),
            });
        }
        let factors = factors
            .into_iter()
            .map(Factor::validate)
            .collect::<Result<_>>()?;
        Ok(Self { factors })
    }

    pub fn single(factor: Factor) -> Result<Self> {
        Self::new(vec![factor])
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn dimension(&self) -> usize {
        self.factors.iter().map(|f| f.dimension()).sum()
    }

    /// Each factor with the coordinate range it occupies in a flat point.
    pub fn blocks(&self) -> Vec<(Factor, Range<usize>)> {
        let mut start = 0;
        self.factors
            .iter()
            .map(|&f| {
                let r = start..start + f.dimension();
                start = r.end;
                (f, r)
            })
            .collect()
    }

    pub(crate) fn check_len(&self, len: usize) -> Result<()> {
        if len != self.dimension() {
            return Err(Error::WrongLength {
                expected: self.dimension(),
                got: len,
            });
        }
        Ok(())
    }
}

impl fmt::Display for DomainDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, factor) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str("x")?;
            }
            write!(f, "{factor}")?;
        }
        Ok(())
    }
}

impl FromStr for DomainDescriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.is_empty() {
            return Err(Error::Parse {
                token: String::new(),
                reason: "empty descriptor".into(),
            });
        }
        let factors = s
            .split('x')
            .map(str::parse)
            .collect::<Result<Vec<Factor>>>()?;
        Self::new(factors)
    }
}

impl Serialize for DomainDescriptor {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for DomainDescriptor {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
