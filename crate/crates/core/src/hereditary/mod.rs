//! Hereditary polynomials `p(z, w) = Σ a_{α,β} z^α w^β` evaluated on commuting
//! tuples as `Σ a_{α,β} S*^β S^α`, plus the identity sets and positivity
//! checks built from them.

mod charpoly;
mod eval;
mod identities;
mod poly;
mod positivity;

pub use charpoly::{charpoly_coeffs, MAX_CHARPOLY_P};
pub use eval::{evaluate, scalar_eval, Evaluator, MAX_TOTAL_DEGREE};
pub use identities::{identity_set, Constraint, IdentitySet};
pub use poly::{HereditaryPolynomial, Monomial};
pub use positivity::{
    positivity_certificate, PositivityEntry, PositivityReport, MAX_CERTIFICATE_ENTRIES,
};
