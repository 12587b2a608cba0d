//! Dense complex linear algebra for desk-scale matrices.

pub mod eigen;
pub mod haar;
pub mod joint;
pub mod matrix;
pub mod span;
pub mod tuple;
pub mod youla;

pub use eigen::{
    hermitian_eig, is_psd, min_eigenvalue, min_eigenvalue_hermitian_part, operator_norm, svd, Svd,
};
pub use haar::{gaussian_matrix, haar_unitary, haar_unitary_with, qr, seeded_rng};
pub use joint::{joint_diagonalize, Spectrum};
pub use matrix::{inner, norm, ComplexMatrix, C64, ONE, ZERO};
pub use span::{invariance_residual, orthonormal_closure};
pub use tuple::CommutingTuple;
pub use youla::{canonical_matrix, youla_canonical, youla_residual, YoulaForm};

/// Relative tolerance used when a caller does not supply one.
pub const DEFAULT_TOL: f64 = 1e-10;
