use std::collections::VecDeque;

use super::eigen::push_orthogonal;
use super::matrix::{norm, ComplexMatrix, C64};

/// Orthonormal basis (as columns) of the smallest subspace containing
/// `vectors` and invariant under every matrix in `appliers`.
///
/// Breadth-first closure: each new basis vector is pushed through every
/// applier and the image is kept only if its residual against the current
/// span exceeds `tol · max(1, ‖image‖)`.
pub fn orthonormal_closure(
    dim: usize,
    vectors: &[Vec<C64>],
    appliers: &[ComplexMatrix],
    tol: f64,
) -> ComplexMatrix {
    let mut basis: Vec<Vec<C64>> = Vec::new();
    let mut queue: VecDeque<Vec<C64>> = VecDeque::new();
    let admit = |basis: &mut Vec<Vec<C64>>, queue: &mut VecDeque<Vec<C64>>, v: Vec<C64>| {
        let scale = norm(&v).max(1.0);
        let rel = tol * scale / norm(&v).max(f64::MIN_POSITIVE);
        if push_orthogonal(basis, v, rel) {
            queue.push_back(basis.last().unwrap().clone());
        }
    };
    for v in vectors {
        assert_eq!(v.len(), dim, "closure vector dimension mismatch");
        admit(&mut basis, &mut queue, v.clone());
    }
    while let Some(b) = queue.pop_front() {
        if basis.len() == dim {
            break;
        }
        for a in appliers {
            admit(&mut basis, &mut queue, a.matvec(&b));
        }
    }
    ComplexMatrix::from_columns(dim, &basis)
}

/// `max_i ‖(I − BB*) A_i B‖_F` for orthonormal columns `B`.
pub fn invariance_residual(basis: &ComplexMatrix, appliers: &[ComplexMatrix]) -> f64 {
    let proj = basis.matmul(&basis.adjoint());
    appliers
        .iter()
        .map(|a| {
            let ab = a.matmul(basis);
            (&ab - &proj.matmul(&ab)).norm_fro()
        })
        .fold(0.0, f64::max)
}
