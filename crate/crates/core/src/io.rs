//! JSON interchange formats.
//!
//! Complex numbers are `[re, im]` pairs and matrices are
//! `{"rows", "cols", "data"}` with `data` row-major. `serde_json` prints
//! shortest round-trip decimals, so write-then-read is bit-exact.

use serde::{Deserialize, Serialize};

use crate::domain::DomainDescriptor;
use crate::error::{Error, Result};
use crate::lifting::{Atom, AtomicMeasure, SubnormalModel};
use crate::linalg::{CommutingTuple, ComplexMatrix, C64};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<C64>,
}

impl From<&ComplexMatrix> for MatrixFile {
    fn from(m: &ComplexMatrix) -> Self {
        Self {
            rows: m.rows(),
            cols: m.cols(),
            data: m.data().to_vec(),
        }
    }
}

impl MatrixFile {
    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        ComplexMatrix::new(self.rows, self.cols, self.data.clone())
    }
}

/// A commuting tuple together with the domain it is meant for.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TupleFile {
    pub descriptor: DomainDescriptor,
    pub matrices: Vec<MatrixFile>,
}

impl TupleFile {
    pub fn new(descriptor: DomainDescriptor, s: &CommutingTuple) -> Self {
        Self {
            descriptor,
            matrices: s.coords().iter().map(MatrixFile::from).collect(),
        }
    }

    /// Checks one square matrix of common size per coordinate of the descriptor.
    pub fn to_tuple(&self) -> Result<CommutingTuple> {
        let expected = self.descriptor.dimension();
        if self.matrices.len() != expected {
            return Err(Error::WrongLength {
                expected,
                got: self.matrices.len(),
            });
        }
        let coords = self
            .matrices
            .iter()
            .map(MatrixFile::to_matrix)
            .collect::<Result<Vec<_>>>()?;
        CommutingTuple::new(coords)
    }
}

/// Inputs of [`SubnormalModel::build`]: atoms, generator functions (one value
/// per atom) and the orbit degree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub descriptor: DomainDescriptor,
    pub atoms: Vec<Atom>,
    pub generators: Vec<Vec<C64>>,
    pub degree: usize,
}

impl ModelFile {
    pub fn build(&self, tol: f64) -> Result<SubnormalModel> {
        let measure = AtomicMeasure::new(self.descriptor.clone(), self.atoms.clone(), tol)?;
        SubnormalModel::build(measure, &self.generators, self.degree, tol)
    }
}
