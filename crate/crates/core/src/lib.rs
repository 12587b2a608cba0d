//! Classical Cartan domains of types I–IV and their products, hereditary
//! operator identities on commuting matrix tuples, and finite-dimensional
//! checks of the Cartan isometry characterisations and intertwiner lifting.

pub mod domain;
pub mod error;
pub mod hereditary;
pub mod io;
pub mod lifting;
pub mod linalg;
pub mod verify;

pub use error::{Error, Result};
