//! Lax matrices, the R-matrix, and the identities relating them.

pub mod checks;
pub mod families;
pub mod matrix;
pub mod rmatrix;

pub use families::LaxMatrix;
pub use matrix::{OpMatrix, OpPoly, SignedPermMatrix};
pub use rmatrix::RMatrix;
