//! Dense complex linear algebra at the sizes this crate needs (d ≤ 9, d² ≤ 81).

mod eigen;
mod matrix;
mod vector;

pub use eigen::{hermitian_eigen, hermitian_eigenvalues, HermitianEigen};
pub use matrix::{ComplexMatrix, MatrixRecord};
pub use vector::StateVector;
