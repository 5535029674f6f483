//! Complex scalars, vectors, matrices and the eigenvalue oracle.

mod eigen;
mod matrix;
mod poly;
mod vector;

pub use eigen::{characteristic_polynomial, eigenvalues, modulus_ratio, ORACLE_MAX_DIM};
pub use matrix::{mat_apply, ComplexMatrix};
pub use num_complex::Complex64 as Complex;
pub use poly::{polynomial_roots, Polynomial};
pub use vector::{complex_serde, ComplexRepr, ComplexVector};
