//! Exact integer and rational linear algebra.

pub mod certified;
pub mod gaussian;
pub mod json;
pub mod linalg;
pub mod lp;
pub mod matrix;
pub mod normal_form;
pub mod numeric;
pub mod spectral;

pub use certified::{Certified, CertifiedComplex};
pub use gaussian::{GaussianRational, GaussianVector};
pub use linalg::gram_schmidt;
pub use matrix::{IntMatrix, IntVector, Matrix, RatMatrix, RatVector};
pub use normal_form::{hnf, kernel_lattice_basis, snf};
pub use spectral::{sigma_bounds, sigma_min_2approx};
