//! Exact lattice algorithms and certified orbit-distance approximation for
//! diagonal torus actions on `C^n`.
//!
//! Everything is computed over big integers and rationals. Transcendental
//! quantities (logarithms, `pi`, distances involving them) come back as
//! [`Certified`](exactlinalg::Certified) values carrying an explicit error bound.

pub mod error;
pub mod exactlinalg;
pub mod kempfness;
pub mod lattices;
pub mod lifting;
pub mod logspace;
pub mod rop;
pub mod torus;

pub use error::{Error, Result};
