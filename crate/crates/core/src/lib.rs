//! Exact construction of torus-invariant Poisson deformations of
//! log-canonical Poisson structures on affine space.
//!
//! Indices are zero-based throughout the API. Rendering and the command-line
//! front end use one-based coordinates (`x1`, `d/dx_1`).

pub mod actiondata;
pub mod cartan;
pub mod deform;
pub mod error;
pub mod linalg;
pub mod logcan;
pub mod multivec;

pub use error::{Error, Result};
pub use linalg::{RatMatrix, Rational};
pub use multivec::{Multivector, Weight};
