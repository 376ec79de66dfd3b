//! Reversible Markov chains whose transition kernels are convolutions of
//! classical and basic hypergeometric orthogonality measures.

pub mod bd;
pub mod chains;
pub mod error;
pub mod families;
pub mod io;
pub mod numerics;
pub mod selfsim;
pub mod spectral;
pub mod tolerance;
pub mod verify;

pub use error::{Error, Result};
