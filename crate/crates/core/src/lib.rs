//! Spectral calculus for cylindrical functions on the Heisenberg group.

pub mod constants;
pub mod error;
pub mod field;
pub mod laguerre_basis;
pub mod quadrature;
pub mod spectral_calculus;
pub mod verify;
pub mod weights;

pub use error::{Error, Result};
