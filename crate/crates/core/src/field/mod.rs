//! Cylindrical functions on the Heisenberg group in Fourier-Laguerre form.

mod closure;
mod coeffs;
mod families;
mod fd;
mod grid;
mod kernel;
mod tquad;
mod transform;

pub use closure::{ClosureField, FieldFn};
pub use coeffs::{l2_norm, synthesize, BasisBank, Profiles, SpectralCoefficients};
pub use fd::{fd_hgrad_normsq, fd_sublaplacian, fd_t};
pub use families::{random_band, vanishing_coefficients, RadialProfile, SmoothFamily};
pub use grid::{live_cut, GridKind, LambdaGrid, PhysicalGrid, RadialRule, RadialSpec};
pub use kernel::WeightKernel;
pub use tquad::half_box_rule;
pub use transform::{
    analyze, physical_l2_norm, weighted_l2_norm, Analysis, Analyzer, NormReport, Samples, TimeTransform,
};
