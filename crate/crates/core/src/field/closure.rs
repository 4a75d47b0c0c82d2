//! Physical-space fields given by an evaluable rule.

use super::coeffs::{synthesize, SpectralCoefficients};
use num_complex::Complex64;
use std::fmt;
use std::sync::Arc;

pub type FieldFn = dyn Fn(f64, f64) -> Complex64 + Send + Sync;

/// A cylindrical function f(r, t) with optional exact coefficient data.
#[derive(Clone)]
pub struct ClosureField {
    name: String,
    f: Arc<FieldFn>,
    exact: Option<Arc<SpectralCoefficients>>,
}

impl fmt::Debug for ClosureField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ClosureField")
            .field("name", &self.name)
            .field("has_coefficients", &self.exact.is_some())
            .finish()
    }
}

impl ClosureField {
    pub fn new(name: impl Into<String>, f: impl Fn(f64, f64) -> Complex64 + Send + Sync + 'static) -> Self {
        Self { name: name.into(), f: Arc::new(f), exact: None }
    }

    /// Attach the exact coefficients of this field.
    pub fn with_coefficients(mut self, c: SpectralCoefficients) -> Self {
        self.exact = Some(Arc::new(c));
        self
    }

    /// Field evaluated by direct synthesis of the given coefficients.
    pub fn from_coefficients(name: impl Into<String>, c: SpectralCoefficients) -> Self {
        let shared = Arc::new(c);
        let inner = shared.clone();
        Self {
            name: name.into(),
            f: Arc::new(move |r, t| synthesize(&inner, &[(r, t)])[0]),
            exact: Some(shared),
        }
    }

    pub fn zero() -> Self {
        Self::new("zero", |_, _| Complex64::new(0.0, 0.0))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn eval(&self, r: f64, t: f64) -> Complex64 {
        (self.f)(r, t)
    }

    pub fn coefficients(&self) -> Option<&SpectralCoefficients> {
        self.exact.as_deref()
    }
}
