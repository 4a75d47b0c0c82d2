//! Report-producing numerical checks on cylindrical test fields.
//!
//! Every check returns a [`VerificationReport`] whose pass flag is a pure
//! function of the measured value, the bound, the tolerance and the gated
//! residuals. Bounds come from the constants module.

mod constants_checks;
mod inequalities;
mod resolvent;
mod spectral_checks;

pub use constants_checks::{
    run_bounds, run_dawson, run_gronwall, run_kappa, run_kappa_ordering, run_thresholds, GronwallConfig,
};
pub use inequalities::{run_hardy, run_lemma43, HardyWeight, InequalitySetup};
pub use resolvent::{
    run_birman_schwinger, run_resolvent_sup, run_smoothing, sandwich_value, BirmanSchwingerConfig, HClass,
    ResolventConfig, Sandwich, SandwichSetup, SmoothingConfig,
};
pub use spectral_checks::{
    run_commutation, run_comparability, run_conformal_identity, run_convention, run_homogeneity, run_roundtrip, run_soliton, ConventionConfig,
    RoundTripConfig, SolitonConfig,
};

use crate::constants::Case;
use crate::error::{domain, Error, Result};
use crate::spectral_calculus::OperatorSpec;
use crate::weights::{WeightBase, WeightSpec};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::time::Instant;

/// Default gate on projection residuals.
pub const PROJECTION_GATE: f64 = 1e-6;
/// Default gate on relative quadrature tails.
pub const TAIL_GATE: f64 = 1e-9;

/// A parameter value recorded in a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Param {
    Int(i64),
    Num(f64),
    Text(String),
}

impl From<f64> for Param {
    fn from(x: f64) -> Self {
        Param::Num(x)
    }
}

impl From<usize> for Param {
    fn from(x: usize) -> Self {
        Param::Int(x as i64)
    }
}

impl From<u64> for Param {
    fn from(x: u64) -> Self {
        Param::Int(x as i64)
    }
}

impl From<i64> for Param {
    fn from(x: i64) -> Self {
        Param::Int(x)
    }
}

impl From<&str> for Param {
    fn from(x: &str) -> Self {
        Param::Text(x.to_string())
    }
}

impl From<String> for Param {
    fn from(x: String) -> Self {
        Param::Text(x)
    }
}

/// How the pass flag is derived from the measured value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    /// measured <= bound + tolerance.
    Bound,
    /// measured < bound + tolerance.
    StrictBound,
    /// measured <= tolerance, with no bound.
    Residual,
    /// A computed constant; passes when finite and positive.
    Value,
}

/// Outcome of one numerical check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub name: String,
    pub params: BTreeMap<String, Param>,
    pub kind: CheckKind,
    pub measured: f64,
    /// NaN for residual and value checks.
    pub bound: f64,
    pub tolerance: f64,
    pub margin: f64,
    pub pass: bool,
    pub residuals: BTreeMap<String, f64>,
    /// Gates of the residuals that take part in the pass flag.
    pub gates: BTreeMap<String, f64>,
    pub runtime_ms: u64,
}

impl VerificationReport {
    fn new(name: impl Into<String>, kind: CheckKind, measured: f64, bound: f64, tolerance: f64) -> Self {
        let mut r = Self {
            name: name.into(),
            params: BTreeMap::new(),
            kind,
            measured,
            bound,
            tolerance,
            margin: f64::NAN,
            pass: false,
            residuals: BTreeMap::new(),
            gates: BTreeMap::new(),
            runtime_ms: 0,
        };
        r.evaluate();
        r
    }

    pub fn bound_check(name: impl Into<String>, measured: f64, bound: f64, tolerance: f64) -> Self {
        Self::new(name, CheckKind::Bound, measured, bound, tolerance)
    }

    pub fn strict_bound_check(name: impl Into<String>, measured: f64, bound: f64, tolerance: f64) -> Self {
        Self::new(name, CheckKind::StrictBound, measured, bound, tolerance)
    }

    pub fn residual_check(name: impl Into<String>, measured: f64, tolerance: f64) -> Self {
        Self::new(name, CheckKind::Residual, measured, f64::NAN, tolerance)
    }

    pub fn value(name: impl Into<String>, measured: f64) -> Self {
        Self::new(name, CheckKind::Value, measured, f64::NAN, 0.0)
    }

    pub fn param(mut self, key: &str, value: impl Into<Param>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    /// Informational residual that does not affect the pass flag.
    pub fn residual(mut self, key: &str, value: f64) -> Self {
        self.residuals.insert(key.to_string(), value);
        self
    }

    /// Residual that must stay at or below `gate` for the check to pass.
    pub fn gated(mut self, key: &str, value: f64, gate: f64) -> Self {
        self.residuals.insert(key.to_string(), value);
        self.gates.insert(key.to_string(), gate);
        self.evaluate();
        self
    }

    pub fn timed(mut self, start: Instant) -> Self {
        self.runtime_ms = start.elapsed().as_millis() as u64;
        self
    }

    /// Names of the gated residuals that exceed their gate.
    pub fn failed_gates(&self) -> Vec<&str> {
        self.gates
            .iter()
            .filter(|(k, g)| !self.residuals.get(*k).is_some_and(|v| v <= *g))
            .map(|(k, _)| k.as_str())
            .collect()
    }

    /// The pass condition on the measured value alone, ignoring gates.
    pub fn core_pass(&self) -> bool {
        match self.kind {
            CheckKind::Bound => self.measured <= self.bound + self.tolerance,
            CheckKind::StrictBound => self.measured < self.bound + self.tolerance,
            CheckKind::Residual => self.measured <= self.tolerance,
            CheckKind::Value => self.measured.is_finite() && self.measured > 0.0,
        }
    }

    fn evaluate(&mut self) {
        self.margin = match self.kind {
            CheckKind::Bound | CheckKind::StrictBound => self.bound - self.measured,
            CheckKind::Residual => self.tolerance - self.measured,
            CheckKind::Value => f64::NAN,
        };
        self.pass = self.core_pass() && self.failed_gates().is_empty();
    }
}

/// The weight operator G of the sandwiched resolvent estimates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GWeightSpec {
    pub case: Case,
    pub s: f64,
    pub mu: f64,
}

impl GWeightSpec {
    pub fn new(case: Case, s: f64, mu: f64, d: usize) -> Result<Self> {
        if d == 0 {
            return Err(domain("d must be at least 1"));
        }
        match case {
            Case::I | Case::II => {
                if !(s > 0.5 && s <= 1.0) {
                    return Err(domain(format!("case {case:?} needs 1/2 < s <= 1, got {s}")));
                }
                if case == Case::II && d < 2 {
                    return Err(domain("case II needs d >= 2"));
                }
            }
            Case::III | Case::IV => {
                if !(mu > 0.5 && mu <= 1.0) {
                    return Err(domain(format!("case {case:?} needs 1/2 < mu <= 1, got {mu}")));
                }
                if !(s > 0.0 && s.is_finite()) {
                    return Err(domain(format!("case {case:?} needs s > 0, got {s}")));
                }
            }
        }
        Ok(Self { case, s, mu })
    }

    /// The multiplication part of G.
    pub fn weight(&self) -> WeightSpec {
        let (base, exponent) = match self.case {
            Case::I => (WeightBase::W1, self.s),
            Case::II => (WeightBase::W2, self.s),
            Case::III => (WeightBase::W3, self.mu),
            Case::IV => (WeightBase::W4, self.mu),
        };
        WeightSpec { base, exponent }
    }

    /// The spectral part S of G = w S, a function of L.
    pub fn spectral(&self) -> OperatorSpec {
        self.spectral_power(1.0)
    }

    /// S^2, the diagonal factor of G R G^* = w S^2 R w.
    pub fn spectral_squared(&self) -> OperatorSpec {
        self.spectral_power(2.0)
    }

    fn spectral_power(&self, p: f64) -> OperatorSpec {
        match self.case {
            Case::I | Case::II => OperatorSpec::SobolevJapaneseBracket(0.5 * p * (self.s - 1.0)),
            Case::III => OperatorSpec::Product(vec![
                OperatorSpec::PowerOfL(0.5 * p * self.s),
                OperatorSpec::SobolevJapaneseBracket(-0.25 * p),
            ]),
            Case::IV => OperatorSpec::PowerOfL(0.5 * p * (self.s - self.mu)),
        }
    }
}

/// Log-spaced magnitudes in [lo, hi] crossed with a set of arguments.
pub fn sigma_grid(lo: f64, hi: f64, magnitudes: usize, args: &[f64]) -> Result<Vec<Complex64>> {
    if !(lo > 0.0 && hi >= lo) || magnitudes == 0 {
        return Err(domain("sigma grid needs 0 < lo <= hi and at least one magnitude"));
    }
    let mut out = Vec::with_capacity(magnitudes * args.len());
    for m in 0..magnitudes {
        let x = if magnitudes == 1 { 0.0 } else { m as f64 / (magnitudes - 1) as f64 };
        let mag = lo * (hi / lo).powf(x);
        for &a in args {
            let s = Complex64::from_polar(mag, a);
            if s.im == 0.0 {
                return Err(Error::Pole(s.re));
            }
            out.push(s);
        }
    }
    Ok(out)
}

/// Arguments of the default grid: +-pi/6, +-pi/2, +-5 pi/6 and the
/// near-real rays +-1e-2.
pub fn default_sigma_args() -> [f64; 8] {
    use std::f64::consts::PI;
    [PI / 6.0, -PI / 6.0, PI / 2.0, -PI / 2.0, 5.0 * PI / 6.0, -5.0 * PI / 6.0, 1e-2, -1e-2]
}

/// The default 200-point grid: 25 magnitudes in [1e-2, 1e2] crossed with
/// [`default_sigma_args`].
pub fn default_sigma_grid() -> Vec<Complex64> {
    sigma_grid(1e-2, 1e2, 25, &default_sigma_args()).expect("valid default grid")
}

/// Maximum of a slice, NaN-propagating.
pub(crate) fn max_of(xs: impl IntoIterator<Item = f64>) -> f64 {
    xs.into_iter().fold(f64::NEG_INFINITY, |a, b| if a.is_nan() || b.is_nan() { f64::NAN } else { a.max(b) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_flag_follows_kind_and_gates() {
        let r = VerificationReport::bound_check("b", 1.0, 2.0, 0.0);
        assert!(r.pass && r.margin == 1.0);
        let r = r.gated("projection_residual", 1e-5, 1e-6);
        assert!(!r.pass);
        let r = VerificationReport::strict_bound_check("s", 2.0, 2.0, 0.0);
        assert!(!r.pass);
        let r = VerificationReport::residual_check("r", 1e-9, 1e-8);
        assert!(r.pass && r.bound.is_nan());
        assert!(!VerificationReport::value("v", f64::NAN).pass);
        let r = VerificationReport::residual_check("r", 1e-9, 1e-8).residual("info", 1.0);
        assert!(r.pass);
    }

    #[test]
    fn default_sigma_grid_has_200_points_off_the_axis() {
        let g = default_sigma_grid();
        assert_eq!(g.len(), 200);
        assert!(g.iter().all(|s| s.im != 0.0));
        let mags: Vec<f64> = g.iter().map(|s| s.norm()).collect();
        assert!((max_of(mags.iter().copied()) - 100.0).abs() < 1e-9);
        assert!(mags.iter().all(|&m| m > 0.0099));
    }

    #[test]
    fn g_weight_constraints() {
        assert!(GWeightSpec::new(Case::I, 0.4, 1.0, 1).is_err());
        assert!(GWeightSpec::new(Case::II, 1.0, 1.0, 1).is_err());
        assert!(GWeightSpec::new(Case::IV, 1.0, 0.5, 1).is_err());
        let g = GWeightSpec::new(Case::IV, 1.0, 1.0, 1).unwrap();
        assert_eq!(g.weight(), WeightSpec::plain(WeightBase::W4));
    }
}
