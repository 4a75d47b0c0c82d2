//! Cylindrical weight functions of (r, t) with r = |z|.

use crate::error::{domain, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WeightBase {
    /// <r>^{-1} <rho>^{-2} r
    W1,
    /// (1 + r^2 + t^2)^{-1/2}
    W2,
    /// <rho>^{-2} r
    W3,
    /// rho^{-2} r
    W4,
    /// rho = (r^4 + t^2)^{1/4}
    Koranyi,
    AbsZ,
    InvAbsZ,
    One,
}

/// A base weight raised to a real exponent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightSpec {
    pub base: WeightBase,
    pub exponent: f64,
}

impl WeightSpec {
    pub fn new(base: WeightBase, exponent: f64) -> Result<Self> {
        if !exponent.is_finite() {
            return Err(domain(format!("weight exponent {exponent} is not finite")));
        }
        Ok(Self { base, exponent })
    }

    pub fn plain(base: WeightBase) -> Self {
        Self { base, exponent: 1.0 }
    }

    /// Singular weights need the refined radial panel.
    pub fn is_singular(&self) -> bool {
        matches!(self.base, WeightBase::W4 | WeightBase::InvAbsZ) && self.exponent > 0.0
    }

    /// Weights that do not depend on t act fibre by fibre.
    pub fn is_t_independent(&self) -> bool {
        matches!(
            self.base,
            WeightBase::AbsZ | WeightBase::InvAbsZ | WeightBase::One
        ) || self.exponent == 0.0
    }

    pub fn eval(&self, r: f64, t: f64) -> Result<f64> {
        weight_eval(self, r, t)
    }

    /// Evaluation without the singularity checks, for inner loops on grids
    /// that avoid the excluded points.
    pub fn value(&self, r: f64, t: f64) -> f64 {
        let b = base_value(self.base, r, t);
        if self.exponent == 1.0 {
            b
        } else {
            b.powf(self.exponent)
        }
    }
}

/// Koranyi gauge (r^4 + t^2)^{1/4}.
pub fn koranyi(r: f64, t: f64) -> f64 {
    let r2 = r * r;
    (r2 * r2 + t * t).sqrt().sqrt()
}

fn bracket(x: f64) -> f64 {
    (1.0 + x * x).sqrt()
}

fn base_value(base: WeightBase, r: f64, t: f64) -> f64 {
    match base {
        WeightBase::W1 => {
            let rho2 = (r.powi(4) + t * t).sqrt();
            r / (bracket(r) * (1.0 + rho2))
        }
        WeightBase::W2 => 1.0 / (1.0 + r * r + t * t).sqrt(),
        WeightBase::W3 => r / (1.0 + (r.powi(4) + t * t).sqrt()),
        WeightBase::W4 => r / (r.powi(4) + t * t).sqrt(),
        WeightBase::Koranyi => koranyi(r, t),
        WeightBase::AbsZ => r,
        WeightBase::InvAbsZ => 1.0 / r,
        WeightBase::One => 1.0,
    }
}

/// The weight at (r, t), raised to its exponent.
pub fn weight_eval(spec: &WeightSpec, r: f64, t: f64) -> Result<f64> {
    if !(r >= 0.0) || !t.is_finite() || !r.is_finite() {
        return Err(domain(format!("weight evaluated at invalid point ({r}, {t})")));
    }
    match spec.base {
        WeightBase::W4 if r == 0.0 && t == 0.0 => {
            return Err(domain("w4 is singular at the origin"))
        }
        WeightBase::InvAbsZ if r == 0.0 => return Err(domain("|z|^{-1} is singular at r = 0")),
        _ => {}
    }
    Ok(spec.value(r, t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn w(base: WeightBase) -> WeightSpec {
        WeightSpec::plain(base)
    }

    #[test]
    fn examples() {
        assert_eq!(koranyi(1.0, 0.0), 1.0);
        assert_relative_eq!(koranyi(0.0, 4.0), 2.0, max_relative = 1e-15);
        assert_eq!(w(WeightBase::W4).eval(1.0, 0.0).unwrap(), 1.0);
        assert_eq!(w(WeightBase::W2).eval(0.0, 0.0).unwrap(), 1.0);
        assert_eq!(w(WeightBase::W1).eval(0.0, 3.0).unwrap(), 0.0);
        assert_eq!(w(WeightBase::W3).eval(0.0, -2.0).unwrap(), 0.0);
        assert!(w(WeightBase::W4).eval(0.0, 0.0).is_err());
        assert!(w(WeightBase::InvAbsZ).eval(0.0, 1.0).is_err());
        assert!(w(WeightBase::W4).is_singular() && !w(WeightBase::W2).is_singular());
    }

    #[test]
    fn exponent_applies() {
        let s = WeightSpec::new(WeightBase::W2, 0.75).unwrap();
        assert_relative_eq!(s.eval(1.0, 1.0).unwrap(), 3f64.powf(-0.375), max_relative = 1e-15);
        assert!(WeightSpec::new(WeightBase::W2, f64::NAN).is_err());
    }

    proptest! {
        #[test]
        fn koranyi_is_homogeneous(r in 0.0..10.0f64, t in -10.0..10.0f64, l in 0.1..10.0f64) {
            prop_assert!((koranyi(l * r, l * l * t) - l * koranyi(r, t)).abs() <= 1e-13 * (1.0 + l * koranyi(r, t)));
        }

        #[test]
        fn w4_has_degree_minus_one(r in 0.01..10.0f64, t in -10.0..10.0f64, l in 0.1..10.0f64) {
            let a = w(WeightBase::W4).value(l * r, l * l * t);
            let b = w(WeightBase::W4).value(r, t) / l;
            prop_assert!((a - b).abs() <= 1e-12 * b.abs().max(1e-300));
        }

        #[test]
        fn order_and_remark_list(r in 0.0..50.0f64, t in -50.0..50.0f64) {
            prop_assume!(r > 0.0 || t != 0.0);
            let w1 = w(WeightBase::W1).value(r, t);
            let w2 = w(WeightBase::W2).value(r, t);
            let w3 = w(WeightBase::W3).value(r, t);
            let w4 = w(WeightBase::W4).value(r, t);
            let eps = 1e-14;
            prop_assert!(w1 <= w3 * (1.0 + eps) && w3 <= w4 * (1.0 + eps));
            prop_assert!(w1 <= 1.0 && w2 <= 1.0 && w3 <= 1.0 + eps);
            prop_assert!(w1 * r <= 1.0 + eps && w1 * t.abs() <= 1.0 + eps);
            prop_assert!(w3 * t.abs() <= r * (1.0 + eps) + eps);
            prop_assert!(w2 * r <= 1.0 + eps && w2 * t.abs() <= 1.0 + eps);
        }
    }
}
