//! Joint spectral multipliers of (L, -iT) acting diagonally on
//! Fourier-Laguerre coefficients.

use crate::error::{domain, Error, Result};
use crate::field::SpectralCoefficients;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Dimension data of the Heisenberg group H^d.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimSpec {
    pub d: usize,
}

impl DimSpec {
    pub fn new(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(domain("d must be at least 1"));
        }
        Ok(Self { d })
    }

    /// Homogeneous dimension 2d + 2.
    pub fn q(&self) -> usize {
        2 * self.d + 2
    }
}

/// A multiplier m(k, lambda) of the joint calculus.
#[derive(Debug, Clone, PartialEq)]
pub enum OperatorSpec {
    SubLaplacian,
    /// L^s by the spectral theorem.
    PureFractional(f64),
    /// The conformal power L_s, 0 < s < d + 1.
    Conformal(f64),
    /// <L>^a = (1 + L^2)^{a/2}.
    SobolevJapaneseBracket(f64),
    /// L^beta for any real beta.
    PowerOfL(f64),
    /// |T|^p, multiplier |lambda|^p.
    AbsT(f64),
    /// (H - sigma)^{-1}.
    Resolvent(Box<OperatorSpec>, Complex64),
    /// e^{-i tau H}.
    Propagator(Box<OperatorSpec>, f64),
    Product(Vec<OperatorSpec>),
}

impl OperatorSpec {
    pub fn resolvent(base: OperatorSpec, sigma: Complex64) -> Result<Self> {
        if sigma.im == 0.0 {
            return Err(Error::Pole(sigma.re));
        }
        Ok(Self::Resolvent(Box::new(base), sigma))
    }

    pub fn propagator(base: OperatorSpec, tau: f64) -> Self {
        Self::Propagator(Box::new(base), tau)
    }

    /// Structural validity for dimension d.
    pub fn validate(&self, d: usize) -> Result<()> {
        match self {
            Self::PureFractional(s) if !(*s > 0.0 && s.is_finite()) => {
                Err(domain(format!("L^s needs s > 0, got {s}")))
            }
            Self::Conformal(s) if !(*s > 0.0 && *s < d as f64 + 1.0) => {
                Err(domain(format!("L_s needs 0 < s < d + 1 = {}, got {s}", d + 1)))
            }
            Self::Resolvent(_, sigma) if sigma.im == 0.0 => Err(Error::Pole(sigma.re)),
            Self::Resolvent(b, _) | Self::Propagator(b, _) => b.validate(d),
            Self::Product(list) => list.iter().try_for_each(|op| op.validate(d)),
            _ => Ok(()),
        }
    }
}

/// Eigenvalue 4 (2k + d) |lambda| of L on phi_k^lambda.
pub fn eig_l(k: usize, lambda: f64, d: usize) -> Result<f64> {
    if lambda == 0.0 || !lambda.is_finite() {
        return Err(domain(format!("lambda must be finite and nonzero, got {lambda}")));
    }
    if d == 0 {
        return Err(domain("d must be at least 1"));
    }
    Ok(4.0 * (2 * k + d) as f64 * lambda.abs())
}

/// Gamma(rho + (1 + s)/2) / Gamma(rho + (1 - s)/2) / rho^s with
/// rho = 2 (2k + d): the ratio of the conformal to the pure power.
pub fn conformal_ratio(s: f64, rho: f64) -> f64 {
    (ln_gamma_ratio(rho, 0.5 * (1.0 + s), 0.5 * (1.0 - s)) - s * rho.ln()).exp()
}

/// ln Gamma(x + a) - ln Gamma(x + b) for x + a, x + b > 0.
///
/// Differencing two large log-gamma values loses digits, so the arguments
/// are shifted up to at least 30 with the recurrence and the Stirling
/// series is differenced term by term with ln1p.
pub fn ln_gamma_ratio(x: f64, a: f64, b: f64) -> f64 {
    const SHIFT_TO: f64 = 30.0;
    if !(x + a > 0.0 && x + b > 0.0) {
        return f64::NAN;
    }
    let mut correction = 0.0;
    let mut y = x;
    while y + a.min(b) < SHIFT_TO {
        correction += ((y + a) / (y + b)).ln();
        y += 1.0;
    }
    // Stirling: ln Gamma(z) = (z - 1/2) ln z - z + ln(2 pi)/2 + sum_n B_2n / (2n (2n-1) z^{2n-1}).
    const COEF: [f64; 6] = [1.0 / 12.0, -1.0 / 360.0, 1.0 / 1260.0, -1.0 / 1680.0, 1.0 / 1188.0, -691.0 / 360360.0];
    let series = |z: f64| {
        let inv2 = 1.0 / (z * z);
        let mut p = 1.0 / z;
        let mut acc = 0.0;
        for c in COEF {
            acc += c * p;
            p *= inv2;
        }
        acc
    };
    let main = (a - b) * y.ln() + (y + a - 0.5) * (a / y).ln_1p() - (y + b - 0.5) * (b / y).ln_1p() - (a - b);
    main + series(y + a) - series(y + b) - correction
}

/// Value of the multiplier at (k, lambda).
pub fn multiplier(op: &OperatorSpec, k: usize, lambda: f64, d: usize) -> Result<Complex64> {
    let eig = eig_l(k, lambda, d)?;
    Ok(match op {
        OperatorSpec::SubLaplacian => eig.into(),
        OperatorSpec::PureFractional(s) => {
            if !(*s > 0.0) {
                return Err(domain(format!("L^s needs s > 0, got {s}")));
            }
            eig.powf(*s).into()
        }
        OperatorSpec::Conformal(s) => {
            if !(*s > 0.0 && *s < d as f64 + 1.0) {
                return Err(domain(format!("L_s needs 0 < s < d + 1, got {s}")));
            }
            let two_l = 2.0 * lambda.abs();
            let rho = eig / two_l;
            let lg = ln_gamma_ratio(rho, 0.5 * (1.0 + s), 0.5 * (1.0 - s));
            (two_l.powf(*s) * lg.exp()).into()
        }
        OperatorSpec::SobolevJapaneseBracket(a) => (1.0 + eig * eig).powf(0.5 * a).into(),
        OperatorSpec::PowerOfL(beta) => eig.powf(*beta).into(),
        OperatorSpec::AbsT(p) => lambda.abs().powf(*p).into(),
        OperatorSpec::Resolvent(base, sigma) => {
            if sigma.im == 0.0 {
                return Err(Error::Pole(sigma.re));
            }
            1.0 / (multiplier(base, k, lambda, d)? - sigma)
        }
        OperatorSpec::Propagator(base, tau) => {
            let m = multiplier(base, k, lambda, d)?;
            (Complex64::new(0.0, -tau) * m).exp()
        }
        OperatorSpec::Product(list) => {
            let mut acc = Complex64::new(1.0, 0.0);
            for op in list {
                acc *= multiplier(op, k, lambda, d)?;
            }
            acc
        }
    })
}

/// Largest multiplier magnitude accepted by `apply`.
pub const OVERFLOW_GUARD: f64 = 1e300;

/// Diagonal action c'_kj = m(k, lambda_j) c_kj.
pub fn apply(op: &OperatorSpec, coeffs: &SpectralCoefficients) -> Result<SpectralCoefficients> {
    let d = coeffs.d();
    op.validate(d)?;
    let mut out = coeffs.clone();
    let grid = coeffs.grid().clone();
    for (j, &lambda) in grid.points().iter().enumerate() {
        for (k, c) in out.block_mut(j).iter_mut().enumerate() {
            if *c == Complex64::new(0.0, 0.0) {
                continue;
            }
            let m = multiplier(op, k, lambda, d)?;
            if !(m.norm() <= OVERFLOW_GUARD) {
                return Err(Error::Overflow(format!("|m| = {} at k = {k}, lambda = {lambda}", m.norm())));
            }
            *c *= m;
        }
    }
    Ok(out)
}

/// Half the logarithm of the dilation factor for `steps` grid steps.
pub fn dilation_tau(coeffs: &SpectralCoefficients, steps: i64) -> Result<f64> {
    let ratio = coeffs
        .grid()
        .ratio()
        .ok_or_else(|| domain("dilation needs a geometric lambda grid"))?;
    Ok(0.5 * steps as f64 * ratio.ln())
}

/// The unitary dilation f -> e^{Q tau / 2} f(e^tau z, e^{2 tau} t) with
/// e^{2 tau} = ratio^steps.
///
/// Coefficients move from lambda_j to lambda_j e^{2 tau} and pick up the
/// factor e^{-tau}: e^{Q tau/2} from the definition, e^{-2 tau} from the
/// lambda quadrature weight and e^{-d tau} from the basis normalisation.
pub fn dilate(steps: i64, coeffs: &SpectralCoefficients) -> Result<SpectralCoefficients> {
    let tau = dilation_tau(coeffs, steps)?;
    let grid = coeffs.grid().clone();
    let factor = Complex64::new((-tau).exp(), 0.0);
    let mut out = SpectralCoefficients::zeros(coeffs.d(), coeffs.kmax(), grid.clone())?;
    for j in coeffs.support() {
        let target = grid.shifted(j, steps).ok_or_else(|| {
            Error::Range(format!("dilation by {steps} steps moves lambda = {} off the grid", grid.points()[j]))
        })?;
        for (dst, src) in out.block_mut(target).iter_mut().zip(coeffs.block(j)) {
            *dst = factor * src;
        }
    }
    Ok(out)
}

/// Bounds c_s <= m <= C_s of the conformal-to-pure ratio on a sampled
/// spectrum, with the Stirling limit check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComparabilityRange {
    pub c_s: f64,
    pub big_c_s: f64,
    /// |m(rho) - 1| at rho = 1e8, which tends to zero.
    pub stirling_defect: f64,
}

impl ComparabilityRange {
    /// Constants extended to include the limit value 1 reached as rho grows.
    pub fn with_limit(&self) -> (f64, f64) {
        (self.c_s.min(1.0), self.big_c_s.max(1.0))
    }
}

/// Range of L_s / L^s over k <= kmax and the sampled lambdas. The ratio
/// does not depend on lambda; the samples are evaluated anyway so the
/// result is a genuine sampled min and max.
pub fn comparability_range(s: f64, d: usize, kmax: usize, lambda_samples: &[f64]) -> Result<ComparabilityRange> {
    let conformal = OperatorSpec::Conformal(s);
    conformal.validate(d)?;
    let pure = OperatorSpec::PureFractional(s);
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for &lambda in lambda_samples {
        for k in 0..=kmax {
            let m = multiplier(&conformal, k, lambda, d)?.re / multiplier(&pure, k, lambda, d)?.re;
            lo = lo.min(m);
            hi = hi.max(m);
        }
    }
    if !(lo > 0.0 && hi.is_finite()) {
        return Err(domain("empty or degenerate spectrum sample"));
    }
    Ok(ComparabilityRange { c_s: lo, big_c_s: hi, stirling_defect: (conformal_ratio(s, 1e8) - 1.0).abs() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::LambdaGrid;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use statrs::function::gamma::ln_gamma;
    use std::sync::Arc;

    #[test]
    fn eigenvalue_examples() {
        assert_eq!(eig_l(0, 1.0, 1).unwrap(), 4.0);
        assert_eq!(eig_l(1, -0.5, 2).unwrap(), 8.0);
        assert!(eig_l(0, 0.0, 1).is_err());
    }

    #[test]
    fn conformal_examples() {
        let v = multiplier(&OperatorSpec::Conformal(0.5), 0, 1.0, 1).unwrap();
        let want = 2f64.sqrt() * (ln_gamma(2.75) - ln_gamma(2.25)).exp();
        assert_relative_eq!(v.re, want, max_relative = 1e-14);
        let tiny = multiplier(&OperatorSpec::Conformal(1e-9), 3, 2.0, 2).unwrap();
        assert!((tiny.re - 1.0).abs() < 1e-7);
        assert!(multiplier(&OperatorSpec::Conformal(2.0), 0, 1.0, 1).is_err());
    }

    #[test]
    fn gamma_ratio_matches_log_gamma_where_that_is_accurate() {
        for (x, a, b) in [(0.5, 0.8, 0.2), (2.0, 1.0, 0.0), (7.3, 0.875, 0.125), (29.0, 1.25, -0.25)] {
            let want = ln_gamma(x + a) - ln_gamma(x + b);
            assert_relative_eq!(ln_gamma_ratio(x, a, b), want, max_relative = 1e-13, epsilon = 1e-14);
        }
        // Gamma(x + 1) / Gamma(x) = x exactly.
        for x in [3.0, 123.0, 1e5, 3e9] {
            assert_relative_eq!(ln_gamma_ratio(x, 1.0, 0.0).exp(), x, max_relative = 1e-14);
        }
    }

    #[test]
    fn resolvent_requires_nonreal_sigma() {
        assert_eq!(OperatorSpec::resolvent(OperatorSpec::SubLaplacian, 2.0.into()), Err(Error::Pole(2.0)));
        let op = OperatorSpec::Resolvent(Box::new(OperatorSpec::SubLaplacian), 1.0.into());
        assert!(multiplier(&op, 0, 1.0, 1).is_err());
    }

    fn sample(grid: Arc<LambdaGrid>) -> SpectralCoefficients {
        SpectralCoefficients::from_fn(1, 6, grid, |k, j| {
            Complex64::new((k as f64 + 1.0).recip(), ((j % 7) as f64 - 3.0) * 0.1)
        })
        .unwrap()
    }

    #[test]
    fn resolvent_inverts_and_propagator_is_unitary() {
        let g = Arc::new(LambdaGrid::geometric(0.05, 2f64.powf(0.125), 40).unwrap());
        let c = sample(g);
        let sigma = Complex64::new(3.0, 0.2);
        let h = OperatorSpec::Conformal(0.75);
        let r = apply(&OperatorSpec::resolvent(h.clone(), sigma).unwrap(), &c).unwrap();
        let back = apply(&h, &r).unwrap().combine(1.0.into(), &r, -sigma).unwrap();
        for (a, b) in back.values().iter().zip(c.values()) {
            assert!((a - b).norm() <= 1e-12 * b.norm().max(1e-300));
        }
        assert!(r.norm_sqr().sqrt() <= c.norm_sqr().sqrt() / sigma.im);
        let u = apply(&OperatorSpec::propagator(OperatorSpec::SubLaplacian, 0.7), &c).unwrap();
        assert_relative_eq!(u.norm_sqr(), c.norm_sqr(), max_relative = 1e-14);
    }

    #[test]
    fn overflow_is_rejected() {
        let g = Arc::new(LambdaGrid::geometric(1.0, 2.0, 4).unwrap());
        let c = sample(g);
        assert!(matches!(apply(&OperatorSpec::PowerOfL(400.0), &c), Err(Error::Overflow(_))));
    }

    #[test]
    fn dilation_is_unitary_and_homogeneous() {
        let g = Arc::new(LambdaGrid::geometric(0.05, 2f64.powf(0.125), 60).unwrap());
        let mut c = SpectralCoefficients::zeros(2, 5, g.clone()).unwrap();
        for j in 20..40 {
            for k in 0..=5 {
                c.set(k, j, Complex64::new(j as f64 * 0.01, k as f64 - 2.0));
            }
        }
        assert_eq!(dilate(0, &c).unwrap(), c);
        for steps in [-7, -1, 3, 8] {
            let u = dilate(steps, &c).unwrap();
            assert_relative_eq!(u.norm_sqr(), c.norm_sqr(), max_relative = 1e-12);
            let tau = dilation_tau(&c, steps).unwrap();
            let lhs = apply(&OperatorSpec::SubLaplacian, &u).unwrap();
            let rhs = dilate(steps, &apply(&OperatorSpec::SubLaplacian, &c).unwrap()).unwrap();
            for (a, b) in lhs.values().iter().zip(rhs.values()) {
                assert!((a - (2.0 * tau).exp() * b).norm() <= 1e-12 * a.norm().max(1e-300));
            }
        }
        assert!(matches!(dilate(40, &c), Err(Error::Range(_))));
    }

    #[test]
    fn dilation_matches_physical_definition() {
        use crate::field::synthesize;
        let g = Arc::new(LambdaGrid::geometric(0.05, 2f64.powf(0.125), 60).unwrap());
        let mut c = SpectralCoefficients::zeros(1, 3, g).unwrap();
        c.set(0, 70, Complex64::new(1.0, 0.3));
        c.set(2, 75, Complex64::new(-0.4, 0.0));
        c.set(1, 45, Complex64::new(0.2, 0.2));
        let steps = 5;
        let tau = dilation_tau(&c, steps).unwrap();
        let u = dilate(steps, &c).unwrap();
        let q = DimSpec::new(1).unwrap().q() as f64;
        for (r, t) in [(0.3, 0.1), (1.1, -0.7), (0.05, 2.0)] {
            let lhs = synthesize(&u, &[(r, t)])[0];
            let rhs = (0.5 * q * tau).exp() * synthesize(&c, &[(tau.exp() * r, (2.0 * tau).exp() * t)])[0];
            assert!((lhs - rhs).norm() < 1e-12 * rhs.norm().max(1.0));
        }
    }

    #[test]
    fn comparability_examples() {
        let lams = [0.1, 1.0, 7.0];
        let one = comparability_range(1.0, 1, 40, &lams).unwrap();
        assert!((one.c_s - 1.0).abs() < 1e-13 && (one.big_c_s - 1.0).abs() < 1e-13);
        let r = comparability_range(0.6, 1, 200, &lams).unwrap();
        assert!(r.c_s > 0.0 && r.c_s <= r.big_c_s && r.big_c_s.is_finite());
        assert!(r.stirling_defect < 1e-8);
        let far = conformal_ratio(0.6, 2.0 * (2.0 * 200.0 + 1.0));
        let near = conformal_ratio(0.6, 2.0);
        assert!((far - 1.0).abs() < (near - 1.0).abs());
    }

    proptest! {
        #[test]
        fn conformal_one_is_sublaplacian(k in 0usize..200, lam in -50.0..50.0f64, d in 1usize..6) {
            prop_assume!(lam.abs() > 1e-6);
            let a = multiplier(&OperatorSpec::Conformal(1.0), k, lam, d).unwrap().re;
            let b = eig_l(k, lam, d).unwrap();
            prop_assert!((a - b).abs() <= 1e-12 * b);
        }

        #[test]
        fn t_is_dominated_by_half_l(k in 0usize..500, lam in -1e3..1e3f64, d in 1usize..8) {
            prop_assume!(lam != 0.0);
            prop_assert!(lam.abs() <= 0.5 * eig_l(k, lam, d).unwrap());
        }

        #[test]
        fn multipliers_are_homogeneous(k in 0usize..60, lam in 0.01..10.0f64, steps in -16i64..16, s in 0.3..1.9f64) {
            let e = 2f64.powf(0.125 * steps as f64);
            for op in [OperatorSpec::PureFractional(s), OperatorSpec::Conformal(s)] {
                let a = multiplier(&op, k, e * lam, 1).unwrap().re;
                let b = e.powf(s) * multiplier(&op, k, lam, 1).unwrap().re;
                prop_assert!((a - b).abs() <= 1e-12 * b);
            }
        }
    }
}
