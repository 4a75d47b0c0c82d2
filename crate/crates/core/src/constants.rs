//! Explicit constants: generalised Dawson integrals, the resolvent constant
//! kappa, the operator-norm bounds built from it, stability thresholds and
//! the Gronwall envelope.

use crate::error::{domain, Error, Result};
use crate::quadrature::integrate;
use serde::{Deserialize, Serialize};

/// 2 (3 e^{1/4} - 2)^2, the closed upper bound for kappa(L, 1, 1).
pub fn kappa_closed_11() -> f64 {
    let c = 3.0 * 0.25f64.exp() - 2.0;
    2.0 * c * c
}

/// Generalised Dawson integral D(p, x) = e^{-x^p} int_0^x e^{tau^p} dtau.
pub fn dawson(p: f64, x: f64) -> Result<f64> {
    dawson_tol(p, x, 1e-14)
}

/// Relative gap 1 - D_p(x) / (x^{1-p} (1 - e^{-x^p})), zero at p = 1.
///
/// For x^p <= 1/4 both sides are expanded in powers of x^p and the gap is
/// summed term by term, so it stays accurate when x^p is far below the
/// rounding level of the ratio itself.
pub fn dawson_remark_gap(p: f64, x: f64) -> Result<f64> {
    let lhs = dawson(p, x)?;
    if x == 0.0 {
        return Err(domain("the remark bound is 0/0 at x = 0"));
    }
    let xp = x.powf(p);
    if xp > 0.25 {
        let rhs = x.powf(1.0 - p) * (-(-xp).exp_m1());
        return Ok((rhs - lhs) / rhs);
    }
    // rhs ~ sum_m x^{mp} / (m + 1)!, lhs ~ sum_m x^{mp} / (m! (mp + 1)).
    let (mut pow_fact, mut num, mut den) = (1.0, 0.0, 1.0);
    for m in 1..60 {
        let mf = m as f64;
        pow_fact *= xp / mf;
        let term = pow_fact * (1.0 / (mf + 1.0) - 1.0 / (mf * p + 1.0));
        num += term;
        den += pow_fact / (mf + 1.0);
        if pow_fact < 1e-20 * den {
            break;
        }
    }
    Ok(num / den)
}

/// Dawson integral with an explicit absolute tolerance.
pub fn dawson_tol(p: f64, x: f64, tol: f64) -> Result<f64> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(domain(format!("Dawson order p = {p} must be finite and >= 1")));
    }
    if !(x >= 0.0) || !x.is_finite() {
        return Err(domain(format!("Dawson argument x = {x} must be finite and >= 0")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    let xp = x.powf(p);
    if xp <= 0.25 {
        // e^{-x^p} sum_n x^{np+1} / (n! (np+1))
        let mut term = x;
        let mut sum = x;
        for n in 1..60 {
            let nf = n as f64;
            term *= xp / nf;
            let add = term / (nf * p + 1.0);
            sum += add;
            if add < 1e-18 * sum {
                break;
            }
        }
        return Ok((-xp).exp() * sum);
    }
    // Integrate in sigma = x - tau, where the integrand exp((x-sigma)^p - x^p)
    // is largest, over panels that double in width away from sigma = 0.
    let f = |sigma: f64| ((x - sigma).max(0.0).powf(p) - xp).exp();
    let mut width = (1.0 / (p * x.powf(p - 1.0))).min(x);
    let mut lo = 0.0;
    let mut total = 0.0;
    while lo < x {
        let hi = (lo + width).min(x);
        let est = integrate(f, lo, hi, tol * 0.05, 1e-15)?;
        total += est.value;
        if f(hi) < 1e-30 && hi < x {
            // Remaining mass is bounded by e^{-(x^p - (x - hi)^p)} (x - hi).
            if f(hi) * (x - hi) < tol * 1e-3 {
                break;
            }
        }
        lo = hi;
        width *= 2.0;
    }
    Ok(total)
}

/// Input of the kappa functional together with its derived coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KappaInput {
    pub c1: f64,
    pub c2: f64,
    pub s: f64,
    pub mu: f64,
    pub k1: f64,
    pub k2: f64,
    pub k3: f64,
}

impl KappaInput {
    pub fn new(c1: f64, c2: f64, s: f64, mu: f64) -> Result<Self> {
        if !(c1 > 0.0 && c2 >= c1 && c2.is_finite()) {
            return Err(domain(format!("need 0 < C1 <= C2, got C1 = {c1}, C2 = {c2}")));
        }
        if !(s > 0.0 && s.is_finite()) {
            return Err(domain(format!("need s > 0, got {s}")));
        }
        if !(mu > 0.5 && mu <= 1.0) {
            return Err(domain(format!("need 1/2 < mu <= 1, got {mu}")));
        }
        let k1 = (2.0 * c1 * c1 / c2).powf(-0.5);
        let k2 = (2.0 * s / c1).sqrt() * s.max(2.0 * (-(1.0 + s / 2.0)).exp());
        let k3 = (2.0 - mu) / (mu - 0.5) * (2.0 * c1 * s).powf(-0.5);
        Ok(Self { c1, c2, s, mu, k1, k2, k3 })
    }

    /// The bracketed objective of kappa at b > 0.
    pub fn objective(&self, b: f64) -> Result<f64> {
        self.objective_tol(b, 1e-14)
    }

    fn objective_tol(&self, b: f64, tol: f64) -> Result<f64> {
        let q = self.mu - 0.5;
        let bracket = self.k1 / b.sqrt()
            + self.k2 * b.sqrt() * dawson_tol(2.0, b.sqrt(), tol)?
            + self.k3 * b.powf(q) * dawson_tol(1.0 / q, b.powf(q), tol)?;
        Ok((2.0 * b).exp() * bracket * bracket)
    }

    /// The closed form obtained from D(p, x) < x^{1-p}(1 - e^{-x^p}).
    pub fn closed_objective(&self, b: f64) -> f64 {
        let eb = b.exp();
        let v = self.k1 * eb / b.sqrt()
            + (self.k2 + self.k3 * b.powf(2.0 * self.mu - 2.0)) * (eb - 1.0);
        v * v
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KappaResult {
    pub kappa: f64,
    pub b_star: f64,
    pub closed_bound: f64,
}

/// Search interval for ln b.
const LOG_B_RANGE: (f64, f64) = (-12.0, 4.0);

/// Global minimum of a smooth function of ln b by a coarse scan followed by
/// golden-section refinement of every interior local minimum.
fn minimise_log_b(
    f: &dyn Fn(f64) -> Result<f64>,
    samples: usize,
    xtol: f64,
) -> Result<(f64, f64)> {
    let (lo, hi) = LOG_B_RANGE;
    let h = (hi - lo) / (samples - 1) as f64;
    let ys: Vec<f64> = (0..samples).map(|i| lo + h * i as f64).collect();
    let vals: Vec<f64> = ys.iter().map(|&y| f(y.exp())).collect::<Result<_>>()?;
    let argmin = vals
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .unwrap_or(0);
    if argmin == 0 || argmin == samples - 1 {
        return Err(Error::Optimization(format!(
            "minimum on the boundary of ln b in [{lo}, {hi}]"
        )));
    }
    let mut best = (f64::INFINITY, f64::NAN);
    for i in 1..samples - 1 {
        if !(vals[i] <= vals[i - 1] && vals[i] <= vals[i + 1]) {
            continue;
        }
        let (mut a, mut b) = (ys[i - 1], ys[i + 1]);
        let g = 0.5 * (5f64.sqrt() - 1.0);
        let mut c = b - g * (b - a);
        let mut d = a + g * (b - a);
        let mut fc = f(c.exp())?;
        let mut fd = f(d.exp())?;
        while (b - a).abs() > xtol {
            if fc < fd {
                b = d;
                d = c;
                fd = fc;
                c = b - g * (b - a);
                fc = f(c.exp())?;
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + g * (b - a);
                fd = f(d.exp())?;
            }
        }
        let y = 0.5 * (a + b);
        let v = f(y.exp())?;
        if v < best.0 {
            best = (v, y.exp());
        }
    }
    Ok(best)
}

/// kappa(H, s, mu) and its closed upper bound.
pub fn kappa(input: &KappaInput) -> Result<KappaResult> {
    kappa_with(input, 1e-14, 1e-9)
}

/// kappa with explicit Dawson and optimiser tolerances.
pub fn kappa_with(input: &KappaInput, dawson_tol: f64, xtol: f64) -> Result<KappaResult> {
    let (kappa, b_star) = minimise_log_b(&|b| input.objective_tol(b, dawson_tol), 65, xtol)?;
    let (closed_bound, _) = minimise_log_b(&|b| Ok(input.closed_objective(b)), 65, xtol)?;
    Ok(KappaResult { kappa, b_star, closed_bound })
}

/// Weight families of the explicit operator-norm bounds for L.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Remark27 {
    W1,
    W2,
    W3N,
    W4N,
}

/// The four explicit bounds for the sandwiched resolvent of L.
pub fn remark27_bound(which: Remark27, d: usize) -> Result<f64> {
    let df = d as f64;
    let need_two = !matches!(which, Remark27::W1);
    if d == 0 || (need_two && d < 2) {
        return Err(domain(format!("{which:?} bound requires d >= {}", if need_two { 2 } else { 1 })));
    }
    let factor = match which {
        Remark27::W1 => (5.0 + 3.0 / df).powi(2),
        Remark27::W2 => (5.0 + 4.0 / (df - 1.0)).powi(2),
        Remark27::W3N => (4.0 + 1.0 / df + 1.0 / (df - 1.0)).powi(2),
        Remark27::W4N => 3.0 + 1.0 / (df - 1.0),
    };
    Ok(kappa_closed_11() * factor)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RadialWeight {
    W3,
    W4,
}

/// Bound for cylindrical data, kappa for H = L^s (C1 = C2 = 1).
pub fn radial_bound(which: RadialWeight, d: usize, s: f64, mu: f64) -> Result<f64> {
    radial_bound_with(which, d, &KappaInput::new(1.0, 1.0, s, mu)?)
}

/// Bound for cylindrical data with the comparability constants of H.
pub fn radial_bound_with(which: RadialWeight, d: usize, input: &KappaInput) -> Result<f64> {
    if d == 0 {
        return Err(domain("d must be at least 1"));
    }
    let (df, mu) = (d as f64, input.mu);
    let factor = match which {
        RadialWeight::W3 => (4.0 + 1.0 / df).powf(mu),
        // The proof writes (1 + sqrt2 a); a is evaluated at mu.
        RadialWeight::W4 => (1.0 + 2f64.sqrt() * mu) * (3.0 + 2.0 / df).powf(mu),
    };
    Ok(kappa(input)?.kappa * factor * factor)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StabilityCase {
    I,
    II,
}

/// Supremum of admissible coupling constants for spectral stability.
pub fn stability_threshold(case: StabilityCase, d: usize) -> Result<f64> {
    let df = d as f64;
    let c = 3.0 * 0.25f64.exp() - 2.0;
    match case {
        StabilityCase::I if d >= 1 => Ok(0.5 / (c * c * (5.0 + 3.0 / df).powi(2))),
        StabilityCase::II if d >= 2 => Ok(0.5 / (c * c * (5.0 + 4.0 / (df - 1.0)).powi(2))),
        _ => Err(domain(format!("stability case {case:?} is not defined for d = {d}"))),
    }
}

/// The four weight operators G of the resolvent estimates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Case {
    I,
    II,
    III,
    IV,
}

/// A bound together with the formula it came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bound {
    pub value: f64,
    pub source: String,
}

/// Bound on sup_sigma ||G (H - sigma)^{-1} G^*|| for cylindrical data.
///
/// `c1`, `c2` are the comparability constants of H against L^s (both 1 for
/// H = L^s). For H = L itself the explicit numbers of the operator-norm
/// remark are used where they apply; otherwise kappa is composed with the
/// square of the weighted-operator factor.
pub fn resolvent_bound(case: Case, d: usize, s: f64, mu: f64, c1: f64, c2: f64) -> Result<Bound> {
    let df = d as f64;
    let is_l = s == 1.0 && c1 == 1.0 && c2 == 1.0;
    let sqrt2 = 2f64.sqrt();
    match case {
        Case::I | Case::II => {
            if !(s > 0.5 && s <= 1.0) {
                return Err(domain(format!("case {case:?} needs 1/2 < s <= 1, got {s}")));
            }
            if case == Case::II && d < 2 {
                return Err(domain("case II needs d >= 2"));
            }
            let base = if case == Case::I { 5.0 + 3.0 / df } else { 5.0 + 4.0 / (df - 1.0) };
            if is_l {
                let which = if case == Case::I { Remark27::W1 } else { Remark27::W2 };
                return Ok(Bound {
                    value: remark27_bound(which, d)?,
                    source: format!("remark27 {which:?}"),
                });
            }
            let c = if s == 1.0 {
                base * base
            } else {
                (1.0 + sqrt2 * s).powi(2) * base.powf(2.0 * s)
            };
            let k = kappa(&KappaInput::new(c1, c2, s, s)?)?.kappa;
            Ok(Bound { value: k * c, source: "kappa(H,s,s) C(s)".into() })
        }
        Case::III | Case::IV => {
            let which = if case == Case::III { RadialWeight::W3 } else { RadialWeight::W4 };
            let radial = radial_bound_with(which, d, &KappaInput::new(c1, c2, s, mu)?)?;
            if is_l && mu == 1.0 && d >= 2 {
                let r27 = if case == Case::III { Remark27::W3N } else { Remark27::W4N };
                let v = remark27_bound(r27, d)?;
                if v <= radial {
                    return Ok(Bound { value: v, source: format!("remark27 {r27:?}") });
                }
            }
            Ok(Bound { value: radial, source: format!("radial {which:?}") })
        }
    }
}

/// The Gronwall envelope with constant u1 on (eps, b):
/// {A^{1/2} + 1/2 int_eps^b u2(r) e^{-u1 (b - r)/2} dr}^2 e^{u1 (b - eps)}.
pub fn gronwall_envelope(
    a: f64,
    u1: f64,
    u2: &dyn Fn(f64) -> f64,
    eps: f64,
    b: f64,
) -> Result<f64> {
    if !(a >= 0.0 && u1 >= 0.0) {
        return Err(domain(format!("need A >= 0 and u1 >= 0, got A = {a}, u1 = {u1}")));
    }
    if !(eps < b && eps.is_finite() && b.is_finite()) {
        return Err(domain(format!("need eps < b, got eps = {eps}, b = {b}")));
    }
    let est = integrate(|r| u2(r) * (-0.5 * u1 * (b - r)).exp(), eps, b, 1e-13, 1e-12)?;
    let root = a.sqrt() + 0.5 * est.value;
    Ok(root * root * (u1 * (b - eps)).exp())
}
