//! Finite-difference oracles for L and T on cylindrical fields.
//!
//! On functions of (|z|, t), L f = -(f_rr + (2d - 1) f_r / r) - 4 r^2 f_tt.

use super::closure::ClosureField;
use super::grid::PhysicalGrid;
use crate::error::{domain, Result};
use crate::quadrature::pairwise_sum;
use num_complex::Complex64;

fn check(point: (f64, f64), h: f64, strict: bool) -> Result<()> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(domain(format!("step h = {h} must be positive")));
    }
    if strict && !(point.0 > h) {
        return Err(domain(format!("finite differences need r > h, got r = {}, h = {h}", point.0)));
    }
    Ok(())
}

/// Second-order central difference of L f at (r, t).
pub fn fd_sublaplacian(field: &ClosureField, d: usize, point: (f64, f64), h: f64) -> Result<Complex64> {
    check(point, h, true)?;
    let (r, t) = point;
    let f0 = field.eval(r, t);
    let (fp, fm) = (field.eval(r + h, t), field.eval(r - h, t));
    let (gp, gm) = (field.eval(r, t + h), field.eval(r, t - h));
    let f_rr = (fp - 2.0 * f0 + fm) / (h * h);
    let f_r = (fp - fm) / (2.0 * h);
    let f_tt = (gp - 2.0 * f0 + gm) / (h * h);
    Ok(-(f_rr + f_r * ((2 * d - 1) as f64 / r)) - f_tt * (4.0 * r * r))
}

/// Central difference of T f = df/dt.
pub fn fd_t(field: &ClosureField, point: (f64, f64), h: f64) -> Result<Complex64> {
    check(point, h, false)?;
    let (r, t) = point;
    Ok((field.eval(r, t + h) - field.eval(r, t - h)) / (2.0 * h))
}

/// Quadrature of |f_r|^2 + 4 r^2 |f_t|^2 over the physical grid. The radial
/// difference reflects through the origin, where cylindrical fields are even.
pub fn fd_hgrad_normsq(field: &ClosureField, pgrid: &PhysicalGrid, h: f64) -> Result<f64> {
    check((1.0, 0.0), h, false)?;
    let rad = &pgrid.radial;
    let rows: Vec<f64> = rad
        .nodes
        .iter()
        .zip(&rad.weights)
        .map(|(&r, &w)| {
            let e: Vec<f64> = pgrid
                .t_nodes
                .iter()
                .zip(&pgrid.t_weights)
                .map(|(&t, &dt)| {
                    let f_r = (field.eval(r + h, t) - field.eval((r - h).abs(), t)) / (2.0 * h);
                    let f_t = (field.eval(r, t + h) - field.eval(r, t - h)) / (2.0 * h);
                    dt * (f_r.norm_sqr() + 4.0 * r * r * f_t.norm_sqr())
                })
                .collect();
            w * pairwise_sum(&e)
        })
        .collect();
    Ok(pairwise_sum(&rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radial_gaussian() {
        let f = ClosureField::new("g", |r, _| Complex64::new((-r * r).exp(), 0.0));
        for r in [0.3, 1.0, 2.0] {
            let v = fd_sublaplacian(&f, 1, (r, 0.4), 1e-3).unwrap();
            let want = (4.0 - 4.0 * r * r) * (-r * r).exp();
            assert!((v.re - want).abs() < 1e-5 && v.im.abs() < 1e-12);
            assert_eq!(fd_t(&f, (r, 0.4), 1e-3).unwrap(), Complex64::new(0.0, 0.0));
        }
        assert!(fd_sublaplacian(&f, 1, (1e-4, 0.0), 1e-3).is_err());
    }

    #[test]
    fn ground_state_eigenvalue() {
        for d in 1..=3 {
            let l0 = 1.3;
            let f = ClosureField::new("gs", move |r, t| Complex64::from_polar((-l0 * r * r).exp(), l0 * t));
            for (r, t) in [(0.4, 0.0), (1.2, 0.9)] {
                let v = fd_sublaplacian(&f, d, (r, t), 1e-3).unwrap();
                let want = f.eval(r, t) * (4.0 * d as f64 * l0);
                assert!((v - want).norm() < 2e-5 * want.norm().max(1e-3), "{v} {want}");
            }
        }
    }
}
