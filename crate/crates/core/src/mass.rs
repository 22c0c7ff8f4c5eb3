//! Total masses `int e^{U_i}` by two independent routes: the boundary flux
//! `-oint d_r U^i` on a large circle (since `Delta U^i = -e^{U_i}`) and a
//! direct polar quadrature with an `r^{-4}` tail correction.

use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, TodaError};
use crate::linalg::gauss_legendre;
use crate::solution::SolutionParams;
#[cfg(not(any(feature = "std", test)))]
use num_traits::Float;

const PI: f64 = core::f64::consts::PI;
const TAU: f64 = core::f64::consts::TAU;

/// Angular samples used by both routes.
pub const MASS_ANGULAR_SAMPLES: usize = 128;
/// Radial difference step relative to the flux radius.
pub const FLUX_RELATIVE_STEP: f64 = 1e-3;
/// Allowed disagreement of the tail constant between the two outer circles.
pub const TAIL_STABILITY: f64 = 0.1;

/// `4 pi i (n+1-i)`.
pub fn predicted_mass(n: usize, i: usize) -> f64 {
    4.0 * PI * (i * (n + 1 - i)) as f64
}

fn check_index(sp: &SolutionParams, i: usize) -> Result<()> {
    if i == 0 || i > sp.n() {
        return Err(TodaError::IndexOutOfRange { index: i, max: sp.n() });
    }
    Ok(())
}

fn check_radius(r: f64) -> Result<()> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(TodaError::InvalidArgument(format!("radius {r}")));
    }
    Ok(())
}

fn circle(r: f64, samples: usize) -> impl Iterator<Item = Complex64> {
    (0..samples).map(move |s| Complex64::from_polar(r, TAU * s as f64 / samples as f64))
}

/// `-oint_{|z|=R} d_r U^i ds`, with a central radial difference.
pub fn mass_flux(sp: &SolutionParams, i: usize, radius: f64) -> Result<f64> {
    check_index(sp, i)?;
    check_radius(radius)?;
    let h = FLUX_RELATIVE_STEP * radius;
    let mut acc = 0.0;
    for z in circle(radius, MASS_ANGULAR_SAMPLES) {
        let u = z / z.norm();
        let up = sp.upper(z + u * h)?[i - 1];
        let dn = sp.upper(z - u * h)?[i - 1];
        acc += (up - dn) / (2.0 * h);
    }
    Ok(-acc / MASS_ANGULAR_SAMPLES as f64 * TAU * radius)
}

fn circle_mean_exp(sp: &SolutionParams, i: usize, r: f64) -> Result<f64> {
    let mut acc = 0.0;
    for z in circle(r, MASS_ANGULAR_SAMPLES) {
        acc += sp.eval_all(z)?.exp_lower[i - 1];
    }
    Ok(acc / MASS_ANGULAR_SAMPLES as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MassQuadrature {
    pub value: f64,
    pub interior: f64,
    pub tail: f64,
    /// `r^4` times the circle mean of `e^{U_i}` at `R_max` and `R_max / 2`.
    pub tail_constant_outer: f64,
    pub tail_constant_inner: f64,
    pub tail_stable: bool,
}

/// Polar Gauss quadrature of `e^{U_i}` over the disc of radius `r_max`
/// (panels halving toward the origin) plus `pi C / R^2` for the exterior.
pub fn mass_quadrature(sp: &SolutionParams, i: usize, r_max: f64) -> Result<MassQuadrature> {
    check_index(sp, i)?;
    check_radius(r_max)?;
    let mut pts = Vec::new();
    let mut r = r_max;
    while r > 0.25 {
        pts.push(r);
        r /= 2.0;
    }
    pts.push(0.0);
    pts.reverse();
    let (nodes, weights) = gauss_legendre(24);
    let mut interior = 0.0;
    for w in pts.windows(2) {
        let (half, mid) = (0.5 * (w[1] - w[0]), 0.5 * (w[1] + w[0]));
        for (x, wt) in nodes.iter().zip(&weights) {
            let r = mid + half * x;
            interior += wt * half * TAU * r * circle_mean_exp(sp, i, r)?;
        }
    }
    let c_out = circle_mean_exp(sp, i, r_max)? * r_max.powi(4);
    let c_in = circle_mean_exp(sp, i, 0.5 * r_max)? * (0.5 * r_max).powi(4);
    let tail = PI * c_out / (r_max * r_max);
    Ok(MassQuadrature {
        value: interior + tail,
        interior,
        tail,
        tail_constant_outer: c_out,
        tail_constant_inner: c_in,
        tail_stable: (c_out - c_in).abs() <= TAIL_STABILITY * c_out.abs(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MassReport {
    pub i: usize,
    pub predicted: f64,
    pub flux_radius: f64,
    pub flux: f64,
    pub flux_rel_err: f64,
    pub quadrature_radius: f64,
    pub quadrature: MassQuadrature,
    pub quadrature_rel_err: f64,
    /// `|flux - quadrature| / |quadrature|`.
    pub route_gap: f64,
}

pub fn mass_report(sp: &SolutionParams, i: usize, flux_radius: f64, quadrature_radius: f64) -> Result<MassReport> {
    let predicted = predicted_mass(sp.n(), i);
    let flux = mass_flux(sp, i, flux_radius)?;
    let quadrature = mass_quadrature(sp, i, quadrature_radius)?;
    let q = quadrature.value;
    Ok(MassReport {
        i,
        predicted,
        flux_radius,
        flux,
        flux_rel_err: (flux - predicted).abs() / predicted,
        quadrature_radius,
        quadrature_rel_err: (q - predicted).abs() / predicted,
        route_gap: (flux - q).abs() / q.abs(),
        quadrature,
    })
}

/// `max_i |sum_j a_ij mass_j - 8 pi| / 8 pi`.
pub fn sum_rule_error(sp: &SolutionParams, masses: &[f64]) -> Result<f64> {
    let n = sp.n();
    if masses.len() != n {
        return Err(TodaError::LengthMismatch { expected: n, got: masses.len() });
    }
    let a = sp.cartan().a_f64();
    let target = 8.0 * PI;
    Ok((0..n)
        .map(|i| {
            let s: f64 = (0..n).map(|j| a[i * n + j] * masses[j]).sum();
            (s - target).abs() / target
        })
        .fold(0.0, f64::max))
}
