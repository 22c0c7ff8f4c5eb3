//! Finite-difference residuals of the Toda system and of its linearization.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cartan::coupled;
use crate::error::{Result, TodaError};
use crate::solution::{ParamDirection, SolutionParams};
#[cfg(not(any(feature = "std", test)))]
use num_traits::Float;

/// Square grid of `points_per_side^2` nodes centred at `center`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub center: Complex64,
    pub half_width: f64,
    pub points_per_side: usize,
}

impl GridSpec {
    pub fn new(center: Complex64, half_width: f64, points_per_side: usize) -> Result<Self> {
        let g = Self { center, half_width, points_per_side };
        g.validate()?;
        Ok(g)
    }

    /// Grid on `[-half_width, half_width]^2` around `center` whose spacing is
    /// `h` (rounded so that `2 half_width / h` is an integer).
    pub fn with_spacing(center: Complex64, half_width: f64, h: f64) -> Result<Self> {
        if !(h > 0.0 && h.is_finite() && half_width > 0.0 && half_width.is_finite()) {
            return Err(TodaError::InvalidGrid(format!("half_width {half_width}, h {h}")));
        }
        let cells = (2.0 * half_width / h).round() as usize;
        Self::new(center, half_width, cells.max(2) + 1)
    }

    fn validate(&self) -> Result<()> {
        if self.points_per_side < 3 || self.points_per_side % 2 == 0 {
            return Err(TodaError::InvalidGrid(format!(
                "points_per_side must be odd and >= 3, got {}",
                self.points_per_side
            )));
        }
        if !(self.half_width > 0.0 && self.half_width.is_finite()) {
            return Err(TodaError::InvalidGrid(format!("half_width {}", self.half_width)));
        }
        if !(self.center.re.is_finite() && self.center.im.is_finite()) {
            return Err(TodaError::InvalidGrid("center is not finite".into()));
        }
        Ok(())
    }

    pub fn h(&self) -> f64 {
        2.0 * self.half_width / (self.points_per_side - 1) as f64
    }

    /// Same square with half the spacing.
    pub fn refined(&self) -> Self {
        Self { points_per_side: 2 * (self.points_per_side - 1) + 1, ..*self }
    }

    pub fn point(&self, ix: usize, iy: usize) -> Complex64 {
        let h = self.h();
        self.center
            + Complex64::new(-self.half_width + ix as f64 * h, -self.half_width + iy as f64 * h)
    }

    fn max_radius(&self) -> f64 {
        self.center.norm() + self.half_width * core::f64::consts::SQRT_2
    }
}

/// Largest `|z|` a residual grid may reach.
pub const MAX_GRID_RADIUS: f64 = 1e3;

/// Max-norm residuals on a grid and on its refinement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    /// Max over interior nodes, per component, at spacing `h`.
    pub max_abs_residual: Vec<f64>,
    /// Same at spacing `h / 2`.
    pub refined_max_abs_residual: Vec<f64>,
    pub h: f64,
    /// `log2` of the ratio of overall maxima between `h` and `h / 2`;
    /// `None` when the residual vanishes identically.
    pub order_estimate: Option<f64>,
}

impl ResidualReport {
    pub fn max_residual(&self) -> f64 {
        self.max_abs_residual.iter().fold(0.0, |a, &b| a.max(b))
    }

    pub fn refined_max_residual(&self) -> f64 {
        self.refined_max_abs_residual.iter().fold(0.0, |a, &b| a.max(b))
    }

    /// Ratio of the overall maxima at `h` and `h / 2`.
    pub fn ratio(&self) -> f64 {
        self.max_residual() / self.refined_max_residual()
    }

    fn from_pair(h: f64, coarse: Vec<f64>, fine: Vec<f64>) -> Self {
        let a = coarse.iter().fold(0.0f64, |x, &y| x.max(y));
        let b = fine.iter().fold(0.0f64, |x, &y| x.max(y));
        let order_estimate = if a > 0.0 && b > 0.0 { Some((a / b).log2()) } else { None };
        Self { max_abs_residual: coarse, refined_max_abs_residual: fine, h, order_estimate }
    }
}

/// Values of n-component fields sampled on a grid, stored row-major.
struct GridField {
    g: GridSpec,
    n: usize,
    values: Vec<f64>,
}

impl GridField {
    fn sample<F>(g: GridSpec, n: usize, mut f: F) -> Result<Self>
    where
        F: FnMut(Complex64, &mut [f64]) -> Result<()>,
    {
        let m = g.points_per_side;
        let mut values = vec![0.0; m * m * n];
        for iy in 0..m {
            for ix in 0..m {
                let idx = (iy * m + ix) * n;
                f(g.point(ix, iy), &mut values[idx..idx + n])?;
            }
        }
        Ok(Self { g, n, values })
    }

    fn at(&self, ix: usize, iy: usize) -> &[f64] {
        let idx = (iy * self.g.points_per_side + ix) * self.n;
        &self.values[idx..idx + self.n]
    }

    fn laplacian(&self, ix: usize, iy: usize, out: &mut [f64]) {
        let h2 = self.g.h() * self.g.h();
        let c = self.at(ix, iy);
        let (e, w) = (self.at(ix + 1, iy), self.at(ix - 1, iy));
        let (nn, s) = (self.at(ix, iy + 1), self.at(ix, iy - 1));
        for k in 0..self.n {
            out[k] = (e[k] + w[k] + nn[k] + s[k] - 4.0 * c[k]) / h2;
        }
    }

    /// Max over interior nodes of `|residual(lap, node)|`, per component.
    fn interior_max<R>(&self, mut residual: R) -> Vec<f64>
    where
        R: FnMut(usize, &[f64]) -> Vec<f64>,
    {
        let m = self.g.points_per_side;
        let mut lap = vec![0.0; self.n];
        let mut best = vec![0.0f64; self.n];
        for iy in 1..m - 1 {
            for ix in 1..m - 1 {
                self.laplacian(ix, iy, &mut lap);
                let r = residual(iy * m + ix, &lap);
                for (b, v) in best.iter_mut().zip(r) {
                    *b = b.max(v.abs());
                }
            }
        }
        best
    }
}

fn check_grid(g: &GridSpec) -> Result<()> {
    g.validate()?;
    if g.max_radius() > MAX_GRID_RADIUS {
        return Err(TodaError::InvalidGrid(format!("grid reaches |z| = {} > {MAX_GRID_RADIUS}", g.max_radius())));
    }
    Ok(())
}

/// Residual `Delta_h U_i + sum_j a_ij e^{U_j}` on `g` and on `g.refined()`.
pub fn pde_residual(sp: &SolutionParams, g: &GridSpec) -> Result<ResidualReport> {
    check_grid(g)?;
    let coarse = pde_residual_on(sp, g)?;
    let fine = pde_residual_on(sp, &g.refined())?;
    Ok(ResidualReport::from_pair(g.h(), coarse, fine))
}

fn lower_and_exp(sp: &SolutionParams, g: GridSpec) -> Result<GridField> {
    let n = sp.n();
    GridField::sample(g, 2 * n, |z, out| {
        let e = sp.eval_all(z)?;
        out[..n].copy_from_slice(&e.u_lower);
        out[n..].copy_from_slice(&e.exp_lower);
        Ok(())
    })
}

fn pde_residual_on(sp: &SolutionParams, g: &GridSpec) -> Result<Vec<f64>> {
    let n = sp.n();
    let field = lower_and_exp(sp, *g)?;
    let cd = sp.cartan();
    let all = field.interior_max(|node, lap| {
        let exp = &field.values[node * 2 * n + n..node * 2 * n + 2 * n];
        let mut r = coupled(cd, &lap[..n], exp);
        r.resize(2 * n, 0.0);
        r
    });
    Ok(all[..n].to_vec())
}

/// Max residuals of the lower form and of the upper form
/// `Delta_h U^i + e^{U_i}` at the same nodes, plus the largest deviation of
/// `A^{-1}` (lower residual) from the upper residual.
#[derive(Debug, Clone, PartialEq)]
pub struct FormComparison {
    pub lower_max: Vec<f64>,
    pub upper_max: Vec<f64>,
    pub max_conversion_gap: f64,
}

pub fn compare_residual_forms(sp: &SolutionParams, g: &GridSpec) -> Result<FormComparison> {
    check_grid(g)?;
    let n = sp.n();
    let cd = sp.cartan();
    let field = GridField::sample(*g, 3 * n, |z, out| {
        let e = sp.eval_all(z)?;
        out[..n].copy_from_slice(&e.u_lower);
        out[n..2 * n].copy_from_slice(&e.u_upper);
        out[2 * n..].copy_from_slice(&e.exp_lower);
        Ok(())
    })?;
    let mut gap = 0.0f64;
    let all = field.interior_max(|node, lap| {
        let exp = &field.values[node * 3 * n + 2 * n..node * 3 * n + 3 * n];
        let lower = coupled(cd, &lap[..n], exp);
        let upper: Vec<f64> = (0..n).map(|i| lap[n + i] + exp[i]).collect();
        let converted = cd.to_upper(&lower).unwrap_or_default();
        for (a, b) in converted.iter().zip(&upper) {
            gap = gap.max((a - b).abs());
        }
        let mut out = lower;
        out.extend(upper);
        out.resize(3 * n, 0.0);
        out
    });
    Ok(FormComparison { lower_max: all[..n].to_vec(), upper_max: all[n..2 * n].to_vec(), max_conversion_gap: gap })
}

/// `phi = -dU/d(dir)` by central differences in parameter space.
#[derive(Debug, Clone)]
pub struct ParamDerivativeField {
    pub direction: ParamDirection,
    pub step: f64,
    plus: SolutionParams,
    minus: SolutionParams,
}

impl ParamDerivativeField {
    pub fn new(sp: &SolutionParams, direction: ParamDirection, step: f64) -> Result<Self> {
        if !(step > 0.0 && step.is_finite()) {
            return Err(TodaError::InvalidStep(step));
        }
        let plus = sp.perturbed(direction, step)?;
        let minus = sp.perturbed(direction, -step)?;
        Ok(Self { direction, step, plus, minus })
    }

    /// Lower components `phi_i = -(U_i(p + s) - U_i(p - s)) / 2s`.
    pub fn lower(&self, z: Complex64) -> Result<Vec<f64>> {
        if self.direction == ParamDirection::Zero {
            return Ok(vec![0.0; self.plus.n()]);
        }
        let a = self.plus.eval_all(z)?.u_lower;
        let b = self.minus.eval_all(z)?.u_lower;
        Ok(a.iter().zip(&b).map(|(x, y)| -(x - y) / (2.0 * self.step)).collect())
    }

    /// Upper components `-dU^m/d(dir)`.
    pub fn upper(&self, z: Complex64) -> Result<Vec<f64>> {
        if self.direction == ParamDirection::Zero {
            return Ok(vec![0.0; self.plus.n()]);
        }
        let a = self.plus.upper(z)?;
        let b = self.minus.upper(z)?;
        Ok(a.iter().zip(&b).map(|(x, y)| -(x - y) / (2.0 * self.step)).collect())
    }
}

/// `param_derivative_field` under its operation name.
pub fn param_derivative_field(sp: &SolutionParams, which: ParamDirection, step: f64) -> Result<ParamDerivativeField> {
    ParamDerivativeField::new(sp, which, step)
}

/// Residual `Delta_h phi_i + sum_j a_ij e^{U_j} phi_j` of the linearized system
/// for the parameter-derivative field, on `g` and `g.refined()`.
pub fn linearized_residual(
    sp: &SolutionParams,
    which: ParamDirection,
    step: f64,
    g: &GridSpec,
) -> Result<ResidualReport> {
    check_grid(g)?;
    let field = ParamDerivativeField::new(sp, which, step)?;
    let coarse = linearized_on(sp, &field, g)?;
    let fine = linearized_on(sp, &field, &g.refined())?;
    Ok(ResidualReport::from_pair(g.h(), coarse, fine))
}

fn linearized_on(sp: &SolutionParams, phi: &ParamDerivativeField, g: &GridSpec) -> Result<Vec<f64>> {
    let n = sp.n();
    let cd = sp.cartan();
    let field = GridField::sample(*g, 2 * n, |z, out| {
        out[..n].copy_from_slice(&phi.lower(z)?);
        out[n..].copy_from_slice(&sp.eval_all(z)?.exp_lower);
        Ok(())
    })?;
    let all = field.interior_max(|node, lap| {
        let v = &field.values[node * 2 * n..node * 2 * n + 2 * n];
        let weighted: Vec<f64> = (0..n).map(|j| v[n + j] * v[j]).collect();
        let mut r = coupled(cd, &lap[..n], &weighted);
        r.resize(2 * n, 0.0);
        r
    });
    Ok(all[..n].to_vec())
}
