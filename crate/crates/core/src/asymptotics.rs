//! Low-frequency Fourier analysis of solution components on large circles,
//! compared against the large-|z| expansion of `e^{-U^m}`:
//!
//! ```text
//! e^{-U^m} = 2^{m(m-1)} lambda_n ... lambda_{n+1-m} ((m-1)! ... 0!)^2 r^{2m(n+1-m)}
//!            (1 + 2m (alpha_m cos t + beta_m sin t) / r
//!               + ((-m(m-1) alpha_{m,2} + m(m+1) alpha_{m+1,2}) cos 2t + (same with beta) sin 2t) / r^2 + ...)
//! ```
//!
//! A term `z^a zbar^b` of a polynomial in `z, zbar` has frequency `a - b` and
//! radial power `a + b` of the same parity, so after scaling by the leading
//! power each frequency-`l` coefficient carries corrections in `r^{-2}` steps.
//! Richardson extrapolation uses that exponent.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, TodaError};
use crate::linalg::gauss_legendre;
use crate::residual::ParamDerivativeField;
use crate::solution::{ParamDirection, SolutionParams};
#[cfg(not(any(feature = "std", test)))]
use num_traits::Float;

const LN_2: f64 = core::f64::consts::LN_2;
const TAU: f64 = core::f64::consts::TAU;

/// Smallest number of angular samples a probe accepts.
pub const MIN_ANGULAR_SAMPLES: usize = 64;
/// Default number of angular samples.
pub const DEFAULT_ANGULAR_SAMPLES: usize = 128;
/// Exponent of the leading correction in Richardson extrapolation.
pub const RICHARDSON_EXPONENT: i32 = 2;

/// Coefficients of `a0 + a1 cos t + b1 sin t + a2 cos 2t + b2 sin 2t + ...`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct FourierCoeffs {
    pub a0: f64,
    pub a1: f64,
    pub b1: f64,
    pub a2: f64,
    pub b2: f64,
}

impl FourierCoeffs {
    pub fn cos(&self, freq: usize) -> f64 {
        match freq {
            0 => self.a0,
            1 => self.a1,
            2 => self.a2,
            _ => 0.0,
        }
    }

    pub fn sin(&self, freq: usize) -> f64 {
        match freq {
            1 => self.b1,
            2 => self.b2,
            _ => 0.0,
        }
    }
}

/// Radius and sample count of one circle probe.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FourierProbe {
    pub radius: f64,
    pub angular_samples: usize,
}

impl FourierProbe {
    pub fn new(radius: f64, angular_samples: usize) -> Result<Self> {
        if angular_samples < MIN_ANGULAR_SAMPLES {
            return Err(TodaError::InvalidArgument(format!(
                "angular_samples = {angular_samples} < {MIN_ANGULAR_SAMPLES}"
            )));
        }
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(TodaError::InvalidArgument(format!("radius {radius}")));
        }
        Ok(Self { radius, angular_samples })
    }

    /// Trapezoid DFT of every component of `field` on the circle.
    pub fn analyze<F>(&self, mut field: F) -> Result<Vec<FourierCoeffs>>
    where
        F: FnMut(Complex64) -> Result<Vec<f64>>,
    {
        let m = self.angular_samples;
        let mut out: Vec<FourierCoeffs> = Vec::new();
        for s in 0..m {
            let t = TAU * s as f64 / m as f64;
            let v = field(Complex64::from_polar(self.radius, t))?;
            if out.is_empty() {
                out = vec![FourierCoeffs::default(); v.len()];
            }
            let (c1, s1) = (t.cos(), t.sin());
            let (c2, s2) = ((2.0 * t).cos(), (2.0 * t).sin());
            for (acc, x) in out.iter_mut().zip(&v) {
                acc.a0 += x;
                acc.a1 += x * c1;
                acc.b1 += x * s1;
                acc.a2 += x * c2;
                acc.b2 += x * s2;
            }
        }
        let mf = m as f64;
        for acc in &mut out {
            acc.a0 /= mf;
            acc.a1 *= 2.0 / mf;
            acc.b1 *= 2.0 / mf;
            acc.a2 *= 2.0 / mf;
            acc.b2 *= 2.0 / mf;
        }
        Ok(out)
    }
}

/// Coefficients of a scalar field on the circle `|z| = r`.
pub fn fourier_coeffs<F>(mut field: F, r: f64, samples: usize) -> Result<FourierCoeffs>
where
    F: FnMut(Complex64) -> Result<f64>,
{
    let probe = FourierProbe::new(r, samples)?;
    Ok(probe.analyze(|z| Ok(vec![field(z)?]))?[0])
}

/// Extrapolates `v(r) = L + C r^{-p}` from two radii.
pub fn richardson(r1: f64, v1: f64, r2: f64, v2: f64, p: i32) -> f64 {
    let (w1, w2) = (r1.powi(p), r2.powi(p));
    (w2 * v2 - w1 * v1) / (w2 - w1)
}

/// A measured expansion coefficient against its prediction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpansionCheck {
    pub label: alloc::string::String,
    pub radii: (f64, f64),
    pub measured_inner: f64,
    pub measured: f64,
    pub richardson: f64,
    pub predicted: f64,
    /// Normalization of the relative errors (|predicted| unless stated otherwise).
    pub scale: f64,
    pub error_inner: f64,
    pub error_outer: f64,
    pub error_richardson: f64,
}

impl ExpansionCheck {
    fn build(label: alloc::string::String, radii: (f64, f64), v1: f64, v2: f64, predicted: f64, scale: f64) -> Self {
        let rich = richardson(radii.0, v1, radii.1, v2, RICHARDSON_EXPONENT);
        let err = |v: f64| (v - predicted).abs() / scale;
        Self {
            label,
            radii,
            measured_inner: v1,
            measured: v2,
            richardson: rich,
            predicted,
            scale,
            error_inner: err(v1),
            error_outer: err(v2),
            error_richardson: err(rich),
        }
    }
}

fn check_pair(r_pair: (f64, f64)) -> Result<()> {
    let (a, b) = r_pair;
    if !(a > 0.0 && b > a && b.is_finite()) {
        return Err(TodaError::InvalidArgument(format!("radius pair ({a}, {b}) must satisfy 0 < r1 < r2")));
    }
    Ok(())
}

fn check_m(sp: &SolutionParams, m: usize) -> Result<()> {
    if m == 0 || m > sp.n() {
        return Err(TodaError::IndexOutOfRange { index: m, max: sp.n() });
    }
    Ok(())
}

fn ln_factorial(k: usize) -> f64 {
    (1..=k).map(|t| (t as f64).ln()).sum()
}

/// `ln` of `2^{m(m-1)} lambda_n ... lambda_{n+1-m} ((m-1)! ... 0!)^2`.
pub fn log_leading_coefficient(sp: &SolutionParams, m: usize) -> f64 {
    let n = sp.n();
    let lam: f64 = (n + 1 - m..=n).map(|i| sp.lambdas()[i].ln()).sum();
    let facts: f64 = (0..m).map(ln_factorial).sum();
    (m * (m - 1)) as f64 * LN_2 + lam + 2.0 * facts
}

/// Leading power `2m(n+1-m)`.
pub fn leading_exponent(n: usize, m: usize) -> f64 {
    (2 * m * (n + 1 - m)) as f64
}

/// The alternative power `2m(n+2-m)`, kept to show it does not fit.
pub fn alternative_exponent(n: usize, m: usize) -> f64 {
    (2 * m * (n + 2 - m)) as f64
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeadingCheck {
    pub m: usize,
    pub radius: f64,
    pub predicted: f64,
    /// Mean over the circle of `e^{-U^m} r^{-2m(n+1-m)}`.
    pub measured: f64,
    pub relative_error: f64,
    /// Same mean with `r^{-2m(n+2-m)}`.
    pub alternative_measured: f64,
    pub alternative_relative_error: f64,
}

/// Compares the circle mean of `e^{-U^m} r^{-2m(n+1-m)}` with its predicted constant.
pub fn leading_coefficient_check(sp: &SolutionParams, m: usize, r: f64) -> Result<LeadingCheck> {
    check_m(sp, m)?;
    let n = sp.n();
    let probe = FourierProbe::new(r, DEFAULT_ANGULAR_SAMPLES)?;
    let ln_r = r.ln();
    let (p1, p2) = (leading_exponent(n, m), alternative_exponent(n, m));
    let c = probe.analyze(|z| {
        let neg_u = -sp.upper(z)?[m - 1];
        Ok(vec![(neg_u - p1 * ln_r).exp(), (neg_u - p2 * ln_r).exp()])
    })?;
    let predicted = log_leading_coefficient(sp, m).exp();
    let rel = |v: f64| (v - predicted).abs() / predicted;
    Ok(LeadingCheck {
        m,
        radius: r,
        predicted,
        measured: c[0].a0,
        relative_error: rel(c[0].a0),
        alternative_measured: c[1].a0,
        alternative_relative_error: rel(c[1].a0),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FirstFrequencyCheck {
    pub m: usize,
    /// `r` times the `cos t` coefficient of `-U^m`, against `2m alpha_m`.
    pub cos: ExpansionCheck,
    /// `r` times the `sin t` coefficient of `-U^m`, against `2m beta_m`.
    pub sin: ExpansionCheck,
}

/// Frequency-1 coefficients of `-U^m` scaled by `r`, extrapolated in `r`.
///
/// Errors are normalized by `|2m c_{n+1-m,n-m}|` (or 1 when that vanishes),
/// so a tiny real or imaginary part does not inflate the relative error.
pub fn first_frequency_check(sp: &SolutionParams, m: usize, r_pair: (f64, f64)) -> Result<FirstFrequencyCheck> {
    check_m(sp, m)?;
    check_pair(r_pair)?;
    let c = sp.first_frequency_coeff(m)?;
    let pred = c * (2 * m) as f64;
    let scale = if pred.norm() > 0.0 { pred.norm() } else { 1.0 };
    let mut vals = [[0.0; 2]; 2];
    for (slot, r) in [r_pair.0, r_pair.1].into_iter().enumerate() {
        let probe = FourierProbe::new(r, DEFAULT_ANGULAR_SAMPLES)?;
        let fc = probe.analyze(|z| Ok(vec![-sp.upper(z)?[m - 1]]))?[0];
        vals[slot] = [fc.a1 * r, fc.b1 * r];
    }
    Ok(FirstFrequencyCheck {
        m,
        cos: ExpansionCheck::build(format!("m={m} cos"), r_pair, vals[0][0], vals[1][0], pred.re, scale),
        sin: ExpansionCheck::build(format!("m={m} sin"), r_pair, vals[0][1], vals[1][1], pred.im, scale),
    })
}

/// Predicted large-r signature of `-dU^m/d(which)`: the frequency, whether the
/// sine or cosine mode carries it, and the coefficient of `r^{-freq}`.
pub fn kernel_prediction(n: usize, which: ParamDirection, m: usize) -> Result<(usize, bool, f64)> {
    let bad = || TodaError::InvalidDirection(format!("{which} has no kernel signature for n = {n}"));
    let mf = m as f64;
    Ok(match which {
        ParamDirection::Alpha(j) | ParamDirection::Beta(j) => {
            if j == 0 || j > n {
                return Err(bad());
            }
            let v = if j == m { 2.0 * mf } else { 0.0 };
            (1, matches!(which, ParamDirection::Beta(_)), v)
        }
        ParamDirection::Alpha2(j) | ParamDirection::Beta2(j) => {
            if j < 2 || j > n {
                return Err(bad());
            }
            let v = if m == j {
                -mf * (mf - 1.0)
            } else if m + 1 == j {
                mf * (mf + 1.0)
            } else {
                0.0
            };
            (2, matches!(which, ParamDirection::Beta2(_)), v)
        }
        _ => return Err(bad()),
    })
}

/// Fourier signature of `-dU^m/d(which)` on circles, scaled by `r^{freq}`.
///
/// The normalization is `|predicted|`, or for vanishing predictions `2m`
/// (first frequency) and `m(m+1)` (second frequency).
pub fn kernel_signature_check(
    sp: &SolutionParams,
    which: ParamDirection,
    m: usize,
    r_pair: (f64, f64),
    step: f64,
) -> Result<ExpansionCheck> {
    check_m(sp, m)?;
    check_pair(r_pair)?;
    let (freq, use_sin, predicted) = kernel_prediction(sp.n(), which, m)?;
    let field = ParamDerivativeField::new(sp, which, step)?;
    let mut vals = [0.0; 2];
    for (slot, r) in [r_pair.0, r_pair.1].into_iter().enumerate() {
        let probe = FourierProbe::new(r, DEFAULT_ANGULAR_SAMPLES)?;
        let fc = probe.analyze(|z| Ok(vec![field.upper(z)?[m - 1]]))?[0];
        let coeff = if use_sin { fc.sin(freq) } else { fc.cos(freq) };
        vals[slot] = coeff * r.powi(freq as i32);
    }
    let mf = m as f64;
    let scale = if predicted != 0.0 {
        predicted.abs()
    } else if freq == 1 {
        2.0 * mf
    } else {
        mf * (mf + 1.0)
    };
    Ok(ExpansionCheck::build(format!("{which} m={m}"), r_pair, vals[0], vals[1], predicted, scale))
}

/// `b_{i,1}` as tabulated: `-2` for `i < n`, `(n-1)(n+2)` for `i = n`.
pub fn b1_table(n: usize, i: usize) -> f64 {
    if i < n {
        -2.0
    } else {
        ((n - 1) * (n + 2)) as f64
    }
}

/// `b_{i,2}` as tabulated: `ln(lambda_{n+1-i}/lambda_{n-i})` for `i < n`,
/// `ln(lambda_n ... lambda_2 / lambda_1)` for `i = n`.
pub fn b2_table(lambdas: &[f64], n: usize, i: usize) -> f64 {
    if i < n {
        (lambdas[n + 1 - i] / lambdas[n - i]).ln()
    } else {
        (2..=n).map(|l| lambdas[l].ln()).sum::<f64>() - lambdas[1].ln()
    }
}

/// `b_{i,3}` as tabulated: `-ln i` for `i < n`, `ln(1! ... (n-2)! ((n-1)!)^2)` for `i = n`.
pub fn b3_table(n: usize, i: usize) -> f64 {
    if i < n {
        -(i as f64).ln()
    } else {
        (1..=n.saturating_sub(2)).map(ln_factorial).sum::<f64>() + 2.0 * ln_factorial(n - 1)
    }
}

/// `(b_{i,1}, b_{i,2}, b_{i,3})` evaluated from their defining sums
/// `sum_j a_ij j(j-1)`, `sum_j a_ij (ln lambda_n + ... + ln lambda_{n+1-j})`,
/// `sum_j a_ij (ln 0! + ... + ln (j-1)!)`.
pub fn b_from_sums(sp: &SolutionParams, i: usize) -> (f64, f64, f64) {
    let n = sp.n();
    let a = sp.cartan().a_f64();
    let mut out = (0.0, 0.0, 0.0);
    for j in 1..=n {
        let aij = a[(i - 1) * n + (j - 1)];
        if aij == 0.0 {
            continue;
        }
        let lam: f64 = (n + 1 - j..=n).map(|l| sp.lambdas()[l].ln()).sum();
        let facts: f64 = (0..j).map(ln_factorial).sum();
        out.0 += aij * (j * (j - 1)) as f64;
        out.1 += aij * lam;
        out.2 += aij * facts;
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantTermCheck {
    pub i: usize,
    pub radii: (f64, f64),
    /// Richardson limit of the circle mean of `U_i + 4 ln r`.
    pub measured: f64,
    pub b_table: (f64, f64, f64),
    pub b_sums: (f64, f64, f64),
    /// `-(b1 ln 2 + b2 + 2 b3)` from the tables.
    pub table_prediction: f64,
    /// The same expression from the defining sums.
    pub sum_prediction: f64,
    pub table_error: f64,
    pub sum_error: f64,
}

/// Measures `lim (U_i + 4 ln r)` and reports it next to both predictions.
pub fn constant_term_probe(sp: &SolutionParams, i: usize, r_pair: (f64, f64)) -> Result<ConstantTermCheck> {
    check_m(sp, i)?;
    check_pair(r_pair)?;
    let n = sp.n();
    let mut vals = [0.0; 2];
    for (slot, r) in [r_pair.0, r_pair.1].into_iter().enumerate() {
        let probe = FourierProbe::new(r, DEFAULT_ANGULAR_SAMPLES)?;
        let ln_r = r.ln();
        vals[slot] = probe.analyze(|z| Ok(vec![sp.eval_all(z)?.u_lower[i - 1] + 4.0 * ln_r]))?[0].a0;
    }
    let measured = richardson(r_pair.0, vals[0], r_pair.1, vals[1], RICHARDSON_EXPONENT);
    let b_table = (b1_table(n, i), b2_table(sp.lambdas(), n, i), b3_table(n, i));
    let b_sums = b_from_sums(sp, i);
    let pred = |b: (f64, f64, f64)| -(b.0 * LN_2 + b.1 + 2.0 * b.2);
    let (tp, sp_) = (pred(b_table), pred(b_sums));
    Ok(ConstantTermCheck {
        i,
        radii: r_pair,
        measured,
        b_table,
        b_sums,
        table_prediction: tp,
        sum_prediction: sp_,
        table_error: (measured - tp).abs(),
        sum_error: (measured - sp_).abs(),
    })
}

/// How the parameter derivative inside a T-integral is formed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum DerivativeRoute {
    FiniteDifference { step: f64 },
    Analytic,
}

/// Partial integrals of one component `-dU^m/d(alpha_{l,2})` (or beta) over discs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TIntegralComponent {
    pub m: usize,
    pub radii: Vec<f64>,
    pub partials: Vec<f64>,
    /// `partials[k+1] - partials[k]`.
    pub differences: Vec<f64>,
    /// `|differences[k]| / |differences[k+1]|`.
    pub shrink_ratios: Vec<f64>,
    /// Geometric tail fitted from the last two panel contributions.
    pub tail_estimate: f64,
    pub value: f64,
}

impl TIntegralComponent {
    pub fn min_shrink_ratio(&self) -> f64 {
        self.shrink_ratios.iter().fold(f64::INFINITY, |a, &b| a.min(b))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TIntegral {
    pub l: usize,
    pub direction: ParamDirection,
    /// Components `m = l-1` and `m = l`.
    pub components: Vec<TIntegralComponent>,
}

/// Default disc radii for partial T-integrals.
pub const T_INTEGRAL_RADII: [f64; 4] = [50.0, 100.0, 200.0, 400.0];

/// Radial panel breakpoints from 0 through every radius in `radii`
/// (ascending), halving below the first radius down to about 0.25.
fn breakpoints(radii: &[f64]) -> Vec<f64> {
    let mut inner = Vec::new();
    let mut r = radii[0];
    while r > 0.25 {
        r /= 2.0;
        inner.push(r);
    }
    inner.push(0.0);
    inner.reverse();
    let mut pts = inner;
    let mut prev = radii[0];
    pts.push(prev);
    for &next in &radii[1..] {
        let pieces = ((next / prev).log2().ceil() as usize).max(1);
        let q = (next / prev).powf(1.0 / pieces as f64);
        for k in 1..=pieces {
            pts.push(if k == pieces { next } else { prev * q.powi(k as i32) });
        }
        prev = next;
    }
    pts
}

/// `T`-integrals `int_{R^2} -dU^m/d(alpha_{l,2})` for `m = l-1, l`, computed
/// circle-first (trapezoid in angle, which cancels the frequency-2 leading
/// term) and then radially with Gauss panels.
pub fn t_integral(
    sp: &SolutionParams,
    l: usize,
    use_beta: bool,
    radii: &[f64],
    route: DerivativeRoute,
) -> Result<TIntegral> {
    let n = sp.n();
    if l < 2 || l > n {
        return Err(TodaError::InvalidArgument(format!("T-integrals need 2 <= l <= n, got l = {l}, n = {n}")));
    }
    if radii.len() < 2 || radii.windows(2).any(|w| !(w[1] > w[0])) || !(radii[0] > 0.0) {
        return Err(TodaError::InvalidArgument("radii must be positive and strictly increasing".into()));
    }
    let direction = if use_beta { ParamDirection::Beta2(l) } else { ParamDirection::Alpha2(l) };
    let fd = match route {
        DerivativeRoute::FiniteDifference { step } => Some(ParamDerivativeField::new(sp, direction, step)?),
        DerivativeRoute::Analytic => None,
    };
    let field = |z: Complex64| -> Result<Vec<f64>> {
        match &fd {
            Some(f) => f.upper(z),
            None => sp.tangent_upper(direction, z),
        }
    };
    let ms = [l - 1, l];
    let pts = breakpoints(radii);
    let (nodes, weights) = gauss_legendre(20);
    let probe_at = |r: f64| FourierProbe::new(r, MIN_ANGULAR_SAMPLES).and_then(|p| p.analyze(&field));
    let mut panel_vals: Vec<[f64; 2]> = Vec::with_capacity(pts.len() - 1);
    for w in pts.windows(2) {
        let (half, mid) = (0.5 * (w[1] - w[0]), 0.5 * (w[1] + w[0]));
        let mut acc = [0.0; 2];
        for (x, wt) in nodes.iter().zip(&weights) {
            let r = mid + half * x;
            let c = probe_at(r)?;
            for (slot, &m) in ms.iter().enumerate() {
                acc[slot] += wt * half * TAU * r * c[m - 1].a0;
            }
        }
        panel_vals.push(acc);
    }
    let mut components = Vec::new();
    for (slot, &m) in ms.iter().enumerate() {
        let mut running = 0.0;
        let mut partials = Vec::new();
        let mut ri = 0;
        for (w, pv) in pts.windows(2).zip(&panel_vals) {
            running += pv[slot];
            if ri < radii.len() && w[1] == radii[ri] {
                partials.push(running);
                ri += 1;
            }
        }
        let differences: Vec<f64> = partials.windows(2).map(|w| w[1] - w[0]).collect();
        let shrink_ratios = differences.windows(2).map(|w| w[0].abs() / w[1].abs()).collect();
        let k = panel_vals.len();
        let (d1, d2) = (panel_vals[k - 2][slot], panel_vals[k - 1][slot]);
        let q = if d1 != 0.0 { d2 / d1 } else { 0.0 };
        let tail_estimate = if q.abs() < 1.0 { d2 * q / (1.0 - q) } else { f64::NAN };
        let value = partials.last().copied().unwrap_or(0.0) + tail_estimate;
        components.push(TIntegralComponent {
            m,
            radii: radii.to_vec(),
            partials,
            differences,
            shrink_ratios,
            tail_estimate,
            value,
        });
    }
    Ok(TIntegral { l, direction, components })
}
