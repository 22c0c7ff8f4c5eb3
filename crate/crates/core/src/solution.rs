//! The classified global solutions of the SU(n+1) Toda system.
//!
//! A solution is fixed by `lambda_0..lambda_n > 0` (with a prescribed product)
//! and monic polynomials `P_i` of degree `i`. With `f = lambda_0 + sum lambda_i |P_i|^2`
//! the upper components are `e^{-U^k} = 2^{k(k-1)} det_k(f)` where `det_k` is the
//! determinant of the Gram matrix `(d_z^p d_zbar^q f)_{0<=p,q<k}`.
//!
//! Writing `P_0 = 1`, that Gram matrix factors as `B diag(lambda) B^*` with
//! `B_{p,i} = P_i^{(p)}(z)`, so by Cauchy-Binet
//!
//! ```text
//! det_k(f) = sum_{|S| = k} lambda_S |W_S(z)|^2,   W_S = det (P_i^{(p)})_{p<k, i in S}.
//! ```
//!
//! Every term is non-negative, and each Wronskian minor is evaluated on a
//! matrix rescaled by powers of `max(|z|, 1)` so that its entries stay O(1).
//! Eliminating the Gram matrix itself loses about `|z|^{k(k-1)}` in relative
//! accuracy; that route is kept only as [`SolutionParams::det_k_gram`].

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_complex::Complex64;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cartan::CartanData;
use crate::cpoly::ComplexPoly;
use crate::error::{Result, TodaError};
use crate::linalg::{complex_logdet, LogDet};
#[cfg(not(any(feature = "std", test)))]
use num_traits::Float;

const LN_2: f64 = core::f64::consts::LN_2;

/// Largest n accepted by the solution family.
pub const MAX_N: usize = 12;

/// One prescribed coefficient `c_{ij}` of `P_i`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoeffEntry {
    pub i: usize,
    pub j: usize,
    pub re: f64,
    pub im: f64,
}

/// A direction in parameter space.
///
/// `Alpha(m) + i Beta(m) = c_{n+1-m, n-m}` for `m = 1..=n`;
/// `Alpha2(m) + i Beta2(m) = c_{n+2-m, n-m}` for `m = 2..=n`;
/// `LambdaRatio(i)` scales `lambda_i` by `e^t` and `lambda_0` by `e^{-t}`,
/// which keeps the product constraint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ParamDirection {
    Alpha(usize),
    Beta(usize),
    Alpha2(usize),
    Beta2(usize),
    LambdaRatio(usize),
    Coefficient { i: usize, j: usize, imaginary: bool },
    Zero,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Target {
    Coeff { i: usize, j: usize, unit: Complex64 },
    Lambda(usize),
    None,
}

impl ParamDirection {
    /// All first-frequency (`alpha_m`, `beta_m`) and second-frequency
    /// (`alpha_{m,2}`, `beta_{m,2}`) directions for a given n: 2n + 2(n-1) in total.
    pub fn kernel_directions(n: usize) -> Vec<ParamDirection> {
        let mut out = Vec::with_capacity(4 * n);
        for m in 1..=n {
            out.push(ParamDirection::Alpha(m));
            out.push(ParamDirection::Beta(m));
        }
        for m in 2..=n {
            out.push(ParamDirection::Alpha2(m));
            out.push(ParamDirection::Beta2(m));
        }
        out
    }

    fn target(&self, n: usize) -> Result<Target> {
        let bad = || TodaError::InvalidDirection(format!("{self} is not defined for n = {n}"));
        let re = Complex64::new(1.0, 0.0);
        let im = Complex64::new(0.0, 1.0);
        Ok(match *self {
            ParamDirection::Alpha(m) | ParamDirection::Beta(m) => {
                if m == 0 || m > n {
                    return Err(bad());
                }
                let unit = if matches!(self, ParamDirection::Alpha(_)) { re } else { im };
                Target::Coeff { i: n + 1 - m, j: n - m, unit }
            }
            ParamDirection::Alpha2(m) | ParamDirection::Beta2(m) => {
                if m < 2 || m > n {
                    return Err(bad());
                }
                let unit = if matches!(self, ParamDirection::Alpha2(_)) { re } else { im };
                Target::Coeff { i: n + 2 - m, j: n - m, unit }
            }
            ParamDirection::LambdaRatio(i) => {
                if i == 0 || i > n {
                    return Err(bad());
                }
                Target::Lambda(i)
            }
            ParamDirection::Coefficient { i, j, imaginary } => {
                if i == 0 || i > n || j >= i {
                    return Err(bad());
                }
                Target::Coeff { i, j, unit: if imaginary { im } else { re } }
            }
            ParamDirection::Zero => Target::None,
        })
    }
}

impl fmt::Display for ParamDirection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamDirection::Alpha(m) => write!(f, "alpha_{m}"),
            ParamDirection::Beta(m) => write!(f, "beta_{m}"),
            ParamDirection::Alpha2(m) => write!(f, "alpha_{m}_2"),
            ParamDirection::Beta2(m) => write!(f, "beta_{m}_2"),
            ParamDirection::LambdaRatio(i) => write!(f, "lambda_{i}"),
            ParamDirection::Coefficient { i, j, imaginary: false } => write!(f, "re_c_{i}_{j}"),
            ParamDirection::Coefficient { i, j, imaginary: true } => write!(f, "im_c_{i}_{j}"),
            ParamDirection::Zero => write!(f, "zero"),
        }
    }
}

impl FromStr for ParamDirection {
    type Err = TodaError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || TodaError::InvalidDirection(String::from(s));
        if s == "zero" {
            return Ok(ParamDirection::Zero);
        }
        let parts: Vec<&str> = s.split('_').collect();
        let num = |t: &str| t.parse::<usize>().map_err(|_| bad());
        match parts.as_slice() {
            ["alpha", m] => Ok(ParamDirection::Alpha(num(m)?)),
            ["beta", m] => Ok(ParamDirection::Beta(num(m)?)),
            ["alpha", m, "2"] => Ok(ParamDirection::Alpha2(num(m)?)),
            ["beta", m, "2"] => Ok(ParamDirection::Beta2(num(m)?)),
            ["lambda", i] => Ok(ParamDirection::LambdaRatio(num(i)?)),
            ["re", "c", i, j] => Ok(ParamDirection::Coefficient { i: num(i)?, j: num(j)?, imaginary: false }),
            ["im", "c", i, j] => Ok(ParamDirection::Coefficient { i: num(i)?, j: num(j)?, imaginary: true }),
            _ => Err(bad()),
        }
    }
}

/// `ln` of the required product `lambda_0 ... lambda_n = 2^{-n(n+1)} prod_{1<=i<=j<=n} (j-i+1)^{-2}`.
pub fn log_lambda_product_target(n: usize) -> f64 {
    // prod_{1<=i<=j<=n} (j-i+1) = prod_{j=1}^n j!
    let log_sf: f64 = (1..=n).map(|j| (1..=j).map(|t| (t as f64).ln()).sum::<f64>()).sum();
    -((n * (n + 1)) as f64) * LN_2 - 2.0 * log_sf
}

/// Rescales every lambda by one common factor `t` so the product constraint
/// holds. Returns the normalized lambdas and `t`.
pub fn normalize_lambdas(raw: &[f64], n: usize) -> Result<(Vec<f64>, f64)> {
    if n == 0 {
        return Err(TodaError::InvalidDimension(n));
    }
    if raw.len() != n + 1 {
        return Err(TodaError::LengthMismatch { expected: n + 1, got: raw.len() });
    }
    for (index, &value) in raw.iter().enumerate() {
        if !(value > 0.0 && value.is_finite()) {
            return Err(TodaError::NonPositiveLambda { index, value });
        }
    }
    let log_raw: f64 = raw.iter().map(|x| x.ln()).sum();
    let t = ((log_lambda_product_target(n) - log_raw) / (n as f64 + 1.0)).exp();
    Ok((raw.iter().map(|x| x * t).collect(), t))
}

/// Parameters of one global solution.
#[derive(Debug, Clone)]
pub struct SolutionParams {
    n: usize,
    lambdas: Vec<f64>,
    polys: Vec<ComplexPoly>,
    cartan: CartanData,
    // derivs[i][p] = P_i^{(p)} for i = 0..=n (P_0 = 1), p = 0..=n
    derivs: Vec<Vec<ComplexPoly>>,
    // subsets[k] = all k-subsets of {0..=n}
    subsets: Vec<Vec<Vec<usize>>>,
}

impl PartialEq for SolutionParams {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.lambdas == other.lambdas && self.polys == other.polys
    }
}

fn subsets_of(n_items: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n_items {
        return out;
    }
    loop {
        out.push(cur.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] != i + n_items - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        cur[i] += 1;
        for t in i + 1..k {
            cur[t] = cur[t - 1] + 1;
        }
    }
}

/// Per-point data for the Cauchy-Binet expansion of one `det_k`.
struct Expansion {
    log_det: f64,
    // (subset index, weight lambda_S |W_S|^2 / det_k, scaled minor determinant)
    terms: Vec<(usize, f64, LogDet)>,
}

impl SolutionParams {
    /// Builds parameters from raw lambdas and coefficients, applying
    /// [`normalize_lambdas`]. Returns the parameters and the scale factor used.
    pub fn new(n: usize, raw_lambdas: &[f64], coeffs: &[CoeffEntry]) -> Result<(Self, f64)> {
        if n == 0 {
            return Err(TodaError::InvalidDimension(n));
        }
        if n > MAX_N {
            return Err(TodaError::InvalidArgument(format!("n = {n} exceeds the supported maximum {MAX_N}")));
        }
        let (lambdas, t) = normalize_lambdas(raw_lambdas, n)?;
        let mut lower: Vec<Vec<(usize, Complex64)>> = vec![Vec::new(); n + 1];
        for e in coeffs {
            if e.i == 0 || e.i > n {
                return Err(TodaError::IndexOutOfRange { index: e.i, max: n });
            }
            if e.j >= e.i {
                return Err(TodaError::CoefficientIndex { i: e.i, j: e.j });
            }
            if !(e.re.is_finite() && e.im.is_finite()) {
                return Err(TodaError::InvalidArgument(format!("c_({},{}) is not finite", e.i, e.j)));
            }
            lower[e.i].push((e.j, Complex64::new(e.re, e.im)));
        }
        let polys = (1..=n)
            .map(|i| ComplexPoly::monic_from_coeffs(i, &lower[i]))
            .collect::<Result<Vec<_>>>()?;
        Ok((Self::assemble(n, lambdas, polys)?, t))
    }

    /// Builds parameters from already-normalized lambdas and monic polynomials,
    /// checking every invariant.
    pub fn from_parts(lambdas: Vec<f64>, polys: Vec<ComplexPoly>) -> Result<Self> {
        let n = polys.len();
        if n == 0 {
            return Err(TodaError::InvalidDimension(0));
        }
        if n > MAX_N {
            return Err(TodaError::InvalidArgument(format!("n = {n} exceeds the supported maximum {MAX_N}")));
        }
        if lambdas.len() != n + 1 {
            return Err(TodaError::LengthMismatch { expected: n + 1, got: lambdas.len() });
        }
        Self::assemble(n, lambdas, polys)
    }

    fn assemble(n: usize, lambdas: Vec<f64>, polys: Vec<ComplexPoly>) -> Result<Self> {
        for (index, &value) in lambdas.iter().enumerate() {
            if !(value > 0.0 && value.is_finite()) {
                return Err(TodaError::NonPositiveLambda { index, value });
            }
        }
        let log_prod: f64 = lambdas.iter().map(|x| x.ln()).sum();
        let target = log_lambda_product_target(n);
        if (log_prod - target).abs() > 1e-12 {
            return Err(TodaError::InvalidArgument(format!(
                "lambda product violates the normalization: ln prod = {log_prod}, required {target}"
            )));
        }
        for (idx, p) in polys.iter().enumerate() {
            let i = idx + 1;
            if p.degree() != Some(i) || p.coeff(i) != Complex64::new(1.0, 0.0) {
                return Err(TodaError::InvalidArgument(format!("P_{i} must be monic of degree {i}")));
            }
        }
        let one = ComplexPoly::monomial(0, Complex64::new(1.0, 0.0));
        let derivs = core::iter::once(&one)
            .chain(polys.iter())
            .map(|p| (0..=n).map(|order| p.derivative(order)).collect())
            .collect();
        let subsets = (0..=n + 1).map(|k| subsets_of(n + 1, k)).collect();
        Ok(Self {
            n,
            lambdas,
            polys,
            cartan: CartanData::new(n)?,
            derivs,
            subsets,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `lambda_0..=lambda_n`.
    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    /// `P_1..=P_n`.
    pub fn polys(&self) -> &[ComplexPoly] {
        &self.polys
    }

    pub fn cartan(&self) -> &CartanData {
        &self.cartan
    }

    /// `c_{ij}`, zero when `i` or `j` is out of range.
    pub fn coeff(&self, i: usize, j: usize) -> Complex64 {
        if i == 0 || i > self.n || j >= i {
            return Complex64::new(0.0, 0.0);
        }
        self.polys[i - 1].coeff(j)
    }

    /// All lower coefficients as entries (zero ones included).
    pub fn coeff_entries(&self) -> Vec<CoeffEntry> {
        let mut out = Vec::new();
        for i in 1..=self.n {
            for j in 0..i {
                let c = self.coeff(i, j);
                out.push(CoeffEntry { i, j, re: c.re, im: c.im });
            }
        }
        out
    }

    /// `alpha_m + i beta_m = c_{n+1-m, n-m}`, `m = 1..=n`.
    pub fn first_frequency_coeff(&self, m: usize) -> Result<Complex64> {
        match ParamDirection::Alpha(m).target(self.n)? {
            Target::Coeff { i, j, .. } => Ok(self.coeff(i, j)),
            _ => unreachable!(),
        }
    }

    /// `alpha_{m,2} + i beta_{m,2} = c_{n+2-m, n-m}`, `m = 2..=n`.
    pub fn second_frequency_coeff(&self, m: usize) -> Result<Complex64> {
        match ParamDirection::Alpha2(m).target(self.n)? {
            Target::Coeff { i, j, .. } => Ok(self.coeff(i, j)),
            _ => unreachable!(),
        }
    }

    /// Current value of the real parameter named by `dir`.
    pub fn direction_value(&self, dir: ParamDirection) -> Result<f64> {
        Ok(match dir.target(self.n)? {
            Target::Coeff { i, j, unit } => {
                let c = self.coeff(i, j);
                if unit.re != 0.0 {
                    c.re
                } else {
                    c.im
                }
            }
            Target::Lambda(i) => (self.lambdas[i] / self.lambdas[0]).ln() / 2.0,
            Target::None => 0.0,
        })
    }

    /// Parameters moved by `delta` along `dir`.
    pub fn perturbed(&self, dir: ParamDirection, delta: f64) -> Result<Self> {
        if !delta.is_finite() {
            return Err(TodaError::InvalidStep(delta));
        }
        match dir.target(self.n)? {
            Target::None => Ok(self.clone()),
            Target::Coeff { i, j, unit } => {
                let mut polys = self.polys.clone();
                *polys[i - 1].coeff_mut(j) += unit * delta;
                Self::assemble(self.n, self.lambdas.clone(), polys)
            }
            Target::Lambda(i) => {
                let mut lambdas = self.lambdas.clone();
                lambdas[i] *= delta.exp();
                lambdas[0] *= (-delta).exp();
                Self::assemble(self.n, lambdas, self.polys.clone())
            }
        }
    }

    /// Every `P_i(z)` replaced by `P_i(z + shift)`; still monic.
    pub fn translated(&self, shift: Complex64) -> Result<Self> {
        let polys = self.polys.iter().map(|p| p.translate(shift)).collect();
        Self::assemble(self.n, self.lambdas.clone(), polys)
    }

    /// `f(z) = lambda_0 + sum lambda_i |P_i(z)|^2`.
    pub fn f(&self, z: Complex64) -> f64 {
        self.lambdas[0] + self.polys.iter().zip(&self.lambdas[1..]).map(|(p, l)| l * p.eval(z).norm_sqr()).sum::<f64>()
    }

    /// `f^{p,q} = d_zbar^q d_z^p f = sum_i lambda_i P_i^{(p)} conj(P_i^{(q)})`, with `P_0 = 1`.
    pub fn mixed_derivative(&self, p: usize, q: usize, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, lam) in self.lambdas.iter().enumerate() {
            let dp = self.deriv_value(i, p, z);
            let dq = self.deriv_value(i, q, z);
            acc += dp * dq.conj() * *lam;
        }
        acc
    }

    fn deriv_value(&self, i: usize, order: usize, z: Complex64) -> Complex64 {
        match self.derivs[i].get(order) {
            Some(d) => d.eval(z),
            None => Complex64::new(0.0, 0.0),
        }
    }

    /// Scaled derivative table `V[p][i] = P_i^{(p)}(z) s^{p - deg P_i}` with `s = max(|z|, 1)`.
    fn scaled_table(&self, z: Complex64, rows: usize) -> (Vec<Complex64>, f64) {
        let s = z.norm().max(1.0);
        let w = self.n + 1;
        let mut v = vec![Complex64::new(0.0, 0.0); rows * w];
        for i in 0..w {
            for p in 0..rows.min(i + 1) {
                let scale = s.powi(p as i32 - i as i32);
                v[p * w + i] = self.derivs[i][p].eval(z) * scale;
            }
        }
        (v, s.ln())
    }

    fn expansion(&self, k: usize, table: &[Complex64], log_s: f64, z: Complex64) -> Result<Expansion> {
        let w = self.n + 1;
        let subsets = &self.subsets[k];
        let base = (k * (k - 1) / 2) as f64;
        let mut raw = Vec::with_capacity(subsets.len());
        let mut scratch = vec![Complex64::new(0.0, 0.0); k * k];
        let mut top = f64::NEG_INFINITY;
        for (idx, s) in subsets.iter().enumerate() {
            for p in 0..k {
                for (c, &i) in s.iter().enumerate() {
                    scratch[p * k + c] = table[p * w + i];
                }
            }
            let minor = complex_logdet(&mut scratch, k);
            if minor.is_zero() {
                continue;
            }
            let exponent = s.iter().sum::<usize>() as f64 - base;
            let log_lam: f64 = s.iter().map(|&i| self.lambdas[i].ln()).sum();
            let log_term = log_lam + 2.0 * (minor.log_abs + exponent * log_s);
            top = top.max(log_term);
            raw.push((idx, log_term, minor));
        }
        if !top.is_finite() {
            return Err(TodaError::Positivity { k, re: z.re, im: z.im });
        }
        let sum: f64 = raw.iter().map(|t| (t.1 - top).exp()).sum();
        let log_det = top + sum.ln();
        let terms = raw
            .into_iter()
            .map(|(idx, lt, minor)| (idx, (lt - log_det).exp(), minor))
            .collect();
        Ok(Expansion { log_det, terms })
    }

    /// `ln det_k(f)(z)` for `1 <= k <= n+1`. `det_k` is a sum of non-negative
    /// terms; a non-positive total is reported as [`TodaError::Positivity`].
    pub fn det_k(&self, k: usize, z: Complex64) -> Result<f64> {
        if k == 0 || k > self.n + 1 {
            return Err(TodaError::IndexOutOfRange { index: k, max: self.n + 1 });
        }
        let (table, log_s) = self.scaled_table(z, k);
        Ok(self.expansion(k, &table, log_s, z)?.log_det)
    }

    /// `ln det_k(f)` by direct elimination of the Gram matrix `(f^{p,q})`.
    /// Loses roughly `k(k-1) log10 |z|` digits; used as a cross-check.
    pub fn det_k_gram(&self, k: usize, z: Complex64) -> Result<f64> {
        if k == 0 || k > self.n + 1 {
            return Err(TodaError::IndexOutOfRange { index: k, max: self.n + 1 });
        }
        let mut g: Vec<Complex64> = (0..k * k).map(|idx| self.mixed_derivative(idx / k, idx % k, z)).collect();
        let d = complex_logdet(&mut g, k);
        if d.is_zero() || d.phase.re <= 0.0 {
            return Err(TodaError::Positivity { k, re: z.re, im: z.im });
        }
        Ok(d.log_abs)
    }

    /// `ln det_k(f)` for `k = 1..=n`.
    pub fn log_dets(&self, z: Complex64) -> Result<Vec<f64>> {
        let (table, log_s) = self.scaled_table(z, self.n);
        (1..=self.n).map(|k| Ok(self.expansion(k, &table, log_s, z)?.log_det)).collect()
    }

    /// `U^1..U^n` at z.
    pub fn upper(&self, z: Complex64) -> Result<Vec<f64>> {
        Ok(self
            .log_dets(z)?
            .into_iter()
            .enumerate()
            .map(|(idx, ld)| upper_from_logdet(idx + 1, ld))
            .collect())
    }

    /// All solution components at z.
    pub fn eval_all(&self, z: Complex64) -> Result<SolutionEval> {
        let log_det = self.log_dets(z)?;
        let u_upper: Vec<f64> = log_det.iter().enumerate().map(|(idx, &ld)| upper_from_logdet(idx + 1, ld)).collect();
        let u_lower = self.cartan.to_lower(&u_upper)?;
        let exp_lower = u_lower.iter().map(|u| u.exp()).collect();
        Ok(SolutionEval { z, u_upper, u_lower, exp_lower, log_det })
    }

    /// Exact derivative `-dU^k/d(dir)` for `k = 1..=n`, from the Cauchy-Binet
    /// expansion: `d ln det_k = sum_S w_S 2 Re(dW_S / W_S)`.
    pub fn tangent_upper(&self, dir: ParamDirection, z: Complex64) -> Result<Vec<f64>> {
        let target = dir.target(self.n)?;
        let n = self.n;
        let w = n + 1;
        let (table, log_s) = self.scaled_table(z, n);
        let s = log_s.exp();
        let mut out = Vec::with_capacity(n);
        for k in 1..=n {
            let exp = self.expansion(k, &table, log_s, z)?;
            let mut acc = 0.0;
            match target {
                Target::None => {}
                Target::Lambda(li) => {
                    for &(idx, weight, _) in &exp.terms {
                        let s = &self.subsets[k][idx];
                        let d = s.contains(&li) as i32 - s.contains(&0) as i32;
                        acc += weight * d as f64;
                    }
                }
                Target::Coeff { i: ci, j: cj, unit } => {
                    let mut scratch = vec![Complex64::new(0.0, 0.0); k * k];
                    for &(idx, weight, minor) in &exp.terms {
                        let subset = &self.subsets[k][idx];
                        let Some(col) = subset.iter().position(|&x| x == ci) else {
                            continue;
                        };
                        for p in 0..k {
                            for (c, &i) in subset.iter().enumerate() {
                                scratch[p * k + c] = if c == col {
                                    // (unit z^cj)^{(p)} scaled like column ci
                                    if p > cj {
                                        Complex64::new(0.0, 0.0)
                                    } else {
                                        let falling: f64 = ((cj + 1 - p)..=cj).map(|t| t as f64).product();
                                        unit * z.powu((cj - p) as u32) * falling * s.powi(p as i32 - ci as i32)
                                    }
                                } else {
                                    table[p * w + i]
                                };
                            }
                        }
                        let dminor = complex_logdet(&mut scratch, k);
                        if dminor.is_zero() {
                            continue;
                        }
                        let ratio = dminor.phase / minor.phase * (dminor.log_abs - minor.log_abs).exp();
                        acc += weight * 2.0 * ratio.re;
                    }
                }
            }
            out.push(acc);
        }
        Ok(out)
    }

    /// Deterministic pseudo-random parameters. `|c_ij| <= magnitude` and
    /// `|ln(lambda_i / lambda_j)| <= 2 magnitude`; `magnitude = 0` gives
    /// `P_i = z^i` with equal lambdas.
    pub fn sample(n: usize, seed: u64, magnitude: f64) -> Result<Self> {
        if !(magnitude >= 0.0 && magnitude.is_finite()) {
            return Err(TodaError::InvalidArgument(format!("magnitude {magnitude} must be finite and >= 0")));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((n as u64) << 48));
        let mut unit = || (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
        let raw: Vec<f64> = (0..=n).map(|_| (magnitude * (2.0 * unit() - 1.0)).exp()).collect();
        let mut coeffs = Vec::new();
        for i in 1..=n {
            for j in 0..i {
                let modulus = magnitude * unit();
                let angle = 2.0 * core::f64::consts::PI * unit();
                coeffs.push(CoeffEntry { i, j, re: modulus * angle.cos(), im: modulus * angle.sin() });
            }
        }
        Ok(Self::new(n, &raw, &coeffs)?.0)
    }
}

fn upper_from_logdet(k: usize, log_det: f64) -> f64 {
    -((k * (k - 1)) as f64 * LN_2 + log_det)
}

/// `sample_params` under its operation name.
pub fn sample_params(n: usize, seed: u64, magnitude: f64) -> Result<SolutionParams> {
    SolutionParams::sample(n, seed, magnitude)
}

/// Values of one solution at a point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionEval {
    pub z: Complex64,
    /// `U^1..U^n`.
    pub u_upper: Vec<f64>,
    /// `U_1..U_n`.
    pub u_lower: Vec<f64>,
    /// `e^{U_1}..e^{U_n}`.
    pub exp_lower: Vec<f64>,
    /// `ln det_k(f)` for `k = 1..n`; the scale through which the upper
    /// components are formed without overflow.
    pub log_det: Vec<f64>,
}

impl Serialize for ParamDirection {
    fn serialize<S: serde::Serializer>(&self, s: S) -> core::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ParamDirection {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> core::result::Result<Self, D::Error> {
        let s = <alloc::string::String as Deserialize>::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
