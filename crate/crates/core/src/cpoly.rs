//! Dense polynomials with complex double coefficients.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::Add;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, TodaError};

/// Coefficients indexed by power of z. The top coefficient is nonzero unless the
/// polynomial is zero, in which case `coeffs` is empty.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ComplexPoly {
    coeffs: Vec<Complex64>,
}

impl ComplexPoly {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn from_coeffs(coeffs: Vec<Complex64>) -> Self {
        let mut p = Self { coeffs };
        p.trim();
        p
    }

    /// `z^degree`.
    pub fn monomial(degree: usize, scale: Complex64) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); degree + 1];
        coeffs[degree] = scale;
        Self::from_coeffs(coeffs)
    }

    /// `z^i + sum_{j<i} c_j z^j`; missing lower coefficients are zero.
    pub fn monic_from_coeffs(i: usize, lower: &[(usize, Complex64)]) -> Result<Self> {
        if i == 0 {
            return Err(TodaError::InvalidArgument("monic polynomial needs degree >= 1".into()));
        }
        let mut coeffs = vec![Complex64::new(0.0, 0.0); i + 1];
        coeffs[i] = Complex64::new(1.0, 0.0);
        for &(j, c) in lower {
            if j >= i {
                return Err(TodaError::CoefficientIndex { i, j });
            }
            coeffs[j] = c;
        }
        Ok(Self { coeffs })
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.re == 0.0 && c.im == 0.0) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of `z^j` (zero past the degree).
    pub fn coeff(&self, j: usize) -> Complex64 {
        self.coeffs.get(j).copied().unwrap_or_default()
    }

    pub(crate) fn coeff_mut(&mut self, j: usize) -> &mut Complex64 {
        if j >= self.coeffs.len() {
            self.coeffs.resize(j + 1, Complex64::new(0.0, 0.0));
        }
        &mut self.coeffs[j]
    }

    /// Exact `order`-th derivative.
    pub fn derivative(&self, order: usize) -> Self {
        if order >= self.coeffs.len() {
            return Self::zero();
        }
        let coeffs = (order..self.coeffs.len())
            .map(|k| {
                let falling: f64 = ((k + 1 - order)..=k).map(|t| t as f64).product();
                self.coeffs[k] * falling
            })
            .collect();
        Self::from_coeffs(coeffs)
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// The `count` highest-order terms, as in the truncations `P_{m,3}`.
    pub fn leading_terms(&self, count: usize) -> Self {
        let len = self.coeffs.len();
        let keep = count.min(len);
        let mut coeffs = vec![Complex64::new(0.0, 0.0); len];
        coeffs[len - keep..].copy_from_slice(&self.coeffs[len - keep..]);
        Self::from_coeffs(coeffs)
    }

    /// `p(z + shift)` re-expanded in powers of z.
    pub fn translate(&self, shift: Complex64) -> Self {
        // Synthetic division (Taylor shift), O(d^2).
        let mut c = self.coeffs.clone();
        let d = c.len();
        for i in 0..d {
            for k in (i..d.saturating_sub(1)).rev() {
                let t = c[k + 1] * shift;
                c[k] += t;
            }
        }
        Self::from_coeffs(c)
    }
}

impl Add for &ComplexPoly {
    type Output = ComplexPoly;

    fn add(self, rhs: &ComplexPoly) -> ComplexPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        ComplexPoly::from_coeffs((0..len).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn power_sum(p: &ComplexPoly, z: Complex64) -> Complex64 {
        let mut zk = c(1.0, 0.0);
        let mut acc = c(0.0, 0.0);
        for &a in p.coeffs() {
            acc += a * zk;
            zk *= z;
        }
        acc
    }

    #[test]
    fn monic_construction() {
        let p = ComplexPoly::monic_from_coeffs(1, &[(0, c(0.0, 0.0))]).unwrap();
        assert_eq!(p.coeffs(), &[c(0.0, 0.0), c(1.0, 0.0)]);
        let q = ComplexPoly::monic_from_coeffs(2, &[(1, c(1.0, 1.0)), (0, c(2.0, 0.0))]).unwrap();
        assert_eq!(q.coeffs(), &[c(2.0, 0.0), c(1.0, 1.0), c(1.0, 0.0)]);
        assert_eq!(q.degree(), Some(2));
        assert_eq!(
            ComplexPoly::monic_from_coeffs(2, &[(2, c(1.0, 0.0))]),
            Err(TodaError::CoefficientIndex { i: 2, j: 2 })
        );
    }

    #[test]
    fn cubic_derivative() {
        let (c2, c1, c0) = (0.7, -1.3, 2.5);
        let p = ComplexPoly::monic_from_coeffs(3, &[(2, c(c2, 0.0)), (1, c(c1, 0.0)), (0, c(c0, 0.0))])
            .unwrap();
        assert_eq!(p.derivative(1).coeffs(), &[c(c1, 0.0), c(2.0 * c2, 0.0), c(3.0, 0.0)]);
        let q = ComplexPoly::from_coeffs(vec![c(0.0, 0.0), c(0.4, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        assert_eq!(q.derivative(1).coeffs(), &[c(0.4, 0.0), c(0.0, 0.0), c(3.0, 0.0)]);
        assert!(p.derivative(4).is_zero());
        assert_eq!(p.derivative(4).degree(), None);
        assert_eq!(p.derivative(0), p);
    }

    #[test]
    fn truncated_derivative_leading_terms() {
        let n = 5;
        let a = c(0.3, -0.2);
        let b = c(-0.1, 0.6);
        let lower = [(4, a), (3, b), (2, c(0.9, 0.9)), (0, c(1.0, 1.0))];
        let p = ComplexPoly::monic_from_coeffs(n, &lower).unwrap();
        let t = p.derivative(1).leading_terms(3);
        let nf = n as f64;
        assert_eq!(t.coeff(4), c(nf, 0.0));
        assert_eq!(t.coeff(3), a * (nf - 1.0));
        assert_eq!(t.coeff(2), b * (nf - 2.0));
        assert_eq!(t.coeff(1), c(0.0, 0.0));
    }

    #[test]
    fn evaluation() {
        let p = ComplexPoly::monic_from_coeffs(1, &[]).unwrap();
        assert_eq!(p.eval(c(1.0, 1.0)), c(1.0, 1.0));
        let q = ComplexPoly::monic_from_coeffs(2, &[(0, c(1.0, 0.0))]).unwrap();
        assert_eq!(q.eval(c(0.0, 1.0)), c(0.0, 0.0));
    }

    #[test]
    fn translation_matches_shifted_evaluation() {
        let p = ComplexPoly::monic_from_coeffs(4, &[(3, c(0.2, 0.1)), (1, c(-0.5, 0.3))]).unwrap();
        let a = c(0.4, -0.7);
        let t = p.translate(a);
        assert_eq!(t.coeff(4), c(1.0, 0.0));
        for z in [c(0.0, 0.0), c(1.5, -0.5), c(-2.0, 3.0)] {
            assert!((t.eval(z) - p.eval(z + a)).norm() < 1e-12);
        }
    }

    fn arb_poly(max_deg: usize) -> impl Strategy<Value = ComplexPoly> {
        proptest::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 1..=max_deg + 1)
            .prop_map(|v| ComplexPoly::from_coeffs(v.into_iter().map(|(a, b)| c(a, b)).collect()))
    }

    proptest! {
        #[test]
        fn horner_matches_power_sum(p in arb_poly(6), re in -2.0f64..2.0, im in -2.0f64..2.0) {
            let z = c(re, im);
            let h = p.eval(z);
            let s = power_sum(&p, z);
            let scale = p.coeffs().iter().map(|a| a.norm()).sum::<f64>() * (1.0 + z.norm()).powi(6);
            prop_assert!((h - s).norm() <= 1e-13 * scale.max(h.norm()));
        }

        #[test]
        fn derivative_is_linear(p in arb_poly(6), q in arb_poly(6), order in 0usize..4) {
            let lhs = (&p + &q).derivative(order);
            let rhs = &p.derivative(order) + &q.derivative(order);
            let len = lhs.coeffs().len().max(rhs.coeffs().len());
            for k in 0..len {
                prop_assert!((lhs.coeff(k) - rhs.coeff(k)).norm() <= 1e-12);
            }
        }

        #[test]
        fn derivative_degree_drops(p in arb_poly(6)) {
            let d = p.derivative(1);
            match p.degree() {
                Some(0) | None => prop_assert!(d.is_zero()),
                Some(k) => prop_assert_eq!(d.degree(), Some(k - 1)),
            }
        }

        #[test]
        fn derivative_matches_central_difference(p in arb_poly(6), re in -1.0f64..1.0, im in -1.0f64..1.0) {
            let z = c(re, im);
            let exact = p.derivative(1).eval(z);
            let errs: Vec<f64> = [1e-2, 5e-3]
                .iter()
                .map(|&h| {
                    let fd = (p.eval(z + c(h, 0.0)) - p.eval(z - c(h, 0.0))) / (2.0 * h);
                    (fd - exact).norm()
                })
                .collect();
            let scale = 1.0 + exact.norm() + p.derivative(3).eval(z).norm();
            prop_assert!(errs[0] <= 1e-3 * scale);
            // Halving h cuts the error by about four unless it is already at rounding level.
            prop_assert!(errs[1] <= errs[0] / 3.0 + 1e-10 * scale);
        }
    }
}
