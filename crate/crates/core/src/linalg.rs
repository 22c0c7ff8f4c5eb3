//! Small dense kernels: complex log-determinants, fraction-free integer
//! determinants and Gauss-Legendre rules.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::Zero;
#[cfg(not(any(feature = "std", test)))]
use num_traits::Float;

/// Determinant of a complex matrix as `log|det|` plus a unit phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogDet {
    pub log_abs: f64,
    pub phase: Complex64,
}

impl LogDet {
    pub const ZERO: LogDet = LogDet {
        log_abs: f64::NEG_INFINITY,
        phase: Complex64::new(0.0, 0.0),
    };

    pub fn is_zero(&self) -> bool {
        self.log_abs == f64::NEG_INFINITY
    }

    pub fn value(&self) -> Complex64 {
        self.phase * self.log_abs.exp()
    }
}

/// LU with partial pivoting on a row-major `k x k` matrix (consumed as scratch).
///
/// Rows are rescaled to unit max-norm before elimination and the scale factors
/// are accumulated in log form, so large-modulus entries never overflow.
pub fn complex_logdet(m: &mut [Complex64], k: usize) -> LogDet {
    debug_assert_eq!(m.len(), k * k);
    let mut log_abs = 0.0;
    let mut phase = Complex64::new(1.0, 0.0);
    for r in 0..k {
        let row = &mut m[r * k..(r + 1) * k];
        let s = row.iter().fold(0.0f64, |acc, z| acc.max(z.norm()));
        if s == 0.0 {
            return LogDet::ZERO;
        }
        log_abs += s.ln();
        for z in row.iter_mut() {
            *z /= s;
        }
    }
    for col in 0..k {
        let (piv, best) = (col..k)
            .map(|r| (r, m[r * k + col].norm()))
            .fold((col, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best == 0.0 {
            return LogDet::ZERO;
        }
        if piv != col {
            for c in 0..k {
                m.swap(piv * k + c, col * k + c);
            }
            phase = -phase;
        }
        let p = m[col * k + col];
        log_abs += best.ln();
        phase *= p / best;
        for r in col + 1..k {
            let f = m[r * k + col] / p;
            if f.is_zero() {
                continue;
            }
            for c in col + 1..k {
                let t = f * m[col * k + c];
                m[r * k + c] -= t;
            }
        }
    }
    LogDet { log_abs, phase }
}

/// Fraction-free Gaussian (Bareiss) elimination; exact for integer matrices.
pub fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let k = m.len();
    if k == 0 {
        return BigInt::from(1);
    }
    let mut sign = 1;
    let mut prev = BigInt::from(1);
    for col in 0..k - 1 {
        if m[col][col].is_zero() {
            match (col + 1..k).find(|&r| !m[r][col].is_zero()) {
                Some(r) => {
                    m.swap(r, col);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for r in col + 1..k {
            for c in col + 1..k {
                let v = &m[r][c] * &m[col][col] - &m[r][col] * &m[col][c];
                m[r][c] = v / &prev;
            }
        }
        prev = m[col][col].clone();
    }
    let d = m[k - 1][k - 1].clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}

/// Gauss-Legendre nodes and weights on [-1, 1].
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = Vec::with_capacity(order);
    let mut weights = Vec::with_capacity(order);
    let nf = order as f64;
    for i in 0..order {
        let mut x = (core::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for j in 2..=order {
                let jf = j as f64;
                let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
                p0 = p1;
                p1 = p2;
            }
            dp = nf * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes.push(x);
        weights.push(2.0 / ((1.0 - x * x) * dp * dp));
    }
    (nodes, weights)
}

/// Integrates `f` over `[a, b]` with a fixed Gauss-Legendre rule.
pub fn gauss_panel<F: FnMut(f64) -> f64>(rule: &(Vec<f64>, Vec<f64>), a: f64, b: f64, mut f: F) -> f64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    rule.0
        .iter()
        .zip(&rule.1)
        .map(|(x, w)| w * f(mid + half * x))
        .sum::<f64>()
        * half
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn logdet_small_cases() {
        let mut m = vec![c(2.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(3.0, 0.0)];
        let d = complex_logdet(&mut m, 2);
        assert!((d.value() - c(5.0, 0.0)).norm() < 1e-13);
        let mut m = vec![c(0.0, 1.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 1.0)];
        assert!((complex_logdet(&mut m, 2).value() - c(-1.0, 0.0)).norm() < 1e-14);
        let mut m = vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)];
        assert!((complex_logdet(&mut m, 2).value() - c(-1.0, 0.0)).norm() < 1e-14);
        let mut m = vec![c(1.0, 0.0), c(2.0, 0.0), c(2.0, 0.0), c(4.0, 0.0)];
        assert!(complex_logdet(&mut m, 2).value().norm() < 1e-14);
    }

    #[test]
    fn logdet_survives_huge_entries() {
        let mut m = vec![c(1e200, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1e200, 0.0)];
        let d = complex_logdet(&mut m, 2);
        assert!((d.log_abs - 400.0 * 10f64.ln()).abs() < 1e-10);
    }

    #[test]
    fn bareiss_matches_cofactor_expansion() {
        let m: Vec<Vec<BigInt>> = [[2, -1, 0], [-1, 2, -1], [0, -1, 2]]
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        assert_eq!(bareiss_det(m), BigInt::from(4));
        let m: Vec<Vec<BigInt>> = [[0, 1], [1, 0]]
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        assert_eq!(bareiss_det(m), BigInt::from(-1));
    }

    #[test]
    fn gauss_rules_integrate_polynomials() {
        for order in [1, 2, 5, 16, 24] {
            let rule = gauss_legendre(order);
            let wsum: f64 = rule.1.iter().sum();
            assert!((wsum - 2.0).abs() < 1e-13, "order {order}");
            let deg = 2 * order - 1;
            let got = gauss_panel(&rule, 0.0, 1.0, |x| x.powi(deg as i32));
            assert!((got - 1.0 / (deg as f64 + 1.0)).abs() < 1e-13, "order {order}");
        }
    }
}
