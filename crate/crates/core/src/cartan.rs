//! Cartan matrix of type A_n and its inverse, in exact rational arithmetic.
//!
//! All public indices are 1-based (`1..=n`); storage is row-major and 0-based.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Result, TodaError};

/// The matrix A of the SU(n+1) Toda system together with A⁻¹.
#[derive(Debug, Clone, PartialEq)]
pub struct CartanData {
    n: usize,
    a: Vec<BigRational>,
    a_inv: Vec<BigRational>,
    a_f64: Vec<f64>,
    a_inv_f64: Vec<f64>,
}

fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

impl CartanData {
    /// Builds A (2 on the diagonal, -1 next to it) and A⁻¹ from the closed form
    /// `a^{ij} = j(n+1-i)/(n+1)` for `i >= j`, mirrored for `i < j`.
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(TodaError::InvalidDimension(n));
        }
        let mut a = vec![BigRational::zero(); n * n];
        let mut a_inv = vec![BigRational::zero(); n * n];
        for i in 0..n {
            a[i * n + i] = rat(2, 1);
            if i + 1 < n {
                a[i * n + i + 1] = rat(-1, 1);
                a[(i + 1) * n + i] = rat(-1, 1);
            }
            for j in 0..n {
                let (hi, lo) = if i >= j { (i + 1, j + 1) } else { (j + 1, i + 1) };
                a_inv[i * n + j] = rat((lo * (n + 1 - hi)) as i64, (n + 1) as i64);
            }
        }
        let to_f64 = |m: &[BigRational]| -> Vec<f64> {
            m.iter().map(|q| q.to_f64().unwrap_or(f64::NAN)).collect()
        };
        let a_f64 = to_f64(&a);
        let a_inv_f64 = to_f64(&a_inv);
        Ok(Self { n, a, a_inv, a_f64, a_inv_f64 })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn check(&self, i: usize) -> Result<usize> {
        if i == 0 || i > self.n {
            Err(TodaError::IndexOutOfRange { index: i, max: self.n })
        } else {
            Ok(i - 1)
        }
    }

    /// Entry `a_{ij}`, 1-based.
    pub fn a(&self, i: usize, j: usize) -> Result<&BigRational> {
        let (r, c) = (self.check(i)?, self.check(j)?);
        Ok(&self.a[r * self.n + c])
    }

    /// Entry `a^{ij}` of A⁻¹, 1-based.
    pub fn a_inv(&self, i: usize, j: usize) -> Result<&BigRational> {
        let (r, c) = (self.check(i)?, self.check(j)?);
        Ok(&self.a_inv[r * self.n + c])
    }

    /// Row-major floating copy of A.
    pub fn a_f64(&self) -> &[f64] {
        &self.a_f64
    }

    /// Row-major floating copy of A⁻¹.
    pub fn a_inv_f64(&self) -> &[f64] {
        &self.a_inv_f64
    }

    /// Exact product A·A⁻¹.
    pub fn product(&self) -> Vec<BigRational> {
        let n = self.n;
        let mut out = vec![BigRational::zero(); n * n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = BigRational::zero();
                for k in 0..n {
                    let lhs = &self.a[i * n + k];
                    if !lhs.is_zero() {
                        acc += lhs * &self.a_inv[k * n + j];
                    }
                }
                out[i * n + j] = acc;
            }
        }
        out
    }

    /// True when A·A⁻¹ is exactly the identity.
    pub fn inverse_is_exact(&self) -> bool {
        let n = self.n;
        self.product().iter().enumerate().all(|(idx, q)| {
            if idx / n == idx % n {
                q.is_one()
            } else {
                q.is_zero()
            }
        })
    }

    /// `U^i = sum_j a^{ij} U_j`.
    pub fn to_upper(&self, u: &[f64]) -> Result<Vec<f64>> {
        self.apply(&self.a_inv_f64, u)
    }

    /// `U_i = sum_j a_{ij} U^j`.
    pub fn to_lower(&self, v: &[f64]) -> Result<Vec<f64>> {
        self.apply(&self.a_f64, v)
    }

    fn apply(&self, m: &[f64], x: &[f64]) -> Result<Vec<f64>> {
        let n = self.n;
        if x.len() != n {
            return Err(TodaError::LengthMismatch { expected: n, got: x.len() });
        }
        Ok((0..n)
            .map(|i| m[i * n..(i + 1) * n].iter().zip(x).map(|(a, b)| a * b).sum())
            .collect())
    }
}

/// `4 * sum_j a^{ij}`, which equals `2i(n+1-i)`.
pub fn row_sum_check(n: usize, i: usize) -> Result<BigRational> {
    let cd = CartanData::new(n)?;
    cd.check(i)?;
    let mut acc = BigRational::zero();
    for j in 1..=n {
        acc += cd.a_inv(i, j)?;
    }
    Ok(acc * rat(4, 1))
}

/// Lower-form residual of the Toda system given a Laplacian and `e^{U_j}`:
/// `lap_i + sum_j a_{ij} e_j`.
pub(crate) fn coupled(cd: &CartanData, lap: &[f64], exp_lower: &[f64]) -> Vec<f64> {
    let n = cd.n();
    let a = cd.a_f64();
    (0..n)
        .map(|i| {
            lap[i]
                + a[i * n..(i + 1) * n]
                    .iter()
                    .zip(exp_lower)
                    .map(|(x, y)| x * y)
                    .sum::<f64>()
        })
        .collect()
}
