//! Exact determinants of the falling-factorial matrices `F(m)` and `G(m)`.
//!
//! Row `r`, column `c` of the F layout is `prod_{j=c}^{c+r-1} (n-j)`. The G
//! layout is identical except that its last column starts the product at
//! `j = m` instead of `j = m-1`. Both determinants are independent of `n`:
//!
//! ```text
//! F(m) = (-1)^{m(m-1)/2} (m-1)! (m-2)! ... 1! 0!
//! G(m) = (-1)^{m+1} m! F(m-1)
//! ```

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Result, TodaError};
use crate::linalg::bareiss_det;

/// Largest size accepted by [`verify_identity_sweep`].
pub const MAX_SWEEP_SIZE: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Layout {
    F,
    G,
}

/// `m x m` matrix of falling products in the integer parameter `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FallingFactorialMatrix {
    pub m: usize,
    pub n: i64,
    pub layout: Layout,
}

impl FallingFactorialMatrix {
    pub fn new(m: usize, n: i64, layout: Layout) -> Result<Self> {
        let min = match layout {
            Layout::F => 1,
            Layout::G => 2,
        };
        if m < min {
            return Err(TodaError::InvalidArgument(alloc::format!("{layout:?}(m) needs m >= {min}, got {m}")));
        }
        Ok(Self { m, n, layout })
    }

    fn start(&self, c: usize) -> i64 {
        if self.layout == Layout::G && c == self.m - 1 {
            self.m as i64
        } else {
            c as i64
        }
    }

    /// Entry at 0-based row `r`, column `c`; the empty product is 1.
    pub fn entry(&self, r: usize, c: usize) -> BigInt {
        let j0 = self.start(c);
        (j0..j0 + r as i64).fold(BigInt::one(), |acc, j| acc * BigInt::from(self.n - j))
    }

    pub fn rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.m).map(|r| (0..self.m).map(|c| self.entry(r, c)).collect()).collect()
    }

    pub fn det(&self) -> BigInt {
        bareiss_det(self.rows())
    }
}

fn factorial(k: usize) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, t| acc * BigInt::from(t))
}

fn sign(exp: usize) -> BigInt {
    if exp % 2 == 0 {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

/// Exact determinant of the F layout.
pub fn f_det(m: usize, n: i64) -> Result<BigInt> {
    Ok(FallingFactorialMatrix::new(m, n, Layout::F)?.det())
}

/// Exact determinant of the G layout; `m >= 2`.
pub fn g_det(m: usize, n: i64) -> Result<BigInt> {
    Ok(FallingFactorialMatrix::new(m, n, Layout::G)?.det())
}

/// `(-1)^{m(m-1)/2} prod_{j=0}^{m-1} j!`.
pub fn f_closed_form(m: usize) -> BigInt {
    let prod = (0..m).fold(BigInt::one(), |acc, j| acc * factorial(j));
    sign(m * m.saturating_sub(1) / 2) * prod
}

/// `(-1)^{m+1} m! F(m-1)`.
pub fn g_closed_form(m: usize) -> BigInt {
    sign(m + 1) * factorial(m) * f_closed_form(m - 1)
}

/// The second written form `(-1)^{m(m-1)/2} m! (m-2)! ... 0!`.
pub fn g_closed_form_alt(m: usize) -> BigInt {
    let prod = (0..m - 1).fold(BigInt::one(), |acc, j| acc * factorial(j));
    sign(m * (m - 1) / 2) * factorial(m) * prod
}

/// One verified `(layout, m, n)` case.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityCase {
    pub layout: Layout,
    pub m: usize,
    pub n: i64,
    pub det: BigInt,
    pub expected: BigInt,
    pub pass: bool,
}

/// Per-size evidence that the determinant does not depend on `n`.
///
/// As a polynomial in `n` the determinant has degree at most
/// `m(m-1)/2` (row `r` has degree `r`), so agreement at more distinct `n`
/// values than that proves constancy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndependenceBound {
    pub layout: Layout,
    pub m: usize,
    pub degree_bound: usize,
    pub distinct_n: usize,
    pub constant_over_sample: bool,
    pub proves_independence: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IdentitySweep {
    pub cases: Vec<IdentityCase>,
    pub bounds: Vec<IndependenceBound>,
}

impl IdentitySweep {
    pub fn all_pass(&self) -> bool {
        self.cases.iter().all(|c| c.pass) && self.bounds.iter().all(|b| b.constant_over_sample)
    }

    pub fn first_failure(&self) -> Option<&IdentityCase> {
        self.cases.iter().find(|c| !c.pass)
    }
}

/// Checks F(m) for `1 <= m <= m_max` and G(m) for `2 <= m <= m_max` at every
/// `n` returned by `n_values(m)`, in exact arithmetic.
pub fn verify_identity_sweep<N>(m_max: usize, n_values: N) -> Result<IdentitySweep>
where
    N: Fn(usize) -> Vec<i64>,
{
    if m_max > MAX_SWEEP_SIZE {
        return Err(TodaError::InvalidArgument(alloc::format!(
            "m_max = {m_max} exceeds {MAX_SWEEP_SIZE}"
        )));
    }
    let mut cases = Vec::new();
    let mut bounds = Vec::new();
    for m in 1..=m_max {
        let mut ns = n_values(m);
        ns.sort_unstable();
        ns.dedup();
        for layout in [Layout::F, Layout::G] {
            if layout == Layout::G && m < 2 {
                continue;
            }
            let expected = match layout {
                Layout::F => f_closed_form(m),
                Layout::G => g_closed_form(m),
            };
            let mut first: Option<BigInt> = None;
            let mut constant = true;
            for &n in &ns {
                let det = FallingFactorialMatrix::new(m, n, layout)?.det();
                match &first {
                    None => first = Some(det.clone()),
                    Some(f) => constant &= f == &det,
                }
                let pass = det == expected;
                cases.push(IdentityCase { layout, m, n, det, expected: expected.clone(), pass });
            }
            let degree_bound = m * (m - 1) / 2;
            bounds.push(IndependenceBound {
                layout,
                m,
                degree_bound,
                distinct_n: ns.len(),
                constant_over_sample: constant,
                proves_independence: constant && ns.len() > degree_bound,
            });
        }
    }
    Ok(IdentitySweep { cases, bounds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn big(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn layout_rows() {
        let f = FallingFactorialMatrix::new(4, 9, Layout::F).unwrap();
        for c in 0..4 {
            assert_eq!(f.entry(0, c), big(1));
            assert_eq!(f.entry(1, c), big(9 - c as i64));
        }
        assert_eq!(f.entry(3, 0), big(9 * 8 * 7));
        assert_eq!(f.entry(3, 3), big(6 * 5 * 4));
        let g = FallingFactorialMatrix::new(3, 9, Layout::G).unwrap();
        assert_eq!(g.entry(1, 2), big(9 - 3));
        assert_eq!(g.entry(2, 2), big(6 * 5));
        assert_eq!(g.entry(2, 1), big(8 * 7));
    }

    #[test]
    fn small_values() {
        assert_eq!(f_det(1, 5).unwrap(), big(1));
        for n in -3..12 {
            assert_eq!(f_det(2, n).unwrap(), big(-1));
            assert_eq!(g_det(2, n).unwrap(), big(-2));
            assert_eq!(g_det(3, n).unwrap(), big(-6));
        }
        for n in 4..=30 {
            assert_eq!(f_det(4, n).unwrap(), big(12));
        }
        assert_eq!(f_closed_form(4), big(12));
        assert_eq!(g_closed_form(2), big(-2));
        assert_eq!(g_closed_form(3), big(-6));
        assert!(g_det(1, 3).is_err());
        assert!(f_det(0, 3).is_err());
    }

    #[test]
    fn both_written_forms_of_g_agree() {
        for m in 2..=12 {
            assert_eq!(g_closed_form(m), g_closed_form_alt(m), "m = {m}");
        }
    }

    #[test]
    fn g_matches_recursion_exactly() {
        for m in 2..=10 {
            for n in 0..=40 {
                let lhs = g_det(m, n).unwrap();
                let rhs = sign(m + 1) * factorial(m) * f_det(m - 1, n).unwrap();
                assert_eq!(lhs, rhs, "m={m} n={n}");
            }
        }
    }

    #[test]
    fn sweep_with_zero_entries_passes() {
        // n < 2m-2 puts zeros into the lower rows.
        let sweep = verify_identity_sweep(10, |m| (0..(2 * m as i64 - 2).max(1)).collect()).unwrap();
        assert!(sweep.all_pass());
        let sweep = verify_identity_sweep(10, |m| (m as i64..=m as i64 + 20).collect()).unwrap();
        assert!(sweep.all_pass(), "{:?}", sweep.first_failure());
        assert!(sweep.bounds.iter().filter(|b| b.m <= 6).all(|b| b.proves_independence));
        let one = verify_identity_sweep(1, |_| vec![3]).unwrap();
        assert_eq!(one.cases.len(), 1);
        assert!(one.all_pass());
        assert!(verify_identity_sweep(13, |_| vec![1]).is_err());
    }

    #[test]
    fn vandermonde_oracle() {
        // Falling factorials are monic of degree r, so det equals the
        // Vandermonde product over the column start points x_c = n - start(c).
        for layout in [Layout::F, Layout::G] {
            for m in 2..=8 {
                let mat = FallingFactorialMatrix::new(m, 17, layout).unwrap();
                let xs: Vec<i64> = (0..m).map(|c| 17 - mat.start(c)).collect();
                let mut v = big(1);
                for a in 0..m {
                    for b in a + 1..m {
                        v *= big(xs[b] - xs[a]);
                    }
                }
                assert_eq!(mat.det(), v, "{layout:?} m={m}");
            }
        }
    }
}
