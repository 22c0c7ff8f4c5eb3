//! Cross-module properties of the solution family.

use num_complex::Complex64;
use proptest::prelude::*;
use toda_core::asymptotics::{fourier_coeffs, richardson};
use toda_core::identities::{f_closed_form, f_det, g_closed_form, g_det};
use toda_core::solution::log_lambda_product_target;
use toda_core::{normalize_lambdas, CoeffEntry, ParamDirection, SolutionParams};

fn point() -> impl Strategy<Value = Complex64> {
    (-3.0..3.0f64, -3.0..3.0f64).prop_map(|(x, y)| Complex64::new(x, y))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn normalization_hits_the_product(n in 1usize..=6, raw in prop::collection::vec(1e-3..1e3f64, 7)) {
        let (lam, t) = normalize_lambdas(&raw[..=n], n).unwrap();
        let log_prod: f64 = lam.iter().map(|x| x.ln()).sum();
        prop_assert!((log_prod - log_lambda_product_target(n)).abs() < 1e-12);
        for (a, b) in lam.iter().zip(&raw) {
            prop_assert!((a / b - t).abs() <= 1e-14 * t);
        }
    }

    #[test]
    fn top_determinant_is_constant(n in 1usize..=4, seed in any::<u64>(), z in point()) {
        let sp = SolutionParams::sample(n, seed, 0.5).unwrap();
        let want = -((n * (n + 1)) as f64) * std::f64::consts::LN_2;
        prop_assert!((sp.det_k(n + 1, z).unwrap() - want).abs() < 1e-8);
    }

    #[test]
    fn lower_components_follow_from_upper(n in 1usize..=4, seed in any::<u64>(), z in point()) {
        let sp = SolutionParams::sample(n, seed, 0.5).unwrap();
        let e = sp.eval_all(z).unwrap();
        let back = sp.cartan().to_upper(&e.u_lower).unwrap();
        for (a, b) in back.iter().zip(&e.u_upper) {
            prop_assert!((a - b).abs() <= 1e-10 * b.abs().max(1.0));
        }
        for (u, x) in e.u_lower.iter().zip(&e.exp_lower) {
            prop_assert!((u.exp() - x).abs() <= 1e-12 * x.max(1.0));
        }
    }

    #[test]
    fn two_determinant_routes_agree(n in 1usize..=3, seed in any::<u64>(), z in point()) {
        let sp = SolutionParams::sample(n, seed, 0.5).unwrap();
        for k in 1..=n {
            let a = sp.det_k(k, z).unwrap();
            let b = sp.det_k_gram(k, z).unwrap();
            prop_assert!((a - b).abs() < 1e-8, "k={} {} vs {}", k, a, b);
        }
    }

    #[test]
    fn translation_moves_the_solution(n in 1usize..=3, seed in any::<u64>(), z in point(), s in point()) {
        let sp = SolutionParams::sample(n, seed, 0.5).unwrap();
        let moved = sp.translated(s * 0.3).unwrap();
        let a = moved.upper(z).unwrap();
        let b = sp.upper(z + s * 0.3).unwrap();
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn identities_hold_off_the_sampled_range(m in 2usize..=7, n in -40i64..80) {
        prop_assert_eq!(f_det(m, n).unwrap(), f_closed_form(m));
        prop_assert_eq!(g_det(m, n).unwrap(), g_closed_form(m));
    }

    #[test]
    fn trig_polynomials_are_recovered(c in prop::collection::vec(-2.0..2.0f64, 5), r in 0.1..500.0f64) {
        let f = |z: Complex64| {
            let t = z.arg();
            Ok(c[0] + c[1] * t.cos() + c[2] * t.sin() + c[3] * (2.0 * t).cos() + c[4] * (2.0 * t).sin()
                + 0.7 * (5.0 * t).cos())
        };
        let fc = fourier_coeffs(f, r, 64).unwrap();
        for (got, want) in [fc.a0, fc.a1, fc.b1, fc.a2, fc.b2].iter().zip(&c) {
            prop_assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn richardson_is_exact_for_inverse_squares(l in -5.0..5.0f64, k in -50.0..50.0f64, r in 10.0..1e3f64) {
        let v = |r: f64| l + k / (r * r);
        prop_assert!((richardson(r, v(r), 2.0 * r, v(2.0 * r), 2) - l).abs() < 1e-9);
    }
}

#[test]
fn parameter_file_style_construction() {
    let (sp, t) = SolutionParams::new(2, &[1.0, 1.0, 1.0], &[CoeffEntry { i: 2, j: 1, re: 0.1, im: -0.2 }]).unwrap();
    assert!(t > 0.0);
    assert_eq!(sp.first_frequency_coeff(1).unwrap(), Complex64::new(0.1, -0.2));
    assert_eq!(sp.direction_value(ParamDirection::Beta(1)).unwrap(), -0.2);
    assert!(SolutionParams::new(2, &[1.0, 1.0], &[]).is_err());
    assert!(SolutionParams::new(2, &[1.0, 1.0, 1.0], &[CoeffEntry { i: 2, j: 2, re: 0.0, im: 0.0 }]).is_err());
}
