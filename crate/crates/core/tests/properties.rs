use std::f64::consts::PI;
use std::sync::OnceLock;

use proptest::prelude::*;
use zladder::ladder::{build_ladder, LadderConfig, LadderTable, PrimePi};
use zladder::quadrature::{integrate_adaptive, integrate_singular, EndpointFlags};
use zladder::rszeta::ZEvaluator;
use zladder::specfun::{bessel_j, bessel_zero, gamma_fn, poly_eval, poly_norm_sq, PolyFamily};

fn ladder() -> &'static LadderTable {
    static L: OnceLock<LadderTable> = OnceLock::new();
    L.get_or_init(|| build_ladder(&ZEvaluator::default(), &LadderConfig::new(2000.0, 2300.0, 1e-9)).unwrap())
}

fn family(kind: u8, alpha: f64, beta: f64) -> PolyFamily {
    match kind % 4 {
        0 => PolyFamily::Jacobi { alpha, beta },
        1 => PolyFamily::Legendre,
        2 => PolyFamily::ChebyshevT,
        _ => PolyFamily::ChebyshevU,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn adaptive_quadrature_is_additive(a in -3.0f64..0.0, w in 0.5f64..6.0, split in 0.05f64..0.95, k in 0.5f64..30.0) {
        let f = |x: f64| (k * x).sin() * (x / 3.0).exp() + x * x;
        let b = a + w;
        let c = a + split * w;
        let whole = integrate_adaptive(f, a, b, 1e-12).unwrap().value;
        let parts = integrate_adaptive(f, a, c, 1e-12).unwrap().value + integrate_adaptive(f, c, b, 1e-12).unwrap().value;
        prop_assert!((whole - parts).abs() < 1e-10);
    }

    #[test]
    fn kronrod_error_estimate_is_conservative(alpha in -2.0f64..2.0, beta in 0.0f64..40.0, tol_exp in 3i32..11) {
        // ∫₀¹ e^{αx} cos βx dx in closed form
        let d = alpha * alpha + beta * beta;
        let exact = ((alpha.exp() * (alpha * beta.cos() + beta * beta.sin())) - alpha) / d;
        let r = integrate_adaptive(|x| (alpha * x).exp() * (beta * x).cos(), 0.0, 1.0, 10f64.powi(-tol_exp)).unwrap();
        prop_assert!((r.value - exact).abs() <= r.error_estimate.max(1e-14), "{} vs {exact}, est {}", r.value, r.error_estimate);
    }

    #[test]
    fn tanh_sinh_beta_integrals(p in -0.9f64..2.0, q in -0.9f64..2.0) {
        let exact = gamma_fn(p + 1.0).unwrap() * gamma_fn(q + 1.0).unwrap() / gamma_fn(p + q + 2.0).unwrap();
        let r = integrate_singular(|s| s.from_a.powf(p) * s.from_b.powf(q), 0.0, 1.0, 1e-12, EndpointFlags::BOTH).unwrap();
        prop_assert!(((r.value - exact) / exact).abs() < 1e-9, "{} vs {exact}", r.value);
    }

    #[test]
    fn polynomial_gram_matrix(kind in 0u8..4, alpha in -0.8f64..2.0, beta in -0.8f64..2.0, m in 0usize..7, n in 0usize..7) {
        let fam = family(kind, alpha, beta);
        let (left, right) = fam.singular_ends();
        let r = integrate_singular(
            |s| {
                poly_eval(fam, m, s.x).unwrap() * poly_eval(fam, n, s.x).unwrap() * fam.weight(s.from_a, s.from_b)
            },
            -1.0,
            1.0,
            1e-12,
            EndpointFlags { left, right },
        )
        .unwrap();
        let want = if m == n { poly_norm_sq(fam, n).unwrap() } else { 0.0 };
        prop_assert!((r.value - want).abs() < 1e-8 * (1.0 + want.abs()), "{fam:?} m={m} n={n}: {} vs {want}", r.value);
    }

    #[test]
    fn jacobi_reflection(alpha in -0.9f64..3.0, beta in -0.9f64..3.0, n in 0usize..12, u in -1.0f64..1.0) {
        let p = poly_eval(PolyFamily::Jacobi { alpha, beta }, n, -u).unwrap();
        let q = poly_eval(PolyFamily::Jacobi { alpha: beta, beta: alpha }, n, u).unwrap();
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        prop_assert!((p - sign * q).abs() <= 1e-11 * (1.0 + p.abs()));
    }

    #[test]
    fn bessel_three_term_recurrence(nu in 1.0f64..10.0, x in 0.5f64..200.0) {
        let lhs = bessel_j(nu - 1.0, x).unwrap() + bessel_j(nu + 1.0, x).unwrap();
        let rhs = 2.0 * nu / x * bessel_j(nu, x).unwrap();
        let scale = bessel_j(nu - 1.0, x).unwrap().abs() + bessel_j(nu + 1.0, x).unwrap().abs() + 1e-3;
        prop_assert!((lhs - rhs).abs() <= 1e-11 * scale.max(1.0));
    }

    #[test]
    fn bessel_zeros_interlace(nu in 0.0f64..6.0, n in 1usize..20) {
        let a = bessel_zero(nu, n).unwrap();
        let b = bessel_zero(nu + 1.0, n).unwrap();
        let c = bessel_zero(nu, n + 1).unwrap();
        prop_assert!(a < b && b < c);
        prop_assert!(bessel_j(nu, a).unwrap().abs() <= 1e-12);
    }

    #[test]
    fn gamma_recurrence(x in 0.05f64..150.0) {
        let g = gamma_fn(x).unwrap();
        prop_assert!(((gamma_fn(x + 1.0).unwrap() - x * g) / (x * g)).abs() < 1e-13);
    }

    #[test]
    fn theta_asymptotic_matches_stirling(t in 50.0f64..1e5) {
        let ev = ZEvaluator::default();
        prop_assert!((ev.theta(t).unwrap() - ev.theta_oracle(t).unwrap()).abs() <= 1e-9);
    }

    #[test]
    fn riemann_siegel_matches_oracle(t in 100.0f64..2e4) {
        let ev = ZEvaluator::default();
        prop_assert!((ev.z_rs(t).unwrap() - ev.z_oracle(t).unwrap()).abs() <= 1e-6);
    }

    #[test]
    fn prime_counting_steps(n in 3u64..200_000) {
        let p = PrimePi::new(200_000);
        let d = p.count(n).unwrap() - p.count(n - 1).unwrap();
        prop_assert!(d <= 1);
        prop_assert_eq!(d == 1, (2..).take_while(|k: &u64| k * k <= n).all(|k| n % k != 0));
    }

    #[test]
    fn ladder_is_monotone(a in 2000.0f64..2300.0, b in 2000.0f64..2300.0) {
        let l = ladder();
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(l.eval(lo).unwrap() <= l.eval(hi).unwrap());
    }

    #[test]
    fn ladder_round_trips(s in 0.0f64..1.0) {
        let l = ladder();
        let (lo, hi) = l.range();
        let y = lo + s * (hi - lo);
        let t = l.invert(y).unwrap();
        prop_assert!((l.eval(t).unwrap() - y).abs() <= 1e-10);
        prop_assert!(t >= l.t_lo() && t <= l.t_hi());
    }
}

#[test]
fn chebyshev_norms() {
    assert!((poly_norm_sq(PolyFamily::ChebyshevT, 0).unwrap() - PI).abs() < 1e-15);
    assert!((poly_norm_sq(PolyFamily::ChebyshevT, 5).unwrap() - PI / 2.0).abs() < 1e-15);
    assert!((poly_norm_sq(PolyFamily::ChebyshevU, 5).unwrap() - PI / 2.0).abs() < 1e-15);
}
