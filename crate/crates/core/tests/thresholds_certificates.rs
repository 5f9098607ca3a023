//! Threshold functions, their roots, and (*)-certificates.

use proptest::prelude::*;
use std::f64::consts::{PI, SQRT_2};

use weierdim_core::star::{
    g_star, g_star_prime, published_certificates, search_certificate, verify_certificate,
    StarCertificate,
};
use weierdim_core::thresholds::{
    beta_of, big_h, h, h_gamma_form, solve_lambda_b, solve_tilde_lambda_b, tilde_big_h, tilde_h,
    y_bounds, TildeMethod, YMethod, CLOSED_FORM_BETA, DEFAULT_TOL,
};

#[test]
fn published_sign_facts() {
    assert!(h(2, 0.9352).unwrap() < 0.0);
    assert!(h(2, 0.9).unwrap() > 0.0);
    assert!(h(3, 0.7269).unwrap() < 0.0);
    assert!(h(4, 0.6083).unwrap() < 0.0);
    assert!(big_h(3, 1.0).unwrap() < 0.0);
    assert!(big_h(5, 0.5448).unwrap() < 0.0);
    assert!(tilde_big_h(5, 1.04 / 5f64.sqrt()).unwrap() < 0.0);
    let g = 1.0 / (2.0 * 0.9352);
    assert!(h_gamma_form(2, g).unwrap() < 0.0);
}

#[test]
fn pole_at_one_over_b() {
    assert!(h(3, 1.0 / 3.0 + 1e-8).unwrap() > 1e6);
    assert!(h(3, 1.0 / 3.0).is_err());
    assert!(h(3, 1.01).is_err());
}

#[test]
fn h_strictly_decreasing_on_grid() {
    for b in 2..=12u32 {
        let lo = 1.0 / b as f64;
        let vals: Vec<f64> = (1..=1000)
            .map(|i| h(b, lo + (1.0 - lo) * i as f64 / 1000.0).unwrap())
            .collect();
        assert!(vals.windows(2).all(|w| w[1] < w[0]), "b = {b}");
    }
}

#[test]
fn tilde_h_below_h_above_two_over_b() {
    for b in 3..=12u32 {
        let lo = 2.0 / b as f64;
        for i in 1..200 {
            let l = lo + (1.0 - lo) * i as f64 / 200.0;
            assert!(tilde_h(b, l).unwrap() < h(b, l).unwrap(), "b = {b}, λ = {l}");
        }
    }
}

#[test]
fn lambda_b_brackets() {
    let tol = DEFAULT_TOL;
    let r = solve_lambda_b(2, tol).unwrap();
    assert!(r.lo > 0.9 && r.hi < 0.9352);
    assert!(r.f_lo > 0.0 && r.f_hi < 0.0 && r.width() <= tol);
    for b in 5..=20 {
        assert!(solve_lambda_b(b, tol).unwrap().hi < 0.5448, "b = {b}");
    }
    assert!((solve_lambda_b(10_000, tol).unwrap().midpoint() - 1.0 / PI).abs() < 0.01);
    let mids: Vec<f64> = (3..=12).map(|b| solve_lambda_b(b, tol).unwrap().midpoint()).collect();
    assert!(mids.windows(2).all(|w| w[1] < w[0]));
    // λ_3, λ_4 sit just below the published checkpoints
    assert!((solve_lambda_b(3, tol).unwrap().hi - 0.72687).abs() < 1e-4);
    assert!((solve_lambda_b(4, tol).unwrap().hi - 0.60828).abs() < 1e-4);
}

#[test]
fn beta_values() {
    assert!((beta_of(2, 1.0).unwrap() - 3.0 * SQRT_2 / 4.0).abs() < 1e-14);
    let expect = 1.0 / (1.0 - 1.0 / (2.24f64 * 2.24)).sqrt();
    assert!((beta_of(2, 0.81).unwrap() - expect).abs() < 1e-14);
    for b in 2..=10u32 {
        for i in 1..50 {
            let lo = 1.0 / b as f64;
            let l = lo + (1.0 - lo) * i as f64 / 50.0;
            if let Ok(beta) = beta_of(b, l) {
                assert!(beta > 1.0);
            }
        }
    }
}

#[test]
fn y_bound_examples() {
    let y2 = y_bounds(2.0, &[]).unwrap();
    assert_eq!((y2.lower, y2.upper), (0.5, 0.5));
    let y6 = y_bounds(6.0, &[]).unwrap();
    assert_eq!(y6.method, YMethod::ClosedForm);
    assert_eq!(y6.lower, 1.0 / (1.0 + 6f64.sqrt()));
    let c = published_certificates()[0].cert;
    let yc = y_bounds(c.beta(), &[c]).unwrap();
    assert_eq!(yc.method, YMethod::Certificate);
    assert!(yc.lower >= 0.62);
    assert!(y_bounds(0.5, &[]).is_err());
}

#[test]
fn tilde_lambda_bounds() {
    let certs = published_certificates();
    for (b, bound) in [(2u32, 0.81), (3, 0.55), (4, 0.44)] {
        let t = solve_tilde_lambda_b(b, DEFAULT_TOL, &certs).unwrap();
        assert_eq!(t.method, TildeMethod::Certificate);
        assert_eq!(t.upper, bound);
    }
    let t25 = solve_tilde_lambda_b(25, DEFAULT_TOL, &[]).unwrap();
    assert_eq!(t25.method, TildeMethod::ClosedForm);
    let br = t25.tilde_h_bracket.unwrap();
    assert!(br.midpoint() < 1.04 / 5.0);
    assert!(beta_of(25, br.lo).unwrap() >= CLOSED_FORM_BETA);
    for b in 5..=30u32 {
        let t = solve_tilde_lambda_b(b, DEFAULT_TOL, &[]).unwrap();
        assert!(t.upper < 1.04 / (b as f64).sqrt(), "b = {b}");
    }
    let big = solve_tilde_lambda_b(10_000, DEFAULT_TOL, &[]).unwrap();
    let mid = big.tilde_h_bracket.unwrap().midpoint();
    assert!((100.0 * mid - 1.0 / PI.sqrt()).abs() < 0.02);
}

#[test]
fn tilde_lambda_below_lambda_b() {
    let certs = published_certificates();
    for b in 2..=30u32 {
        let t = solve_tilde_lambda_b(b, DEFAULT_TOL, &certs).unwrap();
        let l = solve_lambda_b(b, DEFAULT_TOL).unwrap();
        if t.method != TildeMethod::Trivial {
            assert!(t.upper < l.lo, "b = {b}");
        }
    }
}

#[test]
fn published_certificates_verify() {
    for (c, margin) in published_certificates().iter().zip([3e-4, 6e-6, 2e-4]) {
        let r = verify_certificate(&c.cert);
        assert!(r.valid && r.margin > 1e-6);
        assert!(r.margin > 0.5 * margin);
    }
}

#[test]
fn certificate_pins() {
    // k = 1: g = 1 + βt²/(1−t), g' = β(2t − t²)/(1−t)²
    let r = verify_certificate(&StarCertificate::new(2.0, 1, 0.0, 0.5).unwrap());
    assert!((r.g_value - 2.0).abs() < 1e-14);
    assert!((r.g_prime_value - 6.0).abs() < 1e-13);
    assert!(!r.valid);
    let r = verify_certificate(&StarCertificate::new(10.0, 2, 0.0, 0.9).unwrap());
    assert!(!r.valid && r.g_prime_value > 0.0);
    let c = StarCertificate::new(3.0, 5, 1.0, 1e-9).unwrap();
    assert!((g_star(&c) - 1.0).abs() < 1e-6);
}

#[test]
fn certificate_search() {
    let beta = beta_of(2, 0.81).unwrap();
    let found = search_certificate(beta, 0.62, 6, 4001).unwrap().unwrap();
    assert!(found.t() >= 0.62 && verify_certificate(&found).valid);
    assert!(search_certificate(6.0, 0.5, 6, 801).unwrap().is_none());
    // y(2) = 1/2, so a certificate with t ≥ 0.49 may exist
    let probe = search_certificate(2.0, 0.49, 6, 801).unwrap();
    assert!(probe.is_some_and(|c| c.t() < 0.5));
}

fn series_g(c: &StarCertificate, terms: usize) -> f64 {
    let (beta, k, eta, t) = (c.beta(), c.k() as usize, c.eta(), c.t());
    let mut g = 1.0;
    for n in 1..=terms {
        let coef = match n.cmp(&k) {
            std::cmp::Ordering::Less => -beta,
            std::cmp::Ordering::Equal => eta,
            std::cmp::Ordering::Greater => beta,
        };
        g += coef * t.powi(n as i32);
    }
    g
}

fn certificate() -> impl Strategy<Value = StarCertificate> {
    (1.0f64..12.0, 1u32..8, -1.0f64..1.0, 0.05f64..0.9)
        .prop_map(|(beta, k, e, t)| StarCertificate::new(beta, k, 2.0 * beta * e, t).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn h_gamma_identity(b in 2u32..=12, s in 0.01f64..0.99) {
        let lo = 1.0 / b as f64;
        let l = lo + s * (1.0 - lo);
        let direct = h(b, l).unwrap();
        let via_gamma = h_gamma_form(b, 1.0 / (b as f64 * l)).unwrap();
        prop_assert!((direct - via_gamma).abs() <= 1e-12 * (1.0 + direct.abs()));
    }

    #[test]
    fn closed_form_matches_series(c in certificate()) {
        let t = c.t();
        let tail = c.beta().max(c.eta().abs()) * t.powi(1001) / (1.0 - t);
        let s = series_g(&c, 1000);
        prop_assert!((g_star(&c) - s).abs() <= tail + 1e-12 * (1.0 + s.abs()));
    }

    #[test]
    fn derivative_matches_finite_difference(c in certificate()) {
        let h = 1e-7;
        let gp = |t: f64| g_star(&c.at(t).unwrap());
        let fd = (gp(c.t() + h) - gp(c.t() - h)) / (2.0 * h);
        prop_assert!((fd - g_star_prime(&c)).abs() < 1e-5, "{} {}", fd, g_star_prime(&c));
    }

    #[test]
    fn valid_certificates_respect_closed_form(beta in CLOSED_FORM_BETA..30.0, k in 1u32..8, e in -1.0f64..1.0, t in 0.01f64..0.99) {
        let c = StarCertificate::new(beta, k, 2.0 * beta * e, t).unwrap();
        if verify_certificate(&c).valid {
            prop_assert!(t < 1.0 / (1.0 + beta.sqrt()));
        }
    }
}
