//! Threshold functions and the dimension thresholds `λ_b`, `λ̃_b`.
//!
//! `λ_b` is the unique zero of the strictly decreasing `h_b` on `(1/b, 1)`.
//! `λ̃_b` solves `y(β(λ)) = 1/(bλ)` with
//! `β(λ) = (sin²(π/b) − (b²λ − 1)⁻²)^{-1/2}`; `y` is known in closed form
//! only for `β ≥ 3 + √8`, so elsewhere only certified upper bounds are
//! produced.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::{powi, sin, sqrt, PI, SQRT_2};
use crate::star::{verify_certificate, LambdaCertificate, StarCertificate};

/// `3 + √8`, above which `y(β) = 1/(1 + √β)`.
pub const CLOSED_FORM_BETA: f64 = 3.0 + 2.0 * SQRT_2;

pub const DEFAULT_TOL: f64 = 1e-12;

/// Bisection bracket `[lo, hi]` of a decreasing function: `f(lo) > 0 ≥ f(hi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootBracket {
    pub lo: f64,
    pub hi: f64,
    pub f_lo: f64,
    pub f_hi: f64,
    pub tol: f64,
}

impl RootBracket {
    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Bisection for a strictly decreasing `f` with `f(lo) > 0 ≥ f(hi)`.
///
/// Stops at width `tol` or when the midpoint is no longer representable
/// strictly between the endpoints.
pub fn bisect_decreasing(
    f: impl Fn(f64) -> f64,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
) -> Result<RootBracket> {
    if !(tol > 0.0) {
        return Err(Error::NonPositiveTolerance(tol));
    }
    let mut f_lo = f(lo);
    let mut f_hi = f(hi);
    if !(f_lo > 0.0 && f_hi <= 0.0) {
        return Err(Error::InvalidArgument("bisection needs f(lo) > 0 >= f(hi)"));
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm > 0.0 {
            lo = mid;
            f_lo = fm;
        } else {
            hi = mid;
            f_hi = fm;
        }
    }
    Ok(RootBracket { lo, hi, f_lo, f_hi, tol })
}

fn check_base(b: u32) -> Result<()> {
    if b < 2 {
        Err(Error::InvalidBase(b))
    } else {
        Ok(())
    }
}

/// `λ ∈ (1/b, 1]`.
fn check_lambda(b: u32, lambda: f64) -> Result<f64> {
    check_base(b)?;
    let bf = f64::from(b);
    if !(lambda > 1.0 / bf && lambda <= 1.0) {
        return Err(Error::LambdaOutOfRange { lambda, lo: 1.0 / bf, hi: 1.0 });
    }
    Ok(bf)
}

fn sin2_pi_over(bf: f64) -> f64 {
    let s = sin(PI / bf);
    s * s
}

/// `h_b(λ)`.
pub fn h(b: u32, lambda: f64) -> Result<f64> {
    let bf = check_lambda(b, lambda)?;
    let l = lambda;
    if b == 2 {
        let l2 = l * l;
        Ok(1.0 / (4.0 * l2 * powi(2.0 * l - 1.0, 2))
            + 1.0 / (16.0 * l2 * powi(4.0 * l - 1.0, 2))
            - 1.0 / (8.0 * l2)
            + SQRT_2 / (2.0 * l)
            - 1.0)
    } else {
        Ok(1.0 / powi(bf * l - 1.0, 2) + 1.0 / powi(bf * bf * l - 1.0, 2) - sin2_pi_over(bf))
    }
}

/// `h_b` written in `γ = 1/(bλ)`; equals `h(b, 1/(bγ))`.
pub fn h_gamma_form(b: u32, gamma: f64) -> Result<f64> {
    check_base(b)?;
    let bf = f64::from(b);
    if !(gamma > 1.0 / bf && gamma < 1.0) {
        return Err(Error::GammaOutOfRange { gamma, lo: 1.0 / bf, hi: 1.0 });
    }
    let g = gamma;
    if b == 2 {
        let g2 = g * g;
        let g4 = g2 * g2;
        Ok(g4 / powi(1.0 - g, 2) + g4 / (4.0 * powi(2.0 - g, 2)) - g2 / 2.0 + SQRT_2 * g - 1.0)
    } else {
        Ok(g * g / powi(1.0 - g, 2) + g * g / powi(bf - g, 2) - sin2_pi_over(bf))
    }
}

/// `h̃_b(λ) = (bλ−1)⁻⁴ + (b²λ−1)⁻² − sin²(π/b)`.
pub fn tilde_h(b: u32, lambda: f64) -> Result<f64> {
    let bf = check_lambda(b, lambda)?;
    Ok(1.0 / powi(bf * lambda - 1.0, 4) + 1.0 / powi(bf * bf * lambda - 1.0, 2) - sin2_pi_over(bf))
}

/// `H_b(λ) = (λ − 1/b)⁻² + (bλ − 1/b)⁻² + π⁴/(3b²) − π²`, with `h_b < H_b/b²`
/// for `b ≥ 3`.
pub fn big_h(b: u32, lambda: f64) -> Result<f64> {
    let bf = check_lambda(b, lambda)?;
    Ok(1.0 / powi(lambda - 1.0 / bf, 2) + 1.0 / powi(bf * lambda - 1.0 / bf, 2)
        + powi(PI, 4) / (3.0 * bf * bf)
        - PI * PI)
}

/// `H̃_b(λ) = (√b λ − 1/√b)⁻⁴ + (bλ − 1/b)⁻² + π⁴/(3b²) − π²`.
pub fn tilde_big_h(b: u32, lambda: f64) -> Result<f64> {
    let bf = check_lambda(b, lambda)?;
    let rb = sqrt(bf);
    Ok(1.0 / powi(rb * lambda - 1.0 / rb, 4) + 1.0 / powi(bf * lambda - 1.0 / bf, 2)
        + powi(PI, 4) / (3.0 * bf * bf)
        - PI * PI)
}

/// A left endpoint in `(1/b, 1)` where `f > 0`, approaching `1/b`.
fn positive_left_end(b: u32, f: impl Fn(f64) -> f64) -> Option<f64> {
    let lo = 1.0 / f64::from(b);
    let mut step = 1.0 - lo;
    for _ in 0..200 {
        step *= 0.5;
        let x = lo + step;
        if x <= lo {
            break;
        }
        if f(x) > 0.0 {
            return Some(x);
        }
    }
    None
}

/// Bracket of `λ_b`, the zero of `h_b` on `(1/b, 1)`.
pub fn solve_lambda_b(b: u32, tol: f64) -> Result<RootBracket> {
    check_base(b)?;
    let f = |l: f64| h(b, l).unwrap_or(f64::NAN);
    let lo = positive_left_end(b, f).ok_or(Error::InvalidArgument("h_b has no positive value"))?;
    bisect_decreasing(f, lo, 1.0, tol)
}

/// `β(λ) = 1/√(sin²(π/b) − 1/(b²λ − 1)²)`, defined for `λ ∈ (1/b, 1]`.
pub fn beta_of(b: u32, lambda: f64) -> Result<f64> {
    let bf = check_lambda(b, lambda)?;
    let radicand = sin2_pi_over(bf) - 1.0 / powi(bf * bf * lambda - 1.0, 2);
    if !(radicand > 0.0) {
        return Err(Error::NonPositiveRadicand(radicand));
    }
    Ok(1.0 / sqrt(radicand))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum YMethod {
    /// `y(β) = 1/(1+√β)` for `β ≥ 3+√8`.
    ClosedForm,
    /// `y(β) ≥ 1/(1+√β)`, `y < 1`, and monotonicity around `y(2) = 1/2`.
    GenericBound,
    /// Lower bound raised by a verified (*)-certificate.
    Certificate,
}

/// Bounds `lower ≤ y(β) ≤ upper`. With `method != ClosedForm` and
/// `upper == 1` the upper bound is the strict `y(β) < 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct YBetaBounds {
    pub beta: f64,
    pub lower: f64,
    pub upper: f64,
    pub method: YMethod,
}

/// Tightest bounds on `y(β)` from the known facts and any certificates whose
/// `β` matches (relative tolerance 1e−12). Certificates are re-verified;
/// invalid ones are ignored.
pub fn y_bounds(beta: f64, certs: &[StarCertificate]) -> Result<YBetaBounds> {
    if !(beta >= 1.0) {
        return Err(Error::BetaBelowOne(beta));
    }
    let generic = 1.0 / (1.0 + sqrt(beta));
    if beta >= CLOSED_FORM_BETA {
        return Ok(YBetaBounds {
            beta,
            lower: generic,
            upper: generic,
            method: YMethod::ClosedForm,
        });
    }
    // y is strictly decreasing with y(2) = 1/2
    let mut lower = if beta <= 2.0 { generic.max(0.5) } else { generic };
    let upper = if beta >= 2.0 { 0.5 } else { 1.0 };
    let mut method = YMethod::GenericBound;
    for c in certs {
        if (c.beta() - beta).abs() > 1e-12 * beta || !verify_certificate(c).valid {
            continue;
        }
        if c.t() > lower {
            lower = c.t();
            method = YMethod::Certificate;
        }
    }
    Ok(YBetaBounds {
        beta,
        lower,
        upper,
        method,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TildeMethod {
    /// Exact bracket: the zero of `h̃_b` lies where `β ≥ 3+√8`.
    ClosedForm,
    /// Upper bound from the zero of `h̃_b` via `y(β) ≥ 1/(1+√β)`.
    GenericBound,
    /// Upper bound `λ₀` from a verified certificate at `λ₀`.
    Certificate,
    /// Nothing better than `λ̃_b < 1` is available.
    Trivial,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TildeLambdaBound {
    pub b: u32,
    /// `λ̃_b ≥ lower` (`1/b` unless the closed form applies).
    pub lower: f64,
    /// `λ̃_b ≤ upper`.
    pub upper: f64,
    pub method: TildeMethod,
    /// Bracket of the zero of `h̃_b`, when it exists.
    pub tilde_h_bracket: Option<RootBracket>,
    pub certificate: Option<LambdaCertificate>,
}

/// Whether `cert` proves `λ̃_b < cert.lambda`.
pub fn certificate_bounds_tilde_lambda(b: u32, cert: &LambdaCertificate) -> bool {
    if cert.b != b {
        return false;
    }
    let Ok(beta) = beta_of(b, cert.lambda) else {
        return false;
    };
    (cert.cert.beta() - beta).abs() <= 1e-12 * beta
        && verify_certificate(&cert.cert).valid
        && cert.cert.t() >= 1.0 / (f64::from(b) * cert.lambda)
}

/// Bounds on `λ̃_b`.
///
/// When the zero of `h̃_b` exists and `β ≥ 3+√8` holds at both bracket ends,
/// the bracket is exact. Otherwise the zero of `h̃_b` (if any) and each
/// usable certificate give upper bounds and the smallest is reported.
pub fn solve_tilde_lambda_b(
    b: u32,
    tol: f64,
    certs: &[LambdaCertificate],
) -> Result<TildeLambdaBound> {
    check_base(b)?;
    if !(tol > 0.0) {
        return Err(Error::NonPositiveTolerance(tol));
    }
    let bf = f64::from(b);
    let mut out = TildeLambdaBound {
        b,
        lower: 1.0 / bf,
        upper: 1.0,
        method: TildeMethod::Trivial,
        tilde_h_bracket: None,
        certificate: None,
    };

    let f = |l: f64| tilde_h(b, l).unwrap_or(f64::NAN);
    if f(1.0) <= 0.0 {
        if let Some(lo) = positive_left_end(b, f) {
            let bracket = bisect_decreasing(f, lo, 1.0, tol)?;
            let closed = beta_of(b, bracket.lo).is_ok_and(|v| v >= CLOSED_FORM_BETA)
                && beta_of(b, bracket.hi).is_ok_and(|v| v >= CLOSED_FORM_BETA);
            out.tilde_h_bracket = Some(bracket);
            out.upper = bracket.hi;
            if closed {
                out.lower = bracket.lo;
                out.method = TildeMethod::ClosedForm;
            } else {
                out.method = TildeMethod::GenericBound;
            }
        }
    }

    let usable: Vec<&LambdaCertificate> = certs
        .iter()
        .filter(|c| certificate_bounds_tilde_lambda(b, c))
        .collect();
    for c in usable {
        if c.lambda < out.upper {
            out.upper = c.lambda;
            out.method = TildeMethod::Certificate;
            out.certificate = Some(*c);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::star::published_certificates;

    #[test]
    fn sign_facts() {
        assert!(h(2, 0.9352).unwrap() < 0.0);
        assert!(h(2, 0.9).unwrap() > 0.0);
        assert!(h(3, 0.7269).unwrap() < 0.0);
        assert!(h(4, 0.6083).unwrap() < 0.0);
        assert!(big_h(3, 1.0).unwrap() < 0.0);
        assert!(big_h(5, 0.5448).unwrap() < 0.0);
        assert!(tilde_big_h(5, 1.04 / sqrt(5.0)).unwrap() < 0.0);
    }

    #[test]
    fn domain_errors() {
        assert!(h(2, 0.5).is_err());
        assert!(h(2, 1.01).is_err());
        assert!(h(1, 0.9).is_err());
        assert!(h_gamma_form(3, 0.3).is_err());
        assert!(h_gamma_form(3, 1.0).is_err());
        assert!(beta_of(3, 0.2).is_err());
        assert!(tilde_h(4, 0.25).is_err());
    }

    #[test]
    fn gamma_form_agrees_and_diverges() {
        let g = 1.0 / (2.0 * 0.9352);
        assert!(h_gamma_form(2, g).unwrap() < 0.0);
        assert!(h(3, 1.0 / 3.0 + 1e-8).unwrap() > 1e6);
    }

    #[test]
    fn lambda_brackets() {
        let r = solve_lambda_b(2, DEFAULT_TOL).unwrap();
        assert!(r.lo > 0.9 && r.hi < 0.9352);
        assert!(r.width() <= DEFAULT_TOL);
        assert!(r.f_lo > 0.0 && r.f_hi <= 0.0);
        assert!(solve_lambda_b(5, DEFAULT_TOL).unwrap().hi < 0.5448);
        let big = solve_lambda_b(10_000, DEFAULT_TOL).unwrap();
        assert!((big.midpoint() - 1.0 / PI).abs() < 0.01);
    }

    #[test]
    fn beta_values() {
        assert!((beta_of(2, 1.0).unwrap() - 3.0 * SQRT_2 / 4.0).abs() < 1e-14);
        let expect = 1.0 / sqrt(1.0 - 1.0 / (2.24 * 2.24));
        assert!((beta_of(2, 0.81).unwrap() - expect).abs() < 1e-14);
    }

    #[test]
    fn y_bound_cases() {
        let y = y_bounds(2.0, &[]).unwrap();
        assert_eq!((y.lower, y.upper), (0.5, 0.5));
        let y = y_bounds(6.0, &[]).unwrap();
        assert_eq!(y.method, YMethod::ClosedForm);
        assert_eq!(y.lower, 1.0 / (1.0 + sqrt(6.0)));
        assert_eq!(y.lower, y.upper);
        assert!(y_bounds(0.99, &[]).is_err());

        let cert = published_certificates()[0].cert;
        let y = y_bounds(cert.beta(), &[cert]).unwrap();
        assert!((cert.beta() - 1.1176).abs() < 1e-3);
        assert_eq!(y.method, YMethod::Certificate);
        assert!(y.lower >= 0.62);
        // mismatched β is ignored
        let y = y_bounds(1.5, &[cert]).unwrap();
        assert_eq!(y.method, YMethod::GenericBound);
    }

    #[test]
    fn tilde_bounds_with_published_certificates() {
        let certs = published_certificates();
        let t2 = solve_tilde_lambda_b(2, DEFAULT_TOL, &certs).unwrap();
        assert_eq!((t2.upper, t2.method), (0.81, TildeMethod::Certificate));
        let t3 = solve_tilde_lambda_b(3, DEFAULT_TOL, &certs).unwrap();
        assert_eq!(t3.upper, 0.55);
        let t4 = solve_tilde_lambda_b(4, DEFAULT_TOL, &certs).unwrap();
        assert_eq!(t4.upper, 0.44);
        // without certificates, b = 2 has no generic bound
        let t2 = solve_tilde_lambda_b(2, DEFAULT_TOL, &[]).unwrap();
        assert_eq!(t2.method, TildeMethod::Trivial);
        assert!(t2.tilde_h_bracket.is_none());
    }

    #[test]
    fn tilde_closed_form_regime() {
        let t = solve_tilde_lambda_b(25, DEFAULT_TOL, &[]).unwrap();
        assert_eq!(t.method, TildeMethod::ClosedForm);
        assert!(0.5 * (t.lower + t.upper) < 1.04 / 5.0);
        let t = solve_tilde_lambda_b(5, DEFAULT_TOL, &[]).unwrap();
        assert_eq!(t.method, TildeMethod::GenericBound);
        assert!(t.upper < 1.04 / sqrt(5.0));
    }

    #[test]
    fn certificate_for_wrong_base_is_ignored() {
        let certs = published_certificates();
        assert!(!certificate_bounds_tilde_lambda(3, &certs[0]));
        let mut bad = certs[1];
        bad.cert = bad.cert.with_eta(bad.cert.eta() + 0.5).unwrap();
        assert!(!certificate_bounds_tilde_lambda(3, &bad));
    }
}
