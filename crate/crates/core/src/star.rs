//! (*)-function certificates.
//!
//! For `β ≥ 1`, an integer `k ≥ 1` and a real `η`, let
//!
//! ```text
//! g(t) = 1 − β Σ_{n=1}^{k−1} tⁿ + η t^k + β Σ_{n>k} tⁿ
//!      = 1 − β (t − t^k)/(1 − t) + η t^k + β t^{k+1}/(1 − t).
//! ```
//!
//! If `g(t) > 0` and `g'(t) < 0` at some `t ∈ (0, 1)`, then every power
//! series `1 + Σ g_n tⁿ` with `|g_n| ≤ β` has no double root below `t`,
//! i.e. `y(β) > t`. `η` is not restricted to `[−β, β]`.

use crate::error::{Error, Result};
use crate::math::ipow;
use crate::par::map_indexed;

/// Sign margin required on both `g` and `−g'` for a certificate to count.
pub const VALIDITY_MARGIN: f64 = 1e-9;

/// Spacing of the `t` grid used by [`search_certificate`].
pub const SEARCH_T_STEP: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StarCertificate {
    beta: f64,
    k: u32,
    eta: f64,
    t: f64,
}

impl StarCertificate {
    pub fn new(beta: f64, k: u32, eta: f64, t: f64) -> Result<Self> {
        if !(beta >= 1.0) {
            return Err(Error::BetaBelowOne(beta));
        }
        if k == 0 {
            return Err(Error::InvalidArgument("certificate index k must be at least 1"));
        }
        if !(t > 0.0 && t < 1.0) {
            return Err(Error::TOutOfRange(t));
        }
        if !eta.is_finite() {
            return Err(Error::InvalidArgument("eta must be finite"));
        }
        Ok(Self { beta, k, eta, t })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    /// Same `(β, k, η)` evaluated at another point.
    pub fn at(&self, t: f64) -> Result<Self> {
        Self::new(self.beta, self.k, self.eta, t)
    }

    pub fn with_eta(&self, eta: f64) -> Result<Self> {
        Self::new(self.beta, self.k, eta, self.t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertificateReport {
    pub g_value: f64,
    pub g_prime_value: f64,
    pub valid: bool,
    /// `min(g, −g')`.
    pub margin: f64,
    /// Both signs are right but the margin is within [`VALIDITY_MARGIN`].
    pub borderline: bool,
}

fn g_raw(beta: f64, k: u32, eta: f64, t: f64) -> f64 {
    let tk = ipow(t, k);
    1.0 - beta * (t - tk) / (1.0 - t) + eta * tk + beta * tk * t / (1.0 - t)
}

fn g_prime_raw(beta: f64, k: u32, eta: f64, t: f64) -> f64 {
    let kf = f64::from(k);
    let tk1 = ipow(t, k - 1);
    let tk = tk1 * t;
    let s = 1.0 - t;
    let head = ((1.0 - kf * tk1) * s + (t - tk)) / (s * s);
    let tail = ((kf + 1.0) * tk * s + tk * t) / (s * s);
    -beta * head + eta * kf * tk1 + beta * tail
}

/// `g_β(t)` in closed form.
pub fn g_star(c: &StarCertificate) -> f64 {
    g_raw(c.beta, c.k, c.eta, c.t)
}

/// `g_β'(t)`, the term-wise derivative of the closed form.
pub fn g_star_prime(c: &StarCertificate) -> f64 {
    g_prime_raw(c.beta, c.k, c.eta, c.t)
}

pub fn verify_certificate(c: &StarCertificate) -> CertificateReport {
    let g = g_star(c);
    let gp = g_star_prime(c);
    let margin = g.min(-gp);
    CertificateReport {
        g_value: g,
        g_prime_value: gp,
        valid: margin > VALIDITY_MARGIN,
        margin,
        borderline: margin > 0.0 && margin <= VALIDITY_MARGIN,
    }
}

/// Grid search for a certificate with `t ≥ t_target`.
///
/// Scans `k = 1..=k_max`, then `η` over `eta_grid` uniform points of
/// `[−2β, 2β]`, then `t = t_target, t_target + 10⁻⁴, …` below 1. The first
/// valid triple in that lexicographic order is returned.
pub fn search_certificate(
    beta: f64,
    t_target: f64,
    k_max: u32,
    eta_grid: usize,
) -> Result<Option<StarCertificate>> {
    if !(beta >= 1.0) {
        return Err(Error::BetaBelowOne(beta));
    }
    if !(t_target > 0.0 && t_target < 1.0) {
        return Err(Error::TOutOfRange(t_target));
    }
    if eta_grid < 2 {
        return Err(Error::InvalidArgument("eta grid needs at least two points"));
    }
    let eta_step = 4.0 * beta / (eta_grid - 1) as f64;
    let t_steps = ((1.0 - t_target) / SEARCH_T_STEP) as usize + 1;

    for k in 1..=k_max {
        let hits = map_indexed(eta_grid, |j| {
            let eta = -2.0 * beta + j as f64 * eta_step;
            (0..t_steps)
                .map(|i| t_target + i as f64 * SEARCH_T_STEP)
                .take_while(|&t| t < 1.0)
                .find(|&t| {
                    g_raw(beta, k, eta, t) > VALIDITY_MARGIN
                        && g_prime_raw(beta, k, eta, t) < -VALIDITY_MARGIN
                })
                .map(|t| (eta, t))
        });
        if let Some((eta, t)) = hits.into_iter().flatten().next() {
            return StarCertificate::new(beta, k, eta, t).map(Some);
        }
    }
    Ok(None)
}

/// A certificate attached to a base `b` and a parameter `λ₀`: it is meant to
/// certify `y(β(λ₀)) > t ≥ 1/(bλ₀)`, which places `λ̃_b` below `λ₀`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaCertificate {
    pub b: u32,
    pub lambda: f64,
    pub cert: StarCertificate,
}

impl LambdaCertificate {
    /// Builds the certificate with `β = β(b, λ₀)`.
    pub fn new(b: u32, lambda: f64, k: u32, eta: f64, t: f64) -> Result<Self> {
        let beta = crate::thresholds::beta_of(b, lambda)?;
        Ok(Self {
            b,
            lambda,
            cert: StarCertificate::new(beta, k, eta, t)?,
        })
    }
}

/// The published certificates for `b = 2, 3, 4`.
pub fn published_certificates() -> [LambdaCertificate; 3] {
    [
        LambdaCertificate::new(2, 0.81, 4, 0.81, 0.62),
        LambdaCertificate::new(3, 0.55, 4, 1.43398, 0.6061),
        LambdaCertificate::new(4, 0.44, 3, -0.298, 0.569),
    ]
    .map(|c| c.expect("published certificate parameters are in range"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::thresholds::beta_of;

    fn cert(beta: f64, k: u32, eta: f64, t: f64) -> StarCertificate {
        StarCertificate::new(beta, k, eta, t).unwrap()
    }

    #[test]
    fn constructor_rejects_bad_inputs() {
        assert!(StarCertificate::new(1.5, 2, 0.0, 0.0).is_err());
        assert!(StarCertificate::new(1.5, 2, 0.0, 1.0).is_err());
        assert!(StarCertificate::new(0.5, 2, 0.0, 0.5).is_err());
        assert!(StarCertificate::new(1.5, 0, 0.0, 0.5).is_err());
    }

    #[test]
    fn small_t_limit() {
        for &(beta, k, eta) in &[(1.0, 1, 0.0), (3.0, 4, -2.0), (10.0, 7, 5.0)] {
            assert!((g_star(&cert(beta, k, eta, 1e-9)) - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn published_signs() {
        let c = cert(beta_of(2, 0.81).unwrap(), 4, 0.81, 0.62);
        assert!(g_star(&c) > 0.0);
        assert!(g_star_prime(&c) < 0.0);
        let c = cert(beta_of(3, 0.55).unwrap(), 4, 1.43398, 0.6061);
        assert!(g_star(&c) > 0.0);
        let c = cert(beta_of(4, 0.44).unwrap(), 3, -0.298, 0.569);
        assert!(g_star_prime(&c) < 0.0);
        for lc in published_certificates() {
            let r = verify_certificate(&lc.cert);
            assert!(r.valid, "{lc:?} {r:?}");
            assert!(lc.cert.t() >= 1.0 / (lc.b as f64 * lc.lambda));
        }
    }

    #[test]
    fn invalid_certificate() {
        // g(0.9) = 1 − 9 + 72.9 > 0, but g' is large and positive
        let r = verify_certificate(&cert(10.0, 2, 0.0, 0.9));
        assert!((r.g_value - 64.9).abs() < 1e-9);
        assert!(r.g_prime_value > 0.0);
        assert!(!r.valid);
    }

    #[test]
    fn k_one_has_no_negative_block() {
        // g(t) = 1 + η t + β t²/(1−t)
        let c = cert(2.0, 1, 0.0, 0.5);
        assert!((g_star(&c) - (1.0 + 2.0 * 0.25 / 0.5)).abs() < 1e-15);
        // g' = β (2t − t²)/(1−t)² = 2 · 0.75 / 0.25
        assert!((g_star_prime(&c) - 6.0).abs() < 1e-12);
        assert!(!verify_certificate(&c).valid);
    }

    #[test]
    fn borderline_is_flagged() {
        // pick η so that g(t) is a hair above zero
        let base = cert(2.0, 3, 0.0, 0.6);
        let g0 = g_star(&base);
        let eta = -(g0 - 5e-10) / ipow(0.6, 3);
        let c = base.with_eta(eta).unwrap();
        let r = verify_certificate(&c);
        assert!(r.g_value > 0.0 && r.g_value < VALIDITY_MARGIN);
        if r.g_prime_value < 0.0 {
            assert!(r.borderline);
        }
        assert!(!r.valid);
    }

    #[test]
    fn search_recovers_feasible_certificate() {
        let beta = beta_of(2, 0.81).unwrap();
        let c = search_certificate(beta, 0.62, 6, 801).unwrap().expect("certificate");
        assert!(c.t() >= 0.62);
        assert!(verify_certificate(&c).valid);
    }

    #[test]
    fn search_finds_nothing_beyond_closed_form() {
        // y(6) = 1/(1+√6) ≈ 0.29, so no certificate can reach 0.5
        assert_eq!(search_certificate(6.0, 0.5, 4, 401).unwrap(), None);
    }
}
