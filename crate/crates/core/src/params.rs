use crate::error::{Error, Result};
use crate::math::ln;

/// The pair `(b, λ)` with the derived contraction `γ = 1/(bλ)` and the
/// self-affinity exponent `D = 2 + ln λ / ln b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Params {
    b: u32,
    lambda: f64,
    gamma: f64,
    dim: f64,
}

impl Params {
    pub fn new(b: u32, lambda: f64) -> Result<Self> {
        if b < 2 {
            return Err(Error::InvalidBase(b));
        }
        let lo = 1.0 / b as f64;
        if !(lambda > lo && lambda < 1.0) {
            return Err(Error::LambdaOutOfRange { lambda, lo, hi: 1.0 });
        }
        Ok(Self {
            b,
            lambda,
            gamma: 1.0 / (b as f64 * lambda),
            dim: 2.0 + ln(lambda) / ln(b as f64),
        })
    }

    /// Builds the parameters from `γ` instead of `λ`; `γ` is stored as given.
    pub fn from_gamma(b: u32, gamma: f64) -> Result<Self> {
        if b < 2 {
            return Err(Error::InvalidBase(b));
        }
        let lo = 1.0 / b as f64;
        if !(gamma > lo && gamma < 1.0) {
            return Err(Error::GammaOutOfRange { gamma, lo, hi: 1.0 });
        }
        let lambda = 1.0 / (b as f64 * gamma);
        Ok(Self {
            b,
            lambda,
            gamma,
            dim: 2.0 + ln(lambda) / ln(b as f64),
        })
    }

    pub fn b(&self) -> u32 {
        self.b
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// `D = 2 + ln λ / ln b`.
    pub fn dim(&self) -> f64 {
        self.dim
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_out_of_range() {
        assert!(Params::new(1, 0.9).is_err());
        assert!(Params::new(2, 0.5).is_err());
        assert!(Params::new(2, 1.0).is_err());
        assert!(Params::new(3, 0.2).is_err());
        assert!(Params::from_gamma(2, 0.5).is_err());
        assert!(Params::from_gamma(2, 1.0).is_err());
    }

    #[test]
    fn derived_quantities() {
        for &(b, lambda) in &[(2u32, 0.51), (2, 0.9), (3, 0.7), (7, 0.15), (10, 0.99)] {
            let p = Params::new(b, lambda).unwrap();
            assert!((p.gamma() * b as f64 * lambda - 1.0).abs() < 1e-15);
            assert!(p.gamma() > 1.0 / b as f64 && p.gamma() < 1.0);
            assert!(p.dim() > 1.0 && p.dim() < 2.0);
        }
        let p = Params::new(4, 0.5).unwrap();
        assert_eq!(p.dim(), 1.5);
    }

    #[test]
    fn gamma_round_trip() {
        let p = Params::from_gamma(3, 0.45).unwrap();
        let q = Params::new(3, p.lambda()).unwrap();
        assert!((p.gamma() - q.gamma()).abs() < 1e-15);
    }
}
