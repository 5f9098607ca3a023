use alloc::vec::Vec;

use crate::math::{abs, cos, floor, sin, TAU};

/// A Z-periodic function given as a finite trigonometric polynomial
///
/// `φ(x) = c + Σ a_k cos(2πkx) + Σ s_k sin(2πkx)`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PhiSpec {
    pub cosine: Vec<(u32, f64)>,
    pub sine: Vec<(u32, f64)>,
    pub constant: f64,
}

impl PhiSpec {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: f64) -> Self {
        Self {
            constant: c,
            ..Self::default()
        }
    }

    /// `cos(2πx)`, the classical Weierstrass profile.
    pub fn weierstrass() -> Self {
        Self {
            cosine: alloc::vec![(1, 1.0)],
            ..Self::default()
        }
    }

    /// `-2π sin(2πx)`, the derivative of [`PhiSpec::weierstrass`].
    pub fn weierstrass_derivative() -> Self {
        Self::weierstrass().derivative()
    }

    pub fn with_cosine(mut self, k: u32, a: f64) -> Self {
        self.cosine.push((k, a));
        self
    }

    pub fn with_sine(mut self, k: u32, a: f64) -> Self {
        self.sine.push((k, a));
        self
    }

    /// Adds `c` to the constant term.
    pub fn shifted(&self, c: f64) -> Self {
        let mut out = self.clone();
        out.constant += c;
        out
    }

    /// Term-wise derivative. Frequency-zero terms drop out along with the
    /// constant.
    pub fn derivative(&self) -> Self {
        let mut out = Self::default();
        for &(k, a) in &self.cosine {
            if k != 0 {
                out.sine.push((k, -TAU * k as f64 * a));
            }
        }
        for &(k, a) in &self.sine {
            if k != 0 {
                out.cosine.push((k, TAU * k as f64 * a));
            }
        }
        out
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.constant + self.eval_periodic(x - floor(x))
    }

    pub fn eval_prime(&self, x: f64) -> f64 {
        self.derivative().eval(x)
    }

    /// The non-constant part at `t`, which the caller has already reduced
    /// modulo 1.
    pub(crate) fn eval_periodic(&self, t: f64) -> f64 {
        let mut acc = 0.0;
        for &(k, a) in &self.cosine {
            acc += a * cos(TAU * k as f64 * t);
        }
        for &(k, a) in &self.sine {
            acc += a * sin(TAU * k as f64 * t);
        }
        acc
    }

    /// `Σ|a_k| + Σ|s_k|`, an upper bound for the sup norm of the
    /// non-constant part.
    pub fn periodic_sup_bound(&self) -> f64 {
        self.cosine
            .iter()
            .chain(self.sine.iter())
            .map(|&(_, a)| abs(a))
            .sum()
    }

    /// Upper bound for `sup |φ|`.
    pub fn sup_bound(&self) -> f64 {
        abs(self.constant) + self.periodic_sup_bound()
    }

    pub fn is_constant(&self) -> bool {
        self.periodic_sup_bound() == 0.0
    }
}
