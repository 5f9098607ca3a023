//! Series with rigorous truncation bounds.
//!
//! With `u_0 = x` and `u_n = (u_{n-1} + i_n)/b` (so that
//! `u_n = x/bⁿ + i_1/bⁿ + ⋯ + i_n/b`):
//!
//! - `f(x) = Σ_{n≥0} λⁿ φ(bⁿx + θ_n)`
//! - `Y_{x,γ}(i) = 2π Σ_{n≥1} γⁿ sin(2π u_n)`
//! - `∂ₓY = 4π² Σ_{n≥1} (γ/b)ⁿ cos(2π u_n)`
//! - `∂_γY = 2π Σ_{n≥1} n γ^{n-1} sin(2π u_n)`
//! - `S(x, i) = Σ_{n≥1} γ^{n-1} ψ(u_n)`
//!
//! Truncation depth is the smallest `N` whose closed-form geometric tail is
//! at most the requested tolerance. Constant terms of `φ`/`ψ` are summed in
//! closed form and never contribute to the tail.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::{abs, floor, ldexp, powi, sin_cos, PI, TAU};
use crate::params::Params;
use crate::phi::PhiSpec;
use crate::word::DigitWord;

/// A value with an absolute bound on the omitted remainder.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    pub value: f64,
    pub tail_bound: f64,
    pub terms_used: usize,
}

// Hard cap on truncation depth; reached only for tolerances near the
// rounding floor with ratios close to 1.
const MAX_TERMS: usize = 100_000;

fn check_tol(abs_tol: f64) -> Result<()> {
    if abs_tol > 0.0 {
        Ok(())
    } else {
        Err(Error::NonPositiveTolerance(abs_tol))
    }
}

/// Smallest `n ≥ start` with `tail(n) ≤ tol`.
/// Smallest `n ≥ start` with `tail(n) ≤ tol`, capped at [`MAX_TERMS`].
/// `tail` must be nonincreasing.
fn min_terms(start: usize, tol: f64, tail: impl Fn(usize) -> f64) -> usize {
    if tail(start) <= tol {
        return start;
    }
    // tail(lo) > tol throughout; find hi with tail(hi) ≤ tol, then bisect
    let mut lo = start;
    let mut step = 1;
    let hi = loop {
        let cand = (lo + step).min(MAX_TERMS);
        if cand == MAX_TERMS || tail(cand) <= tol {
            break cand;
        }
        lo = cand;
        step *= 2;
    };
    let mut hi = hi;
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if tail(mid) <= tol {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// `φ(x) = cos(2πx)`-style evaluation of a [`PhiSpec`].
pub fn eval_phi(phi: &PhiSpec, x: f64) -> f64 {
    phi.eval(x)
}

pub fn eval_phi_prime(phi: &PhiSpec, x: f64) -> f64 {
    phi.eval_prime(x)
}

/// Orbit `t_n = bⁿ x mod 1`.
///
/// An `f64` is a dyadic rational `m/2^e`; for `e ≤ 96` the orbit is tracked
/// exactly as the integer `bⁿ m mod 2^e`, so every term is correctly rounded
/// regardless of `n`. Smaller inputs fall back to repeated floating-point
/// multiplication.
#[derive(Debug, Clone)]
pub struct FracOrbit {
    b: u32,
    state: OrbitState,
}

#[derive(Debug, Clone)]
enum OrbitState {
    Exact { num: u128, exp: u32 },
    Approx(f64),
}

impl FracOrbit {
    pub fn new(b: u32, x: f64) -> Self {
        let t = x - floor(x);
        let state = match dyadic_parts(t) {
            Some((num, exp)) if exp <= 96 => OrbitState::Exact {
                num: u128::from(num),
                exp,
            },
            _ => OrbitState::Approx(t),
        };
        Self { b, state }
    }

    /// Current point in `[0, 1)`.
    pub fn value(&self) -> f64 {
        match self.state {
            OrbitState::Exact { num, exp } => ldexp(num as f64, -(exp as i32)),
            OrbitState::Approx(t) => t,
        }
    }

    /// True once the orbit has landed exactly on 0, where it stays.
    pub fn is_zero(&self) -> bool {
        match self.state {
            OrbitState::Exact { num, .. } => num == 0,
            OrbitState::Approx(t) => t == 0.0,
        }
    }

    pub fn advance(&mut self) {
        match &mut self.state {
            OrbitState::Exact { num, exp } => {
                let mask = if *exp == 0 { 0 } else { (1u128 << *exp) - 1 };
                *num = (*num * u128::from(self.b)) & mask;
            }
            OrbitState::Approx(t) => {
                let y = *t * f64::from(self.b);
                *t = y - floor(y);
            }
        }
    }
}

/// `t = num / 2^exp` with `num` odd, for `t ∈ [0, 1)`.
fn dyadic_parts(t: f64) -> Option<(u64, u32)> {
    if t == 0.0 {
        return Some((0, 0));
    }
    let bits = t.to_bits();
    let biased = ((bits >> 52) & 0x7ff) as i32;
    let frac = bits & ((1u64 << 52) - 1);
    let (mut mant, mut e2) = if biased == 0 {
        (frac, -1074)
    } else {
        (frac | (1u64 << 52), biased - 1075)
    };
    let tz = mant.trailing_zeros();
    mant >>= tz;
    e2 += tz as i32;
    if e2 >= 0 {
        // t < 1 with a non-negative binary exponent is impossible
        return None;
    }
    Some((mant, (-e2) as u32))
}

/// `f^φ_{λ,b}(x) = Σ λⁿ φ(bⁿx + θ_n)`; missing phases are 0.
pub fn eval_f(
    p: &Params,
    phi: &PhiSpec,
    x: f64,
    phases: Option<&[f64]>,
    abs_tol: f64,
) -> Result<SeriesValue> {
    eval_f_raw(p.b(), p.lambda(), phi, x, phases, abs_tol)
}

/// [`eval_f`] for any `λ ∈ (0, 1)`, including the degenerate range
/// `λ ≤ 1/b` where the graph is rectifiable and [`Params`] does not apply.
pub fn eval_f_raw(
    b: u32,
    lambda: f64,
    phi: &PhiSpec,
    x: f64,
    phases: Option<&[f64]>,
    abs_tol: f64,
) -> Result<SeriesValue> {
    check_tol(abs_tol)?;
    if b < 2 {
        return Err(Error::InvalidBase(b));
    }
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::LambdaOutOfRange { lambda, lo: 0.0, hi: 1.0 });
    }
    let sup = phi.periodic_sup_bound();
    let geometric_tail = |n: usize| sup * powi(lambda, n as i32) / (1.0 - lambda);
    let n_terms = if sup == 0.0 {
        0
    } else {
        min_terms(0, abs_tol, geometric_tail)
    };
    let phases = phases.unwrap_or(&[]);

    let mut orbit = FracOrbit::new(b, x);
    let mut acc = 0.0;
    let mut weight = 1.0;
    let mut n = 0;
    while n < n_terms {
        if orbit.is_zero() && phases.len() <= n {
            // every remaining term is λⁿ φ(0): sum the whole tail exactly
            acc += weight * phi.eval_periodic(0.0) / (1.0 - lambda);
            return Ok(SeriesValue {
                value: acc + phi.constant / (1.0 - lambda),
                tail_bound: 0.0,
                terms_used: n,
            });
        }
        let theta = phases.get(n).copied().unwrap_or(0.0);
        let t = orbit.value() + theta;
        acc += weight * phi.eval_periodic(t - floor(t));
        weight *= lambda;
        orbit.advance();
        n += 1;
    }
    Ok(SeriesValue {
        value: acc + phi.constant / (1.0 - lambda),
        tail_bound: geometric_tail(n_terms),
        terms_used: n_terms,
    })
}

/// `2π γ^{N+1} / (1−γ)`.
pub fn y_tail(gamma: f64, n_terms: usize) -> f64 {
    TAU * powi(gamma, n_terms as i32 + 1) / (1.0 - gamma)
}

/// `4π² (γ/b)^{N+1} / (1−γ/b)`.
pub fn y_dx_tail(gamma: f64, b: u32, n_terms: usize) -> f64 {
    let r = gamma / f64::from(b);
    4.0 * PI * PI * powi(r, n_terms as i32 + 1) / (1.0 - r)
}

/// `2π Σ_{n>N} n γ^{n-1} = 2π γ^N ((N+1) − Nγ) / (1−γ)²`.
pub fn y_dgamma_tail(gamma: f64, n_terms: usize) -> f64 {
    let n = n_terms as f64;
    TAU * powi(gamma, n_terms as i32) * ((n + 1.0) - n * gamma) / ((1.0 - gamma) * (1.0 - gamma))
}

/// Points `u_1, …, u_N` for the given digits.
pub fn stable_points(b: u32, x: f64, digits: &[u32]) -> Vec<f64> {
    let bf = f64::from(b);
    let mut u = x;
    digits
        .iter()
        .map(|&d| {
            u = (u + f64::from(d)) / bf;
            u
        })
        .collect()
}

/// `v_k̄(x) = x/bⁿ + k_1/bⁿ + ⋯ + k_n/b` for a finite word `k̄`.
pub fn prefix_point(b: u32, x: f64, prefix: &[u32]) -> f64 {
    stable_points(b, x, prefix).last().copied().unwrap_or(x)
}

/// `Y`, `∂ₓY` and `∂_γY` summed over exactly `digits.len()` terms.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SlopeJet {
    pub y: f64,
    pub dx: f64,
    pub dgamma: f64,
}

/// Partial sums of the three stable-slope series over the given digits.
pub fn slope_jet(b: u32, gamma: f64, x: f64, digits: &[u32]) -> SlopeJet {
    let bf = f64::from(b);
    let r = gamma / bf;
    let mut u = x;
    // gpow = γ^{n-1} and rpow = (γ/b)^n at term n
    let (mut gpow, mut rpow) = (1.0, 1.0);
    let mut jet = SlopeJet::default();
    for (k, &d) in digits.iter().enumerate() {
        u = (u + f64::from(d)) / bf;
        rpow *= r;
        let (s, c) = sin_cos(TAU * u);
        jet.dgamma += (k + 1) as f64 * gpow * s;
        gpow *= gamma;
        jet.y += gpow * s;
        jet.dx += rpow * c;
    }
    jet.y *= TAU;
    jet.dx *= 4.0 * PI * PI;
    jet.dgamma *= TAU;
    jet
}

/// `Y_{x,γ}(i) = 2π Σ γⁿ sin(2π u_n)`; the stable direction is `(1, Y)`.
pub fn eval_y(p: &Params, word: &DigitWord, x: f64, abs_tol: f64) -> Result<SeriesValue> {
    check_tol(abs_tol)?;
    let gamma = p.gamma();
    let n = min_terms(0, abs_tol, |n| y_tail(gamma, n));
    let digits = word.take(n, p.b());
    Ok(SeriesValue {
        value: slope_jet(p.b(), gamma, x, &digits).y,
        tail_bound: y_tail(gamma, n),
        terms_used: n,
    })
}

/// `∂Y/∂x = 4π² Σ (γ/b)ⁿ cos(2π u_n)`.
pub fn eval_y_dx(p: &Params, word: &DigitWord, x: f64, abs_tol: f64) -> Result<SeriesValue> {
    check_tol(abs_tol)?;
    let (b, gamma) = (p.b(), p.gamma());
    let n = min_terms(0, abs_tol, |n| y_dx_tail(gamma, b, n));
    let digits = word.take(n, b);
    Ok(SeriesValue {
        value: slope_jet(b, gamma, x, &digits).dx,
        tail_bound: y_dx_tail(gamma, b, n),
        terms_used: n,
    })
}

/// `∂Y/∂γ = 2π Σ n γ^{n-1} sin(2π u_n)`.
pub fn eval_y_dgamma(p: &Params, word: &DigitWord, x: f64, abs_tol: f64) -> Result<SeriesValue> {
    check_tol(abs_tol)?;
    let gamma = p.gamma();
    let n = min_terms(0, abs_tol, |n| y_dgamma_tail(gamma, n));
    let digits = word.take(n, p.b());
    Ok(SeriesValue {
        value: slope_jet(p.b(), gamma, x, &digits).dgamma,
        tail_bound: y_dgamma_tail(gamma, n),
        terms_used: n,
    })
}

/// `S(x, i) = Σ γ^{n-1} ψ(u_n)`.
pub fn eval_s(
    p: &Params,
    psi: &PhiSpec,
    word: &DigitWord,
    x: f64,
    abs_tol: f64,
) -> Result<SeriesValue> {
    check_tol(abs_tol)?;
    let gamma = p.gamma();
    let sup = psi.periodic_sup_bound();
    let tail = |n: usize| sup * powi(gamma, n as i32) / (1.0 - gamma);
    let n = if sup == 0.0 { 0 } else { min_terms(0, abs_tol, tail) };
    let digits = word.take(n, p.b());
    Ok(SeriesValue {
        value: s_partial(p.b(), gamma, psi, x, &digits),
        tail_bound: tail(n),
        terms_used: n,
    })
}

/// `S` summed over exactly `digits.len()` non-constant terms, plus the
/// constant part `c/(1−γ)` in closed form.
pub fn s_partial(b: u32, gamma: f64, psi: &PhiSpec, x: f64, digits: &[u32]) -> f64 {
    let bf = f64::from(b);
    let mut u = x;
    let mut weight = 1.0;
    let mut acc = 0.0;
    for &d in digits {
        u = (u + f64::from(d)) / bf;
        acc += weight * psi.eval_periodic(u - floor(u));
        weight *= gamma;
    }
    acc + psi.constant / (1.0 - gamma)
}

/// `|a − b| ≤ slack`, with a small relative allowance for rounding.
pub fn within(a: f64, b: f64, slack: f64) -> bool {
    abs(a - b) <= slack + 1e-13 * (1.0 + abs(a) + abs(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn p(b: u32, lambda: f64) -> Params {
        Params::new(b, lambda).unwrap()
    }

    #[test]
    fn f_trivial_values() {
        let phi = PhiSpec::weierstrass();
        let v = eval_f_raw(2, 0.5, &phi, 0.0, None, 1e-12).unwrap();
        assert!((v.value - 2.0).abs() <= v.tail_bound + 1e-15);
        let v = eval_f_raw(2, 0.5, &phi, 0.5, None, 1e-12).unwrap();
        assert!(v.value.abs() <= v.tail_bound + 1e-15, "{v:?}");
        assert!(eval_f_raw(2, 1.0, &phi, 0.5, None, 1e-12).is_err());
    }

    #[test]
    fn f_rejects_bad_tolerance() {
        let phi = PhiSpec::weierstrass();
        assert!(eval_f(&p(2, 0.7), &phi, 0.1, None, 0.0).is_err());
        assert!(eval_f(&p(2, 0.7), &phi, 0.1, None, -1.0).is_err());
        let w = DigitWord::zeros();
        assert!(eval_y(&p(2, 0.7), &w, 0.1, 0.0).is_err());
        assert!(eval_y_dx(&p(2, 0.7), &w, 0.1, 0.0).is_err());
        assert!(eval_y_dgamma(&p(2, 0.7), &w, 0.1, 0.0).is_err());
        assert!(eval_s(&p(2, 0.7), &phi, &w, 0.1, 0.0).is_err());
    }

    #[test]
    fn f_terms_minimal() {
        let phi = PhiSpec::weierstrass();
        let params = p(3, 0.7);
        let tol = 1e-8;
        let v = eval_f(&params, &phi, 0.31, None, tol).unwrap();
        assert!(v.tail_bound <= tol);
        let prev = powi(0.7, v.terms_used as i32 - 1) / 0.3;
        assert!(prev > tol);
    }

    #[test]
    fn frac_orbit_exact_for_dyadics() {
        let mut o = FracOrbit::new(3, 0.375);
        let mut expect = 3u64; // 0.375 = 3/8
        for _ in 0..20 {
            assert_eq!(o.value(), (expect % 8) as f64 / 8.0);
            expect = (expect % 8) * 3;
            o.advance();
        }
        let mut o = FracOrbit::new(2, 0.8125);
        for _ in 0..4 {
            o.advance();
        }
        assert!(o.is_zero());
    }

    #[test]
    fn frac_orbit_handles_negative_and_integer() {
        let o = FracOrbit::new(2, -0.25);
        assert_eq!(o.value(), 0.75);
        assert!(FracOrbit::new(5, 3.0).is_zero());
    }

    #[test]
    fn y_zero_word_at_zero() {
        let v = eval_y(&p(3, 0.6), &DigitWord::zeros(), 0.0, 1e-12).unwrap();
        assert_eq!(v.value, 0.0);
        let v = eval_y_dgamma(&p(3, 0.6), &DigitWord::zeros(), 0.0, 1e-12).unwrap();
        assert_eq!(v.value, 0.0);
    }

    #[test]
    fn y_dx_zero_word_at_zero() {
        let params = p(3, 0.6);
        let r = params.gamma() / 3.0;
        let v = eval_y_dx(&params, &DigitWord::zeros(), 0.0, 1e-12).unwrap();
        let expect = 4.0 * PI * PI * r / (1.0 - r);
        assert!(within(v.value, expect, v.tail_bound));
    }

    #[test]
    fn s_constant_is_closed_form() {
        let params = p(2, 0.8);
        let w = DigitWord::random(4);
        let v = eval_s(&params, &PhiSpec::constant(1.5), &w, 0.3, 1e-12).unwrap();
        assert_eq!(v.value, 1.5 / (1.0 - params.gamma()));
        assert_eq!(v.tail_bound, 0.0);
    }

    #[test]
    fn y_equals_minus_gamma_s() {
        let params = p(2, 0.75);
        let psi = PhiSpec::weierstrass_derivative();
        let w = DigitWord::new(vec![1, 0, 1, 1], crate::word::Tail::Random(3), 2).unwrap();
        let y = eval_y(&params, &w, 0.42, 1e-12).unwrap();
        let s = eval_s(&params, &psi, &w, 0.42, 1e-12).unwrap();
        let g = params.gamma();
        assert!(within(y.value, -g * s.value, y.tail_bound + g * s.tail_bound));
    }

    #[test]
    fn jet_matches_individual_series() {
        let params = p(4, 0.5);
        let w = DigitWord::random(11);
        let digits = w.take(60, 4);
        let jet = slope_jet(4, params.gamma(), 0.2, &digits);
        let y = eval_y(&params, &w, 0.2, 1e-14).unwrap();
        let dg = eval_y_dgamma(&params, &w, 0.2, 1e-13).unwrap();
        assert!(within(jet.y, y.value, y.tail_bound + y_tail(params.gamma(), 60)));
        assert!(within(jet.dgamma, dg.value, dg.tail_bound + y_dgamma_tail(params.gamma(), 60)));
    }

    #[test]
    fn prefix_point_matches_formula() {
        let v = prefix_point(3, 0.4, &[2, 1, 0]);
        let direct = 0.4 / 27.0 + 2.0 / 27.0 + 1.0 / 9.0 + 0.0 / 3.0;
        assert!((v - direct).abs() < 1e-15);
        assert_eq!(prefix_point(3, 0.4, &[]), 0.4);
    }
}
