//! Transversality of the stable-slope functions `x ↦ Y_{x,γ}(i)`.
//!
//! - [`analytic_transversality_check`]: the closed-form criterion `h_b(λ) < 0`.
//! - [`case_bounds_b2`]: the four second-digit upper estimates for `b = 2`.
//! - [`empirical_delta`], [`two_var_delta`]: sampled estimates of the best
//!   separation constant `δ` over word pairs with different first digits.
//! - [`tsujii_e_estimate`]: brute-force count of `(ε, δ)`-tangent cylinders.
//!
//! Sampled estimates truncate every series at `depth` terms and subtract
//! (or, for tangency, add) the rigorous truncation slack, so results are
//! conservative for the sampled representatives. Words and grid points that
//! were not sampled are not covered.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::{abs, SQRT_2};
use crate::par::map_indexed;
use crate::params::Params;
use crate::rng::CounterStream;
use crate::series::{slope_jet, y_dgamma_tail, y_dx_tail, y_tail, SlopeJet};
use crate::star::published_certificates;
use crate::thresholds::{self, h};
use crate::word::DigitWord;

/// Largest `b^{2n} · b^m · grid · reps²` accepted by [`tsujii_e_estimate`].
pub const TANGENCY_BUDGET: u128 = 2_000_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticVerdict {
    /// `h_b(λ) < 0`, i.e. `λ > λ_b`.
    pub holds: bool,
    /// `−h_b(λ)`.
    pub margin: f64,
}

pub fn analytic_transversality_check(b: u32, lambda: f64) -> Result<AnalyticVerdict> {
    let hv = h(b, lambda)?;
    Ok(AnalyticVerdict {
        holds: hv < 0.0,
        margin: -hv,
    })
}

/// Upper estimates for the `b = 2` auxiliary function in the cases
/// `(i₂, j₂) = (0,0), (1,1), (1,0), (0,1)`, in that order. The last one is
/// the largest and equals `h_gamma_form(2, γ)`.
pub fn case_bounds_b2(gamma: f64) -> Result<[f64; 4]> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::GammaOutOfRange { gamma, lo: 0.0, hi: 1.0 });
    }
    let g = gamma;
    let g2 = g * g;
    let common = g2 * g2 / ((1.0 - g) * (1.0 - g)) + g2 * g2 / (4.0 * (2.0 - g) * (2.0 - g));
    let same = common - g2 / 8.0 + g / 2.0 - 1.0;
    Ok([
        same,
        same,
        common - 5.0 * g2 / 16.0 - g / 2.0 - 1.0,
        common - g2 / 2.0 + SQRT_2 * g - 1.0,
    ])
}

/// Sampling plan shared by the δ estimators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaConfig {
    /// Number of equally spaced `x` in `[0, 1]`.
    pub x_grid: usize,
    /// Digits per word and series terms per evaluation.
    pub depth: usize,
    /// Number of probe words (at least `2b`).
    pub words: usize,
    /// Number of best grid candidates improved by local descent
    /// ([`empirical_delta`] only; 0 disables).
    pub refine: usize,
    pub seed: u64,
}

impl Default for DeltaConfig {
    fn default() -> Self {
        Self {
            x_grid: 400,
            depth: 40,
            words: 256,
            refine: 16,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeltaEstimate {
    pub delta_hat: f64,
    pub argmin_x: f64,
    /// Set by [`two_var_delta`].
    pub argmin_gamma: Option<f64>,
    pub argmin_pair: (DigitWord, DigitWord),
    /// Slack subtracted from the derivative-free separation (`2·tail(Y)`).
    pub tail_slack: f64,
    pub words: usize,
}

/// Probe words: every prefix of length `e` (the longest with `2bᵉ ≤ words`),
/// each continued once by zeros and then by random digits up to `depth`.
fn probe_words(b: u32, depth: usize, words: usize, seed: u64) -> Vec<Vec<u32>> {
    let depth = depth.max(1);
    let mut e = 1;
    while e < depth && 2 * (b as usize).saturating_pow(e as u32 + 1) <= words {
        e += 1;
    }
    let count = (b as usize).pow(e as u32);
    let per = (words / count).max(2);
    let mut out = Vec::with_capacity(count * per);
    for q in 0..count {
        let mut prefix = Vec::with_capacity(depth);
        let mut rest = q;
        for _ in 0..e {
            prefix.push((rest % b as usize) as u32);
            rest /= b as usize;
        }
        prefix.reverse();
        let mut zero = prefix.clone();
        zero.resize(depth, 0);
        out.push(zero);
        for r in 1..per {
            let mut stream = CounterStream::new(seed, (q * per + r) as u64);
            let mut w = prefix.clone();
            while w.len() < depth {
                w.push(stream.next_digit(b));
            }
            out.push(w);
        }
    }
    out
}

fn x_points(n: usize) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::InvalidArgument("x grid needs at least two points"));
    }
    Ok((0..n).map(|k| k as f64 / (n - 1) as f64).collect())
}

// (value, word a, word c, x index, gamma index) with a < c; ties go to the
// lowest pair, then the lowest x, then the lowest gamma
type Candidate = (f64, usize, usize, usize, usize);

const NO_CANDIDATE: Candidate = (f64::INFINITY, usize::MAX, usize::MAX, usize::MAX, usize::MAX);

fn better(a: Candidate, b: Candidate) -> Candidate {
    let key = |c: Candidate| (c.1, c.2, c.3, c.4);
    if a.0 < b.0 || (a.0 == b.0 && key(a) < key(b)) {
        a
    } else {
        b
    }
}

/// Smallest `value(a, c)` over pairs with different first digits. Pairs are
/// swept in order of `Y`; `value ≥ |ΔY| − ty` bounds the sweep.
fn closest_pair(
    js: &[SlopeJet],
    words: &[Vec<u32>],
    ty: f64,
    value: impl Fn(&SlopeJet, &SlopeJet) -> f64,
    xi: usize,
    gi: usize,
) -> Candidate {
    let mut order: Vec<usize> = (0..js.len()).collect();
    order.sort_by(|&a, &c| js[a].y.total_cmp(&js[c].y).then(a.cmp(&c)));
    let mut best = NO_CANDIDATE;
    for (p, &i) in order.iter().enumerate() {
        for &j in &order[p + 1..] {
            if js[j].y - js[i].y - ty > best.0 {
                break;
            }
            if words[i][0] == words[j][0] {
                continue;
            }
            let v = value(&js[i], &js[j]);
            best = better((v, i.min(j), i.max(j), xi, gi), best);
        }
    }
    best
}

fn jets(b: u32, gamma: f64, x: f64, words: &[Vec<u32>]) -> Vec<SlopeJet> {
    words.iter().map(|w| slope_jet(b, gamma, x, w)).collect()
}

fn one_var_value(ty: f64, tx: f64) -> impl Fn(&SlopeJet, &SlopeJet) -> f64 {
    move |a, c| (abs(a.y - c.y) - ty).max(abs(a.dx - c.dx) - tx)
}

/// Greedy descent from `(x, wa, wc)`: single-digit changes (keeping the
/// first digits different) and `x` steps halving down to `1e-9`.
fn descend(
    b: u32,
    gamma: f64,
    value: &impl Fn(&SlopeJet, &SlopeJet) -> f64,
    mut x: f64,
    mut wa: Vec<u32>,
    mut wc: Vec<u32>,
    x_step: f64,
) -> (f64, f64, Vec<u32>, Vec<u32>) {
    let eval = |x: f64, wa: &[u32], wc: &[u32]| value(&slope_jet(b, gamma, x, wa), &slope_jet(b, gamma, x, wc));
    let mut best = eval(x, &wa, &wc);
    for _ in 0..64 {
        let mut improved = false;
        for k in 0..wa.len() {
            for side in 0..2 {
                for d in 0..b {
                    let (w, other) = if side == 0 { (&mut wa, &wc) } else { (&mut wc, &wa) };
                    if w[k] == d || (k == 0 && other[0] == d) {
                        continue;
                    }
                    let old = w[k];
                    w[k] = d;
                    let v = eval(x, &wa, &wc);
                    if v < best {
                        best = v;
                        improved = true;
                    } else if side == 0 {
                        wa[k] = old;
                    } else {
                        wc[k] = old;
                    }
                }
            }
        }
        let mut step = x_step;
        while step > 1e-9 {
            let mut moved = false;
            for s in [-step, step] {
                let nx = (x + s).clamp(0.0, 1.0);
                let v = eval(nx, &wa, &wc);
                if v < best {
                    best = v;
                    x = nx;
                    moved = true;
                    improved = true;
                }
            }
            if !moved {
                step *= 0.5;
            }
        }
        if !improved {
            break;
        }
    }
    (best, x, wa, wc)
}

/// Estimate of `δ = inf max(|ΔY| − 2·tail(Y), |Δ∂ₓY| − 2·tail(∂ₓY))` over
/// word pairs with `i₁ ≠ j₁` and `x ∈ [0, 1]`, clamped at 0.
///
/// The exact minimum over probe words × `x` grid is taken first; the
/// `refine` best grid candidates are then improved by greedy descent over
/// single digits and `x`. The result is the smallest value found, so it is
/// an upper estimate of the infimum.
pub fn empirical_delta(b: u32, gamma: f64, cfg: &DeltaConfig) -> Result<DeltaEstimate> {
    let p = Params::from_gamma(b, gamma)?;
    let gamma = p.gamma();
    let xs = x_points(cfg.x_grid)?;
    let words = probe_words(b, cfg.depth, cfg.words, cfg.seed);
    let ty = 2.0 * y_tail(gamma, cfg.depth);
    let tx = 2.0 * y_dx_tail(gamma, b, cfg.depth);
    let value = one_var_value(ty, tx);

    let mut per_x = map_indexed(xs.len(), |xi| {
        closest_pair(&jets(b, gamma, xs[xi], &words), &words, ty, &value, xi, 0)
    });
    per_x.sort_by(|a, c| a.0.total_cmp(&c.0).then((a.1, a.2, a.3).cmp(&(c.1, c.2, c.3))));
    let grid_best = per_x[0];
    let mut best = (
        grid_best.0,
        xs[grid_best.3],
        words[grid_best.1].clone(),
        words[grid_best.2].clone(),
    );
    let starts: Vec<Candidate> = per_x.into_iter().take(cfg.refine).collect();
    let x_step = 1.0 / (xs.len() - 1) as f64;
    let refined = map_indexed(starts.len(), |k| {
        let c = starts[k];
        descend(b, gamma, &value, xs[c.3], words[c.1].clone(), words[c.2].clone(), x_step)
    });
    for r in refined {
        if r.0 < best.0 {
            best = r;
        }
    }
    Ok(DeltaEstimate {
        delta_hat: best.0.max(0.0),
        argmin_x: best.1,
        argmin_gamma: None,
        argmin_pair: (DigitWord::finite(&best.2, b)?, DigitWord::finite(&best.3, b)?),
        tail_slack: ty,
        words: words.len(),
    })
}

/// Two-variable version over `(x, γ)` with `γ` in
/// `(1/b + ε, γ̃_b − ε)`, where `γ̃_b = 1/(b λ̃⁺)` uses the certified upper
/// bound `λ̃⁺ ≥ λ̃_b` (a conservative sub-interval).
///
/// `γ` runs over the lattice `1/b + (γ̃_b − 1/b)·j/(gamma_grid + 1)`,
/// restricted to the interval, so lattices for different `ε` are nested.
/// The value per sample is `max(|ΔY| − slack, |Δ∂ₓY| + |Δ∂_γY| − slack')`.
/// No descent is applied, so the result is an exact minimum over the grid
/// and the probe words.
pub fn two_var_delta(
    b: u32,
    eps_margin: f64,
    gamma_grid: usize,
    cfg: &DeltaConfig,
) -> Result<DeltaEstimate> {
    if !(eps_margin > 0.0) {
        return Err(Error::InvalidArgument("eps_margin must be positive"));
    }
    let bound = thresholds::solve_tilde_lambda_b(b, thresholds::DEFAULT_TOL, &published_certificates())?;
    let bf = f64::from(b);
    let gamma_tilde = 1.0 / (bf * bound.upper);
    let (lo, hi) = (1.0 / bf + eps_margin, gamma_tilde - eps_margin);
    let gammas: Vec<f64> = (1..=gamma_grid)
        .map(|j| 1.0 / bf + (gamma_tilde - 1.0 / bf) * j as f64 / (gamma_grid + 1) as f64)
        .filter(|&g| g > lo && g < hi)
        .collect();
    if gammas.is_empty() {
        return Err(Error::EmptyGammaInterval { lo, hi });
    }
    let xs = x_points(cfg.x_grid)?;
    let words = probe_words(b, cfg.depth, cfg.words, cfg.seed);
    let nx = xs.len();

    let per_cell = map_indexed(gammas.len() * nx, |cell| {
        let (gi, xi) = (cell / nx, cell % nx);
        let g = gammas[gi];
        let ty = 2.0 * y_tail(g, cfg.depth);
        let td = 2.0 * (y_dx_tail(g, b, cfg.depth) + y_dgamma_tail(g, cfg.depth));
        let value = move |a: &SlopeJet, c: &SlopeJet| {
            (abs(a.y - c.y) - ty).max(abs(a.dx - c.dx) + abs(a.dgamma - c.dgamma) - td)
        };
        closest_pair(&jets(b, g, xs[xi], &words), &words, ty, value, xi, gi)
    });
    let best = per_cell.into_iter().fold(NO_CANDIDATE, better);
    Ok(DeltaEstimate {
        delta_hat: best.0.max(0.0),
        argmin_x: xs[best.3],
        argmin_gamma: Some(gammas[best.4]),
        argmin_pair: (DigitWord::finite(&words[best.1], b)?, DigitWord::finite(&words[best.2], b)?),
        tail_slack: 2.0 * y_tail(gammas[best.4], cfg.depth),
        words: words.len(),
    })
}

/// Query for [`tsujii_e_estimate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangencyQuery {
    /// Cylinder length.
    pub n: usize,
    /// Intervals `I_{m,k} = [(k−1)/bᵐ, k/bᵐ]`.
    pub m: usize,
    pub eps: f64,
    pub delta: f64,
    /// Digits per representative and series terms per evaluation.
    pub depth: usize,
    pub grid_per_interval: usize,
    /// Random continuations per cylinder, in addition to the zero tail.
    pub random_tails: usize,
}

impl TangencyQuery {
    pub fn new(n: usize, m: usize, eps: f64, delta: f64) -> Self {
        Self {
            n,
            m,
            eps,
            delta,
            depth: 30,
            grid_per_interval: 200,
            random_tails: 2,
        }
    }
}

/// Estimate of `e(n, m; ε, δ)` for `S(·, i) = −Y_{·,γ}(i)/γ` (the sum with
/// `ψ = −2π sin 2πx`).
///
/// For every interval `I_{m,k}` and cylinder pair, the cylinders count as
/// tangent if some pair of representatives satisfies `|ΔS| ≤ ε + slack` and
/// `|ΔS'| ≤ δ + slack'` at some grid point. The result is the maximum over
/// `k` and `i` of the number of tangent `j`; the diagonal `j = i` always
/// counts.
pub fn tsujii_e_estimate(p: &Params, q: &TangencyQuery, seed: u64) -> Result<usize> {
    if q.n == 0 || q.m == 0 || q.grid_per_interval < 2 {
        return Err(Error::InvalidArgument("n, m >= 1 and grid_per_interval >= 2 required"));
    }
    if !(q.eps > 0.0 && q.delta > 0.0) {
        return Err(Error::InvalidArgument("eps and delta must be positive"));
    }
    let b = p.b();
    let gamma = p.gamma();
    let depth = q.depth.max(q.n);
    let reps_per = 1 + q.random_tails;
    let big_b = u128::from(b);
    let cylinders = big_b.checked_pow(q.n as u32);
    let intervals = big_b.checked_pow(q.m as u32);
    let required = match (cylinders, intervals) {
        (Some(c), Some(i)) => (c * reps_per as u128)
            .checked_pow(2)
            .and_then(|w| w.checked_mul(i))
            .and_then(|w| w.checked_mul(q.grid_per_interval as u128))
            .unwrap_or(u128::MAX),
        _ => u128::MAX,
    };
    if required > TANGENCY_BUDGET {
        return Err(Error::BudgetExceeded {
            required,
            budget: TANGENCY_BUDGET,
        });
    }
    let cylinders = cylinders.unwrap_or(0) as usize;
    let intervals = intervals.unwrap_or(0) as usize;

    // representatives, grouped by cylinder
    let mut reps: Vec<Vec<u32>> = Vec::with_capacity(cylinders * reps_per);
    for c in 0..cylinders {
        let mut prefix = Vec::with_capacity(depth);
        let mut rest = c;
        for _ in 0..q.n {
            prefix.push((rest % b as usize) as u32);
            rest /= b as usize;
        }
        prefix.reverse();
        let mut zero = prefix.clone();
        zero.resize(depth, 0);
        reps.push(zero);
        for r in 0..q.random_tails {
            let mut stream = CounterStream::new(seed, (c * q.random_tails + r) as u64);
            let mut w = prefix.clone();
            while w.len() < depth {
                w.push(stream.next_digit(b));
            }
            reps.push(w);
        }
    }

    let eps_s = q.eps + 2.0 * y_tail(gamma, depth) / gamma;
    let delta_s = q.delta + 2.0 * y_dx_tail(gamma, b, depth) / gamma;
    let width = 1.0 / intervals as f64;
    let g = q.grid_per_interval;

    let per_interval = map_indexed(intervals, |k| {
        let mut tangent = alloc::vec![false; cylinders * cylinders];
        for s in 0..g {
            let x = (k as f64 + s as f64 / (g - 1) as f64) * width;
            let vals: Vec<(f64, f64)> = reps
                .iter()
                .map(|w| {
                    let j = slope_jet(b, gamma, x, w);
                    (-j.y / gamma, -j.dx / gamma)
                })
                .collect();
            for ci in 0..cylinders {
                for cj in ci..cylinders {
                    if tangent[ci * cylinders + cj] {
                        continue;
                    }
                    let hit = (0..reps_per).any(|ri| {
                        let a = vals[ci * reps_per + ri];
                        (0..reps_per).any(|rj| {
                            let c = vals[cj * reps_per + rj];
                            abs(a.0 - c.0) <= eps_s && abs(a.1 - c.1) <= delta_s
                        })
                    });
                    if hit {
                        tangent[ci * cylinders + cj] = true;
                        tangent[cj * cylinders + ci] = true;
                    }
                }
            }
        }
        (0..cylinders)
            .map(|ci| tangent[ci * cylinders..(ci + 1) * cylinders].iter().filter(|&&t| t).count())
            .max()
            .unwrap_or(0)
    });
    Ok(per_interval.into_iter().max().unwrap_or(0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn analytic_examples() {
        assert!(analytic_transversality_check(2, 0.9352).unwrap().holds);
        assert!(!analytic_transversality_check(2, 0.9).unwrap().holds);
        let v = analytic_transversality_check(3, 0.7269).unwrap();
        assert!(v.holds && v.margin > 0.0);
        assert!(analytic_transversality_check(3, 0.3).is_err());
    }

    #[test]
    fn case_bounds_structure() {
        for i in 1..100 {
            let g = i as f64 / 100.0;
            let c = case_bounds_b2(g).unwrap();
            assert_eq!(c[0], c[1]);
            assert!(c[2] < c[3]);
            let max = c.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            assert_eq!(max, c[3]);
        }
        assert!(case_bounds_b2(0.0).is_err());
        assert!(case_bounds_b2(1.0).is_err());
    }

    #[test]
    fn probe_words_shape() {
        let ws = probe_words(3, 10, 60, 1);
        assert_eq!(ws.len(), 54);
        for w in &ws {
            assert_eq!(w.len(), 10);
            assert!(w.iter().all(|&d| d < 3));
        }
        assert!(ws.iter().any(|w| w[0] == 0) && ws.iter().any(|w| w[0] == 2));
        assert_eq!(probe_words(8, 40, 16, 0).len(), 16);
    }

    #[test]
    fn closest_pair_matches_brute_force() {
        let (b, g) = (3, 0.45);
        let ws = probe_words(b, 12, 60, 4);
        let (ty, tx) = (1e-3, 2e-3);
        let value = one_var_value(ty, tx);
        for x in [0.0, 0.37, 0.9] {
            let js = jets(b, g, x, &ws);
            let fast = closest_pair(&js, &ws, ty, &value, 0, 0);
            let mut slow = f64::INFINITY;
            for a in 0..ws.len() {
                for c in a + 1..ws.len() {
                    if ws[a][0] != ws[c][0] {
                        slow = slow.min(value(&js[a], &js[c]));
                    }
                }
            }
            assert_eq!(fast.0, slow);
        }
    }

    #[test]
    fn tsujii_budget_error() {
        let p = Params::new(2, 0.95).unwrap();
        let q = TangencyQuery::new(12, 12, 0.1, 0.1);
        assert!(matches!(
            tsujii_e_estimate(&p, &q, 0),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn tsujii_huge_thresholds_count_everything() {
        let p = Params::new(3, 0.8).unwrap();
        let mut q = TangencyQuery::new(2, 1, 1e6, 1e6);
        q.grid_per_interval = 5;
        assert_eq!(tsujii_e_estimate(&p, &q, 0).unwrap(), 9);
    }
}
