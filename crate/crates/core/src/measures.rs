//! Samplers for the pushforward measures and estimators on their samples.
//!
//! - transversal measure `m_{x,γ}`: law of `Y_{x,γ}(i)` for uniform i.i.d.
//!   digits;
//! - SBR measure of `T(x, y) = (bx, γy + ψ(x))`: law of `(x, S(x, i))` for
//!   uniform `x` and digits;
//! - graph lift: law of `(x, f(x))` for uniform `x`.
//!
//! Sample `s` draws everything from counter stream `s` of the seed (see
//! [`crate::rng`]), so a sample set depends only on
//! `(params, seed, depth, count)`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fit::{least_squares, DimFit, MIN_SCALES};
use crate::math::{abs, ceil, floor, ln, sqrt, TAU};
use crate::par::map_indexed;
use crate::params::Params;
use crate::phi::PhiSpec;
use crate::rng::CounterStream;
use crate::series::{eval_f, s_partial, slope_jet, y_tail};

/// Smallest usable radius as a multiple of the sample's truncation bound.
pub const RESOLUTION_FACTOR: f64 = 10.0;

/// Tolerance for the graph values in [`sample_graph_lift`].
pub const GRAPH_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SampleKind {
    Transversal { x: f64 },
    Sbr,
    GraphLift,
    Synthetic,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Points {
    Scalar(Vec<f64>),
    Pairs(Vec<(f64, f64)>),
}

impl Points {
    pub fn len(&self) -> usize {
        match self {
            Points::Scalar(v) => v.len(),
            Points::Pairs(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The scalar values, or the second coordinates of pairs.
    pub fn values(&self) -> Vec<f64> {
        match self {
            Points::Scalar(v) => v.clone(),
            Points::Pairs(v) => v.iter().map(|p| p.1).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    pub points: Points,
    pub params: Option<Params>,
    pub seed: u64,
    pub depth: usize,
    pub kind: SampleKind,
    /// Absolute bound on the truncation error of every sampled value.
    pub tail_bound: f64,
}

impl SampleSet {
    /// Wraps externally generated points (no truncation error).
    pub fn synthetic(points: Points) -> Self {
        Self {
            points,
            params: None,
            seed: 0,
            depth: 0,
            kind: SampleKind::Synthetic,
            tail_bound: 0.0,
        }
    }
}

/// Depth with `2π γ^{depth+1}/(1−γ) < 10⁻⁹`.
pub fn default_depth(gamma: f64) -> usize {
    let d = ceil(ln(1e-9 * (1.0 - gamma) / TAU) / ln(gamma));
    (d.max(1.0)) as usize
}

fn check_count(count: usize) -> Result<()> {
    if count == 0 {
        Err(Error::InvalidArgument("sample count must be at least 1"))
    } else {
        Ok(())
    }
}

fn digits(stream: &mut CounterStream, b: u32, depth: usize) -> Vec<u32> {
    (0..depth).map(|_| stream.next_digit(b)).collect()
}

/// Draws from `m_{x,γ}`: `Y_{x,γ}(i)` truncated after `depth` digits.
pub fn sample_transversal(
    p: &Params,
    x: f64,
    count: usize,
    depth: usize,
    seed: u64,
) -> Result<SampleSet> {
    check_count(count)?;
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::InvalidArgument("x must lie in [0, 1]"));
    }
    let (b, gamma) = (p.b(), p.gamma());
    let values = map_indexed(count, |s| {
        let mut stream = CounterStream::new(seed, s as u64);
        slope_jet(b, gamma, x, &digits(&mut stream, b, depth)).y
    });
    Ok(SampleSet {
        points: Points::Scalar(values),
        params: Some(*p),
        seed,
        depth,
        kind: SampleKind::Transversal { x },
        tail_bound: y_tail(gamma, depth),
    })
}

/// Draws `(x, S(x, i))` from the SBR measure for `ψ`. Each stream's first
/// word gives `x`, the following words the digits, so two calls with the
/// same seed share digit streams whatever `ψ` is.
pub fn sample_sbr(
    p: &Params,
    psi: &PhiSpec,
    count: usize,
    depth: usize,
    seed: u64,
) -> Result<SampleSet> {
    check_count(count)?;
    let (b, gamma) = (p.b(), p.gamma());
    let pairs = map_indexed(count, |s| {
        let mut stream = CounterStream::new(seed, s as u64);
        let x = stream.next_unit();
        let d = digits(&mut stream, b, depth);
        (x, s_partial(b, gamma, psi, x, &d))
    });
    Ok(SampleSet {
        points: Points::Pairs(pairs),
        params: Some(*p),
        seed,
        depth,
        kind: SampleKind::Sbr,
        tail_bound: psi.periodic_sup_bound() * crate::math::powi(gamma, depth as i32) / (1.0 - gamma),
    })
}

/// Draws `(x, f(x))` with `x` uniform on `[0, 1)`.
pub fn sample_graph_lift(p: &Params, phi: &PhiSpec, count: usize, seed: u64) -> Result<SampleSet> {
    check_count(count)?;
    let evaluated = map_indexed(count, |s| {
        let x = CounterStream::new(seed, s as u64).next_unit();
        eval_f(p, phi, x, None, GRAPH_TOL).map(|v| (x, v.value, v.terms_used))
    });
    let mut pairs = Vec::with_capacity(count);
    let mut depth = 0;
    for e in evaluated {
        let (x, y, n) = e?;
        pairs.push((x, y));
        depth = depth.max(n);
    }
    Ok(SampleSet {
        points: Points::Pairs(pairs),
        params: Some(*p),
        seed,
        depth,
        kind: SampleKind::GraphLift,
        tail_bound: GRAPH_TOL,
    })
}

/// Mean and standard error of the mean.
pub fn mean_and_stderr(values: &[f64]) -> Result<(f64, f64)> {
    if values.is_empty() {
        return Err(Error::EmptySample);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() == 1 {
        return Ok((mean, 0.0));
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    Ok((mean, sqrt(var / n)))
}

fn sorted_distances_scalar(sorted: &[f64], center: f64, radii: &[f64]) -> Vec<usize> {
    radii
        .iter()
        .map(|&r| {
            let lo = sorted.partition_point(|&v| v < center - r);
            let hi = sorted.partition_point(|&v| v <= center + r);
            hi - lo
        })
        .collect()
}

fn counts_pairs(points: &[(f64, f64)], center: (f64, f64), radii: &[f64]) -> Vec<usize> {
    let mut d: Vec<f64> = points
        .iter()
        .map(|p| {
            let (dx, dy) = (p.0 - center.0, p.1 - center.1);
            dx * dx + dy * dy
        })
        .collect();
    d.sort_unstable_by(f64::total_cmp);
    radii.iter().map(|&r| d.partition_point(|&v| v <= r * r)).collect()
}

/// Local dimension from the slope of `log μ(B_r(c))` against `log r`,
/// averaged over `centers` sample points chosen at random.
///
/// The center itself is excluded from the mass. Centers with an empty ball
/// at some radius are skipped. `stderr` is the standard error of the mean
/// slope across centers.
pub fn local_dim_estimate(s: &SampleSet, radii: &[f64], centers: usize, seed: u64) -> Result<DimFit> {
    let n = s.points.len();
    if n < 2 {
        return Err(Error::EmptySample);
    }
    if radii.len() < MIN_SCALES {
        return Err(Error::TooFewLevels {
            needed: MIN_SCALES,
            got: radii.len(),
        });
    }
    if radii.windows(2).any(|w| !(w[1] < w[0])) || !(radii[radii.len() - 1] > 0.0) {
        return Err(Error::InvalidArgument("radii must be positive and strictly decreasing"));
    }
    let smallest = radii[radii.len() - 1];
    let resolution = RESOLUTION_FACTOR * s.tail_bound;
    if smallest < resolution {
        return Err(Error::RadiusBelowResolution {
            radius: smallest,
            resolution,
        });
    }
    if centers == 0 {
        return Err(Error::InvalidArgument("need at least one center"));
    }

    let mut pick = CounterStream::new(seed, u64::MAX);
    let chosen: Vec<usize> = (0..centers)
        .map(|_| ((u128::from(pick.next_u64()) * n as u128) >> 64) as usize)
        .collect();

    let sorted = match &s.points {
        Points::Scalar(v) => {
            let mut v = v.clone();
            v.sort_unstable_by(f64::total_cmp);
            Some(v)
        }
        Points::Pairs(_) => None,
    };
    let log_r: Vec<f64> = radii.iter().map(|&r| ln(r)).collect();
    let per_center = map_indexed(chosen.len(), |ci| {
        let idx = chosen[ci];
        let counts = match (&s.points, &sorted) {
            (Points::Scalar(v), Some(sorted)) => sorted_distances_scalar(sorted, v[idx], radii),
            (Points::Pairs(v), _) => counts_pairs(v, v[idx], radii),
            _ => unreachable!(),
        };
        let masses: Vec<f64> = counts
            .iter()
            .map(|&c| (c.saturating_sub(1)) as f64 / (n - 1) as f64)
            .collect();
        if masses.iter().any(|&m| m <= 0.0) {
            return None;
        }
        let logs: Vec<f64> = masses.iter().map(|&m| ln(m)).collect();
        least_squares(&log_r, &logs).ok().map(|f| (f.slope, f.intercept, masses))
    });

    let usable: Vec<(f64, f64, Vec<f64>)> = per_center.into_iter().flatten().collect();
    if usable.is_empty() {
        return Err(Error::InvalidArgument("no center has mass at every radius"));
    }
    let slopes: Vec<f64> = usable.iter().map(|u| u.0).collect();
    let (slope, stderr) = mean_and_stderr(&slopes)?;
    let intercept = usable.iter().map(|u| u.1).sum::<f64>() / usable.len() as f64;
    let values = (0..radii.len())
        .map(|j| usable.iter().map(|u| u.2[j]).sum::<f64>() / usable.len() as f64)
        .collect();
    Ok(DimFit {
        slope,
        intercept,
        stderr,
        radii: radii.to_vec(),
        values,
    })
}

/// `r_j = r₀ 2^{-j}`, `j = 0..levels`.
pub fn radius_ladder(r0: f64, levels: usize) -> Vec<f64> {
    (0..levels).map(|j| crate::math::ldexp(r0, -(j as i32))).collect()
}

/// `dim μ = 1 + (D − 1) dim ν`.
pub fn dim_from_transversal(dim_nu: f64, p: &Params) -> Result<f64> {
    if !(0.0..=1.0).contains(&dim_nu) {
        return Err(Error::InvalidArgument("dim_nu must lie in [0, 1]"));
    }
    Ok(1.0 + (p.dim() - 1.0) * dim_nu)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HistogramBin {
    pub lo: f64,
    pub hi: f64,
    pub mass: f64,
}

/// Equal-width histogram of the values (second coordinates for pairs) over
/// their range, normalized to total mass 1.
pub fn density_histogram(s: &SampleSet, bins: usize) -> Result<Vec<HistogramBin>> {
    if bins < 2 {
        return Err(Error::InvalidArgument("need at least two bins"));
    }
    let values = s.points.values();
    if values.is_empty() {
        return Err(Error::EmptySample);
    }
    let mut lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let mut hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if hi - lo <= 0.0 {
        let pad = 0.5 * abs(lo).max(1.0);
        lo -= pad;
        hi += pad;
    }
    let width = (hi - lo) / bins as f64;
    let mut counts = alloc::vec![0usize; bins];
    for v in &values {
        let k = floor((v - lo) / width) as usize;
        counts[k.min(bins - 1)] += 1;
    }
    let n = values.len() as f64;
    Ok(counts
        .iter()
        .enumerate()
        .map(|(k, &c)| HistogramBin {
            lo: lo + k as f64 * width,
            hi: lo + (k + 1) as f64 * width,
            mass: c as f64 / n,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{eval_y, y_tail};
    use crate::word::DigitWord;

    fn p(b: u32, l: f64) -> Params {
        Params::new(b, l).unwrap()
    }

    #[test]
    fn transversal_samples_bounded_and_centered() {
        let params = p(2, 0.95);
        let g = params.gamma();
        let s = sample_transversal(&params, 0.3, 20_000, 40, 1).unwrap();
        let Points::Scalar(v) = &s.points else { panic!() };
        let bound = TAU * g / (1.0 - g);
        assert!(v.iter().all(|y| y.abs() <= bound));
        let (mean, se) = mean_and_stderr(v).unwrap();
        assert!(mean.abs() < 4.0 * se, "{mean} {se}");
        assert_eq!(s.tail_bound, y_tail(g, 40));
    }

    #[test]
    fn transversal_matches_series_on_same_digits() {
        let params = p(3, 0.6);
        let s = sample_transversal(&params, 0.7, 5, 50, 9).unwrap();
        let Points::Scalar(v) = &s.points else { panic!() };
        for (i, y) in v.iter().enumerate() {
            let mut stream = CounterStream::new(9, i as u64);
            let d: Vec<u32> = (0..50).map(|_| stream.next_digit(3)).collect();
            let w = DigitWord::finite(&d, 3).unwrap();
            let full = eval_y(&params, &w, 0.7, 1e-13).unwrap();
            assert!((full.value - y).abs() <= full.tail_bound + s.tail_bound + 1e-13);
        }
    }

    #[test]
    fn sbr_zero_psi() {
        let s = sample_sbr(&p(2, 0.8), &PhiSpec::zero(), 100, 20, 3).unwrap();
        let Points::Pairs(v) = &s.points else { panic!() };
        assert!(v.iter().all(|q| q.1 == 0.0 && (0.0..1.0).contains(&q.0)));
    }

    #[test]
    fn graph_lift_bounds() {
        let s = sample_graph_lift(&p(2, 0.9), &PhiSpec::zero(), 50, 3).unwrap();
        let Points::Pairs(v) = &s.points else { panic!() };
        assert!(v.iter().all(|q| q.1 == 0.0));
        let s = sample_graph_lift(&p(2, 0.9), &PhiSpec::weierstrass(), 500, 3).unwrap();
        let Points::Pairs(v) = &s.points else { panic!() };
        assert!(v.iter().all(|q| q.1.abs() <= 1.0 / 0.1 + 1e-9));
    }

    #[test]
    fn count_zero_rejected() {
        assert!(sample_transversal(&p(2, 0.8), 0.1, 0, 10, 0).is_err());
        assert!(sample_sbr(&p(2, 0.8), &PhiSpec::zero(), 0, 10, 0).is_err());
        assert!(sample_graph_lift(&p(2, 0.8), &PhiSpec::zero(), 0, 0).is_err());
    }

    #[test]
    fn dim_formula() {
        let params = p(2, 0.9);
        assert_eq!(dim_from_transversal(1.0, &params).unwrap(), params.dim());
        assert_eq!(dim_from_transversal(0.0, &params).unwrap(), 1.0);
        let half = dim_from_transversal(0.5, &params).unwrap();
        assert!((half - (1.0 + 0.5 * (params.dim() - 1.0))).abs() < 1e-15);
        assert!(dim_from_transversal(1.5, &params).is_err());
    }

    #[test]
    fn histogram_mass_and_errors() {
        let s = SampleSet::synthetic(Points::Scalar((0..1000).map(|i| i as f64).collect()));
        let h = density_histogram(&s, 10).unwrap();
        let total: f64 = h.iter().map(|b| b.mass).sum();
        assert!((total - 1.0).abs() < 1e-12);
        assert!(h.iter().all(|b| (b.mass - 0.1).abs() < 1e-12));
        assert!(density_histogram(&s, 1).is_err());
        let empty = SampleSet::synthetic(Points::Scalar(Vec::new()));
        assert_eq!(density_histogram(&empty, 4), Err(Error::EmptySample));
        let single = SampleSet::synthetic(Points::Scalar(alloc::vec![2.0; 5]));
        let h = density_histogram(&single, 4).unwrap();
        assert!((h.iter().map(|b| b.mass).sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn local_dim_argument_checks() {
        let s = SampleSet::synthetic(Points::Scalar((0..100).map(|i| i as f64 / 100.0).collect()));
        assert!(local_dim_estimate(&s, &[0.1, 0.05, 0.02], 5, 0).is_err());
        assert!(local_dim_estimate(&s, &[0.1, 0.2, 0.05, 0.01], 5, 0).is_err());
        let mut t = sample_transversal(&p(2, 0.9), 0.2, 100, 5, 0).unwrap();
        t.tail_bound = 0.01;
        assert!(matches!(
            local_dim_estimate(&t, &radius_ladder(0.1, 5), 5, 0),
            Err(Error::RadiusBelowResolution { .. })
        ));
    }

    #[test]
    fn default_depth_reaches_tolerance() {
        for g in [0.3, 0.55, 0.9] {
            let d = default_depth(g);
            assert!(y_tail(g, d) < 1e-9 * 1.0001);
        }
    }
}
