//! Box-counting dimension of graphs of `f^φ_{λ,b}`.
//!
//! Scales are `ε_j = b^{-j}`. The function is evaluated once on a grid of
//! `samples_per_column` subintervals per finest column; the per-column
//! minimum and maximum are then merged up to coarser levels. A column with
//! sampled range `[lo, hi]` is charged `⌊hi/ε⌋ − ⌊lo/ε⌋ + 1` boxes.
//! Oscillation between grid points is not enclosed, so counts can only err
//! low.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fit::{least_squares, DimFit, MIN_SCALES};
use crate::math::{floor, ln, powi};
use crate::par::map_indexed;
use crate::params::Params;
use crate::phi::PhiSpec;
use crate::series::eval_f;

/// Largest number of grid evaluations [`box_count`] accepts.
pub const POINT_BUDGET: u128 = 1 << 27;

/// Default number of coarse levels left out of [`fit_box_dimension`].
pub const DEFAULT_DROP_COARSEST: usize = 2;

/// Graph-value tolerance relative to the finest box size.
pub const EVAL_TOL_FRACTION: f64 = 1e-3;

pub const UNDERCOUNT_NOTE: &str =
    "oscillation bracketed by sampling; box counts are lower bounds up to evaluation tolerance";

/// `D = 2 + ln λ / ln b`.
pub fn theoretical_dim(p: &Params) -> f64 {
    p.dim()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoxLevel {
    pub epsilon: f64,
    pub boxes_hit: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoxCountTable {
    /// Levels `j = 1, …, levels`, `epsilon` strictly decreasing.
    pub levels: Vec<BoxLevel>,
    pub params: Params,
    pub samples_per_column: usize,
}

fn boxes(lo: f64, hi: f64, eps: f64) -> u64 {
    (floor(hi / eps) - floor(lo / eps)) as u64 + 1
}

/// Counts `b^{-j}`-boxes of `[0,1] × ℝ` met by the sampled graph for
/// `j = 1, …, levels`.
pub fn box_count(
    p: &Params,
    phi: &PhiSpec,
    levels: usize,
    samples_per_column: usize,
) -> Result<BoxCountTable> {
    if levels < MIN_SCALES {
        return Err(Error::TooFewLevels {
            needed: MIN_SCALES,
            got: levels,
        });
    }
    if samples_per_column < 2 {
        return Err(Error::InvalidArgument("samples_per_column must be at least 2"));
    }
    let b = p.b();
    let columns = (b as u128)
        .checked_pow(levels as u32)
        .filter(|&c| c <= POINT_BUDGET)
        .ok_or(Error::BudgetExceeded {
            required: u128::MAX,
            budget: POINT_BUDGET,
        })?;
    let required = columns * samples_per_column as u128 + 1;
    if required > POINT_BUDGET {
        return Err(Error::BudgetExceeded {
            required,
            budget: POINT_BUDGET,
        });
    }
    let columns = columns as usize;
    let denom = (columns * samples_per_column) as f64;
    let finest = powi(b as f64, -(levels as i32));
    let tol = EVAL_TOL_FRACTION * finest;

    let ranges = map_indexed(columns, |c| -> Result<(f64, f64)> {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for s in 0..=samples_per_column {
            let x = (c * samples_per_column + s) as f64 / denom;
            let v = eval_f(p, phi, x, None, tol)?.value;
            lo = lo.min(v);
            hi = hi.max(v);
        }
        Ok((lo, hi))
    });
    let mut ranges = ranges.into_iter().collect::<Result<Vec<_>>>()?;

    let mut out = Vec::with_capacity(levels);
    let mut eps = finest;
    for j in (1..=levels).rev() {
        let count = ranges.iter().map(|&(lo, hi)| boxes(lo, hi, eps)).sum();
        out.push(BoxLevel {
            epsilon: eps,
            boxes_hit: count,
        });
        if j > 1 {
            ranges = ranges
                .chunks(b as usize)
                .map(|ch| {
                    ch.iter()
                        .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &(a, z)| (l.min(a), h.max(z)))
                })
                .collect();
            eps = powi(b as f64, -(j as i32 - 1));
        }
    }
    out.reverse();
    Ok(BoxCountTable {
        levels: out,
        params: *p,
        samples_per_column,
    })
}

/// Least-squares slope of `log boxes_hit` against `log(1/ε)` after dropping
/// the `drop_coarsest` coarsest levels.
pub fn fit_box_dimension(t: &BoxCountTable, drop_coarsest: usize) -> Result<DimFit> {
    let kept = t.levels.get(drop_coarsest..).unwrap_or(&[]);
    if kept.len() < MIN_SCALES {
        return Err(Error::TooFewLevels {
            needed: MIN_SCALES,
            got: kept.len(),
        });
    }
    let xs: Vec<f64> = kept.iter().map(|l| -ln(l.epsilon)).collect();
    let ys: Vec<f64> = kept.iter().map(|l| ln(l.boxes_hit as f64)).collect();
    let fit = least_squares(&xs, &ys)?;
    Ok(DimFit {
        slope: fit.slope,
        intercept: fit.intercept,
        stderr: fit.stderr,
        radii: kept.iter().map(|l| l.epsilon).collect(),
        values: kept.iter().map(|l| l.boxes_hit as f64).collect(),
    })
}
