//! Log-log least-squares fits shared by the local-dimension and
//! box-counting estimators.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::sqrt;

/// Minimum number of scales in a dimension fit.
pub const MIN_SCALES: usize = 4;

/// A scaling-exponent fit `log value ≈ slope · log(1/r) + intercept` (box
/// counting) or `log mass ≈ slope · log r + intercept` (local dimension).
#[derive(Debug, Clone, PartialEq)]
pub struct DimFit {
    pub slope: f64,
    pub intercept: f64,
    pub stderr: f64,
    /// Scales, strictly decreasing.
    pub radii: Vec<f64>,
    /// Counts or masses at each scale.
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Standard error of the slope; 0 for two points or an exact fit.
    pub stderr: f64,
}

/// Ordinary least squares `y ≈ slope · x + intercept`.
pub fn least_squares(xs: &[f64], ys: &[f64]) -> Result<LineFit> {
    let n = xs.len();
    if n != ys.len() {
        return Err(Error::InvalidArgument("x and y lengths differ"));
    }
    if n < 2 {
        return Err(Error::TooFewLevels { needed: 2, got: n });
    }
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidArgument("degenerate abscissae"));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let stderr = if n > 2 {
        let rss: f64 = xs
            .iter()
            .zip(ys)
            .map(|(x, y)| {
                let r = y - (slope * x + intercept);
                r * r
            })
            .sum();
        sqrt(rss / (nf - 2.0) / sxx)
    } else {
        0.0
    };
    Ok(LineFit {
        slope,
        intercept,
        stderr,
    })
}
