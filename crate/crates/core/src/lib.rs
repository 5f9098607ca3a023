//! Numerical toolkit for graphs of Weierstrass-type functions
//!
//! `f(x) = Σ λⁿ φ(bⁿ x)` with integer base `b ≥ 2` and `λ ∈ (1/b, 1)`.
//!
//! The crate covers:
//!
//! - [`series`]: the graph function, the strong-stable slope series `Y` with
//!   its `x`- and `γ`-derivatives, and the skew-product sum `S`, each paired
//!   with a rigorous truncation bound.
//! - [`thresholds`]: the functions `h_b`, `h̃_b`, `H_b`, `H̃_b`, the root
//!   `λ_b` and certified bounds on `λ̃_b`.
//! - [`star`]: (*)-function certificates giving lower bounds on `y(β)`.
//! - [`transversality`]: analytic and sampled transversality checks.
//! - [`measures`]: pushforward-measure samplers and local-dimension fits.
//! - [`dimension`]: box counting of graphs.
//!
//! The crate is `no_std` (with `alloc`) when the default `std`/`parallel`
//! features are disabled. All transcendental functions go through `libm`, so
//! results are bit-identical with and without the standard library and
//! across worker counts.

#![cfg_attr(not(feature = "std"), no_std)]
// `!(x > 0.0)` guards also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

mod error;
mod math;
mod par;

pub mod dimension;
pub mod fit;
pub mod measures;
pub mod params;
pub mod phi;
pub mod rng;
pub mod series;
pub mod star;
pub mod thresholds;
pub mod transversality;
pub mod word;

pub use error::{Error, Result};
pub use fit::DimFit;
pub use params::Params;
pub use phi::PhiSpec;
pub use series::SeriesValue;
pub use word::{DigitWord, Tail};
