use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("base b must be at least 2, got {0}")]
    InvalidBase(u32),
    #[error("lambda = {lambda} outside ({lo}, {hi})")]
    LambdaOutOfRange { lambda: f64, lo: f64, hi: f64 },
    #[error("gamma = {gamma} outside ({lo}, {hi})")]
    GammaOutOfRange { gamma: f64, lo: f64, hi: f64 },
    #[error("tolerance must be positive, got {0}")]
    NonPositiveTolerance(f64),
    #[error("digit {digit} is not below the base {base}")]
    DigitOutOfRange { digit: u32, base: u32 },
    #[error("t = {0} outside (0, 1)")]
    TOutOfRange(f64),
    #[error("beta = {0} is below 1")]
    BetaBelowOne(f64),
    #[error("non-positive radicand {0} in beta(lambda)")]
    NonPositiveRadicand(f64),
    #[error("{0}")]
    InvalidArgument(&'static str),
    #[error("work budget exceeded: {required} > {budget}")]
    BudgetExceeded { required: u128, budget: u128 },
    #[error("radius {radius} is below the sample resolution {resolution}")]
    RadiusBelowResolution { radius: f64, resolution: f64 },
    #[error("empty gamma interval ({lo}, {hi})")]
    EmptyGammaInterval { lo: f64, hi: f64 },
    #[error("need at least {needed} levels, got {got}")]
    TooFewLevels { needed: usize, got: usize },
    #[error("empty sample set")]
    EmptySample,
}
