use thiserror::Error;

/// Errors raised by models, samplers, oracles and estimators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum TailError {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("coordinate {index} is inactive: the target does not depend on it at this point")]
    CoordinateInactive { index: usize },

    #[error("evaluation failure at probe point {point:?}")]
    EvaluationFailure { point: Vec<f64> },

    #[error("infeasible prefix at stage {stage}: empty interval ({lower}, {upper}]")]
    InfeasiblePrefix {
        stage: usize,
        lower: f64,
        upper: f64,
    },

    #[error("quadrature failure: {0}")]
    QuadratureFailure(String),

    #[error("tangency failure: {0}")]
    TangencyFailure(String),

    #[error("region not certified: {0}")]
    RegionNotCertified(String),

    #[error("secant construction failure: {0}")]
    SecantFailure(String),

    #[error("argument {value} outside supported piece [{lower}, {upper})")]
    OutsideSupportedPiece { value: f64, lower: f64, upper: f64 },

    #[error("oracle underpowered: {hits} tail hits (need at least {required})")]
    OracleUnderpowered { hits: usize, required: usize },

    #[error("no tail hits to assemble")]
    NoTailHits,

    #[error("quantile level {level} outside simulated tail [{lower}, {upper}]")]
    QuantileOutsideTail { level: f64, lower: f64, upper: f64 },

    #[error("no exact oracle registered for target '{0}'")]
    NoOracle(String),
}

pub type Result<T> = std::result::Result<T, TailError>;
