use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("coordinate is not finite: {0:?}")]
    NonFinite(Vec<f64>),

    #[error("derivative order {0} exceeds the supported maximum of 3")]
    OrderTooHigh(usize),

    #[error("matrix is not invertible (eigenvalue ratio {ratio:e})")]
    Singular { ratio: f64 },

    #[error("metric is degenerate or not positive-definite at {0:?}")]
    DegenerateMetric([f64; 4]),

    #[error("tangent plane is degenerate (Gram determinant {0:e})")]
    DegeneratePlane(f64),

    #[error("flag is degenerate (denominator {0:e})")]
    DegenerateFlag(f64),

    #[error("flagpole / tangent vector is zero")]
    ZeroVector,

    #[error("point {0:?} lies outside the chart")]
    OutsideChart([f64; 3]),

    #[error("potential u is not positive on the chart (u = {0})")]
    NonPositivePotential(f64),

    #[error("wind too strong: |V|_g = {0} >= 1")]
    WindTooStrong(f64),

    #[error("invalid Randers data: |b|_a = {0} >= 1")]
    InvalidRanders(f64),

    #[error("sample set is empty")]
    EmptySample,

    #[error("underdetermined sampling: {0}")]
    Underdetermined(String),

    #[error("every flag in the scan is degenerate")]
    AllFlagsDegenerate,

    #[error("{0}")]
    InvalidInput(String),
}

pub type Result<T, E = GeomError> = std::result::Result<T, E>;
