use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("dimension {0} is not a positive multiple of 4")]
    NotQuaternionic(usize),

    #[error("quaternionic dimension n = {n} outside supported range 1..={max}")]
    OutOfCap { n: usize, max: usize },

    #[error("precondition `{check}` violated (residual {residual:e})")]
    Precondition { check: String, residual: f64 },

    #[error("mixed symmetry inputs: {0}")]
    MixedSymmetry(String),

    #[error("point outside chart domain (margin {margin:e})")]
    OutOfDomain { margin: f64 },

    #[error("singular metric (condition number {cond:e})")]
    SingularMetric { cond: f64 },

    #[error("structure triple is not quaternionic Kähler: ∇-reconstruction residual {residual:e}")]
    NotQuaternionicKahler { residual: f64 },

    #[error("metric is not Einstein to tolerance (residual {residual:e})")]
    NotEinstein { residual: f64 },

    #[error("Lee form is not closed (|dφ| = {residual:e})")]
    LeeNotClosed { residual: f64 },

    #[error("chart is not hyper-Kähler (|(a,b,c)| = {residual:e})")]
    NotHyperKahler { residual: f64 },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("chart `{0}` lacks required data: {1}")]
    MissingChartData(String, &'static str),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown chart `{0}`")]
    UnknownChart(String),

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),

    #[error("suite `{suite}` does not apply to chart `{chart}`: {reason}")]
    SuiteNotApplicable {
        suite: String,
        chart: String,
        reason: String,
    },

    #[error("failed to sample a point inside the domain of `{0}`")]
    Sampling(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
