//! Chart-based differential geometry with exact derivatives.
//!
//! Metrics are closed-form functions of the coordinates evaluated over
//! [`HyperDual`](crate::hyperdual::HyperDual) numbers, so Christoffel
//! symbols, curvature and all derived fields are exact to rounding.

pub mod chart;
pub mod check;
pub mod fd;
pub mod hmat;
pub mod local;
pub mod point;
pub mod transform;

pub use chart::{ball_sampler, ChartPoint, CovectorFn, MetricChart, MetricFn, ScalarFn, StructureFn};
pub use check::{
    check_brackets, check_closed_lee_suite, check_connection_curvature, check_connection_lee, check_hk_potential,
    check_lee_hessian, check_rprime, check_structure_equations, rprime_split, CheckResult, CheckStatus,
};
pub use hmat::HMat;
pub use point::{
    christoffel, connection_abc, kahler_form, lee_form, metric_compatibility_residual, reduced_scalar, riemann,
    ConnectionData, PointGeometry,
};
pub use transform::{check_roundtrip, from_hyperkahler, signature, to_hyperkahler};
