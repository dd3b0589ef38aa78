//! Inverse source solvers: Landweber frequency marching for the spatial
//! factor and radiating-matrix indicators for the temporal factor.

mod landweber;
mod operator;
mod pipeline;
mod temporal;

pub use landweber::{
    landweber_march, operator_norm, relative_l2_error, LandweberConfig, LandweberResult, StepLength, TraceEntry,
};
pub use operator::{build_operator, data_rows, KernelKind, KernelPart, LinearOperator};
pub use pipeline::{normalized_data, potential_data, reconstruct};
pub use temporal::{
    add_noise, indicator_i1, indicator_i2, recover_temporal, ring_points, IndicatorMethod, IndicatorResult,
    RadiatingMatrix, TemporalRecovery,
};
