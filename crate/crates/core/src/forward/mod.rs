//! Forward synthesis of measurement data.

mod data;
mod grid;
mod moments;
mod spectral;
mod synth;

pub use data::{check_omegas, linear_sweep, FrequencySweepData, ReceiverArray, TimeSeriesData};
pub use grid::{GridField, GridValue};
pub use moments::{perpendicular, plane_wave_moment, spatial_ft};
pub use spectral::{spectral_forward_3d, SpatialSource, SpectralBox};
pub use synth::{synthesize_frequency_data_2d, synthesize_scalar_frequency_data_2d};
