//! Forward synthesis and inverse source recovery for the time-dependent
//! Lamé system with separable sources `F(x, t) = f(x) g(t)`.

pub mod error;
pub mod forward;
pub mod greens;
pub mod inversion;
pub mod medium;
pub mod par;
pub mod quad;
pub mod scenario;
pub mod transforms;

pub use error::{Error, Result};
pub use medium::{Dimension, ElasticMedium, WaveKind, WaveParameters};
