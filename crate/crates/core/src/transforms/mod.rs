//! Time/frequency transforms, Helmholtz decomposition and modal decoupling.

mod fourier;
mod helmholtz;
mod modal;
mod pulse;

pub use fourier::{fourier_sum, frequency_to_time, time_to_frequency};
pub use helmholtz::helmholtz_decompose_2d;
pub use modal::{decompose_field_2d, decouple_circle, decouple_samples, modal_to_potentials, ModalCoefficients};
pub use pulse::{Pulse, Spectrum, VectorPulse};
