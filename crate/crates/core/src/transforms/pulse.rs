//! Temporal source signals `g(t)` and their Fourier transforms.

use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{domain, Result};
use crate::quad;

/// A real signal supported on `[0, cutoff]`.
#[derive(Debug, Clone, PartialEq)]
pub enum Pulse {
    /// `amplitude * cos(carrier (t - center) - phase) * exp(-decay (t - center)^2)`,
    /// hard-truncated outside `[0, cutoff]`.
    ModulatedGaussian {
        amplitude: f64,
        carrier: f64,
        phase: f64,
        decay: f64,
        center: f64,
        cutoff: f64,
    },
    /// Uniform samples starting at `t0`, linearly interpolated; zero outside
    /// the sampled window and for negative times.
    Sampled { t0: f64, dt: f64, samples: Vec<f64> },
}

impl Pulse {
    /// `cos(carrier (t - center)) exp(-pi (t - center)^2)` on `[0, cutoff]`.
    pub fn cosine_gaussian(amplitude: f64, carrier: f64, center: f64, cutoff: f64) -> Self {
        Pulse::ModulatedGaussian {
            amplitude,
            carrier,
            phase: 0.0,
            decay: PI,
            center,
            cutoff,
        }
    }

    /// `sin(carrier (t - center)) exp(-pi (t - center)^2)` on `[0, cutoff]`.
    pub fn sine_gaussian(amplitude: f64, carrier: f64, center: f64, cutoff: f64) -> Self {
        Pulse::ModulatedGaussian {
            amplitude,
            carrier,
            phase: FRAC_PI_2,
            decay: PI,
            center,
            cutoff,
        }
    }

    pub fn zero() -> Self {
        Pulse::Sampled {
            t0: 0.0,
            dt: 1.0,
            samples: Vec::new(),
        }
    }

    /// The scalar pulse of the two-dimensional experiments:
    /// `cos(1.5 pi (t - 2)) exp(-pi (t - 2)^2)` truncated at `t = 5`.
    pub fn standard() -> Self {
        Pulse::cosine_gaussian(1.0, 1.5 * PI, 2.0, 5.0)
    }

    pub fn sampled(t0: f64, dt: f64, samples: Vec<f64>) -> Result<Self> {
        if !(dt > 0.0) {
            return Err(domain(format!("sample spacing must be > 0, got {dt}")));
        }
        Ok(Pulse::Sampled { t0, dt, samples })
    }

    /// Closed support interval outside of which the pulse is exactly zero.
    pub fn support(&self) -> (f64, f64) {
        match self {
            Pulse::ModulatedGaussian { cutoff, .. } => (0.0, cutoff.max(0.0)),
            Pulse::Sampled { t0, dt, samples } => {
                if samples.is_empty() {
                    (0.0, 0.0)
                } else {
                    let end = t0 + dt * (samples.len() - 1) as f64;
                    (t0.max(0.0), end.max(0.0))
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Pulse::ModulatedGaussian { amplitude, .. } => *amplitude == 0.0,
            Pulse::Sampled { samples, .. } => samples.iter().all(|&s| s == 0.0),
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        match *self {
            Pulse::ModulatedGaussian {
                amplitude,
                carrier,
                phase,
                decay,
                center,
                cutoff,
            } => {
                if t < 0.0 || t > cutoff {
                    return 0.0;
                }
                let s = t - center;
                amplitude * (carrier * s - phase).cos() * (-decay * s * s).exp()
            }
            Pulse::Sampled {
                t0,
                dt,
                ref samples,
            } => {
                if t < 0.0 || samples.is_empty() {
                    return 0.0;
                }
                let u = (t - t0) / dt;
                let last = (samples.len() - 1) as f64;
                if u < 0.0 || u > last {
                    return 0.0;
                }
                let i = (u.floor() as usize).min(samples.len().saturating_sub(2));
                if samples.len() == 1 {
                    return samples[0];
                }
                let w = u - i as f64;
                samples[i] * (1.0 - w) + samples[i + 1] * w
            }
        }
    }

    pub fn sample(&self, times: &[f64]) -> Vec<f64> {
        times.iter().map(|&t| self.eval(t)).collect()
    }

    /// `int g(t) e^{i omega t} dt` over the support, by adaptive quadrature.
    pub fn spectrum_at(&self, omega: f64) -> Complex64 {
        let (a, b) = self.support();
        if b <= a || self.is_zero() {
            return Complex64::new(0.0, 0.0);
        }
        let f = |t: f64| Complex64::from_polar(self.eval(t), omega * t);
        match self {
            Pulse::Sampled { t0, dt, samples } => {
                // Piecewise-linear signal: integrate per sample interval.
                let mut acc = Complex64::new(0.0, 0.0);
                for i in 0..samples.len().saturating_sub(1) {
                    let lo = (t0 + dt * i as f64).max(a);
                    let hi = (t0 + dt * (i + 1) as f64).min(b);
                    acc += quad::integrate(&f, lo, hi, 1e-15, 1e-13);
                }
                acc
            }
            _ => quad::integrate(f, a, b, 1e-14, 1e-13),
        }
    }

    pub fn spectrum(&self, omegas: &[f64]) -> Spectrum {
        Spectrum {
            omegas: omegas.to_vec(),
            values: omegas.iter().map(|&w| self.spectrum_at(w)).collect(),
        }
    }
}

/// Three independent pulses, one per force direction.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorPulse(pub [Pulse; 3]);

impl VectorPulse {
    /// The vector pulse of the three-dimensional temporal experiments:
    /// `g1 = cos(1.5 pi (t-2)) e^{-pi (t-2)^2}` on `[0,5]`,
    /// `g2 = sin(2 pi (t-3)) e^{-pi (t-3)^2}` on `[0,4]`,
    /// `g3 = sin(pi (t-2)) e^{-pi (t-2)^2}` on `[0,3]`.
    pub fn standard() -> Self {
        VectorPulse([
            Pulse::cosine_gaussian(1.0, 1.5 * PI, 2.0, 5.0),
            Pulse::sine_gaussian(1.0, 2.0 * PI, 3.0, 4.0),
            Pulse::sine_gaussian(1.0, PI, 2.0, 3.0),
        ])
    }

    pub fn zero() -> Self {
        VectorPulse([Pulse::zero(), Pulse::zero(), Pulse::zero()])
    }

    pub fn eval(&self, t: f64) -> [f64; 3] {
        [self.0[0].eval(t), self.0[1].eval(t), self.0[2].eval(t)]
    }

    /// Latest end of support among the components.
    pub fn support_end(&self) -> f64 {
        self.0.iter().map(|p| p.support().1).fold(0.0, f64::max)
    }

    pub fn spectrum_at(&self, omega: f64) -> [Complex64; 3] {
        [
            self.0[0].spectrum_at(omega),
            self.0[1].spectrum_at(omega),
            self.0[2].spectrum_at(omega),
        ]
    }
}

/// Samples of a Fourier transform `g_hat(omega)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub omegas: Vec<f64>,
    pub values: Vec<Complex64>,
}

impl Spectrum {
    pub fn new(omegas: Vec<f64>, values: Vec<Complex64>) -> Result<Self> {
        if omegas.len() != values.len() {
            return Err(domain("spectrum needs one value per frequency"));
        }
        Ok(Self { omegas, values })
    }

    /// Value at `omega`; negative frequencies come from conjugate symmetry.
    pub fn at(&self, omega: f64) -> Option<Complex64> {
        let find = |w: f64| {
            self.omegas
                .iter()
                .position(|&o| (o - w).abs() <= 1e-12 * w.abs().max(1.0))
                .map(|i| self.values[i])
        };
        if omega < 0.0 {
            find(-omega).map(|v| v.conj())
        } else {
            find(omega)
        }
    }
}
