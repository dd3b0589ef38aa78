//! Green's tensors of the Lamé system.
//!
//! The frequency-domain tensor is
//! `G(x, w) = Phi_ks(x) I / mu + Hess[Phi_ks - Phi_kp](x) / (rho w^2)`,
//! with the Hessian of a radial function expanded analytically as
//! `phi'' xx^T + (phi'/r)(I - xx^T)` on the unit direction.
//!
//! In the time domain only the response to a point force with a smooth
//! vector pulse is exposed; the distributional tensor itself is never built.

use nalgebra::{DMatrix, Matrix2, Matrix3};
use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{domain, singular, Error, Result};
use crate::medium::{radial_profile, Dimension, ElasticMedium, WaveKind};
use crate::par;
use crate::quad;
use crate::transforms::VectorPulse;

/// Time-harmonic Green's tensor at a fixed angular frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreensFrequency {
    medium: ElasticMedium,
    omega: f64,
    dim: Dimension,
    k_p: f64,
    k_s: f64,
}

impl GreensFrequency {
    pub fn new(medium: &ElasticMedium, omega: f64, dim: Dimension) -> Result<Self> {
        let k_p = medium.wavenumber(WaveKind::P, omega)?;
        let k_s = medium.wavenumber(WaveKind::S, omega)?;
        Ok(Self {
            medium: *medium,
            omega,
            dim,
            k_p,
            k_s,
        })
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn dim(&self) -> Dimension {
        self.dim
    }

    pub fn wavenumbers(&self) -> (f64, f64) {
        (self.k_p, self.k_s)
    }

    /// Returns `(a, b)` such that `G = a I + b xx^T` with `xx^T` built from the
    /// unit direction of the offset.
    fn coefficients(&self, r: f64) -> Result<(Complex64, Complex64)> {
        if !(r > 0.0) {
            return Err(singular("Green's tensor evaluated at zero offset"));
        }
        let s = radial_profile(self.dim, self.k_s, r)?;
        let p = radial_profile(self.dim, self.k_p, r)?;
        let scale = 1.0 / (self.medium.rho() * self.omega * self.omega);
        let hess_radial = (s.d2 - p.d2) * scale;
        let hess_tangential = (s.d1 - p.d1) * (scale / r);
        let a = s.value / self.medium.mu() + hess_tangential;
        Ok((a, hess_radial - hess_tangential))
    }

    pub fn tensor3(&self, x: [f64; 3]) -> Result<Matrix3<Complex64>> {
        if self.dim != Dimension::Three {
            return Err(domain("tensor3 called on a two-dimensional Green's tensor"));
        }
        let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
        let (a, b) = self.coefficients(r)?;
        Ok(Matrix3::from_fn(|i, j| {
            let diag = if i == j { a } else { Complex64::new(0.0, 0.0) };
            diag + b * (x[i] * x[j] / (r * r))
        }))
    }

    pub fn tensor2(&self, x: [f64; 2]) -> Result<Matrix2<Complex64>> {
        if self.dim != Dimension::Two {
            return Err(domain("tensor2 called on a three-dimensional Green's tensor"));
        }
        let r = x[0].hypot(x[1]);
        let (a, b) = self.coefficients(r)?;
        Ok(Matrix2::from_fn(|i, j| {
            let diag = if i == j { a } else { Complex64::new(0.0, 0.0) };
            diag + b * (x[i] * x[j] / (r * r))
        }))
    }

    /// Dimension-agnostic evaluation at an offset of length 2 or 3.
    pub fn entries(&self, x: &[f64]) -> Result<DMatrix<Complex64>> {
        match (self.dim, x.len()) {
            (Dimension::Two, 2) => {
                let m = self.tensor2([x[0], x[1]])?;
                Ok(DMatrix::from_fn(2, 2, |i, j| m[(i, j)]))
            }
            (Dimension::Three, 3) => {
                let m = self.tensor3([x[0], x[1], x[2]])?;
                Ok(DMatrix::from_fn(3, 3, |i, j| m[(i, j)]))
            }
            _ => Err(domain(format!(
                "offset of length {} does not match dimension {}",
                x.len(),
                self.dim.as_usize()
            ))),
        }
    }
}

pub fn greens_frequency(
    medium: &ElasticMedium,
    omega: f64,
    dim: Dimension,
    x: &[f64],
) -> Result<DMatrix<Complex64>> {
    GreensFrequency::new(medium, omega, dim)?.entries(x)
}

/// Source and measurement radii together with the pulse duration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExperimentGeometry {
    pub source_radius: f64,
    pub receiver_radius: f64,
    pub pulse_end: f64,
}

impl ExperimentGeometry {
    pub fn new(source_radius: f64, receiver_radius: f64, pulse_end: f64) -> Result<Self> {
        if !(source_radius > 0.0) {
            return Err(domain(format!("source radius must be > 0, got {source_radius}")));
        }
        if !(receiver_radius > source_radius) {
            return Err(domain(format!(
                "receiver radius {receiver_radius} must exceed source radius {source_radius}"
            )));
        }
        if !(pulse_end >= 0.0) {
            return Err(domain(format!("pulse end must be >= 0, got {pulse_end}")));
        }
        Ok(Self {
            source_radius,
            receiver_radius,
            pulse_end,
        })
    }

    /// `T_alpha = T0 + (R + R0) / c_alpha`: after `T_s` every field inside the
    /// measurement ball has vanished.
    pub fn vanish_times(&self, medium: &ElasticMedium) -> (f64, f64) {
        let d = self.receiver_radius + self.source_radius;
        (
            self.pulse_end + d / medium.speed(WaveKind::P),
            self.pulse_end + d / medium.speed(WaveKind::S),
        )
    }
}

pub fn vanish_time(medium: &ElasticMedium, geometry: &ExperimentGeometry) -> (f64, f64) {
    geometry.vanish_times(medium)
}

/// `int_{r/c_p}^{r/c_s} s g(t - s) ds`, clipped to the pulse support.
fn tail_integral(pulse: &crate::transforms::Pulse, lo: f64, hi: f64, t: f64) -> f64 {
    let (g0, g1) = pulse.support();
    let a = lo.max(t - g1);
    let b = hi.min(t - g0);
    if b <= a || pulse.is_zero() {
        return 0.0;
    }
    quad::integrate(|s: f64| s * pulse.eval(t - s), a, b, 1e-14, 1e-12)
}

/// Displacement at `x` and time `t` radiated by a unit point force at the
/// origin with vector time profile `g`:
///
/// `u_i = [x_i x_j g_j(t - r/c_p)/c_p^2 + (delta_ij r^2 - x_i x_j) g_j(t - r/c_s)/c_s^2] / (4 pi rho r^3)
///      + (3 x_i x_j / r^2 - delta_ij) / (4 pi rho r^3) int_{r/c_p}^{r/c_s} s g_j(t - s) ds`.
pub fn point_source_response_3d(
    medium: &ElasticMedium,
    g: &VectorPulse,
    x: [f64; 3],
    t: f64,
) -> Result<[f64; 3]> {
    let r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
    let r = r2.sqrt();
    if !(r > 0.0) {
        return Err(Error::Singularity(
            "point-source response evaluated at the source".into(),
        ));
    }
    let (c_p, c_s) = (medium.speed(WaveKind::P), medium.speed(WaveKind::S));
    let (lo, hi) = (r / c_p, r / c_s);
    let mut u = [0.0; 3];
    if t < lo || t > g.support_end() + hi {
        return Ok(u);
    }
    let pre = 1.0 / (4.0 * PI * medium.rho() * r2 * r);
    for j in 0..3 {
        let gp = g.0[j].eval(t - lo);
        let gs = g.0[j].eval(t - hi);
        let tail = tail_integral(&g.0[j], lo, hi, t);
        if gp == 0.0 && gs == 0.0 && tail == 0.0 {
            continue;
        }
        for (i, ui) in u.iter_mut().enumerate() {
            let xx = x[i] * x[j];
            let delta = if i == j { 1.0 } else { 0.0 };
            *ui += pre
                * (xx * gp / (c_p * c_p)
                    + (delta * r2 - xx) * gs / (c_s * c_s)
                    + (3.0 * xx / r2 - delta) * tail);
        }
    }
    Ok(u)
}

/// `point_source_response_3d` over a list of times, evaluated in parallel.
pub fn point_source_series(
    medium: &ElasticMedium,
    g: &VectorPulse,
    x: [f64; 3],
    times: &[f64],
) -> Result<Vec<[f64; 3]>> {
    par::map_slice(times, |&t| point_source_response_3d(medium, g, x, t))
        .into_iter()
        .collect()
}
