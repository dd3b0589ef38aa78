use num_complex::Complex64;

use crate::error::{domain, shape, Result};

/// Measurement points. When `radius` is set, every point lies on the circle
/// or sphere of that radius about the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct ReceiverArray {
    dim: usize,
    points: Vec<[f64; 3]>,
    radius: Option<f64>,
}

impl ReceiverArray {
    /// `m` uniformly spaced points on the circle of radius `r`, the first at angle 0.
    pub fn circle(r: f64, m: usize) -> Result<Self> {
        if !(r > 0.0) || m == 0 {
            return Err(domain(format!("circle needs radius > 0 and at least one point, got r={r}, m={m}")));
        }
        let points = (0..m)
            .map(|j| {
                let th = 2.0 * std::f64::consts::PI * j as f64 / m as f64;
                [r * th.cos(), r * th.sin(), 0.0]
            })
            .collect();
        Ok(Self {
            dim: 2,
            points,
            radius: Some(r),
        })
    }

    /// Arbitrary points; the radius is inferred when they share a common norm.
    pub fn from_points(dim: usize, points: Vec<[f64; 3]>) -> Result<Self> {
        if !(dim == 2 || dim == 3) {
            return Err(domain(format!("dimension must be 2 or 3, got {dim}")));
        }
        if points.is_empty() {
            return Err(domain("receiver array is empty"));
        }
        if dim == 2 && points.iter().any(|p| p[2] != 0.0) {
            return Err(domain("2D receivers must have zero third coordinate"));
        }
        let r0 = norm(&points[0]);
        let radius = points
            .iter()
            .all(|p| (norm(p) - r0).abs() <= 1e-12 * r0.max(1.0))
            .then_some(r0)
            .filter(|&r| r > 0.0);
        Ok(Self { dim, points, radius })
    }

    /// As [`from_points`](Self::from_points) but requires every point at distance `r`.
    pub fn on_sphere(dim: usize, points: Vec<[f64; 3]>, r: f64) -> Result<Self> {
        let a = Self::from_points(dim, points)?;
        for p in &a.points {
            if (norm(p) - r).abs() > 1e-12 * r {
                return Err(domain(format!("receiver {p:?} not at radius {r}")));
            }
        }
        Ok(Self { radius: Some(r), ..a })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[[f64; 3]] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn radius(&self) -> Option<f64> {
        self.radius
    }

    /// Smallest distance from the origin.
    pub fn min_radius(&self) -> f64 {
        self.points.iter().map(norm).fold(f64::INFINITY, f64::min)
    }
}

pub(crate) fn norm(p: &[f64; 3]) -> f64 {
    (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt()
}

/// Time records `U(x_m, t_0 + n dt)`, stored `[receiver][component][time]`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeriesData {
    receivers: ReceiverArray,
    components: usize,
    t0: f64,
    dt: f64,
    nt: usize,
    samples: Vec<f64>,
}

impl TimeSeriesData {
    pub fn new(
        receivers: ReceiverArray,
        components: usize,
        t0: f64,
        dt: f64,
        nt: usize,
        samples: Vec<f64>,
    ) -> Result<Self> {
        if !(dt > 0.0) {
            return Err(domain(format!("dt must be > 0, got {dt}")));
        }
        if components != 1 && components != receivers.dim() {
            return Err(shape(format!(
                "{components} components for {}D receivers",
                receivers.dim()
            )));
        }
        if samples.len() != receivers.len() * components * nt {
            return Err(shape(format!(
                "{} samples for {} receivers x {} components x {} times",
                samples.len(),
                receivers.len(),
                components,
                nt
            )));
        }
        Ok(Self {
            receivers,
            components,
            t0,
            dt,
            nt,
            samples,
        })
    }

    pub fn zeros(receivers: ReceiverArray, components: usize, t0: f64, dt: f64, nt: usize) -> Result<Self> {
        let n = receivers.len() * components * nt;
        Self::new(receivers, components, t0, dt, nt, vec![0.0; n])
    }

    pub fn receivers(&self) -> &ReceiverArray {
        &self.receivers
    }

    pub fn components(&self) -> usize {
        self.components
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn len_time(&self) -> usize {
        self.nt
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.nt).map(|n| self.t0 + n as f64 * self.dt).collect()
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn trace(&self, receiver: usize, component: usize) -> &[f64] {
        let o = (receiver * self.components + component) * self.nt;
        &self.samples[o..o + self.nt]
    }

    pub fn trace_mut(&mut self, receiver: usize, component: usize) -> &mut [f64] {
        let o = (receiver * self.components + component) * self.nt;
        &mut self.samples[o..o + self.nt]
    }
}

/// Frequency-domain data `Û(x_m, ω_k)`, stored `[receiver][component][frequency]`.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencySweepData {
    receivers: ReceiverArray,
    components: usize,
    omegas: Vec<f64>,
    values: Vec<Complex64>,
}

impl FrequencySweepData {
    pub fn new(
        receivers: ReceiverArray,
        components: usize,
        omegas: Vec<f64>,
        values: Vec<Complex64>,
    ) -> Result<Self> {
        check_omegas(&omegas)?;
        if components == 0 || components > 3 {
            return Err(shape(format!("components must be 1..=3, got {components}")));
        }
        if values.len() != receivers.len() * components * omegas.len() {
            return Err(shape(format!(
                "{} values for {} receivers x {} components x {} frequencies",
                values.len(),
                receivers.len(),
                components,
                omegas.len()
            )));
        }
        Ok(Self {
            receivers,
            components,
            omegas,
            values,
        })
    }

    pub fn zeros(receivers: ReceiverArray, components: usize, omegas: Vec<f64>) -> Result<Self> {
        let n = receivers.len() * components * omegas.len();
        Self::new(receivers, components, omegas, vec![Complex64::new(0.0, 0.0); n])
    }

    pub fn receivers(&self) -> &ReceiverArray {
        &self.receivers
    }

    pub fn components(&self) -> usize {
        self.components
    }

    pub fn omegas(&self) -> &[f64] {
        &self.omegas
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn get(&self, receiver: usize, component: usize, k: usize) -> Complex64 {
        self.values[(receiver * self.components + component) * self.omegas.len() + k]
    }

    pub fn set(&mut self, receiver: usize, component: usize, k: usize, v: Complex64) {
        let nw = self.omegas.len();
        self.values[(receiver * self.components + component) * nw + k] = v;
    }

    /// All receivers' values at frequency index `k`, `[receiver][component]`.
    pub fn at_frequency(&self, k: usize) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(self.receivers.len() * self.components);
        for m in 0..self.receivers.len() {
            for c in 0..self.components {
                out.push(self.get(m, c, k));
            }
        }
        out
    }

    pub fn frequency_index(&self, omega: f64) -> Option<usize> {
        self.omegas
            .iter()
            .position(|&w| (w - omega).abs() <= 1e-12 * omega.abs().max(1.0))
    }
}

/// Frequencies must be finite, positive and strictly increasing.
pub fn check_omegas(omegas: &[f64]) -> Result<()> {
    if omegas.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
        return Err(domain("frequencies must be positive and finite"));
    }
    if omegas.windows(2).any(|p| p[1] <= p[0]) {
        return Err(domain("frequencies must be strictly increasing"));
    }
    Ok(())
}

/// `k` equispaced frequencies from `lo` to `hi` inclusive.
pub fn linear_sweep(lo: f64, hi: f64, k: usize) -> Vec<f64> {
    if k == 1 {
        return vec![lo];
    }
    (0..k)
        .map(|j| lo + j as f64 * (hi - lo) / (k - 1) as f64)
        .collect()
}
