//! Recovery of a vector temporal profile `g(t)` from point measurements when
//! the spatial factor is known. At each frequency `U(x, w) = W(x, w) g_hat(w)`
//! with the radiating matrix `W(x, w) = int G(x - y, w) f(y) dy`, which for the
//! point source is the Green's tensor itself.

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;
use rand::distributions::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{domain, shape, Result};
use crate::forward::{FrequencySweepData, GridField, TimeSeriesData};
use crate::greens::GreensFrequency;
use crate::medium::{Dimension, ElasticMedium};
use crate::par;
use crate::transforms::{frequency_to_time, time_to_frequency};

const INVERTIBLE: f64 = 1e-13;

/// `W(x, w)` with its determinant and invertibility flag.
#[derive(Debug, Clone, PartialEq)]
pub struct RadiatingMatrix {
    pub omega: f64,
    pub x: [f64; 3],
    pub w: Matrix3<Complex64>,
    pub det: Complex64,
    pub invertible: bool,
}

impl RadiatingMatrix {
    /// Point source at the origin: `W = G(x, w)`.
    pub fn point_source(medium: &ElasticMedium, omega: f64, x: [f64; 3]) -> Result<Self> {
        let w = GreensFrequency::new(medium, omega, Dimension::Three)?.tensor3(x)?;
        Ok(Self::from_matrix(omega, x, w))
    }

    /// Scalar spatial factor on a 3D grid: `W = sum_cells w_c G(x - y_c) f(y_c)`.
    pub fn from_source(medium: &ElasticMedium, omega: f64, x: [f64; 3], f: &GridField) -> Result<Self> {
        if f.dim() != 3 || f.components() != 1 {
            return Err(shape("radiating matrix needs a scalar 3D spatial factor"));
        }
        let g = GreensFrequency::new(medium, omega, Dimension::Three)?;
        let vol = f.cell_volume();
        let mut w = Matrix3::zeros();
        for (i, &v) in f.values().iter().enumerate() {
            if v == 0.0 {
                continue;
            }
            let y = f.point(i);
            w += g.tensor3([x[0] - y[0], x[1] - y[1], x[2] - y[2]])? * Complex64::new(v * vol, 0.0);
        }
        Ok(Self::from_matrix(omega, x, w))
    }

    fn from_matrix(omega: f64, x: [f64; 3], w: Matrix3<Complex64>) -> Self {
        let det = w.determinant();
        let scale = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        Self {
            omega,
            x,
            w,
            det,
            invertible: det.norm() > INVERTIBLE * scale.powi(3),
        }
    }

    /// `W^{-1} u` by LU with partial pivoting.
    pub fn solve(&self, u: [Complex64; 3]) -> Option<[Complex64; 3]> {
        if !self.invertible {
            return None;
        }
        let x = self.w.lu().solve(&Vector3::new(u[0], u[1], u[2]))?;
        Some([x[0], x[1], x[2]])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndicatorMethod {
    /// Inversion at a single observation point.
    I1,
    /// Average of the inversions over all points with invertible `W`.
    I2,
}

impl IndicatorMethod {
    pub fn label(self) -> &'static str {
        match self {
            IndicatorMethod::I1 => "I1",
            IndicatorMethod::I2 => "I2",
        }
    }
}

/// Per-frequency estimates of `g_hat`; `None` where no point had an invertible `W`.
#[derive(Debug, Clone, PartialEq)]
pub struct IndicatorResult {
    pub method: IndicatorMethod,
    pub omegas: Vec<f64>,
    pub estimates: Vec<Option<[Complex64; 3]>>,
    pub points_used: Vec<usize>,
}

impl IndicatorResult {
    /// Estimates with failed frequencies replaced by zero.
    pub fn filled(&self) -> Vec<[Complex64; 3]> {
        self.estimates
            .iter()
            .map(|e| e.unwrap_or([Complex64::new(0.0, 0.0); 3]))
            .collect()
    }

    pub fn failures(&self) -> usize {
        self.estimates.iter().filter(|e| e.is_none()).count()
    }
}

fn check_data(data: &FrequencySweepData) -> Result<()> {
    if data.receivers().dim() != 3 || data.components() != 3 {
        return Err(shape("temporal indicators need three-component 3D data"));
    }
    Ok(())
}

fn point_values(data: &FrequencySweepData, j: usize, k: usize) -> [Complex64; 3] {
    [data.get(j, 0, k), data.get(j, 1, k), data.get(j, 2, k)]
}

/// `I_1(w) = W(x_0, w)^{-1} U(x_0, w)` with `x_0` the receiver at `point`.
pub fn indicator_i1(data: &FrequencySweepData, medium: &ElasticMedium, point: usize) -> Result<IndicatorResult> {
    check_data(data)?;
    if point >= data.receivers().len() {
        return Err(domain(format!("observation point {point} out of range")));
    }
    let x = data.receivers().points()[point];
    let est = par::map_indexed(data.omegas().len(), |k| -> Result<Option<[Complex64; 3]>> {
        let w = RadiatingMatrix::point_source(medium, data.omegas()[k], x)?;
        Ok(w.solve(point_values(data, point, k)))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let used = est.iter().map(|e| usize::from(e.is_some())).collect();
    Ok(IndicatorResult {
        method: IndicatorMethod::I1,
        omegas: data.omegas().to_vec(),
        estimates: est,
        points_used: used,
    })
}

/// `I_2(w)`: mean of `W(x_j, w)^{-1} U(x_j, w)` over all receivers with invertible `W`.
pub fn indicator_i2(data: &FrequencySweepData, medium: &ElasticMedium) -> Result<IndicatorResult> {
    check_data(data)?;
    let m = data.receivers().len();
    let per_freq = par::map_indexed(data.omegas().len(), |k| -> Result<(Option<[Complex64; 3]>, usize)> {
        let mut acc = [Complex64::new(0.0, 0.0); 3];
        let mut used = 0;
        for j in 0..m {
            let w = RadiatingMatrix::point_source(medium, data.omegas()[k], data.receivers().points()[j])?;
            if let Some(e) = w.solve(point_values(data, j, k)) {
                for c in 0..3 {
                    acc[c] += e[c];
                }
                used += 1;
            }
        }
        if used == 0 {
            return Ok((None, 0));
        }
        Ok((Some(acc.map(|v| v / used as f64)), used))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let (estimates, points_used) = per_freq.into_iter().unzip();
    Ok(IndicatorResult {
        method: IndicatorMethod::I2,
        omegas: data.omegas().to_vec(),
        estimates,
        points_used,
    })
}

/// Observation ring `x_j = (cos theta_j, 1, sin theta_j)`, `theta_j = 2 pi (j-1)/M`.
pub fn ring_points(m: usize) -> Vec<[f64; 3]> {
    (0..m)
        .map(|j| {
            let th = 2.0 * std::f64::consts::PI * j as f64 / m as f64;
            [th.cos(), 1.0, th.sin()]
        })
        .collect()
}

/// Multiplies every sample by `1 + delta eps` with `eps` uniform on `[-1, 1]`,
/// drawn in storage order from a ChaCha8 stream seeded by `seed`.
pub fn add_noise(series: &TimeSeriesData, delta: f64, seed: u64) -> Result<TimeSeriesData> {
    if !(delta >= 0.0) {
        return Err(domain(format!("noise level must be >= 0, got {delta}")));
    }
    let mut out = series.clone();
    if delta == 0.0 {
        return Ok(out);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dist = Uniform::new_inclusive(-1.0, 1.0);
    let m = out.receivers().len();
    for j in 0..m {
        for c in 0..out.components() {
            for v in out.trace_mut(j, c) {
                *v *= 1.0 + delta * dist.sample(&mut rng);
            }
        }
    }
    Ok(out)
}

/// Recovered spectrum and time signal.
#[derive(Debug, Clone, PartialEq)]
pub struct TemporalRecovery {
    pub indicator: IndicatorResult,
    pub times: Vec<f64>,
    /// `[component][time]`.
    pub signal: [Vec<f64>; 3],
}

/// Time series -> Fourier data -> indicator -> inverse transform.
///
/// `omegas` must form a uniform grid starting at half a step (zero frequency
/// is excluded because `W` is singular there). `point` selects `x_0` for `I_1`.
pub fn recover_temporal(
    series: &TimeSeriesData,
    medium: &ElasticMedium,
    omegas: &[f64],
    times: &[f64],
    method: IndicatorMethod,
    point: usize,
) -> Result<TemporalRecovery> {
    let data = time_to_frequency(series, omegas)?;
    let indicator = match method {
        IndicatorMethod::I1 => indicator_i1(&data, medium, point)?,
        IndicatorMethod::I2 => indicator_i2(&data, medium)?,
    };
    let filled = indicator.filled();
    let mut signal: [Vec<f64>; 3] = Default::default();
    for (c, s) in signal.iter_mut().enumerate() {
        let vals: Vec<Complex64> = filled.iter().map(|e| e[c]).collect();
        *s = frequency_to_time(omegas, &vals, times)?;
    }
    Ok(TemporalRecovery {
        indicator,
        times: times.to_vec(),
        signal,
    })
}
