//! Time/frequency transforms with `g_hat(w) = int g(t) e^{i w t} dt` and
//! `g(t) = (1/pi) Re int_0^inf g_hat(w) e^{-i w t} dw` for real signals.

use num_complex::Complex64;

use crate::error::{config, domain, Result};
use crate::forward::{check_omegas, FrequencySweepData, TimeSeriesData};
use crate::par;
use crate::quad::trapezoid_weights;

/// Trapezoid approximation of `int U(t) e^{i w t} dt` for samples at `t0 + n dt`.
pub fn fourier_sum(samples: &[f64], t0: f64, dt: f64, omega: f64) -> Complex64 {
    let w = trapezoid_weights(samples.len(), dt);
    let rot = Complex64::from_polar(1.0, omega * dt);
    let mut e = Complex64::from_polar(1.0, omega * t0);
    let mut acc = Complex64::new(0.0, 0.0);
    for (n, (&u, &wn)) in samples.iter().zip(&w).enumerate() {
        if n % 64 == 0 {
            // Re-anchor the phase recurrence.
            e = Complex64::from_polar(1.0, omega * (t0 + n as f64 * dt));
        }
        acc += e * (u * wn);
        e *= rot;
    }
    acc
}

/// Transforms every trace of `series` at the given positive frequencies.
pub fn time_to_frequency(series: &TimeSeriesData, omegas: &[f64]) -> Result<FrequencySweepData> {
    if series.len_time() == 0 || series.receivers().is_empty() {
        return Err(domain("cannot transform an empty series"));
    }
    check_omegas(omegas)?;
    let m = series.receivers().len();
    let c = series.components();
    let nw = omegas.len();
    let vals = par::map_indexed(m * c * nw, |idx| {
        let (trace, k) = (idx / nw, idx % nw);
        fourier_sum(series.trace(trace / c, trace % c), series.t0(), series.dt(), omegas[k])
    });
    FrequencySweepData::new(series.receivers().clone(), c, omegas.to_vec(), vals)
}

/// Quadrature weights for a uniform frequency grid: trapezoid when the grid
/// starts at 0, midpoint when it starts at half a step.
fn inverse_weights(omegas: &[f64]) -> Result<Vec<f64>> {
    if omegas.len() < 2 {
        return Err(config("inverse transform needs at least two frequencies"));
    }
    let dw = omegas[1] - omegas[0];
    if !(dw > 0.0) {
        return Err(config("frequency grid must be increasing"));
    }
    let tol = 1e-9 * dw;
    let uniform = omegas
        .iter()
        .enumerate()
        .all(|(k, &w)| (w - omegas[0] - k as f64 * dw).abs() <= tol * (k as f64 + 1.0));
    if !uniform {
        return Err(config("frequency grid is not uniform"));
    }
    if omegas[0].abs() <= tol {
        Ok(trapezoid_weights(omegas.len(), dw))
    } else if (omegas[0] - 0.5 * dw).abs() <= tol {
        Ok(vec![dw; omegas.len()])
    } else {
        Err(config(format!(
            "frequency grid must start at 0 or at half a step, starts at {}",
            omegas[0]
        )))
    }
}

/// `g(t) = (1/pi) Re sum_k w_k g_hat(w_k) e^{-i w_k t}` at each time.
pub fn frequency_to_time(omegas: &[f64], values: &[Complex64], times: &[f64]) -> Result<Vec<f64>> {
    if omegas.len() != values.len() {
        return Err(domain("spectrum needs one value per frequency"));
    }
    let w = inverse_weights(omegas)?;
    Ok(par::map_slice(times, |&t| {
        let mut acc = 0.0;
        for ((&om, &v), &wk) in omegas.iter().zip(values).zip(&w) {
            acc += wk * (v * Complex64::from_polar(1.0, -om * t)).re;
        }
        acc / std::f64::consts::PI
    }))
}
