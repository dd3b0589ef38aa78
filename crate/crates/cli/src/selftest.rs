//! Quick invariant checks across every module, with per-suite timings.

use std::time::Instant;

use lamesrc::forward::{linear_sweep, synthesize_frequency_data_2d, FrequencySweepData, GridField, ReceiverArray};
use lamesrc::greens::{vanish_time, ExperimentGeometry, GreensFrequency};
use lamesrc::inversion::{build_operator, indicator_i1, KernelKind, KernelPart, RadiatingMatrix};
use lamesrc::medium::{hankel1, hankel1_orders};
use lamesrc::transforms::{decouple_samples, fourier_sum, helmholtz_decompose_2d, Pulse, VectorPulse};
use lamesrc::{scenario, Dimension, ElasticMedium, WaveKind};
use num_complex::Complex64;

use crate::error::CliError;

pub struct Check {
    pub name: &'static str,
    pub tolerance: f64,
    run: fn(&ElasticMedium) -> Result<f64, CliError>,
}

pub struct CheckResult {
    pub name: &'static str,
    pub value: f64,
    pub tolerance: f64,
    pub seconds: f64,
    pub error: Option<String>,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.error.is_none() && self.value <= self.tolerance
    }
}

fn medium_hankel(_: &ElasticMedium) -> Result<f64, CliError> {
    // Upward recurrence against the table.
    let x = 3.7;
    let t = hankel1_orders(30, x)?;
    let mut worst = 0.0f64;
    for n in 1..30 {
        let rec = t[n] * (2.0 * n as f64 / x) - t[n - 1];
        worst = worst.max((rec - t[n + 1]).norm() / t[n + 1].norm());
    }
    let neg = hankel1(-3, x)? + t[3];
    Ok(worst.max(neg.norm() / t[3].norm()))
}

fn greens_symmetry(m: &ElasticMedium) -> Result<f64, CliError> {
    let g = GreensFrequency::new(m, 4.2, Dimension::Three)?;
    let a = g.tensor3([0.3, -0.7, 1.1])?;
    let b = g.tensor3([-0.3, 0.7, -1.1])?;
    Ok(((a - a.transpose()).norm() + (a - b).norm()) / a.norm())
}

fn greens_vanish(m: &ElasticMedium) -> Result<f64, CliError> {
    let (_, ts) = vanish_time(m, &ExperimentGeometry::new(1.0, 2.0, 5.0)?);
    Ok((ts - 8.0).abs())
}

fn forward_zero_source(m: &ElasticMedium) -> Result<f64, CliError> {
    let f = GridField::<f64>::centered_cells(2, 2, 1.0, 8)?.with_support(1.0)?;
    let om = [1.0, 2.0];
    let d = synthesize_frequency_data_2d(m, &f, &Pulse::standard().spectrum(&om), &om, &ReceiverArray::circle(2.0, 8)?)?;
    Ok(d.values().iter().map(|v| v.norm()).fold(0.0, f64::max))
}

fn transforms_fourier(_: &ElasticMedium) -> Result<f64, CliError> {
    let p = Pulse::standard();
    let dt = 1e-3;
    let samples = p.sample(&(0..=5000).map(|i| i as f64 * dt).collect::<Vec<_>>());
    let mut worst = 0.0f64;
    for w in [1.0, 4.0, 9.0] {
        let num = fourier_sum(&samples, 0.0, dt, w);
        worst = worst.max((num - p.spectrum_at(w)).norm());
    }
    Ok(worst)
}

fn transforms_modal(m: &ElasticMedium) -> Result<f64, CliError> {
    // A pure P mode of order 2: grad(H_2(k_p r) e^{2 i theta}).
    let (omega, r, mm) = (3.0, 2.0, 32);
    let k = m.wavenumber(WaveKind::P, omega)?;
    let vals: Vec<[Complex64; 2]> = (0..mm)
        .map(|j| {
            let th = 2.0 * std::f64::consts::PI * j as f64 / mm as f64;
            let h = hankel1(2, k * r).unwrap();
            let dh = (hankel1(1, k * r).unwrap() - hankel1(3, k * r).unwrap()) * (0.5 * k);
            let e = Complex64::from_polar(1.0, 2.0 * th);
            let (ur, ut) = (dh * e, h * e * Complex64::new(0.0, 2.0 / r));
            [ur * th.cos() - ut * th.sin(), ur * th.sin() + ut * th.cos()]
        })
        .collect();
    let c = decouple_samples(&vals, 0.0, m, omega, r, 15)?;
    let mut worst = (c.p(2) - 1.0).norm();
    for n in c.orders() {
        if n != 2 {
            worst = worst.max(c.p(n).norm());
        }
        worst = worst.max(c.s(n).norm());
    }
    Ok(worst)
}

fn transforms_helmholtz(_: &ElasticMedium) -> Result<f64, CliError> {
    let f = scenario::field_grid(96, 3.0, None)?;
    let (fp, _) = helmholtz_decompose_2d(&f)?;
    let (tp, _) = scenario::potential_grids(96, 3.0, None)?;
    let mp = tp.values().iter().sum::<f64>() / tp.len() as f64;
    let num: f64 = fp.values().iter().zip(tp.values()).map(|(a, b)| (a - b + mp).powi(2)).sum();
    let den: f64 = tp.values().iter().map(|b| (b - mp).powi(2)).sum();
    Ok((num / den).sqrt())
}

fn inversion_adjoint(m: &ElasticMedium) -> Result<f64, CliError> {
    let grid = GridField::<f64>::centered_cells(2, 2, 1.0, 12)?.clipped_to(1.0);
    let op = build_operator(KernelKind::Full, KernelPart::Real, m, 4.0, &grid, &ReceiverArray::circle(2.0, 16)?)?;
    let s: Vec<f64> = (0..op.cols()).map(|j| (0.37 * j as f64).sin()).collect();
    let r: Vec<f64> = (0..op.rows()).map(|j| (0.53 * j as f64).cos()).collect();
    let vs = op.apply_vec(&s)?;
    let lhs: f64 = vs.iter().zip(&r).map(|(a, b)| a * b).sum();
    let rhs = op.grid_dot(&s, &op.adjoint_vec(&r)?);
    let scale = vs.iter().map(|v| v * v).sum::<f64>().sqrt() * r.iter().map(|v| v * v).sum::<f64>().sqrt();
    Ok((lhs - rhs).abs() / scale)
}

fn inversion_indicator(m: &ElasticMedium) -> Result<f64, CliError> {
    let g = VectorPulse::standard();
    let om = linear_sweep(1.0, 20.0, 10);
    let x0 = [1.0, 1.0, 0.0];
    let mut d = FrequencySweepData::zeros(ReceiverArray::from_points(3, vec![x0])?, 3, om.clone())?;
    for (k, &w) in om.iter().enumerate() {
        let wm = RadiatingMatrix::point_source(m, w, x0)?;
        let gh = g.spectrum_at(w);
        for i in 0..3 {
            d.set(0, i, k, (0..3).map(|j| wm.w[(i, j)] * gh[j]).sum());
        }
    }
    let r = indicator_i1(&d, m, 0)?;
    let mut worst = 0.0f64;
    for (e, &w) in r.estimates.iter().zip(&om) {
        let e = e.ok_or_else(|| CliError::Numeric(format!("W singular at omega = {w}")))?;
        let t = g.spectrum_at(w);
        worst = worst.max((0..3).map(|i| (e[i] - t[i]).norm()).fold(0.0, f64::max));
    }
    Ok(worst)
}

pub fn checks() -> Vec<Check> {
    vec![
        Check { name: "medium.hankel_recurrence", tolerance: 1e-10, run: medium_hankel },
        Check { name: "greens.symmetry", tolerance: 1e-14, run: greens_symmetry },
        Check { name: "greens.vanish_time", tolerance: 0.0, run: greens_vanish },
        Check { name: "forward.zero_source", tolerance: 0.0, run: forward_zero_source },
        Check { name: "transforms.fourier", tolerance: 1e-6, run: transforms_fourier },
        Check { name: "transforms.modal", tolerance: 1e-8, run: transforms_modal },
        Check { name: "transforms.helmholtz", tolerance: 2e-2, run: transforms_helmholtz },
        Check { name: "inversion.adjoint", tolerance: 1e-12, run: inversion_adjoint },
        Check { name: "inversion.indicator", tolerance: 1e-10, run: inversion_indicator },
    ]
}

/// Runs every check. A name in `breach` has its tolerance forced below any
/// attainable value, so that check is reported as a named failure.
pub fn run(medium: &ElasticMedium, breach: &[String]) -> Result<Vec<CheckResult>, CliError> {
    let all = checks();
    for b in breach {
        if !all.iter().any(|c| c.name == b) {
            let names: Vec<_> = all.iter().map(|c| c.name).collect();
            return Err(CliError::Config(format!("unknown check {b:?}; known: {}", names.join(", "))));
        }
    }
    Ok(all
        .into_iter()
        .map(|c| {
            let tolerance = if breach.iter().any(|b| b == c.name) { -1.0 } else { c.tolerance };
            let t = Instant::now();
            let r = (c.run)(medium);
            let seconds = t.elapsed().as_secs_f64();
            let (value, error) = match r {
                Ok(v) if v.is_finite() => (v, None),
                Ok(v) => (v, Some(format!("non-finite value {v}"))),
                Err(e) => (f64::NAN, Some(e.to_string())),
            };
            CheckResult { name: c.name, value, tolerance, seconds, error }
        })
        .collect())
}
