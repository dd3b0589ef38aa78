//! Time series from the closed-form point-force response -> indicators.

use lamesrc::forward::{ReceiverArray, TimeSeriesData};
use lamesrc::greens::point_source_series;
use lamesrc::inversion::{add_noise, indicator_i1, indicator_i2, recover_temporal, ring_points, IndicatorMethod};
use lamesrc::transforms::{time_to_frequency, VectorPulse};
use lamesrc::ElasticMedium;
use num_complex::Complex64;

fn medium() -> ElasticMedium {
    ElasticMedium::new(2.0, 1.0, 1.0).unwrap()
}

fn series(points: &[[f64; 3]], t_end: f64, dt: f64) -> TimeSeriesData {
    let m = medium();
    let g = VectorPulse::standard();
    let times: Vec<f64> = (0..=(t_end / dt).round() as usize).map(|i| i as f64 * dt).collect();
    let rec = ReceiverArray::from_points(3, points.to_vec()).unwrap();
    let mut s = TimeSeriesData::zeros(rec, 3, 0.0, dt, times.len()).unwrap();
    for (j, x) in points.iter().enumerate() {
        let u = point_source_series(&m, &g, *x, &times).unwrap();
        for c in 0..3 {
            s.trace_mut(j, c).iter_mut().zip(&u).for_each(|(d, v)| *d = v[c]);
        }
    }
    s
}

fn rms(est: &[[Complex64; 3]], omegas: &[f64]) -> f64 {
    let g = VectorPulse::standard();
    let s: f64 = est
        .iter()
        .zip(omegas)
        .map(|(e, &w)| {
            let t = g.spectrum_at(w);
            (0..3).map(|i| (e[i] - t[i]).norm_sqr()).sum::<f64>()
        })
        .sum();
    (s / (3 * est.len()) as f64).sqrt()
}

#[test]
fn noise_free_indicators_track_the_pulse_spectrum() {
    let omegas: Vec<f64> = (1..=10).map(|k| 2.0 * k as f64).collect();
    let s = series(&ring_points(8), 20.0, 0.01);
    let d = time_to_frequency(&s, &omegas).unwrap();
    let m = medium();
    let g = VectorPulse::standard();
    let peak = omegas.iter().map(|&w| g.spectrum_at(w).iter().map(|v| v.norm()).fold(0.0, f64::max)).fold(0.0, f64::max);
    for r in [indicator_i1(&d, &m, 0).unwrap(), indicator_i2(&d, &m).unwrap()] {
        assert_eq!(r.failures(), 0);
        // Limited by the time-sampling of the closed form.
        assert!(rms(&r.filled(), &omegas) < 1e-4 * peak, "{}", r.method.label());
    }
}

#[test]
fn averaging_reduces_noise() {
    let omegas: Vec<f64> = (1..=20).map(|k| k as f64).collect();
    let clean = series(&ring_points(16), 20.0, 0.02);
    let m = medium();
    let mut wins = 0;
    for seed in 1..=5 {
        let d = time_to_frequency(&add_noise(&clean, 0.3, seed).unwrap(), &omegas).unwrap();
        let e1 = rms(&indicator_i1(&d, &m, 0).unwrap().filled(), &omegas);
        let e2 = rms(&indicator_i2(&d, &m).unwrap().filled(), &omegas);
        if e2 < e1 {
            wins += 1;
        }
    }
    assert!(wins >= 4, "I2 better in only {wins}/5 seeds");
}

#[test]
fn recovered_signal_matches_pulse() {
    let s = series(&[[1.0, 1.0, 0.0]], 20.0, 0.01);
    let times = s.times();
    let grid: Vec<f64> = (0..250).map(|k| (k as f64 + 0.5) * 0.1).collect();
    let r = recover_temporal(&s, &medium(), &grid, &times, IndicatorMethod::I1, 0).unwrap();
    let g = VectorPulse::standard();
    for c in 0..3 {
        let truth = g.0[c].sample(&times);
        let num: f64 = r.signal[c].iter().zip(&truth).map(|(a, b)| (a - b).powi(2)).sum();
        let den: f64 = truth.iter().map(|b| b * b).sum();
        assert!((num / den).sqrt() < 1e-2, "component {c}: {}", (num / den).sqrt());
    }
}

#[test]
fn non_uniform_recovery_grid_rejected() {
    let s = series(&[[1.0, 1.0, 0.0]], 2.0, 0.1);
    let times = s.times();
    let bad = [0.05, 0.15, 0.3];
    assert!(recover_temporal(&s, &medium(), &bad, &times, IndicatorMethod::I1, 0).is_err());
}
