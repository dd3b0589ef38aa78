//! Vector receiver data -> modal decoupling -> potential data, checked against
//! direct scalar synthesis of each potential.

use lamesrc::forward::{
    synthesize_frequency_data_2d, synthesize_scalar_frequency_data_2d, FrequencySweepData, ReceiverArray,
};
use lamesrc::inversion::{potential_data, reconstruct, KernelKind, KernelPart, LandweberConfig};
use lamesrc::transforms::{Pulse, Spectrum};
use lamesrc::{scenario, ElasticMedium, WaveKind};
use num_complex::Complex64;

fn medium() -> ElasticMedium {
    ElasticMedium::new(2.0, 1.0, 1.0).unwrap()
}

fn rel(a: &FrequencySweepData, b: &FrequencySweepData, k: usize) -> f64 {
    let m = a.receivers().len();
    let n: f64 = (0..m).map(|j| (a.get(j, 0, k) - b.get(j, 0, k)).norm_sqr()).sum();
    let d: f64 = (0..m).map(|j| b.get(j, 0, k).norm_sqr()).sum();
    (n / d).sqrt()
}

#[test]
fn decoupled_potentials_match_direct_synthesis() {
    let m = medium();
    // Unclipped on [-1.5, 1.5]^2 so the potentials really generate f.
    let f = scenario::field_grid(96, 1.5, Some(1.5)).unwrap();
    let (fp, fs) = scenario::potential_grids(96, 1.5, Some(1.5)).unwrap();
    let om = vec![1.0, 5.0, 10.0, 20.0];
    let gh = Pulse::standard().spectrum(&om);
    let rec = ReceiverArray::circle(2.0, 64).unwrap();
    let d = synthesize_frequency_data_2d(&m, &f, &gh, &om, &rec).unwrap();
    let (up, us) = potential_data(&d, &m, &gh, 31).unwrap();
    let one = Spectrum::new(om.clone(), vec![Complex64::new(1.0, 0.0); om.len()]).unwrap();
    let dp = synthesize_scalar_frequency_data_2d(&m, &fp, WaveKind::P, &one, &om, &rec).unwrap();
    let ds = synthesize_scalar_frequency_data_2d(&m, &fs, WaveKind::S, &one, &om, &rec).unwrap();
    for k in 0..om.len() {
        let (ep, es) = (rel(&up, &dp, k), rel(&us, &ds, k));
        assert!(ep < 1e-4 && es < 1e-4, "omega {}: {ep:e} {es:e}", om[k]);
    }
}

#[test]
fn synthesis_converges_under_refinement() {
    let m = medium();
    let om = vec![3.0, 12.0];
    let gh = Pulse::standard().spectrum(&om);
    let rec = ReceiverArray::circle(2.0, 16).unwrap();
    let run = |n| {
        let f = scenario::field_grid(n, 1.0, Some(1.0)).unwrap();
        synthesize_frequency_data_2d(&m, &f, &gh, &om, &rec).unwrap()
    };
    let (a, b, c) = (run(32), run(64), run(128));
    let diff = |x: &FrequencySweepData, y: &FrequencySweepData| {
        x.values().iter().zip(y.values()).map(|(p, q)| (p - q).norm_sqr()).sum::<f64>().sqrt()
    };
    let (d1, d2) = (diff(&a, &b), diff(&b, &c));
    let scale = c.values().iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    assert!(d2 < d1, "{d1} {d2}");
    // The clipped source has a jump at the rim, so convergence is first order at best.
    assert!(d2 / scale < 5e-2, "{}", d2 / scale);
}

#[test]
fn zero_iterations_return_initial_field() {
    let m = medium();
    let om = vec![2.0, 4.0];
    let gh = Pulse::standard().spectrum(&om);
    let rec = ReceiverArray::circle(2.0, 32).unwrap();
    let f = scenario::field_grid(32, 1.0, Some(1.0)).unwrap();
    let d = synthesize_frequency_data_2d(&m, &f, &gh, &om, &rec).unwrap();
    let (up, _) = potential_data(&d, &m, &gh, 15).unwrap();
    let (tp, _) = scenario::potential_grids(16, 1.0, Some(1.0)).unwrap();
    let cfg = LandweberConfig {
        iterations: 0,
        initial: Some(tp.clone()),
        ..Default::default()
    };
    let r = reconstruct(KernelKind::P, KernelPart::Real, &m, &up, &tp, &cfg).unwrap();
    assert_eq!(r.solution.values(), tp.values());
    assert_eq!(r.trace.len(), 2);
}

#[test]
fn residuals_decrease_within_each_frequency() {
    let m = medium();
    let om: Vec<f64> = (1..=6).map(|k| k as f64 * 2.0).collect();
    let gh = Pulse::standard().spectrum(&om);
    let rec = ReceiverArray::circle(2.0, 32).unwrap();
    let f = scenario::field_grid(64, 1.0, Some(1.0)).unwrap();
    let d = synthesize_frequency_data_2d(&m, &f, &gh, &om, &rec).unwrap();
    let (up, us) = potential_data(&d, &m, &gh, 15).unwrap();
    let (tp, ts) = scenario::potential_grids(24, 1.0, Some(1.0)).unwrap();
    for (kind, data, truth) in [(KernelKind::P, &up, &tp), (KernelKind::S, &us, &ts)] {
        for part in [KernelPart::Real, KernelPart::Imag, KernelPart::Stacked] {
            let cfg = LandweberConfig {
                truth: Some(truth.clone()),
                ..Default::default()
            };
            let r = reconstruct(kind, part, &m, data, truth, &cfg).unwrap();
            assert!(r.residuals_monotone(), "{} {}", kind.label(), part.label());
            assert!(r.warnings.is_empty());
            let first = r.trace.first().unwrap().error.unwrap();
            let last = r.trace.last().unwrap().error.unwrap();
            assert!(last < first, "{} {}: {first} -> {last}", kind.label(), part.label());
        }
    }
}
