use std::f64::consts::PI;

use lamesrc::forward::{
    synthesize_frequency_data_2d, FrequencySweepData, GridField, ReceiverArray, TimeSeriesData,
};
use lamesrc::greens::GreensFrequency;
use lamesrc::inversion::{
    add_noise, build_operator, indicator_i1, indicator_i2, ring_points, KernelKind, KernelPart, RadiatingMatrix,
};
use lamesrc::transforms::{
    decouple_samples, helmholtz_decompose_2d, time_to_frequency, ModalCoefficients, Pulse,
};
use lamesrc::{Dimension, ElasticMedium};
use num_complex::Complex64;
use proptest::prelude::*;

fn medium() -> ElasticMedium {
    ElasticMedium::new(2.0, 1.0, 1.0).unwrap()
}

fn kind_of(i: usize) -> KernelKind {
    [KernelKind::Full, KernelKind::P, KernelKind::S][i % 3]
}

fn part_of(i: usize) -> KernelPart {
    [KernelPart::Real, KernelPart::Imag, KernelPart::Stacked][i % 3]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn greens_tensor_symmetric_and_even(
        x in prop::array::uniform3(-2.0f64..2.0),
        omega in 0.5f64..20.0,
        lambda in 0.1f64..5.0,
        mu in 0.2f64..3.0,
    ) {
        let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
        prop_assume!(r > 0.1);
        let m = ElasticMedium::new(lambda, mu, 1.3).unwrap();
        let g = GreensFrequency::new(&m, omega, Dimension::Three).unwrap();
        let a = g.tensor3(x).unwrap();
        let b = g.tensor3([-x[0], -x[1], -x[2]]).unwrap();
        prop_assert!((a - a.transpose()).norm() <= 1e-14 * a.norm());
        prop_assert!((a - b).norm() <= 1e-14 * a.norm());
    }

    #[test]
    fn adjoint_identity(
        kind in 0usize..3,
        part in 0usize..3,
        omega in 0.5f64..20.0,
        seed in any::<u64>(),
    ) {
        let (kind, part) = (kind_of(kind), part_of(part));
        let grid = GridField::<f64>::centered_cells(2, kind.components(), 1.0, 10).unwrap().clipped_to(1.0);
        let op = build_operator(kind, part, &medium(), omega, &grid, &ReceiverArray::circle(2.0, 12).unwrap()).unwrap();
        let mut s = seed;
        let mut next = || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (s >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let x: Vec<f64> = (0..op.cols()).map(|_| next()).collect();
        let r: Vec<f64> = (0..op.rows()).map(|_| next()).collect();
        let vx = op.apply_vec(&x).unwrap();
        let lhs: f64 = vx.iter().zip(&r).map(|(a, b)| a * b).sum();
        let rhs = op.grid_dot(&x, &op.adjoint_vec(&r).unwrap());
        let scale = vx.iter().map(|v| v * v).sum::<f64>().sqrt() * r.iter().map(|v| v * v).sum::<f64>().sqrt();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * scale);
    }

    #[test]
    fn synthesis_is_linear_in_the_source(a in -2.0f64..2.0, b in -2.0f64..2.0, omega in 0.5f64..15.0) {
        let m = medium();
        let mk = |p: [f64; 2]| {
            GridField::from_fn(2, vec![-0.75; 2], vec![0.25; 2], vec![6; 2], move |x, o| {
                let e = (-((x[0] - p[0]).powi(2) + (x[1] - p[1]).powi(2)) * 4.0).exp();
                o.copy_from_slice(&[e, -0.5 * e]);
            })
            .unwrap()
            .clipped_to(1.0)
        };
        let (f1, f2) = (mk([0.2, 0.1]), mk([-0.3, 0.0]));
        let comb: Vec<f64> = f1.values().iter().zip(f2.values()).map(|(x, y)| a * x + b * y).collect();
        let f = f1.with_values(2, comb).unwrap();
        let om = [omega];
        let gh = Pulse::standard().spectrum(&om);
        let rec = ReceiverArray::circle(2.0, 6).unwrap();
        let d1 = synthesize_frequency_data_2d(&m, &f1, &gh, &om, &rec).unwrap();
        let d2 = synthesize_frequency_data_2d(&m, &f2, &gh, &om, &rec).unwrap();
        let d = synthesize_frequency_data_2d(&m, &f, &gh, &om, &rec).unwrap();
        let scale = d1.values().iter().chain(d2.values()).map(|v| v.norm()).fold(0.0, f64::max);
        for i in 0..d.values().len() {
            let lin = d1.values()[i] * a + d2.values()[i] * b;
            prop_assert!((d.values()[i] - lin).norm() <= 1e-12 * scale * (a.abs() + b.abs() + 1.0));
        }
    }

    #[test]
    fn fourier_transform_scales_and_shifts(c in -3.0f64..3.0, shift in 0usize..50, omega in 0.5f64..20.0) {
        let dt = 0.01;
        let rec = ReceiverArray::from_points(3, vec![[1.0, 1.0, 0.0]]).unwrap();
        // Centred late enough that p(0) is below rounding, so the endpoint weight is irrelevant.
        let p = Pulse::cosine_gaussian(1.0, 1.5 * PI, 3.0, 6.0);
        let times: Vec<f64> = (0..1000).map(|i| i as f64 * dt).collect();
        let base = p.sample(&times);
        let mut s = TimeSeriesData::zeros(rec.clone(), 1, 0.0, dt, times.len()).unwrap();
        s.trace_mut(0, 0).copy_from_slice(&base);
        let mut scaled = s.clone();
        scaled.trace_mut(0, 0).iter_mut().for_each(|v| *v *= c);
        // Delaying by `shift` samples multiplies the transform by e^{i w shift dt}.
        let mut delayed = TimeSeriesData::zeros(rec, 1, 0.0, dt, times.len() + shift).unwrap();
        delayed.trace_mut(0, 0)[shift..].copy_from_slice(&base);
        let f = time_to_frequency(&s, &[omega]).unwrap().get(0, 0, 0);
        let fs = time_to_frequency(&scaled, &[omega]).unwrap().get(0, 0, 0);
        let fd = time_to_frequency(&delayed, &[omega]).unwrap().get(0, 0, 0);
        // Rounding is relative to the L1 mass of the samples, not to |f|.
        let mass: f64 = base.iter().map(|v| v.abs()).sum::<f64>() * dt;
        prop_assert!((fs - f * c).norm() <= 1e-13 * mass * c.abs().max(1.0));
        let phase = Complex64::from_polar(1.0, omega * shift as f64 * dt);
        prop_assert!((fd - f * phase).norm() <= 1e-12 * mass);
    }

    #[test]
    fn helmholtz_splits_gradient_and_curl(
        cx in -0.5f64..0.5, cy in -0.5f64..0.5, w in 0.25f64..0.35, a in -2.0f64..2.0, b in -2.0f64..2.0,
    ) {
        // f = a grad(phi) + b curl(psi) with Gaussian phi, psi.
        let n = 96;
        let g = GridField::<f64>::centered_cells(2, 2, 4.0, n).unwrap();
        let gauss = |x: f64, y: f64, s: f64| (-((x - cx).powi(2) + (y - cy).powi(2)) / (2.0 * s * s)).exp();
        let f = GridField::from_fn(2, g.origin().to_vec(), g.spacing().to_vec(), g.shape().to_vec(), |p, o| {
            let (x, y) = (p[0], p[1]);
            let phi = gauss(x, y, w);
            let psi = gauss(x, y, 0.8 * w);
            let s2 = (0.8 * w).powi(2);
            let (px, py) = (-(x - cx) / (w * w) * phi, -(y - cy) / (w * w) * phi);
            let (qx, qy) = (-(x - cx) / s2 * psi, -(y - cy) / s2 * psi);
            // curl psi = (d_y psi, -d_x psi)
            o.copy_from_slice(&[a * px + b * qy, a * py - b * qx]);
        })
        .unwrap();
        let (fp, fs) = helmholtz_decompose_2d(&f).unwrap();
        let check = |got: &GridField, amp: f64, s: f64| -> f64 {
            let truth: Vec<f64> = (0..got.len()).map(|i| { let p = got.point(i); amp * gauss(p[0], p[1], s) }).collect();
            let mean = truth.iter().sum::<f64>() / truth.len() as f64;
            got.values().iter().zip(&truth).map(|(u, v)| (u - (v - mean)).abs()).fold(0.0, f64::max)
        };
        prop_assert!(check(&fp, a, w) <= 1e-8 * (a.abs() + b.abs()));
        prop_assert!(check(&fs, b, 0.8 * w) <= 1e-8 * (a.abs() + b.abs()));
    }

    #[test]
    fn modal_round_trip(
        re in prop::collection::vec(-1.0f64..1.0, 22),
        im in prop::collection::vec(-1.0f64..1.0, 22),
        omega in 1.0f64..12.0,
        theta0 in 0.0f64..(2.0 * PI),
    ) {
        let m = medium();
        let c: Vec<Complex64> = re.iter().zip(&im).map(|(a, b)| Complex64::new(*a, *b)).collect();
        let (n, r, count) = (5usize, 2.0, 48);
        let coeffs = ModalCoefficients::new(&m, omega, r, c[..2 * n + 1].to_vec(), c[2 * n + 1..].to_vec()).unwrap();
        let vals: Vec<[Complex64; 2]> = (0..count)
            .map(|j| coeffs.field(r, theta0 + 2.0 * PI * j as f64 / count as f64).unwrap())
            .collect();
        let back = decouple_samples(&vals, theta0, &m, omega, r, 20).unwrap();
        for k in -(n as i32)..=n as i32 {
            prop_assert!((back.p(k) - coeffs.p(k)).norm() <= 1e-9);
            prop_assert!((back.s(k) - coeffs.s(k)).norm() <= 1e-9);
        }
        for k in back.orders() {
            if k.unsigned_abs() as usize > n {
                prop_assert!(back.p(k).norm() <= 1e-9 && back.s(k).norm() <= 1e-9);
            }
        }
    }

    #[test]
    fn indicators_are_linear_in_the_data(
        cr in -3.0f64..3.0, ci in -3.0f64..3.0, omega in 0.5f64..20.0,
    ) {
        let m = medium();
        let pts = ring_points(8);
        let rec = ReceiverArray::from_points(3, pts.clone()).unwrap();
        let mut d = FrequencySweepData::zeros(rec, 3, vec![omega]).unwrap();
        for (j, x) in pts.iter().enumerate() {
            let w = RadiatingMatrix::point_source(&m, omega, *x).unwrap();
            let g = [Complex64::new(1.0, -0.5), Complex64::new(0.2, 0.3), Complex64::new(-0.7, 0.1)];
            for i in 0..3 {
                // Slightly perturbed per point so I_2 really averages.
                let v: Complex64 = (0..3).map(|k| w.w[(i, k)] * g[k]).sum();
                d.set(j, i, 0, v * (1.0 + 0.01 * j as f64));
            }
        }
        let c = Complex64::new(cr, ci);
        prop_assume!(c.norm() > 1e-3);
        let mut dc = d.clone();
        dc.values_mut().iter_mut().for_each(|v| *v *= c);
        for (a, b) in [
            (indicator_i1(&d, &m, 3).unwrap(), indicator_i1(&dc, &m, 3).unwrap()),
            (indicator_i2(&d, &m).unwrap(), indicator_i2(&dc, &m).unwrap()),
        ] {
            let (a, b) = (a.filled()[0], b.filled()[0]);
            for i in 0..3 {
                prop_assert!((b[i] - a[i] * c).norm() <= 1e-12 * a[i].norm().max(1.0) * c.norm());
            }
        }
    }

    #[test]
    fn noise_is_bounded_and_reproducible(delta in 0.0f64..0.5, seed in any::<u64>()) {
        let rec = ReceiverArray::from_points(3, ring_points(3)).unwrap();
        let mut s = TimeSeriesData::zeros(rec, 3, 0.0, 0.1, 20).unwrap();
        for j in 0..3 {
            for c in 0..3 {
                s.trace_mut(j, c).iter_mut().enumerate().for_each(|(n, v)| *v = ((n + 3 * j + c) as f64).sin());
            }
        }
        let a = add_noise(&s, delta, seed).unwrap();
        let b = add_noise(&s, delta, seed).unwrap();
        prop_assert_eq!(&a, &b);
        for (x, y) in a.samples().iter().zip(s.samples()) {
            prop_assert!((x - y).abs() <= delta * y.abs() * (1.0 + 1e-15));
        }
    }
}
