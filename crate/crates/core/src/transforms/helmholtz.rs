//! Discrete Helmholtz decomposition `f = grad f_p + curl f_s` of a compactly
//! supported planar field, `curl h = (d2 h, -d1 h)`.
//!
//! Both potentials solve periodic Poisson problems on the grid box,
//! `Lap f_p = div f` and `Lap f_s = -curl f`, inverted spectrally with the
//! mean mode set to zero.

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{domain, shape, Result};
use crate::forward::GridField;

/// Fraction of each edge that must be (numerically) zero.
const MARGIN: f64 = 0.125;

pub fn helmholtz_decompose_2d(f: &GridField) -> Result<(GridField, GridField)> {
    if f.dim() != 2 || f.components() != 2 {
        return Err(shape("Helmholtz decomposition needs a two-component 2D field"));
    }
    check_margin(f)?;
    let (n0, n1) = (f.shape()[0], f.shape()[1]);
    let (h0, h1) = (f.spacing()[0], f.spacing()[1]);

    let mut planner = FftPlanner::<f64>::new();
    let fwd = [planner.plan_fft_forward(n0), planner.plan_fft_forward(n1)];
    let inv = [planner.plan_fft_inverse(n0), planner.plan_fft_inverse(n1)];

    let mut a: Vec<Complex64> = f.component(0).iter().map(|&v| v.into()).collect();
    let mut b: Vec<Complex64> = f.component(1).iter().map(|&v| v.into()).collect();
    fft2(&mut a, n0, n1, &fwd);
    fft2(&mut b, n0, n1, &fwd);

    let wave = |j: usize, n: usize, h: f64| -> f64 {
        // Derivatives of the Nyquist mode are not representable.
        if n % 2 == 0 && j == n / 2 {
            return 0.0;
        }
        let m = if j <= n / 2 { j as f64 } else { j as f64 - n as f64 };
        2.0 * PI * m / (n as f64 * h)
    };
    let i = Complex64::new(0.0, 1.0);
    let mut p = vec![Complex64::new(0.0, 0.0); n0 * n1];
    let mut s = p.clone();
    for j0 in 0..n0 {
        let k0 = wave(j0, n0, h0);
        for j1 in 0..n1 {
            let k1 = wave(j1, n1, h1);
            let k2 = k0 * k0 + k1 * k1;
            if k2 == 0.0 {
                continue;
            }
            let idx = j0 * n1 + j1;
            let div = i * (k0 * a[idx] + k1 * b[idx]);
            let curl = i * (k0 * b[idx] - k1 * a[idx]);
            p[idx] = -div / k2;
            s[idx] = curl / k2;
        }
    }
    fft2(&mut p, n0, n1, &inv);
    fft2(&mut s, n0, n1, &inv);
    let scale = 1.0 / (n0 * n1) as f64;
    let fp = f.with_values(1, p.iter().map(|v| v.re * scale).collect())?;
    let fs = f.with_values(1, s.iter().map(|v| v.re * scale).collect())?;
    Ok((fp, fs))
}

fn check_margin(f: &GridField) -> Result<()> {
    let max = f.max_magnitude();
    if max == 0.0 {
        return Ok(());
    }
    let (n0, n1) = (f.shape()[0], f.shape()[1]);
    let b0 = ((n0 as f64) * MARGIN).ceil() as usize;
    let b1 = ((n1 as f64) * MARGIN).ceil() as usize;
    for c in 0..2 {
        let v = f.component(c);
        for j0 in 0..n0 {
            for j1 in 0..n1 {
                let inner = j0 >= b0 && j0 < n0 - b0 && j1 >= b1 && j1 < n1 - b1;
                if !inner && v[j0 * n1 + j1].abs() > 1e-10 * max {
                    return Err(domain(format!(
                        "field is nonzero at grid index ({j0}, {j1}) inside the {}% boundary margin",
                        MARGIN * 100.0
                    )));
                }
            }
        }
    }
    Ok(())
}

fn fft2(buf: &mut [Complex64], n0: usize, n1: usize, plans: &[Arc<dyn Fft<f64>>; 2]) {
    plans[1].process(buf);
    let mut col = vec![Complex64::new(0.0, 0.0); n0];
    for j1 in 0..n1 {
        for j0 in 0..n0 {
            col[j0] = buf[j0 * n1 + j1];
        }
        plans[0].process(&mut col);
        for j0 in 0..n0 {
            buf[j0 * n1 + j1] = col[j0];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid_from(n: usize, half: f64, f: impl Fn(f64, f64) -> [f64; 2]) -> GridField {
        GridField::from_fn(2, vec![-half; 2], vec![2.0 * half / n as f64; 2], vec![n, n], |p, o| {
            o.copy_from_slice(&f(p[0], p[1]))
        })
        .unwrap()
    }

    fn rel(a: &GridField, b: &[f64]) -> f64 {
        let num: f64 = a.values().iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum();
        let den: f64 = b.iter().map(|y| y * y).sum();
        (num / den).sqrt()
    }

    fn bump(x: f64, y: f64) -> f64 {
        (-6.0 * (x * x + y * y)).exp()
    }

    #[test]
    fn pure_gradient_has_no_shear_part() {
        let f = grid_from(96, 3.0, |x, y| [-12.0 * x * bump(x, y), -12.0 * y * bump(x, y)]);
        let (p, s) = helmholtz_decompose_2d(&f).unwrap();
        let pn = p.l2_norm();
        assert!(s.l2_norm() <= 1e-8 * pn, "{}", s.l2_norm() / pn);
    }

    #[test]
    fn pure_solenoid_has_no_pressure_part() {
        let f = grid_from(96, 3.0, |x, y| [-12.0 * y * bump(x, y), 12.0 * x * bump(x, y)]);
        let (p, s) = helmholtz_decompose_2d(&f).unwrap();
        assert!(p.l2_norm() <= 1e-8 * s.l2_norm());
    }

    #[test]
    fn recovers_potential_up_to_mean() {
        let f = grid_from(128, 3.0, |x, y| [-12.0 * x * bump(x, y), -12.0 * y * bump(x, y)]);
        let (p, _) = helmholtz_decompose_2d(&f).unwrap();
        let mut truth: Vec<f64> = (0..f.len()).map(|i| {
            let q = f.point(i);
            bump(q[0], q[1])
        })
        .collect();
        let mean = truth.iter().sum::<f64>() / truth.len() as f64;
        truth.iter_mut().for_each(|v| *v -= mean);
        assert!(rel(&p, &truth) < 1e-8, "{}", rel(&p, &truth));
    }

    #[test]
    fn margin_violation_rejected() {
        let f = grid_from(64, 1.0, |x, y| [bump(x, y), 0.0]);
        assert!(matches!(helmholtz_decompose_2d(&f), Err(crate::Error::Domain(_))));
    }
}
