//! Integer-order Bessel functions of the first and second kind and the
//! Hankel function `H_n^(1) = J_n + i Y_n` for real positive argument.
//!
//! `J_n` comes from Miller's backward recurrence normalized with
//! `J_0 + 2 sum J_2k = 1`. `Y_0` and `Y_1` follow from their Neumann series in
//! the same `J_k`, and higher `Y_n` from the (stable) upward recurrence. For
//! orders 0 and 1 at large argument the Hankel asymptotic expansion is used
//! instead.

use num_complex::Complex64;
use std::f64::consts::{FRAC_2_PI, PI};

use crate::error::{domain, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const RESCALE: f64 = 1e250;
const ASYMPTOTIC_MIN_ARG: f64 = 25.0;

fn check_arg(x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("Bessel argument must be finite and > 0, got {x}")))
    }
}

/// Unnormalized backward recurrence, returns `J_0..=J_top` for `top >= n_max`.
fn miller_j(n_max: usize, x: f64) -> Vec<f64> {
    let base = n_max.max(x.ceil() as usize).max(1);
    let start = base + (160.0 * base as f64).sqrt() as usize + 10;
    let start = start + start % 2;
    let mut v = vec![0.0; start + 2];
    v[start] = 1.0;
    for k in (1..=start).rev() {
        v[k - 1] = (2.0 * k as f64 / x) * v[k] - v[k + 1];
        if v[k - 1].abs() > RESCALE {
            for e in &mut v[k - 1..] {
                *e /= RESCALE;
            }
        }
    }
    let mut norm = v[0];
    for k in (2..=start).step_by(2) {
        norm += 2.0 * v[k];
    }
    v.truncate(start + 1);
    for e in &mut v {
        *e /= norm;
    }
    v
}

/// Returns `(J_0..=J_n_max, Y_0..=Y_n_max)` at `x > 0`.
pub fn bessel_jy(n_max: usize, x: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    check_arg(x)?;
    let j = miller_j(n_max, x);
    let log_term = (0.5 * x).ln() + EULER_GAMMA;

    let mut y0_sum = 0.0;
    let mut y1_sum = 0.0;
    let mut k = 1;
    while 2 * k + 1 < j.len() {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        y0_sum -= sign * j[2 * k] / k as f64;
        y1_sum += sign * (j[2 * k - 1] - j[2 * k + 1]) / k as f64;
        k += 1;
    }
    let y0 = FRAC_2_PI * (log_term * j[0] + 2.0 * y0_sum);
    let y1 = FRAC_2_PI * (-j[0] / x + log_term * j[1] + y1_sum);

    let mut y = Vec::with_capacity(n_max + 1);
    y.push(y0);
    if n_max >= 1 {
        y.push(y1);
    }
    for n in 1..n_max {
        let next = (2.0 * n as f64 / x) * y[n] - y[n - 1];
        y.push(next);
    }
    let mut j = j;
    j.truncate(n_max + 1);
    Ok((j, y))
}

/// `H_0^(1)` and `H_1^(1)` via the Hankel asymptotic expansion, valid for large `x`.
fn hankel01_asymptotic(x: f64) -> (Complex64, Complex64) {
    let expand = |nu: f64| {
        let mu = 4.0 * nu * nu;
        let mut p = 1.0;
        let mut q = 0.0;
        let mut term = 1.0;
        for k in 1..80 {
            let odd = (2 * k - 1) as f64;
            term *= (mu - odd * odd) / (k as f64 * 8.0 * x);
            if k % 2 == 1 {
                // a_k / x^k with k odd feeds Q with sign (-1)^((k-1)/2)
                q += if (k / 2) % 2 == 0 { term } else { -term };
            } else {
                p += if (k / 2) % 2 == 0 { term } else { -term };
            }
            if term.abs() < 1e-17 {
                break;
            }
        }
        let chi = x - (0.5 * nu + 0.25) * PI;
        let amp = (FRAC_2_PI / x).sqrt();
        Complex64::new(p, q) * Complex64::from_polar(amp, chi)
    };
    (expand(0.0), expand(1.0))
}

/// `(H_0^(1)(x), H_1^(1)(x))`.
pub fn hankel01(x: f64) -> Result<(Complex64, Complex64)> {
    check_arg(x)?;
    if x >= ASYMPTOTIC_MIN_ARG {
        return Ok(hankel01_asymptotic(x));
    }
    let (j, y) = bessel_jy(1, x)?;
    Ok((Complex64::new(j[0], y[0]), Complex64::new(j[1], y[1])))
}

/// `H_n^(1)(x)` for `n = 0..=n_max`.
pub fn hankel1_orders(n_max: usize, x: f64) -> Result<Vec<Complex64>> {
    check_arg(x)?;
    if n_max <= 1 && x >= ASYMPTOTIC_MIN_ARG {
        let (h0, h1) = hankel01_asymptotic(x);
        let mut out = vec![h0, h1];
        out.truncate(n_max + 1);
        return Ok(out);
    }
    let (j, y) = bessel_jy(n_max, x)?;
    Ok(j.into_iter().zip(y).map(|(a, b)| Complex64::new(a, b)).collect())
}

fn reflect(n: i32, h: Complex64) -> Complex64 {
    if n < 0 && n % 2 != 0 {
        -h
    } else {
        h
    }
}

/// `H_n^(1)(x)` for any integer order, using `H_{-n} = (-1)^n H_n`.
pub fn hankel1(n: i32, x: f64) -> Result<Complex64> {
    let m = n.unsigned_abs() as usize;
    let h = hankel1_orders(m, x)?[m];
    Ok(reflect(n, h))
}

/// `d/dx H_n^(1)(x) = H_{n-1} - (n/x) H_n`.
pub fn hankel1_derivative(n: i32, x: f64) -> Result<Complex64> {
    let m = n.unsigned_abs() as usize;
    let h = hankel1_orders(m.max(1), x)?;
    let d = if m == 0 {
        -h[1]
    } else {
        h[m - 1] - h[m] * (m as f64 / x)
    };
    Ok(reflect(n, d))
}
