//! Separation of compressional and shear waves outside a disk.
//!
//! For `|x| >= R` the radiated field is `U = grad u_p + curl u_s` with
//! `u_alpha = sum_n u_{alpha,n} H_n(k_alpha r) e^{i n theta}`. In polar
//! components each Fourier mode satisfies
//! `R (U_r, U_theta)_n = A_n (u_{p,n}, u_{s,n})` with
//! `A_n = [[t_p H_n'(t_p), i n H_n(t_s)], [i n H_n(t_p), -t_s H_n'(t_s)]]`,
//! `t_alpha = k_alpha R`.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{config, domain, shape, Error, Result};
use crate::forward::{FrequencySweepData, GridField};
use crate::medium::{hankel1_orders, ElasticMedium, WaveKind};

const DECAY: f64 = 1e-12;
const ILL_CONDITIONED: f64 = 1e-13;

/// Hankel values `H_m(x)` for `m = -(n+1) ..= n+1` via reflection.
struct HankelTable {
    values: Vec<Complex64>,
}

impl HankelTable {
    fn new(n: usize, x: f64) -> Result<Self> {
        Ok(Self {
            values: hankel1_orders(n + 1, x)?,
        })
    }

    fn get(&self, m: i32) -> Complex64 {
        let v = self.values[m.unsigned_abs() as usize];
        if m < 0 && m % 2 != 0 {
            -v
        } else {
            v
        }
    }

    /// `x H_m'(x) = x H_{m-1}(x) - m H_m(x)`.
    fn x_deriv(&self, m: i32, x: f64) -> Complex64 {
        self.get(m - 1) * x - self.get(m) * m as f64
    }
}

/// Modal coefficients of both potentials at one frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct ModalCoefficients {
    pub omega: f64,
    pub radius: f64,
    pub k_p: f64,
    pub k_s: f64,
    order: usize,
    u_p: Vec<Complex64>,
    u_s: Vec<Complex64>,
}

impl ModalCoefficients {
    /// Builds coefficients for orders `-N..=N` from slices of length `2N+1`.
    pub fn new(
        medium: &ElasticMedium,
        omega: f64,
        radius: f64,
        u_p: Vec<Complex64>,
        u_s: Vec<Complex64>,
    ) -> Result<Self> {
        if u_p.len() != u_s.len() || u_p.len() % 2 != 1 {
            return Err(shape("modal coefficients need 2N+1 entries for each wave type"));
        }
        if !(radius > 0.0) {
            return Err(domain(format!("radius must be > 0, got {radius}")));
        }
        Ok(Self {
            omega,
            radius,
            k_p: medium.wavenumber(WaveKind::P, omega)?,
            k_s: medium.wavenumber(WaveKind::S, omega)?,
            order: u_p.len() / 2,
            u_p,
            u_s,
        })
    }

    /// Largest order `N`.
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn orders(&self) -> std::ops::RangeInclusive<i32> {
        -(self.order as i32)..=self.order as i32
    }

    fn slot(&self, n: i32) -> Option<usize> {
        (n.unsigned_abs() as usize <= self.order).then(|| (n + self.order as i32) as usize)
    }

    pub fn p(&self, n: i32) -> Complex64 {
        self.slot(n).map_or(Complex64::new(0.0, 0.0), |i| self.u_p[i])
    }

    pub fn s(&self, n: i32) -> Complex64 {
        self.slot(n).map_or(Complex64::new(0.0, 0.0), |i| self.u_s[i])
    }

    pub fn get(&self, kind: WaveKind, n: i32) -> Complex64 {
        match kind {
            WaveKind::P => self.p(n),
            WaveKind::S => self.s(n),
        }
    }

    pub fn p_coefficients(&self) -> &[Complex64] {
        &self.u_p
    }

    pub fn s_coefficients(&self) -> &[Complex64] {
        &self.u_s
    }

    /// Cartesian field `grad u_p + curl u_s` at polar position `(r, theta)`, `r >= R`.
    pub fn field(&self, r: f64, theta: f64) -> Result<[Complex64; 2]> {
        self.check_radius(r)?;
        let n = self.order;
        let (tp, ts) = (self.k_p * r, self.k_s * r);
        let hp = HankelTable::new(n, tp)?;
        let hs = HankelTable::new(n, ts)?;
        let i = Complex64::new(0.0, 1.0);
        let (mut ur, mut ut) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        for m in self.orders() {
            let e = Complex64::from_polar(1.0, m as f64 * theta);
            let (a, b) = (self.p(m), self.s(m));
            let im = i * m as f64;
            ur += e * (a * hp.x_deriv(m, tp) + b * im * hs.get(m)) / r;
            ut += e * (a * im * hp.get(m) - b * hs.x_deriv(m, ts)) / r;
        }
        let (c, s) = (theta.cos(), theta.sin());
        Ok([ur * c - ut * s, ur * s + ut * c])
    }

    fn check_radius(&self, r: f64) -> Result<()> {
        if r < self.radius * (1.0 - 1e-12) {
            return Err(domain(format!(
                "radius {r} is inside the decoupling circle of radius {}",
                self.radius
            )));
        }
        Ok(())
    }
}

/// `det A_n` without the cancellation of the direct expansion.
fn det_a(n: i32, tp: f64, ts: f64, hp: &HankelTable, hs: &HankelTable) -> Complex64 {
    let nf = n as f64;
    let (p1, p0) = (hp.get(n - 1), hp.get(n));
    let (s1, s0) = (hs.get(n - 1), hs.get(n));
    (p1 * s0 * tp + s1 * p0 * ts) * nf - p1 * s1 * (tp * ts)
}

/// Decouples Cartesian samples `values[j] = U(R, theta0 + 2 pi j / M)`.
///
/// `n_max` caps the expansion order; the order actually kept is the
/// smallest at which both potentials' coefficients fall below `1e-12` of
/// their maximum, and never exceeds `M/2 - 1`.
pub fn decouple_samples(
    values: &[[Complex64; 2]],
    theta0: f64,
    medium: &ElasticMedium,
    omega: f64,
    radius: f64,
    n_max: usize,
) -> Result<ModalCoefficients> {
    let m = values.len();
    if m < 4 {
        return Err(config(format!("need at least 4 receivers on the circle, got {m}")));
    }
    let cap = n_max.min(m / 2 - 1);
    let k_p = medium.wavenumber(WaveKind::P, omega)?;
    let k_s = medium.wavenumber(WaveKind::S, omega)?;
    let (tp, ts) = (k_p * radius, k_s * radius);
    let hp = HankelTable::new(cap, tp)?;
    let hs = HankelTable::new(cap, ts)?;

    // Polar components and their discrete Fourier coefficients.
    let polar: Vec<(Complex64, Complex64)> = values
        .iter()
        .enumerate()
        .map(|(j, u)| {
            let th = theta0 + 2.0 * PI * j as f64 / m as f64;
            let (c, s) = (th.cos(), th.sin());
            (u[0] * c + u[1] * s, -u[0] * s + u[1] * c)
        })
        .collect();
    let i = Complex64::new(0.0, 1.0);
    let n_all = 2 * cap + 1;
    let mut u_p = vec![Complex64::new(0.0, 0.0); n_all];
    let mut u_s = u_p.clone();
    for (slot, n) in (-(cap as i32)..=cap as i32).enumerate() {
        let (mut fr, mut ft) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        for (j, (ur, ut)) in polar.iter().enumerate() {
            let e = Complex64::from_polar(1.0, -(n as f64) * (theta0 + 2.0 * PI * j as f64 / m as f64));
            fr += ur * e;
            ft += ut * e;
        }
        let (fr, ft) = (fr * (radius / m as f64), ft * (radius / m as f64));

        let a11 = hp.x_deriv(n, tp);
        let a12 = i * n as f64 * hs.get(n);
        let a21 = i * n as f64 * hp.get(n);
        let a22 = -hs.x_deriv(n, ts);
        let det = det_a(n, tp, ts, &hp, &hs);
        let scale = a11.norm().hypot(a21.norm()) * a12.norm().hypot(a22.norm());
        if !(det.norm() >= ILL_CONDITIONED * scale) {
            return Err(Error::IllConditionedMode {
                order: n,
                det: det.norm(),
                scale,
            });
        }
        u_p[slot] = (a22 * fr - a12 * ft) / det;
        u_s[slot] = (a11 * ft - a21 * fr) / det;
    }

    // Adaptive truncation.
    let max_p = u_p.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let max_s = u_s.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let small = |n: usize| {
        let lo = cap - n;
        let hi = cap + n;
        u_p[lo].norm().max(u_p[hi].norm()) <= DECAY * max_p
            && u_s[lo].norm().max(u_s[hi].norm()) <= DECAY * max_s
    };
    // Smallest order beyond which every coefficient is negligible.
    let order = (0..=cap).rev().find(|&n| !small(n)).map_or(0, |n| (n + 1).min(cap));
    let keep = cap - order..=cap + order;
    ModalCoefficients::new(medium, omega, radius, u_p[keep.clone()].to_vec(), u_s[keep].to_vec())
}

/// Receiver angles of a uniformly spaced circular array, or an error.
fn circle_angles(data: &FrequencySweepData) -> Result<(f64, f64)> {
    let rec = data.receivers();
    let radius = rec
        .radius()
        .ok_or_else(|| config("decoupling needs receivers on a common circle"))?;
    if rec.dim() != 2 || data.components() != 2 {
        return Err(shape("decoupling needs two-component 2D data"));
    }
    let m = rec.len();
    let p0 = rec.points()[0];
    let theta0 = p0[1].atan2(p0[0]);
    for (j, p) in rec.points().iter().enumerate() {
        let th = theta0 + 2.0 * PI * j as f64 / m as f64;
        let err = (p[0] - radius * th.cos()).hypot(p[1] - radius * th.sin());
        if err > 1e-9 * radius {
            return Err(config("receivers must be uniformly spaced on the circle in angular order"));
        }
    }
    Ok((radius, theta0))
}

/// Decouples the data at frequency index `k` of a circular sweep.
pub fn decouple_circle(
    data: &FrequencySweepData,
    k: usize,
    medium: &ElasticMedium,
    n_max: usize,
) -> Result<ModalCoefficients> {
    let (radius, theta0) = circle_angles(data)?;
    let omega = *data
        .omegas()
        .get(k)
        .ok_or_else(|| domain(format!("frequency index {k} out of range")))?;
    let values: Vec<[Complex64; 2]> = (0..data.receivers().len())
        .map(|j| [data.get(j, 0, k), data.get(j, 1, k)])
        .collect();
    decouple_samples(&values, theta0, medium, omega, radius, n_max)
}

/// Potentials `u_alpha(r, theta) = sum_n u_{alpha,n} H_n(k_alpha r) e^{i n theta}`.
pub fn modal_to_potentials(
    coeffs: &ModalCoefficients,
    radius: f64,
    angles: &[f64],
) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    coeffs.check_radius(radius)?;
    let n = coeffs.order();
    let hp = HankelTable::new(n, coeffs.k_p * radius)?;
    let hs = HankelTable::new(n, coeffs.k_s * radius)?;
    let mut up = Vec::with_capacity(angles.len());
    let mut us = Vec::with_capacity(angles.len());
    for &th in angles {
        let (mut a, mut b) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        for m in coeffs.orders() {
            let e = Complex64::from_polar(1.0, m as f64 * th);
            a += coeffs.p(m) * hp.get(m) * e;
            b += coeffs.s(m) * hs.get(m) * e;
        }
        up.push(a);
        us.push(b);
    }
    Ok((up, us))
}

/// Splits a sampled frequency-domain field into `U_p = -(1/k_p^2) grad div U`
/// and `U_s = (1/k_s^2) curl curl U` with fourth-order central differences.
/// The results live on the grid with two points trimmed from every edge.
pub fn decompose_field_2d(
    u: &GridField<Complex64>,
    medium: &ElasticMedium,
    omega: f64,
) -> Result<(GridField<Complex64>, GridField<Complex64>)> {
    if u.dim() != 2 || u.components() != 2 {
        return Err(shape("field decomposition needs a two-component 2D grid"));
    }
    let (n0, n1) = (u.shape()[0], u.shape()[1]);
    if n0 < 5 || n1 < 5 {
        return Err(config("field decomposition needs at least 5 points per axis"));
    }
    let k_p = medium.wavenumber(WaveKind::P, omega)?;
    let k_s = medium.wavenumber(WaveKind::S, omega)?;
    let (h0, h1) = (u.spacing()[0], u.spacing()[1]);
    let ppw = 2.0 * PI / (k_s * h0.max(h1));
    if ppw < 4.0 {
        return Err(config(format!(
            "grid resolves only {ppw:.2} points per shear wavelength (need at least 4)"
        )));
    }
    let at = |c: usize, i: usize, j: usize| u.component(c)[i * n1 + j];
    let d1 = [1.0 / 12.0, -8.0 / 12.0, 0.0, 8.0 / 12.0, -1.0 / 12.0];
    let d2 = [-1.0 / 12.0, 16.0 / 12.0, -30.0 / 12.0, 16.0 / 12.0, -1.0 / 12.0];
    let dxx = |c: usize, i: usize, j: usize| -> Complex64 {
        (0..5).map(|s| at(c, i + s - 2, j) * d2[s]).sum::<Complex64>() / (h0 * h0)
    };
    let dyy = |c: usize, i: usize, j: usize| -> Complex64 {
        (0..5).map(|s| at(c, i, j + s - 2) * d2[s]).sum::<Complex64>() / (h1 * h1)
    };
    let dxy = |c: usize, i: usize, j: usize| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for a in 0..5 {
            if d1[a] == 0.0 {
                continue;
            }
            for b in 0..5 {
                if d1[b] != 0.0 {
                    acc += at(c, i + a - 2, j + b - 2) * (d1[a] * d1[b]);
                }
            }
        }
        acc / (h0 * h1)
    };
    let (m0, m1) = (n0 - 4, n1 - 4);
    let mut up = vec![Complex64::new(0.0, 0.0); 2 * m0 * m1];
    let mut us = up.clone();
    for i in 2..n0 - 2 {
        for j in 2..n1 - 2 {
            let o = (i - 2) * m1 + (j - 2);
            let (u1xx, u1yy, u1xy) = (dxx(0, i, j), dyy(0, i, j), dxy(0, i, j));
            let (u2xx, u2yy, u2xy) = (dxx(1, i, j), dyy(1, i, j), dxy(1, i, j));
            up[o] = -(u1xx + u2xy) / (k_p * k_p);
            up[m0 * m1 + o] = -(u1xy + u2yy) / (k_p * k_p);
            us[o] = (u2xy - u1yy) / (k_s * k_s);
            us[m0 * m1 + o] = (u1xy - u2xx) / (k_s * k_s);
        }
    }
    let origin = vec![u.origin()[0] + 2.0 * h0, u.origin()[1] + 2.0 * h1];
    let spacing = u.spacing().to_vec();
    Ok((
        GridField::new(2, origin.clone(), spacing.clone(), vec![m0, m1], up)?,
        GridField::new(2, origin, spacing, vec![m0, m1], us)?,
    ))
}
