//! Spectral solver for `rho U_tt = mu Lap U + (lambda + mu) grad div U + F`
//! with `F_i(x, t) = f_i(x) g_i(t)` on a periodic cube.
//!
//! Each Fourier mode evolves as `U(xi, t) = int_0^t A^{-1/2} sin(A^{1/2}(t-s)) F(xi, s) ds / rho`.
//! `A` splits into the longitudinal projector with eigenvalue `(c_p |xi|)^2`
//! and the transverse one with `(c_s |xi|)^2`, so the time integral only
//! depends on `|xi|`. Modes are grouped by the integer `|n|^2`, the time
//! integrals are done once per group, and the probes are evaluated by direct
//! trigonometric interpolation.

use num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::PI;

use super::data::{ReceiverArray, TimeSeriesData};
use super::grid::GridField;
use crate::error::{config, domain, shape, Result};
use crate::medium::{ElasticMedium, WaveKind};
use crate::par;
use crate::transforms::VectorPulse;

/// Periodic cube `[-half_extent, half_extent)^3` with `n` nodes per axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralBox {
    pub n: usize,
    pub half_extent: f64,
}

impl SpectralBox {
    pub fn new(n: usize, half_extent: f64) -> Result<Self> {
        if n < 4 || n % 2 != 0 {
            return Err(config(format!("spectral grid size must be even and >= 4, got {n}")));
        }
        if !(half_extent > 0.0) {
            return Err(domain(format!("box half extent must be > 0, got {half_extent}")));
        }
        Ok(Self { n, half_extent })
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_extent / self.n as f64
    }

    pub fn nyquist(&self) -> f64 {
        PI / self.spacing()
    }

    fn dxi(&self) -> f64 {
        PI / self.half_extent
    }

    fn volume(&self) -> f64 {
        (2.0 * self.half_extent).powi(3)
    }

    /// Signed mode number of FFT index `j`.
    fn mode(&self, j: usize) -> i64 {
        let n = self.n as i64;
        let j = j as i64;
        if j < n / 2 {
            j
        } else {
            j - n
        }
    }
}

/// Spatial factor of a separable source.
#[derive(Debug, Clone, PartialEq)]
pub enum SpatialSource {
    /// Samples on the periodic nodes of the box.
    Grid(GridField),
    /// `amplitude_i (2 pi w^2)^{-3/2} exp(-|x - center|^2 / (2 w^2))`; its
    /// transform is evaluated in closed form.
    Gaussian {
        center: [f64; 3],
        width: f64,
        amplitude: [f64; 3],
    },
}

impl SpatialSource {
    /// Radius of a ball about the origin outside which the source is negligible.
    fn extent(&self) -> f64 {
        match self {
            SpatialSource::Grid(f) => f.support().unwrap_or_else(|| {
                let n = f.len();
                (0..n)
                    .filter(|&i| (0..3).any(|c| f.component(c)[i] != 0.0))
                    .map(|i| {
                        let p = f.point(i);
                        (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt()
                    })
                    .fold(0.0, f64::max)
            }),
            SpatialSource::Gaussian { center, width, .. } => {
                (center[0].powi(2) + center[1].powi(2) + center[2].powi(2)).sqrt() + 9.0 * width
            }
        }
    }

    fn is_zero(&self) -> bool {
        match self {
            SpatialSource::Grid(f) => f.values().iter().all(|&v| v == 0.0),
            SpatialSource::Gaussian { amplitude, .. } => amplitude.iter().all(|&a| a == 0.0),
        }
    }
}

/// Source transform `f_hat_i(xi) = int f_i(x) e^{i x . xi} dx` at every mode,
/// stored `[mode][component]`.
fn source_transform(src: &SpatialSource, bx: &SpectralBox) -> Result<Vec<[Complex64; 3]>> {
    let n = bx.n;
    let dxi = bx.dxi();
    match src {
        SpatialSource::Gaussian {
            center,
            width,
            amplitude,
        } => {
            if !(*width > 0.0) {
                return Err(domain(format!("Gaussian width must be > 0, got {width}")));
            }
            // Separable per axis.
            let axis: Vec<Vec<Complex64>> = (0..3)
                .map(|a| {
                    (0..n)
                        .map(|j| {
                            let xi = bx.mode(j) as f64 * dxi;
                            Complex64::from_polar((-0.5 * width * width * xi * xi).exp(), xi * center[a])
                        })
                        .collect()
                })
                .collect();
            Ok(par::map_indexed(n * n * n, |idx| {
                let (i, j, k) = (idx / (n * n), (idx / n) % n, idx % n);
                let e = axis[0][i] * axis[1][j] * axis[2][k];
                [e * amplitude[0], e * amplitude[1], e * amplitude[2]]
            }))
        }
        SpatialSource::Grid(f) => {
            let h = bx.spacing();
            let expected = GridField::<f64>::periodic_nodes(3, 3, bx.half_extent, n)?;
            if f.components() != 3 || !f.same_layout(&expected) {
                return Err(shape(format!(
                    "source grid must be the {n}^3 periodic node grid of half extent {}",
                    bx.half_extent
                )));
            }
            let mut planner = FftPlanner::<f64>::new();
            // Inverse transform carries the e^{+i} kernel.
            let fft = planner.plan_fft_inverse(n);
            let total = n * n * n;
            let mut out = vec![[Complex64::new(0.0, 0.0); 3]; total];
            for c in 0..3 {
                let mut buf: Vec<Complex64> = f.component(c).iter().map(|&v| Complex64::new(v, 0.0)).collect();
                fft_3d(&mut buf, n, &*fft);
                for (o, v) in out.iter_mut().zip(&buf) {
                    o[c] = *v;
                }
            }
            // Shift to the box origin and apply the cell volume.
            let shift: Vec<Complex64> = (0..n)
                .map(|j| Complex64::from_polar(1.0, -(bx.mode(j) as f64) * dxi * bx.half_extent))
                .collect();
            let w = h * h * h;
            for (idx, o) in out.iter_mut().enumerate() {
                let (i, j, k) = (idx / (n * n), (idx / n) % n, idx % n);
                let s = shift[i] * shift[j] * shift[k] * w;
                for v in o.iter_mut() {
                    *v *= s;
                }
            }
            Ok(out)
        }
    }
}

fn fft_3d(buf: &mut [Complex64], n: usize, fft: &dyn rustfft::Fft<f64>) {
    // Last axis is contiguous.
    fft.process(buf);
    let mut line = vec![Complex64::new(0.0, 0.0); n];
    for stride in [n, n * n] {
        for base in 0..n * n * n {
            if (base / stride) % n != 0 {
                continue;
            }
            for (t, l) in line.iter_mut().enumerate() {
                *l = buf[base + t * stride];
            }
            fft.process(&mut line);
            for (t, l) in line.iter().enumerate() {
                buf[base + t * stride] = *l;
            }
        }
    }
}

/// Modes grouped by `|n|^2`, Nyquist planes excluded.
struct Shells {
    keys: Vec<u64>,
    offsets: Vec<usize>,
    modes: Vec<u32>,
}

fn shells(bx: &SpectralBox) -> Shells {
    let n = bx.n;
    let half = (n / 2) as i64;
    let mut keyed: Vec<(u64, u32)> = Vec::with_capacity(n * n * n);
    for idx in 0..n * n * n {
        let m = [bx.mode(idx / (n * n)), bx.mode((idx / n) % n), bx.mode(idx % n)];
        if m.iter().any(|&v| v == -half) {
            continue;
        }
        let key = (m[0] * m[0] + m[1] * m[1] + m[2] * m[2]) as u64;
        keyed.push((key, idx as u32));
    }
    keyed.sort_unstable();
    let mut keys = Vec::new();
    let mut offsets = Vec::new();
    for (pos, (k, _)) in keyed.iter().enumerate() {
        if keys.last() != Some(k) {
            keys.push(*k);
            offsets.push(pos);
        }
    }
    offsets.push(keyed.len());
    Shells {
        keys,
        offsets,
        modes: keyed.into_iter().map(|(_, i)| i).collect(),
    }
}

type Mat3c = [[Complex64; 3]; 3];

/// For each shell, the time-independent interpolation matrices `Q_alpha`
/// so that `U(x, t) = sum_shell sum_alpha Re(Q_alpha h_alpha(t))`. Shell 0
/// stores the mean mode in slot 0.
fn shell_matrices(
    bx: &SpectralBox,
    sh: &Shells,
    fhat: &[[Complex64; 3]],
    x: &[f64; 3],
) -> Vec<[Mat3c; 2]> {
    let n = bx.n;
    let dxi = bx.dxi();
    let axis: Vec<Vec<Complex64>> = (0..3)
        .map(|a| {
            (0..n)
                .map(|j| Complex64::from_polar(1.0, -(bx.mode(j) as f64) * dxi * x[a]))
                .collect()
        })
        .collect();
    let inv_v = 1.0 / bx.volume();
    par::map_indexed(sh.keys.len(), |b| {
        let zero = Complex64::new(0.0, 0.0);
        let mut q = [[[zero; 3]; 3]; 2];
        for &idx in &sh.modes[sh.offsets[b]..sh.offsets[b + 1]] {
            let idx = idx as usize;
            let (i, j, k) = (idx / (n * n), (idx / n) % n, idx % n);
            let e = axis[0][i] * axis[1][j] * axis[2][k] * inv_v;
            let f = fhat[idx];
            if sh.keys[b] == 0 {
                for c in 0..3 {
                    q[0][c][c] += e * f[c];
                }
                continue;
            }
            let m = [bx.mode(i) as f64, bx.mode(j) as f64, bx.mode(k) as f64];
            let m2 = sh.keys[b] as f64;
            for c in 0..3 {
                for d in 0..3 {
                    let p = m[c] * m[d] / m2;
                    let s = if c == d { 1.0 - p } else { -p };
                    let ef = e * f[d];
                    q[0][c][d] += ef * p;
                    q[1][c][d] += ef * s;
                }
            }
        }
        q
    })
}

/// `h(a, t_m) = (1/(a rho)) int_0^{t_m} sin(a (t_m - s)) g(s) ds` by the
/// cumulative trapezoid rule on the time grid.
fn oscillator_response(a: f64, rho: f64, dt: f64, g: &[f64], out: &mut [f64]) {
    let rot = Complex64::from_polar(1.0, a * dt);
    let mut e = Complex64::new(1.0, 0.0);
    let (mut c_sum, mut s_sum) = (0.0, 0.0);
    for (m, &gm) in g.iter().enumerate() {
        let (cm, sm) = (e.re * gm, e.im * gm);
        c_sum += cm;
        s_sum += sm;
        // Trapezoid on [0, t_m]: full sum minus half the end points.
        let (c0, s0) = (g[0], 0.0);
        let c_int = dt * (c_sum - 0.5 * (c0 + cm));
        let s_int = dt * (s_sum - 0.5 * (s0 + sm));
        out[m] = if m == 0 { 0.0 } else { (e.im * c_int - e.re * s_int) / (a * rho) };
        e *= rot;
        if m % 256 == 255 {
            e /= e.norm();
        }
    }
}

/// `int_0^{t_m} (t_m - s) g(s) ds / rho`, cumulative trapezoid.
fn mean_response(rho: f64, dt: f64, g: &[f64], out: &mut [f64]) {
    let (mut g_sum, mut sg_sum) = (0.0, 0.0);
    for (m, &gm) in g.iter().enumerate() {
        let s = m as f64 * dt;
        g_sum += gm;
        sg_sum += s * gm;
        let gi = dt * (g_sum - 0.5 * (g[0] + gm));
        let sgi = dt * (sg_sum - 0.5 * s * gm);
        out[m] = (s * gi - sgi) / rho;
    }
}

/// Displacement at `probes` for times `0, dt, .., (nt-1) dt`, driven by
/// `F_i = f_i(x) g_i(t)`.
pub fn spectral_forward_3d(
    medium: &ElasticMedium,
    source: &SpatialSource,
    bx: &SpectralBox,
    g: &VectorPulse,
    times: &[f64],
    probes: &[[f64; 3]],
) -> Result<TimeSeriesData> {
    let bx = SpectralBox::new(bx.n, bx.half_extent)?;
    let receivers = ReceiverArray::from_points(3, probes.to_vec())?;
    for p in probes {
        if p.iter().any(|v| v.abs() >= bx.half_extent) {
            return Err(domain(format!(
                "probe {p:?} outside the periodic box of half extent {}",
                bx.half_extent
            )));
        }
    }
    let nt = times.len();
    if nt < 2 || times[0] != 0.0 {
        return Err(config("time grid must start at 0 and have at least two points"));
    }
    let dt = times[1] - times[0];
    if !(dt > 0.0) || times.iter().enumerate().any(|(m, &t)| (t - m as f64 * dt).abs() > 1e-9 * dt.max(t)) {
        return Err(config("time grid must be uniform"));
    }
    let ext = source.extent();
    if ext > 0.5 * bx.half_extent {
        return Err(config(format!(
            "source extends to radius {ext:.3}; the box half extent {} gives less than twofold padding",
            bx.half_extent
        )));
    }
    let c_p = medium.speed(WaveKind::P);
    let a_max = c_p * bx.nyquist() * 3f64.sqrt();
    if a_max * dt > 1.0 {
        return Err(config(format!(
            "time step {dt} does not resolve the highest box frequency {a_max:.3}"
        )));
    }

    let mut out = TimeSeriesData::zeros(receivers, 3, 0.0, dt, nt)?;
    let gs: Vec<Vec<f64>> = g.0.iter().map(|p| p.sample(times)).collect();
    if source.is_zero() || gs.iter().all(|v| v.iter().all(|&x| x == 0.0)) {
        return Ok(out);
    }

    let fhat = source_transform(source, &bx)?;
    let sh = shells(&bx);
    let q: Vec<Vec<[Mat3c; 2]>> = probes.iter().map(|x| shell_matrices(&bx, &sh, &fhat, x)).collect();
    drop(fhat);

    let rho = medium.rho();
    let speeds = [c_p, medium.speed(WaveKind::S)];
    let dxi = bx.dxi();
    // Shell groups are processed in parallel; partial sums are added in order.
    const GROUP: usize = 64;
    let groups = sh.keys.len().div_ceil(GROUP);
    let partials = par::map_indexed(groups, |gi| {
        let mut acc = vec![0.0; probes.len() * 3 * nt];
        let mut h = vec![vec![0.0; nt]; 6];
        for b in gi * GROUP..((gi + 1) * GROUP).min(sh.keys.len()) {
            let key = sh.keys[b];
            let nalpha = if key == 0 { 1 } else { 2 };
            for alpha in 0..nalpha {
                for i in 0..3 {
                    let slot = &mut h[alpha * 3 + i];
                    if key == 0 {
                        mean_response(rho, dt, &gs[i], slot);
                    } else {
                        let a = speeds[alpha] * dxi * (key as f64).sqrt();
                        oscillator_response(a, rho, dt, &gs[i], slot);
                    }
                }
            }
            for (p, qp) in q.iter().enumerate() {
                let qb = &qp[b];
                for c in 0..3 {
                    let row = &mut acc[(p * 3 + c) * nt..(p * 3 + c + 1) * nt];
                    for alpha in 0..nalpha {
                        for i in 0..3 {
                            let w = qb[alpha][c][i].re;
                            if w == 0.0 {
                                continue;
                            }
                            for (r, hv) in row.iter_mut().zip(&h[alpha * 3 + i]) {
                                *r += w * hv;
                            }
                        }
                    }
                }
            }
        }
        acc
    });
    for part in partials {
        for p in 0..probes.len() {
            for c in 0..3 {
                let tr = out.trace_mut(p, c);
                for (t, v) in tr.iter_mut().zip(&part[(p * 3 + c) * nt..(p * 3 + c + 1) * nt]) {
                    *t += v;
                }
            }
        }
    }
    Ok(out)
}
