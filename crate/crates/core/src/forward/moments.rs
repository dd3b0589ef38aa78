//! Plane-wave moments `int f(x) . v_alpha(x, w) dx` with probes
//! `v_p = d e^{-i k_p d.x}` and `v_s = d_perp e^{-i k_s d.x}`.

use num_complex::Complex64;

use super::grid::GridField;
use crate::error::{domain, shape, Result};
use crate::medium::{ElasticMedium, WaveKind};

/// A unit vector orthogonal to `d`: the rotation by +90 degrees in 2D, and in
/// 3D the normalised cross product of `d` with the coordinate axis least
/// aligned with it.
pub fn perpendicular(d: &[f64]) -> Vec<f64> {
    match d.len() {
        2 => vec![-d[1], d[0]],
        _ => {
            let a = (0..3)
                .min_by(|&i, &j| d[i].abs().total_cmp(&d[j].abs()))
                .unwrap_or(0);
            let mut e = [0.0; 3];
            e[a] = 1.0;
            let c = [
                d[1] * e[2] - d[2] * e[1],
                d[2] * e[0] - d[0] * e[2],
                d[0] * e[1] - d[1] * e[0],
            ];
            let n = (c[0] * c[0] + c[1] * c[1] + c[2] * c[2]).sqrt();
            c.iter().map(|v| v / n).collect()
        }
    }
}

/// Midpoint-rule moment of a vector field against the plane-wave probe of `kind`.
pub fn plane_wave_moment(
    f: &GridField,
    medium: &ElasticMedium,
    omega: f64,
    d: &[f64],
    kind: WaveKind,
) -> Result<Complex64> {
    let dim = f.dim();
    if d.len() != dim || f.components() != dim {
        return Err(shape(format!(
            "direction of length {} and {} components for a {dim}D grid",
            d.len(),
            f.components()
        )));
    }
    let nd = d.iter().map(|v| v * v).sum::<f64>().sqrt();
    if (nd - 1.0).abs() > 1e-12 {
        return Err(domain(format!("probe direction must be a unit vector, |d| = {nd}")));
    }
    let k = medium.wavenumber(kind, omega)?;
    let pol = match kind {
        WaveKind::P => d.to_vec(),
        WaveKind::S => perpendicular(d),
    };
    let n = f.len();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        let x = f.point(i);
        let proj: f64 = (0..dim).map(|c| f.component(c)[i] * pol[c]).sum();
        if proj == 0.0 {
            continue;
        }
        let phase: f64 = (0..dim).map(|c| d[c] * x[c]).sum();
        acc += Complex64::from_polar(proj, -k * phase);
    }
    Ok(acc * f.cell_volume())
}

/// `int h(x) e^{i x . xi} dx` for a scalar grid field, by the midpoint rule.
pub fn spatial_ft(h: &GridField, xi: &[f64]) -> Result<Complex64> {
    if h.components() != 1 || xi.len() != h.dim() {
        return Err(shape("spatial transform needs a scalar field and a matching frequency"));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for (i, &v) in h.values().iter().enumerate() {
        if v == 0.0 {
            continue;
        }
        let x = h.point(i);
        let phase: f64 = xi.iter().zip(&x).map(|(a, b)| a * b).sum();
        acc += Complex64::from_polar(v, phase);
    }
    Ok(acc * h.cell_volume())
}
