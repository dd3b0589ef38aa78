//! Receiver data from the frequency-domain integral representation
//! `U(x, w) = g_hat(w) int G(x - y, w) f(y) dy`, discretised by the midpoint
//! rule on the cells of the source grid.

use num_complex::Complex64;

use super::data::{check_omegas, FrequencySweepData, ReceiverArray};
use super::grid::GridField;
use crate::error::{config, domain, shape, Result};
use crate::greens::GreensFrequency;
use crate::medium::{fundamental_solution, Dimension, ElasticMedium, WaveKind};
use crate::par;
use crate::transforms::Spectrum;

/// Quadrature nodes: cell centres inside the support disk with their
/// weighted source values.
struct Nodes<const C: usize> {
    points: Vec<[f64; 2]>,
    values: Vec<[f64; C]>,
    radius: f64,
}

fn collect_nodes<const C: usize>(f: &GridField) -> Result<Nodes<C>> {
    if f.dim() != 2 || f.components() != C {
        return Err(shape(format!(
            "expected a 2D field with {C} component(s), got {}D with {}",
            f.dim(),
            f.components()
        )));
    }
    let n = f.len();
    let w = f.cell_volume();
    let mut nodes = Nodes {
        points: Vec::new(),
        values: Vec::new(),
        radius: 0.0,
    };
    for i in 0..n {
        let p = f.point(i);
        let r = p[0].hypot(p[1]);
        if f.support().is_some_and(|r0| r > r0) {
            continue;
        }
        let mut v = [0.0; C];
        for (c, slot) in v.iter_mut().enumerate() {
            *slot = f.component(c)[i] * w;
        }
        if v.iter().all(|&x| x == 0.0) {
            continue;
        }
        nodes.radius = nodes.radius.max(r);
        nodes.points.push([p[0], p[1]]);
        nodes.values.push(v);
    }
    if let Some(r0) = f.support() {
        nodes.radius = r0;
    }
    Ok(nodes)
}

fn check_receivers(receivers: &ReceiverArray, support: f64) -> Result<()> {
    if receivers.dim() != 2 {
        return Err(shape("two-dimensional synthesis needs 2D receivers"));
    }
    let rmin = receivers.min_radius();
    if rmin <= support {
        return Err(domain(format!(
            "receiver at radius {rmin} lies inside the source support radius {support}"
        )));
    }
    Ok(())
}

fn pulse_values(g_hat: &Spectrum, omegas: &[f64]) -> Result<Vec<Complex64>> {
    omegas
        .iter()
        .map(|&w| {
            g_hat
                .at(w)
                .ok_or_else(|| config(format!("pulse spectrum not available at omega = {w}")))
        })
        .collect()
}

/// Vector receiver data for a two-component source on a 2D grid.
pub fn synthesize_frequency_data_2d(
    medium: &ElasticMedium,
    f: &GridField,
    g_hat: &Spectrum,
    omegas: &[f64],
    receivers: &ReceiverArray,
) -> Result<FrequencySweepData> {
    check_omegas(omegas)?;
    let nodes = collect_nodes::<2>(f)?;
    check_receivers(receivers, nodes.radius)?;
    let gh = pulse_values(g_hat, omegas)?;
    let greens = omegas
        .iter()
        .map(|&w| GreensFrequency::new(medium, w, Dimension::Two))
        .collect::<Result<Vec<_>>>()?;

    let m = receivers.len();
    let nw = omegas.len();
    let cells = par::map_indexed(nw * m, |idx| -> Result<[Complex64; 2]> {
        let (k, j) = (idx / m, idx % m);
        let x = receivers.points()[j];
        let mut acc = [Complex64::new(0.0, 0.0); 2];
        for (y, v) in nodes.points.iter().zip(&nodes.values) {
            let g = greens[k].tensor2([x[0] - y[0], x[1] - y[1]])?;
            acc[0] += g[(0, 0)] * v[0] + g[(0, 1)] * v[1];
            acc[1] += g[(1, 0)] * v[0] + g[(1, 1)] * v[1];
        }
        Ok([acc[0] * gh[k], acc[1] * gh[k]])
    });

    let mut out = FrequencySweepData::zeros(receivers.clone(), 2, omegas.to_vec())?;
    for (idx, r) in cells.into_iter().enumerate() {
        let (k, j) = (idx / m, idx % m);
        let v = r?;
        out.set(j, 0, k, v[0]);
        out.set(j, 1, k, v[1]);
    }
    Ok(out)
}

/// Scalar potential data `u_alpha = g_hat / gamma_alpha * int Phi_{k_alpha}(x - y) f_alpha(y) dy`.
pub fn synthesize_scalar_frequency_data_2d(
    medium: &ElasticMedium,
    f_alpha: &GridField,
    kind: WaveKind,
    g_hat: &Spectrum,
    omegas: &[f64],
    receivers: &ReceiverArray,
) -> Result<FrequencySweepData> {
    check_omegas(omegas)?;
    let nodes = collect_nodes::<1>(f_alpha)?;
    check_receivers(receivers, nodes.radius)?;
    let gh = pulse_values(g_hat, omegas)?;
    let ks = omegas
        .iter()
        .map(|&w| medium.wavenumber(kind, w))
        .collect::<Result<Vec<_>>>()?;
    let gamma = medium.modulus(kind);

    let m = receivers.len();
    let nw = omegas.len();
    let cells = par::map_indexed(nw * m, |idx| -> Result<Complex64> {
        let (k, j) = (idx / m, idx % m);
        let x = receivers.points()[j];
        let mut acc = Complex64::new(0.0, 0.0);
        for (y, v) in nodes.points.iter().zip(&nodes.values) {
            acc += fundamental_solution(Dimension::Two, ks[k], &[x[0] - y[0], x[1] - y[1]])? * v[0];
        }
        Ok(acc * gh[k] / gamma)
    });

    let mut out = FrequencySweepData::zeros(receivers.clone(), 1, omegas.to_vec())?;
    for (idx, r) in cells.into_iter().enumerate() {
        out.set(idx % m, 0, idx / m, r?);
    }
    Ok(out)
}
