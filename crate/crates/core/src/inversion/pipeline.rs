//! Full spatial reconstruction: receiver data -> (optional) P/S decoupling ->
//! per-frequency operators -> Landweber march.

use num_complex::Complex64;

use super::landweber::{landweber_march, LandweberConfig, LandweberResult};
use super::operator::{build_operator, KernelKind, KernelPart};
use crate::error::{config, shape, Result};
use crate::forward::{FrequencySweepData, GridField};
use crate::medium::ElasticMedium;
use crate::par;
use crate::transforms::{decouple_circle, modal_to_potentials, Spectrum};

fn pulse_at(g_hat: &Spectrum, omega: f64) -> Result<Complex64> {
    let v = g_hat
        .at(omega)
        .ok_or_else(|| config(format!("pulse spectrum not available at omega = {omega}")))?;
    if v.norm() == 0.0 {
        return Err(config(format!("pulse spectrum vanishes at omega = {omega}")));
    }
    Ok(v)
}

/// Potentials `u_p / g_hat` and `u_s / g_hat` at the receivers, recovered
/// from circular vector data by modal decoupling.
pub fn potential_data(
    data: &FrequencySweepData,
    medium: &ElasticMedium,
    g_hat: &Spectrum,
    n_max: usize,
) -> Result<(FrequencySweepData, FrequencySweepData)> {
    let rec = data.receivers();
    let radius = rec
        .radius()
        .ok_or_else(|| config("decoupling needs receivers on a common circle"))?;
    let angles: Vec<f64> = rec.points().iter().map(|p| p[1].atan2(p[0])).collect();
    let nw = data.omegas().len();
    let per = par::map_indexed(nw, |k| -> Result<(Vec<Complex64>, Vec<Complex64>)> {
        let c = decouple_circle(data, k, medium, n_max)?;
        let g = pulse_at(g_hat, data.omegas()[k])?;
        let (p, s) = modal_to_potentials(&c, radius, &angles)?;
        Ok((p.into_iter().map(|v| v / g).collect(), s.into_iter().map(|v| v / g).collect()))
    });
    let mut up = FrequencySweepData::zeros(rec.clone(), 1, data.omegas().to_vec())?;
    let mut us = up.clone();
    for (k, r) in per.into_iter().enumerate() {
        let (p, s) = r?;
        for j in 0..rec.len() {
            up.set(j, 0, k, p[j]);
            us.set(j, 0, k, s[j]);
        }
    }
    Ok((up, us))
}

/// Divides vector data by the pulse spectrum.
pub fn normalized_data(data: &FrequencySweepData, g_hat: &Spectrum) -> Result<FrequencySweepData> {
    let mut out = data.clone();
    let nw = data.omegas().len();
    for k in 0..nw {
        let g = pulse_at(g_hat, data.omegas()[k])?;
        for j in 0..data.receivers().len() {
            for c in 0..data.components() {
                out.set(j, c, k, data.get(j, c, k) / g);
            }
        }
    }
    Ok(out)
}

/// Runs the Landweber march for one kernel kind and part. `data` holds
/// `u / g_hat` with the component count matching `kind`.
pub fn reconstruct(
    kind: KernelKind,
    part: KernelPart,
    medium: &ElasticMedium,
    data: &FrequencySweepData,
    grid: &GridField,
    cfg: &LandweberConfig,
) -> Result<LandweberResult> {
    if data.components() != kind.components() {
        return Err(shape(format!(
            "{} kernel needs {}-component data, got {}",
            kind.label(),
            kind.components(),
            data.components()
        )));
    }
    let layout = grid.with_values(kind.components(), vec![0.0; grid.len() * kind.components()])?;
    let ops = data
        .omegas()
        .iter()
        .map(|&w| build_operator(kind, part, medium, w, &layout, data.receivers()))
        .collect::<Result<Vec<_>>>()?;
    let rows: Vec<Vec<f64>> = (0..data.omegas().len())
        .map(|k| part.rows_of(&data.at_frequency(k)))
        .collect();
    landweber_march(&ops, &rows, cfg)
}
