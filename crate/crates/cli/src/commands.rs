//! The `forward`, `invert-spatial` and `invert-temporal` experiments.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use lamesrc::forward::{synthesize_frequency_data_2d, GridField, ReceiverArray, TimeSeriesData};
use lamesrc::greens::point_source_series;
use lamesrc::inversion::{
    add_noise, indicator_i1, indicator_i2, normalized_data, potential_data, reconstruct, recover_temporal,
    relative_l2_error, ring_points, IndicatorMethod, IndicatorResult, KernelKind, LandweberConfig,
};
use lamesrc::transforms::{frequency_to_time, time_to_frequency, VectorPulse};
use lamesrc::scenario;
use num_complex::Complex64;
use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::error::CliError;
use crate::io::{
    file_hash, grid_table, read_grid_columns, read_series, read_sweep, series_table, sweep_table, Header, OutputDir,
    Table,
};

fn common_header(cfg: &ExperimentConfig) -> Header {
    let m = &cfg.medium;
    let g = &cfg.geometry;
    Header::default()
        .with("medium", format!("lambda={} mu={} rho={}", m.lambda, m.mu, m.rho))
        .with("geometry", format!("R0={} R={} T0={} T={}", g.r0, g.r, g.t0, g.t))
}

fn time_axis(t_end: f64, dt: f64) -> Vec<f64> {
    let n = (t_end / dt + 1e-9).floor() as usize;
    (0..=n).map(|i| i as f64 * dt).collect()
}

fn json_bytes<T: Serialize>(v: &T) -> Result<Vec<u8>, CliError> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| CliError::Io(e.to_string()))?;
    s.push('\n');
    Ok(s.into_bytes())
}

/// Reconstruction grid with its support disk declared.
fn reconstruction_layout(cfg: &ExperimentConfig, components: usize) -> Result<GridField, CliError> {
    Ok(GridField::<f64>::centered_cells(2, components, cfg.grid_extent(), cfg.grid.n)?.with_support(cfg.geometry.r0)?)
}

/// Synthesises the 2D frequency sweep and the 3D point-force time series.
pub fn run_forward(cfg: &ExperimentConfig, out: &Path) -> Result<PathBuf, CliError> {
    let medium = cfg.medium()?;
    let r0 = cfg.geometry.r0;
    let mut dir = OutputDir::create(out)?;
    let head = common_header(cfg);

    // Two-dimensional experiment.
    let omegas = cfg.frequencies.omegas();
    let pulse = cfg.spatial_pulse()?;
    let gh = pulse.spectrum(&omegas);
    let f = scenario::field_grid(cfg.grid.synthesis_n, r0, Some(r0))?;
    let rec = ReceiverArray::circle(cfg.geometry.r, cfg.receivers.count)?;
    let sweep = synthesize_frequency_data_2d(&medium, &f, &gh, &omegas, &rec)?;
    dir.write_table("sweep.csv", &sweep_table(head.clone(), &sweep))?;

    let mut spec = Table::new(head.clone().with("kind", "spectrum"), &["omega", "g_re", "g_im"]);
    for &w in &omegas {
        let v = pulse.spectrum_at(w);
        spec.push(vec![w, v.re, v.im]);
    }
    dir.write_table("spectrum.csv", &spec)?;

    let (fp, fs) = scenario::potential_grids(cfg.grid.n, cfg.grid_extent(), Some(r0))?;
    let ft = scenario::field_grid(cfg.grid.n, cfg.grid_extent(), Some(r0))?;
    dir.write_table("truth.csv", &grid_table(head.clone(), &[&ft, &fp, &fs], &["f1", "f2", "f_p", "f_s"]))?;

    if cfg.spatial_series.enabled {
        let s = &cfg.spatial_series;
        let n = (s.omega_max / s.dw).floor() as usize;
        let dense: Vec<f64> = (0..n).map(|k| (k as f64 + 0.5) * s.dw).collect();
        let d = synthesize_frequency_data_2d(&medium, &f, &pulse.spectrum(&dense), &dense, &rec)?;
        let times = time_axis(cfg.geometry.t, s.dt);
        let mut series = TimeSeriesData::zeros(rec.clone(), 2, 0.0, s.dt, times.len())?;
        for j in 0..rec.len() {
            for c in 0..2 {
                let vals: Vec<Complex64> = (0..dense.len()).map(|k| d.get(j, c, k)).collect();
                let u = frequency_to_time(&dense, &vals, &times)?;
                series.trace_mut(j, c).copy_from_slice(&u);
            }
        }
        dir.write_table("series2d.csv", &series_table(head.clone(), &series))?;
    }

    // Three-dimensional experiment.
    let g = cfg.temporal_pulse()?;
    let times = time_axis(cfg.geometry.t, cfg.temporal.dt);
    let points = ring_points(cfg.temporal.points);
    let rec3 = ReceiverArray::from_points(3, points.clone())?;
    let mut series = TimeSeriesData::zeros(rec3, 3, 0.0, cfg.temporal.dt, times.len())?;
    for (j, x) in points.iter().enumerate() {
        let u = point_source_series(&medium, &g, *x, &times)?;
        for c in 0..3 {
            series.trace_mut(j, c).iter_mut().zip(&u).for_each(|(d, v)| *d = v[c]);
        }
    }
    if cfg.noise.delta > 0.0 {
        series = add_noise(&series, cfg.noise.delta, cfg.noise.seed)?;
    }
    let h3 = head
        .clone()
        .with("noise", format!("delta={} seed={}", cfg.noise.delta, cfg.noise.seed));
    dir.write_table("series.csv", &series_table(h3, &series))?;

    let mut pt = Table::new(head.with("kind", "pulse"), &["t", "g", "g1", "g2", "g3"]);
    for &t in &times {
        let v = g.eval(t);
        pt.push(vec![t, pulse.eval(t), v[0], v[1], v[2]]);
    }
    dir.write_table("pulse.csv", &pt)?;

    dir.finish("forward", cfg, BTreeMap::new())
}

fn resolve_data(path: &Path, names: &[&str]) -> Result<PathBuf, CliError> {
    if path.is_dir() {
        for n in names {
            let p = path.join(n);
            if p.exists() {
                return Ok(p);
            }
        }
        return Err(CliError::Io(format!("{}: no {} found", path.display(), names.join(" or "))));
    }
    if !path.exists() {
        return Err(CliError::Io(format!("{}: no such file", path.display())));
    }
    Ok(path.to_path_buf())
}

#[derive(Serialize)]
struct SpatialSummary {
    kind: &'static str,
    part: &'static str,
    epsilon: f64,
    final_residual: f64,
    final_error: Option<f64>,
    residuals_monotone: bool,
    warnings: Vec<String>,
}

/// Landweber reconstructions for every configured kernel kind and part.
pub fn run_invert_spatial(
    cfg: &ExperimentConfig,
    data: &Path,
    truth: Option<&Path>,
    out: &Path,
) -> Result<PathBuf, CliError> {
    let medium = cfg.medium()?;
    let file = resolve_data(data, &["sweep.csv", "series2d.csv"])?;
    let omegas = cfg.frequencies.omegas();
    let table = Table::read(&file)?;
    let sweep = match table.header.get("kind") {
        Some("time_series") => time_to_frequency(&read_series(&file)?, &omegas)?,
        _ => read_sweep(&file)?,
    };
    if sweep.receivers().dim() != 2 || sweep.components() != 2 {
        return Err(CliError::Config(format!("{}: expected two-component 2D data", file.display())));
    }
    let gh = cfg.spatial_pulse()?.spectrum(sweep.omegas());
    let (up, us) = potential_data(&sweep, &medium, &gh, cfg.receivers.modal_order)?;
    let full = normalized_data(&sweep, &gh)?;

    let mut dir = OutputDir::create(out)?;
    let head = common_header(cfg);
    let mut summaries = Vec::new();
    for kind in cfg.kernels()? {
        let (d, cols): (_, &[&str]) = match kind {
            KernelKind::Full => (&full, &["f1", "f2"]),
            KernelKind::P => (&up, &["f_p"]),
            KernelKind::S => (&us, &["f_s"]),
        };
        let layout = reconstruction_layout(cfg, kind.components())?;
        let t = match truth {
            Some(p) => Some(read_grid_columns(p, cols, &layout)?),
            None => None,
        };
        for part in cfg.parts()? {
            let lw = LandweberConfig {
                epsilon: cfg.step_length()?,
                iterations: cfg.landweber.iterations,
                initial: None,
                truth: t.clone(),
            };
            let r = reconstruct(kind, part, &medium, d, &layout, &lw)?;
            let tag = format!("{}_{}", kind.label(), part.label());
            let h = head
                .clone()
                .with("kernel", kind.label())
                .with("part", part.label())
                .with("epsilon", r.epsilon);
            dir.write_table(&format!("recon_{tag}.csv"), &grid_table(h.clone(), &[&r.solution], cols))?;
            let mut tr = Table::new(h.with("kind", "trace"), &["k", "l", "omega", "residual", "error"]);
            for e in &r.trace {
                tr.push(vec![e.k as f64, e.l as f64, e.omega, e.residual, e.error.unwrap_or(f64::NAN)]);
            }
            dir.write_table(&format!("trace_{tag}.csv"), &tr)?;
            let final_error = match &t {
                Some(t) => Some(relative_l2_error(&r.solution, t)?.0),
                None => None,
            };
            summaries.push(SpatialSummary {
                kind: kind.label(),
                part: part.label(),
                epsilon: r.epsilon,
                final_residual: r.trace.last().map_or(0.0, |e| e.residual),
                final_error,
                residuals_monotone: r.residuals_monotone(),
                warnings: r.warnings.clone(),
            });
        }
    }
    for s in &summaries {
        println!(
            "{:>4} {:<7} eps={:.3e} residual={:.3e}{}{}",
            s.kind,
            s.part,
            s.epsilon,
            s.final_residual,
            s.final_error.map_or(String::new(), |e| format!(" error={e:.4}")),
            if s.residuals_monotone { "" } else { " (residual increased)" }
        );
    }
    dir.write_bytes("summary.json", &json_bytes(&summaries)?)?;

    let mut inputs = BTreeMap::new();
    inputs.insert(file_name(&file), file_hash(&file)?);
    if let Some(p) = truth {
        inputs.insert(format!("truth:{}", file_name(p)), file_hash(p)?);
    }
    dir.finish("invert-spatial", cfg, inputs)
}

fn file_name(p: &Path) -> String {
    p.file_name().map_or_else(|| p.display().to_string(), |s| s.to_string_lossy().into_owned())
}

fn indicator_table(head: &Header, r: &IndicatorResult, g: &VectorPulse) -> Table {
    let mut t = Table::new(
        head.clone().with("kind", "indicator").with("method", r.method.label()),
        &[
            "omega", "est1_re", "est1_im", "est2_re", "est2_im", "est3_re", "est3_im", "g1_re", "g1_im", "g2_re",
            "g2_im", "g3_re", "g3_im",
        ],
    );
    for (w, e) in r.omegas.iter().zip(&r.estimates) {
        let e = e.unwrap_or([Complex64::new(f64::NAN, f64::NAN); 3]);
        let truth = g.spectrum_at(*w);
        let mut row = vec![*w];
        for v in e.iter().chain(&truth) {
            row.push(v.re);
            row.push(v.im);
        }
        t.push(row);
    }
    t
}

#[derive(Serialize)]
struct TemporalSummary {
    method: &'static str,
    failures: usize,
    spectrum_rms_error: f64,
    signal_relative_l2: [f64; 3],
}

/// Indicator tables over the configured sweep and recovered time signals.
pub fn run_invert_temporal(cfg: &ExperimentConfig, data: &Path, out: &Path) -> Result<PathBuf, CliError> {
    let medium = cfg.medium()?;
    let file = resolve_data(data, &["series.csv"])?;
    let series = read_series(&file)?;
    if series.receivers().dim() != 3 || series.components() != 3 {
        return Err(CliError::Config(format!("{}: expected three-component 3D data", file.display())));
    }
    let g = cfg.temporal_pulse()?;
    let omegas = cfg.temporal.omegas();
    let sweep = time_to_frequency(&series, &omegas)?;
    let rec_omegas = cfg.temporal.recovery_omegas();
    let times = series.times();

    let mut dir = OutputDir::create(out)?;
    let head = common_header(cfg);
    let mut summaries = Vec::new();
    for method in [IndicatorMethod::I1, IndicatorMethod::I2] {
        let r = match method {
            IndicatorMethod::I1 => indicator_i1(&sweep, &medium, 0)?,
            IndicatorMethod::I2 => indicator_i2(&sweep, &medium)?,
        };
        let label = method.label().to_lowercase();
        dir.write_table(&format!("indicator_{label}.csv"), &indicator_table(&head, &r, &g))?;
        let filled = r.filled();
        let sq: f64 = filled
            .iter()
            .zip(&omegas)
            .map(|(e, &w)| {
                let t = g.spectrum_at(w);
                (0..3).map(|i| (e[i] - t[i]).norm_sqr()).sum::<f64>()
            })
            .sum();
        let rms = (sq / (3 * filled.len()) as f64).sqrt();

        let rc = recover_temporal(&series, &medium, &rec_omegas, &times, method, 0)?;
        let mut st = Table::new(
            head.clone().with("kind", "recovered_signal").with("method", method.label()),
            &["t", "rec1", "rec2", "rec3", "g1", "g2", "g3"],
        );
        let mut err = [0.0; 3];
        let mut nrm = [0.0; 3];
        for (n, &t) in times.iter().enumerate() {
            let v = g.eval(t);
            let rec = [rc.signal[0][n], rc.signal[1][n], rc.signal[2][n]];
            for i in 0..3 {
                err[i] += (rec[i] - v[i]).powi(2);
                nrm[i] += v[i] * v[i];
            }
            st.push(vec![t, rec[0], rec[1], rec[2], v[0], v[1], v[2]]);
        }
        dir.write_table(&format!("signal_{label}.csv"), &st)?;
        let rel = [0, 1, 2].map(|i| if nrm[i] > 0.0 { (err[i] / nrm[i]).sqrt() } else { err[i].sqrt() });
        println!(
            "{}: {} failed frequencies, spectrum RMS error {:.4e}, signal relative L2 [{:.3e}, {:.3e}, {:.3e}]",
            method.label(),
            r.failures(),
            rms,
            rel[0],
            rel[1],
            rel[2]
        );
        summaries.push(TemporalSummary {
            method: method.label(),
            failures: r.failures(),
            spectrum_rms_error: rms,
            signal_relative_l2: rel,
        });
    }
    dir.write_bytes("summary.json", &json_bytes(&summaries)?)?;
    let mut inputs = BTreeMap::new();
    inputs.insert(file_name(&file), file_hash(&file)?);
    dir.finish("invert-temporal", cfg, inputs)
}
