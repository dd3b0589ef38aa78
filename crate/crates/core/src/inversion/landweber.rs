//! Landweber iteration with frequency marching:
//! `S_{l,k} = S_{l-1,k} + eps V_k^* (v_k - V_k S_{l-1,k})`, `S_{0,k+1} = S_{L,k}`.

use super::operator::LinearOperator;
use crate::error::{domain, shape, Result};
use crate::forward::GridField;

/// Step length choice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepLength {
    /// `1 / sigma^2` with `sigma` the largest estimated operator norm over all frequencies.
    Auto,
    Fixed(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct LandweberConfig {
    pub epsilon: StepLength,
    /// Inner iterations per frequency.
    pub iterations: usize,
    /// Starting field; zero when absent.
    pub initial: Option<GridField>,
    /// Optional truth for error tracing.
    pub truth: Option<GridField>,
}

impl Default for LandweberConfig {
    fn default() -> Self {
        Self {
            epsilon: StepLength::Auto,
            iterations: 10,
            initial: None,
            truth: None,
        }
    }
}

/// One record per frequency `k` and inner step `l` (`l = 0` before any update).
#[derive(Debug, Clone, PartialEq)]
pub struct TraceEntry {
    pub k: usize,
    pub l: usize,
    pub omega: f64,
    pub residual: f64,
    pub error: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LandweberResult {
    pub solution: GridField,
    pub epsilon: f64,
    pub trace: Vec<TraceEntry>,
    pub warnings: Vec<String>,
}

impl LandweberResult {
    /// True when the residual never increases within an inner loop.
    pub fn residuals_monotone(&self) -> bool {
        self.trace.windows(2).all(|w| {
            w[0].k != w[1].k || w[1].residual <= w[0].residual * (1.0 + 1e-12) + 1e-300
        })
    }
}

/// Power iteration for the largest singular value of `op` in the weighted
/// grid norm.
pub fn operator_norm(op: &LinearOperator, iterations: usize) -> Result<f64> {
    let mut x: Vec<f64> = (0..op.cols()).map(|j| 1.0 + 0.5 * (1.3 * j as f64).sin()).collect();
    let mut sigma = 0.0;
    for _ in 0..iterations {
        let nx = op.grid_dot(&x, &x).sqrt();
        if nx == 0.0 {
            return Ok(0.0);
        }
        x.iter_mut().for_each(|v| *v /= nx);
        let y = op.apply_vec(&x)?;
        sigma = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        x = op.adjoint_vec(&y)?;
    }
    Ok(sigma)
}

pub fn landweber_march(ops: &[LinearOperator], data: &[Vec<f64>], config: &LandweberConfig) -> Result<LandweberResult> {
    if ops.is_empty() {
        return Err(domain("Landweber march needs at least one operator"));
    }
    if ops.len() != data.len() {
        return Err(shape(format!("{} operators but {} data vectors", ops.len(), data.len())));
    }
    let first = &ops[0];
    for (op, v) in ops.iter().zip(data) {
        if !op.layout().same_layout(first.layout()) || op.cols() != first.cols() {
            return Err(shape("operators do not share a grid layout"));
        }
        if v.len() != op.rows() {
            return Err(shape(format!("data has {} rows, operator {}", v.len(), op.rows())));
        }
    }
    if ops.windows(2).any(|w| w[1].omega <= w[0].omega) {
        return Err(domain("frequencies must be strictly increasing"));
    }

    let norms = ops
        .iter()
        .map(|op| operator_norm(op, 30))
        .collect::<Result<Vec<_>>>()?;
    let epsilon = match config.epsilon {
        StepLength::Fixed(e) if e > 0.0 => e,
        StepLength::Fixed(e) => return Err(domain(format!("step length must be > 0, got {e}"))),
        StepLength::Auto => {
            let s = norms.iter().cloned().fold(0.0, f64::max);
            if s == 0.0 {
                1.0
            } else {
                1.0 / (s * s)
            }
        }
    };
    let mut warnings = Vec::new();
    for (op, s) in ops.iter().zip(&norms) {
        if epsilon * s * s >= 2.0 {
            warnings.push(format!(
                "step length {epsilon:e} exceeds the convergence bound at omega = {} (eps sigma^2 = {:.3})",
                op.omega,
                epsilon * s * s
            ));
        }
    }

    let mut x = match &config.initial {
        Some(g) => first.unknowns(g)?,
        None => vec![0.0; first.cols()],
    };
    let truth = match &config.truth {
        Some(t) => {
            if !t.same_layout(first.layout()) || t.components() != first.layout().components() {
                return Err(shape("truth field does not match the operator layout"));
            }
            Some(t)
        }
        None => None,
    };
    let error_of = |x: &[f64]| -> Result<Option<f64>> {
        match truth {
            Some(t) => Ok(Some(relative_l2_error(&first.field(x)?, t)?.0)),
            None => Ok(None),
        }
    };

    let mut trace = Vec::with_capacity(ops.len() * (config.iterations + 1));
    for (k, (op, v)) in ops.iter().zip(data).enumerate() {
        let mut r: Vec<f64> = v.iter().zip(op.apply_vec(&x)?).map(|(a, b)| a - b).collect();
        trace.push(TraceEntry {
            k,
            l: 0,
            omega: op.omega,
            residual: norm(&r),
            error: error_of(&x)?,
        });
        for l in 1..=config.iterations {
            let step = op.adjoint_vec(&r)?;
            x.iter_mut().zip(&step).for_each(|(a, s)| *a += epsilon * s);
            r = v.iter().zip(op.apply_vec(&x)?).map(|(a, b)| a - b).collect();
            trace.push(TraceEntry {
                k,
                l,
                omega: op.omega,
                residual: norm(&r),
                error: error_of(&x)?,
            });
        }
    }
    Ok(LandweberResult {
        solution: first.field(&x)?,
        epsilon,
        trace,
        warnings,
    })
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|a| a * a).sum::<f64>().sqrt()
}

/// `||a - b|| / ||b||` in the cell-weighted norm. When `b` is zero the
/// absolute norm `||a||` is returned and the flag is `true`.
pub fn relative_l2_error(a: &GridField, b: &GridField) -> Result<(f64, bool)> {
    if !a.same_layout(b) || a.components() != b.components() {
        return Err(shape("fields have different layouts"));
    }
    let w = a.cell_volume();
    let diff: f64 = a.values().iter().zip(b.values()).map(|(x, y)| (x - y).powi(2)).sum::<f64>() * w;
    let nb: f64 = b.values().iter().map(|y| y * y).sum::<f64>() * w;
    if nb == 0.0 {
        Ok((diff.sqrt(), true))
    } else {
        Ok(((diff / nb).sqrt(), false))
    }
}
