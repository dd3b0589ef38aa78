use num_complex::Complex64;
use std::f64::consts::PI;

use super::special::hankel01;
use crate::error::{domain, singular, Result};

/// Spatial dimension of a problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dimension {
    Two,
    Three,
}

impl Dimension {
    pub fn from_usize(d: usize) -> Result<Self> {
        match d {
            2 => Ok(Dimension::Two),
            3 => Ok(Dimension::Three),
            _ => Err(domain(format!("dimension must be 2 or 3, got {d}"))),
        }
    }

    pub fn as_usize(self) -> usize {
        match self {
            Dimension::Two => 2,
            Dimension::Three => 3,
        }
    }
}

/// A radial function `phi(r)` with its first two derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialProfile {
    pub value: Complex64,
    pub d1: Complex64,
    pub d2: Complex64,
}

/// Helmholtz fundamental solution `Phi_k` as a function of `r = |x|`:
/// `e^{ikr} / (4 pi r)` in 3D, `(i/4) H_0^(1)(kr)` in 2D.
pub fn radial_profile(dim: Dimension, k: f64, r: f64) -> Result<RadialProfile> {
    if !(r > 0.0) {
        return Err(singular(format!("fundamental solution evaluated at r = {r}")));
    }
    if !(k > 0.0) {
        return Err(domain(format!("wavenumber must be > 0, got {k}")));
    }
    let i = Complex64::i();
    Ok(match dim {
        Dimension::Three => {
            let value = Complex64::from_polar(1.0 / (4.0 * PI * r), k * r);
            let a = i * k - 1.0 / r;
            RadialProfile {
                value,
                d1: value * a,
                d2: value * (a * a + 1.0 / (r * r)),
            }
        }
        Dimension::Two => {
            let kr = k * r;
            let (h0, h1) = hankel01(kr)?;
            let q = i * 0.25;
            RadialProfile {
                value: q * h0,
                d1: -q * k * h1,
                d2: -q * k * k * (h0 - h1 / kr),
            }
        }
    })
}

/// `Phi_k(x)` for a point `x` of length 2 or 3.
pub fn fundamental_solution(dim: Dimension, k: f64, x: &[f64]) -> Result<Complex64> {
    if x.len() != dim.as_usize() {
        return Err(domain(format!(
            "point has {} coordinates, expected {}",
            x.len(),
            dim.as_usize()
        )));
    }
    let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    Ok(radial_profile(dim, k, r)?.value)
}
