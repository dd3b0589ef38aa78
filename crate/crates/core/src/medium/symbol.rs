use nalgebra::{Matrix3, Vector3};

use super::{ElasticMedium, WaveKind};
use crate::error::{singular, Result};

/// Fourier symbol `A(xi) = (mu/rho)|xi|^2 I + ((lambda+mu)/rho) xi xi^T` of the
/// Lamé operator divided by density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymbolMatrix {
    pub xi: Vector3<f64>,
    pub entries: Matrix3<f64>,
    tau_p: f64,
    tau_s: f64,
}

impl SymbolMatrix {
    /// `(tau_p, tau_s)`: the simple eigenvalue along `xi` and the double
    /// eigenvalue on its orthogonal complement.
    pub fn eigenvalues(&self) -> (f64, f64) {
        (self.tau_p, self.tau_s)
    }

    /// Longitudinal and transverse spectral projectors `(P_L, P_T)`.
    pub fn projectors(&self) -> Result<(Matrix3<f64>, Matrix3<f64>)> {
        let n = self.xi.norm();
        if n == 0.0 {
            return Err(singular("projectors undefined at xi = 0"));
        }
        let u = self.xi / n;
        let pl = u * u.transpose();
        Ok((pl, Matrix3::identity() - pl))
    }
}

pub fn symbol_matrix(medium: &ElasticMedium, xi: Vector3<f64>) -> SymbolMatrix {
    let rho = medium.rho();
    let xi2 = xi.norm_squared();
    let entries = Matrix3::identity() * (medium.mu() / rho * xi2)
        + xi * xi.transpose() * ((medium.lambda() + medium.mu()) / rho);
    SymbolMatrix {
        xi,
        entries,
        tau_p: medium.modulus(WaveKind::P) * xi2 / rho,
        tau_s: medium.modulus(WaveKind::S) * xi2 / rho,
    }
}

/// `A^{1/2}`, `A^{-1/2}` and `sin(A^{1/2} t)` evaluated through the spectral
/// projectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymbolFunctions {
    pub half: Matrix3<f64>,
    pub inv_half: Matrix3<f64>,
    pub sin_half_t: Matrix3<f64>,
}

pub fn symbol_matrix_function(
    medium: &ElasticMedium,
    xi: Vector3<f64>,
    t: f64,
) -> Result<SymbolFunctions> {
    if xi.norm() == 0.0 {
        return Err(singular("A^{-1/2} undefined at xi = 0"));
    }
    let a = symbol_matrix(medium, xi);
    let (pl, pt) = a.projectors()?;
    let (tp, ts) = a.eigenvalues();
    let (rp, rs) = (tp.sqrt(), ts.sqrt());
    Ok(SymbolFunctions {
        half: pl * rp + pt * rs,
        inv_half: pl / rp + pt / rs,
        sin_half_t: pl * (rp * t).sin() + pt * (rs * t).sin(),
    })
}
