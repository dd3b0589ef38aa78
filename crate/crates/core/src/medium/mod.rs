//! Isotropic elastic media, wave speeds and the special functions the
//! Green's tensors are built from.

mod fundamental;
mod special;
mod symbol;

pub use fundamental::{fundamental_solution, radial_profile, Dimension, RadialProfile};
pub use special::{bessel_jy, hankel1, hankel1_derivative, hankel1_orders, hankel01};
pub use symbol::{symbol_matrix, symbol_matrix_function, SymbolFunctions, SymbolMatrix};

use crate::error::{domain, Error, Result};

/// Compressional (`P`) or shear (`S`) wave family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WaveKind {
    P,
    S,
}

impl WaveKind {
    pub fn label(self) -> &'static str {
        match self {
            WaveKind::P => "p",
            WaveKind::S => "s",
        }
    }
}

/// Homogeneous isotropic solid described by its Lamé constants and density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElasticMedium {
    lambda: f64,
    mu: f64,
    rho: f64,
}

impl ElasticMedium {
    /// Validates `mu > 0`, `3 lambda + 2 mu > 0` and `rho > 0`.
    pub fn new(lambda: f64, mu: f64, rho: f64) -> Result<Self> {
        if !(mu > 0.0) {
            return Err(Error::ParameterViolation("mu > 0"));
        }
        if !(3.0 * lambda + 2.0 * mu > 0.0) {
            return Err(Error::ParameterViolation("3 lambda + 2 mu > 0"));
        }
        if !(rho > 0.0) {
            return Err(Error::ParameterViolation("rho > 0"));
        }
        Ok(Self { lambda, mu, rho })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// `lambda + 2 mu` for P waves, `mu` for S waves.
    pub fn modulus(&self, kind: WaveKind) -> f64 {
        match kind {
            WaveKind::P => self.lambda + 2.0 * self.mu,
            WaveKind::S => self.mu,
        }
    }

    pub fn speed(&self, kind: WaveKind) -> f64 {
        (self.modulus(kind) / self.rho).sqrt()
    }

    /// `omega / c_alpha`; requires `omega > 0`.
    pub fn wavenumber(&self, kind: WaveKind, omega: f64) -> Result<f64> {
        if !(omega > 0.0) {
            return Err(domain(format!("wavenumber needs omega > 0, got {omega}")));
        }
        Ok(omega / self.speed(kind))
    }

    pub fn wave_parameters(&self, omega: f64) -> Result<WaveParameters> {
        Ok(WaveParameters {
            c_p: self.speed(WaveKind::P),
            c_s: self.speed(WaveKind::S),
            gamma_p: self.modulus(WaveKind::P),
            gamma_s: self.modulus(WaveKind::S),
            k_p: self.wavenumber(WaveKind::P, omega)?,
            k_s: self.wavenumber(WaveKind::S, omega)?,
        })
    }
}

/// Speeds, moduli and wavenumbers at one angular frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveParameters {
    pub c_p: f64,
    pub c_s: f64,
    pub gamma_p: f64,
    pub gamma_s: f64,
    pub k_p: f64,
    pub k_s: f64,
}
