//! Experiment configuration (TOML) and its cross-field validation.

use std::path::{Path, PathBuf};

use lamesrc::forward::linear_sweep;
use lamesrc::greens::ExperimentGeometry;
use lamesrc::inversion::{KernelKind, KernelPart, StepLength};
use lamesrc::transforms::{Pulse, VectorPulse};
use lamesrc::ElasticMedium;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MediumConfig {
    pub lambda: f64,
    pub mu: f64,
    pub rho: f64,
}

impl Default for MediumConfig {
    fn default() -> Self {
        Self { lambda: 2.0, mu: 1.0, rho: 1.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryConfig {
    #[serde(rename = "R0")]
    pub r0: f64,
    #[serde(rename = "R")]
    pub r: f64,
    /// End of the pulse support.
    #[serde(rename = "T0")]
    pub t0: f64,
    /// Recording window `[0, T]`.
    #[serde(rename = "T")]
    pub t: f64,
}

impl Default for GeometryConfig {
    fn default() -> Self {
        Self { r0: 1.0, r: 2.0, t0: 5.0, t: 20.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    /// Cells per axis of the reconstruction grid.
    pub n: usize,
    /// Half side of the reconstruction square; defaults to `R0`.
    pub extent: Option<f64>,
    /// Cells per axis used to synthesise data.
    pub synthesis_n: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self { n: 64, extent: None, synthesis_n: 128 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReceiverConfig {
    pub count: usize,
    /// Highest modal order used in decoupling.
    pub modal_order: usize,
}

impl Default for ReceiverConfig {
    fn default() -> Self {
        Self { count: 64, modal_order: 31 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FrequencyConfig {
    pub list: Option<Vec<f64>>,
    pub start: f64,
    pub count: usize,
    pub spacing: f64,
}

impl Default for FrequencyConfig {
    fn default() -> Self {
        Self { list: None, start: 1.0, count: 20, spacing: 1.0 }
    }
}

impl FrequencyConfig {
    pub fn omegas(&self) -> Vec<f64> {
        match &self.list {
            Some(l) => l.clone(),
            None => (0..self.count).map(|k| self.start + k as f64 * self.spacing).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EpsilonSetting {
    Named(String),
    Value(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LandweberSection {
    pub epsilon: EpsilonSetting,
    #[serde(rename = "L")]
    pub iterations: usize,
    pub kernels: Vec<String>,
    pub parts: Vec<String>,
}

impl Default for LandweberSection {
    fn default() -> Self {
        Self {
            epsilon: EpsilonSetting::Named("auto".into()),
            iterations: 10,
            kernels: vec!["full".into(), "p".into(), "s".into()],
            parts: vec!["real".into(), "imag".into()],
        }
    }
}

/// One modulated Gaussian: `amplitude * cos|sin(carrier (t - center)) exp(-pi (t - center)^2)` on `[0, cutoff]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaussianPulse {
    pub shape: String,
    #[serde(default = "one")]
    pub amplitude: f64,
    pub carrier: f64,
    pub center: f64,
    pub cutoff: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarPulseSpec {
    Preset(String),
    Explicit(GaussianPulse),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum VectorPulseSpec {
    Preset(String),
    Explicit(Vec<GaussianPulse>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PulseConfig {
    /// Scalar pulse of the 2D experiments.
    pub spatial: ScalarPulseSpec,
    /// Vector pulse of the 3D experiments.
    pub temporal: VectorPulseSpec,
}

impl Default for PulseConfig {
    fn default() -> Self {
        Self {
            spatial: ScalarPulseSpec::Preset("standard".into()),
            temporal: VectorPulseSpec::Preset("standard".into()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NoiseConfig {
    pub delta: f64,
    pub seed: u64,
}

impl Default for NoiseConfig {
    fn default() -> Self {
        Self { delta: 0.0, seed: 1 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TemporalConfig {
    /// Sweep `omega_k = start + (k - 1) (end - start) / (count - 1)`.
    pub count: usize,
    pub start: f64,
    pub end: f64,
    /// Ring points for the averaged indicator; point 0 is also `x_0`.
    pub points: usize,
    /// Sampling step of the recorded series.
    pub dt: f64,
    /// Midpoint frequency step and upper limit for the inverse transform
    /// of the recovered spectra.
    pub recovery_dw: f64,
    pub recovery_max: f64,
}

impl Default for TemporalConfig {
    fn default() -> Self {
        Self {
            count: 50,
            start: 1.0,
            end: 20.0,
            points: 64,
            dt: 0.01,
            recovery_dw: 0.1,
            recovery_max: 25.0,
        }
    }
}

impl TemporalConfig {
    pub fn omegas(&self) -> Vec<f64> {
        linear_sweep(self.start, self.end, self.count)
    }

    pub fn recovery_omegas(&self) -> Vec<f64> {
        let n = (self.recovery_max / self.recovery_dw).floor() as usize;
        (0..n).map(|k| (k as f64 + 0.5) * self.recovery_dw).collect()
    }
}

/// Optional time-domain output of the 2D experiment, obtained by inverse
/// transform of a dense midpoint frequency synthesis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpatialSeriesConfig {
    pub enabled: bool,
    pub dw: f64,
    pub omega_max: f64,
    pub dt: f64,
}

impl Default for SpatialSeriesConfig {
    fn default() -> Self {
        Self { enabled: false, dw: 0.1, omega_max: 25.0, dt: 0.05 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub medium: MediumConfig,
    #[serde(default)]
    pub geometry: GeometryConfig,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub receivers: ReceiverConfig,
    #[serde(default)]
    pub frequencies: FrequencyConfig,
    #[serde(default)]
    pub landweber: LandweberSection,
    #[serde(default)]
    pub pulse: PulseConfig,
    #[serde(default)]
    pub noise: NoiseConfig,
    #[serde(default)]
    pub temporal: TemporalConfig,
    #[serde(default)]
    pub spatial_series: SpatialSeriesConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

fn invalid(path: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("{path}: {msg}"))
}

fn gaussian(path: &str, g: &GaussianPulse) -> Result<Pulse, CliError> {
    if !(g.cutoff > 0.0) {
        return Err(invalid(&format!("{path}.cutoff"), "must be > 0"));
    }
    match g.shape.as_str() {
        "cos" => Ok(Pulse::cosine_gaussian(g.amplitude, g.carrier, g.center, g.cutoff)),
        "sin" => Ok(Pulse::sine_gaussian(g.amplitude, g.carrier, g.center, g.cutoff)),
        other => Err(invalid(&format!("{path}.shape"), format!("expected \"cos\" or \"sin\", got {other:?}"))),
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(format!("invalid config: {}", e.message().trim())))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        let cfg = Self::from_toml(&text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn medium(&self) -> Result<ElasticMedium, CliError> {
        let m = &self.medium;
        ElasticMedium::new(m.lambda, m.mu, m.rho).map_err(|e| invalid("medium", e))
    }

    pub fn geometry(&self) -> Result<ExperimentGeometry, CliError> {
        let g = &self.geometry;
        ExperimentGeometry::new(g.r0, g.r, g.t0).map_err(|e| invalid("geometry", e))
    }

    pub fn grid_extent(&self) -> f64 {
        self.grid.extent.unwrap_or(self.geometry.r0)
    }

    pub fn spatial_pulse(&self) -> Result<Pulse, CliError> {
        match &self.pulse.spatial {
            ScalarPulseSpec::Preset(s) if s == "standard" => Ok(Pulse::standard()),
            ScalarPulseSpec::Preset(s) if s == "zero" => Ok(Pulse::zero()),
            ScalarPulseSpec::Preset(s) => Err(invalid("pulse.spatial", format!("unknown preset {s:?}"))),
            ScalarPulseSpec::Explicit(g) => gaussian("pulse.spatial", g),
        }
    }

    pub fn temporal_pulse(&self) -> Result<VectorPulse, CliError> {
        match &self.pulse.temporal {
            VectorPulseSpec::Preset(s) if s == "standard" => Ok(VectorPulse::standard()),
            VectorPulseSpec::Preset(s) if s == "zero" => Ok(VectorPulse::zero()),
            VectorPulseSpec::Preset(s) => Err(invalid("pulse.temporal", format!("unknown preset {s:?}"))),
            VectorPulseSpec::Explicit(v) => {
                if v.len() != 3 {
                    return Err(invalid("pulse.temporal", format!("expected 3 components, got {}", v.len())));
                }
                let p = |i: usize| gaussian(&format!("pulse.temporal[{i}]"), &v[i]);
                Ok(VectorPulse([p(0)?, p(1)?, p(2)?]))
            }
        }
    }

    pub fn step_length(&self) -> Result<StepLength, CliError> {
        match &self.landweber.epsilon {
            EpsilonSetting::Named(s) if s == "auto" => Ok(StepLength::Auto),
            EpsilonSetting::Named(s) => Err(invalid("landweber.epsilon", format!("expected \"auto\" or a number, got {s:?}"))),
            EpsilonSetting::Value(v) if *v > 0.0 => Ok(StepLength::Fixed(*v)),
            EpsilonSetting::Value(v) => Err(invalid("landweber.epsilon", format!("must be > 0, got {v}"))),
        }
    }

    pub fn kernels(&self) -> Result<Vec<KernelKind>, CliError> {
        self.landweber
            .kernels
            .iter()
            .map(|k| match k.as_str() {
                "full" => Ok(KernelKind::Full),
                "p" => Ok(KernelKind::P),
                "s" => Ok(KernelKind::S),
                other => Err(invalid("landweber.kernels", format!("unknown kernel {other:?}"))),
            })
            .collect()
    }

    pub fn parts(&self) -> Result<Vec<KernelPart>, CliError> {
        self.landweber
            .parts
            .iter()
            .map(|k| match k.as_str() {
                "real" => Ok(KernelPart::Real),
                "imag" => Ok(KernelPart::Imag),
                "stacked" => Ok(KernelPart::Stacked),
                other => Err(invalid("landweber.parts", format!("unknown part {other:?}"))),
            })
            .collect()
    }

    /// Checks every field and the cross-field invariants.
    pub fn validate(&self) -> Result<(), CliError> {
        let medium = self.medium()?;
        let geo = self.geometry()?;
        let (_, ts) = geo.vanish_times(&medium);
        if self.geometry.t < ts {
            return Err(invalid(
                "geometry.T",
                format!("T = {} is below the vanishing time T_s = T0 + (R + R0)/c_s = {ts}", self.geometry.t),
            ));
        }
        if self.grid.n < 2 || self.grid.synthesis_n < 2 {
            return Err(invalid("grid", "need at least 2 cells per axis"));
        }
        if !(self.grid_extent() > 0.0) {
            return Err(invalid("grid.extent", "must be > 0"));
        }
        let m = self.receivers.count;
        if m < 4 {
            return Err(invalid("receivers.count", format!("need at least 4, got {m}")));
        }
        if m < 2 * self.receivers.modal_order {
            return Err(invalid(
                "receivers.modal_order",
                format!("M = {m} receivers resolve modal orders up to {}, got {}", m / 2, self.receivers.modal_order),
            ));
        }
        let om = self.frequencies.omegas();
        if om.is_empty() {
            return Err(invalid("frequencies", "no frequencies"));
        }
        if om.iter().any(|w| !(*w > 0.0)) || om.windows(2).any(|w| w[1] <= w[0]) {
            return Err(invalid("frequencies", "must be positive and strictly increasing"));
        }
        self.step_length()?;
        self.kernels()?;
        self.parts()?;
        self.spatial_pulse()?;
        self.temporal_pulse()?;
        if !(self.noise.delta >= 0.0) {
            return Err(invalid("noise.delta", "must be >= 0"));
        }
        let t = &self.temporal;
        if t.count == 0 || !(t.start > 0.0) || !(t.end >= t.start) {
            return Err(invalid("temporal", "need count >= 1 and 0 < start <= end"));
        }
        if t.points == 0 {
            return Err(invalid("temporal.points", "must be >= 1"));
        }
        if !(t.dt > 0.0) || !(t.recovery_dw > 0.0) || !(t.recovery_max > t.recovery_dw) {
            return Err(invalid("temporal", "dt, recovery_dw must be > 0 and recovery_max > recovery_dw"));
        }
        let s = &self.spatial_series;
        if s.enabled && (!(s.dw > 0.0) || !(s.omega_max > s.dw) || !(s.dt > 0.0)) {
            return Err(invalid("spatial_series", "dw, dt must be > 0 and omega_max > dw"));
        }
        Ok(())
    }
}
