//! Scenario configuration: flat `key = value` sections (a TOML subset),
//! per-subcommand defaults, and `KERRQC__SECTION__KEY` environment overrides.

use std::path::Path;

use kerrqc::phasespace::{KerrConfig, TwoModeCoherentInit};
use kerrqc::polarization::VarianceForm;
use serde::{Deserialize, Serialize};
use toml::{Table, Value};

use crate::error::CliError;

pub const ENV_PREFIX: &str = "KERRQC__";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Product {
    Purity,
    Entangle,
    Squeeze,
    Poincare,
    Oracle,
}

impl Product {
    pub fn name(self) -> &'static str {
        match self {
            Self::Purity => "purity",
            Self::Entangle => "entangle",
            Self::Squeeze => "squeeze",
            Self::Poincare => "poincare",
            Self::Oracle => "oracle",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateKind {
    /// Independent coherent amplitudes per mode.
    Product,
    /// Circular polarization with total intensity `intensity`.
    Circular,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateSection {
    pub kind: StateKind,
    pub i0a: f64,
    pub i0b: f64,
    pub phi0a: f64,
    pub phi0b: f64,
    pub intensity: f64,
}

impl StateSection {
    pub fn init(&self) -> kerrqc::Result<TwoModeCoherentInit> {
        match self.kind {
            StateKind::Product => {
                TwoModeCoherentInit::new(self.i0a, self.i0b, self.phi0a, self.phi0b)
            }
            StateKind::Circular => TwoModeCoherentInit::circular(self.intensity),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KerrSection {
    pub chi: f64,
    pub gamma_a: f64,
    pub gamma_b: f64,
}

impl KerrSection {
    pub fn config(&self) -> kerrqc::Result<KerrConfig> {
        KerrConfig::new(self.chi, self.gamma_a, self.gamma_b)
    }
}

/// Either explicit `values` or `points` evenly spaced nodes on `[start, stop]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TauSection {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    pub values: Vec<f64>,
}

impl TauSection {
    pub fn grid(&self) -> Result<Vec<f64>, CliError> {
        let grid: Vec<f64> = if !self.values.is_empty() {
            self.values.clone()
        } else {
            match self.points {
                0 => Vec::new(),
                1 => vec![self.start],
                n => (0..n)
                    .map(|k| {
                        (self.start * (n - 1 - k) as f64 + self.stop * k as f64) / (n - 1) as f64
                    })
                    .collect(),
            }
        };
        if grid.is_empty() {
            return Err(CliError::Config("tau grid is empty".into()));
        }
        if let Some(bad) = grid.iter().find(|t| !t.is_finite() || **t < 0.0) {
            return Err(CliError::Config(format!(
                "tau values must be finite and >= 0, got {bad}"
            )));
        }
        if let Some(w) = grid.windows(2).find(|w| w[1] <= w[0]) {
            return Err(CliError::Config(format!(
                "tau grid must be strictly increasing, got {} then {}",
                w[0], w[1]
            )));
        }
        Ok(grid)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    /// Recorded in the manifest; no stage is stochastic at present.
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PurityColumn {
    QcSeries,
    QcIntegral,
    Asymptotic,
    Exact,
}

impl PurityColumn {
    pub fn name(self) -> &'static str {
        match self {
            Self::QcSeries => "p_qc_series",
            Self::QcIntegral => "p_qc_integral",
            Self::Asymptotic => "p_asymptotic",
            Self::Exact => "p_exact",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PuritySection {
    pub methods: Vec<PurityColumn>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntangleSection {
    pub order: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormName {
    Derived,
    HalfAngle,
    FullAngle,
}

impl From<FormName> for VarianceForm {
    fn from(form: FormName) -> Self {
        match form {
            FormName::Derived => Self::Derived,
            FormName::HalfAngle => Self::HalfAngle,
            FormName::FullAngle => Self::FullAngle,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SqueezeSection {
    pub gamma_over_chi: Vec<f64>,
    pub form: FormName,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PoincareSection {
    /// Box half-width in shot-noise units `sqrt(2 I0)`.
    pub half_width_units: f64,
    pub nodes: usize,
    /// Isosurface level relative to the initial peak.
    pub level: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleSection {
    /// Per-mode Fock cutoff; 0 selects the smallest admissible one.
    pub cutoff: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub run: RunSection,
    pub state: StateSection,
    pub kerr: KerrSection,
    pub tau: TauSection,
    pub purity: PuritySection,
    pub entangle: EntangleSection,
    pub squeeze: SqueezeSection,
    pub poincare: PoincareSection,
    pub oracle: OracleSection,
}

impl Config {
    /// Default scenario for `product`.
    pub fn defaults(product: Product) -> Self {
        let circular = product == Product::Squeeze || product == Product::Poincare;
        let (i0a, i0b) = if product == Product::Oracle {
            (2.0, 3.0)
        } else {
            (1e6, 1e6)
        };
        let tau = match product {
            Product::Purity => range(0.0, 1e-5, 200),
            Product::Entangle => range(0.0, 1e-5, 101),
            Product::Squeeze => range(0.0, 5e-6, 201),
            Product::Poincare => values(vec![0.0, 1.5e-7, 3.0e-7, 4.5e-7]),
            Product::Oracle => values(vec![0.01, 0.05, 0.1, 0.5]),
        };
        Self {
            run: RunSection { seed: 0 },
            state: StateSection {
                kind: if circular {
                    StateKind::Circular
                } else {
                    StateKind::Product
                },
                i0a,
                i0b,
                phi0a: 0.0,
                phi0b: 0.0,
                intensity: 1e6,
            },
            kerr: KerrSection {
                chi: 1.0,
                gamma_a: 0.0,
                gamma_b: 0.0,
            },
            tau,
            purity: PuritySection {
                methods: vec![
                    PurityColumn::QcSeries,
                    PurityColumn::QcIntegral,
                    PurityColumn::Asymptotic,
                    PurityColumn::Exact,
                ],
            },
            entangle: EntangleSection { order: 40 },
            squeeze: SqueezeSection {
                gamma_over_chi: vec![0.0, 0.2, 1.0, 5.0, 20.0],
                form: FormName::Derived,
            },
            poincare: PoincareSection {
                half_width_units: 6.0,
                nodes: 128,
                level: 1e-4,
            },
            oracle: OracleSection { cutoff: 0 },
        }
    }

    /// Defaults, overlaid with the file at `path` (if any), overlaid with
    /// matching environment variables.
    pub fn load(
        product: Product,
        path: Option<&Path>,
        env: impl IntoIterator<Item = (String, String)>,
    ) -> Result<Self, CliError> {
        let mut table = Table::try_from(Self::defaults(product))
            .map_err(|e| CliError::Config(e.to_string()))?;
        if let Some(path) = path {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::ConfigFile {
                path: path.display().to_string(),
                message: e.to_string(),
            })?;
            let file: Table = text
                .parse()
                .map_err(|e: toml::de::Error| CliError::ConfigFile {
                    path: path.display().to_string(),
                    message: e.to_string(),
                })?;
            overlay(&mut table, file, path)?;
        }
        for (key, raw) in env {
            let Some(rest) = key.strip_prefix(ENV_PREFIX) else {
                continue;
            };
            let (section, field) = rest.split_once("__").ok_or_else(|| {
                CliError::Config(format!("{key}: expected {ENV_PREFIX}SECTION__KEY"))
            })?;
            let (section, field) = (section.to_ascii_lowercase(), field.to_ascii_lowercase());
            let slot = table
                .get_mut(&section)
                .and_then(Value::as_table_mut)
                .ok_or_else(|| CliError::Config(format!("{key}: unknown section `{section}`")))?;
            if !slot.contains_key(&field) {
                return Err(CliError::Config(format!(
                    "{key}: unknown key `{section}.{field}`"
                )));
            }
            slot.insert(field, parse_env_value(&raw));
        }
        Value::Table(table)
            .try_into()
            .map_err(|e: toml::de::Error| CliError::Config(e.to_string()))
    }
}

fn range(start: f64, stop: f64, points: usize) -> TauSection {
    TauSection {
        start,
        stop,
        points,
        values: Vec::new(),
    }
}

fn values(values: Vec<f64>) -> TauSection {
    TauSection {
        start: 0.0,
        stop: 0.0,
        points: 0,
        values,
    }
}

/// Copies `file` over `base`, section by section. Nested tables below the
/// section level are rejected.
fn overlay(base: &mut Table, file: Table, path: &Path) -> Result<(), CliError> {
    let fail = |message: String| CliError::ConfigFile {
        path: path.display().to_string(),
        message,
    };
    for (section, body) in file {
        let Value::Table(body) = body else {
            return Err(fail(format!(
                "top-level key `{section}` must sit inside a section"
            )));
        };
        let slot = base
            .get_mut(&section)
            .and_then(Value::as_table_mut)
            .ok_or_else(|| fail(format!("unknown section `[{section}]`")))?;
        for (key, value) in body {
            if value.is_table() {
                return Err(fail(format!(
                    "nested table `{section}.{key}` is not allowed"
                )));
            }
            if !slot.contains_key(&key) {
                return Err(fail(format!("unknown key `{key}` in `[{section}]`")));
            }
            slot.insert(key, value);
        }
    }
    Ok(())
}

/// Reads an override as a TOML value, falling back to a bare string.
fn parse_env_value(raw: &str) -> Value {
    format!("v = {raw}")
        .parse::<Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| Value::String(raw.to_owned()))
}
