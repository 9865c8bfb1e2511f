//! Deterministic CSV tables and the run manifest.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::Config;
use crate::error::CliError;

/// Shortest representation that parses back to the same `f64`; exponent
/// notation outside `[1e-4, 1e16)`.
pub fn fmt_num(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 {
        "0".to_owned()
    } else if !x.is_finite() || (1e-4..1e16).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

/// A CSV table with `#` comment lines above the column header.
#[derive(Debug, Clone, Default)]
pub struct CsvTable {
    comments: Vec<String>,
    columns: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn new(title: &str) -> Self {
        Self {
            comments: vec![format!("kerrqc {} {title}", env!("CARGO_PKG_VERSION"))],
            ..Self::default()
        }
    }

    pub fn comment(&mut self, line: impl Into<String>) -> &mut Self {
        self.comments.push(line.into());
        self
    }

    /// Adds a column and documents its unit and meaning in the header.
    pub fn column(&mut self, name: &str, unit: &str, meaning: &str) -> &mut Self {
        self.comments.push(format!("{name} [{unit}]: {meaning}"));
        self.columns.push(name.to_owned());
        self
    }

    pub fn row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.rows.push(cells);
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.comments {
            let _ = writeln!(out, "# {c}");
        }
        let _ = writeln!(out, "{}", self.columns.join(","));
        for r in &self.rows {
            let _ = writeln!(out, "{}", r.join(","));
        }
        out
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OutputFile {
    /// Relative to the output directory.
    pub path: String,
    pub sha256: String,
    pub bytes: u64,
}

impl OutputFile {
    pub fn from_disk(root: &Path, path: &Path) -> Result<Self, CliError> {
        let bytes = std::fs::read(path).map_err(CliError::io(path))?;
        Ok(Self {
            path: relative(root, path),
            sha256: hex::encode(Sha256::digest(&bytes)),
            bytes: bytes.len() as u64,
        })
    }
}

fn relative(root: &Path, path: &Path) -> String {
    path.strip_prefix(root)
        .unwrap_or(path)
        .to_string_lossy()
        .replace('\\', "/")
}

/// Writes `text` to `root/name` and records it.
pub fn write_text(root: &Path, name: &str, text: &str) -> Result<OutputFile, CliError> {
    let path = root.join(name);
    std::fs::write(&path, text).map_err(CliError::io(&path))?;
    Ok(OutputFile {
        path: relative(root, &path),
        sha256: hex::encode(Sha256::digest(text.as_bytes())),
        bytes: text.len() as u64,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct Stage {
    pub name: String,
    pub wall_seconds: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub subcommand: &'static str,
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    /// SHA-256 of the resolved configuration as JSON.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scenario_hash: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub config: Option<Config>,
    pub threads: usize,
    pub outputs: Vec<OutputFile>,
    pub stages: Vec<Stage>,
}

impl RunManifest {
    pub fn new(subcommand: &'static str, threads: usize) -> Self {
        Self {
            tool: "kerrqc",
            version: env!("CARGO_PKG_VERSION"),
            subcommand,
            status: "running",
            error: None,
            scenario_hash: None,
            config: None,
            threads,
            outputs: Vec::new(),
            stages: Vec::new(),
        }
    }

    pub fn set_config(&mut self, config: &Config) {
        let json = serde_json::to_string(config).expect("configuration serializes");
        self.scenario_hash = Some(hex::encode(Sha256::digest(json.as_bytes())));
        self.config = Some(config.clone());
    }

    pub fn write(&self, dir: &Path) -> Result<PathBuf, CliError> {
        let path = dir.join("manifest.json");
        let json = serde_json::to_string_pretty(self).expect("manifest serializes");
        std::fs::write(&path, json + "\n").map_err(CliError::io(&path))?;
        Ok(path)
    }
}
