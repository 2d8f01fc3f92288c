use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use he4film::config::FilmConfig;
use serde::{Deserialize, Serialize};

pub const MANIFEST_FILE: &str = "manifest.json";

/// Written next to every output set. `argv` with `resolved_parameters` as
/// the config reproduces the outputs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub timestamp: String,
    pub command: String,
    pub argv: Vec<String>,
    pub config_path: Option<PathBuf>,
    pub resolved_parameters: Option<FilmConfig>,
    pub options: serde_json::Value,
    pub outputs: Vec<PathBuf>,
}

impl RunManifest {
    pub fn new(
        command: &str,
        config_path: Option<&Path>,
        resolved: Option<FilmConfig>,
        options: serde_json::Value,
    ) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
            command: command.into(),
            argv: std::env::args().collect(),
            config_path: config_path.map(Path::to_path_buf),
            resolved_parameters: resolved,
            options,
            outputs: Vec::new(),
        }
    }

    pub fn write(&self, dir: &Path) -> anyhow::Result<PathBuf> {
        let path = dir.join(MANIFEST_FILE);
        let text = serde_json::to_string_pretty(self)?;
        fs::write(&path, text + "\n").with_context(|| format!("writing {}", path.display()))?;
        Ok(path)
    }
}
