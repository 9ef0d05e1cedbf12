//! Deterministic report writers. JSON floats use shortest round-trip
//! formatting (serde_json), CSV uses the same via the standard formatter;
//! reports carry no timestamps, so identical runs produce identical bytes.

use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::CliError;

#[derive(Debug, Clone, Serialize)]
pub struct Meta {
    pub tool: &'static str,
    pub version: &'static str,
}

impl Meta {
    pub fn new() -> Self {
        Self {
            tool: "warpsol",
            version: env!("CARGO_PKG_VERSION"),
        }
    }
}

impl Default for Meta {
    fn default() -> Self {
        Self::new()
    }
}

/// Output directory with overwrite protection and a CSV on/off switch.
#[derive(Debug, Clone)]
pub struct OutputSink {
    pub dir: PathBuf,
    pub force: bool,
    pub write_curves: bool,
}

impl OutputSink {
    pub fn new(dir: &Path, force: bool, write_curves: bool) -> Self {
        Self {
            dir: dir.to_path_buf(),
            force,
            write_curves,
        }
    }

    fn target(&self, name: &str) -> Result<PathBuf, CliError> {
        let path = self.dir.join(name);
        if path.exists() && !self.force {
            return Err(CliError::Usage(format!(
                "output {} exists; pass --force to overwrite",
                path.display()
            )));
        }
        Ok(path)
    }

    pub fn write_json<T: Serialize>(&self, name: &str, value: &T) -> Result<PathBuf, CliError> {
        let path = self.target(name)?;
        std::fs::create_dir_all(&self.dir)?;
        let mut body = serde_json::to_string_pretty(value)
            .map_err(|e| CliError::Usage(format!("serialization failed: {e}")))?;
        body.push('\n');
        std::fs::write(&path, body)?;
        Ok(path)
    }

    /// Writes a CSV of f64 columns unless curves are disabled.
    pub fn write_csv(
        &self,
        name: &str,
        header: &[&str],
        rows: impl Iterator<Item = Vec<f64>>,
    ) -> Result<Option<PathBuf>, CliError> {
        if !self.write_curves {
            return Ok(None);
        }
        let path = self.target(name)?;
        std::fs::create_dir_all(&self.dir)?;
        let mut body = String::new();
        body.push_str(&header.join(","));
        body.push('\n');
        for row in rows {
            let mut first = true;
            for value in row {
                if !first {
                    body.push(',');
                }
                first = false;
                if value.is_nan() {
                    // Empty field for undefined entries.
                } else {
                    body.push_str(&format!("{value}"));
                }
            }
            body.push('\n');
        }
        std::fs::write(&path, body)?;
        Ok(Some(path))
    }
}
