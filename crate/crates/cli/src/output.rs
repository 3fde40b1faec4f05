use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use tempfile::NamedTempFile;

/// Full double precision: 17 significant digits, with `-0` printed as `0`.
pub fn fmt_f64(x: f64) -> String {
    format!("{:.16e}", x + 0.0)
}

/// Everything needed to reproduce one run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: BTreeMap<String, serde_json::Value>,
    pub seed: u64,
    pub output: String,
    pub tool_version: String,
}

impl RunManifest {
    pub fn new<P: Serialize>(command: &str, parameters: &P, seed: u64, output: &Path) -> Result<Self> {
        let value = serde_json::to_value(parameters)?;
        let parameters = match value {
            serde_json::Value::Object(map) => map.into_iter().collect(),
            other => BTreeMap::from([("value".to_string(), other)]),
        };
        Ok(RunManifest {
            command: command.to_string(),
            parameters,
            seed,
            output: output.display().to_string(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
        })
    }

    pub fn path_for(output: &Path) -> PathBuf {
        output.with_extension("manifest.json")
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing manifest {}", path.display()))
    }

    pub fn arguments<T: for<'de> Deserialize<'de>>(&self) -> Result<T> {
        let map: serde_json::Map<String, serde_json::Value> =
            self.parameters.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
        serde_json::from_value(serde_json::Value::Object(map)).context("manifest parameters do not match the command")
    }
}

/// Output files written to temporaries next to their targets and renamed
/// into place only by [`Staged::commit`].
#[derive(Default)]
pub struct Staged {
    files: Vec<(PathBuf, NamedTempFile)>,
}

impl Staged {
    pub fn add(&mut self, path: &Path, bytes: &[u8]) -> Result<()> {
        let dir = match path.parent() {
            Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
            _ => PathBuf::from("."),
        };
        let mut tmp = NamedTempFile::new_in(&dir).with_context(|| format!("creating a temporary file in {}", dir.display()))?;
        tmp.write_all(bytes)?;
        tmp.flush()?;
        self.files.push((path.to_path_buf(), tmp));
        Ok(())
    }

    pub fn add_json<T: Serialize>(&mut self, path: &Path, value: &T) -> Result<()> {
        let mut bytes = serde_json::to_vec_pretty(value)?;
        bytes.push(b'\n');
        self.add(path, &bytes)
    }

    pub fn add_csv(&mut self, path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(header)?;
        for row in rows {
            w.write_record(row)?;
        }
        let bytes = w.into_inner().map_err(|e| anyhow::anyhow!("csv buffer: {e}"))?;
        self.add(path, &bytes)
    }

    pub fn paths(&self) -> Vec<&Path> {
        self.files.iter().map(|(p, _)| p.as_path()).collect()
    }

    pub fn commit(self) -> Result<()> {
        for (path, tmp) in self.files {
            tmp.persist(&path).with_context(|| format!("writing {}", path.display()))?;
        }
        Ok(())
    }
}
