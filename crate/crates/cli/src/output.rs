use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::{CliError, CliResult, ExperimentConfig};

/// Files produced by a command, in the order they are written.
#[derive(Debug, Default)]
pub(crate) struct Outputs {
    files: Vec<(PathBuf, String)>,
}

impl Outputs {
    pub(crate) fn add(&mut self, path: impl Into<PathBuf>, contents: String) {
        self.files.push((path.into(), contents));
    }
}

/// Echo of a finished run; `config` alone determines every table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub version: String,
    pub config: ExperimentConfig,
    /// Output paths as given (relative ones are under `config.out_dir`).
    pub outputs: Vec<String>,
    pub wall_time_seconds: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentResult {
    pub manifest: Manifest,
    /// CSV outputs keyed by path.
    pub tables: BTreeMap<String, String>,
    /// JSON outputs keyed by path.
    pub summaries: BTreeMap<String, serde_json::Value>,
    /// SVG outputs keyed by path.
    pub svgs: BTreeMap<String, String>,
}

/// Writes `contents` to a temporary file in the target directory and renames
/// it into place.
pub(crate) fn write_atomic(path: &Path, contents: &[u8]) -> CliResult<()> {
    let io_err = |e: std::io::Error| CliError::Runtime(format!("io: {}: {e}", path.display()));
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir).map_err(io_err)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err)?;
    tmp.write_all(contents).map_err(io_err)?;
    tmp.persist(path).map_err(|e| io_err(e.error))?;
    Ok(())
}

pub(crate) fn finish(config: &ExperimentConfig, outputs: Outputs, wall_time_seconds: f64) -> CliResult<ExperimentResult> {
    let mut tables = BTreeMap::new();
    let mut summaries = BTreeMap::new();
    let mut svgs = BTreeMap::new();
    let mut names = Vec::new();
    for (rel, contents) in outputs.files {
        write_atomic(&config.out_dir.join(&rel), contents.as_bytes())?;
        let name = rel.display().to_string();
        match rel.extension().and_then(|e| e.to_str()) {
            Some("json") => {
                let value = serde_json::from_str(&contents).expect("commands emit valid JSON");
                summaries.insert(name.clone(), value);
            }
            Some("svg") => {
                svgs.insert(name.clone(), contents);
            }
            _ => {
                tables.insert(name.clone(), contents);
            }
        }
        names.push(name);
    }
    let manifest = Manifest {
        version: env!("CARGO_PKG_VERSION").to_string(),
        config: config.clone(),
        outputs: names,
        wall_time_seconds,
    };
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serialises") + "\n";
    write_atomic(&config.out_dir.join("manifest.json"), text.as_bytes())?;
    Ok(ExperimentResult { manifest, tables, summaries, svgs })
}

/// CSV writer: comma separated, LF line ends, reals in shortest round-trip
/// decimal form.
#[derive(Debug, Default)]
pub(crate) struct Csv {
    text: String,
}

impl Csv {
    pub(crate) fn with_header(fields: &[&str]) -> Self {
        let mut csv = Csv::default();
        csv.text.push_str(&fields.join(","));
        csv.text.push('\n');
        csv
    }

    pub(crate) fn row(&mut self, fields: &[String]) {
        self.text.push_str(&fields.join(","));
        self.text.push('\n');
    }

    pub(crate) fn finish(self) -> String {
        self.text
    }
}

/// Shortest decimal that parses back to the same double.
pub(crate) fn real(x: f64) -> String {
    format!("{x}")
}

/// Reads a numeric CSV, skipping blank lines, `#` comments and a header.
pub(crate) fn read_numeric_csv(text: &str) -> CliResult<Vec<Vec<f64>>> {
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parsed: Result<Vec<f64>, _> = line.split(',').map(|f| f.trim().parse::<f64>()).collect();
        match parsed {
            Ok(row) => rows.push(row),
            Err(_) if rows.is_empty() => continue,
            Err(_) => return Err(CliError::Config(format!("line {}: not numeric", i + 1))),
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_format() {
        let mut csv = Csv::with_header(&["N", "count", "ratio"]);
        csv.row(&["5".into(), "4".into(), real(0.8)]);
        assert_eq!(csv.finish(), "N,count,ratio\n5,4,0.8\n");
        assert_eq!(real(0.1 + 0.2), "0.30000000000000004");
        assert_eq!(real(2.0), "2");
    }

    #[test]
    fn numeric_reader() {
        let rows = read_numeric_csv("value\n1\n2.5\n\n# c\n-3\n").unwrap();
        assert_eq!(rows, vec![vec![1.0], vec![2.5], vec![-3.0]]);
        assert!(read_numeric_csv("1\nx\n").is_err());
    }

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sub").join("a.csv");
        write_atomic(&path, b"one").unwrap();
        write_atomic(&path, b"two").unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "two");
        assert_eq!(std::fs::read_dir(path.parent().unwrap()).unwrap().count(), 1);
    }
}
