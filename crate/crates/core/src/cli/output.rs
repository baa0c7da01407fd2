//! CSV and manifest writers.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::CliError;
use crate::stats::Histogram;

/// 17 significant digits, enough to round-trip any double.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn csv_rows<'a, I>(header: &[&str], rows: I) -> String
where
    I: IntoIterator<Item = &'a [f64]>,
{
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|&v| fmt17(v)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn histogram_csv(h: &Histogram) -> String {
    let mut out = String::from("bin_left,bin_right,count,density\n");
    for (i, (&c, &d)) in h.counts.iter().zip(&h.normalized_density).enumerate() {
        let _ = writeln!(out, "{},{},{},{}", fmt17(h.edges[i]), fmt17(h.edges[i + 1]), c, fmt17(d));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub config: serde_json::Value,
    pub outputs: Vec<PathBuf>,
    /// Excluded from any reproducibility comparison.
    pub wall_time: f64,
    pub seed: u64,
}

pub const MANIFEST_NAME: &str = "manifest.json";

/// Collects the files a command writes under its output directory.
pub struct OutputDir {
    root: PathBuf,
    written: Vec<PathBuf>,
}

impl OutputDir {
    pub fn create(root: &Path) -> Result<Self, CliError> {
        fs::create_dir_all(root).map_err(|e| CliError::Runtime(format!("{}: {e}", root.display())))?;
        Ok(OutputDir {
            root: root.to_path_buf(),
            written: Vec::new(),
        })
    }

    pub fn write(&mut self, name: &str, contents: &str) -> Result<(), CliError> {
        let path = self.root.join(name);
        fs::write(&path, contents).map_err(|e| CliError::Runtime(format!("{}: {e}", path.display())))?;
        self.written.push(path);
        Ok(())
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<(), CliError> {
        let mut s = serde_json::to_string_pretty(value).map_err(|e| CliError::Runtime(e.to_string()))?;
        s.push('\n');
        self.write(name, &s)
    }

    pub fn finish(mut self, command: &str, config: serde_json::Value, seed: u64, wall_time: f64) -> Result<PathBuf, CliError> {
        let manifest = RunManifest {
            command: command.to_string(),
            config,
            outputs: std::mem::take(&mut self.written),
            wall_time,
            seed,
        };
        for p in &manifest.outputs {
            let ok = fs::metadata(p).map(|m| m.len() > 0).unwrap_or(false);
            if !ok {
                return Err(CliError::Runtime(format!("output {} is missing or empty", p.display())));
            }
        }
        self.write_json(MANIFEST_NAME, &manifest)?;
        Ok(self.root.join(MANIFEST_NAME))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_round_trip() {
        for x in [0.1, -2.0 / 3.0, 1e-300, 6.02214076e23, 0.0] {
            let s = fmt17(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
            let digits = s.split('e').next().unwrap().chars().filter(char::is_ascii_digit).count();
            assert_eq!(digits, 17, "{s}");
        }
    }

    #[test]
    fn csv_layout() {
        let rows = [[1.0, 0.5], [2.0, 0.25]];
        let s = csv_rows(&["x", "rho"], rows.iter().map(|r| &r[..]));
        assert_eq!(s, "x,rho\n1.0000000000000000e0,5.0000000000000000e-1\n2.0000000000000000e0,2.5000000000000000e-1\n");
    }
}
