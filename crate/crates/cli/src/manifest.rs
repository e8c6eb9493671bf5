//! Run manifests and output writing.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use tripartite::verify::{CheckResult, VerificationReport};
use tripartite::{GridSpec, Mutation, SweepSeries, SystemConfig};

use crate::config::{ConfigFile, SCHEMA_VERSION};
use crate::{CliError, SweepRange};

/// Everything needed to reproduce a run. Deliberately free of timestamps
/// and host details so that reruns give identical sidecars.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub schema: &'static str,
    pub subcommand: String,
    pub model: String,
    /// The config as parsed (defaults filled in).
    pub input: ConfigFile,
    /// Canonical parameters in rad/ns.
    pub resolved: SystemConfig,
    pub grid: GridSpec,
    /// Angular frequency the grid and frequency columns are divided by, rad/ns.
    pub normalization: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepManifest>,
    pub outputs: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verification: Option<VerificationSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepManifest {
    pub variable: String,
    pub range: SweepRange,
    pub observable: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub at: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationSummary {
    pub passed: bool,
    pub seed: u64,
    pub random_configs: usize,
    pub mutation: Mutation,
    pub checks: Vec<CheckResult>,
}

impl VerificationSummary {
    pub fn new(seed: u64, random_configs: usize, reports: &[VerificationReport]) -> Self {
        let mut checks: Vec<CheckResult> = Vec::new();
        for report in reports {
            for c in &report.checks {
                match checks.iter_mut().find(|k| k.name == c.name) {
                    Some(k) => {
                        k.max_relative_error = k.max_relative_error.max(c.max_relative_error);
                        k.samples += c.samples;
                        k.passed &= c.passed;
                    }
                    None => checks.push(c.clone()),
                }
            }
        }
        Self {
            passed: checks.iter().all(|c| c.passed),
            seed,
            random_configs,
            mutation: reports.first().map(|r| r.mutation).unwrap_or_default(),
            checks,
        }
    }
}

impl RunManifest {
    pub fn new(subcommand: &str, model: &str, input: ConfigFile, resolved: SystemConfig, grid: GridSpec, normalization: f64) -> Self {
        Self {
            tool: "tripartite",
            version: env!("CARGO_PKG_VERSION"),
            schema: SCHEMA_VERSION,
            subcommand: subcommand.into(),
            model: model.into(),
            input,
            resolved,
            grid,
            normalization,
            sweep: None,
            outputs: Vec::new(),
            verification: None,
        }
    }
}

/// `<out>.json`, keeping the full original file name.
pub fn sidecar_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".json");
    PathBuf::from(name)
}

/// Plain numeric table for sweep summaries, where the first column need not
/// be ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "{}", self.header.join(","))?;
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&v| tripartite::series::format_float(v)).collect();
            writeln!(out, "{}", cells.join(","))?;
        }
        Ok(())
    }
}

pub enum Data<'a> {
    Series(&'a SweepSeries),
    Table(&'a Table),
}

/// Records where [`write_outputs`] will put its files.
pub fn plan_outputs(out: Option<&Path>, manifest: &mut RunManifest) {
    manifest.outputs = match out {
        Some(path) => vec![path.display().to_string(), sidecar_path(path).display().to_string()],
        None => vec!["-".into()],
    };
}

/// Writes the CSV to `out` (stdout when absent) and, with `out`, the sidecar.
pub fn write_outputs<S: Serialize>(out: Option<&Path>, data: Data<'_>, sidecar: &S) -> Result<(), CliError> {
    let write = |w: &mut dyn Write| -> io::Result<()> {
        match data {
            Data::Series(s) => s.write_csv(&mut *w),
            Data::Table(t) => t.write_csv(&mut *w),
        }?;
        w.flush()
    };
    match out {
        Some(path) => {
            let io_err = |p: &Path, e: io::Error| CliError::Io(format!("{}: {e}", p.display()));
            let file = File::create(path).map_err(|e| io_err(path, e))?;
            write(&mut BufWriter::new(file)).map_err(|e| io_err(path, e))?;
            let side = sidecar_path(path);
            let mut text = serde_json::to_string_pretty(sidecar).map_err(|e| CliError::Io(e.to_string()))?;
            text.push('\n');
            std::fs::write(&side, text).map_err(|e| io_err(&side, e))?;
            log::info!("wrote {} and {}", path.display(), side.display());
        }
        None => write(&mut io::stdout().lock())?,
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sidecar_keeps_extension() {
        assert_eq!(sidecar_path(Path::new("out/gm-100.csv")), PathBuf::from("out/gm-100.csv.json"));
    }

    #[test]
    fn table_format() {
        let t = Table { header: vec!["x".into(), "y".into()], rows: vec![vec![0.5, f64::NAN], vec![-1.0, 2.0]] };
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "x,y\n5.0000000000000000e-1,NaN\n-1.0000000000000000e0,2.0000000000000000e0\n"
        );
    }
}
