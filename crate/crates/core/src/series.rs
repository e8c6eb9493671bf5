//! Frequency grids and tabulated sweep output.

use std::io::{self, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::SystemConfig;

/// Uniform grid `[min, max]` with `points` samples, in units of a
/// normalization frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self { min: 0.95, max: 1.05, points: 4001 }
    }
}

impl GridSpec {
    pub fn new(min: f64, max: f64, points: usize) -> Result<Self> {
        let g = Self { min, max, points };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.min.is_finite() && self.max.is_finite()) {
            return Err(Error::InvalidGrid("bounds must be finite".into()));
        }
        if !(self.min < self.max) {
            return Err(Error::InvalidGrid(format!(
                "grid must ascend: min {} >= max {}",
                self.min, self.max
            )));
        }
        if self.points < 2 {
            return Err(Error::InvalidGrid(format!("need at least 2 points, got {}", self.points)));
        }
        Ok(())
    }

    /// Normalized sample positions.
    pub fn normalized(&self) -> Vec<f64> {
        let n = self.points - 1;
        let step = (self.max - self.min) / n as f64;
        (0..self.points)
            .map(|k| if k == n { self.max } else { self.min + step * k as f64 })
            .collect()
    }

    /// Angular frequencies for normalization frequency `scale` (rad/ns).
    pub fn omegas(&self, scale: f64) -> Vec<f64> {
        self.normalized().into_iter().map(|x| x * scale).collect()
    }
}

/// Labelled real-valued column.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Column {
    pub label: String,
    pub values: Vec<f64>,
}

/// Where a series came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub kind: String,
    pub model: String,
    pub config: SystemConfig,
    pub grid: GridSpec,
    /// Angular frequency used to normalize the grid, rad/ns.
    pub normalization: f64,
}

/// Tabulated response on an ascending frequency grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSeries {
    /// Angular frequencies, rad/ns, strictly ascending.
    pub grid: Vec<f64>,
    pub columns: Vec<Column>,
    pub provenance: Option<Provenance>,
}

impl SweepSeries {
    pub fn new(grid: Vec<f64>) -> Result<Self> {
        if grid.len() < 2 {
            return Err(Error::InvalidGrid(format!("need at least 2 points, got {}", grid.len())));
        }
        if grid.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidGrid("grid must be strictly ascending".into()));
        }
        Ok(Self { grid, columns: Vec::new(), provenance: None })
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = Some(provenance);
        self
    }

    pub fn push_column(&mut self, label: impl Into<String>, values: Vec<f64>) -> Result<()> {
        let label = label.into();
        if values.len() != self.grid.len() {
            return Err(Error::Precondition(format!(
                "column `{label}` has {} values for {} grid points",
                values.len(),
                self.grid.len()
            )));
        }
        self.columns.push(Column { label, values });
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn column(&self, label: &str) -> Option<&[f64]> {
        self.columns.iter().find(|c| c.label == label).map(|c| c.values.as_slice())
    }

    /// Writes the columns as CSV: header row, then one row per grid point,
    /// every float in `{:.16e}` (17 significant digits), `\n` line endings.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        let header: Vec<&str> = self.columns.iter().map(|c| c.label.as_str()).collect();
        writeln!(out, "{}", header.join(","))?;
        let mut line = String::new();
        for row in 0..self.grid.len() {
            line.clear();
            for (k, col) in self.columns.iter().enumerate() {
                if k > 0 {
                    line.push(',');
                }
                line.push_str(&format_float(col.values[row]));
            }
            line.push('\n');
            out.write_all(line.as_bytes())?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("csv is ascii")
    }
}

/// Fixed 17-significant-digit representation used in every data file.
pub fn format_float(v: f64) -> String {
    if v.is_nan() {
        "NaN".to_string()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{v:.16e}")
    }
}

/// Evaluates `f` on every grid point in parallel; results keep grid order.
pub(crate) fn evaluate<T, F>(grid: &[f64], f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(f64) -> Result<T> + Sync,
{
    grid.par_iter().map(|&w| f(w)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_endpoints_are_exact() {
        let g = GridSpec::new(0.95, 1.05, 4001).unwrap();
        let xs = g.normalized();
        assert_eq!(xs.len(), 4001);
        assert_eq!(xs[0], 0.95);
        assert_eq!(xs[4000], 1.05);
        assert!(xs.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn bad_grids() {
        assert!(GridSpec::new(1.0, 0.9, 10).is_err());
        assert!(GridSpec::new(1.0, 1.0, 10).is_err());
        assert!(GridSpec::new(0.9, 1.0, 1).is_err());
        assert!(GridSpec::new(f64::NAN, 1.0, 10).is_err());
        assert!(SweepSeries::new(vec![1.0, 0.5]).is_err());
        assert!(SweepSeries::new(vec![1.0]).is_err());
    }

    #[test]
    fn csv_layout() {
        let mut s = SweepSeries::new(vec![1.0, 2.0]).unwrap();
        s.push_column("a", vec![1.0, 0.1]).unwrap();
        s.push_column("b", vec![f64::NAN, -2.5]).unwrap();
        assert!(s.push_column("c", vec![1.0]).is_err());
        let csv = s.to_csv_string();
        assert_eq!(
            csv,
            "a,b\n1.0000000000000000e0,NaN\n1.0000000000000001e-1,-2.5000000000000000e0\n"
        );
    }

    #[test]
    fn parallel_evaluation_keeps_order() {
        let grid: Vec<f64> = (0..1000).map(|k| k as f64).collect();
        let out = evaluate(&grid, |w| Ok(w * 2.0)).unwrap();
        assert!(out.iter().enumerate().all(|(k, &v)| v == 2.0 * k as f64));
    }
}
