//! Peak location on tabulated spectra with continuous refinement.
//!
//! Candidates are interior discrete maxima of the sampled column. Each one is
//! refined by golden-section search of the underlying continuous function on
//! its bracketing grid interval, and its full width at half maximum is found
//! by bisection where the half-height crossing is bracketed on both sides.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::SweepSeries;

/// Refinement stops once the bracket is below this fraction of the grid span.
/// Far tighter than 1e-6 of the span; the limit in practice is the flatness of
/// the maximum in double precision.
pub const REFINE_TOLERANCE: f64 = 1e-12;

const MAX_GOLDEN_ITERATIONS: usize = 200;
const MAX_BISECTIONS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Peak {
    /// Refined position, rad/ns.
    pub position: f64,
    pub height: f64,
    /// Full width at half maximum, rad/ns, when both crossings are bracketed.
    pub fwhm: Option<f64>,
    /// Golden-section search reached [`REFINE_TOLERANCE`].
    pub converged: bool,
    pub left_bracketed: bool,
    pub right_bracketed: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PeakReport {
    pub peaks: Vec<Peak>,
}

impl PeakReport {
    pub fn len(&self) -> usize {
        self.peaks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.peaks.is_empty()
    }

    pub fn positions(&self) -> Vec<f64> {
        self.peaks.iter().map(|p| p.position).collect()
    }
}

/// Finds peaks of `values` sampled on `grid`, refining against `f`.
///
/// `f` must be the continuous function the column was sampled from. A series
/// without an interior maximum yields an empty report.
pub fn find_peaks<F>(grid: &[f64], values: &[f64], f: F) -> Result<PeakReport>
where
    F: Fn(f64) -> f64,
{
    if grid.len() != values.len() {
        return Err(Error::Precondition(format!(
            "grid has {} points but column has {}",
            grid.len(),
            values.len()
        )));
    }
    if grid.len() < 5 {
        return Err(Error::Precondition(format!("peak search needs >= 5 points, got {}", grid.len())));
    }
    let span = grid[grid.len() - 1] - grid[0];
    let tol = REFINE_TOLERANCE * span;
    let n = grid.len();
    let mut peaks = Vec::new();
    let mut i = 1;
    while i + 1 < n {
        if !(values[i] > values[i - 1]) {
            i += 1;
            continue;
        }
        // step over a flat top
        let mut j = i;
        while j + 1 < n && values[j + 1] == values[i] {
            j += 1;
        }
        if j + 1 >= n || !(values[j + 1] < values[i]) {
            i = j + 1;
            continue;
        }
        let (position, converged) = golden_max(&f, grid[i - 1], grid[j + 1], tol);
        let height = f(position);
        if height > 0.0 {
            let left = half_crossing(grid, values, &f, position, height, i - 1, Side::Left);
            let right = half_crossing(grid, values, &f, position, height, j + 1, Side::Right);
            peaks.push(Peak {
                position,
                height,
                fwhm: match (left, right) {
                    (Some(l), Some(r)) => Some(r - l),
                    _ => None,
                },
                converged,
                left_bracketed: left.is_some(),
                right_bracketed: right.is_some(),
            });
        }
        i = j + 1;
    }
    Ok(PeakReport { peaks })
}

/// [`find_peaks`] on a named column of `series`.
pub fn find_peaks_in<F>(series: &SweepSeries, column: &str, f: F) -> Result<PeakReport>
where
    F: Fn(f64) -> f64,
{
    let values = series
        .column(column)
        .ok_or_else(|| Error::Precondition(format!("no column `{column}`")))?;
    find_peaks(&series.grid, values, f)
}

fn golden_max<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, tol: f64) -> (f64, bool) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..MAX_GOLDEN_ITERATIONS {
        if b - a <= tol {
            return (0.5 * (a + b), true);
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    (0.5 * (a + b), b - a <= tol)
}

#[derive(Clone, Copy)]
enum Side {
    Left,
    Right,
}

/// Walks outward from `start` until the samples drop to half height, then
/// bisects. Returns `None` when the descent is interrupted by another rise or
/// the grid ends first.
fn half_crossing<F: Fn(f64) -> f64>(
    grid: &[f64],
    values: &[f64],
    f: &F,
    position: f64,
    height: f64,
    start: usize,
    side: Side,
) -> Option<f64> {
    let half = 0.5 * height;
    let mut inner = position;
    let mut prev = height;
    let mut k = start;
    loop {
        let v = values[k];
        if v > prev {
            return None;
        }
        let x = grid[k];
        let beyond = match side {
            Side::Left => x < inner,
            Side::Right => x > inner,
        };
        if beyond {
            if v <= half {
                return Some(bisect(f, half, inner, x));
            }
            inner = x;
            prev = v;
        }
        match side {
            Side::Left if k == 0 => return None,
            Side::Left => k -= 1,
            Side::Right if k + 1 == grid.len() => return None,
            Side::Right => k += 1,
        }
    }
}

/// Root of `f − level` between `above` (f > level) and `below` (f ≤ level).
fn bisect<F: Fn(f64) -> f64>(f: &F, level: f64, mut above: f64, mut below: f64) -> f64 {
    for _ in 0..MAX_BISECTIONS {
        let mid = 0.5 * (above + below);
        if mid == above || mid == below {
            break;
        }
        if f(mid) > level {
            above = mid;
        } else {
            below = mid;
        }
    }
    0.5 * (above + below)
}
