//! Three-mode model keeping the qubit explicitly, with qubit decay.
//!
//! The qubit equation is linearized by replacing `σ_z` with its stationary
//! expectation `⟨σ_z⟩`. Eliminating the qubit and the beam from the
//! frequency-domain Langevin equations gives
//!
//! ```text
//!        (A_m A_q − g_m² s) A_c* + g_c² A_m s
//! r(ω) = ------------------------------------,   s = ⟨σ_z⟩
//!        (A_m A_q − g_m² s) A_c  − g_c² A_m s
//! ```
//!
//! with `A_j = rate_j/2 − i(ω − ω_j)` built from the bare frequencies.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::effective::reduce_with;
use crate::error::{Error, Result};
use crate::params::{angular_to_mhz, validate_dispersive, SystemConfig, ValidityReport, DEFAULT_DISPERSIVE_THRESHOLD};
use crate::series::{evaluate, GridSpec, Provenance, SweepSeries};
use crate::transport::{reflection_dips, reflection_eff, sweep_reflection, Dip, DEFAULT_STEP_FRACTION};

/// Inverse susceptibilities at one frequency, rad/ns.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Susceptibilities {
    pub a_c: Complex64,
    pub a_m: Complex64,
    pub a_q: Complex64,
}

pub fn susceptibilities(omega: f64, cfg: &SystemConfig) -> Susceptibilities {
    Susceptibilities {
        a_c: Complex64::new(0.5 * cfg.kappa, -(omega - cfg.omega_c)),
        a_m: Complex64::new(0.5 * cfg.gamma, -(omega - cfg.omega_m)),
        a_q: Complex64::new(0.5 * cfg.gamma_q, -(omega - cfg.omega_q)),
    }
}

/// Full-model reflection coefficient.
pub fn reflection_full(omega: f64, cfg: &SystemConfig) -> Result<Complex64> {
    cfg.validate()?;
    let Susceptibilities { a_c, a_m, a_q } = susceptibilities(omega, cfg);
    let s = cfg.sigma_z;
    let dressed = a_m * a_q - cfg.g_m * cfg.g_m * s;
    let cavity_term = cfg.g_c * cfg.g_c * a_m * s;
    let den = dressed * a_c - cavity_term;
    if den.norm() < 1e-300 {
        return Err(Error::Singularity { omega });
    }
    Ok((dressed * a_c.conj() + cavity_term) / den)
}

/// Full-model transport columns on `grid`, normalized by `ω_m`.
pub fn sweep_transport_full(cfg: &SystemConfig, grid: &GridSpec) -> Result<SweepSeries> {
    cfg.validate()?;
    if !(cfg.kappa > 0.0) {
        return Err(Error::param("kappa", "transport needs kappa > 0"));
    }
    let provenance = Provenance {
        kind: "transport".into(),
        model: "full".into(),
        config: *cfg,
        grid: *grid,
        normalization: cfg.omega_m,
    };
    sweep_reflection(
        |w| reflection_full(w, cfg),
        grid,
        cfg.omega_m,
        DEFAULT_STEP_FRACTION * cfg.kappa,
        provenance,
    )
}

/// Eigenfrequencies of the single-excitation block, ascending.
///
/// In the basis {photon, phonon, qubit excitation} the block is the arrowhead
/// matrix `diag(ω_c, ω_m, ω_q)` bordered by `g_c`, `g_m` in the qubit row and
/// column. Its eigenvalues interlace `ω_c`, `ω_m` and are the roots of the
/// secular equation `λ − ω_q − g_c²/(λ − ω_c) − g_m²/(λ − ω_m) = 0`, found
/// here by bisection on each interlacing interval.
pub fn single_excitation_eigenvalues(cfg: &SystemConfig) -> [f64; 3] {
    let (wc, wm, wq, gc, gm) = (cfg.omega_c, cfg.omega_m, cfg.omega_q, cfg.g_c, cfg.g_m);
    let mut out = if gc == 0.0 {
        let (a, b) = sym2(wm, wq, gm);
        [wc, a, b]
    } else if gm == 0.0 {
        let (a, b) = sym2(wc, wq, gc);
        [wm, a, b]
    } else if wc == wm {
        // g_m c − g_c b decouples; the bright mode sees the combined coupling
        let (a, b) = sym2(wc, wq, gc.hypot(gm));
        [wc, a, b]
    } else {
        let ((d1, g1), (d2, g2)) = if wc < wm { ((wc, gc), (wm, gm)) } else { ((wm, gm), (wc, gc)) };
        let secular = |x: f64| x - wq - g1 * g1 / (x - d1) - g2 * g2 / (x - d2);
        let reach = gc + gm + 1.0;
        let lower = d1.min(wq) - reach;
        let upper = d2.max(wq) + reach;
        [
            bisect_increasing(&secular, lower, d1),
            bisect_increasing(&secular, d1, d2),
            bisect_increasing(&secular, d2, upper),
        ]
    };
    out.sort_by(f64::total_cmp);
    out
}

fn sym2(a: f64, b: f64, g: f64) -> (f64, f64) {
    let mean = 0.5 * (a + b);
    let r = (0.5 * (a - b)).hypot(g);
    (mean - r, mean + r)
}

/// Root of an increasing function on the open interval `(lo, hi)`.
fn bisect_increasing<F: Fn(f64) -> f64>(f: &F, mut lo: f64, mut hi: f64) -> f64 {
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return mid;
        }
        let v = f(mid);
        if v == 0.0 {
            return mid;
        }
        if v < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}

/// Effective-versus-full transport comparison on a common grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    /// Normalized frequencies `ω/ω_m`.
    pub grid: Vec<f64>,
    pub effective_r2: Vec<f64>,
    pub full_r2: Vec<f64>,
    pub effective_dips: Vec<Dip>,
    pub full_dips: Vec<Dip>,
    /// `ω_full − ω_eff` per paired dip, rad/ns. `None` when the dip counts
    /// differ or a pairing was rejected.
    pub offsets: Option<Vec<f64>>,
    pub max_deviation: f64,
    pub deviation_threshold: f64,
    /// Normalized `[first, last]` grid points where the deviation exceeds the threshold.
    pub deviation_band: Option<(f64, f64)>,
    pub dispersive: ValidityReport,
    pub config: SystemConfig,
}

/// Serializable digest of a [`ComparisonReport`] with offsets in MHz.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonSummary {
    pub offsets_mhz: Option<Vec<f64>>,
    pub effective_dips: Vec<Dip>,
    pub full_dips: Vec<Dip>,
    pub max_deviation: f64,
    pub deviation_threshold: f64,
    pub deviation_band: Option<(f64, f64)>,
    pub dispersive: ValidityReport,
    pub config: SystemConfig,
}

impl ComparisonReport {
    pub fn summary(&self) -> ComparisonSummary {
        ComparisonSummary {
            offsets_mhz: self.offsets.as_ref().map(|o| o.iter().map(|&d| angular_to_mhz(d)).collect()),
            effective_dips: self.effective_dips.clone(),
            full_dips: self.full_dips.clone(),
            max_deviation: self.max_deviation,
            deviation_threshold: self.deviation_threshold,
            deviation_band: self.deviation_band,
            dispersive: self.dispersive,
            config: self.config,
        }
    }
}

/// Default `|r|²` deviation marking the disagreement band.
pub const DEFAULT_DEVIATION_THRESHOLD: f64 = 0.05;

/// Compares effective- and full-model reflectance on `grid` (normalized by `ω_m`).
///
/// The effective model is built even outside the dispersive regime; the
/// report's `dispersive` field records whether that was the case.
pub fn compare_models(cfg: &SystemConfig, grid: &GridSpec, deviation_threshold: f64) -> Result<ComparisonReport> {
    cfg.validate()?;
    grid.validate()?;
    let dispersive = validate_dispersive(cfg, DEFAULT_DISPERSIVE_THRESHOLD);
    let em = reduce_with(cfg, DEFAULT_DISPERSIVE_THRESHOLD, true)?;
    let omegas = grid.omegas(cfg.omega_m);
    let eff = |w| reflection_eff(w, &em, cfg.kappa, cfg.gamma);
    let full = |w| reflection_full(w, cfg);
    let effective_r2 = evaluate(&omegas, |w| Ok(eff(w)?.norm_sqr()))?;
    let full_r2 = evaluate(&omegas, |w| Ok(full(w)?.norm_sqr()))?;
    let effective_dips = reflection_dips(&omegas, eff)?;
    let full_dips = reflection_dips(&omegas, full)?;
    let offsets = pair_dips(&effective_dips, &full_dips);

    let mut max_deviation: f64 = 0.0;
    let mut band: Option<(f64, f64)> = None;
    for (k, (a, b)) in effective_r2.iter().zip(&full_r2).enumerate() {
        let dev = (a - b).abs();
        max_deviation = max_deviation.max(dev);
        if dev > deviation_threshold {
            let x = omegas[k] / cfg.omega_m;
            band = Some(band.map_or((x, x), |(lo, _)| (lo, x)));
        }
    }
    Ok(ComparisonReport {
        grid: omegas.iter().map(|w| w / cfg.omega_m).collect(),
        effective_r2,
        full_r2,
        effective_dips,
        full_dips,
        offsets,
        max_deviation,
        deviation_threshold,
        deviation_band: band,
        dispersive,
        config: *cfg,
    })
}

/// Nearest-neighbour pairing; a pair further apart than half the smallest
/// spacing between reference dips is rejected.
fn pair_dips(reference: &[Dip], other: &[Dip]) -> Option<Vec<f64>> {
    if reference.len() != other.len() || reference.is_empty() {
        return None;
    }
    let limit = reference
        .windows(2)
        .map(|w| 0.5 * (w[1].omega - w[0].omega).abs())
        .fold(f64::INFINITY, f64::min);
    reference
        .iter()
        .map(|d| {
            let nearest = other
                .iter()
                .min_by(|a, b| (a.omega - d.omega).abs().total_cmp(&(b.omega - d.omega).abs()))?;
            let offset = nearest.omega - d.omega;
            (offset.abs() <= limit).then_some(offset)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;

    #[test]
    fn susceptibility_values() {
        let cfg = presets::lossy_qubit();
        let s = susceptibilities(cfg.omega_c, &cfg);
        assert_eq!(s.a_c, Complex64::new(0.5 * cfg.kappa, 0.0));
        assert_eq!(s.a_c.re, 0.5 * cfg.kappa);
        assert_eq!(s.a_m.re, 0.5 * cfg.gamma);
        assert_eq!(s.a_q.re, 0.5 * cfg.gamma_q);
        let lossless = cfg.with_gamma_q(0.0);
        assert_eq!(susceptibilities(cfg.omega_q, &lossless).a_q, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn susceptibilities_match_extended_precision() {
        // ω = 0.98·2π on the lossy-qubit fixture; references from 50-digit arithmetic.
        let cfg = presets::lossy_qubit();
        let s = susceptibilities(0.98 * presets::OMEGA_C, &cfg);
        assert!((s.a_c.im - 0.12566370614359173).abs() < 1e-15);
        assert!((s.a_q.im - 6.4088490133231782).abs() < 1e-14);
        assert!((s.a_q.re - 0.0062831853071795865).abs() < 1e-18);
    }

    #[test]
    fn decoupled_cavity_reflects_like_bare() {
        let cfg = presets::lossy_qubit().with_g_c(0.0);
        for k in 0..100 {
            let w = cfg.omega_c * (0.95 + 0.001 * k as f64);
            let r = reflection_full(w, &cfg).unwrap();
            let a = susceptibilities(w, &cfg).a_c;
            assert!((r - a.conj() / a).norm() < 1e-14);
            assert!((r.norm() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn vanishing_inversion_decouples() {
        let cfg = presets::lossy_qubit().with_sigma_z(-1e-12);
        for k in 0..100 {
            let w = cfg.omega_c * (0.95 + 0.001 * k as f64);
            let r = reflection_full(w, &cfg).unwrap();
            let a = susceptibilities(w, &cfg).a_c;
            assert!((r - a.conj() / a).norm() < 1e-10);
        }
    }

    #[test]
    fn eigenvalues_without_coupling() {
        let cfg = presets::standard(0.0, 0.0, 0.0);
        let mut bare = [cfg.omega_c, cfg.omega_m, cfg.omega_q];
        bare.sort_by(f64::total_cmp);
        assert_eq!(single_excitation_eigenvalues(&cfg), bare);
    }

    #[test]
    fn eigenvalues_reproduce_dispersive_shifts() {
        let cfg = presets::symmetric();
        let ev = single_excitation_eigenvalues(&cfg);
        // ω_c = ω_m: the dark mode stays at ω_c, the bright one is pushed down
        // by (g_c² + g_m²)/Δ to second order.
        let delta = cfg.detuning_c();
        let eta2 = (cfg.g_c / delta).powi(2);
        assert!((ev[1] - cfg.omega_c).abs() < 1e-14);
        let bright = cfg.omega_c - (cfg.g_c.powi(2) + cfg.g_m.powi(2)) / delta;
        assert!((ev[0] - bright).abs() < 4.0 * eta2 * eta2 * delta);
    }

    #[test]
    fn compare_trivial_case() {
        let cfg = presets::standard(0.0, 0.0, 0.0);
        let rep = compare_models(&cfg, &GridSpec::new(0.95, 1.05, 1001).unwrap(), 0.01).unwrap();
        assert!(rep.max_deviation < 1e-14);
        assert!(rep.effective_r2.iter().all(|v| (v - 1.0).abs() < 1e-14));
        assert!(rep.deviation_band.is_none());
    }

    #[test]
    fn pairing_rejects_far_dips() {
        let d = |omega| Dip { omega, reflectance: 0.1 };
        assert_eq!(pair_dips(&[d(1.0), d(2.0)], &[d(1.1), d(2.1)]), Some(vec![0.10000000000000009, 0.10000000000000009]));
        assert_eq!(pair_dips(&[d(1.0), d(2.0)], &[d(1.6), d(2.1)]), None);
        assert_eq!(pair_dips(&[d(1.0)], &[d(1.1), d(2.1)]), None);
    }
}
