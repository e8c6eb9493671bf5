//! Single-photon reflection off the CPW port in the effective two-mode model.
//!
//! ```text
//!        [κ/2 + i(ω − ω'_c)][γ/2 − i(ω − ω'_m)] − g²
//! r(ω) = --------------------------------------------
//!        [κ/2 − i(ω − ω'_c)][γ/2 − i(ω − ω'_m)] + g²
//! ```
//!
//! Transmittance is the bookkeeping complement `|t|² = 1 − |r|²`: whatever is
//! not reflected at the single port is routed into the mechanical channel.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::effective::EffectiveModel;
use crate::error::{Error, Result};
use crate::peaks::find_peaks;
use crate::series::{evaluate, GridSpec, Provenance, SweepSeries};

/// `|r|` below which the phase is treated as undefined for differentiation.
pub const DIP_GUARD: f64 = 1e-6;

/// Default finite-difference step as a fraction of `κ`.
pub const DEFAULT_STEP_FRACTION: f64 = 1e-4;

/// Minima whose absorbed fraction `1 − |r|²` stays below this are rounding
/// noise on a unimodular response, not dips.
pub const ABSORPTION_FLOOR: f64 = 1e-12;

/// Samples used when searching for reflection minima numerically.
const MINIMA_SEARCH_POINTS: usize = 20_001;

pub const TRANSPORT_COLUMNS: [&str; 7] =
    ["omega_norm", "re_r", "im_r", "abs_r2", "abs_t2", "phase", "tau_d"];

/// Reflection at one frequency with derived quantities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransportPoint {
    pub omega: f64,
    pub r: Complex64,
    pub reflectance: f64,
    pub transmittance: f64,
    /// Principal-branch phase; `None` exactly at a zero of `r`.
    pub phase: Option<f64>,
    pub group_delay: Option<f64>,
}

impl TransportPoint {
    pub fn new(omega: f64, r: Complex64) -> Self {
        let reflectance = r.norm_sqr();
        Self {
            omega,
            r,
            reflectance,
            transmittance: 1.0 - reflectance,
            phase: phase(r).ok(),
            group_delay: None,
        }
    }
}

/// Effective-model reflection coefficient.
pub fn reflection_eff(omega: f64, em: &EffectiveModel, kappa: f64, gamma: f64) -> Result<Complex64> {
    if !(kappa > 0.0) {
        return Err(Error::param("kappa", format!("the cavity port needs kappa > 0, got {kappa}")));
    }
    if !(gamma >= 0.0) {
        return Err(Error::param("gamma", format!("must be >= 0, got {gamma}")));
    }
    let cavity = Complex64::new(0.5 * kappa, -(omega - em.omega_c));
    let mech = Complex64::new(0.5 * gamma, -(omega - em.omega_m));
    let g2 = em.g * em.g;
    let den = cavity * mech + g2;
    if den.norm() < 1e-300 {
        return Err(Error::Singularity { omega });
    }
    Ok((cavity.conj() * mech - g2) / den)
}

/// Bare-cavity reflection `(κ/2 + iΔ)/(κ/2 − iΔ)`; unimodular.
pub fn reflection_bare(omega: f64, omega_c: f64, kappa: f64) -> Result<Complex64> {
    if !(kappa > 0.0) {
        return Err(Error::param("kappa", format!("must be > 0, got {kappa}")));
    }
    let a = Complex64::new(0.5 * kappa, -(omega - omega_c));
    Ok(a.conj() / a)
}

/// Principal argument in (−π, π].
pub fn phase(r: Complex64) -> Result<f64> {
    if r.re == 0.0 && r.im == 0.0 {
        return Err(Error::UndefinedPhase);
    }
    let p = r.arg();
    Ok(if p <= -PI { PI } else { p })
}

/// Central-difference derivative of the locally unwrapped phase of `r_fn`.
pub fn group_delay_with<F>(r_fn: F, omega: f64, step: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<Complex64>,
{
    if !(step > 0.0) {
        return Err(Error::param("step", format!("must be > 0, got {step}")));
    }
    let lo = r_fn(omega - step)?;
    let mid = r_fn(omega)?;
    let hi = r_fn(omega + step)?;
    if lo.norm().min(mid.norm()).min(hi.norm()) < DIP_GUARD {
        return Err(Error::DipProximity { omega });
    }
    let mut dphi = phase(hi)? - phase(lo)?;
    if dphi > PI {
        dphi -= 2.0 * PI;
    } else if dphi < -PI {
        dphi += 2.0 * PI;
    }
    Ok(dphi / (2.0 * step))
}

/// Group delay `∂φ/∂ω` (ns) of the effective-model reflection.
pub fn group_delay(em: &EffectiveModel, kappa: f64, gamma: f64, omega: f64, step: f64) -> Result<f64> {
    group_delay_with(|w| reflection_eff(w, em, kappa, gamma), omega, step)
}

/// Local minimum of `|r|²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Dip {
    pub omega: f64,
    pub reflectance: f64,
}

/// Zero-reflection analysis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ZeroReflection {
    /// `ω'_c ± √(g² − κγ/4)`.
    Exact { lower: f64, upper: f64 },
    /// Radicand zero: the two zeros merge at `ω'_c`.
    Degenerate { omega: f64 },
    /// No exact zero exists; numerically located minima of `|r|²`.
    Minima { dips: Vec<Dip> },
}

/// Frequencies of vanishing reflection.
///
/// The closed form `ω'_c ± √(g² − κγ/4)` zeroes the numerator only when the
/// dressed modes are degenerate and `κ = γ`. Otherwise the minima of `|r|²`
/// are located numerically.
pub fn zero_reflection_points(em: &EffectiveModel, kappa: f64, gamma: f64) -> Result<ZeroReflection> {
    reflection_eff(em.omega_c, em, kappa, gamma)?;
    let scale = em.omega_c.abs().max(em.omega_m.abs());
    let degenerate = (em.omega_c - em.omega_m).abs() <= 1e-12 * scale;
    let matched = (kappa - gamma).abs() <= 1e-12 * kappa;
    let g2 = em.g * em.g;
    let radicand = g2 - 0.25 * kappa * gamma;
    if degenerate && matched && g2 > 0.0 {
        if radicand.abs() <= 1e-12 * g2 {
            return Ok(ZeroReflection::Degenerate { omega: em.omega_c });
        }
        if radicand > 0.0 {
            let s = radicand.sqrt();
            return Ok(ZeroReflection::Exact { lower: em.omega_c - s, upper: em.omega_c + s });
        }
    }
    let pad = 2.0 * em.g.abs() + 20.0 * (kappa + gamma);
    let lo = em.omega_c.min(em.omega_m) - pad;
    let hi = em.omega_c.max(em.omega_m) + pad;
    let grid: Vec<f64> = (0..MINIMA_SEARCH_POINTS)
        .map(|k| lo + (hi - lo) * k as f64 / (MINIMA_SEARCH_POINTS - 1) as f64)
        .collect();
    let dips = reflection_dips(&grid, |w| reflection_eff(w, em, kappa, gamma))?;
    Ok(ZeroReflection::Minima { dips })
}

/// Minima of `|r|²` on `grid`, refined against `r_fn`.
pub fn reflection_dips<F>(grid: &[f64], r_fn: F) -> Result<Vec<Dip>>
where
    F: Fn(f64) -> Result<Complex64> + Sync,
{
    let absorbed = evaluate(grid, |w| Ok(1.0 - r_fn(w)?.norm_sqr()))?;
    let report = find_peaks(grid, &absorbed, |w| match r_fn(w) {
        Ok(r) => 1.0 - r.norm_sqr(),
        Err(_) => f64::NAN,
    })?;
    Ok(report
        .peaks
        .iter()
        .filter(|p| p.height > ABSORPTION_FLOOR)
        .map(|p| Dip { omega: p.position, reflectance: 1.0 - p.height })
        .collect())
}

/// Tabulates a reflection function on `grid`, normalized by `scale`.
///
/// `tau_d` is `NaN` where the finite-difference stencil touches a dip, and
/// `phase` is `NaN` exactly at a zero of `r`.
pub fn sweep_reflection<F>(
    r_fn: F,
    grid: &GridSpec,
    scale: f64,
    step: f64,
    provenance: Provenance,
) -> Result<SweepSeries>
where
    F: Fn(f64) -> Result<Complex64> + Sync,
{
    grid.validate()?;
    let omegas = grid.omegas(scale);
    let points = evaluate(&omegas, |w| {
        let mut p = TransportPoint::new(w, r_fn(w)?);
        p.group_delay = match group_delay_with(&r_fn, w, step) {
            Ok(t) => Some(t),
            Err(Error::DipProximity { .. } | Error::UndefinedPhase) => None,
            Err(e) => return Err(e),
        };
        Ok(p)
    })?;
    let mut series = SweepSeries::new(omegas)?.with_provenance(provenance);
    let col = |f: &dyn Fn(&TransportPoint) -> f64| points.iter().map(f).collect::<Vec<_>>();
    series.push_column(TRANSPORT_COLUMNS[0], col(&|p| p.omega / scale))?;
    series.push_column(TRANSPORT_COLUMNS[1], col(&|p| p.r.re))?;
    series.push_column(TRANSPORT_COLUMNS[2], col(&|p| p.r.im))?;
    series.push_column(TRANSPORT_COLUMNS[3], col(&|p| p.reflectance))?;
    series.push_column(TRANSPORT_COLUMNS[4], col(&|p| p.transmittance))?;
    series.push_column(TRANSPORT_COLUMNS[5], col(&|p| p.phase.unwrap_or(f64::NAN)))?;
    series.push_column(TRANSPORT_COLUMNS[6], col(&|p| p.group_delay.unwrap_or(f64::NAN)))?;
    Ok(series)
}

/// Effective-model transport columns on `grid`, normalized by the bare `ω_m`.
pub fn sweep_transport(em: &EffectiveModel, kappa: f64, gamma: f64, grid: &GridSpec) -> Result<SweepSeries> {
    reflection_eff(em.omega_c, em, kappa, gamma)?;
    let scale = em.source.omega_m;
    let mut config = em.source;
    config.kappa = kappa;
    config.gamma = gamma;
    let provenance = Provenance {
        kind: "transport".into(),
        model: "effective".into(),
        config,
        grid: *grid,
        normalization: scale,
    };
    sweep_reflection(
        |w| reflection_eff(w, em, kappa, gamma),
        grid,
        scale,
        DEFAULT_STEP_FRACTION * kappa,
        provenance,
    )
}
