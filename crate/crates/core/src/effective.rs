//! Two-resonator model obtained by eliminating the dispersive qubit.
//!
//! Second-order elimination of the qubit (ground state, `⟨σ_z⟩ = −1`) leaves
//! red-shifted resonators coupled through an exchange term:
//!
//! ```text
//! ω'_c = ω_c − g_c²/Δ_c
//! ω'_m = ω_m − g_m²/Δ_m
//! g    = −(g_c g_m / 2)(1/Δ_c + 1/Δ_m)
//! ```

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{validate_dispersive, SystemConfig, DEFAULT_DISPERSIVE_THRESHOLD};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EffectiveModel {
    /// Dressed cavity frequency, rad/ns.
    pub omega_c: f64,
    /// Dressed mechanical frequency, rad/ns.
    pub omega_m: f64,
    /// Signed exchange coupling, rad/ns. Non-positive for non-negative qubit couplings.
    pub g: f64,
    pub eta_c: f64,
    pub eta_m: f64,
    pub source: SystemConfig,
}

/// Reduces `cfg` to the effective model, refusing non-dispersive parameters.
pub fn reduce(cfg: &SystemConfig) -> Result<EffectiveModel> {
    reduce_with(cfg, DEFAULT_DISPERSIVE_THRESHOLD, false)
}

/// Reduces `cfg`; `force` skips the dispersive check.
pub fn reduce_with(cfg: &SystemConfig, threshold: f64, force: bool) -> Result<EffectiveModel> {
    cfg.validate()?;
    let report = validate_dispersive(cfg, threshold);
    if !force && !report.passes() {
        return Err(Error::Regime { eta_c: report.eta_c, eta_m: report.eta_m, threshold });
    }
    let dc = cfg.detuning_c();
    let dm = cfg.detuning_m();
    Ok(EffectiveModel {
        omega_c: cfg.omega_c - cfg.g_c * cfg.g_c / dc,
        omega_m: cfg.omega_m - cfg.g_m * cfg.g_m / dm,
        g: -0.5 * cfg.g_c * cfg.g_m * (1.0 / dc + 1.0 / dm),
        eta_c: report.eta_c,
        eta_m: report.eta_m,
        source: *cfg,
    })
}

impl EffectiveModel {
    /// Builds a model directly from dressed parameters. Useful for tests and
    /// for exploring the two-mode problem on its own.
    pub fn from_dressed(omega_c: f64, omega_m: f64, g: f64, source: SystemConfig) -> Self {
        Self { omega_c, omega_m, g, eta_c: 0.0, eta_m: 0.0, source }
    }
}

/// Normal-mode frequencies of the coupled pair, ascending.
pub fn polariton_frequencies(em: &EffectiveModel) -> (f64, f64) {
    let mean = 0.5 * (em.omega_c + em.omega_m);
    let half = 0.5 * (em.omega_c - em.omega_m);
    let r = half.hypot(em.g);
    (mean - r, mean + r)
}

/// Closed-form doublet positions for the resonant case.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DoubletPeaks {
    pub omega_plus: f64,
    pub omega_minus: f64,
    pub splitting: f64,
}

/// Evaluates the doublet formula
/// `ω_± = ω_0 − ((g_c² + g_m²)/2 ∓ √(g_c⁴ − g_c²g_m² + g_m⁴))/Δ_0`.
///
/// Only defined for `ω_c = ω_m`. It agrees with [`polariton_frequencies`] only
/// when `g_c = g_m`; the pole splitting in general is `(g_c² + g_m²)/Δ_0`.
pub fn doublet_formula(cfg: &SystemConfig) -> Result<DoubletPeaks> {
    cfg.validate()?;
    let scale = cfg.omega_c.abs().max(cfg.omega_m.abs());
    if (cfg.omega_c - cfg.omega_m).abs() > 1e-12 * scale {
        return Err(Error::Domain(format!(
            "doublet formula needs ω_c = ω_m, got {} and {} rad/ns",
            cfg.omega_c, cfg.omega_m
        )));
    }
    let omega0 = cfg.omega_c;
    let delta0 = cfg.detuning_c();
    let gc2 = cfg.g_c * cfg.g_c;
    let gm2 = cfg.g_m * cfg.g_m;
    let root = (gc2 * gc2 - gc2 * gm2 + gm2 * gm2).sqrt();
    let mid = 0.5 * (gc2 + gm2);
    Ok(DoubletPeaks {
        omega_plus: omega0 - (mid - root) / delta0,
        omega_minus: omega0 - (mid + root) / delta0,
        splitting: 2.0 * root / delta0,
    })
}

/// Time for the `n`-th complete cavity-to-beam transfer, `(2n+1)π / 2|g|`, in ns.
pub fn transfer_time(em: &EffectiveModel, n: u32) -> Result<f64> {
    if em.g == 0.0 {
        return Err(Error::NoCoupling);
    }
    Ok((2 * n + 1) as f64 * PI / (2.0 * em.g.abs()))
}

/// Mode initially holding the single excitation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Cavity,
    Mechanics,
}

/// Single-excitation amplitudes `(a_c, a_m)` after time `t` (ns).
///
/// Uses the closed-form propagator of the 2×2 block
/// `H = [[ω'_c, g], [g, ω'_m]]`:
/// `e^{−iHt} = e^{−iμt}[cos Ωt − i sin Ωt (δσ_z + gσ_x)/Ω]` with
/// `μ` the mean, `δ` the half-difference and `Ω = √(δ² + g²)`.
pub fn evolve_single_excitation(em: &EffectiveModel, t: f64, initial: Mode) -> Result<(Complex64, Complex64)> {
    if !(t >= 0.0) {
        return Err(Error::param("t", format!("must be >= 0, got {t}")));
    }
    let mean = 0.5 * (em.omega_c + em.omega_m);
    let half = 0.5 * (em.omega_c - em.omega_m);
    let rabi = half.hypot(em.g);
    let (cos, sinc) = if rabi == 0.0 {
        (1.0, t)
    } else {
        let (s, c) = (rabi * t).sin_cos();
        (c, s / rabi)
    };
    let phase = Complex64::from_polar(1.0, -mean * t);
    let i = Complex64::i();
    let u_cc = cos - i * sinc * half;
    let u_mm = cos + i * sinc * half;
    let u_off = -i * sinc * em.g;
    let (a_c, a_m) = match initial {
        Mode::Cavity => (u_cc, u_off),
        Mode::Mechanics => (u_off, u_mm),
    };
    Ok((phase * a_c, phase * a_m))
}
