//! Reference parameter sets.
//!
//! The standard sets share `ω_c/2π = ω_m/2π = 1 GHz`, `ω_q = 2ω_c` and
//! `κ = γ = 10⁻³ω_c`; only the qubit couplings (as fractions of `ω_c`) and the
//! qubit decay differ.

use std::f64::consts::TAU;

use crate::params::{consts, mhz_to_angular, DeviceParameters, Environment, SystemConfig};

/// `ω_c` of every standard set, rad/ns.
pub const OMEGA_C: f64 = TAU;

/// Standard config with couplings given as fractions of `ω_c`.
pub fn standard(g_c_ratio: f64, g_m_ratio: f64, gamma_q: f64) -> SystemConfig {
    let env = Environment { kappa: 1e-3 * OMEGA_C, gamma: 1e-3 * OMEGA_C, gamma_q, sigma_z: -1.0 };
    SystemConfig::new(OMEGA_C, OMEGA_C, 2.0 * OMEGA_C, g_c_ratio * OMEGA_C, g_m_ratio * OMEGA_C, env)
        .expect("standard set is valid")
}

/// Bare cavity, qubit decoupled.
pub fn uncoupled() -> SystemConfig {
    standard(0.0, 0.0, 0.0)
}

/// Qubit-dressed cavity, beam decoupled.
pub fn cavity_dressed() -> SystemConfig {
    standard(0.1, 0.0, 0.0)
}

/// `g_c = 0.1ω_c` with the given `g_m/ω_m`.
pub fn beam_coupled(g_m_ratio: f64) -> SystemConfig {
    standard(0.1, g_m_ratio, 0.0)
}

/// Qubit decay of the lossy-qubit comparison, `2π × 2 MHz` in rad/ns.
pub fn lossy_qubit_rate() -> f64 {
    mhz_to_angular(2.0)
}

/// `g_m = 0.05ω_m` with an explicit qubit decay.
pub fn with_qubit_decay(gamma_q: f64) -> SystemConfig {
    standard(0.1, 0.05, gamma_q)
}

/// [`with_qubit_decay`] at [`lossy_qubit_rate`].
pub fn lossy_qubit() -> SystemConfig {
    with_qubit_decay(lossy_qubit_rate())
}

/// 1 GHz resonators, 2 GHz qubit, both couplings `2π × 100 MHz`.
pub fn symmetric() -> SystemConfig {
    let env = Environment {
        kappa: mhz_to_angular(1.0),
        gamma: mhz_to_angular(1.0),
        gamma_q: mhz_to_angular(1.0),
        sigma_z: -1.0,
    };
    SystemConfig::from_ghz(1.0, 1.0, 2.0, 100.0, 100.0, env).expect("valid")
}

/// Device-level parameters reproducing [`symmetric`].
///
/// `I_p = 660 nA`, `B = 0.125 T`, `χ = 0.8`, `δ_zpm = 2.6×10⁻¹³ m`, `L_c = 1 nH`.
/// The beam mass is fixed by `δ_zpm`; the mutual inductance and beam length
/// are back-solved so that both couplings come out at `2π × 100 MHz` with the
/// unhalved zero-point current.
pub fn symmetric_device() -> DeviceParameters {
    let hbar = consts::HBAR;
    let i_p = 660e-9;
    let f = 1e9;
    let l_c = 1e-9;
    let field = 0.125;
    let chi = 0.8;
    let zpm = 2.6e-13;
    let target = TAU * 100e6;
    let mass = hbar / (2.0 * TAU * f * zpm * zpm);
    let i0 = (hbar * TAU * f / l_c).sqrt();
    DeviceParameters {
        persistent_current: i_p,
        external_flux: 0.5 * consts::FLUX_QUANTUM,
        flux_quantum: consts::FLUX_QUANTUM,
        mutual_inductance: hbar * target / (i_p * i0),
        resonator_inductance: l_c,
        magnetic_field: field,
        namr_length: hbar * target / (field * i_p * chi * zpm),
        mode_factor: chi,
        namr_mass: mass,
        f_c: f,
        f_m: f,
        f_q: 2.0 * f,
    }
}
