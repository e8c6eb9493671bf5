//! Physical parameters of the CPW resonator, flux qubit and nanomechanical
//! resonator, and their conversion to the canonical angular-frequency model.
//!
//! Internally every frequency, coupling and decay rate is an angular frequency
//! in rad/ns. For GHz-scale devices the numbers stay O(1-10). Public helpers
//! accept ordinary frequencies in GHz or MHz and convert with `ω = 2πf`.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// CODATA 2018 exact SI constants.
pub mod consts {
    /// Planck constant (J s).
    pub const PLANCK: f64 = 6.626_070_15e-34;
    /// Reduced Planck constant (J s).
    pub const HBAR: f64 = PLANCK / std::f64::consts::TAU;
    /// Elementary charge (C).
    pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
    /// Superconducting flux quantum h/2e (Wb).
    pub const FLUX_QUANTUM: f64 = PLANCK / (2.0 * ELEMENTARY_CHARGE);
    /// Boltzmann constant (J/K).
    pub const BOLTZMANN: f64 = 1.380_649e-23;
}

/// Seconds per nanosecond, i.e. the factor taking rad/s to rad/ns.
const PER_NS: f64 = 1e-9;

pub fn ghz_to_angular(f_ghz: f64) -> f64 {
    TAU * f_ghz
}

pub fn mhz_to_angular(f_mhz: f64) -> f64 {
    TAU * f_mhz * 1e-3
}

pub fn angular_to_ghz(omega: f64) -> f64 {
    omega / TAU
}

pub fn angular_to_mhz(omega: f64) -> f64 {
    omega / TAU * 1e3
}

/// Ordinary frequency in Hz to rad/ns.
pub fn hz_to_angular(f_hz: f64) -> f64 {
    TAU * f_hz * PER_NS
}

/// Default upper bound on `g/Δ` accepted as dispersive.
pub const DEFAULT_DISPERSIVE_THRESHOLD: f64 = 0.15;

/// Largest `|ε|/ω_q` still treated as sitting on the degeneracy point.
pub const DEGENERACY_TOLERANCE: f64 = 1e-3;

/// Raw device quantities in SI units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeviceParameters {
    /// Persistent current of the qubit loop (A).
    pub persistent_current: f64,
    /// Flux threading the qubit loop (Wb).
    pub external_flux: f64,
    /// Flux quantum (Wb).
    #[serde(default = "default_flux_quantum")]
    pub flux_quantum: f64,
    /// Qubit-resonator mutual inductance (H).
    pub mutual_inductance: f64,
    /// Total inductance of the CPW resonator (H).
    pub resonator_inductance: f64,
    /// In-plane magnetic field (T).
    pub magnetic_field: f64,
    /// Length of the beam (m).
    pub namr_length: f64,
    /// Mode-shape factor, in (0, 1].
    pub mode_factor: f64,
    /// Effective mass of the beam (kg).
    pub namr_mass: f64,
    /// CPW resonator frequency (Hz).
    pub f_c: f64,
    /// Mechanical frequency (Hz).
    pub f_m: f64,
    /// Qubit transition frequency at the degeneracy point (Hz).
    pub f_q: f64,
}

fn default_flux_quantum() -> f64 {
    consts::FLUX_QUANTUM
}

fn require_positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::param(name, format!("must be finite and > 0, got {value}")))
    }
}

fn require_non_negative(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(Error::param(name, format!("must be finite and >= 0, got {value}")))
    }
}

impl DeviceParameters {
    pub fn validate(&self) -> Result<()> {
        require_positive("persistent_current", self.persistent_current)?;
        require_non_negative("external_flux", self.external_flux)?;
        require_positive("flux_quantum", self.flux_quantum)?;
        require_non_negative("mutual_inductance", self.mutual_inductance)?;
        require_positive("resonator_inductance", self.resonator_inductance)?;
        require_non_negative("magnetic_field", self.magnetic_field)?;
        require_positive("namr_length", self.namr_length)?;
        require_positive("namr_mass", self.namr_mass)?;
        require_positive("f_c", self.f_c)?;
        require_positive("f_m", self.f_m)?;
        require_positive("f_q", self.f_q)?;
        if !(self.mode_factor > 0.0 && self.mode_factor <= 1.0) {
            return Err(Error::param(
                "mode_factor",
                format!("must lie in (0, 1], got {}", self.mode_factor),
            ));
        }
        Ok(())
    }

    /// Angular frequencies `(ω_c, ω_m, ω_q)` in rad/ns.
    pub fn angular_frequencies(&self) -> (f64, f64, f64) {
        (hz_to_angular(self.f_c), hz_to_angular(self.f_m), hz_to_angular(self.f_q))
    }
}

/// Normalization of the resonator zero-point current.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ZeroPointConvention {
    /// `I_0 = (ħω_c/L_c)^{1/2}`, without the 1/2 under the root.
    #[default]
    Unhalved,
    /// `I_0 = (ħω_c/2L_c)^{1/2}`, the usual LC-oscillator zero-point current.
    Textbook,
}

/// Zero-point current of the CPW resonator (A).
pub fn zero_point_current(dev: &DeviceParameters, convention: ZeroPointConvention) -> Result<f64> {
    require_positive("resonator_inductance", dev.resonator_inductance)?;
    require_positive("f_c", dev.f_c)?;
    let omega_c = TAU * dev.f_c;
    let energy = consts::HBAR * omega_c;
    Ok(match convention {
        ZeroPointConvention::Unhalved => (energy / dev.resonator_inductance).sqrt(),
        ZeroPointConvention::Textbook => (energy / (2.0 * dev.resonator_inductance)).sqrt(),
    })
}

/// Zero-point displacement `(ħ/2mω_m)^{1/2}` of the beam (m).
pub fn zero_point_motion(dev: &DeviceParameters) -> Result<f64> {
    require_positive("namr_mass", dev.namr_mass)?;
    require_positive("f_m", dev.f_m)?;
    Ok((consts::HBAR / (2.0 * dev.namr_mass * TAU * dev.f_m)).sqrt())
}

/// Qubit-CPW coupling `g_c = M I_p I_0 / ħ` in rad/ns.
pub fn derive_coupling_gc(dev: &DeviceParameters, convention: ZeroPointConvention) -> Result<f64> {
    let i0 = zero_point_current(dev, convention)?;
    Ok(dev.mutual_inductance * dev.persistent_current * i0 / consts::HBAR * PER_NS)
}

/// Qubit-beam coupling `g_m = B I_p χ l_0 δ_zpm / ħ` in rad/ns. Linear in the field.
pub fn derive_coupling_gm(dev: &DeviceParameters) -> Result<f64> {
    let zpm = zero_point_motion(dev)?;
    let force = dev.magnetic_field * dev.persistent_current * dev.mode_factor * dev.namr_length;
    Ok(force * zpm / consts::HBAR * PER_NS)
}

/// Flux bias energy `ε = I_p(2Φ_e − Φ_0)/ħ` in rad/ns. Zero at the degeneracy point.
pub fn epsilon_bias(dev: &DeviceParameters) -> f64 {
    dev.persistent_current * (2.0 * dev.external_flux - dev.flux_quantum) / consts::HBAR * PER_NS
}

/// Dissipation and qubit-inversion parameters, rates in rad/ns.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Environment {
    pub kappa: f64,
    pub gamma: f64,
    pub gamma_q: f64,
    pub sigma_z: f64,
}

impl Default for Environment {
    fn default() -> Self {
        Self { kappa: 0.0, gamma: 0.0, gamma_q: 0.0, sigma_z: -1.0 }
    }
}

/// Canonical model: bare frequencies, couplings and rates, all in rad/ns.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemConfig {
    pub omega_c: f64,
    pub omega_m: f64,
    pub omega_q: f64,
    pub g_c: f64,
    pub g_m: f64,
    pub kappa: f64,
    pub gamma: f64,
    pub gamma_q: f64,
    /// Stationary qubit inversion, in [-1, 0).
    pub sigma_z: f64,
}

impl SystemConfig {
    pub fn new(omega_c: f64, omega_m: f64, omega_q: f64, g_c: f64, g_m: f64, env: Environment) -> Result<Self> {
        let cfg = Self {
            omega_c,
            omega_m,
            omega_q,
            g_c,
            g_m,
            kappa: env.kappa,
            gamma: env.gamma,
            gamma_q: env.gamma_q,
            sigma_z: env.sigma_z,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Builds a config from frequencies in GHz and couplings in MHz (ordinary
    /// frequencies). `env` is already angular.
    pub fn from_ghz(f_c: f64, f_m: f64, f_q: f64, g_c_mhz: f64, g_m_mhz: f64, env: Environment) -> Result<Self> {
        Self::new(
            ghz_to_angular(f_c),
            ghz_to_angular(f_m),
            ghz_to_angular(f_q),
            mhz_to_angular(g_c_mhz),
            mhz_to_angular(g_m_mhz),
            env,
        )
    }

    pub fn validate(&self) -> Result<()> {
        require_positive("omega_c", self.omega_c)?;
        require_positive("omega_m", self.omega_m)?;
        require_positive("omega_q", self.omega_q)?;
        require_non_negative("g_c", self.g_c)?;
        require_non_negative("g_m", self.g_m)?;
        require_non_negative("kappa", self.kappa)?;
        require_non_negative("gamma", self.gamma)?;
        require_non_negative("gamma_q", self.gamma_q)?;
        if !(self.sigma_z >= -1.0 && self.sigma_z < 0.0) {
            return Err(Error::param("sigma_z", format!("must lie in [-1, 0), got {}", self.sigma_z)));
        }
        if self.detuning_c() <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "Δ_c = ω_q − ω_c must be > 0, got {} rad/ns",
                self.detuning_c()
            )));
        }
        if self.detuning_m() <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "Δ_m = ω_q − ω_m must be > 0, got {} rad/ns",
                self.detuning_m()
            )));
        }
        Ok(())
    }

    pub fn detuning_c(&self) -> f64 {
        self.omega_q - self.omega_c
    }

    pub fn detuning_m(&self) -> f64 {
        self.omega_q - self.omega_m
    }

    pub fn environment(&self) -> Environment {
        Environment { kappa: self.kappa, gamma: self.gamma, gamma_q: self.gamma_q, sigma_z: self.sigma_z }
    }

    pub fn with_g_m(mut self, g_m: f64) -> Self {
        self.g_m = g_m;
        self
    }

    pub fn with_g_c(mut self, g_c: f64) -> Self {
        self.g_c = g_c;
        self
    }

    pub fn with_gamma_q(mut self, gamma_q: f64) -> Self {
        self.gamma_q = gamma_q;
        self
    }

    pub fn with_sigma_z(mut self, sigma_z: f64) -> Self {
        self.sigma_z = sigma_z;
        self
    }
}

/// Options for [`to_system_config`].
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ConversionOptions {
    pub convention: ZeroPointConvention,
    /// Direct `g_c` in rad/ns; wins over the device-derived value.
    pub g_c: Option<f64>,
    /// Direct `g_m` in rad/ns; wins over the device-derived value.
    pub g_m: Option<f64>,
    /// Accept a flux bias away from the degeneracy point.
    pub allow_off_degeneracy: bool,
}

fn resolve_coupling(name: &str, derived: f64, direct: Option<f64>) -> f64 {
    match direct {
        Some(g) => {
            let scale = g.abs().max(derived.abs());
            if scale > 0.0 && (g - derived).abs() > 1e-9 * scale {
                log::warn!(
                    "{name}: direct value {g} rad/ns overrides device-derived {derived} rad/ns"
                );
            }
            g
        }
        None => derived,
    }
}

/// Converts raw device parameters to the canonical model.
pub fn to_system_config(dev: &DeviceParameters, env: Environment, opts: &ConversionOptions) -> Result<SystemConfig> {
    dev.validate()?;
    let (omega_c, omega_m, omega_q) = dev.angular_frequencies();
    let eps = epsilon_bias(dev);
    if !opts.allow_off_degeneracy && eps.abs() > DEGENERACY_TOLERANCE * omega_q {
        return Err(Error::InvalidConfig(format!(
            "flux bias ε = {eps} rad/ns is off the degeneracy point (|ε| must be <= {} ω_q)",
            DEGENERACY_TOLERANCE
        )));
    }
    let g_c = resolve_coupling("g_c", derive_coupling_gc(dev, opts.convention)?, opts.g_c);
    let g_m = resolve_coupling("g_m", derive_coupling_gm(dev)?, opts.g_m);
    SystemConfig::new(omega_c, omega_m, omega_q, g_c, g_m, env)
}

/// Smallness parameters of the dispersive expansion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValidityReport {
    pub eta_c: f64,
    pub eta_m: f64,
    pub threshold: f64,
    pub pass_c: bool,
    pub pass_m: bool,
}

impl ValidityReport {
    pub fn passes(&self) -> bool {
        self.pass_c && self.pass_m
    }
}

/// Reports `η_c = g_c/Δ_c` and `η_m = g_m/Δ_m` against `threshold`. Never fails.
pub fn validate_dispersive(cfg: &SystemConfig, threshold: f64) -> ValidityReport {
    let eta_c = cfg.g_c / cfg.detuning_c();
    let eta_m = cfg.g_m / cfg.detuning_m();
    // a ratio sitting on the threshold up to rounding counts as inside
    let limit = threshold * (1.0 + 1e-12);
    ValidityReport { eta_c, eta_m, threshold, pass_c: eta_c <= limit, pass_m: eta_m <= limit }
}

/// Thermal-equilibrium inversion `−tanh(ħω_q / 2k_B T)`.
///
/// Extension: the source model treats `⟨σ_z⟩` as a free parameter and gives no
/// temperature dependence. This two-level Gibbs estimate is offered only as a
/// convenience for building `sigma_z` sweeps.
pub fn thermal_sigma_z(omega_q: f64, temperature: f64) -> Result<f64> {
    require_positive("omega_q", omega_q)?;
    require_positive("temperature", temperature)?;
    let x = consts::HBAR * omega_q / PER_NS / (2.0 * consts::BOLTZMANN * temperature);
    Ok(-x.tanh())
}
