//! Run configuration, schema `v1`.
//!
//! A TOML document with a required `version = "v1"` and an `[environment]`
//! table, plus either a complete `[system]` table or a `[device]` table.
//! Unknown keys anywhere are errors.

use std::path::Path;

use serde::{Deserialize, Serialize};
use tripartite::params::{
    mhz_to_angular, to_system_config, ConversionOptions, DEFAULT_DISPERSIVE_THRESHOLD,
};
use tripartite::fullmodel::DEFAULT_DEVIATION_THRESHOLD;
use tripartite::{DeviceParameters, Environment, SystemConfig, ZeroPointConvention};

use crate::CliError;

pub const SCHEMA_VERSION: &str = "v1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub system: Option<SystemSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub device: Option<DeviceParameters>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conversion: Option<ConversionSection>,
    pub environment: EnvironmentSection,
    #[serde(default)]
    pub analysis: AnalysisSection,
}

/// Frequencies in GHz and couplings in MHz (ordinary, not angular).
///
/// Without `[device]` all five keys are required. With `[device]` only the
/// couplings may appear, and they override the derived values.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSection {
    pub f_c_ghz: Option<f64>,
    pub f_m_ghz: Option<f64>,
    pub f_q_ghz: Option<f64>,
    pub g_c_mhz: Option<f64>,
    pub g_m_mhz: Option<f64>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConversionSection {
    #[serde(default)]
    pub zero_point: ZeroPointConvention,
    #[serde(default)]
    pub allow_off_degeneracy: bool,
}

/// Rates in MHz (ordinary frequency).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnvironmentSection {
    pub kappa_mhz: f64,
    pub gamma_mhz: f64,
    #[serde(default)]
    pub gamma_q_mhz: f64,
    #[serde(default = "ground_state")]
    pub sigma_z: f64,
}

fn ground_state() -> f64 {
    -1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisSection {
    #[serde(default = "default_threshold")]
    pub dispersive_threshold: f64,
    /// Evaluate the effective model even when the dispersive check fails.
    #[serde(default)]
    pub force_dispersive: bool,
    /// `| |r_eff|² − |r_full|² |` above which the comparison flags a band.
    #[serde(default = "default_deviation")]
    pub deviation_threshold: f64,
}

fn default_threshold() -> f64 {
    DEFAULT_DISPERSIVE_THRESHOLD
}

fn default_deviation() -> f64 {
    DEFAULT_DEVIATION_THRESHOLD
}

impl Default for AnalysisSection {
    fn default() -> Self {
        Self {
            dispersive_threshold: DEFAULT_DISPERSIVE_THRESHOLD,
            force_dispersive: false,
            deviation_threshold: DEFAULT_DEVIATION_THRESHOLD,
        }
    }
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let cfg: ConfigFile = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        if cfg.version != SCHEMA_VERSION {
            return Err(CliError::Config(format!(
                "unsupported config version `{}`, expected `{SCHEMA_VERSION}`",
                cfg.version
            )));
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<(Self, String), CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Ok((Self::parse(&text)?, text))
    }

    pub fn environment(&self) -> Environment {
        let e = &self.environment;
        Environment {
            kappa: mhz_to_angular(e.kappa_mhz),
            gamma: mhz_to_angular(e.gamma_mhz),
            gamma_q: mhz_to_angular(e.gamma_q_mhz),
            sigma_z: e.sigma_z,
        }
    }

    /// Canonical model in rad/ns.
    pub fn resolve(&self) -> Result<SystemConfig, CliError> {
        let env = self.environment();
        let sys = self.system.unwrap_or_default();
        match &self.device {
            Some(dev) => {
                if sys.f_c_ghz.is_some() || sys.f_m_ghz.is_some() || sys.f_q_ghz.is_some() {
                    return Err(CliError::Config(
                        "with [device], frequencies come from f_c/f_m/f_q there; [system] may only override g_c_mhz and g_m_mhz"
                            .into(),
                    ));
                }
                let conv = self.conversion.unwrap_or_default();
                let opts = ConversionOptions {
                    convention: conv.zero_point,
                    g_c: sys.g_c_mhz.map(mhz_to_angular),
                    g_m: sys.g_m_mhz.map(mhz_to_angular),
                    allow_off_degeneracy: conv.allow_off_degeneracy,
                };
                Ok(to_system_config(dev, env, &opts)?)
            }
            None => {
                if self.conversion.is_some() {
                    return Err(CliError::Config("[conversion] only applies together with [device]".into()));
                }
                let need = |v: Option<f64>, key: &str| {
                    v.ok_or_else(|| CliError::Config(format!("[system] is missing `{key}` (or give a [device] table)")))
                };
                Ok(SystemConfig::from_ghz(
                    need(sys.f_c_ghz, "f_c_ghz")?,
                    need(sys.f_m_ghz, "f_m_ghz")?,
                    need(sys.f_q_ghz, "f_q_ghz")?,
                    need(sys.g_c_mhz, "g_c_mhz")?,
                    need(sys.g_m_mhz, "g_m_mhz")?,
                    env,
                )?)
            }
        }
    }

    /// Copy with a different magnetic field; needs a `[device]` table whose
    /// `g_m` is not overridden.
    pub fn with_magnetic_field(&self, field: f64) -> Result<Self, CliError> {
        let Some(dev) = self.device else {
            return Err(CliError::Config("sweeping B needs a [device] table".into()));
        };
        if self.system.and_then(|s| s.g_m_mhz).is_some() {
            return Err(CliError::Config("sweeping B conflicts with a direct g_m_mhz override".into()));
        }
        let mut out = self.clone();
        out.device = Some(DeviceParameters { magnetic_field: field, ..dev });
        Ok(out)
    }

    pub fn with_sigma_z(&self, sigma_z: f64) -> Self {
        let mut out = self.clone();
        out.environment.sigma_z = sigma_z;
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SYSTEM: &str = r#"
version = "v1"
[system]
f_c_ghz = 1.0
f_m_ghz = 1.0
f_q_ghz = 2.0
g_c_mhz = 100.0
g_m_mhz = 50.0
[environment]
kappa_mhz = 1.0
gamma_mhz = 1.0
"#;

    #[test]
    fn system_table() {
        let cfg = ConfigFile::parse(SYSTEM).unwrap().resolve().unwrap();
        assert!((cfg.g_m - mhz_to_angular(50.0)).abs() < 1e-15);
        assert_eq!(cfg.sigma_z, -1.0);
        assert_eq!(cfg.gamma_q, 0.0);
    }

    #[test]
    fn unknown_key_is_rejected() {
        let text = SYSTEM.replace("kappa_mhz", "kapa_mhz");
        assert!(matches!(ConfigFile::parse(&text), Err(CliError::Config(_))));
        let text = format!("{SYSTEM}\n[extra]\nx = 1\n");
        assert!(ConfigFile::parse(&text).is_err());
    }

    #[test]
    fn version_is_checked() {
        assert!(ConfigFile::parse(&SYSTEM.replace("\"v1\"", "\"v2\"")).is_err());
    }

    #[test]
    fn missing_system_key() {
        let text = SYSTEM.replace("g_m_mhz = 50.0\n", "");
        let err = ConfigFile::parse(&text).unwrap().resolve().unwrap_err();
        assert!(err.to_string().contains("g_m_mhz"));
    }

    #[test]
    fn device_table_round_trip() {
        let dev = tripartite::presets::symmetric_device();
        let file = ConfigFile {
            version: SCHEMA_VERSION.into(),
            system: None,
            device: Some(dev),
            conversion: None,
            environment: EnvironmentSection { kappa_mhz: 1.0, gamma_mhz: 1.0, gamma_q_mhz: 1.0, sigma_z: -1.0 },
            analysis: AnalysisSection::default(),
        };
        let text = toml::to_string(&file).unwrap();
        let back = ConfigFile::parse(&text).unwrap();
        assert_eq!(back, file);
        let cfg = back.resolve().unwrap();
        let reference = tripartite::presets::symmetric();
        assert!((cfg.g_m - reference.g_m).abs() < 1e-9 * reference.g_m);
        assert!((cfg.g_c - reference.g_c).abs() < 1e-9 * reference.g_c);

        let off = back.with_magnetic_field(0.0).unwrap().resolve().unwrap();
        assert_eq!(off.g_m, 0.0);
        assert!(ConfigFile::parse(SYSTEM).unwrap().with_magnetic_field(0.1).is_err());
    }
}
