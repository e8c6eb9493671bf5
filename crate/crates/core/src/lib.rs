//! Dispersive qubit-mediated coupling of a microwave resonator and a
//! nanomechanical beam.
//!
//! All frequencies and rates inside the crate are angular, in rad/ns.
//! [`params`] converts from device quantities and from GHz/MHz inputs.

pub mod effective;
pub mod error;
pub mod fullmodel;
pub mod oracle;
pub mod params;
pub mod peaks;
pub mod presets;
pub mod series;
pub mod spectra;
pub mod transport;
pub mod verify;

pub use num_complex::Complex64;

pub use effective::{polariton_frequencies, reduce, reduce_with, EffectiveModel};
pub use error::{Error, Result};
pub use fullmodel::{compare_models, reflection_full, ComparisonReport};
pub use params::{DeviceParameters, Environment, SystemConfig, ValidityReport, ZeroPointConvention};
pub use peaks::{Peak, PeakReport};
pub use series::{GridSpec, Provenance, SweepSeries};
pub use transport::{reflection_eff, ZeroReflection};
pub use verify::{Mutation, VerificationReport};
