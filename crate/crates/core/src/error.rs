use thiserror::Error;

/// Errors produced by the model and its numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("dispersive regime violated: eta_c = {eta_c:.4}, eta_m = {eta_m:.4} (threshold {threshold})")]
    Regime { eta_c: f64, eta_m: f64, threshold: f64 },

    #[error("outside the domain of the closed form: {0}")]
    Domain(String),

    #[error("singular response at omega = {omega} rad/ns")]
    Singularity { omega: f64 },

    #[error("singular linear system (condition estimate {condition:e})")]
    SingularMatrix { condition: f64 },

    #[error("effective coupling is zero; no transfer time exists")]
    NoCoupling,

    #[error("phase undefined for a vanishing reflection coefficient")]
    UndefinedPhase,

    #[error("reflection vanishes within the finite-difference stencil at omega = {omega} rad/ns")]
    DipProximity { omega: f64 },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("precondition failed: {0}")]
    Precondition(String),
}

impl Error {
    /// True for errors caused by an exact pole or a singular solve.
    pub fn is_singular(&self) -> bool {
        matches!(
            self,
            Error::Singularity { .. } | Error::SingularMatrix { .. } | Error::DipProximity { .. }
        )
    }

    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter { name, reason: reason.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
