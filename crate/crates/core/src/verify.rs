//! Closed forms checked against the brute-force solvers in [`crate::oracle`].
//!
//! Each check evaluates one closed-form quantity and the matching oracle
//! quantity for the same configuration and records the largest relative
//! deviation. Random configurations come from a seeded ChaCha generator so a
//! run is reproducible from its seed.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::effective::{polariton_frequencies, reduce, EffectiveModel};
use crate::error::{Error, Result};
use crate::fullmodel::{reflection_full, single_excitation_eigenvalues};
use crate::oracle::{dense_symmetric_eigenvalues, port_resolvent, scattering_response, LinearNetwork};
use crate::params::{Environment, SystemConfig};
use crate::spectra::response_d;
use crate::transport::reflection_eff;

/// Tolerance on response functions (spectrum resolvent and reflection).
pub const RESPONSE_TOLERANCE: f64 = 1e-10;
/// Tolerance on eigenfrequencies.
pub const EIGEN_TOLERANCE: f64 = 1e-12;

/// Deliberate corruption of the closed-form side, used to show that the
/// comparison catches real errors.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mutation {
    #[default]
    None,
    /// Effective exchange coupling scaled by `1 + 1e-6`.
    EffectiveCoupling,
    /// Full-model beam coupling scaled by `1 + 1e-6`.
    FullCoupling,
}

const MUTATION_SCALE: f64 = 1.0 + 1e-6;

impl Mutation {
    fn effective(self, em: &EffectiveModel) -> EffectiveModel {
        let mut em = *em;
        if self == Mutation::EffectiveCoupling {
            em.g *= MUTATION_SCALE;
        }
        em
    }

    fn full(self, cfg: &SystemConfig) -> SystemConfig {
        let mut cfg = *cfg;
        if self == Mutation::FullCoupling {
            cfg.g_m *= MUTATION_SCALE;
        }
        cfg
    }
}

/// Two-mode network for the effective model, driven through the cavity.
pub fn effective_network(em: &EffectiveModel, kappa: f64, gamma: f64) -> Result<LinearNetwork> {
    LinearNetwork::with_real_couplings(vec![em.omega_c, em.omega_m], vec![kappa, gamma], &[(0, 1, em.g)], 0)
}

/// Three-mode network for the linearized full model.
///
/// The qubit equation carries `⟨σ_z⟩` on its couplings. Rescaling the qubit
/// amplitude by `√(−⟨σ_z⟩)` gives symmetric couplings `g_j √(−⟨σ_z⟩)` with the
/// same port response.
pub fn full_network(cfg: &SystemConfig) -> Result<LinearNetwork> {
    if !(cfg.sigma_z < 0.0) {
        return Err(Error::Domain(format!("oracle needs sigma_z < 0, got {}", cfg.sigma_z)));
    }
    let w = (-cfg.sigma_z).sqrt();
    LinearNetwork::with_real_couplings(
        vec![cfg.omega_c, cfg.omega_m, cfg.omega_q],
        vec![cfg.kappa, cfg.gamma, cfg.gamma_q],
        &[(0, 2, cfg.g_c * w), (1, 2, cfg.g_m * w)],
        0,
    )
}

/// Draws a valid dispersive configuration.
///
/// Cavity between 0.5 and 1.5 GHz, beam within 5% of it, qubit 0.3 to 1.5
/// cavity frequencies above the higher resonator, couplings up to 0.14 of
/// their detunings, rates log-uniform between 1e-4 and 1e-2 of the cavity
/// frequency, `⟨σ_z⟩` in [-1, -0.05].
pub fn random_config<R: Rng + ?Sized>(rng: &mut R) -> SystemConfig {
    let omega_c = std::f64::consts::TAU * rng.gen_range(0.5..1.5);
    let omega_m = omega_c * rng.gen_range(0.95..1.05);
    let omega_q = omega_c.max(omega_m) + omega_c * rng.gen_range(0.3..1.5);
    let g_c = rng.gen_range(0.0..0.14) * (omega_q - omega_c);
    let g_m = rng.gen_range(0.0..0.14) * (omega_q - omega_m);
    let rate = |rng: &mut R| omega_c * 10f64.powf(rng.gen_range(-4.0..-2.0));
    let env = Environment {
        kappa: rate(rng),
        gamma: rate(rng),
        gamma_q: rate(rng),
        sigma_z: rng.gen_range(-1.0..=-0.05),
    };
    SystemConfig::new(omega_c, omega_m, omega_q, g_c, g_m, env).expect("generator stays inside the valid region")
}

/// `count` configurations from `seed`.
pub fn random_configs(seed: u64, count: usize) -> Vec<SystemConfig> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_config(&mut rng)).collect()
}

/// Frequencies covering both polaritons with margin, `points` of them.
pub fn probe_frequencies(em: &EffectiveModel, points: usize) -> Vec<f64> {
    let cfg = &em.source;
    let center = 0.5 * (em.omega_c + em.omega_m);
    let half = (0.5 * (em.omega_c - em.omega_m).abs() + 3.0 * em.g.abs()).max(10.0 * (cfg.kappa + cfg.gamma)) * 1.5;
    let n = points.max(2);
    (0..n).map(|k| center - half + 2.0 * half * k as f64 / (n - 1) as f64).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub max_relative_error: f64,
    pub tolerance: f64,
    pub samples: usize,
    pub passed: bool,
}

/// Worst sample of a failing check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailingCase {
    pub check: String,
    pub config: SystemConfig,
    /// Probe frequency, rad/ns; absent for eigenvalue checks.
    pub omega: Option<f64>,
    /// `[re, im]` of the closed form.
    pub closed_form: [f64; 2],
    pub oracle: [f64; 2],
    pub relative_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub seed: Option<u64>,
    pub configs: usize,
    pub mutation: Mutation,
    pub checks: Vec<CheckResult>,
    pub failures: Vec<FailingCase>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

#[derive(Debug, Clone, Copy)]
struct Sample {
    omega: Option<f64>,
    closed: Complex64,
    oracle: Complex64,
    err: f64,
}

#[derive(Debug, Clone, Copy)]
struct Worst {
    samples: usize,
    worst: Option<Sample>,
}

impl Worst {
    fn new() -> Self {
        Self { samples: 0, worst: None }
    }

    fn push(&mut self, omega: Option<f64>, closed: Complex64, oracle: Complex64) {
        let scale = oracle.norm();
        let err = if scale > 0.0 {
            (closed - oracle).norm() / scale
        } else {
            (closed - oracle).norm()
        };
        // NaN compares false, so force it to count as the worst
        let err = if err.is_nan() { f64::INFINITY } else { err };
        self.samples += 1;
        if self.worst.map_or(true, |w| err > w.err) {
            self.worst = Some(Sample { omega, closed, oracle, err });
        }
    }
}

const CHECKS: [(&str, f64); 5] = [
    ("spectrum-resolvent", RESPONSE_TOLERANCE),
    ("reflection-effective", RESPONSE_TOLERANCE),
    ("reflection-full", RESPONSE_TOLERANCE),
    ("polaritons", EIGEN_TOLERANCE),
    ("single-excitation", EIGEN_TOLERANCE),
];

fn nan() -> Complex64 {
    Complex64::new(f64::NAN, f64::NAN)
}

fn check_one(cfg: &SystemConfig, omegas: &[f64], mutation: Mutation) -> Result<[Worst; 5]> {
    let em = reduce(cfg)?;
    let (kappa, gamma) = (cfg.kappa, cfg.gamma);
    let em_closed = mutation.effective(&em);
    let cfg_closed = mutation.full(cfg);
    let net2 = effective_network(&em, kappa, gamma)?;
    let net3 = full_network(cfg)?;
    let mut out = [Worst::new(); 5];

    for &w in omegas {
        let pairs = [
            (response_d(w, &em_closed, kappa, gamma).map(|d| d.inv()), port_resolvent(&net2, w)),
            (reflection_eff(w, &em_closed, kappa, gamma), scattering_response(&net2, w)),
            (reflection_full(w, &cfg_closed), scattering_response(&net3, w)),
        ];
        for (slot, (closed, oracle)) in out.iter_mut().zip(pairs) {
            match (closed, oracle) {
                // both sides singular at the same frequency: nothing to compare
                (Err(_), Err(_)) => {}
                (c, o) => slot.push(Some(w), c.unwrap_or_else(|_| nan()), o.unwrap_or_else(|_| nan())),
            }
        }
    }

    let (lo, hi) = polariton_frequencies(&em_closed);
    let two = dense_symmetric_eigenvalues(&[em.omega_c, em.g, em.g, em.omega_m], 2)?;
    for (c, o) in [lo, hi].into_iter().zip(two) {
        out[3].push(None, c.into(), o.into());
    }

    let closed3 = single_excitation_eigenvalues(&cfg_closed);
    #[rustfmt::skip]
    let h = [
        cfg.omega_c, 0.0, cfg.g_c,
        0.0, cfg.omega_m, cfg.g_m,
        cfg.g_c, cfg.g_m, cfg.omega_q,
    ];
    let three = dense_symmetric_eigenvalues(&h, 3)?;
    for (c, o) in closed3.into_iter().zip(three) {
        out[4].push(None, c.into(), o.into());
    }
    Ok(out)
}

/// Runs every check on the given configurations, `points` probe
/// frequencies each.
pub fn verify_configs(configs: &[SystemConfig], points: usize, mutation: Mutation) -> Result<VerificationReport> {
    let per_config: Vec<[Worst; 5]> = configs
        .par_iter()
        .map(|cfg| {
            let em = reduce(cfg)?;
            check_one(cfg, &probe_frequencies(&em, points), mutation)
        })
        .collect::<Result<_>>()?;
    Ok(summarize(configs, &per_config, None, mutation))
}

/// Runs every check on one configuration over explicit frequencies, rad/ns.
pub fn verify_on_grid(cfg: &SystemConfig, omegas: &[f64], mutation: Mutation) -> Result<VerificationReport> {
    let per = check_one(cfg, omegas, mutation)?;
    Ok(summarize(std::slice::from_ref(cfg), &[per], None, mutation))
}

/// Seeded random run: `count` configurations with `points` probes each.
pub fn verify_random(seed: u64, count: usize, points: usize, mutation: Mutation) -> Result<VerificationReport> {
    let configs = random_configs(seed, count);
    let mut report = verify_configs(&configs, points, mutation)?;
    report.seed = Some(seed);
    Ok(report)
}

fn summarize(configs: &[SystemConfig], per_config: &[[Worst; 5]], seed: Option<u64>, mutation: Mutation) -> VerificationReport {
    let mut checks = Vec::new();
    let mut failures = Vec::new();
    for (k, (name, tol)) in CHECKS.iter().enumerate() {
        let mut samples = 0;
        let mut worst: Option<(usize, Sample)> = None;
        for (i, per) in per_config.iter().enumerate() {
            samples += per[k].samples;
            if let Some(s) = per[k].worst {
                if worst.map_or(true, |(_, w)| s.err > w.err) {
                    worst = Some((i, s));
                }
            }
        }
        let max = worst.map_or(0.0, |(_, s)| s.err);
        let passed = max <= *tol;
        if let (false, Some((i, s))) = (passed, worst) {
            failures.push(FailingCase {
                check: name.to_string(),
                config: configs[i],
                omega: s.omega,
                closed_form: [s.closed.re, s.closed.im],
                oracle: [s.oracle.re, s.oracle.im],
                relative_error: s.err,
            });
        }
        checks.push(CheckResult {
            name: name.to_string(),
            max_relative_error: max,
            tolerance: *tol,
            samples,
            passed,
        });
    }
    VerificationReport { seed, configs: configs.len(), mutation, checks, failures }
}
