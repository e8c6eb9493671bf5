//! Subcommand implementations.

use serde::Serialize;
use tripartite::effective::{reduce_with, EffectiveModel};
use tripartite::fullmodel::{compare_models, reflection_full, sweep_transport_full, ComparisonSummary};
use tripartite::oracle::d_poles;
use tripartite::params::{angular_to_mhz, validate_dispersive};
use tripartite::spectra::{spectrum_peaks, sweep_spectrum};
use tripartite::transport::{
    group_delay_with, phase, reflection_dips, reflection_eff, sweep_transport, zero_reflection_points, Dip,
    DEFAULT_STEP_FRACTION,
};
use tripartite::verify::{verify_on_grid, verify_random, VerificationReport};
use tripartite::{Complex64, Error, Mutation, PeakReport, SystemConfig, ValidityReport, ZeroReflection};

use crate::config::{AnalysisSection, ConfigFile};
use crate::manifest::{plan_outputs, write_outputs, Data, RunManifest, SweepManifest, Table, VerificationSummary};
use crate::{
    CheckArgs, CliError, Model, Observable, SpectrumArgs, SweepArgs, SweepVariable, TransportArgs, VerifyArgs,
};

/// Probe frequencies per random config when a run asks for verification.
const RANDOM_PROBES: usize = 200;

fn effective(cfg: &SystemConfig, analysis: &AnalysisSection) -> Result<EffectiveModel, CliError> {
    Ok(reduce_with(cfg, analysis.dispersive_threshold, analysis.force_dispersive)?)
}

type ReflectionFn = Box<dyn Fn(f64) -> tripartite::Result<Complex64> + Sync>;

fn reflection_fn(model: Model, cfg: &SystemConfig, analysis: &AnalysisSection) -> Result<ReflectionFn, CliError> {
    Ok(match model {
        Model::Effective => {
            let em = effective(cfg, analysis)?;
            let (kappa, gamma) = (cfg.kappa, cfg.gamma);
            Box::new(move |w| reflection_eff(w, &em, kappa, gamma))
        }
        Model::Full => {
            let cfg = *cfg;
            Box::new(move |w| reflection_full(w, &cfg))
        }
    })
}

/// Oracle checks requested with `--verify-samples`.
fn run_checks(
    check: &CheckArgs,
    cfg: &SystemConfig,
    omegas: &[f64],
) -> Result<Option<(VerificationSummary, Vec<VerificationReport>)>, CliError> {
    let Some(samples) = check.verify_samples else {
        return Ok(None);
    };
    let mutation = check.inject_fault.unwrap_or_default();
    let mut reports = vec![verify_on_grid(cfg, omegas, mutation)?];
    if samples > 0 {
        reports.push(verify_random(check.seed, samples, RANDOM_PROBES, mutation)?);
    }
    Ok(Some((VerificationSummary::new(check.seed, samples, &reports), reports)))
}

fn print_checks(reports: &[VerificationReport]) {
    let summary = VerificationSummary::new(0, 0, reports);
    for c in &summary.checks {
        eprintln!(
            "{:<22} max rel err {:.3e}  tol {:.0e}  samples {:>8}  {}",
            c.name,
            c.max_relative_error,
            c.tolerance,
            c.samples,
            if c.passed { "ok" } else { "FAIL" }
        );
    }
}

fn verification_outcome(reports: &[VerificationReport]) -> Result<(), CliError> {
    print_checks(reports);
    let failures: Vec<_> = reports.iter().flat_map(|r| r.failures.iter()).collect();
    if failures.is_empty() {
        return Ok(());
    }
    let replay = serde_json::to_string_pretty(&failures).unwrap_or_default();
    Err(CliError::Verification(format!("{} check(s) out of tolerance; failing cases:\n{replay}", failures.len())))
}

#[derive(Serialize)]
struct SpectrumSidecar<'a> {
    manifest: &'a RunManifest,
    dispersive: ValidityReport,
    effective: EffectiveModel,
    peaks: PeakReport,
    /// Peak positions divided by the normalization frequency.
    peak_positions_norm: Vec<f64>,
    /// `[re, im]` of the two response poles, rad/ns.
    poles: [[f64; 2]; 2],
}

pub fn spectrum(a: &SpectrumArgs) -> Result<(), CliError> {
    if a.model != Model::Effective {
        return Err(CliError::Config("the spectrum is only defined for the effective model".into()));
    }
    let (input, _) = ConfigFile::load(&a.config)?;
    let cfg = input.resolve()?;
    let em = effective(&cfg, &input.analysis)?;
    let grid = a.grid.grid;
    let series = sweep_spectrum(&em, cfg.kappa, cfg.gamma, &grid)?;
    let peaks = spectrum_peaks(&series, &em, cfg.kappa, cfg.gamma)?;
    let poles = d_poles(em.omega_c, em.omega_m, em.g, cfg.kappa, cfg.gamma);
    let checks = run_checks(&a.check, &cfg, &series.grid)?;

    let mut manifest = RunManifest::new("spectrum", "effective", input.clone(), cfg, grid, cfg.omega_c);
    manifest.verification = checks.as_ref().map(|(s, _)| s.clone());
    plan_outputs(a.output.out.as_deref(), &mut manifest);
    let sidecar = SpectrumSidecar {
        manifest: &manifest,
        dispersive: validate_dispersive(&cfg, input.analysis.dispersive_threshold),
        effective: em,
        peak_positions_norm: peaks.positions().iter().map(|p| p / cfg.omega_c).collect(),
        peaks,
        poles: poles.map(|p| [p.re, p.im]),
    };
    write_outputs(a.output.out.as_deref(), Data::Series(&series), &sidecar)?;
    match checks {
        Some((_, reports)) => verification_outcome(&reports),
        None => Ok(()),
    }
}

#[derive(Serialize)]
struct TransportSidecar<'a> {
    manifest: &'a RunManifest,
    dispersive: ValidityReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    effective: Option<EffectiveModel>,
    /// Minima of `|r|²` on the grid, rad/ns.
    dips: Vec<Dip>,
    dip_positions_norm: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    zero_reflection: Option<ZeroReflection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    comparison: Option<ComparisonSummary>,
}

pub fn transport(a: &TransportArgs) -> Result<(), CliError> {
    let (input, _) = ConfigFile::load(&a.config)?;
    let cfg = input.resolve()?;
    let grid = a.grid.grid;
    let analysis = input.analysis;
    let (series, em, zero, comparison) = match a.model {
        Model::Effective => {
            let em = effective(&cfg, &analysis)?;
            let series = sweep_transport(&em, cfg.kappa, cfg.gamma, &grid)?;
            let zero = zero_reflection_points(&em, cfg.kappa, cfg.gamma)?;
            (series, Some(em), Some(zero), None)
        }
        Model::Full => {
            let series = sweep_transport_full(&cfg, &grid)?;
            let comparison = match reduce_with(&cfg, analysis.dispersive_threshold, analysis.force_dispersive) {
                Ok(_) => Some(compare_models(&cfg, &grid, analysis.deviation_threshold)?.summary()),
                Err(e @ Error::Regime { .. }) => {
                    log::warn!("skipping effective-model comparison: {e}");
                    None
                }
                Err(e) => return Err(e.into()),
            };
            (series, None, None, comparison)
        }
    };
    let r_fn = reflection_fn(a.model, &cfg, &analysis)?;
    let dips = reflection_dips(&series.grid, r_fn)?;
    let checks = run_checks(&a.check, &cfg, &series.grid)?;

    let mut manifest = RunManifest::new("transport", a.model.name(), input, cfg, grid, cfg.omega_m);
    manifest.verification = checks.as_ref().map(|(s, _)| s.clone());
    plan_outputs(a.output.out.as_deref(), &mut manifest);
    let sidecar = TransportSidecar {
        manifest: &manifest,
        dispersive: validate_dispersive(&cfg, analysis.dispersive_threshold),
        effective: em,
        dip_positions_norm: dips.iter().map(|d| d.omega / cfg.omega_m).collect(),
        dips,
        zero_reflection: zero,
        comparison,
    };
    write_outputs(a.output.out.as_deref(), Data::Series(&series), &sidecar)?;
    match checks {
        Some((_, reports)) => verification_outcome(&reports),
        None => Ok(()),
    }
}

#[derive(Serialize)]
struct SweepSidecar<'a> {
    manifest: &'a RunManifest,
    columns: &'a [String],
}

fn sweep_header(a: &SweepArgs) -> Vec<String> {
    let rest: &[&str] = match a.observable {
        Observable::Splitting => &["n_peaks", "peak_lower", "peak_upper", "splitting", "pole_splitting", "g_eff_mhz"],
        Observable::Dips => &["n_dips", "dip_lower", "r2_lower", "dip_upper", "r2_upper"],
        Observable::Phase => &["phase", "abs_r2", "tau_d"],
    };
    std::iter::once(a.var.column()).chain(rest.iter().copied()).map(String::from).collect()
}

/// Two deepest dips, in ascending frequency.
fn two_deepest(mut dips: Vec<Dip>) -> Vec<Dip> {
    if dips.len() > 2 {
        dips.sort_by(|x, y| x.reflectance.total_cmp(&y.reflectance));
        dips.truncate(2);
        dips.sort_by(|x, y| x.omega.total_cmp(&y.omega));
    }
    dips
}

fn observe(a: &SweepArgs, cfg: &SystemConfig, analysis: &AnalysisSection) -> Result<Vec<f64>, CliError> {
    let grid = &a.grid.grid;
    Ok(match a.observable {
        Observable::Splitting => {
            let em = effective(cfg, analysis)?;
            let series = sweep_spectrum(&em, cfg.kappa, cfg.gamma, grid)?;
            let peaks = spectrum_peaks(&series, &em, cfg.kappa, cfg.gamma)?.positions();
            let poles = d_poles(em.omega_c, em.omega_m, em.g, cfg.kappa, cfg.gamma);
            let wc = cfg.omega_c;
            let lower = peaks.first().map_or(f64::NAN, |p| p / wc);
            let upper = if peaks.len() >= 2 { peaks[peaks.len() - 1] / wc } else { f64::NAN };
            let split = if peaks.len() == 2 { upper - lower } else { f64::NAN };
            vec![peaks.len() as f64, lower, upper, split, (poles[1].re - poles[0].re) / wc, angular_to_mhz(em.g)]
        }
        Observable::Dips => {
            let r_fn = reflection_fn(a.model, cfg, analysis)?;
            let dips = two_deepest(reflection_dips(&grid.omegas(cfg.omega_m), r_fn)?);
            let wm = cfg.omega_m;
            let at = |k: usize| dips.get(k).map_or((f64::NAN, f64::NAN), |d| (d.omega / wm, d.reflectance));
            let (lo, r_lo) = at(0);
            let (hi, r_hi) = at(1);
            vec![dips.len() as f64, lo, r_lo, hi, r_hi]
        }
        Observable::Phase => {
            let at = a.at.ok_or_else(|| CliError::Config("--observable phase needs --at".into()))?;
            let r_fn = reflection_fn(a.model, cfg, analysis)?;
            let w = at * cfg.omega_m;
            let r = r_fn(w)?;
            let phi = match phase(r) {
                Ok(p) => p,
                Err(Error::UndefinedPhase) => f64::NAN,
                Err(e) => return Err(e.into()),
            };
            let tau = match group_delay_with(&r_fn, w, DEFAULT_STEP_FRACTION * cfg.kappa) {
                Ok(t) => t,
                Err(Error::DipProximity { .. } | Error::UndefinedPhase) => f64::NAN,
                Err(e) => return Err(e.into()),
            };
            vec![phi, r.norm_sqr(), tau]
        }
    })
}

pub fn sweep(a: &SweepArgs) -> Result<(), CliError> {
    match (a.var, a.observable, a.model) {
        (SweepVariable::SigmaZ, _, Model::Effective) => {
            return Err(CliError::Config("sigma_z only enters the full model; pass --model full".into()))
        }
        (_, Observable::Splitting, Model::Full) => {
            return Err(CliError::Config("the splitting observable uses the effective-model spectrum".into()))
        }
        (_, Observable::Phase, _) if a.at.is_none() => {
            return Err(CliError::Config("--observable phase needs --at".into()))
        }
        _ => {}
    }
    let (input, _) = ConfigFile::load(&a.config)?;
    let base = input.resolve()?;
    let mut rows = Vec::new();
    for v in a.range.values() {
        let cfg = match a.var {
            SweepVariable::GM => {
                let c = base.with_g_m(v * base.omega_m);
                c.validate()?;
                c
            }
            SweepVariable::B => input.with_magnetic_field(v)?.resolve()?,
            SweepVariable::SigmaZ => {
                let c = base.with_sigma_z(v);
                c.validate()?;
                c
            }
        };
        let mut row = vec![v];
        row.extend(observe(a, &cfg, &input.analysis)?);
        rows.push(row);
    }
    let table = Table { header: sweep_header(a), rows };
    let normalization = match a.observable {
        Observable::Splitting => base.omega_c,
        _ => base.omega_m,
    };
    let mut manifest = RunManifest::new("sweep", a.model.name(), input, base, a.grid.grid, normalization);
    manifest.sweep = Some(SweepManifest {
        variable: a.var.column().into(),
        range: a.range,
        observable: format!("{:?}", a.observable).to_lowercase(),
        at: a.at,
    });
    plan_outputs(a.output.out.as_deref(), &mut manifest);
    let sidecar = SweepSidecar { manifest: &manifest, columns: &table.header };
    write_outputs(a.output.out.as_deref(), Data::Table(&table), &sidecar)
}

#[derive(Serialize)]
struct VerifyDocument<'a> {
    passed: bool,
    seed: u64,
    mutation: Mutation,
    reports: &'a [VerificationReport],
}

pub fn verify(a: &VerifyArgs) -> Result<(), CliError> {
    let mutation = a.inject_fault.unwrap_or_default();
    let mut reports = Vec::new();
    if let Some(path) = &a.config {
        let (input, _) = ConfigFile::load(path)?;
        let cfg = input.resolve()?;
        reports.push(verify_on_grid(&cfg, &a.grid.omegas(cfg.omega_m), mutation)?);
    }
    if a.verify_samples > 0 {
        reports.push(verify_random(a.seed, a.verify_samples, a.points, mutation)?);
    }
    if reports.is_empty() {
        return Err(CliError::Config("nothing to verify: give --config or --verify-samples > 0".into()));
    }
    if let Some(out) = &a.out {
        let doc = VerifyDocument {
            passed: reports.iter().all(|r| r.passed()),
            seed: a.seed,
            mutation,
            reports: &reports,
        };
        let mut text = serde_json::to_string_pretty(&doc).map_err(|e| CliError::Io(e.to_string()))?;
        text.push('\n');
        std::fs::write(out, text).map_err(|e| CliError::Io(format!("{}: {e}", out.display())))?;
    }
    verification_outcome(&reports)
}
