//! Voltage-fluctuation spectrum of the CPW resonator in the effective model.
//!
//! With vacuum input noise the spectrum is fixed by the cavity response
//! denominator
//!
//! ```text
//! d(ω) = κ/2 − i(ω − ω'_c) + g² / (γ/2 − i(ω − ω'_m))
//! S_V(ω) = 1/d + 1/d* = 2 Re(1/d)
//! ```
//!
//! The overall scale is arbitrary; it is not normalized to any physical unit.

use num_complex::Complex64;

use crate::effective::EffectiveModel;
use crate::error::{Error, Result};
use crate::peaks::{find_peaks_in, PeakReport};
use crate::series::{evaluate, GridSpec, Provenance, SweepSeries};

fn check_rates(kappa: f64, gamma: f64) -> Result<()> {
    if !(kappa.is_finite() && kappa > 0.0) {
        return Err(Error::param("kappa", format!("spectra need kappa > 0, got {kappa}")));
    }
    if !(gamma.is_finite() && gamma >= 0.0) {
        return Err(Error::param("gamma", format!("must be >= 0, got {gamma}")));
    }
    Ok(())
}

/// Cavity response denominator `d(ω)`.
pub fn response_d(omega: f64, em: &EffectiveModel, kappa: f64, gamma: f64) -> Result<Complex64> {
    let cavity = Complex64::new(0.5 * kappa, -(omega - em.omega_c));
    if em.g == 0.0 {
        return Ok(cavity);
    }
    let mech = Complex64::new(0.5 * gamma, -(omega - em.omega_m));
    if mech == Complex64::new(0.0, 0.0) {
        return Err(Error::Singularity { omega });
    }
    Ok(cavity + em.g * em.g / mech)
}

/// `S_V(ω) = 2 Re(1/d(ω))`, in arbitrary units. Non-negative for `κ > 0, γ ≥ 0`.
pub fn voltage_spectrum(omega: f64, em: &EffectiveModel, kappa: f64, gamma: f64) -> Result<f64> {
    check_rates(kappa, gamma)?;
    let d = response_d(omega, em, kappa, gamma)?;
    Ok(2.0 * d.inv().re)
}

/// Lorentzian reference `κ / ((κ/2)² + (ω − ω_0)²)`.
pub fn lorentzian_limit(omega: f64, center: f64, kappa: f64) -> Result<f64> {
    if !(kappa > 0.0) {
        return Err(Error::param("kappa", format!("must be > 0, got {kappa}")));
    }
    let x = omega - center;
    Ok(kappa / (0.25 * kappa * kappa + x * x))
}

pub const SPECTRUM_COLUMNS: [&str; 2] = ["omega_norm", "S_V"];

/// Samples `S_V` on `grid` (normalized by the bare `ω_c`).
///
/// The series grid is in rad/ns; columns are `omega_norm` and `S_V`.
pub fn sweep_spectrum(em: &EffectiveModel, kappa: f64, gamma: f64, grid: &GridSpec) -> Result<SweepSeries> {
    check_rates(kappa, gamma)?;
    grid.validate()?;
    let scale = em.source.omega_c;
    let omegas = grid.omegas(scale);
    let values = evaluate(&omegas, |w| voltage_spectrum(w, em, kappa, gamma))?;
    let mut source = em.source;
    source.kappa = kappa;
    source.gamma = gamma;
    let mut series = SweepSeries::new(omegas)?.with_provenance(Provenance {
        kind: "spectrum".into(),
        model: "effective".into(),
        config: source,
        grid: *grid,
        normalization: scale,
    });
    let norm = series.grid.iter().map(|w| w / scale).collect();
    series.push_column(SPECTRUM_COLUMNS[0], norm)?;
    series.push_column(SPECTRUM_COLUMNS[1], values)?;
    Ok(series)
}

/// Peaks of an `S_V` series, refined against the continuous spectrum.
pub fn spectrum_peaks(series: &SweepSeries, em: &EffectiveModel, kappa: f64, gamma: f64) -> Result<PeakReport> {
    find_peaks_in(series, SPECTRUM_COLUMNS[1], |w| {
        voltage_spectrum(w, em, kappa, gamma).unwrap_or(f64::NAN)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::effective::{polariton_frequencies, reduce};
    use crate::presets;

    #[test]
    fn bare_denominator_at_resonance() {
        let em = reduce(&presets::cavity_dressed()).unwrap();
        let k = em.source.kappa;
        assert_eq!(response_d(em.omega_c, &em, k, k).unwrap(), Complex64::new(0.5 * k, 0.0));
    }

    #[test]
    fn far_asymptote() {
        let em = reduce(&presets::beam_coupled(0.15)).unwrap();
        let w = 1e6;
        let d = response_d(w, &em, 1e-3, 1e-3).unwrap();
        let lead = Complex64::new(0.0, -(w - em.omega_c));
        assert!(((d - lead) / lead).norm() < 1e-9);
    }

    #[test]
    fn exact_pole_is_refused() {
        let em = reduce(&presets::beam_coupled(0.15)).unwrap();
        assert!(matches!(
            response_d(em.omega_m, &em, 1e-3, 0.0),
            Err(Error::Singularity { .. })
        ));
        assert!(voltage_spectrum(1.0, &em, 0.0, 1e-3).is_err());
    }

    #[test]
    fn bare_cavity_peak_height() {
        let cfg = presets::uncoupled();
        let em = reduce(&cfg).unwrap();
        let s = voltage_spectrum(cfg.omega_c, &em, cfg.kappa, cfg.gamma).unwrap();
        assert!((s - 4.0 / cfg.kappa).abs() / (4.0 / cfg.kappa) < 1e-14);
    }

    #[test]
    fn lorentzian_values() {
        assert!((lorentzian_limit(1.0, 1.0, 0.2).unwrap() - 20.0).abs() < 1e-12);
        assert!((lorentzian_limit(1.1, 1.0, 0.2).unwrap() - 10.0).abs() < 1e-12);
        assert!(lorentzian_limit(1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn uncoupled_spectrum_is_the_lorentzian() {
        let cfg = presets::cavity_dressed();
        let em = reduce(&cfg).unwrap();
        let grid = GridSpec::new(0.9, 1.1, 10_000).unwrap();
        for w in grid.omegas(cfg.omega_c) {
            let s = voltage_spectrum(w, &em, cfg.kappa, cfg.gamma).unwrap();
            let l = lorentzian_limit(w, em.omega_c, cfg.kappa).unwrap();
            assert!((s - l).abs() <= 1e-12 * l.max(1.0), "{w}: {s} vs {l}");
        }
    }

    #[test]
    fn dressed_cavity_peak_is_red_shifted() {
        let cfg = presets::cavity_dressed();
        let em = reduce(&cfg).unwrap();
        let series = sweep_spectrum(&em, cfg.kappa, cfg.gamma, &GridSpec::default()).unwrap();
        let sv = series.column("S_V").unwrap();
        let argmax = (0..sv.len()).max_by(|&a, &b| sv[a].total_cmp(&sv[b])).unwrap();
        let step = 0.1 / 4000.0;
        assert!((series.column("omega_norm").unwrap()[argmax] - 0.99).abs() <= step);
        let peaks = spectrum_peaks(&series, &em, cfg.kappa, cfg.gamma).unwrap();
        assert_eq!(peaks.len(), 1);
        assert!((peaks.peaks[0].position / cfg.omega_c - 0.99).abs() < 1e-10);
        let fwhm = peaks.peaks[0].fwhm.unwrap();
        assert!((fwhm - cfg.kappa).abs() / cfg.kappa < 1e-4);
    }

    #[test]
    fn two_point_grid() {
        let cfg = presets::beam_coupled(0.05);
        let em = reduce(&cfg).unwrap();
        let s = sweep_spectrum(&em, cfg.kappa, cfg.gamma, &GridSpec::new(0.9, 1.1, 2).unwrap()).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.column("S_V").unwrap().len(), 2);
    }

    #[test]
    fn doublet_in_narrow_window() {
        let cfg = presets::beam_coupled(0.05);
        let em = reduce(&cfg).unwrap();
        let grid = GridSpec::new(0.97, 1.01, 4001).unwrap();
        let series = sweep_spectrum(&em, cfg.kappa, cfg.gamma, &grid).unwrap();
        let peaks = spectrum_peaks(&series, &em, cfg.kappa, cfg.gamma).unwrap();
        assert_eq!(peaks.len(), 2);
        let (lo, hi) = polariton_frequencies(&em);
        let tol = (cfg.kappa + cfg.gamma) / 10.0;
        assert!((peaks.peaks[0].position - lo).abs() < tol);
        assert!((peaks.peaks[1].position - hi).abs() < tol);
    }
}
