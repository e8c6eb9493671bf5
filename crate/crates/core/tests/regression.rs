//! Frozen reference numbers for the standard configurations.
//!
//! These were produced by the first run that passed the oracle checks and are
//! kept to catch silent drift. They are not independent of the code.

use tripartite::effective::{doublet_formula, polariton_frequencies, reduce};
use tripartite::fullmodel::compare_models;
use tripartite::oracle::d_poles;
use tripartite::spectra::{spectrum_peaks, sweep_spectrum};
use tripartite::{presets, GridSpec};

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * b.abs().max(1e-300)
}

#[test]
fn rabi_doublet_peaks() {
    // (g_m / ω_m, [(position, height); 2])
    let frozen = [
        (0.05, [(6.204645540945402, 509.49921092213333), (6.283184505439515, 128.13753435896288)]),
        (0.15, [(6.07898181041168, 195.9872986052377), (6.2831853020750446, 440.7831173574111)]),
    ];
    for (g_m, expected) in frozen {
        let cfg = presets::beam_coupled(g_m);
        let em = reduce(&cfg).unwrap();
        let series = sweep_spectrum(&em, cfg.kappa, cfg.gamma, &GridSpec::default()).unwrap();
        let peaks = spectrum_peaks(&series, &em, cfg.kappa, cfg.gamma).unwrap();
        assert_eq!(peaks.len(), 2);
        let poles = d_poles(em.omega_c, em.omega_m, em.g, cfg.kappa, cfg.gamma);
        for ((peak, pole), (pos, height)) in peaks.peaks.iter().zip(poles).zip(expected) {
            assert!((peak.position - pole.re).abs() <= (cfg.kappa + cfg.gamma) / 10.0);
            // the maximum is flat, so the position is only good to ~sqrt(eps)
            assert!(close(peak.position, pos, 1e-7), "{} vs {pos}", peak.position);
            assert!(close(peak.height, height, 1e-10), "{} vs {height}", peak.height);
        }
    }
}

#[test]
fn formula_splitting_deviation() {
    // (g_m / ω_m, formula splitting, pole splitting), rad/ns
    let frozen = [(0.05, 0.11327173399138978, 0.07853981633974483), (0.15, 0.24536623004530408, 0.20420352248333656)];
    for (g_m, formula, poles) in frozen {
        let cfg = presets::beam_coupled(g_m);
        let p = doublet_formula(&cfg).unwrap();
        let (lo, hi) = polariton_frequencies(&reduce(&cfg).unwrap());
        assert!(close(p.splitting, formula, 1e-12));
        assert!(close(hi - lo, poles, 1e-12), "{}", hi - lo);
        let analytic = (cfg.g_c * cfg.g_c + cfg.g_m * cfg.g_m) / cfg.detuning_c();
        assert!(close(hi - lo, analytic, 1e-12));
    }
}

#[test]
fn formula_splitting_agrees_when_couplings_match() {
    for ratio in [0.02, 0.05, 0.1, 0.14] {
        let cfg = presets::standard(ratio, ratio, 0.0);
        let p = doublet_formula(&cfg).unwrap();
        let (lo, hi) = polariton_frequencies(&reduce(&cfg).unwrap());
        assert!(close(p.splitting, hi - lo, 1e-12), "{ratio}: {} vs {}", p.splitting, hi - lo);
    }
}

#[test]
fn effective_versus_full_dips() {
    // (γ_q, offsets ω_full − ω_eff in rad/ns, full-model dip reflectances, max |Δ|r|²|)
    let frozen = [
        (0.0, [0.0009579663886789547, -2.5278970028352887e-9], [0.3600000000000001, 0.3600000000000001], 0.13367703382704654),
        (
            presets::lossy_qubit_rate(),
            [0.000949968002970536, -1.770383928345609e-8],
            [0.31579344369867823, 0.3599230838959422],
            0.15707759304933372,
        ),
    ];
    for (gamma_q, offsets, depths, max_dev) in frozen {
        let rep = compare_models(&presets::with_qubit_decay(gamma_q), &GridSpec::default(), 0.05).unwrap();
        assert_eq!(rep.effective_dips.len(), 2);
        assert_eq!(rep.full_dips.len(), 2);
        let got = rep.offsets.expect("dips pair up");
        for (g, e) in got.iter().zip(offsets) {
            assert!(*g != 0.0);
            assert!((g - e).abs() <= 1e-6 * e.abs() + 1e-11, "{g} vs {e}");
        }
        for (dip, e) in rep.full_dips.iter().zip(depths) {
            assert!(close(dip.reflectance, e, 1e-9), "{} vs {e}", dip.reflectance);
        }
        assert!(close(rep.max_deviation, max_dev, 1e-9));
    }
}
