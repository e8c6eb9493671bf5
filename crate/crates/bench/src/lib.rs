//! Workloads shared by the benchmarks.

use tripartite::{presets, GridSpec, SystemConfig};

/// Figure configuration with both couplings at 0.1 of the detuning.
pub fn matched() -> SystemConfig {
    presets::beam_coupled(0.1)
}

/// The default plotting window at `points` samples.
pub fn window(points: usize) -> GridSpec {
    GridSpec::new(0.95, 1.05, points).expect("valid grid")
}

/// Single-excitation Hamiltonian of the three-mode system, row-major.
pub fn hamiltonian(cfg: &SystemConfig) -> [f64; 9] {
    #[rustfmt::skip]
    let h = [
        cfg.omega_c, 0.0, cfg.g_c,
        0.0, cfg.omega_m, cfg.g_m,
        cfg.g_c, cfg.g_m, cfg.omega_q,
    ];
    h
}
