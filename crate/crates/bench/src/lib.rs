//! Shared fixtures for the benchmark targets.

use cfrelay_core::{Scene, SystemConfig};

/// A desk-scale deployment used by all benchmarks.
pub fn bench_config(m: usize, n: usize, w: usize) -> SystemConfig {
    SystemConfig {
        num_aps: m,
        antennas_per_ap: n,
        num_pairs: w,
        pilot_symbols: 2 * w,
        rng_seed: 7,
        ..Default::default()
    }
}

pub fn bench_scene(m: usize, n: usize, w: usize) -> (SystemConfig, Scene) {
    let cfg = bench_config(m, n, w);
    let scene = Scene::from_config(&cfg).expect("valid bench config");
    (cfg, scene)
}
