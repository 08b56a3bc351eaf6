//! Achievable sum spectral efficiency of a multipair two-way
//! decode-and-forward relaying system over a cell-free massive MIMO
//! deployment: many multi-antenna APs jointly relay between user pairs with
//! maximum-ratio processing and imperfect CSI.
//!
//! The crate provides
//! - the physical model: wrap-around topology, urban-microcell path loss
//!   with correlated shadowing, MMSE estimation statistics ([`geometry`],
//!   [`shadowing`], [`fading`]);
//! - exact closed-form SINRs and rates for both transmission phases plus
//!   collocated and orthogonal baselines ([`se`]);
//! - Monte-Carlo term estimators validating every closed-form term
//!   ([`channel`], [`montecarlo`]);
//! - asymptotic power-scaling evaluation as the AP count grows
//!   ([`scaling`]);
//! - sum-SE power allocation by successive geometric-programming
//!   approximation with an internal GP solver ([`gp`], [`poweralloc`]).

pub mod channel;
pub mod config;
pub mod fading;
pub mod geometry;
pub mod gp;
pub mod montecarlo;
pub mod power;
pub mod poweralloc;
pub mod rng;
pub mod scaling;
pub mod se;
pub mod shadowing;

pub use config::{NormalizedPowers, SystemConfig};
pub use fading::LargeScaleFading;
pub use geometry::Topology;
pub use montecarlo::McEstimate;
pub use power::PowerAllocation;
pub use se::{RateReport, Side};

/// Scene assembled from a config: topology, shadowing, and large-scale
/// statistics, with the full-power allocation as the default operating
/// point.
#[derive(Debug, Clone)]
pub struct Scene {
    pub topology: Topology,
    pub ls: LargeScaleFading,
    pub powers: NormalizedPowers,
}

impl Scene {
    pub fn from_config(cfg: &SystemConfig) -> Result<Scene, config::ConfigError> {
        cfg.validate()?;
        let topology = geometry::generate_topology(cfg);
        let shadows = shadowing::correlated_shadowing(&topology, cfg.rng_seed);
        let powers = cfg.normalized_powers();
        let ls = fading::large_scale(&topology, &shadows, cfg.pilot_symbols, powers.pilot);
        Ok(Scene {
            topology,
            ls,
            powers,
        })
    }

    /// Same scene with pilot power overridden (re-derives phi and e).
    pub fn with_pilot_power(&self, cfg: &SystemConfig, p_p: f64) -> Scene {
        let ls = LargeScaleFading::from_alpha(
            self.ls.alpha_a.clone(),
            self.ls.alpha_b.clone(),
            cfg.pilot_symbols,
            p_p,
        );
        Scene {
            topology: self.topology.clone(),
            ls,
            powers: NormalizedPowers {
                pilot: p_p,
                ..self.powers
            },
        }
    }

    pub fn full_power_allocation(&self, cfg: &SystemConfig) -> PowerAllocation {
        PowerAllocation::full_power(
            &self.ls,
            cfg.antennas_per_ap,
            self.powers.pilot,
            self.powers.uplink,
            self.powers.relay,
        )
    }

    /// Collocated baseline scene: one relay site at the area center with the
    /// same users and fresh shadowing for the single site.
    pub fn collocated(&self, cfg: &SystemConfig) -> Scene {
        let topology = self.topology.collocated_at_center();
        let shadows = shadowing::correlated_shadowing(&topology, cfg.rng_seed);
        let ls = fading::large_scale(&topology, &shadows, cfg.pilot_symbols, self.powers.pilot);
        Scene {
            topology,
            ls,
            powers: self.powers,
        }
    }
}
