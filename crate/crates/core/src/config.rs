//! System configuration: deployment geometry, frame structure, and radio
//! powers. Defaults reproduce the reference urban-microcell setup (200 APs
//! with 3 antennas each, 5 user pairs, 20 MHz at 2 GHz, 100 mW per pilot and
//! uplink symbol).
//!
//! Physical powers live in dBm only at this boundary; everything downstream
//! works with powers normalized by the thermal noise power.

use serde::Deserialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("invalid config: {0}")]
    Invalid(String),
    #[error("unknown config key `{0}`")]
    UnknownKey(String),
    #[error("bad value for `{key}`: {message}")]
    BadValue { key: String, message: String },
    #[error("config parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

/// Transmit powers normalized by the noise power (linear SNR units).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalizedPowers {
    pub pilot: f64,
    pub uplink: f64,
    pub relay: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SystemConfig {
    /// Number of APs jointly acting as the relay (M).
    pub num_aps: usize,
    /// Antennas per AP (N).
    pub antennas_per_ap: usize,
    /// Number of user pairs (W).
    pub num_pairs: usize,
    /// Side of the square deployment area in meters.
    pub area_side_m: f64,
    /// Coherence interval length in symbols.
    pub coherence_symbols: usize,
    /// Uplink training length in symbols.
    pub pilot_symbols: usize,
    /// Carrier frequency in Hz (informational; the path-loss model is
    /// calibrated for 2 GHz).
    pub carrier_freq_hz: f64,
    /// Communication bandwidth in Hz.
    pub bandwidth_hz: f64,
    /// Receiver noise figure in dB.
    pub noise_figure_db: f64,
    /// Noise temperature in Kelvin.
    pub noise_temp_k: f64,
    /// Boltzmann constant in J/K.
    pub boltzmann_j_per_k: f64,
    /// Transmit power per pilot symbol in dBm.
    pub pilot_power_dbm: f64,
    /// Uplink transmit power per user in dBm.
    pub uplink_power_dbm: f64,
    /// Total relay (AP) transmit power in dBm.
    pub relay_power_dbm: f64,
    /// Master seed for topology, shadowing, and channel draws.
    pub rng_seed: u64,
}

impl Default for SystemConfig {
    fn default() -> Self {
        // 100 mW = 20 dBm; relay default 2W * p_u = 1 W = 30 dBm.
        SystemConfig {
            num_aps: 200,
            antennas_per_ap: 3,
            num_pairs: 5,
            area_side_m: 1000.0,
            coherence_symbols: 200,
            pilot_symbols: 10,
            carrier_freq_hz: 2.0e9,
            bandwidth_hz: 20.0e6,
            noise_figure_db: 9.0,
            noise_temp_k: 290.0,
            boltzmann_j_per_k: 1.381e-23,
            pilot_power_dbm: 20.0,
            uplink_power_dbm: 20.0,
            relay_power_dbm: 30.0,
            rng_seed: 1,
        }
    }
}

pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

pub fn watts_to_dbm(w: f64) -> f64 {
    10.0 * w.log10() + 30.0
}

impl SystemConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let fail = |msg: String| Err(ConfigError::Invalid(msg));
        if self.num_aps < 1 {
            return fail("num_aps must be >= 1".into());
        }
        if self.antennas_per_ap < 1 {
            return fail("antennas_per_ap must be >= 1".into());
        }
        if self.num_pairs < 1 {
            return fail("num_pairs must be >= 1".into());
        }
        if !(self.area_side_m > 0.0) {
            return fail("area_side_m must be > 0".into());
        }
        // Mutual pilot orthogonality needs tau_p >= 2W.
        if self.pilot_symbols < 2 * self.num_pairs {
            return fail(format!(
                "pilot_symbols must be >= 2 * num_pairs ({} < {})",
                self.pilot_symbols,
                2 * self.num_pairs
            ));
        }
        if self.pilot_symbols >= self.coherence_symbols {
            return fail(format!(
                "pilot_symbols must be < coherence_symbols ({} >= {})",
                self.pilot_symbols, self.coherence_symbols
            ));
        }
        if !(self.bandwidth_hz > 0.0 && self.noise_temp_k > 0.0 && self.boltzmann_j_per_k > 0.0) {
            return fail("bandwidth, noise temperature, and Boltzmann constant must be > 0".into());
        }
        Ok(())
    }

    /// Thermal noise power in Watts: `W_c * k_B * T_0 * 10^(NF/10)`.
    pub fn noise_power_w(&self) -> f64 {
        self.bandwidth_hz
            * self.boltzmann_j_per_k
            * self.noise_temp_k
            * 10f64.powf(self.noise_figure_db / 10.0)
    }

    /// Physical powers divided by the noise power.
    pub fn normalized_powers(&self) -> NormalizedPowers {
        let np = self.noise_power_w();
        NormalizedPowers {
            pilot: dbm_to_watts(self.pilot_power_dbm) / np,
            uplink: dbm_to_watts(self.uplink_power_dbm) / np,
            relay: dbm_to_watts(self.relay_power_dbm) / np,
        }
    }

    /// Rate pre-log factor `(tau_c - tau_p) / (2 tau_c)`: the fraction of
    /// coherence resources left after training, halved by the two
    /// transmission phases.
    pub fn prelog(&self) -> f64 {
        (self.coherence_symbols as f64 - self.pilot_symbols as f64)
            / (2.0 * self.coherence_symbols as f64)
    }

    pub fn from_toml_str(text: &str) -> Result<Self, ConfigError> {
        let cfg: SystemConfig =
            toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &std::path::Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml_str(&text)
    }

    /// Apply a `key=value` override. Keys match the config file field names.
    pub fn set_field(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, ConfigError>
        where
            T::Err: std::fmt::Display,
        {
            value.parse().map_err(|e: T::Err| ConfigError::BadValue {
                key: key.to_string(),
                message: e.to_string(),
            })
        }
        match key {
            "num_aps" => self.num_aps = parse(key, value)?,
            "antennas_per_ap" => self.antennas_per_ap = parse(key, value)?,
            "num_pairs" => self.num_pairs = parse(key, value)?,
            "area_side_m" => self.area_side_m = parse(key, value)?,
            "coherence_symbols" => self.coherence_symbols = parse(key, value)?,
            "pilot_symbols" => self.pilot_symbols = parse(key, value)?,
            "carrier_freq_hz" => self.carrier_freq_hz = parse(key, value)?,
            "bandwidth_hz" => self.bandwidth_hz = parse(key, value)?,
            "noise_figure_db" => self.noise_figure_db = parse(key, value)?,
            "noise_temp_k" => self.noise_temp_k = parse(key, value)?,
            "boltzmann_j_per_k" => self.boltzmann_j_per_k = parse(key, value)?,
            "pilot_power_dbm" => self.pilot_power_dbm = parse(key, value)?,
            "uplink_power_dbm" => self.uplink_power_dbm = parse(key, value)?,
            "relay_power_dbm" => self.relay_power_dbm = parse(key, value)?,
            "rng_seed" => self.rng_seed = parse(key, value)?,
            other => return Err(ConfigError::UnknownKey(other.to_string())),
        }
        Ok(())
    }
}
