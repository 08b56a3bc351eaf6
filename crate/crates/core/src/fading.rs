//! Large-scale fading and its estimation statistics.
//!
//! Link gains follow the urban-microcell law `-30.5 - 36.7 log10(d/1m) + F`
//! in dB over minimum-image (torus) distances, with `F` the correlated
//! shadow term. From each gain `alpha` the per-component variance of the
//! linear-MMSE channel estimate and of the estimation error follow as
//!
//! ```text
//! phi = tau_p p_p alpha^2 / (1 + tau_p p_p alpha),    e = alpha - phi
//! ```
//!
//! so `phi + e = alpha` holds exactly by construction.

use ndarray::Array2;
use thiserror::Error;

use crate::geometry::{torus_distance, Topology};
use crate::shadowing::ShadowField;

#[derive(Debug, Error)]
pub enum FadingError {
    #[error("path loss requires a positive distance, got {0}")]
    NonPositiveDistance(f64),
}

/// Urban-microcell path loss as a linear power gain.
pub fn path_loss_umi(d_m: f64, shadow_db: f64) -> Result<f64, FadingError> {
    if !(d_m > 0.0) {
        return Err(FadingError::NonPositiveDistance(d_m));
    }
    let gain_db = -30.5 - 36.7 * d_m.log10() + shadow_db;
    Ok(10f64.powf(gain_db / 10.0))
}

/// Per-link large-scale gains and MMSE estimation statistics, all `M x W`.
#[derive(Debug, Clone)]
pub struct LargeScaleFading {
    pub alpha_a: Array2<f64>,
    pub alpha_b: Array2<f64>,
    pub phi_a: Array2<f64>,
    pub phi_b: Array2<f64>,
    pub e_a: Array2<f64>,
    pub e_b: Array2<f64>,
}

fn estimation_split(alpha: &Array2<f64>, tau_p_p_p: f64) -> (Array2<f64>, Array2<f64>) {
    let phi = alpha.mapv(|a| {
        let t = tau_p_p_p * a;
        if t == 0.0 {
            0.0
        } else {
            a * t / (1.0 + t)
        }
    });
    let e = alpha - &phi;
    (phi, e)
}

impl LargeScaleFading {
    /// Build from raw gains; `phi`/`e` from the pilot budget `tau_p * p_p`.
    pub fn from_alpha(
        alpha_a: Array2<f64>,
        alpha_b: Array2<f64>,
        tau_p: usize,
        p_p: f64,
    ) -> LargeScaleFading {
        let tpp = tau_p as f64 * p_p;
        let (phi_a, e_a) = estimation_split(&alpha_a, tpp);
        let (phi_b, e_b) = estimation_split(&alpha_b, tpp);
        LargeScaleFading {
            alpha_a,
            alpha_b,
            phi_a,
            phi_b,
            e_a,
            e_b,
        }
    }

    /// Gains identical across APs: `alpha_x[(m, i)] = alpha_x[i]` for all m.
    pub fn homogeneous(
        alpha_a: &[f64],
        alpha_b: &[f64],
        m: usize,
        tau_p: usize,
        p_p: f64,
    ) -> LargeScaleFading {
        assert_eq!(alpha_a.len(), alpha_b.len());
        let w = alpha_a.len();
        let a = Array2::from_shape_fn((m, w), |(_, i)| alpha_a[i]);
        let b = Array2::from_shape_fn((m, w), |(_, i)| alpha_b[i]);
        LargeScaleFading::from_alpha(a, b, tau_p, p_p)
    }

    pub fn num_aps(&self) -> usize {
        self.alpha_a.nrows()
    }

    pub fn num_pairs(&self) -> usize {
        self.alpha_a.ncols()
    }

    /// Keep only the first `m` AP rows (nested-topology evaluations).
    pub fn truncate_aps(&self, m: usize) -> LargeScaleFading {
        assert!(m <= self.num_aps());
        let cut = |a: &Array2<f64>| a.slice(ndarray::s![..m, ..]).to_owned();
        LargeScaleFading {
            alpha_a: cut(&self.alpha_a),
            alpha_b: cut(&self.alpha_b),
            phi_a: cut(&self.phi_a),
            phi_b: cut(&self.phi_b),
            e_a: cut(&self.e_a),
            e_b: cut(&self.e_b),
        }
    }

    /// Gains by side: A first, B second.
    pub fn alpha(&self, side: crate::se::Side) -> &Array2<f64> {
        match side {
            crate::se::Side::A => &self.alpha_a,
            crate::se::Side::B => &self.alpha_b,
        }
    }

    pub fn phi(&self, side: crate::se::Side) -> &Array2<f64> {
        match side {
            crate::se::Side::A => &self.phi_a,
            crate::se::Side::B => &self.phi_b,
        }
    }
}

/// Path loss over torus distances plus shadowing, then the MMSE split.
/// `p_p` is the normalized pilot power.
pub fn large_scale(
    topology: &Topology,
    shadows: &ShadowField,
    tau_p: usize,
    p_p: f64,
) -> LargeScaleFading {
    let m = topology.num_aps();
    let w = topology.num_pairs();
    let gain = |ap: usize, user: crate::geometry::Point, shadow_db: f64| {
        let d = torus_distance(topology.ap_positions[ap], user, topology.side_m);
        // Uniform draws collide with probability zero; clamp to 1 m anyway so
        // a degenerate topology cannot produce an infinite gain.
        path_loss_umi(d.max(1.0), shadow_db).expect("distance clamped positive")
    };
    let alpha_a = Array2::from_shape_fn((m, w), |(ap, i)| {
        gain(ap, topology.user_positions_a[i], shadows.a[(ap, i)])
    });
    let alpha_b = Array2::from_shape_fn((m, w), |(ap, i)| {
        gain(ap, topology.user_positions_b[i], shadows.b[(ap, i)])
    });
    LargeScaleFading::from_alpha(alpha_a, alpha_b, tau_p, p_p)
}
