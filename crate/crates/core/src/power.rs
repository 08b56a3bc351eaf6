//! Power control coefficients for both transmission phases.
//!
//! Uplink: one coefficient per user (`eta_a_ul`, `eta_b_ul`, in [0, 1]).
//! Downlink: one coefficient per AP-user link (`eta_a_dl`, `eta_b_dl`),
//! subject to the per-AP constraint
//! `N * sum_i (eta_a[(m,i)] phi_b[(m,i)] + eta_b[(m,i)] phi_a[(m,i)]) <= 1`.
//! The total relay budget `p_r` then fixes the per-symbol downlink power
//! `p_d` through the normalization below.

use ndarray::Array2;

use crate::fading::LargeScaleFading;

#[derive(Debug, Clone)]
pub struct PowerAllocation {
    pub eta_a_ul: Vec<f64>,
    pub eta_b_ul: Vec<f64>,
    pub eta_a_dl: Array2<f64>,
    pub eta_b_dl: Array2<f64>,
    /// Normalized pilot power.
    pub p_p: f64,
    /// Normalized uplink power.
    pub p_u: f64,
    /// Normalized total relay power.
    pub p_r: f64,
}

/// Full-power downlink coefficients: every AP transmits at its power limit,
/// `eta[(m,i)] = (N * sum_j (phi_b[(m,j)] + phi_a[(m,j)]))^-1`, identical for
/// both sides. An AP with an all-zero phi row gets coefficient 0.
pub fn full_power_downlink(ls: &LargeScaleFading, n: usize) -> (Array2<f64>, Array2<f64>) {
    let (m, w) = ls.phi_a.dim();
    let mut eta = Array2::zeros((m, w));
    for ap in 0..m {
        let row_sum: f64 = (0..w).map(|j| ls.phi_b[(ap, j)] + ls.phi_a[(ap, j)]).sum();
        let value = if row_sum > 0.0 {
            1.0 / (n as f64 * row_sum)
        } else {
            0.0
        };
        for i in 0..w {
            eta[(ap, i)] = value;
        }
    }
    (eta.clone(), eta)
}

impl PowerAllocation {
    /// Full uplink power per user and full-power downlink coefficients.
    pub fn full_power(ls: &LargeScaleFading, n: usize, p_p: f64, p_u: f64, p_r: f64) -> Self {
        let w = ls.num_pairs();
        let (eta_a_dl, eta_b_dl) = full_power_downlink(ls, n);
        PowerAllocation {
            eta_a_ul: vec![1.0; w],
            eta_b_ul: vec![1.0; w],
            eta_a_dl,
            eta_b_dl,
            p_p,
            p_u,
            p_r,
        }
    }

    /// Per-AP downlink load `N * sum_i (eta_a phi_b + eta_b phi_a)`; must not
    /// exceed 1.
    pub fn per_ap_load(&self, ls: &LargeScaleFading, n: usize) -> Vec<f64> {
        let (m, w) = ls.phi_a.dim();
        (0..m)
            .map(|ap| {
                n as f64
                    * (0..w)
                        .map(|i| {
                            self.eta_a_dl[(ap, i)] * ls.phi_b[(ap, i)]
                                + self.eta_b_dl[(ap, i)] * ls.phi_a[(ap, i)]
                        })
                        .sum::<f64>()
            })
            .collect()
    }

    /// Downlink per-symbol power implied by the total relay budget:
    /// `p_d = p_r / (N * sum_i sum_m (eta_a phi_b + eta_b phi_a))`.
    pub fn p_d(&self, ls: &LargeScaleFading, n: usize) -> f64 {
        let total: f64 = self.per_ap_load(ls, n).iter().sum();
        if total > 0.0 {
            self.p_r / total
        } else {
            0.0
        }
    }
}
