//! Closed-form SINRs and achievable rates.
//!
//! With maximum-ratio processing and channel-statistics detection, every
//! SINR of the two transmission phases has an exact closed form in the
//! large-scale statistics:
//!
//! ```text
//! gamma_mac_pair[i] = p_u N (eta_a[i] (sum_m phi_a)^2 + eta_b[i] (sum_m phi_b)^2)
//!                     / sum_m (sum_j p_u (eta_a[j] alpha_a + eta_b[j] alpha_b) + 1)(phi_a + phi_b)
//!
//! gamma_mac_dir[X,i] keeps only side X in the numerator;
//!
//! gamma_bc_dir[X,i]  = N p_r (sum_m sqrt(eta_dl[other X]) phi_x)^2
//!                     / sum_m (p_r alpha_x + 1) sum_j (eta_a_dl phi_b + eta_b_dl phi_a)
//! ```
//!
//! Rates apply the pre-log `(tau_c - tau_p) / (2 tau_c)`; the pair rate is
//! `min(mac pair rate, bc pair rate)` where the broadcast-phase pair rate
//! sums the two direction-wise bottlenecks
//! `min(R_mac[A], R_bc[B]) + min(R_mac[B], R_bc[A])`.

use thiserror::Error;

use crate::config::SystemConfig;
use crate::fading::LargeScaleFading;
use crate::power::PowerAllocation;

#[derive(Debug, Error)]
pub enum SeError {
    #[error("pilot overhead must leave data symbols: tau_p {tau_p} >= tau_c {tau_c}")]
    NoDataSymbols { tau_p: usize, tau_c: usize },
    #[error("collocated evaluation expects a single relay site, got {0} APs")]
    NotCollocated(usize),
}

/// User side of a pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Side::A => 0,
            Side::B => 1,
        }
    }
}

/// Per-AP uplink interference load `sum_j (eta_a[j] alpha_a + eta_b[j] alpha_b)`.
fn uplink_load(ls: &LargeScaleFading, pa: &PowerAllocation) -> Vec<f64> {
    let (m, w) = ls.alpha_a.dim();
    (0..m)
        .map(|ap| {
            (0..w)
                .map(|j| {
                    pa.eta_a_ul[j] * ls.alpha_a[(ap, j)] + pa.eta_b_ul[j] * ls.alpha_b[(ap, j)]
                })
                .sum()
        })
        .collect()
}

/// Per-AP downlink load `sum_j (eta_a_dl phi_b + eta_b_dl phi_a)` (without N).
fn downlink_load(ls: &LargeScaleFading, pa: &PowerAllocation) -> Vec<f64> {
    let (m, w) = ls.phi_a.dim();
    (0..m)
        .map(|ap| {
            (0..w)
                .map(|j| {
                    pa.eta_a_dl[(ap, j)] * ls.phi_b[(ap, j)]
                        + pa.eta_b_dl[(ap, j)] * ls.phi_a[(ap, j)]
                })
                .sum()
        })
        .collect()
}

fn ratio_or_zero(num: f64, den: f64) -> f64 {
    if num == 0.0 || den == 0.0 {
        0.0
    } else {
        num / den
    }
}

/// Multiple-access phase SINR of each pair.
pub fn sinr_mac_pair(ls: &LargeScaleFading, pa: &PowerAllocation, n: usize) -> Vec<f64> {
    let (m, w) = ls.phi_a.dim();
    let load = uplink_load(ls, pa);
    (0..w)
        .map(|i| {
            let sum_phi_a: f64 = (0..m).map(|ap| ls.phi_a[(ap, i)]).sum();
            let sum_phi_b: f64 = (0..m).map(|ap| ls.phi_b[(ap, i)]).sum();
            let num = pa.p_u
                * n as f64
                * (pa.eta_a_ul[i] * sum_phi_a * sum_phi_a + pa.eta_b_ul[i] * sum_phi_b * sum_phi_b);
            let den: f64 = (0..m)
                .map(|ap| (pa.p_u * load[ap] + 1.0) * (ls.phi_a[(ap, i)] + ls.phi_b[(ap, i)]))
                .sum();
            ratio_or_zero(num, den)
        })
        .collect()
}

/// Multiple-access phase SINR of each link of side `side`.
pub fn sinr_mac_dir(ls: &LargeScaleFading, pa: &PowerAllocation, n: usize, side: Side) -> Vec<f64> {
    let (m, w) = ls.phi_a.dim();
    let load = uplink_load(ls, pa);
    let (phi, eta) = match side {
        Side::A => (&ls.phi_a, &pa.eta_a_ul),
        Side::B => (&ls.phi_b, &pa.eta_b_ul),
    };
    (0..w)
        .map(|i| {
            let sum_phi: f64 = (0..m).map(|ap| phi[(ap, i)]).sum();
            let num = pa.p_u * eta[i] * n as f64 * sum_phi * sum_phi;
            let den: f64 = (0..m)
                .map(|ap| (pa.p_u * load[ap] + 1.0) * (ls.phi_a[(ap, i)] + ls.phi_b[(ap, i)]))
                .sum();
            ratio_or_zero(num, den)
        })
        .collect()
}

/// Broadcast phase SINR toward each user of side `side` (the data it
/// receives originates at the other side).
pub fn sinr_bc_dir(ls: &LargeScaleFading, pa: &PowerAllocation, n: usize, side: Side) -> Vec<f64> {
    let (m, w) = ls.phi_a.dim();
    let dl_load = downlink_load(ls, pa);
    let (phi, alpha, eta_other) = match side {
        Side::A => (&ls.phi_a, &ls.alpha_a, &pa.eta_b_dl),
        Side::B => (&ls.phi_b, &ls.alpha_b, &pa.eta_a_dl),
    };
    (0..w)
        .map(|i| {
            let beam: f64 = (0..m)
                .map(|ap| eta_other[(ap, i)].sqrt() * phi[(ap, i)])
                .sum();
            let num = n as f64 * pa.p_r * beam * beam;
            let den: f64 = (0..m)
                .map(|ap| (pa.p_r * alpha[(ap, i)] + 1.0) * dl_load[ap])
                .sum();
            ratio_or_zero(num, den)
        })
        .collect()
}

/// All SINRs and rates of one evaluation, in bits/s/Hz.
#[derive(Debug, Clone)]
pub struct RateReport {
    pub gamma_mac_pair: Vec<f64>,
    /// Indexed `[Side::index()][pair]`.
    pub gamma_mac_dir: [Vec<f64>; 2],
    pub gamma_bc_dir: [Vec<f64>; 2],
    pub r_mac_pair: Vec<f64>,
    pub r_bc_pair: Vec<f64>,
    pub r_pair: Vec<f64>,
    pub sum_se: f64,
}

fn rate(prelog: f64, gamma: f64) -> f64 {
    prelog * (1.0 + gamma).log2()
}

/// Combine pair and per-direction SINRs into rates. The broadcast-phase pair
/// rate sums the two direction-wise bottlenecks; the pair rate is the
/// minimum over the phases. Also used by the Monte-Carlo path, which feeds
/// estimated SINRs through the same pipeline.
pub fn combine_rates(
    gamma_mac_pair: Vec<f64>,
    gamma_mac_dir: [Vec<f64>; 2],
    gamma_bc_dir: [Vec<f64>; 2],
    prelog: f64,
) -> RateReport {
    let w = gamma_mac_pair.len();
    let r_mac_pair: Vec<f64> = gamma_mac_pair.iter().map(|&g| rate(prelog, g)).collect();
    let r_bc_pair: Vec<f64> = (0..w)
        .map(|i| {
            // Direction A->B is limited by A's access link and B's broadcast
            // link; the reverse direction symmetrically.
            let forward = rate(prelog, gamma_mac_dir[0][i]).min(rate(prelog, gamma_bc_dir[1][i]));
            let backward = rate(prelog, gamma_mac_dir[1][i]).min(rate(prelog, gamma_bc_dir[0][i]));
            forward + backward
        })
        .collect();
    let r_pair: Vec<f64> = (0..w)
        .map(|i| r_mac_pair[i].min(r_bc_pair[i]))
        .collect();
    let sum_se = r_pair.iter().sum();
    RateReport {
        gamma_mac_pair,
        gamma_mac_dir,
        gamma_bc_dir,
        r_mac_pair,
        r_bc_pair,
        r_pair,
        sum_se,
    }
}

/// Evaluate the full rate pipeline with an explicit antenna count and pre-log.
pub fn rate_report_with(
    ls: &LargeScaleFading,
    pa: &PowerAllocation,
    n: usize,
    prelog: f64,
) -> RateReport {
    let gamma_mac_pair = sinr_mac_pair(ls, pa, n);
    let gamma_mac_dir = [
        sinr_mac_dir(ls, pa, n, Side::A),
        sinr_mac_dir(ls, pa, n, Side::B),
    ];
    let gamma_bc_dir = [
        sinr_bc_dir(ls, pa, n, Side::A),
        sinr_bc_dir(ls, pa, n, Side::B),
    ];
    combine_rates(gamma_mac_pair, gamma_mac_dir, gamma_bc_dir, prelog)
}

pub fn rate_report(
    ls: &LargeScaleFading,
    pa: &PowerAllocation,
    cfg: &SystemConfig,
) -> Result<RateReport, SeError> {
    if cfg.pilot_symbols >= cfg.coherence_symbols {
        return Err(SeError::NoDataSymbols {
            tau_p: cfg.pilot_symbols,
            tau_c: cfg.coherence_symbols,
        });
    }
    Ok(rate_report_with(ls, pa, cfg.antennas_per_ap, cfg.prelog()))
}

/// Rates of the collocated baseline: a single relay site with `M * N`
/// antennas. `ls` must describe one site (distances to the area center).
pub fn collocated_rate_report(
    ls: &LargeScaleFading,
    pa: &PowerAllocation,
    cfg: &SystemConfig,
) -> Result<RateReport, SeError> {
    if ls.num_aps() != 1 {
        return Err(SeError::NotCollocated(ls.num_aps()));
    }
    if cfg.pilot_symbols >= cfg.coherence_symbols {
        return Err(SeError::NoDataSymbols {
            tau_p: cfg.pilot_symbols,
            tau_c: cfg.coherence_symbols,
        });
    }
    Ok(rate_report_with(
        ls,
        pa,
        cfg.num_aps * cfg.antennas_per_ap,
        cfg.prelog(),
    ))
}

/// Orthogonal baseline: every pair is served alone in `1/W` of the
/// resources. Inter-pair interference terms vanish and the pre-log is
/// divided by `W`; training overhead stays the same.
pub fn orthogonal_scheme_sum_se(
    ls: &LargeScaleFading,
    pa: &PowerAllocation,
    cfg: &SystemConfig,
) -> Result<f64, SeError> {
    if cfg.pilot_symbols >= cfg.coherence_symbols {
        return Err(SeError::NoDataSymbols {
            tau_p: cfg.pilot_symbols,
            tau_c: cfg.coherence_symbols,
        });
    }
    let (m, w) = ls.phi_a.dim();
    let n = cfg.antennas_per_ap as f64;
    let prelog = cfg.prelog() / w as f64;

    let mut sum_se = 0.0;
    for i in 0..w {
        // MAC with only pair i transmitting.
        let den_mac: f64 = (0..m)
            .map(|ap| {
                let own = pa.eta_a_ul[i] * ls.alpha_a[(ap, i)] + pa.eta_b_ul[i] * ls.alpha_b[(ap, i)];
                (pa.p_u * own + 1.0) * (ls.phi_a[(ap, i)] + ls.phi_b[(ap, i)])
            })
            .sum();
        let sum_phi_a: f64 = (0..m).map(|ap| ls.phi_a[(ap, i)]).sum();
        let sum_phi_b: f64 = (0..m).map(|ap| ls.phi_b[(ap, i)]).sum();
        let g_mac_pair = ratio_or_zero(
            pa.p_u
                * n
                * (pa.eta_a_ul[i] * sum_phi_a * sum_phi_a + pa.eta_b_ul[i] * sum_phi_b * sum_phi_b),
            den_mac,
        );
        let g_mac_a = ratio_or_zero(pa.p_u * pa.eta_a_ul[i] * n * sum_phi_a * sum_phi_a, den_mac);
        let g_mac_b = ratio_or_zero(pa.p_u * pa.eta_b_ul[i] * n * sum_phi_b * sum_phi_b, den_mac);

        // BC with only pair i precoded.
        let bc = |side: Side| {
            let (phi, alpha, eta_other) = match side {
                Side::A => (&ls.phi_a, &ls.alpha_a, &pa.eta_b_dl),
                Side::B => (&ls.phi_b, &ls.alpha_b, &pa.eta_a_dl),
            };
            let beam: f64 = (0..m)
                .map(|ap| eta_other[(ap, i)].sqrt() * phi[(ap, i)])
                .sum();
            let den: f64 = (0..m)
                .map(|ap| {
                    let own = pa.eta_a_dl[(ap, i)] * ls.phi_b[(ap, i)]
                        + pa.eta_b_dl[(ap, i)] * ls.phi_a[(ap, i)];
                    (pa.p_r * alpha[(ap, i)] + 1.0) * own
                })
                .sum();
            ratio_or_zero(n * pa.p_r * beam * beam, den)
        };
        let g_bc_a = bc(Side::A);
        let g_bc_b = bc(Side::B);

        let r_mac = rate(prelog, g_mac_pair);
        let r_bc = rate(prelog, g_mac_a).min(rate(prelog, g_bc_b))
            + rate(prelog, g_mac_b).min(rate(prelog, g_bc_a));
        sum_se += r_mac.min(r_bc);
    }
    Ok(sum_se)
}
