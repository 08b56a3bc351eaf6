//! Power-scaling behavior as the number of APs grows.
//!
//! Three scaling regimes are evaluated: shrinking the pilot power only
//! (scenario A, `p_p = E_p / M^a`), shrinking the data powers only
//! (scenario B, `p_u = E_u / M^b`, `p_r = E_r / M^c`), and shrinking all
//! three (scenario C). Each scenario has asymptotic SINR expressions
//! evaluated at finite `M` plus the displayed non-zero-limit forms for the
//! critical exponents, and a classifier mapping exponents to
//! zero/finite/unbounded behavior:
//!
//! - scenario A: all SINRs are of order `M^(1-a)`;
//! - scenario B: access-phase order `M^(1-b)`, broadcast order `M^(1-c)`;
//! - scenario C: orders `M^(1-a-b)` and `M^(1-a-c)`.
//!
//! Scenario C powers enter only through the exponent sums, so two exponent
//! splits with equal sums produce identical values; the implementation
//! computes `M^(a+b)` from the sum to keep that an exact identity.
//!
//! Scaling-law mode fixes the uplink coefficients at one (no power
//! control); asymptotic forms are evaluated as displayed, including the
//! broadcast numerator of scenario A which is linear rather than quadratic
//! in the gain sum.

use ndarray::Array2;
use thiserror::Error;

use crate::fading::LargeScaleFading;
use crate::power::PowerAllocation;
use crate::se::{combine_rates, rate_report_with, RateReport};

#[derive(Debug, Error)]
pub enum ScalingError {
    #[error("corollary {corollary} requires {condition}")]
    ConditionViolated {
        corollary: u8,
        condition: &'static str,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScenarioKind {
    A,
    B,
    C,
}

/// A power-scaling scenario. Exponents apply per scenario: A reads
/// `pilot_exp`, B reads `uplink_exp`/`relay_exp`, C reads all three.
/// `fixed_*` powers are the ones a scenario holds constant.
#[derive(Debug, Clone, Copy)]
pub struct ScalingScenario {
    pub kind: ScenarioKind,
    pub pilot_exp: f64,
    pub uplink_exp: f64,
    pub relay_exp: f64,
    /// Pilot energy `E_p`, normalized.
    pub e_p: f64,
    /// Uplink energy `E_u`.
    pub e_u: f64,
    /// Relay energy `E_r`.
    pub e_r: f64,
    pub fixed_p_p: f64,
    pub fixed_p_u: f64,
    pub fixed_p_r: f64,
}

impl ScalingScenario {
    pub fn validate(&self) -> Result<(), String> {
        if self.pilot_exp < 0.0 || self.uplink_exp < 0.0 || self.relay_exp < 0.0 {
            return Err("exponents must be >= 0".into());
        }
        if !(self.e_p > 0.0 && self.e_u > 0.0 && self.e_r > 0.0) {
            return Err("energies must be > 0".into());
        }
        Ok(())
    }

    /// Transmit powers at a finite AP count.
    pub fn powers_at(&self, m: usize) -> (f64, f64, f64) {
        let mf = m as f64;
        match self.kind {
            ScenarioKind::A => (
                self.e_p / mf.powf(self.pilot_exp),
                self.fixed_p_u,
                self.fixed_p_r,
            ),
            ScenarioKind::B => (
                self.fixed_p_p,
                self.e_u / mf.powf(self.uplink_exp),
                self.e_r / mf.powf(self.relay_exp),
            ),
            ScenarioKind::C => (
                self.e_p / mf.powf(self.pilot_exp),
                self.e_u / mf.powf(self.uplink_exp),
                self.e_r / mf.powf(self.relay_exp),
            ),
        }
    }
}

/// One asymptotic SINR evaluation: pair and per-direction access SINRs plus
/// per-direction broadcast SINRs, indexed like [`crate::se::RateReport`].
#[derive(Debug, Clone)]
pub struct SinrSet {
    pub mac_pair: Vec<f64>,
    pub mac_dir: [Vec<f64>; 2],
    pub bc_dir: [Vec<f64>; 2],
}

impl SinrSet {
    pub fn rates(&self, prelog: f64) -> RateReport {
        combine_rates(
            self.mac_pair.clone(),
            self.mac_dir.clone(),
            self.bc_dir.clone(),
            prelog,
        )
    }

    pub fn sum_se(&self, prelog: f64) -> f64 {
        self.rates(prelog).sum_se
    }
}

fn col_sums(alpha: &Array2<f64>) -> Vec<f64> {
    let (m, w) = alpha.dim();
    (0..w)
        .map(|i| (0..m).map(|ap| alpha[(ap, i)]).sum())
        .collect()
}

fn ratio_or_zero(num: f64, den: f64) -> f64 {
    if num == 0.0 || den == 0.0 {
        0.0
    } else {
        num / den
    }
}

/// Scenario A asymptotics at finite `M`, in the raw gains only (estimation
/// quality is absorbed by the limit). `scale` multiplies the pilot energy;
/// pass `E_p / M^a` via [`scenario_a_sinrs`] or `E_p` via
/// [`scenario_a_limits`].
fn scenario_a_eval(
    alpha_a: &Array2<f64>,
    alpha_b: &Array2<f64>,
    pilot_scale: f64,
    n: usize,
    p_u: f64,
    p_r: f64,
) -> SinrSet {
    let (m, w) = alpha_a.dim();
    let nf = n as f64;
    let sa = col_sums(alpha_a);
    let sb = col_sums(alpha_b);
    let load: Vec<f64> = (0..m)
        .map(|ap| (0..w).map(|j| alpha_a[(ap, j)] + alpha_b[(ap, j)]).sum())
        .collect();

    let mut set = SinrSet {
        mac_pair: vec![0.0; w],
        mac_dir: [vec![0.0; w], vec![0.0; w]],
        bc_dir: [vec![0.0; w], vec![0.0; w]],
    };
    for i in 0..w {
        let den_mac: f64 = (0..m)
            .map(|ap| (load[ap] + 1.0) * (alpha_a[(ap, i)] + alpha_b[(ap, i)]))
            .sum();
        set.mac_pair[i] = ratio_or_zero(
            p_u * nf * pilot_scale * (sa[i] * sa[i] + sb[i] * sb[i]),
            den_mac,
        );
        set.mac_dir[0][i] = ratio_or_zero(p_u * nf * pilot_scale * sa[i] * sa[i], den_mac);
        set.mac_dir[1][i] = ratio_or_zero(p_u * nf * pilot_scale * sb[i] * sb[i], den_mac);
        for (si, alpha) in [alpha_a, alpha_b].into_iter().enumerate() {
            let s = if si == 0 { sa[i] } else { sb[i] };
            // Broadcast numerator as displayed: linear in the gain sum.
            let den_bc: f64 = (0..m)
                .map(|ap| (p_r * alpha[(ap, i)] + 1.0) * load[ap])
                .sum();
            set.bc_dir[si][i] = ratio_or_zero(nf * p_r * pilot_scale * s, den_bc);
        }
    }
    set
}

/// Scenario A SINRs at finite `M` with `p_p = E_p / M^a`.
pub fn scenario_a_sinrs(
    alpha_a: &Array2<f64>,
    alpha_b: &Array2<f64>,
    scen: &ScalingScenario,
    n: usize,
) -> SinrSet {
    let m = alpha_a.nrows() as f64;
    scenario_a_eval(
        alpha_a,
        alpha_b,
        scen.e_p / m.powf(scen.pilot_exp),
        n,
        scen.fixed_p_u,
        scen.fixed_p_r,
    )
}

/// The non-zero limits of scenario A (exponent 1): `E_p` replaces
/// `E_p / M^a`.
pub fn scenario_a_limits(
    alpha_a: &Array2<f64>,
    alpha_b: &Array2<f64>,
    e_p: f64,
    n: usize,
    p_u: f64,
    p_r: f64,
) -> SinrSet {
    scenario_a_eval(alpha_a, alpha_b, e_p, n, p_u, p_r)
}

/// Scenario B asymptotics in the estimate variances at fixed pilot power.
fn scenario_b_eval(ls: &LargeScaleFading, uplink_scale: f64, relay_scale: f64, n: usize) -> SinrSet {
    let (m, w) = ls.phi_a.dim();
    let nf = n as f64;
    let sa = col_sums(&ls.phi_a);
    let sb = col_sums(&ls.phi_b);
    let total: f64 = (0..m)
        .map(|ap| (0..w).map(|j| ls.phi_a[(ap, j)] + ls.phi_b[(ap, j)]).sum::<f64>())
        .sum();

    let mut set = SinrSet {
        mac_pair: vec![0.0; w],
        mac_dir: [vec![0.0; w], vec![0.0; w]],
        bc_dir: [vec![0.0; w], vec![0.0; w]],
    };
    for i in 0..w {
        let den_mac = sa[i] + sb[i];
        set.mac_pair[i] = ratio_or_zero(
            nf * uplink_scale * (sa[i] * sa[i] + sb[i] * sb[i]),
            den_mac,
        );
        set.mac_dir[0][i] = ratio_or_zero(nf * uplink_scale * sa[i] * sa[i], den_mac);
        set.mac_dir[1][i] = ratio_or_zero(nf * uplink_scale * sb[i] * sb[i], den_mac);
        set.bc_dir[0][i] = ratio_or_zero(nf * relay_scale * sa[i] * sa[i], total);
        set.bc_dir[1][i] = ratio_or_zero(nf * relay_scale * sb[i] * sb[i], total);
    }
    set
}

/// Scenario B SINRs at finite `M` with `p_u = E_u / M^b`, `p_r = E_r / M^c`.
/// `ls` carries the estimate variances at the fixed pilot power.
pub fn scenario_b_sinrs(ls: &LargeScaleFading, scen: &ScalingScenario, n: usize) -> SinrSet {
    let m = ls.num_aps() as f64;
    scenario_b_eval(
        ls,
        scen.e_u / m.powf(scen.uplink_exp),
        scen.e_r / m.powf(scen.relay_exp),
        n,
    )
}

/// The non-zero limits of scenario B (`b = c = 1`).
pub fn scenario_b_limits(ls: &LargeScaleFading, e_u: f64, e_r: f64, n: usize) -> SinrSet {
    scenario_b_eval(ls, e_u, e_r, n)
}

/// Scenario C asymptotics in the raw gains.
fn scenario_c_eval(
    alpha_a: &Array2<f64>,
    alpha_b: &Array2<f64>,
    mac_scale: f64,
    bc_scale: f64,
    n: usize,
) -> SinrSet {
    let (m, w) = alpha_a.dim();
    let nf = n as f64;
    let sa = col_sums(alpha_a);
    let sb = col_sums(alpha_b);
    let total: f64 = (0..m)
        .map(|ap| (0..w).map(|j| alpha_a[(ap, j)] + alpha_b[(ap, j)]).sum::<f64>())
        .sum();

    let mut set = SinrSet {
        mac_pair: vec![0.0; w],
        mac_dir: [vec![0.0; w], vec![0.0; w]],
        bc_dir: [vec![0.0; w], vec![0.0; w]],
    };
    for i in 0..w {
        let den_mac = sa[i] + sb[i];
        set.mac_pair[i] =
            ratio_or_zero(nf * mac_scale * (sa[i] * sa[i] + sb[i] * sb[i]), den_mac);
        set.mac_dir[0][i] = ratio_or_zero(nf * mac_scale * sa[i] * sa[i], den_mac);
        set.mac_dir[1][i] = ratio_or_zero(nf * mac_scale * sb[i] * sb[i], den_mac);
        set.bc_dir[0][i] = ratio_or_zero(nf * bc_scale * sa[i] * sa[i], total);
        set.bc_dir[1][i] = ratio_or_zero(nf * bc_scale * sb[i] * sb[i], total);
    }
    set
}

/// Scenario C SINRs at finite `M`. The scales use the exponent sums
/// directly, so equal sums give identical results regardless of the split.
pub fn scenario_c_sinrs(
    alpha_a: &Array2<f64>,
    alpha_b: &Array2<f64>,
    scen: &ScalingScenario,
    n: usize,
) -> SinrSet {
    let m = alpha_a.nrows() as f64;
    scenario_c_eval(
        alpha_a,
        alpha_b,
        scen.e_p * scen.e_u / m.powf(scen.pilot_exp + scen.uplink_exp),
        scen.e_p * scen.e_r / m.powf(scen.pilot_exp + scen.relay_exp),
        n,
    )
}

/// The non-zero limits of scenario C (`a + b = 1`, `a + c = 1`).
pub fn scenario_c_limits(
    alpha_a: &Array2<f64>,
    alpha_b: &Array2<f64>,
    e_p: f64,
    e_u: f64,
    e_r: f64,
    n: usize,
) -> SinrSet {
    scenario_c_eval(alpha_a, alpha_b, e_p * e_u, e_p * e_r, n)
}

/// Exact rate evaluation under a scenario's scaled powers at the given
/// deployment, with unit uplink coefficients and full-power downlink.
pub fn exact_rates_under_scenario(
    alpha_a: &Array2<f64>,
    alpha_b: &Array2<f64>,
    scen: &ScalingScenario,
    tau_p: usize,
    n: usize,
    prelog: f64,
) -> RateReport {
    let m = alpha_a.nrows();
    let (p_p, p_u, p_r) = scen.powers_at(m);
    let ls = LargeScaleFading::from_alpha(alpha_a.clone(), alpha_b.clone(), tau_p, p_p);
    let pa = PowerAllocation::full_power(&ls, n, p_p, p_u, p_r);
    rate_report_with(&ls, &pa, n, prelog)
}

/// Limit behavior of a SINR family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LimitKind {
    Zero,
    Finite,
    Unbounded,
}

/// A classified limit; carries the limiting value exactly when finite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitClass {
    pub kind: LimitKind,
    pub finite_value: Option<f64>,
}

impl LimitClass {
    pub fn zero() -> Self {
        LimitClass {
            kind: LimitKind::Zero,
            finite_value: None,
        }
    }

    pub fn unbounded() -> Self {
        LimitClass {
            kind: LimitKind::Unbounded,
            finite_value: None,
        }
    }

    pub fn finite(value: f64) -> Self {
        LimitClass {
            kind: LimitKind::Finite,
            finite_value: Some(value),
        }
    }
}

/// Exponent-rule classification of a scenario's SINRs and of the pair rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioLimits {
    pub mac: LimitKind,
    pub bc: LimitKind,
    pub pair_rate: LimitKind,
}

fn kind_of_order(order: f64) -> LimitKind {
    if order > 0.0 {
        LimitKind::Unbounded
    } else if order == 0.0 {
        LimitKind::Finite
    } else {
        LimitKind::Zero
    }
}

/// Classify per the growth orders; the pair rate is zero as soon as either
/// phase vanishes, unbounded only when both phases grow.
pub fn classify_limit(scen: &ScalingScenario) -> ScenarioLimits {
    let (mac_order, bc_order) = match scen.kind {
        ScenarioKind::A => (1.0 - scen.pilot_exp, 1.0 - scen.pilot_exp),
        ScenarioKind::B => (1.0 - scen.uplink_exp, 1.0 - scen.relay_exp),
        ScenarioKind::C => (
            1.0 - scen.pilot_exp - scen.uplink_exp,
            1.0 - scen.pilot_exp - scen.relay_exp,
        ),
    };
    let mac = kind_of_order(mac_order);
    let bc = kind_of_order(bc_order);
    let pair_rate = if mac == LimitKind::Zero || bc == LimitKind::Zero {
        LimitKind::Zero
    } else if mac == LimitKind::Unbounded && bc == LimitKind::Unbounded {
        LimitKind::Unbounded
    } else {
        LimitKind::Finite
    };
    ScenarioLimits { mac, bc, pair_rate }
}

fn rate(prelog: f64, gamma: f64) -> f64 {
    prelog * (1.0 + gamma).log2()
}

/// Per-pair limiting rate of one of the six critical-exponent regimes.
///
/// 1. scenario B, `b = 1`, `0 <= c < 1`: access-phase bottleneck.
/// 2. scenario B, `0 <= b < 1`, `c = 1`: broadcast bottleneck, the two
///    directions' rates add.
/// 3. scenario B, `b = c = 1`: min over both phases.
/// 4. scenario C, `a + b = 1`, `b > c >= 0`: access bottleneck in the gains.
/// 5. scenario C, `a + c = 1`, `c > b >= 0`: broadcast bottleneck.
/// 6. scenario C, `a + b = 1`, `b = c`: min over both phases in the gains.
pub fn corollary_rates(
    corollary: u8,
    ls: &LargeScaleFading,
    scen: &ScalingScenario,
    n: usize,
    prelog: f64,
) -> Result<Vec<f64>, ScalingError> {
    let w = ls.num_pairs();
    let err = |condition: &'static str| ScalingError::ConditionViolated {
        corollary,
        condition,
    };
    let require = |ok: bool, condition: &'static str| if ok { Ok(()) } else { Err(err(condition)) };

    let rates_from = |set: &SinrSet, which: Combine| -> Vec<f64> {
        (0..w)
            .map(|i| match which {
                Combine::MacOnly => rate(prelog, set.mac_pair[i]),
                Combine::BcOnly => {
                    rate(prelog, set.bc_dir[0][i]) + rate(prelog, set.bc_dir[1][i])
                }
                Combine::Min => set.rates(prelog).r_pair[i],
            })
            .collect()
    };

    match corollary {
        1 => {
            require(scen.kind == ScenarioKind::B, "scenario B")?;
            require(scen.uplink_exp == 1.0, "uplink exponent = 1")?;
            require(
                (0.0..1.0).contains(&scen.relay_exp),
                "relay exponent in [0, 1)",
            )?;
            let set = scenario_b_limits(ls, scen.e_u, scen.e_r, n);
            Ok(rates_from(&set, Combine::MacOnly))
        }
        2 => {
            require(scen.kind == ScenarioKind::B, "scenario B")?;
            require(
                (0.0..1.0).contains(&scen.uplink_exp),
                "uplink exponent in [0, 1)",
            )?;
            require(scen.relay_exp == 1.0, "relay exponent = 1")?;
            let set = scenario_b_limits(ls, scen.e_u, scen.e_r, n);
            Ok(rates_from(&set, Combine::BcOnly))
        }
        3 => {
            require(scen.kind == ScenarioKind::B, "scenario B")?;
            require(
                scen.uplink_exp == 1.0 && scen.relay_exp == 1.0,
                "uplink and relay exponents = 1",
            )?;
            let set = scenario_b_limits(ls, scen.e_u, scen.e_r, n);
            Ok(rates_from(&set, Combine::Min))
        }
        4 => {
            require(scen.kind == ScenarioKind::C, "scenario C")?;
            require(
                scen.pilot_exp + scen.uplink_exp == 1.0,
                "pilot + uplink exponents = 1",
            )?;
            require(
                scen.uplink_exp > scen.relay_exp && scen.relay_exp >= 0.0,
                "uplink exponent > relay exponent >= 0",
            )?;
            let set = scenario_c_limits(&ls.alpha_a, &ls.alpha_b, scen.e_p, scen.e_u, scen.e_r, n);
            Ok(rates_from(&set, Combine::MacOnly))
        }
        5 => {
            require(scen.kind == ScenarioKind::C, "scenario C")?;
            require(
                scen.pilot_exp + scen.relay_exp == 1.0,
                "pilot + relay exponents = 1",
            )?;
            require(
                scen.relay_exp > scen.uplink_exp && scen.uplink_exp >= 0.0,
                "relay exponent > uplink exponent >= 0",
            )?;
            let set = scenario_c_limits(&ls.alpha_a, &ls.alpha_b, scen.e_p, scen.e_u, scen.e_r, n);
            Ok(rates_from(&set, Combine::BcOnly))
        }
        6 => {
            require(scen.kind == ScenarioKind::C, "scenario C")?;
            require(
                scen.pilot_exp + scen.uplink_exp == 1.0,
                "pilot + uplink exponents = 1",
            )?;
            require(scen.uplink_exp == scen.relay_exp, "equal data exponents")?;
            let set = scenario_c_limits(&ls.alpha_a, &ls.alpha_b, scen.e_p, scen.e_u, scen.e_r, n);
            Ok(rates_from(&set, Combine::Min))
        }
        other => Err(ScalingError::ConditionViolated {
            corollary: other,
            condition: "a corollary index in 1..=6",
        }),
    }
}

enum Combine {
    MacOnly,
    BcOnly,
    Min,
}
