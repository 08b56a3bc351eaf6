//! Sum-SE power allocation under a total budget.
//!
//! The optimization works in scaled uplink variables `eta_tilde = p_u * eta`
//! and the relay budget `p_r`, with the downlink per-AP coefficients held at
//! the full-power shape. The SINR model then has constant coefficients:
//!
//! ```text
//! gamma_mac_pair[i] = (a1[i] ea[i] + a2[i] eb[i]) / c_i,
//!     c_i = sum_j (a3[i][j] ea[j] + a4[i][j] eb[j]) + 1
//! gamma_bc_to_x[i]  = p_r / (p_r b_x[i] + c_x[i])
//! ```
//!
//! The sum-SE maximization is a complementary GP; it is solved by successive
//! convexification: at each iterate the objective factor `1 + gamma` is
//! fitted by a monomial, the numerator posynomial is bounded by its weighted
//! geometric mean, and `x + y + xy` is bounded by a monomial fit, giving a
//! GP restricted to a trust region around the iterate. Every accepted
//! iterate can only improve the true objective.
//!
//! The `a3`/`a4` interference coefficients default to the exact separable
//! form `sum_m alpha[(m,j)] (phi_a[(m,i)] + phi_b[(m,i)]) / S_i`, which makes
//! the model identical to the closed-form rate pipeline; the decoupled form
//! `sum_m alpha[(m,j)] / S_i` (which splits the AP sum) is available behind
//! a flag for comparison.

use ndarray::Array2;
use rayon::prelude::*;
use thiserror::Error;

use crate::config::SystemConfig;
use crate::fading::LargeScaleFading;
use crate::gp::{
    solve_gp_from, ConstraintKind, GpConstraint, GpError, GpProblem, Monomial, Posynomial,
};
use crate::power::full_power_downlink;

#[derive(Debug, Error)]
pub enum AllocError {
    #[error("pair {0} has zero estimate statistics on both sides")]
    DegeneratePair(usize),
    #[error("{context} requires strictly positive values")]
    NonPositivePoint { context: &'static str },
    #[error("the brute-force oracle handles at most 2 pairs, got {0}")]
    TooManyPairs(usize),
    #[error("the brute-force oracle handles at most 50 grid points per axis, got {0}")]
    GridTooLarge(usize),
    #[error("power allocation is infeasible: {0}")]
    Infeasible(String),
    #[error(transparent)]
    Gp(#[from] GpError),
}

/// Interference-coefficient variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CoefficientForm {
    /// Exact separable form; the model equals the closed-form pipeline.
    #[default]
    Exact,
    /// Decoupled form splitting the AP sum; kept for comparison runs.
    Decoupled,
}

/// Constant coefficients of the SINR model at a fixed downlink shape.
#[derive(Debug, Clone)]
pub struct ModelCoefficients {
    pub a1: Vec<f64>,
    pub a2: Vec<f64>,
    pub a3: Array2<f64>,
    pub a4: Array2<f64>,
    pub b_a: Vec<f64>,
    pub b_b: Vec<f64>,
    pub c_a: Vec<f64>,
    pub c_b: Vec<f64>,
    pub form: CoefficientForm,
}

/// Coefficients of the SINR model from the large-scale statistics and a
/// fixed downlink coefficient shape.
pub fn build_coefficients(
    ls: &LargeScaleFading,
    dl_shape: (&Array2<f64>, &Array2<f64>),
    n: usize,
    form: CoefficientForm,
) -> Result<ModelCoefficients, AllocError> {
    let (m, w) = ls.phi_a.dim();
    let nf = n as f64;
    let (eta_a_dl, eta_b_dl) = dl_shape;

    let mut out = ModelCoefficients {
        a1: vec![0.0; w],
        a2: vec![0.0; w],
        a3: Array2::zeros((w, w)),
        a4: Array2::zeros((w, w)),
        b_a: vec![0.0; w],
        b_b: vec![0.0; w],
        c_a: vec![0.0; w],
        c_b: vec![0.0; w],
        form,
    };

    // Per-AP downlink load of the fixed shape (without the antenna factor).
    let ap_load: Vec<f64> = (0..m)
        .map(|ap| {
            (0..w)
                .map(|j| {
                    eta_a_dl[(ap, j)] * ls.phi_b[(ap, j)] + eta_b_dl[(ap, j)] * ls.phi_a[(ap, j)]
                })
                .sum()
        })
        .collect();
    let load: f64 = ap_load.iter().sum();

    for i in 0..w {
        let s_i: f64 = (0..m).map(|ap| ls.phi_a[(ap, i)] + ls.phi_b[(ap, i)]).sum();
        if s_i <= 0.0 {
            return Err(AllocError::DegeneratePair(i));
        }
        let sum_phi_a: f64 = (0..m).map(|ap| ls.phi_a[(ap, i)]).sum();
        let sum_phi_b: f64 = (0..m).map(|ap| ls.phi_b[(ap, i)]).sum();
        out.a1[i] = nf * sum_phi_a * sum_phi_a / s_i;
        out.a2[i] = nf * sum_phi_b * sum_phi_b / s_i;
        for j in 0..w {
            let (mut num_a, mut num_b) = (0.0, 0.0);
            for ap in 0..m {
                let weight = match form {
                    CoefficientForm::Exact => ls.phi_a[(ap, i)] + ls.phi_b[(ap, i)],
                    CoefficientForm::Decoupled => 1.0,
                };
                num_a += ls.alpha_a[(ap, j)] * weight;
                num_b += ls.alpha_b[(ap, j)] * weight;
            }
            out.a3[(i, j)] = num_a / s_i;
            out.a4[(i, j)] = num_b / s_i;
        }

        // Broadcast coefficients from the fixed downlink shape.
        let beam_a: f64 = (0..m)
            .map(|ap| eta_b_dl[(ap, i)].sqrt() * ls.phi_a[(ap, i)])
            .sum();
        let beam_b: f64 = (0..m)
            .map(|ap| eta_a_dl[(ap, i)].sqrt() * ls.phi_b[(ap, i)])
            .sum();
        if beam_a <= 0.0 || beam_b <= 0.0 {
            return Err(AllocError::DegeneratePair(i));
        }
        let weighted = |alpha: &Array2<f64>| -> f64 {
            (0..m).map(|ap| alpha[(ap, i)] * ap_load[ap]).sum()
        };
        out.b_a[i] = weighted(&ls.alpha_a) / (nf * beam_a * beam_a);
        out.b_b[i] = weighted(&ls.alpha_b) / (nf * beam_b * beam_b);
        out.c_a[i] = load / (nf * beam_a * beam_a);
        out.c_b[i] = load / (nf * beam_b * beam_b);
    }
    Ok(out)
}

/// Model SINRs at an allocation.
#[derive(Debug, Clone)]
pub struct ModelGammas {
    pub mac_pair: Vec<f64>,
    pub mac_a: Vec<f64>,
    pub mac_b: Vec<f64>,
    pub bc_to_a: Vec<f64>,
    pub bc_to_b: Vec<f64>,
    /// Direction A->B: min of A's access SINR and B's broadcast SINR.
    pub dir_a: Vec<f64>,
    pub dir_b: Vec<f64>,
    /// Pair SINR: `min(mac_pair, dir_a + dir_b + dir_a dir_b)`.
    pub pair: Vec<f64>,
}

pub fn model_gammas(
    coeffs: &ModelCoefficients,
    eta_a: &[f64],
    eta_b: &[f64],
    p_r: f64,
) -> ModelGammas {
    let w = coeffs.a1.len();
    let mut g = ModelGammas {
        mac_pair: vec![0.0; w],
        mac_a: vec![0.0; w],
        mac_b: vec![0.0; w],
        bc_to_a: vec![0.0; w],
        bc_to_b: vec![0.0; w],
        dir_a: vec![0.0; w],
        dir_b: vec![0.0; w],
        pair: vec![0.0; w],
    };
    for i in 0..w {
        let c_i = 1.0
            + (0..w)
                .map(|j| coeffs.a3[(i, j)] * eta_a[j] + coeffs.a4[(i, j)] * eta_b[j])
                .sum::<f64>();
        g.mac_a[i] = coeffs.a1[i] * eta_a[i] / c_i;
        g.mac_b[i] = coeffs.a2[i] * eta_b[i] / c_i;
        g.mac_pair[i] = g.mac_a[i] + g.mac_b[i];
        g.bc_to_a[i] = if p_r > 0.0 {
            p_r / (p_r * coeffs.b_a[i] + coeffs.c_a[i])
        } else {
            0.0
        };
        g.bc_to_b[i] = if p_r > 0.0 {
            p_r / (p_r * coeffs.b_b[i] + coeffs.c_b[i])
        } else {
            0.0
        };
        g.dir_a[i] = g.mac_a[i].min(g.bc_to_b[i]);
        g.dir_b[i] = g.mac_b[i].min(g.bc_to_a[i]);
        g.pair[i] = g.mac_pair[i].min(g.dir_a[i] + g.dir_b[i] + g.dir_a[i] * g.dir_b[i]);
    }
    g
}

/// True objective of the model at an allocation, in bits/s/Hz.
/// Allocation-free: the grid oracle calls this in a tight loop.
pub fn model_sum_se(
    coeffs: &ModelCoefficients,
    eta_a: &[f64],
    eta_b: &[f64],
    p_r: f64,
    prelog: f64,
) -> f64 {
    let w = coeffs.a1.len();
    let mut sum = 0.0;
    for i in 0..w {
        let mut c_i = 1.0;
        for j in 0..w {
            c_i += coeffs.a3[(i, j)] * eta_a[j] + coeffs.a4[(i, j)] * eta_b[j];
        }
        let mac_a = coeffs.a1[i] * eta_a[i] / c_i;
        let mac_b = coeffs.a2[i] * eta_b[i] / c_i;
        let bc_to_a = if p_r > 0.0 {
            p_r / (p_r * coeffs.b_a[i] + coeffs.c_a[i])
        } else {
            0.0
        };
        let bc_to_b = if p_r > 0.0 {
            p_r / (p_r * coeffs.b_b[i] + coeffs.c_b[i])
        } else {
            0.0
        };
        let dir_a = mac_a.min(bc_to_b);
        let dir_b = mac_b.min(bc_to_a);
        let pair = (mac_a + mac_b).min(dir_a + dir_b + dir_a * dir_b);
        sum += prelog * (1.0 + pair).log2();
    }
    sum
}

/// Monomial fit of `1 + gamma` at `gamma0`: exponents `mu = g/(g+1)` and
/// coefficients `delta = g^-mu (1+g)`, exact at the expansion point.
pub fn monomial_objective_fit(gamma0: &[f64]) -> Result<(Vec<f64>, Vec<f64>), AllocError> {
    if gamma0.iter().any(|&g| !(g > 0.0)) {
        return Err(AllocError::NonPositivePoint {
            context: "objective fit",
        });
    }
    let mu: Vec<f64> = gamma0.iter().map(|&g| g / (g + 1.0)).collect();
    let delta: Vec<f64> = gamma0
        .iter()
        .zip(&mu)
        .map(|(&g, &m)| g.powf(-m) * (1.0 + g))
        .collect();
    Ok((delta, mu))
}

/// Geometric-mean weights for a two-term posynomial evaluated at the
/// expansion point: `(ta/(ta+tb), tb/(ta+tb))`. The resulting monomial
/// `(a x / w_a)^w_a (b y / w_b)^w_b` lower-bounds `a x + b y` everywhere and
/// is tight at the point.
pub fn am_gm_split(term_a: f64, term_b: f64) -> Result<(f64, f64), AllocError> {
    if term_a < 0.0 || term_b < 0.0 || term_a + term_b <= 0.0 {
        return Err(AllocError::NonPositivePoint {
            context: "geometric-mean split",
        });
    }
    let wa = term_a / (term_a + term_b);
    Ok((wa, 1.0 - wa))
}

/// Monomial fit `zeta x^la y^lb` of `x + y + xy` at `(x0, y0)`; a global
/// lower bound, tight at the point.
pub fn xy_monomial_fit(x0: f64, y0: f64) -> Result<(f64, f64, f64), AllocError> {
    if !(x0 > 0.0) || !(y0 > 0.0) {
        return Err(AllocError::NonPositivePoint {
            context: "product fit",
        });
    }
    let f = x0 + y0 + x0 * y0;
    let la = x0 * (1.0 + y0) / f;
    let lb = y0 * (1.0 + x0) / f;
    let zeta = f * x0.powf(-la) * y0.powf(-lb);
    Ok((zeta, la, lb))
}

/// An SCA iterate: scaled uplink powers, relay power, and the SINR
/// expansion point.
#[derive(Debug, Clone)]
pub struct IteratePoint {
    pub eta_a: Vec<f64>,
    pub eta_b: Vec<f64>,
    pub p_r: f64,
    pub gamma: Vec<f64>,
    pub gamma_a: Vec<f64>,
    pub gamma_b: Vec<f64>,
}

impl IteratePoint {
    fn strictly_positive(&self) -> bool {
        self.eta_a.iter().all(|&v| v > 0.0)
            && self.eta_b.iter().all(|&v| v > 0.0)
            && self.p_r > 0.0
            && self.gamma.iter().all(|&v| v > 0.0)
            && self.gamma_a.iter().all(|&v| v > 0.0)
            && self.gamma_b.iter().all(|&v| v > 0.0)
    }
}

/// Variable layout of the subproblem.
#[derive(Debug, Clone, Copy)]
struct VarMap {
    w: usize,
}

impl VarMap {
    fn eta_a(&self, i: usize) -> usize {
        i
    }
    fn eta_b(&self, i: usize) -> usize {
        self.w + i
    }
    fn p_r(&self) -> usize {
        2 * self.w
    }
    fn gamma(&self, i: usize) -> usize {
        2 * self.w + 1 + i
    }
    fn gamma_a(&self, i: usize) -> usize {
        3 * self.w + 1 + i
    }
    fn gamma_b(&self, i: usize) -> usize {
        4 * self.w + 1 + i
    }
    fn num_vars(&self) -> usize {
        5 * self.w + 1
    }
}

/// QoS SINR threshold `2^(2 tau_c r_min / (tau_c - tau_p)) - 1`.
pub fn qos_threshold(r_min: f64, tau_c: usize, tau_p: usize) -> f64 {
    2f64.powf(2.0 * tau_c as f64 * r_min / (tau_c as f64 - tau_p as f64)) - 1.0
}

/// Emit the GP restriction around `point`: monomialized SINR couplings,
/// trust regions on the uplink powers and all SINR variables (the relay
/// power carries no approximation and no trust region), the budget, and the
/// minimum-rate constraints when `r_min > 0`.
pub fn build_gp_subproblem(
    coeffs: &ModelCoefficients,
    point: &IteratePoint,
    theta: f64,
    budget: f64,
    r_min: f64,
    cfg: &SystemConfig,
) -> Result<GpProblem, AllocError> {
    if !point.strictly_positive() {
        return Err(AllocError::NonPositivePoint {
            context: "subproblem expansion point",
        });
    }
    if !(theta > 1.0) {
        return Err(AllocError::Infeasible(format!(
            "trust-region parameter must exceed 1, got {theta}"
        )));
    }
    let w = coeffs.a1.len();
    let vm = VarMap { w };
    let (_, mu) = monomial_objective_fit(&point.gamma)?;

    let mut constraints: Vec<GpConstraint> = Vec::with_capacity(17 * w + 1);
    fn trust_region(constraints: &mut Vec<GpConstraint>, theta: f64, var: usize, center: f64) {
        constraints.push(GpConstraint {
            posy: Posynomial {
                terms: vec![Monomial::new(center / theta, vec![(var, -1.0)])],
            },
            kind: ConstraintKind::TrustRegion,
        });
        constraints.push(GpConstraint {
            posy: Posynomial {
                terms: vec![Monomial::new(1.0 / (theta * center), vec![(var, 1.0)])],
            },
            kind: ConstraintKind::TrustRegion,
        });
    }
    for i in 0..w {
        trust_region(&mut constraints, theta, vm.eta_a(i), point.eta_a[i]);
        trust_region(&mut constraints, theta, vm.eta_b(i), point.eta_b[i]);
        trust_region(&mut constraints, theta, vm.gamma(i), point.gamma[i]);
        trust_region(&mut constraints, theta, vm.gamma_a(i), point.gamma_a[i]);
        trust_region(&mut constraints, theta, vm.gamma_b(i), point.gamma_b[i]);
    }

    for i in 0..w {
        let (wa, wb) = am_gm_split(coeffs.a1[i] * point.eta_a[i], coeffs.a2[i] * point.eta_b[i])?;
        // Monomial lower bound of the access numerator:
        // (a1 ea / wa)^wa (a2 eb / wb)^wb = K * ea^wa * eb^wb.
        let mut k = 1.0;
        let mut bound_exps: Vec<(usize, f64)> = Vec::new();
        if wa > 0.0 {
            k *= (coeffs.a1[i] / wa).powf(wa);
            bound_exps.push((vm.eta_a(i), wa));
        }
        if wb > 0.0 {
            k *= (coeffs.a2[i] / wb).powf(wb);
            bound_exps.push((vm.eta_b(i), wb));
        }

        // c_i * gamma_i / bound <= 1, expanded term by term.
        let mut terms: Vec<Monomial> = Vec::with_capacity(2 * w + 1);
        let base_exps = |extra: Vec<(usize, f64)>| -> Vec<(usize, f64)> {
            let mut e = vec![(vm.gamma(i), 1.0)];
            e.extend(bound_exps.iter().map(|&(v, p)| (v, -p)));
            e.extend(extra);
            e
        };
        for j in 0..w {
            if coeffs.a3[(i, j)] > 0.0 {
                terms.push(Monomial::new(
                    coeffs.a3[(i, j)] / k,
                    base_exps(vec![(vm.eta_a(j), 1.0)]),
                ));
            }
            if coeffs.a4[(i, j)] > 0.0 {
                terms.push(Monomial::new(
                    coeffs.a4[(i, j)] / k,
                    base_exps(vec![(vm.eta_b(j), 1.0)]),
                ));
            }
        }
        terms.push(Monomial::new(1.0 / k, base_exps(vec![])));
        constraints.push(GpConstraint {
            posy: Posynomial { terms },
            kind: ConstraintKind::MacCoupling,
        });

        // gamma_i <= zeta gamma_a^la gamma_b^lb (monomialized x + y + xy).
        let (zeta, la, lb) = xy_monomial_fit(point.gamma_a[i], point.gamma_b[i])?;
        constraints.push(GpConstraint {
            posy: Posynomial {
                terms: vec![Monomial::new(
                    1.0 / zeta,
                    vec![
                        (vm.gamma(i), 1.0),
                        (vm.gamma_a(i), -la),
                        (vm.gamma_b(i), -lb),
                    ],
                )],
            },
            kind: ConstraintKind::RateCoupling,
        });

        // Access-phase bounds on the direction SINRs (exact posynomials).
        for (gvar, a_lead, evar) in [
            (vm.gamma_a(i), coeffs.a1[i], vm.eta_a(i)),
            (vm.gamma_b(i), coeffs.a2[i], vm.eta_b(i)),
        ] {
            let mut terms: Vec<Monomial> = Vec::with_capacity(2 * w + 1);
            for j in 0..w {
                if coeffs.a3[(i, j)] > 0.0 {
                    terms.push(Monomial::new(
                        coeffs.a3[(i, j)] / a_lead,
                        vec![(gvar, 1.0), (vm.eta_a(j), 1.0), (evar, -1.0)],
                    ));
                }
                if coeffs.a4[(i, j)] > 0.0 {
                    terms.push(Monomial::new(
                        coeffs.a4[(i, j)] / a_lead,
                        vec![(gvar, 1.0), (vm.eta_b(j), 1.0), (evar, -1.0)],
                    ));
                }
            }
            terms.push(Monomial::new(1.0 / a_lead, vec![(gvar, 1.0), (evar, -1.0)]));
            constraints.push(GpConstraint {
                posy: Posynomial { terms },
                kind: ConstraintKind::MacDirection,
            });
        }

        // Broadcast bounds: gamma_a <= p_r / (p_r b_b + c_b) and vice versa.
        for (gvar, b, c) in [
            (vm.gamma_a(i), coeffs.b_b[i], coeffs.c_b[i]),
            (vm.gamma_b(i), coeffs.b_a[i], coeffs.c_a[i]),
        ] {
            constraints.push(GpConstraint {
                posy: Posynomial {
                    terms: vec![
                        Monomial::new(b, vec![(gvar, 1.0)]),
                        Monomial::new(c, vec![(gvar, 1.0), (vm.p_r(), -1.0)]),
                    ],
                },
                kind: ConstraintKind::BcCoupling,
            });
        }
    }

    // Total power budget.
    let mut budget_terms: Vec<Monomial> = Vec::with_capacity(2 * w + 1);
    for i in 0..w {
        budget_terms.push(Monomial::new(1.0 / budget, vec![(vm.eta_a(i), 1.0)]));
        budget_terms.push(Monomial::new(1.0 / budget, vec![(vm.eta_b(i), 1.0)]));
    }
    budget_terms.push(Monomial::new(1.0 / budget, vec![(vm.p_r(), 1.0)]));
    constraints.push(GpConstraint {
        posy: Posynomial {
            terms: budget_terms,
        },
        kind: ConstraintKind::Budget,
    });

    // Minimum pair rate.
    let thresh = qos_threshold(r_min, cfg.coherence_symbols, cfg.pilot_symbols);
    if thresh > 0.0 {
        for i in 0..w {
            constraints.push(GpConstraint {
                posy: Posynomial {
                    terms: vec![Monomial::new(thresh, vec![(vm.gamma(i), -1.0)])],
                },
                kind: ConstraintKind::MinRate,
            });
        }
    }

    // Objective: prod gamma_i^-mu_i.
    let objective = Monomial::new(
        1.0,
        (0..w).map(|i| (vm.gamma(i), -mu[i])).collect::<Vec<_>>(),
    );

    Ok(GpProblem {
        num_vars: vm.num_vars(),
        objective,
        constraints,
    })
}

#[derive(Debug, Clone)]
pub struct Algorithm1Options {
    /// Trust-region parameter (> 1). Smaller is more accurate, slower.
    pub theta: f64,
    /// Convergence tolerance on the largest variable change.
    pub epsilon: f64,
    pub max_iter: usize,
    /// Minimum per-pair rate in bits/s/Hz (0 disables the constraint).
    pub r_min: f64,
    /// KKT tolerance handed to the GP solver.
    pub gp_tol: f64,
    pub form: CoefficientForm,
}

impl Default for Algorithm1Options {
    fn default() -> Self {
        Algorithm1Options {
            theta: 1.1,
            epsilon: 1e-3,
            max_iter: 50,
            r_min: 0.0,
            gp_tol: 1e-8,
            form: CoefficientForm::Exact,
        }
    }
}

#[derive(Debug, Clone)]
pub struct AllocationResult {
    pub eta_tilde_a: Vec<f64>,
    pub eta_tilde_b: Vec<f64>,
    pub p_r: f64,
    pub gamma: Vec<f64>,
    pub gamma_a: Vec<f64>,
    pub gamma_b: Vec<f64>,
    pub sum_se: f64,
    pub iterations: usize,
    pub converged: bool,
    /// True model sum SE at every accepted iterate, starting with the
    /// uniform initialization.
    pub se_trajectory: Vec<f64>,
    /// Set when the run ended on a subproblem failure.
    pub diagnostic: Option<String>,
}

/// Pull-back from the GP boundary so the expansion point is strictly
/// interior for the barrier.
const START_SHRINK: f64 = 1e-5;

fn point_from_model(coeffs: &ModelCoefficients, eta_a: Vec<f64>, eta_b: Vec<f64>, p_r: f64) -> IteratePoint {
    let g = model_gammas(coeffs, &eta_a, &eta_b, p_r);
    IteratePoint {
        eta_a,
        eta_b,
        p_r,
        gamma: g.pair,
        gamma_a: g.dir_a,
        gamma_b: g.dir_b,
    }
}

/// Successive GP approximation of the sum-SE maximization under the budget
/// `p_u sum(eta) + p_r <= budget` (in scaled variables,
/// `sum(eta_tilde) + p_r <= budget`). Starts from the uniform split
/// `eta_tilde = budget/(4W)`, `p_r = budget/2`.
pub fn run_algorithm1(
    ls: &LargeScaleFading,
    cfg: &SystemConfig,
    budget: f64,
    opts: &Algorithm1Options,
) -> Result<AllocationResult, AllocError> {
    if !(budget > 0.0) {
        return Err(AllocError::Infeasible("budget must be positive".into()));
    }
    let w = ls.num_pairs();
    let n = cfg.antennas_per_ap;
    let prelog = cfg.prelog();
    let dl_shape = full_power_downlink(ls, n);
    let coeffs = build_coefficients(ls, (&dl_shape.0, &dl_shape.1), n, opts.form)?;

    let uniform = budget / (4.0 * w as f64);
    let mut point = point_from_model(&coeffs, vec![uniform; w], vec![uniform; w], budget / 2.0);
    let mut best_point = point.clone();
    let mut best_se = model_sum_se(&coeffs, &point.eta_a, &point.eta_b, point.p_r, prelog);
    let mut trajectory = vec![best_se];
    let mut converged = false;
    let mut diagnostic = None;
    let mut iterations = 0;

    let vm = VarMap { w };
    for k in 0..opts.max_iter {
        iterations = k + 1;
        let gp = build_gp_subproblem(&coeffs, &point, opts.theta, budget, opts.r_min, cfg)?;

        let mut start = vec![0.0; vm.num_vars()];
        let s = 1.0 - START_SHRINK;
        for i in 0..w {
            start[vm.eta_a(i)] = point.eta_a[i] * s;
            start[vm.eta_b(i)] = point.eta_b[i] * s;
            start[vm.gamma(i)] = point.gamma[i] * s * s;
            start[vm.gamma_a(i)] = point.gamma_a[i] * s;
            start[vm.gamma_b(i)] = point.gamma_b[i] * s;
        }
        start[vm.p_r()] = point.p_r * s;

        let sol = match solve_gp_from(&gp, &start, opts.gp_tol) {
            Ok(sol) => sol,
            Err(GpError::Infeasible { best_violation }) => {
                if k == 0 {
                    return Err(AllocError::Infeasible(format!(
                        "first subproblem infeasible (violation {best_violation:.3e}); \
                         the minimum-rate target cannot be met within the budget"
                    )));
                }
                diagnostic = Some(format!(
                    "subproblem infeasible at iteration {k} (violation {best_violation:.3e})"
                ));
                break;
            }
            Err(e) => {
                if k == 0 {
                    return Err(e.into());
                }
                diagnostic = Some(format!("subproblem failed at iteration {k}: {e}"));
                break;
            }
        };

        let next = IteratePoint {
            eta_a: (0..w).map(|i| sol.x[vm.eta_a(i)]).collect(),
            eta_b: (0..w).map(|i| sol.x[vm.eta_b(i)]).collect(),
            p_r: sol.x[vm.p_r()],
            gamma: (0..w).map(|i| sol.x[vm.gamma(i)]).collect(),
            gamma_a: (0..w).map(|i| sol.x[vm.gamma_a(i)]).collect(),
            gamma_b: (0..w).map(|i| sol.x[vm.gamma_b(i)]).collect(),
        };

        let se = model_sum_se(&coeffs, &next.eta_a, &next.eta_b, next.p_r, prelog);
        if se < best_se - 1e-9 {
            // The restriction can no longer improve the true objective;
            // stop at the incumbent.
            converged = true;
            break;
        }

        let max_change = (0..w)
            .map(|i| {
                (next.eta_a[i] - point.eta_a[i])
                    .abs()
                    .max((next.eta_b[i] - point.eta_b[i]).abs())
                    .max((next.gamma[i] - point.gamma[i]).abs())
                    .max((next.gamma_a[i] - point.gamma_a[i]).abs())
                    .max((next.gamma_b[i] - point.gamma_b[i]).abs())
            })
            .fold(0.0, f64::max);

        if se >= best_se {
            best_se = se;
            best_point = next.clone();
        }
        trajectory.push(se);
        point = next;

        if max_change < opts.epsilon {
            converged = true;
            break;
        }
    }

    let g = model_gammas(&coeffs, &best_point.eta_a, &best_point.eta_b, best_point.p_r);
    Ok(AllocationResult {
        eta_tilde_a: best_point.eta_a,
        eta_tilde_b: best_point.eta_b,
        p_r: best_point.p_r,
        gamma: g.pair,
        gamma_a: g.dir_a,
        gamma_b: g.dir_b,
        sum_se: best_se,
        iterations,
        converged,
        se_trajectory: trajectory,
        diagnostic,
    })
}

#[derive(Debug, Clone)]
pub struct OracleResult {
    pub sum_se: f64,
    pub eta_a: Vec<f64>,
    pub eta_b: Vec<f64>,
    pub p_r: f64,
}

/// Exhaustive grid search over `(eta_tilde, p_r)` on a log-spaced grid under
/// the budget, for up to two pairs. The uniform split is always included as
/// a candidate. Intended as a validation oracle for [`run_algorithm1`].
pub fn brute_force_oracle(
    ls: &LargeScaleFading,
    cfg: &SystemConfig,
    budget: f64,
    grid_points: usize,
) -> Result<OracleResult, AllocError> {
    let w = ls.num_pairs();
    if w > 2 {
        return Err(AllocError::TooManyPairs(w));
    }
    if grid_points > 50 {
        return Err(AllocError::GridTooLarge(grid_points));
    }
    let n = cfg.antennas_per_ap;
    let prelog = cfg.prelog();
    let dl_shape = full_power_downlink(ls, n);
    let coeffs = build_coefficients(ls, (&dl_shape.0, &dl_shape.1), n, CoefficientForm::Exact)?;

    // Log-spaced axis over four decades up to the full budget.
    let axis: Vec<f64> = (0..grid_points)
        .map(|k| budget * 10f64.powf(-4.0 * (1.0 - k as f64 / (grid_points - 1) as f64)))
        .collect();

    let dims = 2 * w; // uplink axes; p_r is the innermost axis
    let best = axis
        .par_iter()
        .enumerate()
        .map(|(first_idx, &first)| {
            let mut local_best = (f64::NEG_INFINITY, vec![0usize; dims], 0usize);
            let mut assign = vec![0usize; dims];
            assign[0] = first_idx;
            search_rec(
                &coeffs,
                &axis,
                budget,
                prelog,
                1,
                first,
                &mut assign,
                &mut local_best,
            );
            local_best
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(
            (f64::NEG_INFINITY, vec![0usize; dims], 0usize),
            |acc, item| if item.0 > acc.0 { item } else { acc },
        );

    let unpack = |assign: &[usize], p_r_idx: usize| -> (Vec<f64>, Vec<f64>, f64) {
        let eta_a: Vec<f64> = (0..w).map(|i| axis[assign[i]]).collect();
        let eta_b: Vec<f64> = (0..w).map(|i| axis[assign[w + i]]).collect();
        (eta_a, eta_b, axis[p_r_idx])
    };
    let (mut eta_a, mut eta_b, mut p_r) = unpack(&best.1, best.2);
    let mut sum_se = best.0;

    // The uniform split competes as an off-grid candidate.
    let uniform = budget / (4.0 * w as f64);
    let se_uniform = model_sum_se(
        &coeffs,
        &vec![uniform; w],
        &vec![uniform; w],
        budget / 2.0,
        prelog,
    );
    if se_uniform > sum_se {
        sum_se = se_uniform;
        eta_a = vec![uniform; w];
        eta_b = vec![uniform; w];
        p_r = budget / 2.0;
    }

    Ok(OracleResult {
        sum_se,
        eta_a,
        eta_b,
        p_r,
    })
}

#[allow(clippy::too_many_arguments)]
fn search_rec(
    coeffs: &ModelCoefficients,
    axis: &[f64],
    budget: f64,
    prelog: f64,
    depth: usize,
    partial: f64,
    assign: &mut [usize],
    best: &mut (f64, Vec<usize>, usize),
) {
    let dims = assign.len();
    let w = dims / 2;
    if partial > budget {
        return;
    }
    if depth == dims {
        // Innermost axis: the relay power takes any grid value within the
        // remaining budget (axis values ascend, so stop at the first
        // overflow).
        let mut eta_a = Vec::with_capacity(w);
        let mut eta_b = Vec::with_capacity(w);
        for i in 0..w {
            eta_a.push(axis[assign[i]]);
        }
        for i in 0..w {
            eta_b.push(axis[assign[w + i]]);
        }
        for (k, &p_r) in axis.iter().enumerate() {
            if partial + p_r > budget * (1.0 + 1e-12) {
                break;
            }
            let se = model_sum_se(coeffs, &eta_a, &eta_b, p_r, prelog);
            if se > best.0 {
                *best = (se, assign.to_vec(), k);
            }
        }
        return;
    }
    for k in 0..axis.len() {
        assign[depth] = k;
        let next = partial + axis[k];
        if next > budget {
            break;
        }
        search_rec(coeffs, axis, budget, prelog, depth + 1, next, assign, best);
    }
}
