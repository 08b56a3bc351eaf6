//! A small geometric-programming solver.
//!
//! A GP minimizes a monomial subject to posynomial constraints `<= 1` over
//! positive variables. Under `y = ln x` the objective becomes linear and
//! every constraint a log-sum-exp function, so the problem is smooth and
//! convex; it is solved here with a log-barrier interior-point scheme
//! (damped Newton inner iterations, Armijo backtracking, barrier parameter
//! reduced by a factor of 10 per stage).
//!
//! Feasibility phase: when the starting point violates a constraint, the
//! auxiliary GP `min s  s.t.  posy_i(x)/s <= 1` is solved first; its `s`
//! variable is an ordinary positive GP variable, so the same machinery
//! applies. A minimum at `s >= 1` is an infeasibility certificate.

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

/// `coeff * prod_k x_k^exponents[k]`, exponents sparse over variable indices.
#[derive(Debug, Clone)]
pub struct Monomial {
    pub coeff: f64,
    pub exponents: Vec<(usize, f64)>,
}

impl Monomial {
    pub fn new(coeff: f64, exponents: Vec<(usize, f64)>) -> Monomial {
        let mut m = Monomial { coeff, exponents };
        m.normalize();
        m
    }

    pub fn constant(coeff: f64) -> Monomial {
        Monomial {
            coeff,
            exponents: Vec::new(),
        }
    }

    /// Merge duplicate variable indices and drop zero exponents.
    fn normalize(&mut self) {
        self.exponents.sort_by_key(|&(v, _)| v);
        let mut merged: Vec<(usize, f64)> = Vec::with_capacity(self.exponents.len());
        for &(v, e) in &self.exponents {
            match merged.last_mut() {
                Some((lv, le)) if *lv == v => *le += e,
                _ => merged.push((v, e)),
            }
        }
        merged.retain(|&(_, e)| e != 0.0);
        self.exponents = merged;
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.coeff
            * self
                .exponents
                .iter()
                .map(|&(v, e)| x[v].powf(e))
                .product::<f64>()
    }
}

#[derive(Debug, Clone, Default)]
pub struct Posynomial {
    pub terms: Vec<Monomial>,
}

impl Posynomial {
    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms.iter().map(|t| t.eval(x)).sum()
    }
}

/// Which model family a constraint came from; used for reporting and for
/// counting, not by the solver.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstraintKind {
    TrustRegion,
    MacCoupling,
    RateCoupling,
    MacDirection,
    BcCoupling,
    Budget,
    MinRate,
    Other,
}

#[derive(Debug, Clone)]
pub struct GpConstraint {
    pub posy: Posynomial,
    pub kind: ConstraintKind,
}

#[derive(Debug, Clone)]
pub struct GpProblem {
    pub num_vars: usize,
    pub objective: Monomial,
    pub constraints: Vec<GpConstraint>,
}

impl GpProblem {
    pub fn validate(&self) -> Result<(), GpError> {
        let check_mono = |m: &Monomial| -> Result<(), GpError> {
            if !(m.coeff > 0.0) || !m.coeff.is_finite() {
                return Err(GpError::BadProblem(format!(
                    "monomial coefficients must be positive and finite, got {}",
                    m.coeff
                )));
            }
            for &(v, e) in &m.exponents {
                if v >= self.num_vars {
                    return Err(GpError::BadProblem(format!(
                        "variable index {v} out of range ({} vars)",
                        self.num_vars
                    )));
                }
                if !e.is_finite() {
                    return Err(GpError::BadProblem("non-finite exponent".into()));
                }
            }
            Ok(())
        };
        check_mono(&self.objective)?;
        for c in &self.constraints {
            if c.posy.terms.is_empty() {
                return Err(GpError::BadProblem("empty posynomial constraint".into()));
            }
            for t in &c.posy.terms {
                check_mono(t)?;
            }
        }
        Ok(())
    }

    pub fn count_kind(&self, kind: ConstraintKind) -> usize {
        self.constraints.iter().filter(|c| c.kind == kind).count()
    }

    /// Largest constraint value at `x` (feasible iff `<= 1`).
    pub fn max_constraint(&self, x: &[f64]) -> f64 {
        self.constraints
            .iter()
            .map(|c| c.posy.eval(x))
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone)]
pub struct GpSolution {
    pub x: Vec<f64>,
    pub objective: f64,
    pub newton_iterations: usize,
    /// Largest posynomial constraint value at the solution.
    pub max_constraint: f64,
}

#[derive(Debug, Error)]
pub enum GpError {
    #[error("malformed GP: {0}")]
    BadProblem(String),
    #[error("GP is infeasible (best constraint value {best_violation})")]
    Infeasible { best_violation: f64 },
    #[error("GP solver did not converge within the iteration budget")]
    MaxIterations,
    #[error("numerical breakdown in the Newton step: {0}")]
    Numerical(String),
}

/// Log-domain posynomial: terms `(ln c_t, sparse exponents)`.
struct LogPosy {
    terms: Vec<(f64, Vec<(usize, f64)>)>,
}

impl LogPosy {
    fn from(posy: &Posynomial) -> LogPosy {
        LogPosy {
            terms: posy
                .terms
                .iter()
                .map(|t| (t.coeff.ln(), t.exponents.clone()))
                .collect(),
        }
    }

    /// `f(y) = ln sum_t exp(b_t + a_t . y)` with a max shift.
    fn value(&self, y: &DVector<f64>) -> f64 {
        let logs: Vec<f64> = self
            .terms
            .iter()
            .map(|(b, a)| b + a.iter().map(|&(v, e)| e * y[v]).sum::<f64>())
            .collect();
        let m = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        m + logs.iter().map(|l| (l - m).exp()).sum::<f64>().ln()
    }

    /// Value, gradient, and softmax weights at `y`.
    fn value_grad(&self, y: &DVector<f64>, grad: &mut DVector<f64>, weights: &mut Vec<f64>) -> f64 {
        let logs: Vec<f64> = self
            .terms
            .iter()
            .map(|(b, a)| b + a.iter().map(|&(v, e)| e * y[v]).sum::<f64>())
            .collect();
        let m = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let mut z = 0.0;
        weights.clear();
        for l in &logs {
            let w = (l - m).exp();
            weights.push(w);
            z += w;
        }
        for w in weights.iter_mut() {
            *w /= z;
        }
        grad.fill(0.0);
        for ((_, a), w) in self.terms.iter().zip(weights.iter()) {
            for &(v, e) in a {
                grad[v] += w * e;
            }
        }
        m + z.ln()
    }
}

struct BarrierProblem {
    n: usize,
    /// Linear objective in y (sparse).
    objective: Vec<(usize, f64)>,
    cons: Vec<LogPosy>,
}

struct BarrierState {
    y: DVector<f64>,
    newton_iterations: usize,
}

const ARMIJO_SLOPE: f64 = 0.25;
const BACKTRACK: f64 = 0.5;
const MIN_STEP: f64 = 1e-13;
const NEWTON_TOL: f64 = 1e-10;
const MAX_NEWTON_PER_STAGE: usize = 60;
const BARRIER_FACTOR: f64 = 10.0;
/// Largest per-coordinate Newton step in log space. Keeps unbounded
/// directions (possible in the feasibility phase) from overflowing `exp`.
const STEP_CLAMP: f64 = 20.0;

impl BarrierProblem {
    fn objective_value(&self, y: &DVector<f64>) -> f64 {
        self.objective.iter().map(|&(v, c)| c * y[v]).sum()
    }

    /// `t * obj + barrier`, or +inf outside the domain.
    fn merit(&self, t: f64, y: &DVector<f64>) -> f64 {
        let mut phi = t * self.objective_value(y);
        for c in &self.cons {
            let f = c.value(y);
            if f >= 0.0 {
                return f64::INFINITY;
            }
            phi -= (-f).ln();
        }
        phi
    }

    /// One centering stage at barrier weight `t`. `stop` is checked after
    /// every accepted step so side goals (feasibility-phase acceptance) can
    /// short-circuit an unbounded descent.
    fn center(
        &self,
        t: f64,
        state: &mut BarrierState,
        stop: Option<&dyn Fn(&DVector<f64>) -> bool>,
    ) -> Result<bool, GpError> {
        let n = self.n;
        let mut grad_f = DVector::zeros(n);
        let mut weights: Vec<f64> = Vec::new();

        for _ in 0..MAX_NEWTON_PER_STAGE {
            state.newton_iterations += 1;
            let mut g = DVector::zeros(n);
            for &(v, c) in &self.objective {
                g[v] += t * c;
            }
            let mut h = DMatrix::zeros(n, n);
            for con in &self.cons {
                let f = con.value_grad(&state.y, &mut grad_f, &mut weights);
                if f >= 0.0 {
                    return Err(GpError::Numerical("iterate left the domain".into()));
                }
                let inv = 1.0 / (-f);
                g.axpy(inv, &grad_f, 1.0);
                // Hessian of -ln(-f): grad grad^T / f^2 + hess(f) / (-f),
                // with hess(f) = sum_t w_t a_t a_t^T - grad grad^T.
                let outer_scale = inv * inv - inv;
                for i in 0..n {
                    if grad_f[i] == 0.0 {
                        continue;
                    }
                    for j in 0..n {
                        h[(i, j)] += outer_scale * grad_f[i] * grad_f[j];
                    }
                }
                for ((_, a), w) in con.terms.iter().zip(weights.iter()) {
                    for &(vi, ei) in a {
                        for &(vj, ej) in a {
                            h[(vi, vj)] += inv * w * ei * ej;
                        }
                    }
                }
            }

            // Damped Newton direction with an escalating ridge.
            let mut ridge = 0.0;
            let mut dir = loop {
                let mut hr = h.clone();
                if ridge > 0.0 {
                    for i in 0..n {
                        hr[(i, i)] += ridge;
                    }
                }
                match hr.cholesky() {
                    Some(chol) => break chol.solve(&(-&g)),
                    None => {
                        ridge = if ridge == 0.0 { 1e-10 } else { ridge * 100.0 };
                        if ridge > 1e6 {
                            return Err(GpError::Numerical(
                                "Hessian factorization failed".into(),
                            ));
                        }
                    }
                }
            };
            let max_abs = dir.amax();
            if max_abs > STEP_CLAMP {
                dir *= STEP_CLAMP / max_abs;
            }

            let decrement = -g.dot(&dir);
            if decrement <= NEWTON_TOL {
                return Ok(false);
            }

            let phi0 = self.merit(t, &state.y);
            let slope = ARMIJO_SLOPE * g.dot(&dir);
            let mut step = 1.0;
            loop {
                let candidate = &state.y + step * &dir;
                let phi = self.merit(t, &candidate);
                if phi <= phi0 + step * slope {
                    state.y = candidate;
                    break;
                }
                step *= BACKTRACK;
                if step < MIN_STEP {
                    // No progress possible; treat the stage as centered.
                    return Ok(false);
                }
            }
            if let Some(f) = stop {
                if f(&state.y) {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }

    /// Barrier path following from a strictly feasible `y0`. `stop_early`
    /// can short-circuit once a side goal is reached (phase-I).
    fn solve(
        &self,
        y0: DVector<f64>,
        tol: f64,
        stop_early: Option<&dyn Fn(&DVector<f64>) -> bool>,
    ) -> Result<BarrierState, GpError> {
        let m = self.cons.len().max(1) as f64;
        let mut state = BarrierState {
            y: y0,
            newton_iterations: 0,
        };
        let mut t = 1.0;
        loop {
            let stopped = self.center(t, &mut state, stop_early)?;
            if stopped || m / t < tol {
                return Ok(state);
            }
            t *= BARRIER_FACTOR;
            if t > 1e18 {
                return Err(GpError::MaxIterations);
            }
        }
    }
}

fn strictly_feasible(cons: &[LogPosy], y: &DVector<f64>, margin: f64) -> bool {
    cons.iter().all(|c| c.value(y) < -margin)
}

/// Solve starting from all-ones.
pub fn solve_gp(gp: &GpProblem, tol: f64) -> Result<GpSolution, GpError> {
    solve_gp_from(gp, &vec![1.0; gp.num_vars], tol)
}

/// Solve starting from `x0` (positive entries). Runs a feasibility phase
/// when `x0` is not strictly feasible.
pub fn solve_gp_from(gp: &GpProblem, x0: &[f64], tol: f64) -> Result<GpSolution, GpError> {
    gp.validate()?;
    if x0.len() != gp.num_vars {
        return Err(GpError::BadProblem(format!(
            "starting point has {} entries for {} variables",
            x0.len(),
            gp.num_vars
        )));
    }
    if x0.iter().any(|&v| !(v > 0.0) || !v.is_finite()) {
        return Err(GpError::BadProblem(
            "starting point must be strictly positive".into(),
        ));
    }
    let n = gp.num_vars;
    let cons: Vec<LogPosy> = gp.constraints.iter().map(|c| LogPosy::from(&c.posy)).collect();
    let mut y = DVector::from_iterator(n, x0.iter().map(|&v| v.ln()));
    let mut newton_total = 0;

    if !strictly_feasible(&cons, &y, 1e-12) {
        y = feasibility_phase(n, &cons, &y, &mut newton_total)?;
    }

    // Normalize the linear objective to unit infinity-norm: the minimizer is
    // unchanged and the barrier stays well scaled when the exponents are
    // tiny.
    let mut objective = gp.objective.exponents.clone();
    let scale = objective
        .iter()
        .map(|&(_, c)| c.abs())
        .fold(0.0f64, f64::max);
    if scale > 0.0 {
        for (_, c) in objective.iter_mut() {
            *c /= scale;
        }
    }

    let problem = BarrierProblem { n, objective, cons };
    let state = problem.solve(y, tol, None)?;
    let x: Vec<f64> = state.y.iter().map(|&v| v.exp()).collect();
    Ok(GpSolution {
        objective: gp.objective.eval(&x),
        max_constraint: gp.max_constraint(&x),
        newton_iterations: newton_total + state.newton_iterations,
        x,
    })
}

/// Phase I: minimize the slack variable `s` with constraints `f_i(y) <= ln s`.
/// Returns a strictly feasible `y` or an infeasibility certificate.
fn feasibility_phase(
    n: usize,
    cons: &[LogPosy],
    y0: &DVector<f64>,
    newton_total: &mut usize,
) -> Result<DVector<f64>, GpError> {
    let s_idx = n;
    let aug_cons: Vec<LogPosy> = cons
        .iter()
        .map(|c| LogPosy {
            terms: c
                .terms
                .iter()
                .map(|(b, a)| {
                    let mut a2 = a.clone();
                    a2.push((s_idx, -1.0));
                    (*b, a2)
                })
                .collect(),
        })
        .collect();

    let worst = cons
        .iter()
        .map(|c| c.value(y0))
        .fold(f64::NEG_INFINITY, f64::max);
    let mut y = DVector::zeros(n + 1);
    y.rows_mut(0, n).copy_from(y0);
    y[s_idx] = worst + 1.0;

    let problem = BarrierProblem {
        n: n + 1,
        objective: vec![(s_idx, 1.0)],
        cons: aug_cons,
    };
    // Stop as soon as the slack drops safely below one (strictly feasible
    // original point found); otherwise run to optimality and certify.
    let accept = move |y: &DVector<f64>| y[s_idx] < (0.5f64).ln();
    let state = problem.solve(y, 1e-9, Some(&accept))?;
    *newton_total += state.newton_iterations;
    if state.y[s_idx] >= -1e-9 {
        return Err(GpError::Infeasible {
            best_violation: state.y[s_idx].exp(),
        });
    }
    Ok(state.y.rows(0, n).into_owned())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn constraint(terms: Vec<Monomial>) -> GpConstraint {
        GpConstraint {
            posy: Posynomial { terms },
            kind: ConstraintKind::Other,
        }
    }

    #[test]
    fn single_variable_bound() {
        // minimize x subject to 2/x <= 1: optimum x = 2.
        let gp = GpProblem {
            num_vars: 1,
            objective: Monomial::new(1.0, vec![(0, 1.0)]),
            constraints: vec![constraint(vec![Monomial::new(2.0, vec![(0, -1.0)])])],
        };
        let sol = solve_gp(&gp, 1e-9).unwrap();
        assert_relative_eq!(sol.x[0], 2.0, max_relative = 1e-6);
        assert!(sol.max_constraint <= 1.0 + 1e-9);
    }

    #[test]
    fn product_objective() {
        // minimize x*y subject to 1/x <= 1, 1/y <= 1: optimum (1, 1).
        let gp = GpProblem {
            num_vars: 2,
            objective: Monomial::new(1.0, vec![(0, 1.0), (1, 1.0)]),
            constraints: vec![
                constraint(vec![Monomial::new(1.0, vec![(0, -1.0)])]),
                constraint(vec![Monomial::new(1.0, vec![(1, -1.0)])]),
            ],
        };
        let sol = solve_gp(&gp, 1e-9).unwrap();
        assert_relative_eq!(sol.x[0], 1.0, max_relative = 1e-6);
        assert_relative_eq!(sol.x[1], 1.0, max_relative = 1e-6);
        assert_relative_eq!(sol.objective, 1.0, max_relative = 1e-5);
    }

    #[test]
    fn arithmetic_mean_bound() {
        // maximize xyz subject to (x+y+z)/3 <= 1, i.e. minimize (xyz)^-1:
        // optimum at x=y=z=1 with objective 1.
        let gp = GpProblem {
            num_vars: 3,
            objective: Monomial::new(1.0, vec![(0, -1.0), (1, -1.0), (2, -1.0)]),
            constraints: vec![constraint(vec![
                Monomial::new(1.0 / 3.0, vec![(0, 1.0)]),
                Monomial::new(1.0 / 3.0, vec![(1, 1.0)]),
                Monomial::new(1.0 / 3.0, vec![(2, 1.0)]),
            ])],
        };
        let sol = solve_gp(&gp, 1e-9).unwrap();
        for v in &sol.x {
            assert_relative_eq!(*v, 1.0, max_relative = 1e-5);
        }
    }

    #[test]
    fn infeasible_is_certified() {
        // x <= 1/2 and x >= 2 cannot hold together.
        let gp = GpProblem {
            num_vars: 1,
            objective: Monomial::new(1.0, vec![(0, 1.0)]),
            constraints: vec![
                constraint(vec![Monomial::new(2.0, vec![(0, 1.0)])]),
                constraint(vec![Monomial::new(2.0, vec![(0, -1.0)])]),
            ],
        };
        assert!(matches!(
            solve_gp(&gp, 1e-9),
            Err(GpError::Infeasible { .. })
        ));
    }

    #[test]
    fn feasibility_phase_recovers_from_bad_start() {
        // Start far outside the feasible set; the box [2, 4] is reachable.
        let gp = GpProblem {
            num_vars: 1,
            objective: Monomial::new(1.0, vec![(0, 1.0)]),
            constraints: vec![
                constraint(vec![Monomial::new(2.0, vec![(0, -1.0)])]),
                constraint(vec![Monomial::new(0.25, vec![(0, 1.0)])]),
            ],
        };
        let sol = solve_gp_from(&gp, &[1000.0], 1e-9).unwrap();
        assert_relative_eq!(sol.x[0], 2.0, max_relative = 1e-6);
    }

    #[test]
    fn rejects_bad_problems() {
        let gp = GpProblem {
            num_vars: 1,
            objective: Monomial::new(-1.0, vec![(0, 1.0)]),
            constraints: vec![],
        };
        assert!(matches!(solve_gp(&gp, 1e-9), Err(GpError::BadProblem(_))));
        let gp = GpProblem {
            num_vars: 1,
            objective: Monomial::new(1.0, vec![(3, 1.0)]),
            constraints: vec![],
        };
        assert!(matches!(solve_gp(&gp, 1e-9), Err(GpError::BadProblem(_))));
    }

    #[test]
    fn monomial_merges_duplicate_indices() {
        let m = Monomial::new(2.0, vec![(0, 1.0), (0, -0.25), (1, 0.0)]);
        assert_eq!(m.exponents, vec![(0, 0.75)]);
        assert_relative_eq!(m.eval(&[16.0, 5.0]), 2.0 * 8.0, max_relative = 1e-12);
    }
}
