//! Shared fixtures and oracles for the integration tests. Oracles here are
//! deliberately independent of the library's computation paths.

#![allow(dead_code)]

use cfrelay_core::fading::LargeScaleFading;
use cfrelay_core::gp::{ConstraintKind, GpConstraint, GpProblem, Monomial, Posynomial};
use cfrelay_core::power::PowerAllocation;
use cfrelay_core::rng::{stream_rng, Stream};
use ndarray::Array2;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn aux_rng(seed: u64, index: u32) -> ChaCha8Rng {
    stream_rng(seed, Stream::Aux(index))
}

/// Log-uniform draw in `[lo, hi]`.
pub fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    let (a, b) = (lo.ln(), hi.ln());
    (a + rng.gen::<f64>() * (b - a)).exp()
}

/// A synthetic instance with O(1) gains: `alpha` log-uniform in
/// `[alpha_lo, alpha_hi]`, estimate statistics from a random pilot budget.
pub fn random_instance(
    rng: &mut ChaCha8Rng,
    m: usize,
    w: usize,
    alpha_lo: f64,
    alpha_hi: f64,
) -> LargeScaleFading {
    let draw =
        |rng: &mut ChaCha8Rng| Array2::from_shape_fn((m, w), |_| log_uniform(rng, alpha_lo, alpha_hi));
    let alpha_a = draw(rng);
    let alpha_b = draw(rng);
    let tau_p_p_p = log_uniform(rng, 0.5, 50.0);
    LargeScaleFading::from_alpha(alpha_a, alpha_b, 1, tau_p_p_p)
}

/// Unit uplink coefficients with all-ones downlink shape (tests that do not
/// exercise the per-AP constraint) at the given powers.
pub fn unit_allocation(m: usize, w: usize, p_u: f64, p_r: f64) -> PowerAllocation {
    PowerAllocation {
        eta_a_ul: vec![1.0; w],
        eta_b_ul: vec![1.0; w],
        eta_a_dl: Array2::ones((m, w)),
        eta_b_dl: Array2::ones((m, w)),
        p_p: p_u,
        p_u,
        p_r,
    }
}

/// Variable box for the random GP instances.
pub struct GpBox {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

/// A random small GP with box constraints and anchored posynomial
/// constraints, strictly feasible at the box's geometric center. Boxes are
/// narrow (factor 1.3) so a 50-point grid certifies the optimum to better
/// than one percent.
pub fn random_small_gp(rng: &mut ChaCha8Rng) -> (GpProblem, GpBox) {
    let n = rng.gen_range(2..=3usize);
    let lower: Vec<f64> = (0..n).map(|_| log_uniform(rng, 0.1, 3.0)).collect();
    let upper: Vec<f64> = lower.iter().map(|&l| l * 1.3).collect();
    let anchor: Vec<f64> = lower
        .iter()
        .zip(&upper)
        .map(|(&l, &u)| (l * u).sqrt())
        .collect();

    let exponent_choices = [-1.0, -0.5, 0.5, 1.0];
    let mut constraints: Vec<GpConstraint> = Vec::new();
    for (v, (&l, &u)) in lower.iter().zip(&upper).enumerate() {
        constraints.push(GpConstraint {
            posy: Posynomial {
                terms: vec![Monomial::new(l, vec![(v, -1.0)])],
            },
            kind: ConstraintKind::Other,
        });
        constraints.push(GpConstraint {
            posy: Posynomial {
                terms: vec![Monomial::new(1.0 / u, vec![(v, 1.0)])],
            },
            kind: ConstraintKind::Other,
        });
    }
    for _ in 0..rng.gen_range(1..=2usize) {
        let terms_n = rng.gen_range(2..=3usize);
        let mut terms: Vec<Monomial> = (0..terms_n)
            .map(|_| {
                let coeff = log_uniform(rng, 0.5, 2.0);
                let mut exponents: Vec<(usize, f64)> = Vec::new();
                for v in 0..n {
                    if rng.gen_bool(0.7) {
                        exponents.push((v, exponent_choices[rng.gen_range(0..4)]));
                    }
                }
                Monomial::new(coeff, exponents)
            })
            .collect();
        let posy = Posynomial {
            terms: terms.clone(),
        };
        let at_anchor = posy.eval(&anchor);
        let scale = 1.2 * at_anchor;
        for t in terms.iter_mut() {
            t.coeff /= scale;
        }
        constraints.push(GpConstraint {
            posy: Posynomial { terms },
            kind: ConstraintKind::Other,
        });
    }

    let objective = Monomial::new(
        1.0,
        (0..n)
            .map(|v| (v, exponent_choices[rng.gen_range(0..4)]))
            .collect(),
    );
    (
        GpProblem {
            num_vars: n,
            objective,
            constraints,
        },
        GpBox { lower, upper },
    )
}

/// Exhaustive log-spaced grid minimum of a GP over its box; the independent
/// oracle for the solver.
pub fn gp_grid_minimum(gp: &GpProblem, bounds: &GpBox, points: usize) -> f64 {
    let n = gp.num_vars;
    let axis_for = |v: usize| -> Vec<f64> {
        (0..points)
            .map(|k| {
                let t = k as f64 / (points - 1) as f64;
                (bounds.lower[v].ln() + t * (bounds.upper[v].ln() - bounds.lower[v].ln())).exp()
            })
            .collect()
    };
    let axes: Vec<Vec<f64>> = (0..n).map(axis_for).collect();
    let mut x = vec![0.0; n];
    let mut best = f64::INFINITY;
    let mut idx = vec![0usize; n];
    loop {
        for v in 0..n {
            x[v] = axes[v][idx[v]];
        }
        // Box constraints hold by construction; check the posynomials with a
        // rounding allowance so boundary grid points stay admissible.
        if gp
            .constraints
            .iter()
            .all(|c| c.posy.eval(&x) <= 1.0 + 1e-9)
        {
            best = best.min(gp.objective.eval(&x));
        }
        let mut carry = 0;
        loop {
            idx[carry] += 1;
            if idx[carry] < points {
                break;
            }
            idx[carry] = 0;
            carry += 1;
            if carry == n {
                return best;
            }
        }
    }
}
