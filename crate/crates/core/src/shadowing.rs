//! Correlated log-normal shadowing.
//!
//! For each AP the shadow terms toward all 2W users form one jointly
//! Gaussian vector: zero mean, 4 dB standard deviation, and pairwise
//! covariance `4^2 * 2^(-delta/9)` where `delta` is the user-to-user
//! distance in meters. Draws are independent across APs (the correlation
//! rule applies at a common AP only), and each AP owns its RNG stream so a
//! nested topology keeps its shadow field when APs are appended.
//!
//! The pairwise rule does not guarantee a positive semidefinite joint
//! matrix; before factorization the matrix is symmetrized and its
//! eigenvalues clipped at a small floor.

use nalgebra::{DMatrix, DVector};
use ndarray::Array2;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::geometry::{torus_distance, Topology};
use crate::rng::{stream_rng, Stream};

/// Shadow standard deviation in dB.
pub const SHADOW_STD_DB: f64 = 4.0;
/// Correlation distance constant in meters.
pub const SHADOW_CORR_DIST_M: f64 = 9.0;
/// Eigenvalue floor applied when repairing the covariance.
pub const EIGEN_CLIP: f64 = 1e-12;

/// Per-link shadow terms in dB, split by user side. Shape `M x W`.
#[derive(Debug, Clone)]
pub struct ShadowField {
    pub a: Array2<f64>,
    pub b: Array2<f64>,
}

/// Joint covariance of the 2W shadow terms seen from one AP.
pub fn shadow_covariance(topology: &Topology) -> DMatrix<f64> {
    let w2 = 2 * topology.num_pairs();
    let var = SHADOW_STD_DB * SHADOW_STD_DB;
    DMatrix::from_fn(w2, w2, |k, j| {
        let d = torus_distance(
            topology.user_position(k),
            topology.user_position(j),
            topology.side_m,
        );
        var * 2f64.powf(-d / SHADOW_CORR_DIST_M)
    })
}

/// Symmetrize, clip eigenvalues at `EIGEN_CLIP`, and return a factor `L`
/// with `L L^T` equal to the repaired covariance.
fn repaired_factor(cov: &DMatrix<f64>) -> DMatrix<f64> {
    let sym = (cov + cov.transpose()) * 0.5;
    let eig = sym.symmetric_eigen();
    let sqrt_vals = DVector::from_iterator(
        eig.eigenvalues.len(),
        eig.eigenvalues.iter().map(|&l| l.max(EIGEN_CLIP).sqrt()),
    );
    let mut factor = eig.eigenvectors.clone();
    for (mut col, s) in factor.column_iter_mut().zip(sqrt_vals.iter()) {
        col *= *s;
    }
    factor
}

/// Draw the per-link shadow field for a topology.
pub fn correlated_shadowing(topology: &Topology, seed: u64) -> ShadowField {
    let m = topology.num_aps();
    let w = topology.num_pairs();
    let factor = repaired_factor(&shadow_covariance(topology));
    let mut a = Array2::zeros((m, w));
    let mut b = Array2::zeros((m, w));
    for ap in 0..m {
        let mut rng = stream_rng(seed, Stream::Shadowing(ap as u32));
        let z = DVector::from_fn(2 * w, |_, _| rng.sample::<f64, _>(StandardNormal));
        let f = &factor * z;
        for k in 0..w {
            a[(ap, k)] = f[k];
            b[(ap, k)] = f[w + k];
        }
    }
    ShadowField { a, b }
}

impl ShadowField {
    /// All-zero field (no shadowing); useful for controlled experiments.
    pub fn zero(m: usize, w: usize) -> ShadowField {
        ShadowField {
            a: Array2::zeros((m, w)),
            b: Array2::zeros((m, w)),
        }
    }
}
