//! Small-scale channel realizations for Monte-Carlo verification.
//!
//! True channels decompose exactly into an estimate plus an independent
//! estimation error, `h = h_hat + h_err`, with per-component variances
//! `phi` and `e` from [`crate::fading::LargeScaleFading`]. By default
//! estimates are sampled directly from these statistics, which under
//! orthogonal pilots is distribution-identical to explicit despreading;
//! [`despread_estimate`] implements the despreading path as a verification
//! route.

use ndarray::{Array1, Array2, Array3};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

use crate::fading::LargeScaleFading;

#[derive(Debug, Error)]
pub enum ChannelError {
    #[error("pilot must have unit norm, got |pilot|^2 = {0}")]
    PilotNotUnitNorm(f64),
}

/// One draw of all links: shape `(M, W, N)` per field.
#[derive(Debug, Clone)]
pub struct ChannelRealization {
    pub h: Array3<Complex64>,
    pub g: Array3<Complex64>,
    pub h_hat: Array3<Complex64>,
    pub g_hat: Array3<Complex64>,
    pub h_err: Array3<Complex64>,
    pub g_err: Array3<Complex64>,
}

/// Circularly-symmetric complex Gaussian with per-component variance `var`:
/// real and imaginary parts are independent `N(0, var/2)`.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R, var: f64) -> Complex64 {
    let s = (var / 2.0).sqrt();
    Complex64::new(
        s * rng.sample::<f64, _>(StandardNormal),
        s * rng.sample::<f64, _>(StandardNormal),
    )
}

/// Draw estimates and errors for every link, then form the true channels.
pub fn draw_realization<R: Rng + ?Sized>(
    ls: &LargeScaleFading,
    n: usize,
    rng: &mut R,
) -> ChannelRealization {
    let (m, w) = ls.phi_a.dim();
    let mut draw_pair = |phi: &Array2<f64>, err: &Array2<f64>| {
        let mut hat = Array3::zeros((m, w, n));
        let mut e = Array3::zeros((m, w, n));
        for ap in 0..m {
            for i in 0..w {
                for ant in 0..n {
                    hat[(ap, i, ant)] = complex_gaussian(rng, phi[(ap, i)]);
                    e[(ap, i, ant)] = complex_gaussian(rng, err[(ap, i)]);
                }
            }
        }
        let full = &hat + &e;
        (hat, e, full)
    };
    let (h_hat, h_err, h) = draw_pair(&ls.phi_a, &ls.e_a);
    let (g_hat, g_err, g) = draw_pair(&ls.phi_b, &ls.e_b);
    ChannelRealization {
        h,
        g,
        h_hat,
        g_hat,
        h_err,
        g_err,
    }
}

/// Linear-MMSE estimate from a despread pilot observation:
/// `(sqrt(tau_p p_p) alpha / (1 + tau_p p_p alpha)) * (pilot_obs * pilot)`.
///
/// `pilot_obs` is the `N x tau_p` training observation; `pilot` the user's
/// unit-norm pilot sequence.
pub fn despread_estimate(
    pilot_obs: &Array2<Complex64>,
    pilot: &Array1<Complex64>,
    alpha: f64,
    tau_p: usize,
    p_p: f64,
) -> Result<Array1<Complex64>, ChannelError> {
    let norm_sq: f64 = pilot.iter().map(|c| c.norm_sqr()).sum();
    if (norm_sq - 1.0).abs() > 1e-9 {
        return Err(ChannelError::PilotNotUnitNorm(norm_sq));
    }
    let tpp = tau_p as f64 * p_p;
    let scale = tpp.sqrt() * alpha / (1.0 + tpp * alpha);
    let despread = pilot_obs.dot(pilot);
    Ok(despread.mapv(|c| scale * c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{stream_rng, Stream};
    use ndarray::array;

    fn small_ls() -> LargeScaleFading {
        LargeScaleFading::from_alpha(array![[0.8, 0.3]], array![[0.5, 0.9]], 4, 2.0)
    }

    #[test]
    fn decomposition_is_exact() {
        let ls = small_ls();
        let mut rng = stream_rng(3, Stream::Realization(0));
        let real = draw_realization(&ls, 3, &mut rng);
        for (idx, v) in real.h.indexed_iter() {
            assert_eq!(*v, real.h_hat[idx] + real.h_err[idx]);
        }
        for (idx, v) in real.g.indexed_iter() {
            assert_eq!(*v, real.g_hat[idx] + real.g_err[idx]);
        }
    }

    #[test]
    fn zero_phi_gives_zero_estimate() {
        let ls = LargeScaleFading::from_alpha(array![[0.6]], array![[0.6]], 4, 0.0);
        assert_eq!(ls.phi_a[(0, 0)], 0.0);
        let mut rng = stream_rng(5, Stream::Realization(0));
        let real = draw_realization(&ls, 4, &mut rng);
        assert!(real.h_hat.iter().all(|c| c.norm() == 0.0));
        assert!(real.h.iter().all(|c| c.norm() > 0.0));
    }

    #[test]
    fn component_variances_match_statistics() {
        let ls = small_ls();
        let n = 2;
        let reals = 100_000;
        let mut sum_hat = 0.0;
        let mut sum_err = 0.0;
        let mut sq_hat = 0.0;
        let mut cross_re = 0.0;
        for r in 0..reals {
            let mut rng = stream_rng(7, Stream::Realization(r));
            let real = draw_realization(&ls, n, &mut rng);
            let hat = real.h_hat[(0, 0, 0)];
            let err = real.h_err[(0, 0, 0)];
            let v = hat.norm_sqr();
            sum_hat += v;
            sq_hat += v * v;
            sum_err += err.norm_sqr();
            cross_re += (hat * err.conj()).re;
        }
        let nf = reals as f64;
        let mean_hat = sum_hat / nf;
        let se_hat = ((sq_hat / nf - mean_hat * mean_hat) / nf).sqrt();
        assert!(
            (mean_hat - ls.phi_a[(0, 0)]).abs() < 3.0 * se_hat,
            "estimate variance {mean_hat} vs {}",
            ls.phi_a[(0, 0)]
        );
        // Independence: correlation between estimate and error is ~0. The
        // product has std ~ sqrt(phi*e/2) per draw.
        let se_cross = (ls.phi_a[(0, 0)] * ls.e_a[(0, 0)] / 2.0 / nf).sqrt();
        assert!((cross_re / nf).abs() < 3.0 * se_cross);
        let mean_err = sum_err / nf;
        assert!((mean_err - ls.e_a[(0, 0)]).abs() < 5.0 * se_hat);
    }

    /// Build the training observation `sqrt(tau_p p_p) sum_i (h_i pa_i^H + g_i pb_i^H) + noise`.
    fn training_obs(
        h: &[Array1<Complex64>],
        g: &[Array1<Complex64>],
        pilots_a: &[Array1<Complex64>],
        pilots_b: &[Array1<Complex64>],
        tau_p: usize,
        p_p: f64,
        noise: Option<&Array2<Complex64>>,
    ) -> Array2<Complex64> {
        let n = h[0].len();
        let mut obs = Array2::<Complex64>::zeros((n, tau_p));
        let scale = (tau_p as f64 * p_p).sqrt();
        for (vec, pilot) in h.iter().zip(pilots_a).chain(g.iter().zip(pilots_b)) {
            for a in 0..n {
                for t in 0..tau_p {
                    obs[(a, t)] += scale * vec[a] * pilot[t].conj();
                }
            }
        }
        if let Some(w) = noise {
            obs = obs + w;
        }
        obs
    }

    fn unit_pilot(tau_p: usize, slot: usize) -> Array1<Complex64> {
        Array1::from_shape_fn(tau_p, |t| {
            if t == slot {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    #[test]
    fn despread_rejects_bad_pilot() {
        let obs = Array2::<Complex64>::zeros((2, 4));
        let mut pilot = unit_pilot(4, 0);
        pilot[0] = Complex64::new(2.0, 0.0);
        assert!(matches!(
            despread_estimate(&obs, &pilot, 0.5, 4, 1.0),
            Err(ChannelError::PilotNotUnitNorm(_))
        ));
    }

    #[test]
    fn despread_noise_free_converges_to_channel() {
        // Single user, no noise: estimate = (tpp a / (1 + tpp a)) h -> h.
        let tau_p = 4;
        let alpha = 0.7;
        let h = vec![array![Complex64::new(0.3, -0.2), Complex64::new(-1.1, 0.4)]];
        let pa = vec![unit_pilot(tau_p, 0)];
        for &p_p in &[1.0, 1e12] {
            let obs = training_obs(&h, &[], &pa, &[], tau_p, p_p, None);
            let est = despread_estimate(&obs, &pa[0], alpha, tau_p, p_p).unwrap();
            let tpp = tau_p as f64 * p_p;
            let want = tpp * alpha / (1.0 + tpp * alpha);
            for a in 0..2 {
                let ratio = est[a] / h[0][a];
                assert!((ratio.re - want).abs() < 1e-9 && ratio.im.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn orthogonal_interferer_contributes_nothing() {
        let tau_p = 4;
        let h = vec![array![Complex64::new(0.3, -0.2)]];
        let g = vec![array![Complex64::new(5.0, 7.0)]];
        let pa = vec![unit_pilot(tau_p, 0)];
        let pb = vec![unit_pilot(tau_p, 1)];
        let obs_with = training_obs(&h, &g, &pa, &pb, tau_p, 1.0, None);
        let obs_without = training_obs(&h, &[], &pa, &[], tau_p, 1.0, None);
        let est_with = despread_estimate(&obs_with, &pa[0], 0.7, tau_p, 1.0).unwrap();
        let est_without = despread_estimate(&obs_without, &pa[0], 0.7, tau_p, 1.0).unwrap();
        assert_eq!(est_with, est_without);
    }

    #[test]
    fn despread_variance_matches_phi() {
        // Sample variance of the despread estimate over 1e5 noisy trainings
        // approaches phi.
        let tau_p = 2;
        let alpha = 0.8;
        let p_p = 1.5;
        let tpp = tau_p as f64 * p_p;
        let phi = tpp * alpha * alpha / (1.0 + tpp * alpha);
        let pa = vec![unit_pilot(tau_p, 0)];
        let reals = 100_000;
        let mut sum = 0.0;
        let mut sq = 0.0;
        for r in 0..reals {
            let mut rng = stream_rng(11, Stream::Realization(r));
            let h = vec![array![complex_gaussian(&mut rng, alpha)]];
            let noise =
                Array2::from_shape_fn((1, tau_p), |_| complex_gaussian(&mut rng, 1.0));
            let obs = training_obs(&h, &[], &pa, &[], tau_p, p_p, Some(&noise));
            let est = despread_estimate(&obs, &pa[0], alpha, tau_p, p_p).unwrap();
            let v = est[0].norm_sqr();
            sum += v;
            sq += v * v;
        }
        let nf = reals as f64;
        let mean = sum / nf;
        let se = ((sq / nf - mean * mean) / nf).sqrt();
        assert!((mean - phi).abs() < 3.0 * se, "var {mean} vs phi {phi}");
    }
}
