//! Monte-Carlo estimation of every SINR term.
//!
//! Each closed-form term (desired signal, estimation error, beamforming
//! uncertainty, inter-user interference, noise) has a sample estimator built
//! from channel realizations. Term-level verification is the primary check:
//! the min() rate combination downstream could mask compensating errors in
//! an end-to-end comparison.
//!
//! Realizations are drawn in parallel from per-realization streams and
//! reduced in index order, so results are bitwise reproducible regardless of
//! the thread count.

use ndarray::Array3;
use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use crate::channel::{complex_gaussian, draw_realization, ChannelRealization};
use crate::fading::LargeScaleFading;
use crate::power::PowerAllocation;
use crate::rng::{stream_rng, Stream};
use crate::se::{combine_rates, RateReport, Side};

/// Number of bootstrap resamples behind [`mc_sum_se`]'s standard error.
pub const BOOTSTRAP_RESAMPLES: usize = 200;

/// A sample statistic with its standard error.
#[derive(Debug, Clone, Copy)]
pub struct McEstimate {
    pub value: f64,
    pub std_error: f64,
    pub num_samples: usize,
}

impl McEstimate {
    /// |value - reference| in units of the standard error.
    pub fn deviation_from(&self, reference: f64) -> f64 {
        if self.std_error == 0.0 {
            if self.value == reference {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            (self.value - reference).abs() / self.std_error
        }
    }
}

/// Access-phase terms per pair.
#[derive(Debug, Clone)]
pub struct MacTermEstimates {
    pub ds_a: Vec<McEstimate>,
    pub ds_b: Vec<McEstimate>,
    pub ee_a: Vec<McEstimate>,
    pub ee_b: Vec<McEstimate>,
    pub iui: Vec<McEstimate>,
    pub noise: Vec<McEstimate>,
}

/// Broadcast-phase terms for one receiving side, per pair. `bu_desired` is
/// the gain uncertainty of the desired stream's precoder, `bu_self` the
/// residual self-interference power; `iui_a`/`iui_b` collect interference
/// from the other pairs' A-stream/B-stream precoding.
#[derive(Debug, Clone)]
pub struct BcTermEstimates {
    pub ds: Vec<McEstimate>,
    pub bu_desired: Vec<McEstimate>,
    pub bu_self: Vec<McEstimate>,
    pub iui_a: Vec<McEstimate>,
    pub iui_b: Vec<McEstimate>,
}

/// Closed-form values of the same access-phase terms.
#[derive(Debug, Clone)]
pub struct MacTermsClosed {
    pub ds_a: Vec<f64>,
    pub ds_b: Vec<f64>,
    pub ee_a: Vec<f64>,
    pub ee_b: Vec<f64>,
    pub iui: Vec<f64>,
    pub noise: Vec<f64>,
}

/// Closed-form values of the broadcast-phase terms for one side.
#[derive(Debug, Clone)]
pub struct BcTermsClosed {
    pub ds: Vec<f64>,
    pub bu_desired: Vec<f64>,
    pub bu_self: Vec<f64>,
    pub iui_a: Vec<f64>,
    pub iui_b: Vec<f64>,
}

pub fn closed_form_mac_terms(ls: &LargeScaleFading, pa: &PowerAllocation, n: usize) -> MacTermsClosed {
    let (m, w) = ls.phi_a.dim();
    let nf = n as f64;
    let mut out = MacTermsClosed {
        ds_a: vec![0.0; w],
        ds_b: vec![0.0; w],
        ee_a: vec![0.0; w],
        ee_b: vec![0.0; w],
        iui: vec![0.0; w],
        noise: vec![0.0; w],
    };
    for i in 0..w {
        let sum_phi_a: f64 = (0..m).map(|ap| ls.phi_a[(ap, i)]).sum();
        let sum_phi_b: f64 = (0..m).map(|ap| ls.phi_b[(ap, i)]).sum();
        out.ds_a[i] = pa.eta_a_ul[i] * (nf * sum_phi_a).powi(2);
        out.ds_b[i] = pa.eta_b_ul[i] * (nf * sum_phi_b).powi(2);
        for ap in 0..m {
            let phi_sum = ls.phi_a[(ap, i)] + ls.phi_b[(ap, i)];
            out.ee_a[i] += pa.eta_a_ul[i] * nf * ls.alpha_a[(ap, i)] * phi_sum;
            out.ee_b[i] += pa.eta_b_ul[i] * nf * ls.alpha_b[(ap, i)] * phi_sum;
            out.noise[i] += nf / pa.p_u * phi_sum;
            for j in 0..w {
                if j != i {
                    out.iui[i] += nf
                        * (pa.eta_a_ul[j] * ls.alpha_a[(ap, j)]
                            + pa.eta_b_ul[j] * ls.alpha_b[(ap, j)])
                        * phi_sum;
                }
            }
        }
    }
    out
}

pub fn closed_form_bc_terms(
    ls: &LargeScaleFading,
    pa: &PowerAllocation,
    n: usize,
    side: Side,
) -> BcTermsClosed {
    let (m, w) = ls.phi_a.dim();
    let nf = n as f64;
    let (phi, phi_other, alpha, eta_desired, eta_self) = match side {
        Side::A => (&ls.phi_a, &ls.phi_b, &ls.alpha_a, &pa.eta_b_dl, &pa.eta_a_dl),
        Side::B => (&ls.phi_b, &ls.phi_a, &ls.alpha_b, &pa.eta_a_dl, &pa.eta_b_dl),
    };
    let mut out = BcTermsClosed {
        ds: vec![0.0; w],
        bu_desired: vec![0.0; w],
        bu_self: vec![0.0; w],
        iui_a: vec![0.0; w],
        iui_b: vec![0.0; w],
    };
    for i in 0..w {
        let beam: f64 = (0..m)
            .map(|ap| eta_desired[(ap, i)].sqrt() * phi[(ap, i)])
            .sum();
        out.ds[i] = (nf * beam).powi(2);
        for ap in 0..m {
            out.bu_desired[i] += nf * eta_desired[(ap, i)] * alpha[(ap, i)] * phi[(ap, i)];
            out.bu_self[i] += nf * eta_self[(ap, i)] * alpha[(ap, i)] * phi_other[(ap, i)];
            for j in 0..w {
                if j != i {
                    out.iui_a[i] += nf * pa.eta_a_dl[(ap, j)] * alpha[(ap, i)] * ls.phi_b[(ap, j)];
                    out.iui_b[i] += nf * pa.eta_b_dl[(ap, j)] * alpha[(ap, i)] * ls.phi_a[(ap, j)];
                }
            }
        }
    }
    out
}

/// Per-realization reductions: one entry per pair (and per side for the
/// broadcast phase).
#[derive(Debug, Clone)]
struct RealizationSample {
    mac_a: Vec<Complex64>,
    mac_b: Vec<Complex64>,
    mac_iui: Vec<f64>,
    mac_noise: Vec<f64>,
    bc_s: [Vec<Complex64>; 2],
    bc_t: [Vec<Complex64>; 2],
    bc_iui_a: [Vec<f64>; 2],
    bc_iui_b: [Vec<f64>; 2],
}

/// `x^H y` over the antenna axis of link `(ap, i)`.
fn cdot(x: &Array3<Complex64>, y: &Array3<Complex64>, ap: usize, i: usize, j: usize) -> Complex64 {
    let n = x.shape()[2];
    let mut acc = Complex64::new(0.0, 0.0);
    for ant in 0..n {
        acc += x[(ap, i, ant)].conj() * y[(ap, j, ant)];
    }
    acc
}

fn reduce_realization(
    real: &ChannelRealization,
    ls: &LargeScaleFading,
    pa: &PowerAllocation,
) -> RealizationSample {
    let (m, w) = ls.phi_a.dim();
    let mut s = RealizationSample {
        mac_a: vec![Complex64::default(); w],
        mac_b: vec![Complex64::default(); w],
        mac_iui: vec![0.0; w],
        mac_noise: vec![0.0; w],
        bc_s: [vec![Complex64::default(); w], vec![Complex64::default(); w]],
        bc_t: [vec![Complex64::default(); w], vec![Complex64::default(); w]],
        bc_iui_a: [vec![0.0; w], vec![0.0; w]],
        bc_iui_b: [vec![0.0; w], vec![0.0; w]],
    };
    let n = real.h.shape()[2];

    for i in 0..w {
        // Access phase: the CPU combines with (h_hat + g_hat)^H.
        let mut sum_hat_h = vec![Complex64::default(); n];
        let mut sum_hat_g = vec![Complex64::default(); n];
        for ap in 0..m {
            s.mac_a[i] += cdot(&real.h_hat, &real.h, ap, i, i) + cdot(&real.g_hat, &real.h, ap, i, i);
            s.mac_b[i] += cdot(&real.h_hat, &real.g, ap, i, i) + cdot(&real.g_hat, &real.g, ap, i, i);
            for ant in 0..n {
                sum_hat_h[ant] += real.h_hat[(ap, i, ant)];
                sum_hat_g[ant] += real.g_hat[(ap, i, ant)];
            }
        }
        s.mac_noise[i] = (sum_hat_h.iter().map(|c| c.norm_sqr()).sum::<f64>()
            + sum_hat_g.iter().map(|c| c.norm_sqr()).sum::<f64>())
            / pa.p_u;
        for j in 0..w {
            if j == i {
                continue;
            }
            let mut hh = Complex64::default();
            let mut gh = Complex64::default();
            let mut hg = Complex64::default();
            let mut gg = Complex64::default();
            for ap in 0..m {
                hh += cdot(&real.h_hat, &real.h, ap, i, j);
                gh += cdot(&real.g_hat, &real.h, ap, i, j);
                hg += cdot(&real.h_hat, &real.g, ap, i, j);
                gg += cdot(&real.g_hat, &real.g, ap, i, j);
            }
            s.mac_iui[i] += pa.eta_a_ul[j] * (hh.norm_sqr() + gh.norm_sqr())
                + pa.eta_b_ul[j] * (hg.norm_sqr() + gg.norm_sqr());
        }

        // Broadcast phase, both receiving sides. The desired stream for side
        // X is precoded on X's own channel estimate with the other side's
        // downlink coefficients.
        for side in [Side::A, Side::B] {
            let si = side.index();
            let (chan, own_est, other_est, eta_desired, eta_self) = match side {
                Side::A => (&real.h, &real.h_hat, &real.g_hat, &pa.eta_b_dl, &pa.eta_a_dl),
                Side::B => (&real.g, &real.g_hat, &real.h_hat, &pa.eta_a_dl, &pa.eta_b_dl),
            };
            for ap in 0..m {
                s.bc_s[si][i] += eta_desired[(ap, i)].sqrt() * cdot(own_est, chan, ap, i, i);
                s.bc_t[si][i] += eta_self[(ap, i)].sqrt() * cdot(other_est, chan, ap, i, i);
            }
            for j in 0..w {
                if j == i {
                    continue;
                }
                let mut ua = Complex64::default();
                let mut ub = Complex64::default();
                for ap in 0..m {
                    ua += pa.eta_a_dl[(ap, j)].sqrt() * cdot(&real.g_hat, chan, ap, j, i);
                    ub += pa.eta_b_dl[(ap, j)].sqrt() * cdot(&real.h_hat, chan, ap, j, i);
                }
                s.bc_iui_a[si][i] += ua.norm_sqr();
                s.bc_iui_b[si][i] += ub.norm_sqr();
            }
        }
    }
    s
}

fn collect_samples(
    ls: &LargeScaleFading,
    pa: &PowerAllocation,
    n: usize,
    num_reals: usize,
    seed: u64,
) -> Vec<RealizationSample> {
    (0..num_reals)
        .into_par_iter()
        .map(|r| {
            let mut rng = stream_rng(seed, Stream::Realization(r as u32));
            let real = draw_realization(ls, n, &mut rng);
            reduce_realization(&real, ls, pa)
        })
        .collect()
}

fn mean_complex<'a>(it: impl Iterator<Item = &'a Complex64>, n: usize) -> Complex64 {
    it.sum::<Complex64>() / n as f64
}

fn mean_estimate(samples: impl Iterator<Item = f64> + Clone, n: usize) -> McEstimate {
    let nf = n as f64;
    let mean = samples.clone().sum::<f64>() / nf;
    let var = samples.map(|x| (x - mean).powi(2)).sum::<f64>() / (nf - 1.0);
    McEstimate {
        value: mean,
        std_error: (var / nf).sqrt(),
        num_samples: n,
    }
}

/// Variance of a complex sample: mean |x - x_bar|^2 with (n-1) normalization.
/// The standard error is the direct sample SE of the squared deviations.
fn var_estimate(samples: &[Complex64], scale: f64) -> McEstimate {
    let n = samples.len();
    let mean = mean_complex(samples.iter(), n);
    let devs = samples.iter().map(|x| scale * (x - mean).norm_sqr());
    let mut est = mean_estimate(devs, n);
    est.value *= n as f64 / (n as f64 - 1.0);
    est
}

/// `scale * |mean|^2` with a delta-method standard error.
fn squared_mean_estimate(samples: &[Complex64], scale: f64) -> McEstimate {
    let n = samples.len();
    let nf = n as f64;
    let mean = mean_complex(samples.iter(), n);
    let (mut vrr, mut vii, mut vri) = (0.0, 0.0, 0.0);
    for x in samples {
        let dr = x.re - mean.re;
        let di = x.im - mean.im;
        vrr += dr * dr;
        vii += di * di;
        vri += dr * di;
    }
    vrr /= nf - 1.0;
    vii /= nf - 1.0;
    vri /= nf - 1.0;
    let grad_sq =
        4.0 * (mean.re * mean.re * vrr + mean.im * mean.im * vii + 2.0 * mean.re * mean.im * vri);
    McEstimate {
        value: scale * mean.norm_sqr(),
        std_error: scale * (grad_sq / nf).sqrt().max(0.0),
        num_samples: n,
    }
}

pub fn estimate_mac_terms(
    ls: &LargeScaleFading,
    pa: &PowerAllocation,
    n: usize,
    num_reals: usize,
    seed: u64,
) -> MacTermEstimates {
    assert!(num_reals >= 2);
    let samples = collect_samples(ls, pa, n, num_reals, seed);
    mac_terms_from(&samples, pa)
}

fn mac_terms_from(samples: &[RealizationSample], pa: &PowerAllocation) -> MacTermEstimates {
    let w = pa.eta_a_ul.len();
    let n = samples.len();
    let mut out = MacTermEstimates {
        ds_a: Vec::with_capacity(w),
        ds_b: Vec::with_capacity(w),
        ee_a: Vec::with_capacity(w),
        ee_b: Vec::with_capacity(w),
        iui: Vec::with_capacity(w),
        noise: Vec::with_capacity(w),
    };
    for i in 0..w {
        let a: Vec<Complex64> = samples.iter().map(|s| s.mac_a[i]).collect();
        let b: Vec<Complex64> = samples.iter().map(|s| s.mac_b[i]).collect();
        out.ds_a.push(squared_mean_estimate(&a, pa.eta_a_ul[i]));
        out.ds_b.push(squared_mean_estimate(&b, pa.eta_b_ul[i]));
        out.ee_a.push(var_estimate(&a, pa.eta_a_ul[i]));
        out.ee_b.push(var_estimate(&b, pa.eta_b_ul[i]));
        out.iui
            .push(mean_estimate(samples.iter().map(|s| s.mac_iui[i]), n));
        out.noise
            .push(mean_estimate(samples.iter().map(|s| s.mac_noise[i]), n));
    }
    out
}

pub fn estimate_bc_terms(
    ls: &LargeScaleFading,
    pa: &PowerAllocation,
    n: usize,
    num_reals: usize,
    seed: u64,
    side: Side,
) -> BcTermEstimates {
    assert!(num_reals >= 2);
    let samples = collect_samples(ls, pa, n, num_reals, seed);
    bc_terms_from(&samples, pa, side)
}

fn bc_terms_from(
    samples: &[RealizationSample],
    pa: &PowerAllocation,
    side: Side,
) -> BcTermEstimates {
    let w = pa.eta_a_ul.len();
    let n = samples.len();
    let si = side.index();
    let mut out = BcTermEstimates {
        ds: Vec::with_capacity(w),
        bu_desired: Vec::with_capacity(w),
        bu_self: Vec::with_capacity(w),
        iui_a: Vec::with_capacity(w),
        iui_b: Vec::with_capacity(w),
    };
    for i in 0..w {
        let s: Vec<Complex64> = samples.iter().map(|r| r.bc_s[si][i]).collect();
        let t: Vec<Complex64> = samples.iter().map(|r| r.bc_t[si][i]).collect();
        out.ds.push(squared_mean_estimate(&s, 1.0));
        out.bu_desired.push(var_estimate(&s, 1.0));
        out.bu_self.push(var_estimate(&t, 1.0));
        out.iui_a
            .push(mean_estimate(samples.iter().map(|r| r.bc_iui_a[si][i]), n));
        out.iui_b
            .push(mean_estimate(samples.iter().map(|r| r.bc_iui_b[si][i]), n));
    }
    out
}

fn ratio_or_zero(num: f64, den: f64) -> f64 {
    if num == 0.0 || den == 0.0 {
        0.0
    } else {
        num / den
    }
}

/// Assemble SINRs from a subset of realizations (all of them for the point
/// estimate; resampled index sets for the bootstrap). Single-pass moments.
fn gammas_from_indices(
    samples: &[RealizationSample],
    idx: &[usize],
    pa: &PowerAllocation,
    inv_p_d: f64,
) -> (Vec<f64>, [Vec<f64>; 2], [Vec<f64>; 2]) {
    let w = pa.eta_a_ul.len();
    let nf = idx.len() as f64;
    let mut mac_pair = vec![0.0; w];
    let mut mac_dir = [vec![0.0; w], vec![0.0; w]];
    let mut bc_dir = [vec![0.0; w], vec![0.0; w]];
    for i in 0..w {
        let mut sum_a = Complex64::default();
        let mut sum_b = Complex64::default();
        let (mut sq_a, mut sq_b, mut iui, mut noise) = (0.0, 0.0, 0.0, 0.0);
        for &r in idx {
            let s = &samples[r];
            sum_a += s.mac_a[i];
            sum_b += s.mac_b[i];
            sq_a += s.mac_a[i].norm_sqr();
            sq_b += s.mac_b[i].norm_sqr();
            iui += s.mac_iui[i];
            noise += s.mac_noise[i];
        }
        let mean_a = sum_a / nf;
        let mean_b = sum_b / nf;
        let var_a = (sq_a / nf - mean_a.norm_sqr()).max(0.0) * nf / (nf - 1.0);
        let var_b = (sq_b / nf - mean_b.norm_sqr()).max(0.0) * nf / (nf - 1.0);
        let ds_a = pa.eta_a_ul[i] * mean_a.norm_sqr();
        let ds_b = pa.eta_b_ul[i] * mean_b.norm_sqr();
        let den = pa.eta_a_ul[i] * var_a + pa.eta_b_ul[i] * var_b + iui / nf + noise / nf;
        mac_pair[i] = ratio_or_zero(ds_a + ds_b, den);
        mac_dir[0][i] = ratio_or_zero(ds_a, den);
        mac_dir[1][i] = ratio_or_zero(ds_b, den);

        for si in 0..2 {
            let mut sum_s = Complex64::default();
            let (mut sq_s, mut sq_t, mut iui_ab) = (0.0, 0.0, 0.0);
            let mut sum_t = Complex64::default();
            for &r in idx {
                let s = &samples[r];
                sum_s += s.bc_s[si][i];
                sum_t += s.bc_t[si][i];
                sq_s += s.bc_s[si][i].norm_sqr();
                sq_t += s.bc_t[si][i].norm_sqr();
                iui_ab += s.bc_iui_a[si][i] + s.bc_iui_b[si][i];
            }
            let mean_s = sum_s / nf;
            let mean_t = sum_t / nf;
            let bu_desired = (sq_s / nf - mean_s.norm_sqr()).max(0.0) * nf / (nf - 1.0);
            let bu_self = (sq_t / nf - mean_t.norm_sqr()).max(0.0) * nf / (nf - 1.0);
            let den = bu_desired + bu_self + iui_ab / nf + inv_p_d;
            bc_dir[si][i] = ratio_or_zero(mean_s.norm_sqr(), den);
        }
    }
    (mac_pair, mac_dir, bc_dir)
}

/// Monte-Carlo sum SE with a bootstrap standard error. Deterministic for a
/// given `(seed, num_reals)`.
pub fn mc_sum_se(
    ls: &LargeScaleFading,
    pa: &PowerAllocation,
    n: usize,
    prelog: f64,
    num_reals: usize,
    seed: u64,
) -> McEstimate {
    let report = mc_rate_report(ls, pa, n, prelog, num_reals, seed);
    report.1
}

/// Full Monte-Carlo rate report plus the bootstrap estimate of the sum SE.
pub fn mc_rate_report(
    ls: &LargeScaleFading,
    pa: &PowerAllocation,
    n: usize,
    prelog: f64,
    num_reals: usize,
    seed: u64,
) -> (RateReport, McEstimate) {
    assert!(num_reals >= 2);
    let samples = collect_samples(ls, pa, n, num_reals, seed);
    let p_d = pa.p_d(ls, n);
    let inv_p_d = if p_d > 0.0 { 1.0 / p_d } else { f64::INFINITY };

    let all: Vec<usize> = (0..num_reals).collect();
    let (mac_pair, mac_dir, bc_dir) = gammas_from_indices(&samples, &all, pa, inv_p_d);
    let report = combine_rates(mac_pair, mac_dir, bc_dir, prelog);

    let mut rng = stream_rng(seed, Stream::Bootstrap);
    let mut resampled = vec![0.0; BOOTSTRAP_RESAMPLES];
    let mut idx = vec![0usize; num_reals];
    for slot in resampled.iter_mut() {
        for v in idx.iter_mut() {
            *v = rng.gen_range(0..num_reals);
        }
        let (mp, md, bd) = gammas_from_indices(&samples, &idx, pa, inv_p_d);
        *slot = combine_rates(mp, md, bd, prelog).sum_se;
    }
    let bn = BOOTSTRAP_RESAMPLES as f64;
    let mean = resampled.iter().sum::<f64>() / bn;
    let se = (resampled.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (bn - 1.0)).sqrt();

    (
        report.clone(),
        McEstimate {
            value: report.sum_se,
            std_error: se,
            num_samples: num_reals,
        },
    )
}

/// One named moment check.
#[derive(Debug, Clone)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub estimate: McEstimate,
    pub expected: f64,
}

impl IdentityCheck {
    pub fn within(&self, sigmas: f64) -> bool {
        self.estimate.deviation_from(self.expected) <= sigmas
    }
}

/// Verify the moment identities behind the closed forms on a single link
/// with estimate variance `phi` and error variance `e`:
/// `E||h_hat||^4 = N(N+1) phi^2`, `var(h_hat^H h) = N alpha phi`, and
/// `E|h_hat^H x|^2 = N phi alpha` for an independent `x ~ CN(0, alpha I)`.
pub fn verify_identities(
    phi: f64,
    e: f64,
    n: usize,
    num_reals: usize,
    seed: u64,
) -> Vec<IdentityCheck> {
    assert!(num_reals >= 2);
    let alpha = phi + e;
    let samples: Vec<(f64, Complex64, f64)> = (0..num_reals)
        .into_par_iter()
        .map(|r| {
            let mut rng = stream_rng(seed, Stream::Realization(r as u32));
            let mut inner = Complex64::default();
            let mut cross = Complex64::default();
            let mut norm2 = 0.0;
            for _ in 0..n {
                let hat = complex_gaussian(&mut rng, phi);
                let err = complex_gaussian(&mut rng, e);
                let x = complex_gaussian(&mut rng, alpha);
                norm2 += hat.norm_sqr();
                inner += hat.conj() * (hat + err);
                cross += hat.conj() * x;
            }
            (norm2 * norm2, inner, cross.norm_sqr())
        })
        .collect();

    let nf = n as f64;
    let fourth = mean_estimate(samples.iter().map(|s| s.0), num_reals);
    let inner: Vec<Complex64> = samples.iter().map(|s| s.1).collect();
    let inner_var = var_estimate(&inner, 1.0);
    let cross = mean_estimate(samples.iter().map(|s| s.2), num_reals);

    vec![
        IdentityCheck {
            name: "fourth moment of the estimate norm",
            estimate: fourth,
            expected: nf * (nf + 1.0) * phi * phi,
        },
        IdentityCheck {
            name: "variance of the estimate-channel inner product",
            estimate: inner_var,
            expected: nf * alpha * phi,
        },
        IdentityCheck {
            name: "second moment against an independent channel",
            estimate: cross,
            expected: nf * phi * alpha,
        },
    ]
}
