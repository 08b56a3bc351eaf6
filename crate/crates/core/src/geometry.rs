//! Deployment geometry on a wrap-around square.
//!
//! APs and user pairs are dropped uniformly at random; the area edges are
//! wrapped around (torus topology) so that distance statistics are free of
//! boundary effects. Each AP and user position is drawn from its own RNG
//! stream, which makes topology families nested: regenerating with a larger
//! `num_aps` keeps all previously drawn APs in place.

use rand::Rng;

use crate::config::SystemConfig;
use crate::rng::{stream_rng, Stream};

pub type Point = [f64; 2];

#[derive(Debug, Clone, PartialEq)]
pub struct Topology {
    pub side_m: f64,
    pub ap_positions: Vec<Point>,
    pub user_positions_a: Vec<Point>,
    pub user_positions_b: Vec<Point>,
}

impl Topology {
    /// Draw `m` APs and `w` user pairs uniformly over `[0, side)^2`.
    pub fn generate(m: usize, w: usize, side_m: f64, seed: u64) -> Topology {
        let uniform_point = |mut rng: rand_chacha::ChaCha8Rng| -> Point {
            [rng.gen::<f64>() * side_m, rng.gen::<f64>() * side_m]
        };
        let ap_positions = (0..m)
            .map(|i| uniform_point(stream_rng(seed, Stream::ApPosition(i as u32))))
            .collect();
        let user_positions_a = (0..w)
            .map(|k| uniform_point(stream_rng(seed, Stream::UserPosition(k as u32))))
            .collect();
        let user_positions_b = (0..w)
            .map(|k| uniform_point(stream_rng(seed, Stream::UserPosition((w + k) as u32))))
            .collect();
        Topology {
            side_m,
            ap_positions,
            user_positions_a,
            user_positions_b,
        }
    }

    pub fn num_aps(&self) -> usize {
        self.ap_positions.len()
    }

    pub fn num_pairs(&self) -> usize {
        self.user_positions_a.len()
    }

    /// User position by joint index: `0..W` is the A side, `W..2W` the B side.
    pub fn user_position(&self, k: usize) -> Point {
        let w = self.num_pairs();
        if k < w {
            self.user_positions_a[k]
        } else {
            self.user_positions_b[k - w]
        }
    }

    /// Keep only the first `m` APs. Panics if `m` exceeds the current count.
    pub fn truncate_aps(&self, m: usize) -> Topology {
        assert!(m <= self.num_aps());
        Topology {
            side_m: self.side_m,
            ap_positions: self.ap_positions[..m].to_vec(),
            user_positions_a: self.user_positions_a.clone(),
            user_positions_b: self.user_positions_b.clone(),
        }
    }

    /// Single relay site at the area center, same users. Used by the
    /// collocated baseline.
    pub fn collocated_at_center(&self) -> Topology {
        Topology {
            side_m: self.side_m,
            ap_positions: vec![[self.side_m / 2.0, self.side_m / 2.0]],
            user_positions_a: self.user_positions_a.clone(),
            user_positions_b: self.user_positions_b.clone(),
        }
    }
}

pub fn generate_topology(cfg: &SystemConfig) -> Topology {
    Topology::generate(cfg.num_aps, cfg.num_pairs, cfg.area_side_m, cfg.rng_seed)
}

/// Minimum-image Euclidean distance on the square torus of side `side`.
pub fn torus_distance(p: Point, q: Point, side: f64) -> f64 {
    let mut dx = (p[0] - q[0]).abs();
    let mut dy = (p[1] - q[1]).abs();
    if dx > side / 2.0 {
        dx = side - dx;
    }
    if dy > side / 2.0 {
        dy = side - dy;
    }
    (dx * dx + dy * dy).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn generate_counts_and_range() {
        let topo = Topology::generate(200, 5, 1000.0, 3);
        assert_eq!(topo.num_aps(), 200);
        assert_eq!(topo.user_positions_a.len(), 5);
        assert_eq!(topo.user_positions_b.len(), 5);
        for p in topo
            .ap_positions
            .iter()
            .chain(&topo.user_positions_a)
            .chain(&topo.user_positions_b)
        {
            assert!(p[0] >= 0.0 && p[0] < 1000.0);
            assert!(p[1] >= 0.0 && p[1] < 1000.0);
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let a = Topology::generate(1, 1, 500.0, 42);
        let b = Topology::generate(1, 1, 500.0, 42);
        assert_eq!(a, b);
        let c = Topology::generate(1, 1, 500.0, 43);
        assert_ne!(a, c);
    }

    #[test]
    fn topologies_are_nested_in_ap_count() {
        let small = Topology::generate(100, 5, 1000.0, 9);
        let large = Topology::generate(400, 5, 1000.0, 9);
        assert_eq!(&large.ap_positions[..100], &small.ap_positions[..]);
        assert_eq!(large.user_positions_a, small.user_positions_a);
        assert_eq!(large.truncate_aps(100), small);
    }

    #[test]
    fn coordinate_mean_matches_uniform_law() {
        // Law of large numbers: mean coordinate is side/2 within 3 sigma/sqrt(n)
        // where sigma = side/sqrt(12) for a uniform draw.
        let side = 1000.0;
        let topo = Topology::generate(50_000, 0, side, 5);
        let n = (2 * topo.num_aps()) as f64;
        let mean: f64 = topo.ap_positions.iter().map(|p| p[0] + p[1]).sum::<f64>() / n;
        let tol = 3.0 * (side / 12f64.sqrt()) / n.sqrt();
        assert!(
            (mean - side / 2.0).abs() < tol,
            "mean {mean} outside {tol} of {}",
            side / 2.0
        );
    }

    #[test]
    fn torus_distance_examples() {
        assert_relative_eq!(torus_distance([0.0, 0.0], [999.0, 0.0], 1000.0), 1.0);
        assert_eq!(torus_distance([12.0, 34.0], [12.0, 34.0], 1000.0), 0.0);
        // No wrap active: plain Euclidean 500.
        assert_relative_eq!(torus_distance([100.0, 100.0], [400.0, 500.0], 1000.0), 500.0);
    }

    proptest! {
        #[test]
        fn torus_metric_properties(
            px in 0.0..1000.0, py in 0.0..1000.0,
            qx in 0.0..1000.0, qy in 0.0..1000.0,
            rx in 0.0..1000.0, ry in 0.0..1000.0,
        ) {
            let side = 1000.0;
            let (p, q, r) = ([px, py], [qx, qy], [rx, ry]);
            let dpq = torus_distance(p, q, side);
            let dqp = torus_distance(q, p, side);
            prop_assert!((dpq - dqp).abs() < 1e-12);
            prop_assert!(dpq <= side * std::f64::consts::SQRT_2 / 2.0 + 1e-9);
            prop_assert!(torus_distance(p, p, side) == 0.0);
            // Triangle inequality with a rounding allowance.
            let dpr = torus_distance(p, r, side);
            let drq = torus_distance(r, q, side);
            prop_assert!(dpq <= dpr + drq + 1e-9);
        }
    }
}
