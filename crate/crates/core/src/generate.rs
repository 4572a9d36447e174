//! Seeded point-set generators with rational coordinates.
//!
//! Float samples are snapped to dyadic rationals (denominator `2^16`) so
//! the exact predicates stay fast and the files stay readable.  The
//! moment-curve generator uses distinct integer parameters, which puts
//! the points in general position.

use num_bigint::BigInt;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::PointConfig;
use crate::error::{Error, Result};
use crate::{Point, Rational};

const SNAP_BITS: u32 = 16;

/// Distribution choices for `points`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Distribution {
    /// Uniform in the cube `[-1, 1]^d`, snapped to dyadics.
    Cube,
    /// Near the unit sphere (normalized Gaussian, snapped to dyadics).
    Sphere,
    /// `(t, t^2, .., t^d)` for distinct random integers `t`.
    MomentCurve,
}

fn snap(x: f64) -> Rational {
    let scaled = (x * f64::from(1u32 << SNAP_BITS)).round() as i64;
    Rational::new(BigInt::from(scaled), BigInt::from(1u64 << SNAP_BITS))
}

/// Generates `n` points in `R^dim`, deterministically from `seed`.
pub fn points(dim: usize, n: usize, dist: Distribution, seed: u64) -> Result<PointConfig> {
    if dim == 0 {
        return Err(Error::DimensionMismatch { expected: 1, got: 0 });
    }
    if n == 0 {
        return Err(Error::EmptyPointList);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts: Vec<Point> = match dist {
        Distribution::Cube => (0..n)
            .map(|_| (0..dim).map(|_| snap(rng.random_range(-1.0..1.0))).collect())
            .collect(),
        Distribution::Sphere => (0..n)
            .map(|_| {
                loop {
                    let raw: Vec<f64> = (0..dim)
                        .map(|_| rng.random_range(-1.0..1.0f64))
                        .collect();
                    let norm: f64 = raw.iter().map(|x| x * x).sum::<f64>().sqrt();
                    if norm > 1e-3 {
                        return raw.iter().map(|x| snap(x / norm)).collect();
                    }
                }
            })
            .collect(),
        Distribution::MomentCurve => {
            // Distinct integer parameters from a window that keeps the
            // powers small.
            let span = (4 * n).max(8) as i64;
            let mut params: Vec<i64> = Vec::with_capacity(n);
            while params.len() < n {
                let t = rng.random_range(-span..=span);
                if !params.contains(&t) {
                    params.push(t);
                }
            }
            params.sort_unstable();
            params
                .into_iter()
                .map(|t| {
                    (1..=dim)
                        .map(|k| Rational::from_integer(BigInt::from(t).pow(k as u32)))
                        .collect()
                })
                .collect()
        }
    };
    PointConfig::new(dim, pts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    #[test]
    fn deterministic_per_seed() {
        let a = points(2, 9, Distribution::Cube, 7).unwrap();
        let b = points(2, 9, Distribution::Cube, 7).unwrap();
        assert_eq!(a, b);
        let c = points(2, 9, Distribution::Cube, 8).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn moment_curve_has_no_three_collinear_in_the_plane() {
        let cfg = points(2, 9, Distribution::MomentCurve, 3).unwrap();
        let pts = cfg.points();
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                for k in j + 1..pts.len() {
                    let (a, b, c) = (&pts[i], &pts[j], &pts[k]);
                    let det = (&b[0] - &a[0]) * (&c[1] - &a[1]) - (&b[1] - &a[1]) * (&c[0] - &a[0]);
                    assert!(!det.is_zero(), "{i},{j},{k} collinear");
                }
            }
        }
    }

    #[test]
    fn moment_curve_points_are_distinct() {
        let cfg = points(3, 12, Distribution::MomentCurve, 11).unwrap();
        for i in 0..cfg.n_points() {
            for j in i + 1..cfg.n_points() {
                assert_ne!(cfg.point(i), cfg.point(j));
            }
        }
    }

    #[test]
    fn single_point_line() {
        let cfg = points(1, 1, Distribution::MomentCurve, 0).unwrap();
        assert_eq!(cfg.n_points(), 1);
        assert_eq!(cfg.dim(), 1);
    }
}
