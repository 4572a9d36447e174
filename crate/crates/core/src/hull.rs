//! Exact convex-position predicates with re-checkable certificates.
//!
//! `origin_in_hull` decides `0 in conv(points)` and returns either convex
//! coefficients reproducing the origin or a halfspace that contains the
//! origin and excludes every queried point.  `common_point_of_hulls`
//! decides whether a list of part hulls has a common point and, if so,
//! exhibits one together with the convex coefficients per part.
//!
//! Hulls are closed: boundary points count as inside.

use crate::error::{Error, Result};
use crate::feasibility::{solve_eq_nonneg, LinFeas};
use crate::halfspaces::Halfspace;
use crate::scalar::Scalar;
use crate::Point;

/// Decision for `0 in conv(points)`.
#[derive(Debug, Clone)]
pub enum HullCertificate<S> {
    /// Convex coefficients (nonnegative, summing to one) with
    /// `sum_i coefficients[i] * points[i] = 0`.
    Inside { coefficients: Vec<S> },
    /// A halfspace containing the origin and strictly excluding every
    /// queried point.
    Outside { witness: Halfspace<S> },
}

impl<S: Scalar> HullCertificate<S> {
    pub fn is_inside(&self) -> bool {
        matches!(self, HullCertificate::Inside { .. })
    }

    /// Exact re-check of the certificate against the queried points.
    pub fn recheck(&self, dim: usize, points: &[Point<S>]) -> bool {
        match self {
            HullCertificate::Inside { coefficients } => {
                if coefficients.len() != points.len() {
                    return false;
                }
                let mut total = S::zero();
                let mut combo = vec![S::zero(); dim];
                for (c, p) in coefficients.iter().zip(points) {
                    if *c < S::zero() {
                        return false;
                    }
                    total = total + c.clone();
                    for (acc, v) in combo.iter_mut().zip(p) {
                        *acc = acc.clone() + c.clone() * v.clone();
                    }
                }
                total == S::one() && combo.iter().all(|v| v.is_zero())
            }
            HullCertificate::Outside { witness } => {
                witness.contains_origin() && points.iter().all(|p| !witness.contains(p))
            }
        }
    }
}

fn check_dims<S: Scalar>(dim: usize, points: &[Point<S>]) -> Result<()> {
    for p in points {
        if p.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: p.len(),
            });
        }
    }
    Ok(())
}

/// Decides whether the origin lies in the (closed) convex hull of
/// `points` in `R^dim`. The empty hull is empty, so the empty list is
/// outside, with an arbitrary valid witness.
pub fn origin_in_hull<S: Scalar>(dim: usize, points: &[Point<S>]) -> Result<HullCertificate<S>> {
    if dim == 0 {
        return Err(Error::DimensionMismatch { expected: 1, got: 0 });
    }
    check_dims(dim, points)?;

    if points.is_empty() {
        let mut normal = vec![S::zero(); dim];
        normal[0] = S::one();
        return Ok(HullCertificate::Outside {
            witness: Halfspace::new(normal, S::zero()),
        });
    }

    // Feasibility of: sum_i x_i * (p_i, 1) = (0, ..., 0, 1), x >= 0.
    let rows = dim + 1;
    let mut a: Vec<Vec<S>> = vec![Vec::with_capacity(points.len()); rows];
    for p in points {
        for (k, v) in p.iter().enumerate() {
            a[k].push(v.clone());
        }
        a[dim].push(S::one());
    }
    let mut b = vec![S::zero(); rows];
    b[dim] = S::one();

    match solve_eq_nonneg(&a, &b) {
        LinFeas::Feasible(coefficients) => Ok(HullCertificate::Inside { coefficients }),
        LinFeas::Infeasible(y) => {
            // y^T (p_i, 1) <= 0 for all i and y_{dim} > 0, so with
            // u = y[..dim] every point satisfies <u, p_i> <= -y_dim < 0.
            // The halfspace {z : <-u, z> <= 0} contains the origin on its
            // boundary and misses every point strictly.
            let normal: Vec<S> = y[..dim].iter().map(|v| -v.clone()).collect();
            debug_assert!(normal.iter().any(|v| !v.is_zero()));
            let witness = Halfspace::new(normal, S::zero());
            debug_assert!(points.iter().all(|p| !witness.contains(p)));
            Ok(HullCertificate::Outside { witness })
        }
    }
}

/// Result of intersecting the convex hulls of several parts.
#[derive(Debug, Clone)]
pub enum HullsIntersection<S> {
    /// A point in every part hull, with the per-part convex coefficients
    /// that reproduce it.
    Common { point: Point<S>, coefficients: Vec<Vec<S>> },
    /// The hulls have no common point (in particular if any part is empty).
    Empty,
}

impl<S: Scalar> HullsIntersection<S> {
    pub fn is_common(&self) -> bool {
        matches!(self, HullsIntersection::Common { .. })
    }

    /// Exact re-check: the stored point is a convex combination of every
    /// part with the stored coefficients.
    pub fn recheck(&self, dim: usize, parts: &[Vec<Point<S>>]) -> bool {
        match self {
            HullsIntersection::Empty => true,
            HullsIntersection::Common { point, coefficients } => {
                if point.len() != dim || coefficients.len() != parts.len() {
                    return false;
                }
                for (part, coeffs) in parts.iter().zip(coefficients) {
                    if part.len() != coeffs.len() {
                        return false;
                    }
                    let mut total = S::zero();
                    let mut combo = vec![S::zero(); dim];
                    for (c, p) in coeffs.iter().zip(part) {
                        if *c < S::zero() {
                            return false;
                        }
                        total = total + c.clone();
                        for (acc, v) in combo.iter_mut().zip(p) {
                            *acc = acc.clone() + c.clone() * v.clone();
                        }
                    }
                    if total != S::one() || combo != *point {
                        return false;
                    }
                }
                true
            }
        }
    }
}

/// Finds a point common to the convex hulls of all `parts`, if one exists.
///
/// One linear feasibility problem over the concatenated convex
/// coefficients: each part's combination must equal the first part's.
pub fn common_point_of_hulls<S: Scalar>(
    dim: usize,
    parts: &[Vec<Point<S>>],
) -> Result<HullsIntersection<S>> {
    if parts.is_empty() {
        return Err(Error::EmptyPointList);
    }
    for part in parts {
        check_dims(dim, part)?;
    }
    if parts.iter().any(|p| p.is_empty()) {
        return Ok(HullsIntersection::Empty);
    }

    let r = parts.len();
    let n_vars: usize = parts.iter().map(|p| p.len()).sum();
    // Rows: dim equations per part beyond the first (combination equality
    // with part 1) plus one normalization row per part.
    let rows = dim * (r - 1) + r;
    let mut a: Vec<Vec<S>> = vec![vec![S::zero(); n_vars]; rows];
    let mut b = vec![S::zero(); rows];

    let mut col = 0usize;
    for (j, part) in parts.iter().enumerate() {
        for p in part {
            for k in 0..dim {
                if j == 0 {
                    // Appears negated in every equality row.
                    for jj in 1..r {
                        a[(jj - 1) * dim + k][col] = -p[k].clone();
                    }
                } else {
                    a[(j - 1) * dim + k][col] = p[k].clone();
                }
            }
            a[dim * (r - 1) + j][col] = S::one();
            col += 1;
        }
    }
    for j in 0..r {
        b[dim * (r - 1) + j] = S::one();
    }

    match solve_eq_nonneg(&a, &b) {
        LinFeas::Infeasible(_) => Ok(HullsIntersection::Empty),
        LinFeas::Feasible(x) => {
            let mut coefficients: Vec<Vec<S>> = Vec::with_capacity(r);
            let mut col = 0usize;
            for part in parts {
                coefficients.push(x[col..col + part.len()].to_vec());
                col += part.len();
            }
            let mut point = vec![S::zero(); dim];
            for (c, p) in coefficients[0].iter().zip(&parts[0]) {
                for (acc, v) in point.iter_mut().zip(p) {
                    *acc = acc.clone() + c.clone() * v.clone();
                }
            }
            let out = HullsIntersection::Common { point, coefficients };
            debug_assert!(out.recheck(dim, parts));
            Ok(out)
        }
    }
}
