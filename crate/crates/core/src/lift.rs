//! Tensor lifting between Tverberg partitions and origin-covering
//! transversals.
//!
//! For a configuration `X` of `N` points in `R^d` and a part count `r`,
//! each point lifts to a color class of `r` points in `R^n`,
//! `n = (d+1)(r-1)`: class `i`, slot `j` is the flattened outer product
//! `(x_i, 1) (v_j)^T` for frame vectors `v_1, .., v_r`.  A partition picks
//! slot `labels[i]` from class `i`; the induced partition restricted to a
//! subset is a Tverberg partition exactly when the picked lifted points of
//! that subset contain the origin in their convex hull.
//!
//! The frame needs exactly two properties, both exact over rationals:
//! the vectors sum to zero and any `r-1` of them are linearly independent
//! (equivalently, the only linear relations among them are multiples of
//! the all-ones relation).  The standard-basis frame below has both.

use serde::{Deserialize, Serialize};

use crate::config::PointConfig;
use crate::error::{Error, Result};
use crate::halfspaces::Halfspace;
use crate::hull::{common_point_of_hulls, origin_in_hull, HullCertificate, HullsIntersection};
use crate::scalar::Scalar;
use crate::subset::IndexSet;
use crate::{Point, Rational};

/// Frame vectors `v_1, .., v_r` in `R^{r-1}`: zero sum, any `r-1`
/// linearly independent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplexFrame<S = Rational> {
    pub r: usize,
    pub vertices: Vec<Point<S>>,
}

/// Builds the frame for `r` parts: `v_j = e_j` for `j < r` and
/// `v_r = -(e_1 + .. + e_{r-1})`.
pub fn simplex_frame<S: Scalar>(r: usize) -> Result<SimplexFrame<S>> {
    if r < 2 {
        return Err(Error::PartCountTooSmall { min: 2, got: r });
    }
    let dim = r - 1;
    let mut vertices = Vec::with_capacity(r);
    for j in 0..dim {
        let mut v = vec![S::zero(); dim];
        v[j] = S::one();
        vertices.push(v);
    }
    vertices.push(vec![-S::one(); dim]);
    Ok(SimplexFrame { r, vertices })
}

impl<S: Scalar> SimplexFrame<S> {
    /// Exact check of the defining identities.
    pub fn check(&self) -> bool {
        if self.vertices.len() != self.r || self.r < 2 {
            return false;
        }
        let dim = self.r - 1;
        if self.vertices.iter().any(|v| v.len() != dim) {
            return false;
        }
        // Zero sum.
        for k in 0..dim {
            let mut s = S::zero();
            for v in &self.vertices {
                s = s + v[k].clone();
            }
            if !s.is_zero() {
                return false;
            }
        }
        true
    }
}

/// The lifted color classes of a configuration: `classes[i][j]` is the
/// lift of point `i` into slot `j`.
#[derive(Debug, Clone)]
pub struct LiftedFamily<S = Rational> {
    pub dim: usize,
    pub r: usize,
    /// Lifted dimension `(dim + 1) * (r - 1)`.
    pub lifted_dim: usize,
    pub classes: Vec<Vec<Point<S>>>,
}

/// Flattened outer product `(p, 1) v^T`, row-major.
fn lift_point<S: Scalar>(p: &[S], v: &[S]) -> Point<S> {
    let mut out = Vec::with_capacity((p.len() + 1) * v.len());
    for a in p.iter().chain(std::iter::once(&S::one())) {
        for b in v {
            out.push(a.clone() * b.clone());
        }
    }
    out
}

/// Lifts every point of `config` into its color class of `r` slots.
pub fn lift(config: &PointConfig, r: usize) -> Result<LiftedFamily> {
    let frame: SimplexFrame = simplex_frame(r)?;
    let d = config.dim();
    let lifted_dim = (d + 1) * (r - 1);
    let classes = config
        .points()
        .iter()
        .map(|p| {
            frame
                .vertices
                .iter()
                .map(|v| lift_point(p, v))
                .collect::<Vec<_>>()
        })
        .collect();
    Ok(LiftedFamily {
        dim: d,
        r,
        lifted_dim,
        classes,
    })
}

impl LiftedFamily {
    pub fn n_classes(&self) -> usize {
        self.classes.len()
    }

    /// All `N * r` lifted points, class-major.
    pub fn all_points(&self) -> Vec<Point> {
        self.classes.iter().flatten().cloned().collect()
    }
}

/// A partition of `N` points into `r` labeled parts; entry `i` is the
/// 1-based part of point `i`.  Parts may be empty.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    pub r: usize,
    pub labels: Vec<usize>,
}

impl Partition {
    pub fn new(r: usize, labels: Vec<usize>) -> Result<Self> {
        if r < 1 {
            return Err(Error::PartCountTooSmall { min: 1, got: r });
        }
        for &l in &labels {
            if l < 1 || l > r {
                return Err(Error::LabelOutOfRange { label: l, r });
            }
        }
        Ok(Partition { r, labels })
    }

    pub fn n_points(&self) -> usize {
        self.labels.len()
    }

    /// 1-based part label of point `i`.
    pub fn label(&self, i: usize) -> usize {
        self.labels[i]
    }

    /// Indices of part `j` (1-based) within `subset`.
    pub fn part_in(&self, j: usize, subset: &IndexSet) -> Vec<usize> {
        subset.iter().filter(|&i| self.labels[i] == j).collect()
    }

    fn check_against(&self, config: &PointConfig) -> Result<()> {
        if self.labels.len() != config.n_points() {
            return Err(Error::LabelCountMismatch {
                expected: config.n_points(),
                got: self.labels.len(),
            });
        }
        Ok(())
    }
}

/// The lifted transversal points `{class i, slot labels[i] : i in subset}`.
pub fn restrict_transversal(
    partition: &Partition,
    lifted: &LiftedFamily,
    subset: &IndexSet,
) -> Vec<Point> {
    subset
        .iter()
        .map(|i| lifted.classes[i][partition.labels[i] - 1].clone())
        .collect()
}

/// Why a restricted partition is or is not a Tverberg partition.
#[derive(Debug, Clone)]
pub enum TverbergCert {
    /// A point in every part hull, with convex coefficients per part
    /// (parts ordered by label; coefficients follow each part's point
    /// order as produced by `Partition::part_in`).
    CommonPoint {
        point: Point,
        coefficients: Vec<Vec<Rational>>,
    },
    /// Part `part` (1-based) has no points in the subset.
    EmptyPart { part: usize },
    /// A halfspace containing the origin and excluding every lifted
    /// transversal point of the subset.
    Separation { witness: Halfspace },
}

/// Outcome of a Tverberg check.
#[derive(Debug, Clone)]
pub struct TverbergCheck {
    pub is_tverberg: bool,
    pub certificate: TverbergCert,
}

/// Decides whether `partition` restricted to `subset` is a Tverberg
/// partition of `config`.
///
/// The direct reading is authoritative: the `r` part hulls over the
/// subset must share a common point, and an empty part (including the
/// empty subset) means `false`.  When the parts are nonempty but the
/// hulls miss each other, the returned witness is the lifted-side
/// halfspace separating the origin from the restricted transversal.
pub fn is_tverberg(
    config: &PointConfig,
    partition: &Partition,
    lifted: &LiftedFamily,
    subset: &IndexSet,
) -> Result<TverbergCheck> {
    partition.check_against(config)?;
    for i in subset.iter() {
        if i >= config.n_points() {
            return Err(Error::IndexOutOfRange {
                index: i,
                n_points: config.n_points(),
            });
        }
    }

    let mut parts: Vec<Vec<Point>> = Vec::with_capacity(partition.r);
    for j in 1..=partition.r {
        let members = partition.part_in(j, subset);
        if members.is_empty() {
            return Ok(TverbergCheck {
                is_tverberg: false,
                certificate: TverbergCert::EmptyPart { part: j },
            });
        }
        parts.push(members.iter().map(|&i| config.point(i).clone()).collect());
    }

    match common_point_of_hulls(config.dim(), &parts)? {
        HullsIntersection::Common { point, coefficients } => Ok(TverbergCheck {
            is_tverberg: true,
            certificate: TverbergCert::CommonPoint { point, coefficients },
        }),
        HullsIntersection::Empty => {
            // All parts nonempty and no common point: by the lift
            // correspondence the restricted transversal misses the origin,
            // and the separating halfspace is the exportable witness.
            let transversal = restrict_transversal(partition, lifted, subset);
            match origin_in_hull(lifted.lifted_dim, &transversal)? {
                HullCertificate::Outside { witness } => Ok(TverbergCheck {
                    is_tverberg: false,
                    certificate: TverbergCert::Separation { witness },
                }),
                HullCertificate::Inside { .. } => {
                    unreachable!("hulls disjoint but lifted transversal covers the origin")
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::parse_rational;

    fn rat(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    fn cfg(dim: usize, pts: &[&[&str]]) -> PointConfig {
        PointConfig::new(
            dim,
            pts.iter()
                .map(|p| p.iter().map(|s| rat(s)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn frame_r2_is_the_antipodal_pair() {
        let f: SimplexFrame = simplex_frame(2).unwrap();
        assert_eq!(f.vertices, vec![vec![rat("1")], vec![rat("-1")]]);
        assert!(f.check());
    }

    #[test]
    fn frame_sums_to_zero_and_spans() {
        for r in 2..=6 {
            let f: SimplexFrame = simplex_frame(r).unwrap();
            assert!(f.check(), "r = {r}");
            // Any r-1 of the vectors are linearly independent: dropping
            // vertex j, the rest span R^{r-1} because e_k are present for
            // k != j (and for j = r all e_k are).
            for drop in 0..r {
                let rest: Vec<&Point> = f
                    .vertices
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| *k != drop)
                    .map(|(_, v)| v)
                    .collect();
                // Rank check by elimination.
                let mut rows: Vec<Vec<Rational>> = rest.iter().map(|v| (*v).clone()).collect();
                let mut rank = 0;
                for col in 0..r - 1 {
                    if let Some(p) = (rank..rows.len()).find(|&i| !rows[i][col].is_zero()) {
                        rows.swap(rank, p);
                        let pivot = rows[rank][col].clone();
                        for i in 0..rows.len() {
                            if i != rank && !rows[i][col].is_zero() {
                                let factor = rows[i][col].clone() / pivot.clone();
                                for c in 0..r - 1 {
                                    let upd = rows[rank][c].clone() * factor.clone();
                                    rows[i][c] -= upd;
                                }
                            }
                        }
                        rank += 1;
                    }
                }
                assert_eq!(rank, r - 1, "r = {r}, dropped {drop}");
            }
        }
    }

    #[test]
    fn frame_rejects_r1() {
        assert!(simplex_frame::<Rational>(1).is_err());
    }

    #[test]
    fn lift_examples() {
        // d = 1, r = 2, x = 3.
        let c = cfg(1, &[&["3"]]);
        let l = lift(&c, 2).unwrap();
        assert_eq!(l.lifted_dim, 2);
        assert_eq!(l.classes[0][0], vec![rat("3"), rat("1")]);
        assert_eq!(l.classes[0][1], vec![rat("-3"), rat("-1")]);

        // d = 2, r = 2, x = (1, 2).
        let c = cfg(2, &[&["1", "2"]]);
        let l = lift(&c, 2).unwrap();
        assert_eq!(l.lifted_dim, 3);
        assert_eq!(l.classes[0][0], vec![rat("1"), rat("2"), rat("1")]);
        assert_eq!(l.classes[0][1], vec![rat("-1"), rat("-2"), rat("-1")]);
    }

    #[test]
    fn class_average_is_the_origin() {
        let c = cfg(2, &[&["1", "2"], &["-3", "1/2"], &["0", "0"]]);
        for r in 2..=4 {
            let l = lift(&c, r).unwrap();
            for class in &l.classes {
                let mut sum = vec![rat("0"); l.lifted_dim];
                for p in class {
                    for (acc, v) in sum.iter_mut().zip(p) {
                        *acc += v;
                    }
                }
                assert!(sum.iter().all(|v| v.is_zero()));
            }
        }
    }

    #[test]
    fn restrict_transversal_cases() {
        let c = cfg(1, &[&["3"], &["5"]]);
        let l = lift(&c, 2).unwrap();
        let p = Partition::new(2, vec![1, 2]).unwrap();
        assert!(restrict_transversal(&p, &l, &IndexSet::empty()).is_empty());
        let full = IndexSet::full(2).unwrap();
        let t = restrict_transversal(&p, &l, &full);
        assert_eq!(t.len(), 2);
        assert_eq!(t[0], vec![rat("3"), rat("1")]);
        assert_eq!(t[1], vec![rat("-5"), rat("-1")]);
        let single = IndexSet::from_indices(&[0]).unwrap();
        let t = restrict_transversal(&p, &l, &single);
        assert_eq!(t, vec![vec![rat("3"), rat("1")]]);
    }

    #[test]
    fn tverberg_on_the_line() {
        let c = cfg(1, &[&["0"], &["1"], &["2"]]);
        let l = lift(&c, 2).unwrap();
        let p = Partition::new(2, vec![1, 2, 1]).unwrap();
        let full = IndexSet::full(3).unwrap();
        let check = is_tverberg(&c, &p, &l, &full).unwrap();
        assert!(check.is_tverberg);
        match check.certificate {
            TverbergCert::CommonPoint { point, .. } => assert_eq!(point, vec![rat("1")]),
            _ => panic!("expected common point"),
        }
    }

    #[test]
    fn radon_instance() {
        let c = cfg(2, &[&["0", "0"], &["2", "0"], &["1", "2"], &["1", "1/2"]]);
        let l = lift(&c, 2).unwrap();
        let p = Partition::new(2, vec![1, 1, 1, 2]).unwrap();
        let full = IndexSet::full(4).unwrap();
        assert!(is_tverberg(&c, &p, &l, &full).unwrap().is_tverberg);

        // Dropping the inner point empties part 2.
        let sub = IndexSet::from_indices(&[0, 1, 2]).unwrap();
        let check = is_tverberg(&c, &p, &l, &sub).unwrap();
        assert!(!check.is_tverberg);
        match check.certificate {
            TverbergCert::EmptyPart { part } => assert_eq!(part, 2),
            _ => panic!("expected empty part"),
        }
    }

    #[test]
    fn empty_subset_is_not_tverberg() {
        let c = cfg(1, &[&["0"]]);
        let l = lift(&c, 2).unwrap();
        let p = Partition::new(2, vec![1]).unwrap();
        let check = is_tverberg(&c, &p, &l, &IndexSet::empty()).unwrap();
        assert!(!check.is_tverberg);
    }

    #[test]
    fn separation_certificate_rechecks() {
        // Two disjoint singletons.
        let c = cfg(2, &[&["0", "0"], &["1", "0"]]);
        let l = lift(&c, 2).unwrap();
        let p = Partition::new(2, vec![1, 2]).unwrap();
        let full = IndexSet::full(2).unwrap();
        let check = is_tverberg(&c, &p, &l, &full).unwrap();
        assert!(!check.is_tverberg);
        match check.certificate {
            TverbergCert::Separation { witness } => {
                assert!(witness.contains_origin());
                let t = restrict_transversal(&p, &l, &full);
                assert!(t.iter().all(|q| !witness.contains(q)));
            }
            _ => panic!("expected separation"),
        }
    }
}
