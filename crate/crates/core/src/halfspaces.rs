//! Finite halfspace certificates for origin-in-hull queries.
//!
//! For a fixed point set `X` in `R^n` there is a family of at most
//! `|X|^n` halfspaces, all containing the origin, such that for every
//! subset `Y` of `X`: the origin lies in `conv Y` exactly when `Y` meets
//! every family member.  Any halfspace through the origin separates a
//! fixed subset of `X`, and two directions separate the same subset
//! whenever they lie in the same cell of the central arrangement of the
//! hyperplanes `{w : <w, x> = 0}`, one per point.  So one representative
//! direction per full-dimensional cell suffices.
//!
//! Cells are enumerated exactly: every cell of a central arrangement,
//! restricted to the span of the normals, is a pointed cone, hence has an
//! extreme ray lying on `rank - 1` independent hyperplanes.  Candidate
//! rays come from all such hyperplane subsets; the cells around a ray are
//! recovered by recursing into the sub-arrangement of hyperplanes through
//! the ray and nudging the ray into each of its cells.  All arithmetic is
//! over integers (points are scaled per-point, which does not change any
//! separation sign), so the enumeration is exact and deterministic.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::{Point, Rational};

/// The closed halfspace `{z : <normal, z> <= offset}`.
///
/// It contains the origin exactly when `offset >= 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Halfspace<S = Rational> {
    pub normal: Vec<S>,
    pub offset: S,
}

impl<S: Scalar> Halfspace<S> {
    pub fn new(normal: Vec<S>, offset: S) -> Self {
        debug_assert!(normal.iter().any(|v| !v.is_zero()), "zero normal");
        Halfspace { normal, offset }
    }

    pub fn dim(&self) -> usize {
        self.normal.len()
    }

    pub fn contains(&self, p: &[S]) -> bool {
        let mut dot = S::zero();
        for (a, b) in self.normal.iter().zip(p) {
            dot = dot + a.clone() * b.clone();
        }
        dot <= self.offset
    }

    pub fn contains_origin(&self) -> bool {
        self.offset >= S::zero()
    }
}

/// A certificate family for one generating point set.
#[derive(Debug, Clone)]
pub struct HalfspaceFamily {
    pub ambient_dim: usize,
    pub halfspaces: Vec<Halfspace>,
}

impl HalfspaceFamily {
    pub fn len(&self) -> usize {
        self.halfspaces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.halfspaces.is_empty()
    }

    /// First member disjoint from all of `points`, if any.  By the family
    /// guarantee this exists exactly when the origin is outside the hull
    /// of `points`, for any `points` drawn from the generating set.
    pub fn disjoint_member(&self, points: &[Point]) -> Option<&Halfspace> {
        self.halfspaces
            .iter()
            .find(|h| points.iter().all(|p| !h.contains(p)))
    }
}

// ---------------------------------------------------------------------------
// Integer vector helpers.

fn int_dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    let mut s = BigInt::zero();
    for (x, y) in a.iter().zip(b) {
        s += x * y;
    }
    s
}

fn is_zero_vec(v: &[BigInt]) -> bool {
    v.iter().all(|x| x.is_zero())
}

/// Divides by the gcd of the entries; the zero vector is left alone.
fn make_primitive(v: &mut [BigInt]) {
    let mut g = BigInt::zero();
    for x in v.iter() {
        g = g.gcd(x);
    }
    if g.is_zero() || g.is_one() {
        return;
    }
    for x in v.iter_mut() {
        *x = &*x / &g;
    }
}

/// Primitive representative with the first nonzero entry positive, for
/// identifying the hyperplane `<v, .> = 0` regardless of orientation.
fn canonical_hyperplane(v: &[BigInt]) -> Vec<BigInt> {
    let mut out = v.to_vec();
    make_primitive(&mut out);
    if let Some(first) = out.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            for x in out.iter_mut() {
                *x = -&*x;
            }
        }
    }
    out
}

/// Clears denominators of one rational point; positive per-point scaling
/// preserves every sign `<w, p>` and hence the whole arrangement.
fn integerize(p: &Point) -> Vec<BigInt> {
    let mut denom_lcm = BigInt::one();
    for c in p {
        denom_lcm = denom_lcm.lcm(c.denom());
    }
    let mut out: Vec<BigInt> = p
        .iter()
        .map(|c| c.numer() * (&denom_lcm / c.denom()))
        .collect();
    make_primitive(&mut out);
    out
}

// ---------------------------------------------------------------------------
// Span basis and ray directions.

/// Greedy row-echelon pass returning indices of a basis of the span.
fn span_basis(normals: &[Vec<BigInt>]) -> Vec<usize> {
    let mut echelon: Vec<Vec<Rational>> = Vec::new();
    let mut basis = Vec::new();
    for (i, q) in normals.iter().enumerate() {
        let mut v: Vec<Rational> = q.iter().map(|x| Rational::from_integer(x.clone())).collect();
        for row in &echelon {
            let lead = row.iter().position(|x| !x.is_zero()).unwrap();
            if !v[lead].is_zero() {
                let f = v[lead].clone() / row[lead].clone();
                for (a, b) in v.iter_mut().zip(row) {
                    *a = a.clone() - f.clone() * b.clone();
                }
            }
        }
        if v.iter().any(|x| !x.is_zero()) {
            echelon.push(v);
            basis.push(i);
        }
    }
    basis
}

/// Determinant by cofactor expansion; matrices here are at most the span
/// rank minus one on a side, i.e. tiny.
fn det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = BigInt::zero();
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<BigInt>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(k, _)| *k != j)
                    .map(|(_, v)| v.clone())
                    .collect()
            })
            .collect();
        let term = &m[0][j] * det(&minor);
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// Direction spanning the 1-dimensional space of vectors inside
/// `span(basis rows)` orthogonal to every normal in `subset`, or `None`
/// when the subset is rank-deficient.
fn ray_direction(
    normals: &[Vec<BigInt>],
    basis_idx: &[usize],
    subset: &[usize],
) -> Option<Vec<BigInt>> {
    let s = basis_idx.len();
    // m[t][j] = <q_t, b_j>; its kernel vector gives the coordinates of the
    // ray in the basis.
    let m: Vec<Vec<BigInt>> = subset
        .iter()
        .map(|&t| {
            basis_idx
                .iter()
                .map(|&bj| int_dot(&normals[t], &normals[bj]))
                .collect()
        })
        .collect();
    let mut y: Vec<BigInt> = Vec::with_capacity(s);
    for j in 0..s {
        let minor: Vec<Vec<BigInt>> = m
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(k, _)| *k != j)
                    .map(|(_, v)| v.clone())
                    .collect()
            })
            .collect();
        let d = det(&minor);
        y.push(if j % 2 == 0 { d } else { -d });
    }
    if y.iter().all(|v| v.is_zero()) {
        return None;
    }
    let dim = normals[basis_idx[0]].len();
    let mut u = vec![BigInt::zero(); dim];
    for (coef, &bj) in y.iter().zip(basis_idx) {
        if coef.is_zero() {
            continue;
        }
        for (acc, v) in u.iter_mut().zip(&normals[bj]) {
            *acc += coef * v;
        }
    }
    debug_assert!(!is_zero_vec(&u));
    make_primitive(&mut u);
    Some(u)
}

/// `K * dir + z` with `K` large enough that every nonzero sign of `dir`
/// against the normals survives; integer dots make `K = 1 + max |<q, z>|`
/// sufficient because nonzero integer dots have magnitude at least one.
fn perturb(dir: &[BigInt], z: &[BigInt], normals: &[Vec<BigInt>]) -> Vec<BigInt> {
    if is_zero_vec(z) {
        return dir.to_vec();
    }
    let mut k = BigInt::one();
    for q in normals {
        let d = int_dot(q, z).abs();
        if d >= k {
            k = d + 1;
        }
    }
    let mut w: Vec<BigInt> = dir.iter().zip(z).map(|(a, b)| a * &k + b).collect();
    make_primitive(&mut w);
    w
}

fn for_each_combination(n: usize, t: usize, mut f: impl FnMut(&[usize])) {
    if t > n {
        return;
    }
    let mut idx: Vec<usize> = (0..t).collect();
    loop {
        f(&idx);
        // Advance to the next lexicographic combination.
        let mut i = t;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - t {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..t {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn binomial_u128(n: u128, k: u128) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul(n - i)?;
        acc /= i + 1;
    }
    Some(acc)
}

/// One representative interior direction per full-dimensional cell of the
/// central arrangement with the given (nonzero, hyperplane-distinct)
/// normals.  The empty arrangement has a single cell, represented by the
/// zero direction.
fn cell_reps(dim: usize, normals: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    if normals.is_empty() {
        return vec![vec![BigInt::zero(); dim]];
    }
    let basis_idx = span_basis(normals);
    let s = basis_idx.len();

    let mut seen: BTreeSet<Vec<i8>> = BTreeSet::new();
    let mut reps: Vec<Vec<BigInt>> = Vec::new();

    for_each_combination(normals.len(), s - 1, |subset| {
        let Some(u) = ray_direction(normals, &basis_idx, subset) else {
            return;
        };
        let neg_u: Vec<BigInt> = u.iter().map(|x| -x).collect();
        for dir in [&u, &neg_u] {
            // Hyperplanes through the ray form the sub-arrangement whose
            // cells enumerate the cells of the full arrangement that touch
            // the ray.
            let link: Vec<Vec<BigInt>> = normals
                .iter()
                .filter(|q| int_dot(q, dir).is_zero())
                .cloned()
                .collect();
            for z in cell_reps(dim, &link) {
                let w = perturb(dir, &z, normals);
                let mut sig: Vec<i8> = Vec::with_capacity(normals.len());
                let mut valid = true;
                for q in normals {
                    let d = int_dot(q, &w);
                    if d.is_zero() {
                        valid = false;
                        break;
                    }
                    sig.push(if d.is_positive() { 1 } else { -1 });
                }
                debug_assert!(valid, "representative landed on a hyperplane");
                if valid && seen.insert(sig) {
                    reps.push(w);
                }
            }
        }
    });
    reps
}

/// Builds the certificate family for `points` in `R^dim`.
///
/// Every member contains the origin (all offsets are zero); for every
/// `Y` drawn from `points` with the origin outside `conv Y` some member is
/// disjoint from `Y`; the family size never exceeds `|points|^dim`.
/// Intended for desk scale (roughly `|points| <= 20`, `dim <= 4`).
pub fn halfspace_family(dim: usize, points: &[Point]) -> Result<HalfspaceFamily> {
    if dim == 0 {
        return Err(Error::DimensionMismatch { expected: 1, got: 0 });
    }
    if points.is_empty() {
        return Err(Error::EmptyPointList);
    }
    for p in points {
        if p.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: p.len(),
            });
        }
    }

    let int_points: Vec<Vec<BigInt>> = points.iter().map(integerize).collect();

    // One canonical normal per distinct hyperplane.
    let mut hyper_set: BTreeSet<Vec<BigInt>> = BTreeSet::new();
    for p in &int_points {
        if !is_zero_vec(p) {
            hyper_set.insert(canonical_hyperplane(p));
        }
    }
    let hyper: Vec<Vec<BigInt>> = hyper_set.into_iter().collect();

    let s = span_basis(&hyper).len();
    if s > 0 {
        let work = binomial_u128(hyper.len() as u128, (s - 1) as u128)
            .unwrap_or(u128::MAX);
        const BUDGET: u128 = 2_000_000;
        if work > BUDGET {
            return Err(Error::EnumerationBudget {
                needed: work,
                budget: BUDGET,
            });
        }
    }

    let reps = cell_reps(dim, &hyper);

    // One member per realizable nonempty separated subset.
    let mut by_pattern: BTreeMap<Vec<usize>, Vec<BigInt>> = BTreeMap::new();
    for w in reps {
        let pattern: Vec<usize> = int_points
            .iter()
            .enumerate()
            .filter(|(_, p)| int_dot(&w, p).is_positive())
            .map(|(i, _)| i)
            .collect();
        if !pattern.is_empty() {
            by_pattern.entry(pattern).or_insert(w);
        }
    }

    let mut halfspaces: Vec<Halfspace> = by_pattern
        .into_values()
        .map(|w| {
            Halfspace::new(
                w.into_iter().map(Rational::from_integer).collect(),
                Rational::zero(),
            )
        })
        .collect();

    if halfspaces.is_empty() {
        // Only possible when no point is separable (e.g. all points are the
        // origin); keep one harmless member so the empty subset still fails
        // the intersection test.
        let mut normal = vec![Rational::zero(); dim];
        normal[0] = Rational::one();
        halfspaces.push(Halfspace::new(normal, Rational::zero()));
    }

    Ok(HalfspaceFamily {
        ambient_dim: dim,
        halfspaces,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hull::origin_in_hull;
    use crate::scalar::parse_rational;

    fn pt(coords: &[&str]) -> Point {
        coords.iter().map(|s| parse_rational(s).unwrap()).collect()
    }

    fn excluded(family: &HalfspaceFamily, points: &[Point]) -> BTreeSet<Vec<usize>> {
        family
            .halfspaces
            .iter()
            .map(|h| {
                points
                    .iter()
                    .enumerate()
                    .filter(|(_, p)| !h.contains(p))
                    .map(|(i, _)| i)
                    .collect()
            })
            .collect()
    }

    #[test]
    fn one_dimensional_pair() {
        let points = vec![pt(&["1"]), pt(&["-1"])];
        let fam = halfspace_family(1, &points).unwrap();
        assert_eq!(fam.len(), 2);
        let pats = excluded(&fam, &points);
        assert!(pats.contains(&vec![0]));
        assert!(pats.contains(&vec![1]));
        for h in &fam.halfspaces {
            assert!(h.contains_origin());
        }
    }

    #[test]
    fn triangle_certifies_six_separable_subsets() {
        // Triangle with the origin in its interior.
        let points = vec![pt(&["1", "0"]), pt(&["0", "1"]), pt(&["-1", "-1"])];
        let fam = halfspace_family(2, &points).unwrap();
        assert_eq!(fam.len(), 6);
        let pats = excluded(&fam, &points);
        let expect: BTreeSet<Vec<usize>> = [
            vec![0],
            vec![1],
            vec![2],
            vec![0, 1],
            vec![0, 2],
            vec![1, 2],
        ]
        .into_iter()
        .collect();
        assert_eq!(pats, expect);
    }

    #[test]
    fn duality_exhaustive_on_small_sets() {
        // Hand-picked degenerate-ish sets: repeats, the origin itself,
        // collinear triples.
        let sets: Vec<Vec<Point>> = vec![
            vec![pt(&["1", "0"]), pt(&["-1", "0"]), pt(&["0", "1"])],
            vec![pt(&["1", "1"]), pt(&["2", "2"]), pt(&["-1", "3"])],
            vec![pt(&["0", "0"]), pt(&["1", "0"])],
            vec![pt(&["1", "2"]), pt(&["1", "2"]), pt(&["-2", "-4"])],
            vec![
                pt(&["1", "0"]),
                pt(&["0", "1"]),
                pt(&["-1", "-1"]),
                pt(&["1/2", "1/2"]),
                pt(&["-3", "5"]),
            ],
        ];
        for points in sets {
            let fam = halfspace_family(2, &points).unwrap();
            for mask in 0u32..(1 << points.len()) {
                let subset: Vec<Point> = points
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, p)| p.clone())
                    .collect();
                let inside = origin_in_hull(2, &subset).unwrap().is_inside();
                let meets_all = fam
                    .halfspaces
                    .iter()
                    .all(|h| subset.iter().any(|p| h.contains(p)));
                assert_eq!(inside, meets_all, "mask {mask:#b} of {points:?}");
            }
        }
    }

    #[test]
    fn size_bound_holds() {
        let points = vec![
            pt(&["3", "1", "0"]),
            pt(&["-1", "2", "5"]),
            pt(&["0", "-4", "1"]),
            pt(&["2", "2", "-3"]),
            pt(&["-5", "0", "-1"]),
        ];
        let fam = halfspace_family(3, &points).unwrap();
        assert!(fam.len() <= points.len().pow(3));
    }

    #[test]
    fn all_points_at_origin_yields_fallback_member() {
        let points = vec![pt(&["0", "0"]), pt(&["0", "0"])];
        let fam = halfspace_family(2, &points).unwrap();
        assert_eq!(fam.len(), 1);
        assert!(fam.halfspaces[0].contains_origin());
        // Every nonempty subset contains the origin point, so it meets
        // every member; the empty subset meets none.
        assert!(fam.halfspaces[0].contains(&points[0]));
    }

    #[test]
    fn family_is_deterministic() {
        let points = vec![pt(&["2", "1"]), pt(&["-1", "1"]), pt(&["0", "-3"]), pt(&["4", "-1"])];
        let a = halfspace_family(2, &points).unwrap();
        let b = halfspace_family(2, &points).unwrap();
        assert_eq!(a.halfspaces, b.halfspaces);
    }
}
