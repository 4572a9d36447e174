//! Robust Tverberg partition families.
//!
//! A Tverberg partition of a finite point set splits it into `r` labeled
//! parts whose convex hulls share a common point.  This crate constructs
//! families of `m` partitions of a point set `X` such that *every* subset
//! of at least `eps * |X|` points inherits a Tverberg partition from at
//! least one family member, and it verifies such claims with exact
//! rational certificates.
//!
//! The main pieces:
//!
//! - [`hull`]: exact origin-in-convex-hull and hull-intersection tests in
//!   any dimension, with re-checkable certificates (convex coefficients or
//!   a separating halfspace).
//! - [`halfspaces`]: a finite family of halfspaces through the origin that
//!   certifies origin-in-hull for *all* subsets of a fixed point set.
//! - [`lift`]: the tensor lift sending a point configuration and a part
//!   count to color classes in `R^{(d+1)(r-1)}`, under which Tverberg
//!   partitions correspond to transversals whose hull contains the origin.
//! - [`robust`]: closed-form bounds for the required number of partitions
//!   and the randomized construction (rejection sampling with an optional
//!   bookkeeping ledger that tracks all still-unserved subsets).
//! - [`adversary`]: the greedy adversary realizing the matching lower
//!   bound, plus exact, enumerative, and Monte Carlo robustness verifiers.
//! - [`colorful`]: the colorful variant built on r-blocks and random
//!   permutations, with the fixed-point probability `p_r` in exact form.
//!
//! Geometric predicates run over exact rationals ([`Rational`]); the core
//! linear algebra is generic over any ordered field scalar (see
//! [`scalar::Scalar`]), so the same routines also instantiate at `f64`
//! where approximate arithmetic is acceptable.

pub mod adversary;
pub mod colorful;
pub mod config;
pub mod error;
pub mod feasibility;
pub mod generate;
pub mod halfspaces;
pub mod hull;
pub mod io;
pub mod lift;
pub mod robust;
pub mod scalar;
pub mod search;
pub mod subset;

/// Exact scalar used by the pipeline: arbitrary-precision rational.
pub type Rational = num_rational::BigRational;

/// A point, generic over the scalar; defaults to the exact pipeline type.
pub type Point<S = Rational> = Vec<S>;

pub use config::PointConfig;
pub use error::Error;
pub use halfspaces::{halfspace_family, Halfspace, HalfspaceFamily};
pub use hull::{common_point_of_hulls, origin_in_hull, HullCertificate, HullsIntersection};
pub use lift::{lift, simplex_frame, LiftedFamily, Partition, SimplexFrame};
pub use robust::{epsilon_threshold, m_required, PartitionFamily, RobustParams};
