//! Closed-form bounds and the randomized construction of robust partition
//! families.
//!
//! For `eps` in `(0, 1]` and `r >= 2`, the minimal number of partitions
//! that can serve every subset of at least `eps * N` points is
//! `floor(ln(1/eps) / ln(r/(r-1))) + 1`, equivalently the least `m` with
//! `((r-1)/r)^m < eps` -- strictly, so the boundary case needs one more
//! partition.  The construction draws each partition uniformly at random
//! and, in ledger mode, re-draws until a Hoeffding-style acceptance test
//! holds against every tracked subset and every certificate halfspace;
//! the ledger then records, after each level, a family of index sets that
//! provably contains every subset still unserved.

use num_bigint::BigUint;
use num_traits::{One, Pow, ToPrimitive, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::adversary::{verify_family, VerifyOptions, VerifyStrategy, Verdict};
use crate::config::PointConfig;
use crate::error::{Error, Result};
use crate::halfspaces::{halfspace_family, HalfspaceFamily};
use crate::lift::{is_tverberg, lift, LiftedFamily, Partition};
use crate::scalar::{ceil_to_usize, format_rational, rational_from_f64};
use crate::subset::IndexSet;
use crate::Rational;

/// Parameters of a construction run.
#[derive(Debug, Clone)]
pub struct RobustParams {
    pub epsilon: Rational,
    pub r: usize,
    pub m: usize,
    pub n_points: usize,
}

impl RobustParams {
    pub fn new(epsilon: Rational, r: usize, m: usize, n_points: usize) -> Result<Self> {
        if r < 2 {
            return Err(Error::PartCountTooSmall { min: 2, got: r });
        }
        if epsilon <= Rational::zero() || epsilon > Rational::one() {
            return Err(Error::EpsilonOutOfRange {
                range: "(0, 1]",
                got: epsilon.to_f64().unwrap_or(f64::NAN),
            });
        }
        if m == 0 || n_points == 0 {
            return Err(Error::BadInput("m and N must be positive".into()));
        }
        Ok(RobustParams {
            epsilon,
            r,
            m,
            n_points,
        })
    }
}

/// `((r-1)/r)^m`, exactly.
pub fn epsilon_threshold(m: usize, r: usize) -> Result<Rational> {
    if r < 2 {
        return Err(Error::PartCountTooSmall { min: 2, got: r });
    }
    let base = Rational::new((r as i64 - 1).into(), (r as i64).into());
    Ok(num_traits::pow(base, m))
}

/// Least `m` with `((r-1)/r)^m < eps`, i.e.
/// `floor(ln(1/eps)/ln(r/(r-1))) + 1` with the boundary case
/// `eps = ((r-1)/r)^m` landing on `m + 1`.
///
/// The float formula only guesses; the answer is pinned by exact rational
/// comparisons, so boundaries are never lost to rounding.
pub fn m_required_exact(epsilon: &Rational, r: usize) -> Result<usize> {
    if r < 2 {
        return Err(Error::PartCountTooSmall { min: 2, got: r });
    }
    if *epsilon <= Rational::zero() || *epsilon > Rational::one() {
        return Err(Error::EpsilonOutOfRange {
            range: "(0, 1]",
            got: epsilon.to_f64().unwrap_or(f64::NAN),
        });
    }
    let ef = epsilon.to_f64().unwrap_or(1.0);
    let ratio = (r as f64) / (r as f64 - 1.0);
    let guess = if ef >= 1.0 {
        1
    } else {
        (((1.0 / ef).ln() / ratio.ln()).floor() as i64 + 1).max(1) as usize
    };

    let mut m = guess.max(1);
    while m > 1 && epsilon_threshold(m - 1, r)? < *epsilon {
        m -= 1;
    }
    while epsilon_threshold(m, r)? >= *epsilon {
        m += 1;
    }
    Ok(m)
}

/// [`m_required_exact`] on a float epsilon (converted exactly; every
/// finite float is rational).
pub fn m_required(epsilon: f64, r: usize) -> Result<usize> {
    if !epsilon.is_finite() || epsilon <= 0.0 || epsilon > 1.0 {
        return Err(Error::EpsilonOutOfRange {
            range: "(0, 1]",
            got: epsilon,
        });
    }
    m_required_exact(&rational_from_f64(epsilon)?, r)
}

/// Upper Hoeffding tail `exp(-2 lambda^2 / n)` for a sum of `n`
/// independent `[0, 1]` variables falling `lambda` below its mean.
pub fn hoeffding_tail(n: usize, lambda: f64) -> f64 {
    debug_assert!(n >= 1 && lambda >= 0.0);
    (-2.0 * lambda * lambda / n as f64).exp()
}

/// The quantities steering one ledger-mode run.
#[derive(Debug, Clone)]
pub struct ConstructionSchedule {
    /// `(N r)^n`: certificate family bound and union-bound base.
    pub a: BigUint,
    pub ln_a: f64,
    /// The slack actually used, as an exact dyadic rational.
    pub lambda: Rational,
    pub lambda_f64: f64,
    /// `N_0 = N`, `N_k = N_{k-1}(1 - 1/r) + lambda`, exactly.
    pub n_k: Vec<Rational>,
    /// `N ((r-1)/r)^m + r lambda`.
    pub final_bound: Rational,
    /// True when the closing inequality `final_bound < eps N` fails, i.e.
    /// the a-priori argument proves nothing at this scale.
    pub vacuous: bool,
}

/// Builds the schedule for lifted dimension `n`; `lambda_override`
/// replaces the default `sqrt(m N ln A) * (1 + 1e-6)`.
pub fn schedule(
    params: &RobustParams,
    n: usize,
    lambda_override: Option<f64>,
) -> Result<ConstructionSchedule> {
    let nr = BigUint::from(params.n_points) * BigUint::from(params.r);
    let a: BigUint = nr.pow(n as u32);
    let ln_a = (n as f64) * ((params.n_points * params.r) as f64).ln();
    let lambda_f64 = match lambda_override {
        Some(l) => {
            if !(l.is_finite() && l >= 0.0) {
                return Err(Error::BadInput(format!("bad lambda {l}")));
            }
            l
        }
        // Strictly above the square root bound.
        None => (params.m as f64 * params.n_points as f64 * ln_a).sqrt() * (1.0 + 1e-6),
    };
    let lambda = rational_from_f64(lambda_f64)?;

    let shrink = Rational::one() - Rational::new(1.into(), (params.r as i64).into());
    let mut n_k = Vec::with_capacity(params.m + 1);
    n_k.push(Rational::from_integer((params.n_points as i64).into()));
    for _ in 1..=params.m {
        let prev = n_k.last().unwrap().clone();
        n_k.push(prev * shrink.clone() + lambda.clone());
    }

    let final_bound = Rational::from_integer((params.n_points as i64).into())
        * epsilon_threshold(params.m, params.r)?
        + Rational::from_integer((params.r as i64).into()) * lambda.clone();
    // Unrolling the recurrence: N_m = N q^m + lambda (1 + q + .. + q^{m-1})
    // <= N q^m + lambda r, with q = 1 - 1/r.
    debug_assert!(*n_k.last().unwrap() <= final_bound);

    let eps_n = params.epsilon.clone()
        * Rational::from_integer((params.n_points as i64).into());
    let vacuous = final_bound >= eps_n;

    Ok(ConstructionSchedule {
        a,
        ln_a,
        lambda,
        lambda_f64,
        n_k,
        final_bound,
        vacuous,
    })
}

/// A family of `m` partitions of the same configuration.
#[derive(Debug, Clone)]
pub struct PartitionFamily {
    pub r: usize,
    pub partitions: Vec<Partition>,
    pub seed: u64,
}

impl PartitionFamily {
    pub fn m(&self) -> usize {
        self.partitions.len()
    }

    pub fn check_against(&self, config: &PointConfig) -> Result<()> {
        for p in &self.partitions {
            if p.r != self.r {
                return Err(Error::BadInput("partition r differs from family r".into()));
            }
            if p.n_points() != config.n_points() {
                return Err(Error::LabelCountMismatch {
                    expected: config.n_points(),
                    got: p.n_points(),
                });
            }
        }
        Ok(())
    }
}

fn random_partition<R: Rng>(n: usize, r: usize, rng: &mut R) -> Partition {
    let labels = (0..n).map(|_| rng.random_range(1..=r)).collect();
    Partition::new(r, labels).expect("labels in range")
}

/// `m` partitions with i.i.d. uniform labels, deterministic in `seed`
/// (partition `k` uses stream `k` of a counter-based generator).
pub fn sample_family(config: &PointConfig, r: usize, m: usize, seed: u64) -> Result<PartitionFamily> {
    if r < 1 {
        return Err(Error::PartCountTooSmall { min: 1, got: r });
    }
    let n = config.n_points();
    let mut partitions = Vec::with_capacity(m);
    for k in 0..m {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(k as u64);
        partitions.push(random_partition(n, r, &mut rng));
    }
    Ok(PartitionFamily {
        r,
        partitions,
        seed,
    })
}

/// Construction strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstructMode {
    /// Resample each level until the acceptance inequality holds for every
    /// ledger member and certificate halfspace, then update the ledger.
    Ledger,
    /// Resample whole families until the verifier certifies robustness.
    Oracle,
}

/// Knobs for [`construct_family`].
#[derive(Debug, Clone)]
pub struct ConstructOptions {
    pub seed: u64,
    /// Oracle mode: max family attempts. Ledger mode: max redraws per level.
    pub budget: u64,
    /// Ledger mode: overrides the schedule's default slack.
    pub lambda: Option<f64>,
    /// Ledger mode: cross-check ledger containment against directly
    /// enumerated bad subsets (skipped above [`CONTAINMENT_CHECK_MAX_N`]).
    pub check_containment: bool,
}

impl Default for ConstructOptions {
    fn default() -> Self {
        ConstructOptions {
            seed: 0,
            budget: 1_000_000,
            lambda: None,
            check_containment: true,
        }
    }
}

/// Largest `N` for which the per-level containment cross-check (a sweep
/// over all `2^N` subsets) runs.
pub const CONTAINMENT_CHECK_MAX_N: usize = 14;

/// Ledger state after one level.
#[derive(Debug, Clone)]
pub struct GimelLedger {
    pub level: usize,
    pub families: Vec<IndexSet>,
}

/// Per-level outcome of a ledger run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LevelReport {
    pub level: usize,
    pub attempts: u64,
    pub ledger_size: usize,
    pub max_member_size: usize,
    /// `N_k` for this level, as an exact rational string.
    pub n_k: String,
    /// `|V| <= N_k` for every member.
    pub size_bound_ok: bool,
    /// `|ledger| <= A^k`.
    pub count_bound_ok: bool,
    /// Every directly-found bad subset is contained in some member;
    /// `None` when the sweep was skipped.
    pub containment_ok: Option<bool>,
}

/// Outcome report of a construction.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConstructReport {
    pub mode: String,
    pub epsilon: String,
    /// `ceil(eps N)`: subsets of at least this size must be served.
    pub threshold: usize,
    pub certified: bool,
    /// Oracle mode: family redraws used.
    pub attempts: u64,
    pub levels: Vec<LevelReport>,
    pub lambda: Option<String>,
    pub a: Option<String>,
    pub n_k: Option<Vec<String>>,
    pub schedule_vacuous: Option<bool>,
    pub final_max_member_size: Option<usize>,
}

/// Builds a family of `params.m` partitions.
///
/// Requires `eps > ((r-1)/r)^m`; below the threshold the greedy adversary
/// always wins and no family exists.
pub fn construct_family(
    config: &PointConfig,
    params: &RobustParams,
    mode: ConstructMode,
    options: &ConstructOptions,
) -> Result<(PartitionFamily, ConstructReport)> {
    if config.n_points() != params.n_points {
        return Err(Error::LabelCountMismatch {
            expected: config.n_points(),
            got: params.n_points,
        });
    }
    let threshold_rat = params.epsilon.clone()
        * Rational::from_integer((params.n_points as i64).into());
    let threshold = ceil_to_usize(&threshold_rat)?;
    if params.epsilon <= epsilon_threshold(params.m, params.r)? {
        return Err(Error::BelowThreshold {
            threshold: format_rational(&epsilon_threshold(params.m, params.r)?),
        });
    }

    match mode {
        ConstructMode::Oracle => construct_oracle(config, params, options, threshold),
        ConstructMode::Ledger => construct_ledger(config, params, options, threshold),
    }
}

fn construct_oracle(
    config: &PointConfig,
    params: &RobustParams,
    options: &ConstructOptions,
    threshold: usize,
) -> Result<(PartitionFamily, ConstructReport)> {
    let n = config.n_points();
    let verify_opts = VerifyOptions {
        strategy: VerifyStrategy::Exhaustive,
        greedy_shortcut: true,
    };
    for attempt in 0..options.budget {
        let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
        rng.set_stream(attempt);
        let partitions: Vec<Partition> = (0..params.m)
            .map(|_| random_partition(n, params.r, &mut rng))
            .collect();
        let family = PartitionFamily {
            r: params.r,
            partitions,
            seed: options.seed,
        };
        let report = verify_family(config, &family, &params.epsilon, &verify_opts)?;
        if matches!(report.verdict, Verdict::Robust) {
            let report = ConstructReport {
                mode: "oracle".into(),
                epsilon: format_rational(&params.epsilon),
                threshold,
                certified: true,
                attempts: attempt + 1,
                levels: vec![],
                lambda: None,
                a: None,
                n_k: None,
                schedule_vacuous: None,
                final_max_member_size: None,
            };
            return Ok((family, report));
        }
    }
    Err(Error::RetryBudgetExhausted {
        budget: options.budget,
        attempts: options.budget,
    })
}

/// Pruned to distinct, containment-maximal masks.
fn prune_maximal(mut masks: Vec<IndexSet>) -> Vec<IndexSet> {
    masks.sort_unstable();
    masks.dedup();
    masks.sort_unstable_by_key(|b| std::cmp::Reverse(b.len()));
    let mut maximal: Vec<IndexSet> = Vec::new();
    for m in masks {
        if !maximal.iter().any(|big| m.is_subset_of(big)) {
            maximal.push(m);
        }
    }
    maximal
}

/// Masks of classes whose picked point misses each certificate halfspace,
/// pruned to the maximal ones (a smaller missed-set can never beat a
/// larger one, neither in the acceptance test nor in the ledger update).
fn missed_masks(
    lifted: &LiftedFamily,
    partition: &Partition,
    hs: &HalfspaceFamily,
) -> Vec<IndexSet> {
    let n = partition.n_points();
    let masks: Vec<IndexSet> = hs
        .halfspaces
        .iter()
        .map(|h| {
            let mut z = IndexSet::empty();
            for i in 0..n {
                let pt = &lifted.classes[i][partition.labels[i] - 1];
                if !h.contains(pt) {
                    z.insert(i);
                }
            }
            z
        })
        .collect();
    prune_maximal(masks)
}

fn construct_ledger(
    config: &PointConfig,
    params: &RobustParams,
    options: &ConstructOptions,
    threshold: usize,
) -> Result<(PartitionFamily, ConstructReport)> {
    let n = config.n_points();
    if n > crate::subset::MAX_POINTS {
        return Err(Error::TooManyPoints {
            max: crate::subset::MAX_POINTS,
            got: n,
        });
    }
    let lifted = lift(config, params.r)?;
    let sched = schedule(params, lifted.lifted_dim, options.lambda)?;
    let hs = halfspace_family(lifted.lifted_dim, &lifted.all_points())?;
    // The certificate family is bounded by |union F|^n = A.
    debug_assert!(BigUint::from(hs.len()) <= sched.a);

    let full = IndexSet::full(n)?;
    let mut gimel = GimelLedger {
        level: 0,
        families: vec![full],
    };
    let mut partitions: Vec<Partition> = Vec::with_capacity(params.m);
    let mut levels: Vec<LevelReport> = Vec::with_capacity(params.m);
    let r_rat = Rational::from_integer((params.r as i64).into());

    for k in 1..=params.m {
        let mut accepted: Option<(Partition, Vec<IndexSet>, u64)> = None;
        for attempt in 0..options.budget {
            let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
            rng.set_stream(((k as u64) << 40) | attempt);
            let candidate = random_partition(n, params.r, &mut rng);
            let missed = missed_masks(&lifted, &candidate, &hs);
            // Accept when sum_i x_i >= |V|/r - lambda for every ledger
            // member V and every halfspace; checking the maximal missed
            // masks covers all halfspaces.
            let ok = gimel.families.iter().all(|v| {
                missed.iter().all(|z| {
                    let hit = v.len() - v.intersection(z).len();
                    Rational::from_integer((hit as i64).into())
                        >= Rational::from_integer((v.len() as i64).into()) / r_rat.clone()
                            - sched.lambda.clone()
                })
            });
            if ok {
                accepted = Some((candidate, missed, attempt + 1));
                break;
            }
        }
        let Some((partition, missed, attempts)) = accepted else {
            return Err(Error::RetryBudgetExhausted {
                budget: options.budget,
                attempts: options.budget,
            });
        };

        let next: Vec<IndexSet> = gimel
            .families
            .iter()
            .flat_map(|v| missed.iter().map(move |z| v.intersection(z)))
            .collect();
        gimel = GimelLedger {
            level: k,
            families: prune_maximal(next),
        };
        partitions.push(partition);

        let n_k = &sched.n_k[k];
        let size_bound_ok = gimel
            .families
            .iter()
            .all(|v| Rational::from_integer((v.len() as i64).into()) <= *n_k);
        let count_bound_ok =
            BigUint::from(gimel.families.len()) <= num_traits::pow(sched.a.clone(), k);
        let containment_ok = if options.check_containment && n <= CONTAINMENT_CHECK_MAX_N {
            Some(containment_check(config, &lifted, &partitions, &gimel)?)
        } else {
            None
        };
        let max_member_size = gimel.families.iter().map(IndexSet::len).max().unwrap_or(0);
        levels.push(LevelReport {
            level: k,
            attempts,
            ledger_size: gimel.families.len(),
            max_member_size,
            n_k: format_rational(n_k),
            size_bound_ok,
            count_bound_ok,
            containment_ok,
        });
    }

    let final_max = gimel.families.iter().map(IndexSet::len).max().unwrap_or(0);
    let certified = final_max < threshold
        && levels.iter().all(|l| l.size_bound_ok && l.count_bound_ok)
        && levels.iter().all(|l| l.containment_ok != Some(false));

    let family = PartitionFamily {
        r: params.r,
        partitions,
        seed: options.seed,
    };
    let report = ConstructReport {
        mode: "ledger".into(),
        epsilon: format_rational(&params.epsilon),
        threshold,
        certified,
        attempts: levels.iter().map(|l| l.attempts).sum(),
        levels,
        lambda: Some(format_rational(&sched.lambda)),
        a: Some(sched.a.to_string()),
        n_k: Some(sched.n_k.iter().map(format_rational).collect()),
        schedule_vacuous: Some(sched.vacuous),
        final_max_member_size: Some(final_max),
    };
    Ok((family, report))
}

/// Sweeps all subsets, finds the ones no partition so far serves (by the
/// direct hull test, independently of the halfspace machinery), and
/// checks each is contained in a ledger member.
fn containment_check(
    config: &PointConfig,
    lifted: &LiftedFamily,
    partitions: &[Partition],
    gimel: &GimelLedger,
) -> Result<bool> {
    let n = config.n_points();
    for mask in 0u64..(1u64 << n) {
        let subset = IndexSet(mask);
        let mut bad = true;
        for p in partitions {
            if is_tverberg(config, p, lifted, &subset)?.is_tverberg {
                bad = false;
                break;
            }
        }
        if bad && !gimel.families.iter().any(|v| subset.is_subset_of(v)) {
            return Ok(false);
        }
    }
    Ok(true)
}
