//! Lower-bound adversary and robustness verification.
//!
//! The greedy adversary defeats any `m` partitions: repeatedly deleting a
//! smallest part leaves at least `N ((r-1)/r)^m` points on which every
//! partition has an empty part.  The verifiers decide whether a family
//! serves every subset of at least `ceil(eps N)` points, either by direct
//! subset enumeration (the subset quantifier is downward closed, so the
//! single layer at the threshold size decides), through the certificate
//! halfspaces in the lifted space, or by Monte Carlo sampling.  Every
//! violation comes with a per-partition witness that re-checks under
//! exact arithmetic.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::PointConfig;
use crate::error::{Error, Result};
use crate::halfspaces::{halfspace_family, Halfspace, HalfspaceFamily};
use crate::hull::{origin_in_hull, HullCertificate};
use crate::lift::{is_tverberg, lift, restrict_transversal, LiftedFamily, Partition, TverbergCert};
use crate::robust::PartitionFamily;
use crate::scalar::ceil_to_usize;
use crate::subset::{k_subsets, random_k_subset, IndexSet, MAX_POINTS};
use crate::Rational;

/// Why one partition fails on a subset.
#[derive(Debug, Clone)]
pub enum PerKWitness {
    /// The subset misses part `part` (1-based) entirely.
    EmptyPart { part: usize },
    /// Halfspace containing the origin and disjoint from the subset's
    /// lifted transversal under this partition.
    Separation { witness: Halfspace },
}

/// A subset on which no family member induces a Tverberg partition,
/// with one witness per partition.
#[derive(Debug, Clone)]
pub struct BadSubsetCertificate {
    /// 0-based point indices, sorted.
    pub indices: Vec<usize>,
    pub witnesses: Vec<PerKWitness>,
}

impl BadSubsetCertificate {
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Exact re-check of every witness against the family.
    pub fn recheck(&self, config: &PointConfig, family: &PartitionFamily) -> Result<bool> {
        if self.witnesses.len() != family.m() {
            return Ok(false);
        }
        let lifted = lift(config, family.r)?;
        let subset = IndexSet::from_indices(&self.indices)?;
        for (partition, witness) in family.partitions.iter().zip(&self.witnesses) {
            match witness {
                PerKWitness::EmptyPart { part } => {
                    if *part < 1 || *part > partition.r {
                        return Ok(false);
                    }
                    if self.indices.iter().any(|&i| partition.labels[i] == *part) {
                        return Ok(false);
                    }
                }
                PerKWitness::Separation { witness } => {
                    if !witness.contains_origin() {
                        return Ok(false);
                    }
                    let transversal = restrict_transversal(partition, &lifted, &subset);
                    if transversal.iter().any(|p| witness.contains(p)) {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }
}

/// Deletes, for each partition in turn, all surviving points of a
/// minimum-size part (ties to the lowest label).  The survivors defeat
/// every partition by an empty part and number at least
/// `N ((r-1)/r)^m`.
pub fn greedy_adversary(
    config: &PointConfig,
    family: &PartitionFamily,
) -> Result<BadSubsetCertificate> {
    family.check_against(config)?;
    let n = config.n_points();
    let mut alive = vec![true; n];
    let mut witnesses = Vec::with_capacity(family.m());
    for partition in &family.partitions {
        let mut counts = vec![0usize; partition.r];
        for i in 0..n {
            if alive[i] {
                counts[partition.labels[i] - 1] += 1;
            }
        }
        let (best, _) = counts
            .iter()
            .enumerate()
            .min_by_key(|&(j, &c)| (c, j))
            .expect("r >= 1");
        let part = best + 1;
        for i in 0..n {
            if alive[i] && partition.labels[i] == part {
                alive[i] = false;
            }
        }
        witnesses.push(PerKWitness::EmptyPart { part });
    }
    let indices: Vec<usize> = (0..n).filter(|&i| alive[i]).collect();
    Ok(BadSubsetCertificate { indices, witnesses })
}

/// Distinct containment-maximal masks.
pub(crate) fn prune_maximal(mut masks: Vec<IndexSet>) -> Vec<IndexSet> {
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

fn prune_maximal_with<T: Clone>(mut items: Vec<(IndexSet, T)>) -> Vec<(IndexSet, T)> {
    items.sort_unstable_by_key(|(m, _)| *m);
    items.dedup_by_key(|(m, _)| *m);
    items.sort_unstable_by_key(|(m, _)| std::cmp::Reverse(m.len()));
    let mut maximal: Vec<(IndexSet, T)> = Vec::new();
    for (m, t) in items {
        if !maximal.iter().any(|(big, _)| m.is_subset_of(big)) {
            maximal.push((m, t));
        }
    }
    maximal
}

/// For each certificate halfspace, the classes whose picked lifted point
/// misses it; pruned to maximal masks with a representative halfspace
/// index each.  A smaller missed-set can never beat a larger one, in the
/// acceptance test or in the ledger update, so pruning loses nothing.
pub(crate) fn missed_masks_with(
    lifted: &LiftedFamily,
    partition: &Partition,
    hs: &HalfspaceFamily,
) -> Vec<(IndexSet, usize)> {
    let n = partition.n_points();
    let masks: Vec<(IndexSet, usize)> = hs
        .halfspaces
        .iter()
        .enumerate()
        .map(|(hi, h)| {
            let mut z = IndexSet::empty();
            for i in 0..n {
                let pt = &lifted.classes[i][partition.labels[i] - 1];
                if !h.contains(pt) {
                    z.insert(i);
                }
            }
            (z, hi)
        })
        .collect();
    prune_maximal_with(masks)
}

fn witness_for(
    partition: &Partition,
    subset: &IndexSet,
    hs: &HalfspaceFamily,
    h_idx: usize,
) -> PerKWitness {
    // Prefer the empty-part reading when it applies; otherwise the
    // halfspace that defined the mask separates the lifted transversal.
    for j in 1..=partition.r {
        if subset.iter().all(|i| partition.labels[i] != j) {
            return PerKWitness::EmptyPart { part: j };
        }
    }
    PerKWitness::Separation {
        witness: hs.halfspaces[h_idx].clone(),
    }
}

/// Default combination budget for [`maximal_bad_subsets`].
pub const DEFAULT_ENUMERATION_BUDGET: u128 = 10_000_000;

/// All containment-maximal subsets on which the family fails, with
/// certificates.  Complete: every bad subset is contained in some
/// returned set.
///
/// Works through the certificate halfspaces of the lifted points: a
/// subset defeats partition `k` exactly when some halfspace misses its
/// whole picked transversal, so the maximal bad sets are the maximal
/// intersections of per-partition missed-masks.
pub fn maximal_bad_subsets(
    config: &PointConfig,
    family: &PartitionFamily,
    budget: u128,
) -> Result<Vec<BadSubsetCertificate>> {
    family.check_against(config)?;
    let n = config.n_points();
    if n > MAX_POINTS {
        return Err(Error::TooManyPoints {
            max: MAX_POINTS,
            got: n,
        });
    }
    let lifted = lift(config, family.r)?;
    let hs = halfspace_family(lifted.lifted_dim, &lifted.all_points())?;

    let full = IndexSet::full(n)?;
    // Paths carry one halfspace index per processed level.
    let mut acc: Vec<(IndexSet, Vec<usize>)> = vec![(full, vec![])];
    for partition in &family.partitions {
        let layer = missed_masks_with(&lifted, partition, &hs);
        let work = (acc.len() as u128) * (layer.len() as u128);
        if work > budget {
            return Err(Error::EnumerationBudget {
                needed: work,
                budget,
            });
        }
        let expanded: Vec<(IndexSet, Vec<usize>)> = acc
            .par_iter()
            .flat_map_iter(|(mask, path)| {
                layer.iter().map(move |(z, hi)| {
                    let mut path = path.clone();
                    path.push(*hi);
                    (mask.intersection(z), path)
                })
            })
            .collect();
        acc = prune_maximal_with(expanded);
    }

    let certs = acc
        .into_iter()
        .map(|(mask, path)| {
            let witnesses = family
                .partitions
                .iter()
                .zip(&path)
                .map(|(p, &hi)| witness_for(p, &mask, &hs, hi))
                .collect();
            BadSubsetCertificate {
                indices: mask.to_vec(),
                witnesses,
            }
        })
        .collect();
    Ok(certs)
}

/// Verification verdict.
#[derive(Debug, Clone)]
pub enum Verdict {
    Robust,
    Violated(BadSubsetCertificate),
}

/// Verification route.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyStrategy {
    /// Enumerate the maximal bad subsets through the halfspace
    /// certificates; also yields the exact largest bad size.
    MaximalBadSubsets,
    /// Direct check of every subset at the threshold size (subsets above
    /// it are covered by downward closure of badness).
    Exhaustive,
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub strategy: VerifyStrategy,
    /// Try the greedy adversary first; when its bad set already reaches
    /// the threshold the verdict is settled without any search.
    pub greedy_shortcut: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            strategy: VerifyStrategy::MaximalBadSubsets,
            greedy_shortcut: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub verdict: Verdict,
    /// `ceil(eps N)`.
    pub threshold: usize,
    /// Exact size of the largest bad subset; reported by the
    /// maximal-bad-subsets route only.
    pub max_bad_size: Option<usize>,
    pub via_greedy: bool,
}

impl VerifyReport {
    pub fn is_robust(&self) -> bool {
        matches!(self.verdict, Verdict::Robust)
    }
}

fn threshold_size(epsilon: &Rational, n: usize) -> Result<usize> {
    if *epsilon <= Rational::from_integer(0.into())
        || *epsilon > Rational::from_integer(1.into())
    {
        return Err(Error::EpsilonOutOfRange {
            range: "(0, 1]",
            got: num_traits::ToPrimitive::to_f64(epsilon).unwrap_or(f64::NAN),
        });
    }
    ceil_to_usize(&(epsilon.clone() * Rational::from_integer((n as i64).into())))
}

fn subset_witnesses(
    config: &PointConfig,
    family: &PartitionFamily,
    lifted: &LiftedFamily,
    subset: &IndexSet,
) -> Result<Option<BadSubsetCertificate>> {
    let mut witnesses = Vec::with_capacity(family.m());
    for partition in &family.partitions {
        let check = is_tverberg(config, partition, lifted, subset)?;
        if check.is_tverberg {
            return Ok(None);
        }
        witnesses.push(match check.certificate {
            TverbergCert::EmptyPart { part } => PerKWitness::EmptyPart { part },
            TverbergCert::Separation { witness } => PerKWitness::Separation { witness },
            TverbergCert::CommonPoint { .. } => unreachable!("not a Tverberg partition"),
        });
    }
    Ok(Some(BadSubsetCertificate {
        indices: subset.to_vec(),
        witnesses,
    }))
}

/// Decides whether every subset of at least `ceil(eps N)` points is
/// served by some family member.
pub fn verify_family(
    config: &PointConfig,
    family: &PartitionFamily,
    epsilon: &Rational,
    options: &VerifyOptions,
) -> Result<VerifyReport> {
    family.check_against(config)?;
    let n = config.n_points();
    let threshold = threshold_size(epsilon, n)?;

    if options.greedy_shortcut {
        let cert = greedy_adversary(config, family)?;
        if cert.len() >= threshold {
            debug_assert!(cert.recheck(config, family)?);
            return Ok(VerifyReport {
                verdict: Verdict::Violated(cert),
                threshold,
                max_bad_size: None,
                via_greedy: true,
            });
        }
    }

    match options.strategy {
        VerifyStrategy::MaximalBadSubsets => {
            let certs = maximal_bad_subsets(config, family, DEFAULT_ENUMERATION_BUDGET)?;
            let max_bad = certs.iter().map(BadSubsetCertificate::len).max().unwrap_or(0);
            let worst = certs
                .into_iter()
                .filter(|c| c.len() >= threshold)
                .max_by_key(BadSubsetCertificate::len);
            match worst {
                Some(cert) => Ok(VerifyReport {
                    verdict: Verdict::Violated(cert),
                    threshold,
                    max_bad_size: Some(max_bad),
                    via_greedy: false,
                }),
                None => Ok(VerifyReport {
                    verdict: Verdict::Robust,
                    threshold,
                    max_bad_size: Some(max_bad),
                    via_greedy: false,
                }),
            }
        }
        VerifyStrategy::Exhaustive => {
            if n > MAX_POINTS {
                return Err(Error::TooManyPoints {
                    max: MAX_POINTS,
                    got: n,
                });
            }
            if threshold > n {
                return Ok(VerifyReport {
                    verdict: Verdict::Robust,
                    threshold,
                    max_bad_size: None,
                    via_greedy: false,
                });
            }
            let lifted = lift(config, family.r)?;
            for subset in k_subsets(n, threshold)? {
                if let Some(cert) = subset_witnesses(config, family, &lifted, &subset)? {
                    return Ok(VerifyReport {
                        verdict: Verdict::Violated(cert),
                        threshold,
                        max_bad_size: None,
                        via_greedy: false,
                    });
                }
            }
            Ok(VerifyReport {
                verdict: Verdict::Robust,
                threshold,
                max_bad_size: None,
                via_greedy: false,
            })
        }
    }
}

/// Monte Carlo robustness estimate.
#[derive(Debug, Clone)]
pub struct McReport {
    pub trials: u64,
    pub bad: u64,
    pub rate: f64,
    pub threshold: usize,
    /// Witness from the lowest-index bad trial, if any.
    pub certificate: Option<BadSubsetCertificate>,
}

/// Samples `trials` uniform subsets of size `ceil(eps N)` and reports the
/// fraction defeating the whole family.  Deterministic in `seed`; trials
/// run in parallel and are merged in trial order.
pub fn monte_carlo_verify(
    config: &PointConfig,
    family: &PartitionFamily,
    epsilon: &Rational,
    trials: u64,
    seed: u64,
) -> Result<McReport> {
    family.check_against(config)?;
    let n = config.n_points();
    if n > MAX_POINTS {
        return Err(Error::TooManyPoints {
            max: MAX_POINTS,
            got: n,
        });
    }
    if trials == 0 {
        return Err(Error::BadInput("trials must be at least 1".into()));
    }
    let threshold = threshold_size(epsilon, n)?;
    if threshold > n {
        return Ok(McReport {
            trials,
            bad: 0,
            rate: 0.0,
            threshold,
            certificate: None,
        });
    }
    let lifted = lift(config, family.r)?;

    let hits: Vec<(u64, IndexSet)> = (0..trials)
        .into_par_iter()
        .filter_map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(t);
            let subset = random_k_subset(n, threshold, &mut rng).ok()?;
            let bad = family.partitions.iter().all(|p| {
                is_tverberg(config, p, &lifted, &subset)
                    .map(|c| !c.is_tverberg)
                    .unwrap_or(false)
            });
            bad.then_some((t, subset))
        })
        .collect();

    let bad = hits.len() as u64;
    let certificate = hits
        .into_iter()
        .min_by_key(|(t, _)| *t)
        .map(|(_, subset)| subset_witnesses(config, family, &lifted, &subset))
        .transpose()?
        .flatten();

    Ok(McReport {
        trials,
        bad,
        rate: bad as f64 / trials as f64,
        threshold,
        certificate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{points, Distribution};
    use crate::robust::sample_family;
    use crate::scalar::parse_rational;

    fn rat(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    fn radon_config() -> PointConfig {
        PointConfig::new(
            2,
            vec![
                vec![rat("0"), rat("0")],
                vec![rat("2"), rat("0")],
                vec![rat("1"), rat("2")],
                vec![rat("1"), rat("1/2")],
            ],
        )
        .unwrap()
    }

    fn radon_family() -> PartitionFamily {
        PartitionFamily {
            r: 2,
            partitions: vec![Partition::new(2, vec![1, 1, 1, 2]).unwrap()],
            seed: 0,
        }
    }

    #[test]
    fn greedy_leaves_the_guaranteed_fraction() {
        let cfg = points(1, 8, Distribution::Cube, 3).unwrap();
        let fam = sample_family(&cfg, 2, 2, 17).unwrap();
        let cert = greedy_adversary(&cfg, &fam).unwrap();
        assert!(cert.len() >= 2, "8 * (1/2)^2 = 2");
        assert!(cert.recheck(&cfg, &fam).unwrap());
    }

    #[test]
    fn greedy_with_no_partitions_returns_everything() {
        let cfg = points(1, 5, Distribution::Cube, 3).unwrap();
        let fam = PartitionFamily {
            r: 2,
            partitions: vec![],
            seed: 0,
        };
        let cert = greedy_adversary(&cfg, &fam).unwrap();
        assert_eq!(cert.len(), 5);
        assert!(cert.witnesses.is_empty());
        assert!(cert.recheck(&cfg, &fam).unwrap());
    }

    #[test]
    fn radon_instance_maximal_bad_subsets() {
        // The full set is served; every 3-subset defeats the single
        // partition (dropping the inner point empties part 2; dropping a
        // triangle vertex leaves the inner point off the remaining edge).
        let cfg = radon_config();
        let fam = radon_family();
        let certs = maximal_bad_subsets(&cfg, &fam, DEFAULT_ENUMERATION_BUDGET).unwrap();
        let mut sets: Vec<Vec<usize>> = certs.iter().map(|c| c.indices.clone()).collect();
        sets.sort();
        assert_eq!(
            sets,
            vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]]
        );
        for c in &certs {
            assert!(c.recheck(&cfg, &fam).unwrap());
        }
    }

    #[test]
    fn radon_maximal_sets_agree_with_brute_force() {
        let cfg = radon_config();
        let fam = radon_family();
        let lifted = lift(&cfg, 2).unwrap();
        // Brute force over all 16 subsets.
        let mut bad_masks: Vec<IndexSet> = Vec::new();
        for mask in 0u64..16 {
            let subset = IndexSet(mask);
            let bad = fam
                .partitions
                .iter()
                .all(|p| !is_tverberg(&cfg, p, &lifted, &subset).unwrap().is_tverberg);
            if bad {
                bad_masks.push(subset);
            }
        }
        let expect = prune_maximal(bad_masks);
        let got = maximal_bad_subsets(&cfg, &fam, DEFAULT_ENUMERATION_BUDGET).unwrap();
        let mut got_masks: Vec<IndexSet> = got
            .iter()
            .map(|c| IndexSet::from_indices(&c.indices).unwrap())
            .collect();
        got_masks.sort_unstable();
        let mut expect = expect;
        expect.sort_unstable();
        assert_eq!(got_masks, expect);
    }

    #[test]
    fn verify_radon_at_eps_one_is_robust() {
        let cfg = radon_config();
        let fam = radon_family();
        for strategy in [VerifyStrategy::Exhaustive, VerifyStrategy::MaximalBadSubsets] {
            let opts = VerifyOptions {
                strategy,
                greedy_shortcut: false,
            };
            let report = verify_family(&cfg, &fam, &rat("1"), &opts).unwrap();
            assert!(report.is_robust(), "{strategy:?}");
            assert_eq!(report.threshold, 4);
        }
    }

    #[test]
    fn verify_radon_at_three_quarters_is_violated() {
        let cfg = radon_config();
        let fam = radon_family();
        for strategy in [VerifyStrategy::Exhaustive, VerifyStrategy::MaximalBadSubsets] {
            let opts = VerifyOptions {
                strategy,
                greedy_shortcut: false,
            };
            let report = verify_family(&cfg, &fam, &rat("3/4"), &opts).unwrap();
            match &report.verdict {
                Verdict::Violated(cert) => {
                    assert_eq!(cert.len(), 3);
                    assert!(cert.recheck(&cfg, &fam).unwrap());
                }
                Verdict::Robust => panic!("{strategy:?} missed the violation"),
            }
        }
    }

    #[test]
    fn greedy_shortcut_settles_low_epsilon() {
        let cfg = points(1, 16, Distribution::Cube, 9).unwrap();
        let fam = sample_family(&cfg, 2, 1, 4).unwrap();
        // eps N = 8 <= greedy bound, so the shortcut must fire.
        let report = verify_family(&cfg, &fam, &rat("1/2"), &VerifyOptions::default()).unwrap();
        assert!(report.via_greedy);
        assert!(!report.is_robust());
    }

    #[test]
    fn monte_carlo_finds_the_radon_violation() {
        let cfg = radon_config();
        let fam = radon_family();
        let report = monte_carlo_verify(&cfg, &fam, &rat("3/4"), 1000, 5).unwrap();
        assert!(report.rate > 0.0);
        let cert = report.certificate.expect("certificate");
        assert!(cert.recheck(&cfg, &fam).unwrap());
    }

    #[test]
    fn monte_carlo_is_deterministic() {
        let cfg = points(2, 10, Distribution::Cube, 21).unwrap();
        let fam = sample_family(&cfg, 2, 2, 22).unwrap();
        let a = monte_carlo_verify(&cfg, &fam, &rat("4/5"), 300, 7).unwrap();
        let b = monte_carlo_verify(&cfg, &fam, &rat("4/5"), 300, 7).unwrap();
        assert_eq!(a.bad, b.bad);
        assert_eq!(
            a.certificate.map(|c| c.indices),
            b.certificate.map(|c| c.indices)
        );
    }

    #[test]
    fn robust_family_has_zero_monte_carlo_rate() {
        let cfg = radon_config();
        let fam = radon_family();
        let report = monte_carlo_verify(&cfg, &fam, &rat("1"), 200, 3).unwrap();
        assert_eq!(report.bad, 0);
        assert!(report.certificate.is_none());
    }
}
