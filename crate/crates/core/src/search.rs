//! Exhaustive search for a Tverberg partition of a whole configuration.
//!
//! Enumerates set partitions into exactly `r` nonempty blocks in
//! restricted-growth order (one representative per relabeling class; the
//! Tverberg property is label-symmetric) and returns the first that
//! works.  For `N = (r-1)(d+1)+1` points a Tverberg partition always
//! exists, so at the tight size this never returns `None` -- which the
//! test suite leans on.

use crate::config::PointConfig;
use crate::error::Result;
use crate::lift::{is_tverberg, lift, Partition};
use crate::subset::IndexSet;

/// First Tverberg partition of the full configuration into `r` nonempty
/// parts, in restricted-growth enumeration order.
pub fn find_tverberg_partition(config: &PointConfig, r: usize) -> Result<Option<Partition>> {
    let n = config.n_points();
    if n < r {
        return Ok(None);
    }
    let lifted = lift(config, r)?;
    let full = IndexSet::full(n.min(64))?;

    // Restricted growth string: a[0] = 0, a[i] <= max(a[..i]) + 1.
    let mut a = vec![0usize; n];
    let mut found = None;
    enumerate_rgs(&mut a, 1, 1, r, &mut |labels0| {
        if found.is_some() {
            return;
        }
        let labels: Vec<usize> = labels0.iter().map(|&x| x + 1).collect();
        let partition = Partition::new(r, labels).expect("labels in range");
        if let Ok(check) = is_tverberg(config, &partition, &lifted, &full) {
            if check.is_tverberg {
                found = Some(partition);
            }
        }
    });
    Ok(found)
}

/// Calls `f` for every restricted growth string over exactly `r` values.
fn enumerate_rgs(a: &mut Vec<usize>, pos: usize, used: usize, r: usize, f: &mut impl FnMut(&[usize])) {
    let n = a.len();
    if pos == n {
        if used == r {
            f(a);
        }
        return;
    }
    // Remaining positions must still be able to reach r distinct values.
    let remaining = n - pos;
    let max_next = (used + 1).min(r);
    for v in 0..max_next {
        if used.max(v + 1) + remaining - 1 >= r {
            a[pos] = v;
            enumerate_rgs(a, pos + 1, used.max(v + 1), r, f);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::parse_rational;

    fn cfg(dim: usize, pts: &[&[&str]]) -> PointConfig {
        PointConfig::new(
            dim,
            pts.iter()
                .map(|p| p.iter().map(|s| parse_rational(s).unwrap()).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn radon_four_points_in_the_plane() {
        let c = cfg(2, &[&["0", "0"], &["2", "0"], &["1", "2"], &["1", "1/2"]]);
        let p = find_tverberg_partition(&c, 2).unwrap().unwrap();
        assert_eq!(p.r, 2);
        assert_eq!(p.labels.len(), 4);
    }

    #[test]
    fn too_few_points_for_r_parts() {
        let c = cfg(1, &[&["0"], &["1"]]);
        assert!(find_tverberg_partition(&c, 3).unwrap().is_none());
    }

    #[test]
    fn three_collinear_into_two_parts() {
        let c = cfg(1, &[&["-1"], &["0"], &["1"]]);
        let p = find_tverberg_partition(&c, 2).unwrap().unwrap();
        // Middle point alone against the outer pair is the first hit.
        assert_eq!(p.labels.iter().filter(|&&l| l == 1).count() + p.labels.iter().filter(|&&l| l == 2).count(), 3);
    }
}
