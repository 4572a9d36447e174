//! Small index sets as bitmasks, plus subset enumeration and sampling.
//!
//! Everything that enumerates subsets in this crate is desk scale, so a
//! `u64` mask (up to 64 points) is deliberate.

use rand::Rng;

use crate::error::{Error, Result};

pub const MAX_POINTS: usize = 64;

/// A subset of `{0, .., n-1}` for `n <= 64`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct IndexSet(pub u64);

impl IndexSet {
    pub fn empty() -> Self {
        IndexSet(0)
    }

    pub fn full(n: usize) -> Result<Self> {
        check_capacity(n)?;
        Ok(IndexSet(if n == 64 { u64::MAX } else { (1u64 << n) - 1 }))
    }

    pub fn from_indices(indices: &[usize]) -> Result<Self> {
        let mut mask = 0u64;
        for &i in indices {
            check_capacity(i + 1)?;
            mask |= 1 << i;
        }
        Ok(IndexSet(mask))
    }

    pub fn contains(&self, i: usize) -> bool {
        i < 64 && self.0 >> i & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        debug_assert!(i < 64);
        self.0 |= 1 << i;
    }

    pub fn remove(&mut self, i: usize) {
        self.0 &= !(1u64 << i);
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn is_subset_of(&self, other: &IndexSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersection(&self, other: &IndexSet) -> IndexSet {
        IndexSet(self.0 & other.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        let mask = self.0;
        (0..64).filter(move |i| mask >> i & 1 == 1)
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

fn check_capacity(n: usize) -> Result<()> {
    if n > MAX_POINTS {
        return Err(Error::TooManyPoints {
            max: MAX_POINTS,
            got: n,
        });
    }
    Ok(())
}

/// All size-`k` subsets of `{0, .., n-1}` in increasing mask order
/// (Gosper's hack).
pub fn k_subsets(n: usize, k: usize) -> Result<impl Iterator<Item = IndexSet>> {
    check_capacity(n)?;
    let mut cur: Option<u64> = if k > n {
        None
    } else if k == 0 {
        Some(0)
    } else {
        // k ones; written to survive k == 64.
        Some(((1u64 << (k - 1)) << 1).wrapping_sub(1))
    };
    Ok(std::iter::from_fn(move || {
        let v = cur?;
        cur = (|| {
            if v == 0 {
                return None;
            }
            let c = v & v.wrapping_neg();
            let r = v.checked_add(c)?;
            let next = r | (((r ^ v) >> 2) / c);
            if n < 64 && next >> n != 0 {
                return None;
            }
            Some(next)
        })();
        Some(IndexSet(v))
    }))
}

/// Uniformly random size-`k` subset of `{0, .., n-1}` (partial
/// Fisher-Yates; order discarded).
pub fn random_k_subset<R: Rng>(n: usize, k: usize, rng: &mut R) -> Result<IndexSet> {
    check_capacity(n)?;
    if k > n {
        return Err(Error::BadInput(format!("cannot sample {k} of {n} indices")));
    }
    let mut pool: Vec<usize> = (0..n).collect();
    let mut mask = IndexSet::empty();
    for i in 0..k {
        let j = rng.random_range(i..n);
        pool.swap(i, j);
        mask.insert(pool[i]);
    }
    Ok(mask)
}
