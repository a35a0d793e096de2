//! Bipartitions of the party set and their enumeration.
//!
//! Parties are indexed 0-based internally; the textual and JSON forms are
//! 1-based to match the usual subscript convention.

use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// An ordered split of a party set into two nonempty disjoint groups
/// `(left | right)`. Both sides are kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bipartition {
    left: Vec<usize>,
    right: Vec<usize>,
}

impl Bipartition {
    /// Builds a bipartition from explicit sides. Both must be nonempty,
    /// sorted after construction, and disjoint.
    pub fn new(mut left: Vec<usize>, mut right: Vec<usize>) -> Result<Self> {
        if left.is_empty() || right.is_empty() {
            return Err(Error::InvalidPartition("both sides must be nonempty".into()));
        }
        left.sort_unstable();
        right.sort_unstable();
        left.dedup();
        right.dedup();
        if left.iter().any(|p| right.binary_search(p).is_ok()) {
            return Err(Error::InvalidPartition("sides overlap".into()));
        }
        Ok(Self { left, right })
    }

    /// Splits `{0..n}` into `left_set` and its complement.
    pub fn split(n: usize, left_set: &[usize]) -> Result<Self> {
        if let Some(&p) = left_set.iter().find(|&&p| p >= n) {
            return Err(Error::InvalidPartition(format!(
                "party {} out of range for n = {}",
                p, n
            )));
        }
        let mut left = left_set.to_vec();
        left.sort_unstable();
        left.dedup();
        let right: Vec<usize> = (0..n).filter(|p| left.binary_search(p).is_err()).collect();
        Self::new(left, right)
    }

    pub fn left(&self) -> &[usize] {
        &self.left
    }

    pub fn right(&self) -> &[usize] {
        &self.right
    }

    /// Total number of parties covered by the two sides.
    pub fn n_parties(&self) -> usize {
        self.left.len() + self.right.len()
    }

    /// The same split with sides exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            left: self.right.clone(),
            right: self.left.clone(),
        }
    }

    /// Canonical orientation for unordered use: the side holding the
    /// smallest covered party index is stored left.
    pub fn canonical(&self) -> Self {
        if self.left[0] < self.right[0] {
            self.clone()
        } else {
            self.swapped()
        }
    }

    /// Verifies that the two sides exactly cover `{0..n}`.
    pub fn check_universe(&self, n: usize) -> Result<()> {
        if self.n_parties() != n {
            return Err(Error::InvalidPartition(format!(
                "partition covers {} parties, state has {}",
                self.n_parties(),
                n
            )));
        }
        let mut all: Vec<usize> = self.left.iter().chain(self.right.iter()).copied().collect();
        all.sort_unstable();
        if all.iter().enumerate().any(|(i, &p)| i != p) {
            return Err(Error::InvalidPartition(format!(
                "sides {:?} | {:?} do not cover 0..{}",
                self.left, self.right, n
            )));
        }
        Ok(())
    }
}

impl fmt::Display for Bipartition {
    /// 1-based compact form, e.g. `1|23`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.left {
            write!(f, "{}", p + 1)?;
        }
        write!(f, "|")?;
        for p in &self.right {
            write!(f, "{}", p + 1)?;
        }
        Ok(())
    }
}

impl Serialize for Bipartition {
    /// Serializes with 1-based party indices: `{"left":[1],"right":[2,3]}`.
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("Bipartition", 2)?;
        let one_based = |v: &[usize]| v.iter().map(|p| p + 1).collect::<Vec<_>>();
        s.serialize_field("left", &one_based(&self.left))?;
        s.serialize_field("right", &one_based(&self.right))?;
        s.end()
    }
}

/// All unordered bipartitions of `{0..n}` in canonical orientation
/// (party 0 on the left). There are exactly `2^(n-1) - 1`.
pub fn enumerate_unordered(n: usize) -> Result<Vec<Bipartition>> {
    if n < 2 {
        return Err(Error::TooFewParties { required: 2, got: n });
    }
    let full: usize = (1usize << n) - 1;
    let mut out = Vec::with_capacity((1usize << (n - 1)) - 1);
    for mask in 1..full {
        if mask & 1 == 0 {
            continue; // canonical: party 0 stays left
        }
        let left: Vec<usize> = (0..n).filter(|p| mask >> p & 1 == 1).collect();
        out.push(Bipartition::split(n, &left)?);
    }
    Ok(out)
}

/// All ordered bipartitions of `{0..n}`: both orientations of every
/// unordered split, `2 (2^(n-1) - 1)` in total.
pub fn enumerate_ordered(n: usize) -> Result<Vec<Bipartition>> {
    if n < 2 {
        return Err(Error::TooFewParties { required: 2, got: n });
    }
    let full: usize = (1usize << n) - 1;
    let mut out = Vec::with_capacity((1usize << n) - 2);
    for mask in 1..full {
        let left: Vec<usize> = (0..n).filter(|p| mask >> p & 1 == 1).collect();
        out.push(Bipartition::split(n, &left)?);
    }
    Ok(out)
}

/// All unordered bipartitions of an arbitrary subset of parties, keeping
/// the original labels. A single-party subset has none.
pub fn nested(subset: &[usize]) -> Vec<Bipartition> {
    let m = subset.len();
    if m < 2 {
        return Vec::new();
    }
    let mut sorted = subset.to_vec();
    sorted.sort_unstable();
    let full: usize = (1usize << m) - 1;
    let mut out = Vec::with_capacity((1usize << (m - 1)) - 1);
    for mask in 1..full {
        if mask & 1 == 0 {
            continue;
        }
        let left: Vec<usize> = (0..m).filter(|i| mask >> i & 1 == 1).map(|i| sorted[i]).collect();
        let right: Vec<usize> = (0..m).filter(|i| mask >> i & 1 == 0).map(|i| sorted[i]).collect();
        out.push(Bipartition::new(left, right).expect("disjoint by construction"));
    }
    out
}
