//! Subset enumeration and assignments of refinement channels to encoders.

use itertools::Itertools;

use crate::error::{Error, Result};

/// All size-`m` subsets of `0..ell` in lexicographic order, each sorted ascending.
pub fn subsets(ell: usize, m: usize) -> Vec<Vec<usize>> {
    (0..ell).combinations(m).collect()
}

/// An assignment of every source index to exactly one encoder subset that contains it.
///
/// `parts[k]` is the set attached to `subsets[k]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OmegaAssignment {
    pub ell: usize,
    pub m: usize,
    pub subsets: Vec<Vec<usize>>,
    pub parts: Vec<Vec<usize>>,
}

impl OmegaAssignment {
    /// Builds and validates an assignment from parts aligned with [`subsets`]`(ell, m)`.
    pub fn new(ell: usize, m: usize, parts: Vec<Vec<usize>>) -> Result<Self> {
        let omega = Self {
            ell,
            m,
            subsets: subsets(ell, m),
            parts,
        };
        omega.validate()?;
        Ok(omega)
    }

    /// Builds an assignment from `(subset, part)` pairs; unlisted subsets get nothing.
    pub fn from_pairs(ell: usize, m: usize, pairs: &[(Vec<usize>, Vec<usize>)]) -> Result<Self> {
        let all = subsets(ell, m);
        let mut parts = vec![Vec::new(); all.len()];
        for (subset, part) in pairs {
            let mut key = subset.clone();
            key.sort_unstable();
            let k = all.iter().position(|s| *s == key).ok_or_else(|| {
                Error::InvalidPartition(format!("{subset:?} is not a size-{m} subset of 0..{ell}"))
            })?;
            parts[k] = part.clone();
        }
        Self::new(ell, m, parts)
    }

    /// Each part lies inside its subset, parts are pairwise disjoint, and they cover `0..ell`.
    pub fn validate(&self) -> Result<()> {
        if self.parts.len() != self.subsets.len() {
            return Err(Error::InvalidPartition(format!(
                "{} parts for {} subsets",
                self.parts.len(),
                self.subsets.len()
            )));
        }
        let mut owner = vec![None; self.ell];
        for (k, (subset, part)) in self.subsets.iter().zip(&self.parts).enumerate() {
            for &i in part {
                if !subset.contains(&i) {
                    return Err(Error::InvalidPartition(format!(
                        "index {i} assigned to subset {subset:?} that does not contain it"
                    )));
                }
                if let Some(prev) = owner[i].replace(k) {
                    return Err(Error::InvalidPartition(format!(
                        "index {i} assigned to both {:?} and {subset:?}",
                        self.subsets[prev]
                    )));
                }
            }
        }
        if let Some(i) = owner.iter().position(Option::is_none) {
            return Err(Error::InvalidPartition(format!("index {i} is not covered")));
        }
        Ok(())
    }
}

/// The canonical assignment: `{0..m-1}` takes all of itself and the window
/// `{i-m+1..i}` takes `{i}` for `i = m..ell-1`; every other subset gets nothing.
pub fn omega_partition(ell: usize, m: usize) -> OmegaAssignment {
    let all = subsets(ell, m);
    let parts = all
        .iter()
        .map(|s| {
            let last = *s.last().expect("m >= 1");
            let contiguous = last + 1 == s[0] + m;
            if contiguous && last + 1 == m {
                s.clone()
            } else if contiguous {
                vec![last]
            } else {
                Vec::new()
            }
        })
        .collect();
    OmegaAssignment {
        ell,
        m,
        subsets: all,
        parts,
    }
}
