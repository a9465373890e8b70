//! Upsets of the nonempty-subset lattice.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::subset::{subset_enumerate, SubsetMask};
use crate::vector::EntropyVector;

/// Family of nonempty subsets of `[n]` closed under supersets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Upset {
    n: usize,
    /// Ascending bitmask order.
    members: Vec<SubsetMask>,
    /// Minimal members, ascending bitmask order.
    minimal: Vec<SubsetMask>,
}

impl Upset {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn members(&self) -> &[SubsetMask] {
        &self.members
    }

    pub fn minimal(&self) -> &[SubsetMask] {
        &self.minimal
    }

    pub fn contains(&self, subset: SubsetMask) -> bool {
        self.minimal.iter().any(|g| g.is_subset_of(subset))
    }

    /// Number of minimal members contained in `subset`.
    pub fn generators_below(&self, subset: SubsetMask) -> usize {
        self.minimal.iter().filter(|g| g.is_subset_of(subset)).count()
    }
}

/// `⋃_J ↑J`, with redundant generators removed from the minimal list.
pub fn upward_closure(n: usize, generators: &[SubsetMask]) -> Result<Upset> {
    if generators.is_empty() {
        return Err(Error::InvalidParameter("upset needs at least one generator".into()));
    }
    let generators = generators.iter().map(|g| g.widen(n)).collect::<Result<Vec<_>>>()?;
    let members: Vec<SubsetMask> = subset_enumerate(n)?
        .into_iter()
        .filter(|s| generators.iter().any(|g| g.is_subset_of(*s)))
        .collect();
    let minimal = members
        .iter()
        .copied()
        .filter(|m| !members.iter().any(|o| o.is_proper_subset_of(*m)))
        .collect();
    Ok(Upset { n, members, minimal })
}

/// 0/1 vector that is 1 exactly on the members.
pub fn indicator_vector(upset: &Upset) -> EntropyVector {
    EntropyVector::from_fn(upset.n, None, |s| Ok(if upset.contains(s) { 1.0 } else { 0.0 }))
        .expect("upset party count is valid")
}
