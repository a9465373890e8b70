use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::spectrum::{WeightedSpectrum, NORM_TOL};
use crate::subset::SubsetMask;

/// Sparse probability mass function on a product alphabet
/// `[a_1] × ... × [a_n]` (0-based symbols).
#[derive(Clone, Debug, PartialEq)]
pub struct ClassicalState {
    alphabet_sizes: Vec<u64>,
    /// Sorted by tuple, no duplicates, strictly positive probabilities.
    atoms: Vec<(Vec<u64>, f64)>,
}

impl ClassicalState {
    /// Validates ranges and normalization; duplicate tuples are summed and
    /// zero-probability atoms dropped.
    pub fn new(alphabet_sizes: Vec<u64>, atoms: Vec<(Vec<u64>, f64)>) -> Result<Self> {
        let state = Self::build(alphabet_sizes, atoms)?;
        let total = state.total();
        if (total - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { total });
        }
        Ok(state)
    }

    fn build(alphabet_sizes: Vec<u64>, mut atoms: Vec<(Vec<u64>, f64)>) -> Result<Self> {
        if alphabet_sizes.is_empty() {
            return Err(Error::EmptySystem);
        }
        if let Some(i) = alphabet_sizes.iter().position(|&a| a == 0) {
            return Err(Error::InvalidParameter(format!("alphabet of party {} is empty", i + 1)));
        }
        for (x, p) in &atoms {
            if x.len() != alphabet_sizes.len() {
                return Err(Error::DimensionMismatch(format!(
                    "tuple {x:?} has {} coordinates, expected {}",
                    x.len(),
                    alphabet_sizes.len()
                )));
            }
            if let Some(k) = x.iter().zip(&alphabet_sizes).position(|(xi, a)| xi >= a) {
                return Err(Error::IndexOutOfRange(format!(
                    "symbol {} of party {} outside alphabet of size {}",
                    x[k],
                    k + 1,
                    alphabet_sizes[k]
                )));
            }
            if !p.is_finite() || *p < 0.0 {
                return Err(Error::InvalidWeight(*p));
            }
        }
        atoms.retain(|(_, p)| *p > 0.0);
        atoms.sort_by(|a, b| a.0.cmp(&b.0));
        let mut merged: Vec<(Vec<u64>, f64)> = Vec::with_capacity(atoms.len());
        for (x, p) in atoms {
            match merged.last_mut() {
                Some(last) if last.0 == x => last.1 += p,
                _ => merged.push((x, p)),
            }
        }
        Ok(Self { alphabet_sizes, atoms: merged })
    }

    pub fn n(&self) -> usize {
        self.alphabet_sizes.len()
    }

    pub fn alphabet_sizes(&self) -> &[u64] {
        &self.alphabet_sizes
    }

    pub fn atoms(&self) -> &[(Vec<u64>, f64)] {
        &self.atoms
    }

    pub fn support_size(&self) -> usize {
        self.atoms.len()
    }

    pub fn total(&self) -> f64 {
        crate::spectrum::neumaier_sum(self.atoms.iter().map(|(_, p)| *p))
    }

    pub fn probability(&self, x: &[u64]) -> f64 {
        self.atoms
            .binary_search_by(|(y, _)| y.as_slice().cmp(x))
            .map(|i| self.atoms[i].1)
            .unwrap_or(0.0)
    }

    /// Marginal on the parties of `subset` (in ascending party order).
    pub fn marginalize(&self, subset: SubsetMask) -> Result<ClassicalState> {
        if subset.n() != self.n() {
            return Err(Error::DimensionMismatch(format!(
                "subset over {} parties applied to {}-party state",
                subset.n(),
                self.n()
            )));
        }
        let keep: Vec<usize> = subset.parties().into_iter().map(|p| p - 1).collect();
        let sizes = keep.iter().map(|&k| self.alphabet_sizes[k]).collect();
        let mut acc: HashMap<Vec<u64>, f64> = HashMap::with_capacity(self.atoms.len());
        for (x, p) in &self.atoms {
            let y: Vec<u64> = keep.iter().map(|&k| x[k]).collect();
            *acc.entry(y).or_insert(0.0) += p;
        }
        Self::build(sizes, acc.into_iter().collect())
    }

    /// Spectrum of the marginal on `subset`.
    pub fn marginal_spectrum(&self, subset: SubsetMask) -> Result<WeightedSpectrum> {
        let marginal = if subset.is_full() && subset.n() == self.n() { self.clone() } else { self.marginalize(subset)? };
        let probs: Vec<f64> = marginal.atoms.iter().map(|(_, p)| *p).collect();
        WeightedSpectrum::from_probabilities(&probs)
    }

    /// Product distribution with `other`'s parties appended after `self`'s.
    pub fn product(&self, other: &ClassicalState) -> Result<ClassicalState> {
        let mut sizes = self.alphabet_sizes.clone();
        sizes.extend_from_slice(&other.alphabet_sizes);
        let mut atoms = Vec::with_capacity(self.atoms.len() * other.atoms.len());
        for (x, p) in &self.atoms {
            for (y, q) in &other.atoms {
                let mut z = x.clone();
                z.extend_from_slice(y);
                atoms.push((z, p * q));
            }
        }
        Self::new(sizes, atoms)
    }

    /// Point mass at the all-zero tuple.
    pub fn deterministic(alphabet_sizes: Vec<u64>) -> Result<ClassicalState> {
        let n = alphabet_sizes.len();
        Self::new(alphabet_sizes, vec![(vec![0; n], 1.0)])
    }
}

/// Marginal of a classical state (free-function form).
pub fn marginalize_classical(state: &ClassicalState, subset: SubsetMask) -> Result<ClassicalState> {
    state.marginalize(subset)
}
