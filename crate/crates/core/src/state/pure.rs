use std::collections::HashMap;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::spectrum::{WeightedSpectrum, NORM_TOL};
use crate::subset::SubsetMask;

use super::dense::{C64, DENSE_LIMIT};
use super::ClassicalState;

/// Pure state stored as amplitudes keyed by per-party basis labels.
///
/// Labels are never flattened, so local dimensions may be as large as
/// `u64` allows even when the total dimension is astronomically large.
#[derive(Clone, Debug, PartialEq)]
pub struct SparsePureState {
    dims: Vec<u64>,
    /// Sorted by label tuple, no duplicates, no exact zeros.
    amplitudes: Vec<(Vec<u64>, C64)>,
}

impl SparsePureState {
    pub fn new(dims: Vec<u64>, amplitudes: Vec<(Vec<u64>, C64)>) -> Result<Self> {
        let state = Self::build(dims, amplitudes)?;
        let norm = state.norm_sqr();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { total: norm });
        }
        Ok(state)
    }

    fn build(dims: Vec<u64>, mut amplitudes: Vec<(Vec<u64>, C64)>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::EmptySystem);
        }
        if let Some(i) = dims.iter().position(|&d| d == 0) {
            return Err(Error::InvalidParameter(format!("party {} has dimension 0", i + 1)));
        }
        for (x, a) in &amplitudes {
            if x.len() != dims.len() {
                return Err(Error::DimensionMismatch(format!(
                    "index {x:?} has {} coordinates, expected {}",
                    x.len(),
                    dims.len()
                )));
            }
            if let Some(k) = x.iter().zip(&dims).position(|(xi, d)| xi >= d) {
                return Err(Error::IndexOutOfRange(format!(
                    "basis label {} of party {} outside dimension {}",
                    x[k],
                    k + 1,
                    dims[k]
                )));
            }
            if !a.re.is_finite() || !a.im.is_finite() {
                return Err(Error::InvalidParameter(format!("non-finite amplitude at {x:?}")));
            }
        }
        amplitudes.sort_by(|a, b| a.0.cmp(&b.0));
        let mut merged: Vec<(Vec<u64>, C64)> = Vec::with_capacity(amplitudes.len());
        for (x, a) in amplitudes {
            match merged.last_mut() {
                Some(last) if last.0 == x => last.1 += a,
                _ => merged.push((x, a)),
            }
        }
        merged.retain(|(_, a)| a.norm_sqr() > 0.0);
        Ok(Self { dims, amplitudes: merged })
    }

    /// Purification of a classical state with the purifying party inserted
    /// at 0-based position `position`. Its dimension is the support size and
    /// it holds the atom index as a copy of the classical symbol.
    pub fn purify(state: &ClassicalState, position: usize) -> Result<Self> {
        let n = state.n();
        if position > n {
            return Err(Error::InvalidParameter(format!("purifier position {position} beyond {n} parties")));
        }
        let mut dims = state.alphabet_sizes().to_vec();
        dims.insert(position, state.support_size() as u64);
        let amplitudes = state
            .atoms()
            .iter()
            .enumerate()
            .map(|(k, (x, p))| {
                let mut label = x.clone();
                label.insert(position, k as u64);
                (label, C64::new(p.sqrt(), 0.0))
            })
            .collect();
        Self::new(dims, amplitudes)
    }

    /// The product state `|0…0⟩`.
    pub fn product_zero(dims: Vec<u64>) -> Result<Self> {
        let n = dims.len();
        Self::new(dims, vec![(vec![0; n], C64::new(1.0, 0.0))])
    }

    pub fn n(&self) -> usize {
        self.dims.len()
    }

    pub fn dims(&self) -> &[u64] {
        &self.dims
    }

    pub fn amplitudes(&self) -> &[(Vec<u64>, C64)] {
        &self.amplitudes
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn norm_sqr(&self) -> f64 {
        crate::spectrum::neumaier_sum(self.amplitudes.iter().map(|(_, a)| a.norm_sqr()))
    }

    /// Reorders parties: new party `k` is old party `order[k]` (0-based).
    pub fn permute_parties(&self, order: &[usize]) -> Result<Self> {
        let n = self.n();
        let mut seen = vec![false; n];
        if order.len() != n || order.iter().any(|&k| k >= n || std::mem::replace(&mut seen[k], true)) {
            return Err(Error::InvalidParameter(format!("{order:?} is not a permutation of {n} parties")));
        }
        let dims = order.iter().map(|&k| self.dims[k]).collect();
        let amplitudes = self
            .amplitudes
            .iter()
            .map(|(x, a)| (order.iter().map(|&k| x[k]).collect(), *a))
            .collect();
        Self::build(dims, amplitudes)
    }

    /// Party-wise tensor product of two states on the same number of
    /// parties: party `k` of the result is party `k` of both factors, with
    /// combined label `x_k · d'_k + y_k`.
    pub fn tensor_partywise(&self, other: &SparsePureState) -> Result<Self> {
        if self.n() != other.n() {
            return Err(Error::DimensionMismatch(format!("{} vs {} parties", self.n(), other.n())));
        }
        let dims = self
            .dims
            .iter()
            .zip(&other.dims)
            .map(|(a, b)| a.checked_mul(*b).ok_or_else(|| Error::Overflow(format!("local dimension {a}·{b}"))))
            .collect::<Result<Vec<u64>>>()?;
        let mut amplitudes = Vec::with_capacity(self.len() * other.len());
        for (x, a) in &self.amplitudes {
            for (y, b) in &other.amplitudes {
                let label = x.iter().zip(y).zip(&other.dims).map(|((xi, yi), d)| xi * d + yi).collect();
                amplitudes.push((label, a * b));
            }
        }
        Self::build(dims, amplitudes)
    }

    /// Spectrum of the reduced state on `subset`.
    pub fn reduced_spectrum(&self, subset: SubsetMask) -> Result<WeightedSpectrum> {
        reduced_spectrum_pure(self, subset)
    }
}

/// Spectrum of `ρ_J` without forming the full density matrix.
///
/// The coefficient matrix `A[(x_J, x_{J^c})]` is split into connected
/// blocks (rows and columns linked by a nonzero entry). Distinct blocks
/// have orthogonal row and column supports, so the spectrum is the union
/// of the blocks' squared singular values, each obtained from the smaller
/// Gram matrix of its block.
pub fn reduced_spectrum_pure(psi: &SparsePureState, subset: SubsetMask) -> Result<WeightedSpectrum> {
    if subset.n() != psi.n() {
        return Err(Error::DimensionMismatch(format!(
            "subset over {} parties applied to {}-party state",
            subset.n(),
            psi.n()
        )));
    }
    let norm = psi.norm_sqr();
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized { total: norm });
    }
    if subset.is_full() {
        return Ok(WeightedSpectrum::pure());
    }
    let n = psi.n();
    let inside: Vec<usize> = (0..n).filter(|&k| subset.contains(k + 1)).collect();
    let outside: Vec<usize> = (0..n).filter(|&k| !subset.contains(k + 1)).collect();

    let mut rows: HashMap<Vec<u64>, usize> = HashMap::new();
    let mut cols: HashMap<Vec<u64>, usize> = HashMap::new();
    let mut entries = Vec::with_capacity(psi.len());
    for (x, a) in psi.amplitudes() {
        let r_key: Vec<u64> = inside.iter().map(|&k| x[k]).collect();
        let c_key: Vec<u64> = outside.iter().map(|&k| x[k]).collect();
        let next_r = rows.len();
        let r = *rows.entry(r_key).or_insert(next_r);
        let next_c = cols.len();
        let c = *cols.entry(c_key).or_insert(next_c);
        entries.push((r, c, *a));
    }

    // union-find over rows [0, R) and columns [R, R + C)
    let n_rows = rows.len();
    let mut uf = UnionFind::new(n_rows + cols.len());
    for &(r, c, _) in &entries {
        uf.union(r, n_rows + c);
    }
    let mut blocks: HashMap<usize, Vec<(usize, usize, C64)>> = HashMap::new();
    for &(r, c, a) in &entries {
        blocks.entry(uf.find(r)).or_default().push((r, c, a));
    }

    let mut eigenvalues = Vec::new();
    for block in blocks.into_values() {
        block_eigenvalues(&block, &mut eigenvalues)?;
    }
    WeightedSpectrum::from_eigenvalues(&eigenvalues)
}

fn block_eigenvalues(block: &[(usize, usize, C64)], out: &mut Vec<f64>) -> Result<()> {
    let mut row_ids: HashMap<usize, usize> = HashMap::new();
    let mut col_ids: HashMap<usize, usize> = HashMap::new();
    for &(r, c, _) in block {
        let nr = row_ids.len();
        row_ids.entry(r).or_insert(nr);
        let nc = col_ids.len();
        col_ids.entry(c).or_insert(nc);
    }
    let (nr, nc) = (row_ids.len(), col_ids.len());
    if nr == 1 || nc == 1 {
        out.push(crate::spectrum::neumaier_sum(block.iter().map(|(_, _, a)| a.norm_sqr())));
        return Ok(());
    }
    let side = nr.min(nc);
    if side > DENSE_LIMIT {
        return Err(Error::DenseTooLarge { limit: DENSE_LIMIT, requested: side as u128 });
    }
    let mut a = DMatrix::<C64>::zeros(nr, nc);
    for &(r, c, v) in block {
        a[(row_ids[&r], col_ids[&c])] = v;
    }
    let gram = if nr <= nc { &a * a.adjoint() } else { a.adjoint() * &a };
    let eig = SymmetricEigen::new(gram);
    out.extend(eig.eigenvalues.iter().copied());
    Ok(())
}

struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self { parent: (0..n).collect(), rank: vec![0; n] }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::DensityMatrix;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn mask(label: &str, n: usize) -> SubsetMask {
        SubsetMask::parse(label, n).unwrap()
    }

    #[test]
    fn product_state_is_pure_everywhere() {
        let psi = SparsePureState::product_zero(vec![2, 3, 4]).unwrap();
        for j in crate::subset::subset_enumerate(3).unwrap() {
            assert!(psi.reduced_spectrum(j).unwrap().is_pure());
        }
    }

    #[test]
    fn bell_schmidt_spectrum() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let psi = SparsePureState::new(vec![2, 2], vec![(vec![0, 0], c(h)), (vec![1, 1], c(h))]).unwrap();
        let spec = psi.reduced_spectrum(mask("1", 2)).unwrap();
        assert_eq!(spec.atoms().len(), 1);
        assert!((spec.atoms()[0].value - 0.5).abs() < 1e-15);
        assert_eq!(spec.atoms()[0].multiplicity, 2);
    }

    #[test]
    fn entangled_block_uses_gram() {
        // a|00⟩ + b|01⟩ + c|10⟩ + d|11⟩ with full-rank coefficient matrix
        let amps = [c(0.5), C64::new(0.1, 0.4), c(-0.3), C64::new(0.2, -0.5)];
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        let labels = [vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]];
        let psi = SparsePureState::new(
            vec![2, 2],
            labels.iter().cloned().zip(amps.iter().map(|a| a / norm)).collect(),
        )
        .unwrap();
        let sparse = psi.reduced_spectrum(mask("1", 2)).unwrap();
        let dense = DensityMatrix::from_pure(&psi).unwrap().marginal_spectrum(mask("1", 2)).unwrap();
        assert!(sparse.distance(&dense) < 1e-12);
    }

    #[test]
    fn purification_reproduces_classical_marginal() {
        let p = ClassicalState::new(vec![2, 2], vec![(vec![0, 0], 0.5), (vec![1, 1], 0.3), (vec![1, 0], 0.2)]).unwrap();
        let psi = SparsePureState::purify(&p, 2).unwrap();
        assert_eq!(psi.dims(), &[2, 2, 3]);
        let joint = psi.reduced_spectrum(mask("12", 3)).unwrap();
        assert!(joint.distance(&p.marginal_spectrum(mask("12", 2)).unwrap()) < 1e-15);
        let one = psi.reduced_spectrum(mask("1", 3)).unwrap();
        assert!(one.distance(&p.marginal_spectrum(mask("1", 2)).unwrap()) < 1e-15);
    }

    #[test]
    fn permutation_moves_labels() {
        let psi = SparsePureState::new(vec![2, 3], vec![(vec![1, 2], c(1.0))]).unwrap();
        let q = psi.permute_parties(&[1, 0]).unwrap();
        assert_eq!(q.dims(), &[3, 2]);
        assert_eq!(q.amplitudes()[0].0, vec![2, 1]);
        assert!(psi.permute_parties(&[0, 0]).is_err());
    }

    #[test]
    fn partywise_tensor_adds_entropies() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let bell = SparsePureState::new(vec![2, 2], vec![(vec![0, 0], c(h)), (vec![1, 1], c(h))]).unwrap();
        let two = bell.tensor_partywise(&bell).unwrap();
        assert_eq!(two.dims(), &[4, 4]);
        let spec = two.reduced_spectrum(mask("2", 2)).unwrap();
        assert_eq!(spec.atoms()[0].multiplicity, 4);
    }

    #[test]
    fn rejects_unnormalized() {
        assert!(matches!(
            SparsePureState::new(vec![2], vec![(vec![0], c(0.5))]),
            Err(Error::NotNormalized { .. })
        ));
        assert!(matches!(
            SparsePureState::new(vec![2], vec![(vec![2], c(1.0))]),
            Err(Error::IndexOutOfRange(_))
        ));
    }
}
