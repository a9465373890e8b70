use nalgebra::{Complex, DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::spectrum::{WeightedSpectrum, NORM_TOL};
use crate::subset::SubsetMask;

use super::{ClassicalState, SparsePureState};

pub type C64 = Complex<f64>;

/// Total Hilbert-space dimension accepted by the dense path.
pub const DENSE_LIMIT: usize = 4096;
/// Allowed `max |ρ − ρ†|`.
pub const HERMITIAN_TOL: f64 = 1e-9;

/// Dense density matrix on `⊗_k C^{d_k}`, party 1 most significant.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    dims: Vec<usize>,
    matrix: DMatrix<C64>,
}

impl DensityMatrix {
    /// Checks shape, Hermiticity and unit trace. Positivity is checked when
    /// the spectrum is taken.
    pub fn new(dims: Vec<usize>, matrix: DMatrix<C64>) -> Result<Self> {
        let total = total_dim(&dims)?;
        if matrix.nrows() != total || matrix.ncols() != total {
            return Err(Error::DimensionMismatch(format!(
                "dims {dims:?} need a {total}x{total} matrix, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let dev = hermitian_deviation(&matrix);
        if dev > HERMITIAN_TOL {
            return Err(Error::NotHermitian(dev));
        }
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > NORM_TOL || trace.im.abs() > NORM_TOL {
            return Err(Error::NotNormalized { total: trace.re });
        }
        Ok(Self { dims, matrix })
    }

    /// `|ψ⟩⟨ψ|` for a dense vector.
    pub fn from_vector(dims: Vec<usize>, psi: &[C64]) -> Result<Self> {
        let total = total_dim(&dims)?;
        if psi.len() != total {
            return Err(Error::DimensionMismatch(format!("vector of length {} for dims {dims:?}", psi.len())));
        }
        let v = nalgebra::DVector::from_column_slice(psi);
        Self::new(dims, &v * v.adjoint())
    }

    pub fn from_pure(psi: &SparsePureState) -> Result<Self> {
        let dims: Vec<usize> = psi.dims().iter().map(|&d| d as usize).collect();
        let total = total_dim(&dims)?;
        let mut v = vec![C64::new(0.0, 0.0); total];
        for (idx, amp) in psi.amplitudes() {
            v[flat_index(&dims, idx)] += amp;
        }
        Self::from_vector(dims, &v)
    }

    pub fn from_classical(p: &ClassicalState) -> Result<Self> {
        let dims: Vec<usize> = p.alphabet_sizes().iter().map(|&d| d as usize).collect();
        let total = total_dim(&dims)?;
        let mut m = DMatrix::zeros(total, total);
        for (x, prob) in p.atoms() {
            let i = flat_index(&dims, x);
            m[(i, i)] += C64::new(*prob, 0.0);
        }
        Self::new(dims, m)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn n(&self) -> usize {
        self.dims.len()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn total_dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// `ρ ⊗ σ` with `other`'s parties appended.
    pub fn tensor(&self, other: &DensityMatrix) -> Result<DensityMatrix> {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        total_dim(&dims)?;
        Self::new(dims, self.matrix.kronecker(&other.matrix))
    }

    /// Reduced state on `subset`: traces out every party in the complement.
    pub fn partial_trace(&self, subset: SubsetMask) -> Result<DensityMatrix> {
        if subset.n() != self.n() {
            return Err(Error::DimensionMismatch(format!(
                "subset over {} parties applied to {}-party state",
                subset.n(),
                self.n()
            )));
        }
        if subset.is_full() {
            return Ok(self.clone());
        }
        let n = self.n();
        let mut strides = vec![1usize; n];
        for k in (0..n.saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * self.dims[k + 1];
        }
        let kept: Vec<usize> = (0..n).filter(|&k| subset.contains(k + 1)).collect();
        let traced: Vec<usize> = (0..n).filter(|&k| !subset.contains(k + 1)).collect();
        let kept_offsets = offsets(&kept, &self.dims, &strides);
        let traced_offsets = offsets(&traced, &self.dims, &strides);

        let d = kept_offsets.len();
        let mut out = DMatrix::zeros(d, d);
        for (a, &ra) in kept_offsets.iter().enumerate() {
            for (b, &rb) in kept_offsets.iter().enumerate() {
                let mut acc = C64::new(0.0, 0.0);
                for &c in &traced_offsets {
                    acc += self.matrix[(ra + c, rb + c)];
                }
                out[(a, b)] = acc;
            }
        }
        let dims = kept.iter().map(|&k| self.dims[k]).collect();
        Ok(DensityMatrix { dims, matrix: out })
    }

    /// Eigenvalues as a merged spectrum.
    pub fn spectrum(&self) -> Result<WeightedSpectrum> {
        let dev = hermitian_deviation(&self.matrix);
        if dev > HERMITIAN_TOL {
            return Err(Error::NotHermitian(dev));
        }
        if self.matrix.nrows() == 1 {
            return WeightedSpectrum::from_eigenvalues(&[self.matrix[(0, 0)].re]);
        }
        WeightedSpectrum::from_eigenvalues(&hermitian_eigenvalues(&self.matrix)?)
    }

    /// Spectrum of the marginal on `subset`.
    pub fn marginal_spectrum(&self, subset: SubsetMask) -> Result<WeightedSpectrum> {
        self.partial_trace(subset)?.spectrum()
    }
}

/// Eigenvalues of a Hermitian matrix, solved block by block over the
/// connected components of its nonzero pattern.
///
/// Besides saving work on sparse states, splitting sidesteps NaN output the
/// dense solvers produce on some matrices with many exact zeros.
fn hermitian_eigenvalues(m: &DMatrix<C64>) -> Result<Vec<f64>> {
    let n = m.nrows();
    let mut component = vec![usize::MAX; n];
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for root in 0..n {
        if component[root] != usize::MAX {
            continue;
        }
        let id = blocks.len();
        component[root] = id;
        let mut members = vec![root];
        let mut next = 0;
        while next < members.len() {
            let i = members[next];
            next += 1;
            for j in 0..n {
                if component[j] == usize::MAX && m[(i, j)] != C64::new(0.0, 0.0) {
                    component[j] = id;
                    members.push(j);
                }
            }
        }
        members.sort_unstable();
        blocks.push(members);
    }
    let mut values = Vec::with_capacity(n);
    for idx in blocks {
        if idx.len() == 1 {
            values.push(m[(idx[0], idx[0])].re);
            continue;
        }
        let block = DMatrix::from_fn(idx.len(), idx.len(), |r, c| m[(idx[r], idx[c])]);
        let solved = block_eigenvalues(&block);
        if solved.iter().any(|x| !x.is_finite()) {
            return Err(Error::EigenFailure(idx.len()));
        }
        values.extend(solved);
    }
    Ok(values)
}

/// Real blocks use the real solver. A complex block whose solve is not finite
/// is retried through the real embedding `[[A, −B], [B, A]]`, whose spectrum
/// is that of `A + iB` with every eigenvalue doubled.
fn block_eigenvalues(m: &DMatrix<C64>) -> Vec<f64> {
    if m.iter().all(|z| z.im == 0.0) {
        return SymmetricEigen::new(m.map(|z| z.re)).eigenvalues.as_slice().to_vec();
    }
    let values = SymmetricEigen::new(m.clone()).eigenvalues;
    if values.iter().all(|x| x.is_finite()) {
        return values.as_slice().to_vec();
    }
    let n = m.nrows();
    let embedded = DMatrix::from_fn(2 * n, 2 * n, |r, c| {
        let z = m[(r % n, c % n)];
        match (r < n, c < n) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    });
    let mut doubled = SymmetricEigen::new(embedded).eigenvalues.as_slice().to_vec();
    doubled.sort_by(f64::total_cmp);
    doubled.into_iter().step_by(2).collect()
}

/// Reduced density matrix `tr_{I^c} ρ`.
pub fn partial_trace_dense(rho: &DensityMatrix, subset: SubsetMask) -> Result<DensityMatrix> {
    rho.partial_trace(subset)
}

/// Spectrum of a dense Hermitian matrix.
pub fn spectrum_dense(rho: &DensityMatrix) -> Result<WeightedSpectrum> {
    rho.spectrum()
}

pub(crate) fn total_dim(dims: &[usize]) -> Result<usize> {
    if dims.is_empty() {
        return Err(Error::EmptySystem);
    }
    let mut total: u128 = 1;
    for &d in dims {
        if d == 0 {
            return Err(Error::InvalidParameter("zero local dimension".into()));
        }
        total = total.saturating_mul(d as u128);
    }
    if total > DENSE_LIMIT as u128 {
        return Err(Error::DenseTooLarge { limit: DENSE_LIMIT, requested: total });
    }
    Ok(total as usize)
}

fn flat_index<T: Copy + Into<u64>>(dims: &[usize], idx: &[T]) -> usize {
    idx.iter().zip(dims).fold(0usize, |acc, (&i, &d)| acc * d + Into::<u64>::into(i) as usize)
}

/// Flat offsets of every multi-index over `parties` (ascending, party-major).
fn offsets(parties: &[usize], dims: &[usize], strides: &[usize]) -> Vec<usize> {
    let mut out = vec![0usize];
    for &k in parties {
        let mut next = Vec::with_capacity(out.len() * dims[k]);
        for &base in &out {
            for i in 0..dims[k] {
                next.push(base + i * strides[k]);
            }
        }
        out = next;
    }
    out
}

fn hermitian_deviation(m: &DMatrix<C64>) -> f64 {
    let n = m.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn mask(label: &str, n: usize) -> SubsetMask {
        SubsetMask::parse(label, n).unwrap()
    }

    #[test]
    fn product_state_reduces_to_factor() {
        let a = DensityMatrix::new(vec![2], DMatrix::from_row_slice(2, 2, &[c(0.7), C64::new(0.1, 0.2), C64::new(0.1, -0.2), c(0.3)])).unwrap();
        let b = DensityMatrix::new(vec![3], DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(0.5), c(0.25), c(0.25)]))).unwrap();
        let ab = a.tensor(&b).unwrap();
        let ra = ab.partial_trace(mask("1", 2)).unwrap();
        assert!((ra.matrix() - a.matrix()).norm() < 1e-15);
        let rb = ab.partial_trace(mask("2", 2)).unwrap();
        assert!((rb.matrix() - b.matrix()).norm() < 1e-15);
    }

    #[test]
    fn bell_marginal_is_maximally_mixed() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let rho = DensityMatrix::from_vector(vec![2, 2], &[c(s), c(0.0), c(0.0), c(s)]).unwrap();
        let r = rho.partial_trace(mask("1", 2)).unwrap();
        let expected = DMatrix::from_diagonal_element(2, 2, c(0.5));
        assert!((r.matrix() - expected).norm() < 1e-15);
        let spec = r.spectrum().unwrap();
        assert_eq!(spec.atoms().len(), 1);
        assert_eq!(spec.max_multiplicity(), 2);
    }

    #[test]
    fn full_subset_is_identity() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let rho = DensityMatrix::from_vector(vec![2, 2], &[c(s), c(0.0), c(0.0), c(s)]).unwrap();
        assert_eq!(rho.partial_trace(mask("12", 2)).unwrap(), rho);
    }

    #[test]
    fn middle_party_trace() {
        // three qubits, |0⟩|+⟩|1⟩; tracing party 2 leaves |01⟩
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mut psi = vec![c(0.0); 8];
        psi[0b001] = c(h);
        psi[0b011] = c(h);
        let rho = DensityMatrix::from_vector(vec![2, 2, 2], &psi).unwrap();
        let r = rho.partial_trace(mask("13", 3)).unwrap();
        assert!((r.matrix()[(1, 1)].re - 1.0).abs() < 1e-15);
        assert!(r.spectrum().unwrap().is_pure());
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = DMatrix::from_row_slice(2, 2, &[c(0.5), c(0.3), c(0.0), c(0.5)]);
        assert!(matches!(DensityMatrix::new(vec![2], m), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn rejects_dimension_mismatch() {
        let m = DMatrix::from_diagonal_element(3, 3, c(1.0 / 3.0));
        assert!(matches!(DensityMatrix::new(vec![2], m), Err(Error::DimensionMismatch(_))));
        let rho = DensityMatrix::new(vec![3], DMatrix::from_diagonal_element(3, 3, c(1.0 / 3.0))).unwrap();
        assert!(matches!(rho.partial_trace(mask("1", 2)), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn dense_cap() {
        assert!(matches!(total_dim(&[64, 65]), Err(Error::DenseTooLarge { .. })));
        assert_eq!(total_dim(&[64, 64]).unwrap(), 4096);
    }

    #[test]
    fn sparse_marginal_spectrum_is_finite() {
        // the undivided real solver returns NaN on this marginal
        let alpha = crate::RenyiOrder::Finite(0.5);
        let c = crate::constructions::spike_quantum_lt1(3, mask("12", 3), 1.0, alpha, 2).unwrap();
        let Some(crate::State::Pure(psi)) = c.state else { panic!("expected a pure state") };
        let rho = DensityMatrix::from_pure(&psi).unwrap();
        for label in ["234", "1234"] {
            let dense = rho.marginal_spectrum(mask(label, 4)).unwrap();
            let sparse = psi.reduced_spectrum(mask(label, 4)).unwrap();
            assert!(dense.distance(&sparse) < 1e-12, "{label}");
        }
    }

    #[test]
    fn complex_blocks_are_solved_separately() {
        let z = C64::new(0.0, 0.0);
        let m = DMatrix::from_row_slice(3, 3, &[c(0.3), z, C64::new(0.0, 0.1), z, c(0.4), z, C64::new(0.0, -0.1), z, c(0.3)]);
        let spec = DensityMatrix::new(vec![3], m).unwrap().spectrum().unwrap();
        let want = WeightedSpectrum::from_eigenvalues(&[0.4, 0.4, 0.2]).unwrap();
        assert!(spec.distance(&want) < 1e-12);
    }
}
