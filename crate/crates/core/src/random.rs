//! Seeded random states.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{Exp1, StandardNormal};

use crate::error::{Error, Result};
use crate::state::{ClassicalState, DensityMatrix, SparsePureState, C64};

/// Deterministic generator for a given seed.
pub fn rng_from_seed(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// `G G† / tr(G G†)` with `G` a square complex Gaussian matrix.
pub fn random_density<R: Rng + ?Sized>(dims: &[usize], rng: &mut R) -> Result<DensityMatrix> {
    let d: usize = dims.iter().product();
    if d == 0 || dims.is_empty() {
        return Err(Error::InvalidParameter("random state needs positive dimensions".into()));
    }
    let g = DMatrix::from_fn(d, d, |_, _| gaussian(rng));
    let mut rho = &g * g.adjoint();
    let trace = rho.trace().re;
    rho /= C64::new(trace, 0.0);
    // symmetrize away rounding so the Hermiticity check is exact
    let rho = (&rho + rho.adjoint()) * C64::new(0.5, 0.0);
    DensityMatrix::new(dims.to_vec(), rho)
}

/// Normalized complex Gaussian vector, stored sparsely.
pub fn random_pure<R: Rng + ?Sized>(dims: &[u64], rng: &mut R) -> Result<SparsePureState> {
    let d: u64 = dims.iter().product();
    if d == 0 || d > crate::state::DENSE_LIMIT as u64 {
        return Err(Error::InvalidParameter(format!("random pure state of total dimension {d}")));
    }
    let mut amps = Vec::with_capacity(d as usize);
    for flat in 0..d {
        let mut label = vec![0u64; dims.len()];
        let mut rest = flat;
        for k in (0..dims.len()).rev() {
            label[k] = rest % dims[k];
            rest /= dims[k];
        }
        amps.push((label, gaussian(rng)));
    }
    let norm = amps.iter().map(|(_, a)| a.norm_sqr()).sum::<f64>().sqrt();
    for (_, a) in &mut amps {
        *a /= norm;
    }
    SparsePureState::new(dims.to_vec(), amps)
}

/// Full-support pmf with weights `E^γ`, `E ~ Exp(1)`; larger `γ` gives
/// heavier tails.
pub fn random_classical<R: Rng + ?Sized>(sizes: &[u64], gamma: f64, rng: &mut R) -> Result<ClassicalState> {
    let d: u64 = sizes.iter().product();
    if d == 0 || d > 1 << 20 {
        return Err(Error::InvalidParameter(format!("random pmf of support {d}")));
    }
    let weights: Vec<f64> = (0..d).map(|_| rng.sample::<f64, _>(Exp1).powf(gamma)).collect();
    let total: f64 = weights.iter().sum();
    let atoms = weights
        .into_iter()
        .enumerate()
        .map(|(flat, w)| {
            let mut label = vec![0u64; sizes.len()];
            let mut rest = flat as u64;
            for k in (0..sizes.len()).rev() {
                label[k] = rest % sizes[k];
                rest /= sizes[k];
            }
            (label, w / total)
        })
        .collect();
    ClassicalState::new(sizes.to_vec(), atoms)
}
