use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::Serialize;

use crate::entropy::renyi_entropy;
use crate::error::{Error, Result};
use crate::order::RenyiOrder;
use crate::random::{random_classical, random_density};
use crate::state::{Marginals, State};
use crate::subset::SubsetMask;

/// Slack below which a sample counts as a counterexample.
pub const VIOLATION_TOL: f64 = 1e-6;

/// Tail exponents cycled through by the classical sampler.
const CLASSICAL_GAMMAS: [f64; 4] = [1.0, 2.0, 4.0, 8.0];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Sampler {
    /// `G G† / tr` with complex Gaussian `G`.
    Density,
    /// Full-support pmf with weights `E^γ`.
    Classical,
}

/// A bipartite state with `S(AB) > S(A) + S(B) + 1e-6`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ViolationWitness {
    pub trial: u64,
    pub sampler: Sampler,
    pub state: State,
    /// `[A, B, AB]`.
    pub subsets: [SubsetMask; 3],
    /// `S(AB)`.
    pub lhs: f64,
    /// `S(A) + S(B)`.
    pub rhs: f64,
    /// `rhs − lhs`, negative.
    pub slack: f64,
}

/// Outcome of a search. `witness: None` means "not found within budget",
/// never that the inequality holds.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WitnessSearch {
    pub alpha: RenyiOrder,
    pub seed: u64,
    pub dims: [usize; 2],
    pub trials: u64,
    pub trials_run: u64,
    pub witness: Option<ViolationWitness>,
}

impl WitnessSearch {
    pub fn found(&self) -> bool {
        self.witness.is_some()
    }
}

/// Independent generator for one trial, so results do not depend on how
/// trials are scheduled.
fn trial_rng(seed: u64, trial: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Sample for trial `k`: even trials draw a random density matrix, odd
/// trials a heavy-tailed classical pmf.
pub fn sample_trial(seed: u64, trial: u64, dims: [usize; 2]) -> Result<(Sampler, State)> {
    let mut rng = trial_rng(seed, trial);
    if trial.is_multiple_of(2) {
        Ok((Sampler::Density, random_density(&dims, &mut rng)?.into()))
    } else {
        let gamma = CLASSICAL_GAMMAS[((trial / 2) % CLASSICAL_GAMMAS.len() as u64) as usize];
        let sizes = [dims[0] as u64, dims[1] as u64];
        Ok((Sampler::Classical, random_classical(&sizes, gamma, &mut rng)?.into()))
    }
}

/// `(S(AB), S(A) + S(B))` for a bipartite state.
pub fn subadditivity_sides(state: &State, alpha: RenyiOrder) -> Result<(f64, f64)> {
    let [a, b, ab] = bipartite_masks()?;
    let s = |m| -> Result<f64> { Ok(renyi_entropy(&state.marginal_spectrum(m)?, alpha)?.value()) };
    Ok((s(ab)?, s(a)? + s(b)?))
}

fn bipartite_masks() -> Result<[SubsetMask; 3]> {
    Ok([SubsetMask::singleton(1, 2)?, SubsetMask::singleton(2, 2)?, SubsetMask::full(2)?])
}

/// Random search for `S_α(AB) > S_α(A) + S_α(B) + 1e-6`, alternating
/// quantum and classical samples. Stops at the first witness.
pub fn find_subadditivity_violation(alpha: RenyiOrder, trials: u64, seed: u64, dims: [usize; 2]) -> Result<WitnessSearch> {
    let alpha = alpha.validate()?;
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    if dims.contains(&0) {
        return Err(Error::InvalidParameter("local dimensions must be positive".into()));
    }
    let subsets = bipartite_masks()?;
    for trial in 0..trials {
        let (sampler, state) = sample_trial(seed, trial, dims)?;
        let (lhs, rhs) = subadditivity_sides(&state, alpha)?;
        let slack = rhs - lhs;
        if slack < -VIOLATION_TOL {
            let witness = ViolationWitness { trial, sampler, state, subsets, lhs, rhs, slack };
            return Ok(WitnessSearch { alpha, seed, dims, trials, trials_run: trial + 1, witness: Some(witness) });
        }
    }
    Ok(WitnessSearch { alpha, seed, dims, trials, trials_run: trials, witness: None })
}
