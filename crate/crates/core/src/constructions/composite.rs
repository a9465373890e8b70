//! Approximating an arbitrary nonnegative vector by a tensor product of
//! spikes, one per subset.

use crate::error::{Error, Result};
use crate::order::RenyiOrder;
use crate::state::{SparsePureState, State};
use crate::vector::EntropyVector;

use super::descriptor::ConstructionDescriptor;
use super::dilution::{spike_quantum_gt1, two_atom_distribution};
use super::spike::spike_quantum_lt1;
use super::{analytic_entropy_vector, require_lt1, Construction, MAX_PURE_AMPLITUDES};

/// How finely the `α < 1` spikes are resolved.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TargetResolution {
    /// Fixed per-coordinate alphabet size `M`.
    Alphabet(u64),
    /// Smallest power-of-two `M` whose sup-norm error is at most `ε`.
    Tolerance(f64),
}

/// Largest `M` tried in tolerance mode.
const MAX_TOLERANCE_ALPHABET: u64 = 1 << 32;

/// Additive constant for `α > 1` targets:
/// `α/(α − 1) · log₂(n + 1) · 2^{n+1}`.
pub fn composite_error_bound(n: usize, alpha: RenyiOrder) -> Result<f64> {
    Ok(alpha.conjugate_factor()? * ((n + 1) as f64).log2() * ((n + 1) as f64).exp2())
}

/// Pure state on `n + 1` parties whose first `n` marginals approximate
/// `target`: the party-wise tensor product of one spike per subset `I` with
/// `v_I > 0`. The resolution only affects `α < 1`; for `α > 1` each spike
/// uses a two-atom distribution with the exact target entropy.
pub fn target_vector_state(
    target: &EntropyVector,
    alpha: RenyiOrder,
    resolution: TargetResolution,
) -> Result<Construction> {
    let alpha = alpha.validate()?;
    if let Some((mask, v)) = target.iter().find(|(_, v)| *v < 0.0) {
        return Err(Error::InvalidParameter(format!("target entry for {mask} is negative ({v})")));
    }
    if alpha.is_above_one() {
        return assemble(target, alpha, |mask, v| {
            let r = two_atom_distribution(v, alpha)?;
            spike_quantum_gt1(target.n(), mask, v, alpha, &r)
        });
    }
    require_lt1(alpha)?;
    match resolution {
        TargetResolution::Alphabet(m) => {
            assemble(target, alpha, |mask, v| spike_quantum_lt1(target.n(), mask, v, alpha, m))
        }
        TargetResolution::Tolerance(eps) => {
            if eps.is_nan() || eps <= 0.0 {
                return Err(Error::InvalidParameter(format!("tolerance must be positive, got {eps}")));
            }
            let mut m = 2u64;
            loop {
                match assemble(target, alpha, |mask, v| spike_quantum_lt1(target.n(), mask, v, alpha, m)) {
                    Ok(c) => {
                        let achieved = c.analytic(alpha)?.restrict(target.n())?;
                        if achieved.sup_distance(target)? <= eps {
                            return Ok(c);
                        }
                    }
                    Err(Error::AlphabetTooSmall { .. }) => {}
                    Err(e) => return Err(e),
                }
                if m >= MAX_TOLERANCE_ALPHABET {
                    return Err(Error::BudgetExceeded(format!("no M ≤ {MAX_TOLERANCE_ALPHABET} reaches tolerance {eps}")));
                }
                m *= 2;
            }
        }
    }
}

fn assemble(
    target: &EntropyVector,
    alpha: RenyiOrder,
    mut build: impl FnMut(crate::subset::SubsetMask, f64) -> Result<Construction>,
) -> Result<Construction> {
    let n = target.n();
    let mut components = Vec::new();
    let mut state = Some(SparsePureState::product_zero(vec![1; n + 1])?);
    let mut amplitudes: u128 = 1;
    for (mask, v) in target.iter() {
        if v == 0.0 {
            continue;
        }
        let c = build(mask, v)?;
        state = match (state, c.state) {
            (Some(acc), Some(State::Pure(psi))) => {
                amplitudes = amplitudes.saturating_mul(psi.len() as u128);
                if amplitudes <= MAX_PURE_AMPLITUDES {
                    acc.tensor_partywise(&psi).ok()
                } else {
                    None
                }
            }
            _ => None,
        };
        components.push(c.descriptor);
    }
    let descriptor = ConstructionDescriptor::TensorComposite { n, alpha: Some(alpha), components };
    Ok(Construction { descriptor, state: state.map(State::Pure) })
}

/// Analytic vector of a target construction on the first `n` parties and
/// its sup-norm distance to `target`.
pub fn composite_error(c: &Construction, target: &EntropyVector, order: RenyiOrder) -> Result<(EntropyVector, f64)> {
    let v = analytic_entropy_vector(&c.descriptor, order)?.restrict(target.n())?;
    let err = v.sup_distance(target)?;
    Ok((v, err))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::entropy_vector;
    use crate::subset::SubsetMask;

    #[test]
    fn zero_target_is_trivial() {
        let v = EntropyVector::zeros(2, None).unwrap();
        let c = target_vector_state(&v, RenyiOrder::Finite(0.5), TargetResolution::Alphabet(4)).unwrap();
        let got = c.analytic(RenyiOrder::Finite(0.5)).unwrap();
        assert!(got.values().iter().all(|&x| x == 0.0));
        let explicit = c.explicit(RenyiOrder::Finite(0.5)).unwrap().unwrap();
        assert!(explicit.values().iter().all(|&x| x == 0.0));
    }

    #[test]
    fn negative_target_rejected() {
        let v = EntropyVector::new(1, None, vec![-1.0]).unwrap();
        assert!(target_vector_state(&v, RenyiOrder::Finite(0.5), TargetResolution::Alphabet(4)).is_err());
    }

    #[test]
    fn composite_error_bounded_by_components() {
        let half = RenyiOrder::Finite(0.5);
        let v = EntropyVector::new(2, None, vec![0.5, 1.0, 1.5]).unwrap();
        let c = target_vector_state(&v, half, TargetResolution::Alphabet(64)).unwrap();
        let (_, err) = composite_error(&c, &v, half).unwrap();
        let ConstructionDescriptor::TensorComposite { components, .. } = &c.descriptor else { panic!() };
        let mut sum = 0.0;
        for (comp, (mask, s)) in components.iter().zip(v.iter()) {
            let single = EntropyVector::delta(mask, s).unwrap();
            let got = analytic_entropy_vector(comp, half).unwrap().restrict(2).unwrap();
            sum += got.sup_distance(&single).unwrap();
        }
        assert!(err <= sum + 1e-12);
    }

    #[test]
    fn explicit_composite_matches_analytic() {
        let half = RenyiOrder::Finite(0.5);
        let v = EntropyVector::new(2, None, vec![0.3, 0.0, 0.6]).unwrap();
        let c = target_vector_state(&v, half, TargetResolution::Alphabet(2)).unwrap();
        let Some(State::Pure(psi)) = &c.state else { panic!("explicit state expected") };
        let explicit = entropy_vector(psi, half).unwrap().restrict(2).unwrap();
        let analytic = c.analytic(half).unwrap();
        assert!(explicit.sup_distance(&analytic).unwrap() < 1e-10);
    }

    #[test]
    fn tolerance_mode_reaches_target() {
        let half = RenyiOrder::Finite(0.5);
        let v = EntropyVector::delta(SubsetMask::full(2).unwrap(), 3.0).unwrap();
        let c = target_vector_state(&v, half, TargetResolution::Tolerance(0.05)).unwrap();
        let (_, err) = composite_error(&c, &v, half).unwrap();
        assert!(err <= 0.05);
    }

    #[test]
    fn above_one_within_constant() {
        let alpha = RenyiOrder::Finite(2.0);
        let v = EntropyVector::new(2, None, vec![1.0, 3.0, 2.0]).unwrap();
        let c = target_vector_state(&v, alpha, TargetResolution::Alphabet(1)).unwrap();
        let (_, err) = composite_error(&c, &v, alpha).unwrap();
        assert!(err <= composite_error_bound(2, alpha).unwrap());
        assert!((composite_error_bound(2, alpha).unwrap() - 2.0 * 3f64.log2() * 8.0).abs() < 1e-12);
    }
}
