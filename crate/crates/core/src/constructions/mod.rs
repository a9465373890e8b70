//! States whose entropy vectors approach coordinate directions and upset
//! indicators.
//!
//! Every constructor returns a [`Construction`]: an analytic
//! [`ConstructionDescriptor`] that evaluates all marginal spectra in closed
//! form, and the explicit state when it fits the enumeration budget.

mod composite;
mod descriptor;
mod dilution;
mod spike;
mod upset;
mod upset_states;

pub use composite::{composite_error, target_vector_state, composite_error_bound, TargetResolution};
pub use descriptor::ConstructionDescriptor;
pub use dilution::{dilution_classical_gt1, spike_quantum_gt1, two_atom_distribution, two_atom_on};
pub use spike::{min_alphabet_size, spike_classical, spike_quantum_lt1, spike_t};
pub use upset::{indicator_vector, upward_closure, Upset};
pub use upset_states::{upset_classical_gt1, upset_classical_lt1, upset_limit_entropy, UpsetBounds};

use crate::entropy::{entropy_vector, renyi_entropy};
use crate::error::{Error, Result};
use crate::order::RenyiOrder;
use crate::state::{Marginals, State};
use crate::vector::EntropyVector;

/// Largest classical support the explicit tier will enumerate.
pub const MAX_CLASSICAL_ATOMS: u128 = 1_000_000;
/// Largest number of pure-state amplitudes the explicit tier will enumerate.
pub const MAX_PURE_AMPLITUDES: u128 = 100_000;

/// A construction: closed-form descriptor plus, when small enough, the state.
#[derive(Clone, Debug, PartialEq)]
pub struct Construction {
    pub descriptor: ConstructionDescriptor,
    pub state: Option<State>,
}

impl Construction {
    /// Entropy vector from the closed forms.
    pub fn analytic(&self, order: RenyiOrder) -> Result<EntropyVector> {
        analytic_entropy_vector(&self.descriptor, order)
    }

    /// Entropy vector of the explicit state, if there is one.
    pub fn explicit(&self, order: RenyiOrder) -> Result<Option<EntropyVector>> {
        self.state.as_ref().map(|s| entropy_vector(s, order)).transpose()
    }
}

/// Entropy vector of a descriptor evaluated without building its state.
///
/// Composites add the vectors of their components, which is exact because
/// entropies of tensor products are additive.
pub fn analytic_entropy_vector(descriptor: &ConstructionDescriptor, order: RenyiOrder) -> Result<EntropyVector> {
    match descriptor {
        ConstructionDescriptor::TensorComposite { n, components, .. } => {
            let mut acc = EntropyVector::zeros(*n, Some(order))?;
            for c in components {
                let v = analytic_entropy_vector(c, order)?.restrict(*n)?;
                acc = acc.add(&v)?;
            }
            Ok(acc.with_order(Some(order)))
        }
        other => {
            let n = other.party_count();
            EntropyVector::from_fn(n, Some(order), |s| Ok(renyi_entropy(&other.marginal_spectrum(s)?, order)?.value()))
        }
    }
}

pub(crate) fn require_lt1(alpha: RenyiOrder) -> Result<f64> {
    match alpha {
        RenyiOrder::Finite(a) if a > 0.0 && a < 1.0 => Ok(a),
        other => Err(Error::UnsupportedOrder { order: other.to_string(), operation: "constructions for 0 < alpha < 1" }),
    }
}

pub(crate) fn require_gt1(alpha: RenyiOrder) -> Result<()> {
    if alpha.validate()?.is_above_one() {
        Ok(())
    } else {
        Err(Error::UnsupportedOrder { order: alpha.to_string(), operation: "constructions for alpha > 1" })
    }
}

pub(crate) fn require_positive_bits(s: f64) -> Result<()> {
    if !(s.is_finite() && s > 0.0) {
        return Err(Error::InvalidParameter(format!("target entropy must be positive and finite, got {s}")));
    }
    Ok(())
}
