//! Rényi entropies and Schatten norms of spectra, in bits.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::order::RenyiOrder;
use crate::spectrum::{neumaier_sum, WeightedSpectrum};
use crate::state::Marginals;
use crate::vector::EntropyVector;

/// An entropy value in bits.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EntropyBits(pub f64);

impl EntropyBits {
    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    #[inline]
    pub fn nats(self) -> f64 {
        self.0 * std::f64::consts::LN_2
    }
}

impl fmt::Display for EntropyBits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} bits", self.0)
    }
}

/// `Σ mult · value^α`, summed with compensation over ascending terms.
pub fn power_sum(spec: &WeightedSpectrum, alpha: f64) -> f64 {
    let mut terms: Vec<f64> = spec
        .atoms()
        .iter()
        .map(|a| a.multiplicity as f64 * a.value.powf(alpha))
        .collect();
    terms.sort_by(f64::total_cmp);
    neumaier_sum(terms)
}

/// Rényi entropy `S_α = log₂(Σ p^α) / (1 − α)` with the usual limits at
/// α = 0 (log rank), α = 1 (Shannon / von Neumann) and α = ∞ (−log₂ max).
pub fn renyi_entropy(spec: &WeightedSpectrum, order: RenyiOrder) -> Result<EntropyBits> {
    let order = order.validate()?;
    if spec.atoms().is_empty() {
        return Err(Error::EmptySpectrum);
    }
    if spec.is_pure() {
        return Ok(EntropyBits(0.0));
    }
    let bits = match order {
        RenyiOrder::Zero => (spec.rank() as f64).log2(),
        RenyiOrder::One => {
            let mut terms: Vec<f64> = spec
                .atoms()
                .iter()
                .filter(|a| a.value > 0.0)
                .map(|a| -(a.multiplicity as f64) * a.value * a.value.log2())
                .collect();
            terms.sort_by(f64::total_cmp);
            neumaier_sum(terms)
        }
        RenyiOrder::Infinity => -spec.max_value().log2(),
        RenyiOrder::Finite(alpha) => power_sum(spec, alpha).log2() / (1.0 - alpha),
    };
    Ok(EntropyBits(bits))
}

/// Schatten norm `‖ρ‖_α = (Σ p^α)^{1/α}`; `‖ρ‖_∞` is the largest value.
/// Orders 0 and 1 are rejected (the 1-norm of a state is trivially one).
pub fn schatten_norm(spec: &WeightedSpectrum, order: RenyiOrder) -> Result<f64> {
    match order.validate()? {
        RenyiOrder::Infinity => Ok(spec.max_value()),
        RenyiOrder::Finite(alpha) => Ok(power_sum(spec, alpha).powf(1.0 / alpha)),
        other => Err(Error::UnsupportedOrder { order: other.to_string(), operation: "schatten_norm" }),
    }
}

/// Entropies of every nonempty marginal of `state`.
pub fn entropy_vector<S: Marginals + ?Sized>(state: &S, order: RenyiOrder) -> Result<EntropyVector> {
    let order = order.validate()?;
    EntropyVector::from_fn(state.parties(), Some(order), |subset| {
        Ok(renyi_entropy(&state.marginal_spectrum(subset)?, order)?.value())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(atoms: &[(f64, u128)]) -> WeightedSpectrum {
        WeightedSpectrum::new(atoms.iter().copied()).unwrap()
    }

    #[test]
    fn pure_state_has_zero_entropy() {
        for order in [RenyiOrder::Zero, RenyiOrder::One, RenyiOrder::Finite(0.5), RenyiOrder::Infinity] {
            assert_eq!(renyi_entropy(&WeightedSpectrum::pure(), order).unwrap().value(), 0.0);
        }
    }

    #[test]
    fn uniform_gives_log_size() {
        let u = spec(&[(0.125, 8)]);
        assert!((renyi_entropy(&u, RenyiOrder::Finite(2.0)).unwrap().value() - 3.0).abs() < 1e-14);
        assert!((renyi_entropy(&u, RenyiOrder::One).unwrap().value() - 3.0).abs() < 1e-14);
        assert!((renyi_entropy(&u, RenyiOrder::Zero).unwrap().value() - 3.0).abs() < 1e-14);
        assert!((renyi_entropy(&u, RenyiOrder::Infinity).unwrap().value() - 3.0).abs() < 1e-14);
    }

    #[test]
    fn collision_entropy_example() {
        // Σp² = 1/4 + 2/16 = 3/8
        let s = spec(&[(0.5, 1), (0.25, 2)]);
        let h = renyi_entropy(&s, RenyiOrder::Finite(2.0)).unwrap().value();
        assert!((h - (8.0f64 / 3.0).log2()).abs() < 1e-14);
        assert!((h - 1.415037).abs() < 1e-6);
    }

    #[test]
    fn schatten_examples() {
        for a in [1.5, 2.0, 7.0] {
            assert_eq!(schatten_norm(&WeightedSpectrum::pure(), RenyiOrder::Finite(a)).unwrap(), 1.0);
        }
        let half = spec(&[(0.5, 2)]);
        let n2 = schatten_norm(&half, RenyiOrder::Finite(2.0)).unwrap();
        assert!((n2 - 0.5f64.sqrt()).abs() < 1e-15);
        let s = spec(&[(0.6, 1), (0.4, 1)]);
        assert_eq!(schatten_norm(&s, RenyiOrder::Infinity).unwrap(), 0.6);
    }

    #[test]
    fn schatten_rejects_trivial_orders() {
        let half = spec(&[(0.5, 2)]);
        assert!(matches!(schatten_norm(&half, RenyiOrder::One), Err(Error::UnsupportedOrder { .. })));
        assert!(matches!(schatten_norm(&half, RenyiOrder::Zero), Err(Error::UnsupportedOrder { .. })));
    }

    #[test]
    fn schatten_identity() {
        let s = spec(&[(0.5, 1), (0.2, 2), (0.1, 1)]);
        for a in [1.1, 2.0, 3.5, 20.0] {
            let order = RenyiOrder::Finite(a);
            let lhs = renyi_entropy(&s, order).unwrap().value();
            let rhs = a / (1.0 - a) * schatten_norm(&s, order).unwrap().log2();
            assert!((lhs - rhs).abs() < 1e-10, "alpha {a}");
        }
    }

    #[test]
    fn rejects_invalid_finite_order() {
        let s = spec(&[(0.5, 2)]);
        assert!(renyi_entropy(&s, RenyiOrder::Finite(1.0)).is_err());
        assert!(renyi_entropy(&s, RenyiOrder::Finite(-1.0)).is_err());
    }

    #[test]
    fn vector_of_product_and_bell() {
        use crate::state::{named, ClassicalState};
        let bit = ClassicalState::new(vec![2], vec![(vec![0], 0.5), (vec![1], 0.5)]).unwrap();
        let v = entropy_vector(&bit.product(&bit).unwrap(), RenyiOrder::Finite(2.0)).unwrap();
        assert_eq!(v.values(), &[1.0, 1.0, 2.0]);
        let b = entropy_vector(&named::bell(), RenyiOrder::Finite(2.0)).unwrap();
        for (got, want) in b.values().iter().zip([1.0, 1.0, 0.0]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn vector_of_small_spike() {
        // 1/2 at (0,0) and 1/8 on each of the four nonzero tuples
        use crate::state::ClassicalState;
        let mut atoms = vec![(vec![0, 0], 0.5)];
        for a in 1..=2 {
            for b in 1..=2 {
                atoms.push((vec![a, b], 0.125));
            }
        }
        let p = ClassicalState::new(vec![3, 3], atoms).unwrap();
        let v = entropy_vector(&p, RenyiOrder::Finite(0.5)).unwrap();
        assert!((v.get_label("12").unwrap() - 2.169925).abs() < 1e-6);
        // 2·log₂(√½ + 1) = 1.5431066…
        let single = 2.0 * (0.5f64.sqrt() + 1.0).log2();
        assert!((v.get_label("1").unwrap() - single).abs() < 1e-12);
        assert!((v.get_label("2").unwrap() - single).abs() < 1e-12);
        assert!((single - 1.543116).abs() < 1e-4);
    }

    #[test]
    fn huge_multiplicities() {
        // 2^80 equal atoms carrying half the mass
        let m: u128 = 1 << 80;
        let s = spec(&[(0.5, 1), (0.5 / m as f64, m)]);
        let h = renyi_entropy(&s, RenyiOrder::One).unwrap().value();
        assert!((h - (1.0 + 0.5 * 80.0)).abs() < 1e-9);
    }
}
