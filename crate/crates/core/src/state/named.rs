//! Small named states used in examples and checks.

use crate::error::Result;

use super::dense::C64;
use super::SparsePureState;

/// `(|00⟩ + |11⟩)/√2`.
pub fn bell() -> SparsePureState {
    ghz(2).expect("two-party GHZ state is valid")
}

/// `(|0…0⟩ + |1…1⟩)/√2` on `n` qubits.
pub fn ghz(n: usize) -> Result<SparsePureState> {
    let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    SparsePureState::new(vec![2; n], vec![(vec![0; n], h), (vec![1; n], h)])
}
