//! Multipartite Rényi entropy vectors.
//!
//! The crate covers four layers:
//!
//! * [`state`]: classical, sparse pure and dense states, with marginal spectra.
//! * [`entropy`]: Rényi entropies and Schatten norms of spectra, and full
//!   entropy vectors of states.
//! * [`constructions`]: explicit states whose entropy vectors approach
//!   coordinate directions and upset indicators, each paired with a
//!   [`constructions::ConstructionDescriptor`] that evaluates the same
//!   entropies in closed form at alphabet sizes far beyond enumeration.
//! * [`inequalities`]: monotonicity, strong subadditivity, the strengthened
//!   Audenaert bound, non-subadditivity search and convergence sweeps.

pub mod constructions;
pub mod entropy;
pub mod error;
pub mod inequalities;
pub mod json;
pub mod order;
pub mod random;
pub mod spectrum;
pub mod state;
pub mod subset;
pub mod vector;

pub use entropy::{entropy_vector, renyi_entropy, schatten_norm, EntropyBits};
pub use error::{Error, Result};
pub use order::RenyiOrder;
pub use spectrum::{Atom, WeightedSpectrum};
pub use state::{
    marginalize_classical, partial_trace_dense, reduced_spectrum_pure, spectrum_dense, ClassicalState,
    DensityMatrix, Marginals, SparsePureState, State,
};
pub use subset::{subset_enumerate, SubsetMask};
pub use vector::EntropyVector;
