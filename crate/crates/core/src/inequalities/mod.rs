//! Checkers for the inequalities Rényi entropy vectors do or do not obey,
//! plus random counterexample search and convergence sweeps.

mod audenaert;
mod monotonicity;
mod sweep;
mod von_neumann;
mod witness;

pub use audenaert::{audenaert_from_spectra, audenaert_report, AudenaertReport, EqualityFlags, EQUALITY_TOL};
pub use monotonicity::{check_monotonicity, MonotonicityReport, MonotonicityViolation, NegativeEntry, SATISFY_TOL};
pub use sweep::{convergence_sweep, SweepRecord, SweepRow, SweepTable, SweepTemplate};
pub use von_neumann::{check_vn_inequalities, InequalityInstance, VonNeumannReport};
pub use witness::{
    find_subadditivity_violation, sample_trial, subadditivity_sides, Sampler, ViolationWitness, WitnessSearch,
    VIOLATION_TOL,
};
