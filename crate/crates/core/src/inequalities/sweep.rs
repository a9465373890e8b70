use serde::Serialize;

use crate::constructions::{
    analytic_entropy_vector, dilution_classical_gt1, spike_classical, spike_quantum_lt1, target_vector_state,
    two_atom_on, upset_classical_lt1, upset_limit_entropy, upward_closure, Construction, TargetResolution,
};
use crate::error::{Error, Result};
use crate::order::RenyiOrder;
use crate::spectrum::WeightedSpectrum;
use crate::subset::SubsetMask;
use crate::vector::EntropyVector;

/// Family of constructions indexed by an alphabet size `M`.
#[derive(Clone, Debug, PartialEq)]
pub enum SweepTemplate {
    /// Spike of `s` bits on `subset`, `M` symbols per party (`α < 1`).
    /// Classical when `subset` is every party, otherwise the pure state on
    /// `n + 1` parties restricted to the first `n`.
    Spike { n: usize, subset: SubsetMask, s: f64 },
    /// Tensor product of spikes approximating `vector`.
    Target { vector: EntropyVector },
    /// Dilution (`α > 1`) of a distribution on `M` points with
    /// `H_α = min(s, log₂ M)`.
    Dilution { n: usize, s: f64 },
    /// Upset mixture with `M` symbols per party (`α < 1`).
    UpsetLt1 { n: usize, generators: Vec<SubsetMask>, s: f64 },
}

impl SweepTemplate {
    pub fn n(&self) -> usize {
        match self {
            SweepTemplate::Spike { n, .. } | SweepTemplate::Dilution { n, .. } | SweepTemplate::UpsetLt1 { n, .. } => *n,
            SweepTemplate::Target { vector } => vector.n(),
        }
    }

    /// The vector the family approaches: `s·δ_I` for spikes and dilution,
    /// the target itself, or the upset limit formula.
    pub fn natural_target(&self, alpha: RenyiOrder) -> Result<EntropyVector> {
        match self {
            SweepTemplate::Spike { subset, s, .. } => EntropyVector::delta(*subset, *s),
            SweepTemplate::Target { vector } => Ok(vector.clone()),
            SweepTemplate::Dilution { n, s } => EntropyVector::delta(SubsetMask::full(*n)?, *s),
            SweepTemplate::UpsetLt1 { n, generators, s } => {
                let upset = upward_closure(*n, generators)?;
                EntropyVector::from_fn(*n, Some(alpha), |m| upset_limit_entropy(&upset, *s, alpha, m))
            }
        }
    }

    pub fn build(&self, m: u64, alpha: RenyiOrder) -> Result<Construction> {
        match self {
            SweepTemplate::Spike { n, subset, s } => {
                if subset.is_full() {
                    spike_classical(*n, *s, alpha, &vec![m; *n])
                } else {
                    spike_quantum_lt1(*n, *subset, *s, alpha, m)
                }
            }
            SweepTemplate::Target { vector } => target_vector_state(vector, alpha, TargetResolution::Alphabet(m)),
            SweepTemplate::Dilution { n, s } => {
                let m = m as u128;
                let r = if (m as f64).log2() <= *s { WeightedSpectrum::uniform(m)? } else { two_atom_on(m, *s, alpha)? };
                dilution_classical_gt1(*n, alpha, &r)
            }
            SweepTemplate::UpsetLt1 { n, generators, s } => upset_classical_lt1(*n, generators, *s, alpha, &vec![m; *n]),
        }
    }
}

/// One CSV record; the header is `M,subset,entropy_bits,target_bits,abs_error`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRecord {
    #[serde(rename = "M")]
    pub m: u64,
    pub subset: SubsetMask,
    pub entropy_bits: f64,
    pub target_bits: f64,
    pub abs_error: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub m: u64,
    pub vector: EntropyVector,
    /// Sup-norm distance to the target.
    pub error: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepTable {
    pub alpha: RenyiOrder,
    pub target: EntropyVector,
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    pub fn errors(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.error).collect()
    }

    /// Flattened records, one per `(M, subset)`.
    pub fn records(&self) -> Vec<SweepRecord> {
        self.rows
            .iter()
            .flat_map(|row| {
                row.vector.iter().map(move |(subset, e)| {
                    let t = self.target.get(subset);
                    SweepRecord { m: row.m, subset, entropy_bits: e, target_bits: t, abs_error: (e - t).abs() }
                })
            })
            .collect()
    }
}

/// Analytic entropy vectors of `template` at each `M` in `schedule`, with
/// sup-norm errors against `target`.
pub fn convergence_sweep(
    template: &SweepTemplate,
    schedule: &[u64],
    alpha: RenyiOrder,
    target: &EntropyVector,
) -> Result<SweepTable> {
    let alpha = alpha.validate()?;
    if schedule.is_empty() {
        return Err(Error::InvalidParameter("empty schedule".into()));
    }
    if schedule.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter("schedule must be strictly increasing".into()));
    }
    if target.n() != template.n() {
        return Err(Error::DimensionMismatch(format!("target has {} parties, template {}", target.n(), template.n())));
    }
    let mut rows = Vec::with_capacity(schedule.len());
    for &m in schedule {
        let c = template.build(m, alpha)?;
        let vector = analytic_entropy_vector(&c.descriptor, alpha)?.restrict(target.n())?;
        let error = vector.sup_distance(target)?;
        rows.push(SweepRow { m, vector, error });
    }
    Ok(SweepTable { alpha, target: target.clone(), rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn powers(lo: u32, hi: u32) -> Vec<u64> {
        (lo..=hi).map(|k| 1u64 << k).collect()
    }

    #[test]
    fn spike_error_shrinks() {
        let half = RenyiOrder::Finite(0.5);
        let t = SweepTemplate::Spike { n: 2, subset: SubsetMask::full(2).unwrap(), s: 3.0 };
        let target = t.natural_target(half).unwrap();
        let table = convergence_sweep(&t, &powers(2, 20), half, &target).unwrap();
        let e = table.errors();
        assert!(e.windows(2).all(|w| w[1] <= w[0] + 1e-12));
        assert!(*e.last().unwrap() <= 0.01);
    }

    #[test]
    fn dilution_within_constant() {
        let alpha = RenyiOrder::Finite(2.0);
        let n = 3;
        let t = SweepTemplate::Dilution { n, s: 2.5 };
        let target = t.natural_target(alpha).unwrap();
        let table = convergence_sweep(&t, &[8, 16, 64], alpha, &target).unwrap();
        let c = alpha.conjugate_factor().unwrap() * (n as f64).log2();
        for row in &table.rows {
            let on = row.vector.get(SubsetMask::full(n).unwrap());
            assert!((on - 2.5 - (n as f64).log2()).abs() < 1e-9);
            assert!(row.error <= c + 1e-12);
        }
    }

    #[test]
    fn records_flatten_rows() {
        let half = RenyiOrder::Finite(0.5);
        let t = SweepTemplate::Spike { n: 2, subset: SubsetMask::full(2).unwrap(), s: 1.0 };
        let target = t.natural_target(half).unwrap();
        let table = convergence_sweep(&t, &[4, 8], half, &target).unwrap();
        let recs = table.records();
        assert_eq!(recs.len(), 6);
        assert_eq!(recs[5].m, 8);
        assert_eq!(recs[5].subset.to_string(), "12");
    }

    #[test]
    fn rejects_unsorted_schedule() {
        let half = RenyiOrder::Finite(0.5);
        let t = SweepTemplate::Spike { n: 2, subset: SubsetMask::full(2).unwrap(), s: 1.0 };
        let target = t.natural_target(half).unwrap();
        assert!(convergence_sweep(&t, &[8, 8], half, &target).is_err());
        assert!(convergence_sweep(&t, &[], half, &target).is_err());
    }
}
