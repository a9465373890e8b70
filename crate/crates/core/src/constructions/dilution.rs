//! Constructions for `α > 1`, where entropies of the other marginals cannot
//! be pushed to zero, only kept below a constant.

use crate::entropy::renyi_entropy;
use crate::error::{Error, Result};
use crate::order::RenyiOrder;
use crate::spectrum::WeightedSpectrum;
use crate::state::{ClassicalState, SparsePureState, State, C64};
use crate::subset::SubsetMask;

use super::descriptor::ConstructionDescriptor;
use super::{require_gt1, Construction, MAX_CLASSICAL_ATOMS, MAX_PURE_AMPLITUDES};

/// Allowed `|H_α(R) − s|` for a supplied distribution.
const ENTROPY_MATCH_TOL: f64 = 1e-9;

/// Distribution `{p} ∪ {(1 − p)/(M − 1)} × (M − 1)` on `M = ⌈2^s⌉` points
/// with `H_α = s`; uniform when `2^s` is an integer.
pub fn two_atom_distribution(s: f64, alpha: RenyiOrder) -> Result<WeightedSpectrum> {
    check_two_atom_args(s, alpha)?;
    if s == 0.0 {
        return Ok(WeightedSpectrum::pure());
    }
    two_atom_on(s.exp2().ceil() as u128, s, alpha)
}

fn check_two_atom_args(s: f64, alpha: RenyiOrder) -> Result<RenyiOrder> {
    let alpha = alpha.validate()?;
    if alpha == RenyiOrder::Zero {
        return Err(Error::UnsupportedOrder { order: alpha.to_string(), operation: "two_atom_distribution" });
    }
    if !(s.is_finite() && s >= 0.0) || s > 100.0 {
        return Err(Error::InvalidParameter(format!("target entropy {s} outside [0, 100] bits")));
    }
    Ok(alpha)
}

/// Same shape on a fixed support of `m` points; needs `log₂ m ≥ s`.
pub fn two_atom_on(m: u128, s: f64, alpha: RenyiOrder) -> Result<WeightedSpectrum> {
    let alpha = check_two_atom_args(s, alpha)?;
    if m == 0 || (m as f64).log2() < s - 1e-12 {
        return Err(Error::InvalidParameter(format!("{m} points cannot carry {s} bits")));
    }
    if s == 0.0 {
        return Ok(WeightedSpectrum::pure());
    }
    if (m as f64).log2() <= s {
        return WeightedSpectrum::uniform(m);
    }
    let rest = (m - 1) as f64;
    let build = |p: f64| WeightedSpectrum::new([(p, 1), ((1.0 - p) / rest, m - 1)]);
    if alpha == RenyiOrder::Infinity {
        return build((-s).exp2());
    }
    // H_α decreases from log₂ M at p = 1/M to 0 at p = 1
    let entropy = |p: f64| -> Result<f64> { Ok(renyi_entropy(&build(p)?, alpha)?.value()) };
    let (mut lo, mut hi) = (1.0 / m as f64, 1.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if entropy(mid)? > s {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let p = if (entropy(lo)? - s).abs() <= (entropy(hi)? - s).abs() { lo } else { hi };
    build(p)
}

fn check_entropy(r: &WeightedSpectrum, s: f64, alpha: RenyiOrder) -> Result<()> {
    let actual = renyi_entropy(r, alpha)?.value();
    if (actual - s).abs() > ENTROPY_MATCH_TOL {
        return Err(Error::EntropyMismatch { target: s, actual });
    }
    Ok(())
}

/// Dilution: a uniformly chosen party carries a symbol from `r`, all others
/// hold 0. The joint entropy is `log₂ n + H_α(R)`; every proper marginal
/// has an atom of weight at least `1/n`.
pub fn dilution_classical_gt1(n: usize, alpha: RenyiOrder, r: &WeightedSpectrum) -> Result<Construction> {
    require_gt1(alpha)?;
    if n < 2 {
        return Err(Error::InvalidParameter("dilution needs at least two parties".into()));
    }
    let descriptor = ConstructionDescriptor::DilutionGt1 { n, alpha, r: r.clone() };
    let support = r.rank().checked_mul(n as u128);
    let state = match support {
        Some(size) if size <= MAX_CLASSICAL_ATOMS => {
            let probs = r.expand(MAX_CLASSICAL_ATOMS as usize)?;
            let m = probs.len() as u64;
            let mut atoms = Vec::with_capacity(n * probs.len());
            for i in 0..n {
                for (x, p) in probs.iter().enumerate() {
                    let mut label = vec![0u64; n];
                    label[i] = x as u64 + 1;
                    atoms.push((label, p / n as f64));
                }
            }
            Some(State::Classical(ClassicalState::new(vec![m + 1; n], atoms)?))
        }
        _ => None,
    };
    Ok(Construction { descriptor, state })
}

/// Pure state on `n + 1` parties: an equal-weight direct sum, over pairs
/// `(i, j) ∈ I × I^c`, of a purification of `r` shared by `i` and `j`, the
/// other parties holding a block flag. `S_α(I) = s + log₂(|I||I^c|)` and
/// every other marginal has an eigenvalue of at least `1/(|I||I^c|)`.
///
/// `subset` may be given over `n` or `n + 1` parties.
pub fn spike_quantum_gt1(
    n: usize,
    subset: SubsetMask,
    s: f64,
    alpha: RenyiOrder,
    r: &WeightedSpectrum,
) -> Result<Construction> {
    require_gt1(alpha)?;
    check_entropy(r, s, alpha)?;
    let parties = n + 1;
    if subset.n() != n && subset.n() != parties {
        return Err(Error::DimensionMismatch(format!("subset over {} parties for n = {n}", subset.n())));
    }
    let target = subset.widen(parties)?;
    let Some(rest) = target.complement() else {
        return Err(Error::InvalidParameter("subset must not contain every party".into()));
    };
    let descriptor = ConstructionDescriptor::SpikeQuantumGt1 { n, subset: target, s_bits: s, alpha, r: r.clone() };

    let blocks: Vec<(usize, usize)> =
        target.parties().into_iter().flat_map(|i| rest.parties().into_iter().map(move |j| (i, j))).collect();
    let count = r.rank().checked_mul(blocks.len() as u128);
    let state = match count {
        Some(c) if c <= MAX_PURE_AMPLITUDES => Some(State::Pure(block_state(parties, &blocks, r)?)),
        _ => None,
    };
    Ok(Construction { descriptor, state })
}

fn block_state(parties: usize, blocks: &[(usize, usize)], r: &WeightedSpectrum) -> Result<SparsePureState> {
    let probs = r.expand(MAX_PURE_AMPLITUDES as usize)?;
    let m = probs.len() as u64;
    let size = |p: usize, (i, j): (usize, usize)| if p == i || p == j { m } else { 1 };
    // offsets[p][b]: first local label of block b at party p (1-based p)
    let mut offsets = vec![Vec::with_capacity(blocks.len()); parties + 1];
    let mut dims = vec![0u64; parties + 1];
    for &b in blocks {
        for p in 1..=parties {
            offsets[p].push(dims[p]);
            dims[p] += size(p, b);
        }
    }
    let weight = 1.0 / blocks.len() as f64;
    let mut amplitudes = Vec::with_capacity(blocks.len() * probs.len());
    for (bi, &(i, j)) in blocks.iter().enumerate() {
        for (x, p) in probs.iter().enumerate() {
            let label = (1..=parties)
                .map(|q| offsets[q][bi] + if q == i || q == j { x as u64 } else { 0 })
                .collect();
            amplitudes.push((label, C64::new((weight * p).sqrt(), 0.0)));
        }
    }
    SparsePureState::new(dims[1..].to_vec(), amplitudes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::analytic_entropy_vector;

    #[test]
    fn two_atom_hits_target() {
        for alpha in [RenyiOrder::Finite(1.5), RenyiOrder::Finite(2.0), RenyiOrder::Infinity, RenyiOrder::One] {
            for s in [0.3, 1.0, 2.0, 2.7, 7.25] {
                let r = two_atom_distribution(s, alpha).unwrap();
                let h = renyi_entropy(&r, alpha).unwrap().value();
                assert!((h - s).abs() < 1e-12, "alpha {alpha} s {s}: {h}");
            }
        }
        assert_eq!(two_atom_distribution(2.0, RenyiOrder::Finite(2.0)).unwrap(), WeightedSpectrum::uniform(4).unwrap());
    }

    #[test]
    fn dilution_joint_entropy() {
        let r = WeightedSpectrum::uniform(4).unwrap();
        let c = dilution_classical_gt1(2, RenyiOrder::Finite(2.0), &r).unwrap();
        let v = c.explicit(RenyiOrder::Finite(2.0)).unwrap().unwrap();
        assert!((v.get_label("12").unwrap() - 3.0).abs() < 1e-12);
        // spectrum {(1/2, 1), (1/8, 4)}: −log₂(1/4 + 4/64)
        assert!((v.get_label("1").unwrap() - (-(0.3125f64).log2())).abs() < 1e-12);
        assert!((v.get_label("1").unwrap() - 1.678072).abs() < 1e-6);
        let a = analytic_entropy_vector(&c.descriptor, RenyiOrder::Finite(2.0)).unwrap();
        assert!(v.sup_distance(&a).unwrap() < 1e-12);
    }

    #[test]
    fn quantum_spike_values() {
        let alpha = RenyiOrder::Finite(2.0);
        let r = two_atom_distribution(2.0, alpha).unwrap();
        let c = spike_quantum_gt1(3, SubsetMask::parse("12", 3).unwrap(), 2.0, alpha, &r).unwrap();
        let v = c.analytic(alpha).unwrap();
        assert!((v.get_label("12").unwrap() - 4.0).abs() < 1e-12);
        let explicit = c.explicit(alpha).unwrap().unwrap();
        assert!(explicit.sup_distance(&v).unwrap() < 1e-10);
    }

    #[test]
    fn quantum_spike_rejects_wrong_entropy() {
        let r = WeightedSpectrum::uniform(4).unwrap();
        let err = spike_quantum_gt1(2, SubsetMask::parse("1", 2).unwrap(), 1.0, RenyiOrder::Finite(2.0), &r);
        assert!(matches!(err, Err(Error::EntropyMismatch { .. })));
    }

    #[test]
    fn rejects_low_order() {
        let r = WeightedSpectrum::uniform(4).unwrap();
        assert!(dilution_classical_gt1(2, RenyiOrder::Finite(0.5), &r).is_err());
        assert!(dilution_classical_gt1(2, RenyiOrder::One, &r).is_err());
    }
}
