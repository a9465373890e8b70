//! Spikes for `0 < α < 1`: states with entropy close to `s` on one subset
//! and close to zero on every other.

use crate::error::{Error, Result};
use crate::order::RenyiOrder;
use crate::state::{ClassicalState, SparsePureState, State, C64};
use crate::subset::SubsetMask;

use super::descriptor::ConstructionDescriptor;
use super::{require_lt1, require_positive_bits, Construction, MAX_CLASSICAL_ATOMS, MAX_PURE_AMPLITUDES};

/// `ln(2^{s(1−α)} − 1)`.
fn ln_excess(s: f64, alpha: f64) -> f64 {
    (s * (1.0 - alpha) * std::f64::consts::LN_2).exp_m1().ln()
}

/// Spike weight `t = ((2^{s(1−α)} − 1) / M^{1−α})^{1/α}` for a total
/// alphabet product `M = exp(ln_m)`, computed in log space. May exceed 1.
pub fn spike_t(s: f64, alpha: f64, ln_m: f64) -> f64 {
    ((ln_excess(s, alpha) - (1.0 - alpha) * ln_m) / alpha).exp()
}

/// Smallest alphabet product `M` with `t ≤ 1`, i.e.
/// `M^{1−α} ≥ 2^{s(1−α)} − 1`.
pub fn min_alphabet_size(s: f64, alpha: RenyiOrder) -> Result<u128> {
    let a = require_lt1(alpha)?;
    require_positive_bits(s)?;
    let x = (ln_excess(s, a) / (1.0 - a)).exp();
    if x.is_nan() || x >= 1e38 {
        return Err(Error::Overflow(format!("minimal alphabet for s = {s} exceeds 1e38")));
    }
    let mut m = x.ceil().max(1.0) as u128;
    // absorb rounding at exact boundaries
    if m > 1 && spike_t(s, a, ((m - 1) as f64).ln()) <= 1.0 {
        m -= 1;
    }
    while spike_t(s, a, (m as f64).ln()) > 1.0 {
        m += 1;
    }
    Ok(m)
}

fn checked_t(s: f64, alpha: RenyiOrder, ln_m: f64) -> Result<f64> {
    let a = require_lt1(alpha)?;
    let t = spike_t(s, a, ln_m);
    if t > 1.0 + 1e-12 {
        return Err(Error::AlphabetTooSmall { t, minimum: min_alphabet_size(s, alpha)? });
    }
    Ok(t.min(1.0))
}

/// Classical spike on `n` parties with alphabets `{0} ∪ [M_i]`: weight
/// `1 − t` on the all-zero tuple and `t / Π M_i` on each all-nonzero tuple.
pub fn spike_classical(n: usize, s: f64, alpha: RenyiOrder, m: &[u64]) -> Result<Construction> {
    require_lt1(alpha)?;
    require_positive_bits(s)?;
    if n == 0 {
        return Err(Error::EmptySystem);
    }
    if m.len() != n {
        return Err(Error::DimensionMismatch(format!("{n} parties but {} alphabet sizes", m.len())));
    }
    if m.contains(&0) {
        return Err(Error::InvalidParameter("alphabet sizes must be positive".into()));
    }
    let ln_m: f64 = m.iter().map(|&x| (x as f64).ln()).sum();
    let t = checked_t(s, alpha, ln_m)?;
    let descriptor = ConstructionDescriptor::SpikeClassical { n, s_bits: s, alpha, m: m.to_vec(), t };

    let support = m.iter().try_fold(1u128, |acc, &x| acc.checked_mul(x as u128)).map(|p| p + 1);
    let state = match support {
        Some(size) if size <= MAX_CLASSICAL_ATOMS => Some(State::Classical(spike_state(m, t)?)),
        _ => None,
    };
    Ok(Construction { descriptor, state })
}

fn spike_state(m: &[u64], t: f64) -> Result<ClassicalState> {
    let total: u64 = m.iter().product();
    let weight = t / total as f64;
    let mut atoms = Vec::with_capacity(total as usize + 1);
    atoms.push((vec![0; m.len()], 1.0 - t));
    for flat in 0..total {
        let mut x = vec![0u64; m.len()];
        let mut rest = flat;
        for k in (0..m.len()).rev() {
            x[k] = 1 + rest % m[k];
            rest /= m[k];
        }
        atoms.push((x, weight));
    }
    let sizes = m.iter().map(|x| x + 1).collect();
    ClassicalState::new(sizes, atoms)
}

/// Pure spike on `n + 1` parties whose entropy is close to `s` on `subset ⊆ [n]`
/// and close to zero on every other subset of `[n]`.
///
/// * `subset = [n]`: the classical spike on `[n]`, purified by party `n + 1`.
/// * `|subset| = 1`: the classical spike on the other `n` parties, purified
///   by the singleton.
/// * otherwise: every pair `(i, j) ∈ I × I^c` shares an `M`-level
///   coordinate, so `ρ_I` and `ρ_{I^c}` are isospectral classical spikes.
pub fn spike_quantum_lt1(n: usize, subset: SubsetMask, s: f64, alpha: RenyiOrder, m: u64) -> Result<Construction> {
    require_lt1(alpha)?;
    require_positive_bits(s)?;
    if subset.n() != n {
        return Err(Error::DimensionMismatch(format!("subset over {} parties for n = {n}", subset.n())));
    }
    let parties = n + 1;
    if subset.is_full() || subset.len() == 1 {
        let (inner_n, purifier) = if subset.is_full() { (n, parties) } else { (n, subset.parties()[0]) };
        let inner = spike_classical(inner_n, s, alpha, &vec![m; inner_n])?;
        if m < 2 {
            return Err(Error::InvalidParameter("quantum spike needs M ≥ 2".into()));
        }
        let state = match &inner.state {
            Some(State::Classical(p)) if (p.support_size() as u128) <= MAX_PURE_AMPLITUDES => {
                Some(State::Pure(SparsePureState::purify(p, purifier - 1)?))
            }
            _ => None,
        };
        let descriptor =
            ConstructionDescriptor::Purification { n: parties, purifier, inner: Box::new(inner.descriptor) };
        return Ok(Construction { descriptor, state });
    }

    let target = subset.widen(parties)?;
    let rest = target.complement().expect("proper subset");
    let (k, l) = (target.len(), rest.len());
    let t = checked_t(s, alpha, (k * l) as f64 * (m as f64).ln())?;
    if m < 2 {
        return Err(Error::InvalidParameter("quantum spike needs M ≥ 2".into()));
    }
    let permutation: Vec<usize> = target.parties().into_iter().chain(rest.parties()).collect();
    let descriptor =
        ConstructionDescriptor::SpikeQuantumLt1 { n, subset, s_bits: s, alpha, m, t, permutation: permutation.clone() };

    let amplitudes = (m as u128).checked_pow((k * l) as u32).map(|c| c + 1);
    let state = match amplitudes {
        Some(count) if count <= MAX_PURE_AMPLITUDES => Some(State::Pure(grid_state(k, l, m, t, &permutation)?)),
        _ => None,
    };
    Ok(Construction { descriptor, state })
}

fn grid_state(k: usize, l: usize, m: u64, t: f64, permutation: &[usize]) -> Result<SparsePureState> {
    let cells = (k * l) as u32;
    let count = m.pow(cells);
    let mut dims = vec![1 + m.pow(l as u32); k];
    dims.extend(std::iter::repeat_n(1 + m.pow(k as u32), l));

    let amp = C64::new((t / count as f64).sqrt(), 0.0);
    let mut amplitudes = Vec::with_capacity(count as usize + 1);
    amplitudes.push((vec![0; k + l], C64::new((1.0 - t).sqrt(), 0.0)));
    let mut x = vec![0u64; k * l];
    for flat in 0..count {
        let mut rest = flat;
        for cell in x.iter_mut() {
            *cell = rest % m;
            rest /= m;
        }
        let mut label = vec![1u64; k + l];
        for i in 0..k {
            for j in 0..l {
                let v = x[i * l + j];
                label[i] += v * m.pow(j as u32);
                label[k + j] += v * m.pow(i as u32);
            }
        }
        amplitudes.push((label, amp));
    }
    let relabeled = SparsePureState::new(dims, amplitudes)?;
    // original party p sits at relabeled position permutation⁻¹(p)
    let mut order = vec![0usize; k + l];
    for (pos, &p) in permutation.iter().enumerate() {
        order[p - 1] = pos;
    }
    relabeled.permute_parties(&order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::analytic_entropy_vector;
    use crate::entropy::entropy_vector;

    fn half() -> RenyiOrder {
        RenyiOrder::Finite(0.5)
    }

    #[test]
    fn min_alphabet_examples() {
        assert_eq!(min_alphabet_size(1.0, half()).unwrap(), 1);
        assert_eq!(min_alphabet_size(3.0, half()).unwrap(), 4);
        assert_eq!(min_alphabet_size(1e-9, half()).unwrap(), 1);
        assert!(min_alphabet_size(1.0, RenyiOrder::Finite(2.0)).is_err());
    }

    #[test]
    fn small_spike_weight() {
        let c = spike_classical(2, 2.0, half(), &[2, 2]).unwrap();
        let ConstructionDescriptor::SpikeClassical { t, .. } = c.descriptor else { panic!() };
        assert!((t - 0.25).abs() < 1e-15);
        let Some(State::Classical(p)) = &c.state else { panic!() };
        assert_eq!(p.support_size(), 5);
    }

    #[test]
    fn too_small_alphabet_names_minimum() {
        match spike_classical(2, 3.0, half(), &[1, 1]) {
            Err(Error::AlphabetTooSmall { minimum, t }) => {
                assert_eq!(minimum, 4);
                assert!(t > 1.0);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn large_alphabets_skip_explicit_state() {
        let c = spike_classical(2, 3.0, half(), &[1 << 20, 1 << 20]).unwrap();
        assert!(c.state.is_none());
        let v = analytic_entropy_vector(&c.descriptor, half()).unwrap();
        assert!((v.get_label("12").unwrap() - 3.0).abs() < 0.01);
    }

    #[test]
    fn purified_cases_match_explicit() {
        for label in ["123", "2"] {
            let c = spike_quantum_lt1(3, SubsetMask::parse(label, 3).unwrap(), 1.5, half(), 2).unwrap();
            let explicit = c.explicit(half()).unwrap().unwrap();
            let analytic = c.analytic(half()).unwrap();
            assert!(explicit.sup_distance(&analytic).unwrap() < 1e-10, "{label}");
        }
    }

    #[test]
    fn grid_case_matches_explicit() {
        let c = spike_quantum_lt1(3, SubsetMask::parse("12", 3).unwrap(), 1.0, half(), 2).unwrap();
        let Some(State::Pure(psi)) = &c.state else { panic!() };
        assert_eq!(psi.len(), 17);
        assert_eq!(psi.dims(), &[5, 5, 5, 5]);
        let explicit = entropy_vector(psi, half()).unwrap();
        let analytic = c.analytic(half()).unwrap();
        assert!(explicit.sup_distance(&analytic).unwrap() < 1e-10);
    }

    #[test]
    fn grid_case_with_scattered_subset() {
        let c = spike_quantum_lt1(3, SubsetMask::parse("13", 3).unwrap(), 1.0, half(), 2).unwrap();
        let explicit = c.explicit(half()).unwrap().unwrap();
        let analytic = c.analytic(half()).unwrap();
        assert!(explicit.sup_distance(&analytic).unwrap() < 1e-10);
        let top = analytic.get_label("13").unwrap();
        for (mask, v) in analytic.restrict(3).unwrap().iter() {
            if mask.to_string() != "13" {
                assert!(v < top);
            }
        }
    }
}
