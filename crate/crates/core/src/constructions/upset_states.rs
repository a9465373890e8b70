//! Classical states whose entropy vectors approach `s` times an upset
//! indicator.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::order::RenyiOrder;
use crate::state::{ClassicalState, State};
use crate::subset::SubsetMask;

use super::descriptor::ConstructionDescriptor;
use super::upset::{upward_closure, Upset};
use super::{require_gt1, require_lt1, require_positive_bits, Construction, MAX_CLASSICAL_ATOMS};

/// Guaranteed ranges for the entropies of an upset construction.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct UpsetBounds {
    /// Lower bound on members of the upset.
    pub member_lower: f64,
    /// Upper bound on members of the upset.
    pub member_upper: f64,
    /// Upper bound on non-members.
    pub outside_upper: f64,
    /// Exact large-alphabet value on non-members, when known (`α < 1`).
    pub outside_limit: Option<f64>,
}

impl UpsetBounds {
    /// `α < 1`: members in `[s, s + (log₂|ℒ| + 1)/(1 − α)]`, non-members at
    /// most `log₂|ℒ| + 1` with limit `log₂|ℒ|`.
    pub fn lt1(generators: usize, s: f64, alpha: f64) -> Self {
        let log_l = (generators as f64).log2();
        UpsetBounds {
            member_lower: s,
            member_upper: s + (log_l + 1.0) / (1.0 - alpha),
            outside_upper: log_l + 1.0,
            outside_limit: Some(log_l),
        }
    }

    /// `α > 1`: `C = α/(α − 1) · log₂(2 n^k)`; members in `[s, s + C]`,
    /// non-members at most `C`.
    pub fn gt1(n: usize, generators: usize, s: f64, alpha: RenyiOrder) -> Result<Self> {
        let c = alpha.conjugate_factor()? * (1.0 + generators as f64 * (n as f64).log2());
        Ok(UpsetBounds { member_lower: s, member_upper: s + c, outside_upper: c, outside_limit: None })
    }
}

/// Large-alphabet limit of the `α < 1` construction on `subset`:
/// `(1/(1 − α)) · log₂(|ℒ|^{1−α} + 2^{s(1−α)} · #{J ∈ ℒ : J ⊆ I})`.
pub fn upset_limit_entropy(upset: &Upset, s: f64, alpha: RenyiOrder, subset: SubsetMask) -> Result<f64> {
    let a = require_lt1(alpha)?;
    let l = upset.minimal().len() as f64;
    let below = upset.generators_below(subset) as f64;
    Ok((l.powf(1.0 - a) + (s * (1.0 - a)).exp2() * below).log2() / (1.0 - a))
}

/// Equal mixture over the minimal generators `J` of spikes on `J` (point
/// masses elsewhere), with pairwise disjoint local alphabets. Each spike is
/// tuned to `s' = s + α/(1 − α) · log₂|ℒ|`.
pub fn upset_classical_lt1(
    n: usize,
    generators: &[SubsetMask],
    s: f64,
    alpha: RenyiOrder,
    m: &[u64],
) -> Result<Construction> {
    let a = require_lt1(alpha)?;
    require_positive_bits(s)?;
    if m.len() != n {
        return Err(Error::DimensionMismatch(format!("{n} parties but {} alphabet sizes", m.len())));
    }
    if m.contains(&0) {
        return Err(Error::InvalidParameter("alphabet sizes must be positive".into()));
    }
    let upset = upward_closure(n, generators)?;
    let gens = upset.minimal().to_vec();
    let l = gens.len() as f64;
    let s_prime = s + a / (1.0 - a) * l.log2();
    let mut t_j = Vec::with_capacity(gens.len());
    for g in &gens {
        let ln_m: f64 = g.parties().iter().map(|&p| (m[p - 1] as f64).ln()).sum();
        let t = ((s_prime * (1.0 - a) * std::f64::consts::LN_2 - (1.0 - a) * ln_m) / a).exp();
        if t > 1.0 + 1e-12 {
            let minimum = s_prime.exp2().ceil();
            return Err(Error::AlphabetTooSmall { t, minimum: if minimum < 1e38 { minimum as u128 } else { u128::MAX } });
        }
        t_j.push(t.min(1.0));
    }
    let descriptor = ConstructionDescriptor::UpsetLt1 {
        n,
        generators: gens.clone(),
        s_bits: s,
        alpha,
        m: m.to_vec(),
        t_j: t_j.clone(),
    };

    let support = gens.iter().try_fold(0u128, |acc, g| {
        let m_j = g.parties().iter().try_fold(1u128, |p, &i| p.checked_mul(m[i - 1] as u128))?;
        acc.checked_add(m_j + 1)
    });
    let state = match support {
        Some(size) if size <= MAX_CLASSICAL_ATOMS => Some(State::Classical(upset_lt1_state(n, &gens, m, &t_j)?)),
        _ => None,
    };
    Ok(Construction { descriptor, state })
}

fn upset_lt1_state(n: usize, gens: &[SubsetMask], m: &[u64], t_j: &[f64]) -> Result<ClassicalState> {
    // offsets[i][g]: first symbol of generator g's sub-alphabet at party i
    let mut offsets = vec![Vec::with_capacity(gens.len()); n];
    let mut sizes = vec![0u64; n];
    for g in gens {
        for i in 0..n {
            offsets[i].push(sizes[i]);
            sizes[i] += if g.contains(i + 1) { m[i] + 1 } else { 1 };
        }
    }
    let weight = 1.0 / gens.len() as f64;
    let mut atoms = Vec::new();
    for (gi, (g, &t)) in gens.iter().zip(t_j).enumerate() {
        let base: Vec<u64> = (0..n).map(|i| offsets[i][gi]).collect();
        atoms.push((base.clone(), weight * (1.0 - t)));
        let members: Vec<usize> = g.parties().into_iter().map(|p| p - 1).collect();
        let total: u64 = members.iter().map(|&i| m[i]).product();
        let p = weight * t / total as f64;
        for flat in 0..total {
            let mut x = base.clone();
            let mut rest = flat;
            for &i in members.iter().rev() {
                x[i] += 1 + rest % m[i];
                rest /= m[i];
            }
            atoms.push((x, p));
        }
    }
    ClassicalState::new(sizes, atoms)
}

/// Smallest `M ≥ 1` with `s ≤ 1 + log₂ M`.
pub(crate) fn upset_gt1_alphabet(s: f64) -> Result<u64> {
    let x = (s - 1.0).exp2().ceil().max(1.0);
    if x > 1e15 {
        return Err(Error::Overflow(format!("alphabet for s = {s} too large")));
    }
    let mut m = x as u64;
    while m > 1 && s <= 1.0 + ((m - 1) as f64).log2() {
        m -= 1;
    }
    Ok(m)
}

/// `½ Δ_M ⊕ ½ ⊗_J (Q_{J:M} ⊗ δ_{J^c})` with `Δ_M` uniform on the diagonal of
/// `[M]^n` and `Q_{J:M}` the uniform dilution on the parties of `J`.
/// `m` defaults to the smallest `M` with `s ≤ 1 + log₂ M`.
pub fn upset_classical_gt1(
    n: usize,
    generators: &[SubsetMask],
    s: f64,
    alpha: RenyiOrder,
    m: Option<u64>,
) -> Result<Construction> {
    require_gt1(alpha)?;
    require_positive_bits(s)?;
    let needed = upset_gt1_alphabet(s)?;
    let m = m.unwrap_or(needed);
    if m < needed {
        return Err(Error::InvalidParameter(format!("M = {m} is below the required {needed} for s = {s}")));
    }
    let upset = upward_closure(n, generators)?;
    let gens = upset.minimal().to_vec();
    let descriptor = ConstructionDescriptor::UpsetGt1 { n, generators: gens.clone(), s_bits: s, alpha, m };

    let product = gens.iter().try_fold(1u128, |acc, g| acc.checked_mul(g.len() as u128 * m as u128));
    let alphabet_fits = (0..n).all(|i| {
        gens.iter()
            .try_fold(1u64, |acc, g| acc.checked_mul(if g.contains(i + 1) { m + 1 } else { 1 }))
            .and_then(|p| p.checked_add(m))
            .is_some()
    });
    let state = match product {
        Some(p) if alphabet_fits && p + m as u128 <= MAX_CLASSICAL_ATOMS => {
            Some(State::Classical(upset_gt1_state(n, &gens, m)?))
        }
        _ => None,
    };
    Ok(Construction { descriptor, state })
}

fn upset_gt1_state(n: usize, gens: &[SubsetMask], m: u64) -> Result<ClassicalState> {
    // radix[i][g]: local alphabet of party i inside generator g's factor
    let radix: Vec<Vec<u64>> =
        (0..n).map(|i| gens.iter().map(|g| if g.contains(i + 1) { m + 1 } else { 1 }).collect()).collect();
    let sizes: Vec<u64> = radix.iter().map(|r| m + r.iter().product::<u64>()).collect();

    let mut atoms: Vec<(Vec<u64>, f64)> = (0..m).map(|x| (vec![x; n], 0.5 / m as f64)).collect();

    // factor atoms per generator: (party, symbol) of the one nonzero coordinate
    let factors: Vec<Vec<(usize, u64)>> = gens
        .iter()
        .map(|g| g.parties().into_iter().flat_map(|p| (1..=m).map(move |x| (p - 1, x))).collect())
        .collect();
    let weight = 0.5 / factors.iter().map(|f| f.len() as f64).product::<f64>();
    let mut choice = vec![0usize; gens.len()];
    loop {
        let label = (0..n)
            .map(|i| {
                let mut code = 0u64;
                for (g, &c) in choice.iter().enumerate() {
                    let (party, x) = factors[g][c];
                    let symbol = if party == i { x } else { 0 };
                    code = code * radix[i][g] + symbol;
                }
                m + code
            })
            .collect();
        atoms.push((label, weight));
        // odometer over the factor choices
        let mut g = gens.len();
        loop {
            if g == 0 {
                return ClassicalState::new(sizes, atoms);
            }
            g -= 1;
            choice[g] += 1;
            if choice[g] < factors[g].len() {
                break;
            }
            choice[g] = 0;
        }
    }
}
