use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::order::RenyiOrder;
use crate::spectrum::WeightedSpectrum;
use crate::state::Marginals;
use crate::subset::SubsetMask;

/// Symbolic record of a construction, able to produce every marginal
/// spectrum in closed form without building the state.
///
/// Subsets and party indices are 1-based and refer to the construction's
/// own party set (`n + 1` parties for the pure-state kinds).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConstructionDescriptor {
    /// Weight `1 − t` on the all-zero tuple, `t / Π M_i` on every all-nonzero tuple.
    SpikeClassical {
        n: usize,
        s_bits: f64,
        alpha: RenyiOrder,
        #[serde(rename = "M")]
        m: Vec<u64>,
        t: f64,
    },
    /// Grid pure state on `n + 1` parties with `|I|, |I^c| ≥ 2`; each pair
    /// `(i, j) ∈ I × I^c` shares an `M`-level coordinate.
    SpikeQuantumLt1 {
        n: usize,
        subset: SubsetMask,
        s_bits: f64,
        alpha: RenyiOrder,
        #[serde(rename = "M")]
        m: u64,
        t: f64,
        /// Original labels of the relabeled parties `1..=n+1` (`I` first).
        permutation: Vec<usize>,
    },
    /// Purification of `inner` by one extra party placed at `purifier`;
    /// inner parties keep their order around it.
    Purification { n: usize, purifier: usize, inner: Box<ConstructionDescriptor> },
    /// One randomly chosen party carries a symbol drawn from `r`, the rest
    /// hold 0.
    DilutionGt1 { n: usize, alpha: RenyiOrder, r: WeightedSpectrum },
    /// Equal-weight direct sum over `(i, j) ∈ I × I^c` of a purification of
    /// `r` shared by `i` and `j`; `n + 1` parties.
    SpikeQuantumGt1 { n: usize, subset: SubsetMask, s_bits: f64, alpha: RenyiOrder, r: WeightedSpectrum },
    /// Equal mixture over the generators `J` of spikes on `J` with disjoint
    /// local alphabets.
    UpsetLt1 {
        n: usize,
        generators: Vec<SubsetMask>,
        s_bits: f64,
        alpha: RenyiOrder,
        #[serde(rename = "M")]
        m: Vec<u64>,
        t_j: Vec<f64>,
    },
    /// `½ Δ_M ⊕ ½ ⊗_J (uniform dilution on J ⊗ point mass on J^c)`.
    UpsetGt1 {
        n: usize,
        generators: Vec<SubsetMask>,
        s_bits: f64,
        alpha: RenyiOrder,
        #[serde(rename = "M")]
        m: u64,
    },
    /// Party-wise tensor product of components, reported on the first `n`
    /// parties.
    TensorComposite { n: usize, alpha: Option<RenyiOrder>, components: Vec<ConstructionDescriptor> },
}

impl ConstructionDescriptor {
    pub fn kind(&self) -> &'static str {
        match self {
            Self::SpikeClassical { .. } => "spike_classical",
            Self::SpikeQuantumLt1 { .. } => "spike_quantum_lt1",
            Self::Purification { .. } => "purification",
            Self::DilutionGt1 { .. } => "dilution_gt1",
            Self::SpikeQuantumGt1 { .. } => "spike_quantum_gt1",
            Self::UpsetLt1 { .. } => "upset_lt1",
            Self::UpsetGt1 { .. } => "upset_gt1",
            Self::TensorComposite { .. } => "tensor_composite",
        }
    }

    /// Number of parties the descriptor's spectra are defined on.
    pub fn party_count(&self) -> usize {
        match self {
            Self::SpikeClassical { n, .. }
            | Self::DilutionGt1 { n, .. }
            | Self::UpsetLt1 { n, .. }
            | Self::UpsetGt1 { n, .. }
            | Self::Purification { n, .. }
            | Self::TensorComposite { n, .. } => *n,
            Self::SpikeQuantumLt1 { n, .. } | Self::SpikeQuantumGt1 { n, .. } => n + 1,
        }
    }

    /// Order the construction was tuned for.
    pub fn alpha(&self) -> Option<RenyiOrder> {
        match self {
            Self::SpikeClassical { alpha, .. }
            | Self::SpikeQuantumLt1 { alpha, .. }
            | Self::DilutionGt1 { alpha, .. }
            | Self::SpikeQuantumGt1 { alpha, .. }
            | Self::UpsetLt1 { alpha, .. }
            | Self::UpsetGt1 { alpha, .. } => Some(*alpha),
            Self::Purification { inner, .. } => inner.alpha(),
            Self::TensorComposite { alpha, .. } => *alpha,
        }
    }

    /// Whether the explicit state of this kind is a classical distribution.
    pub fn is_classical(&self) -> bool {
        matches!(
            self,
            Self::SpikeClassical { .. } | Self::DilutionGt1 { .. } | Self::UpsetLt1 { .. } | Self::UpsetGt1 { .. }
        )
    }

    /// Rebinds parsed subset labels to the descriptor's party count and
    /// checks structural consistency. Needed after deserialization.
    pub fn normalized(mut self) -> Result<Self> {
        self.normalize_in_place()?;
        Ok(self)
    }

    fn normalize_in_place(&mut self) -> Result<()> {
        let parties = self.party_count();
        if parties == 0 {
            return Err(Error::EmptySystem);
        }
        match self {
            Self::SpikeClassical { n, m, t, .. } => {
                if m.len() != *n {
                    return Err(Error::DimensionMismatch(format!("{n} parties but {} alphabet sizes", m.len())));
                }
                check_unit(*t)?;
            }
            Self::SpikeQuantumLt1 { subset, t, permutation, .. } => {
                *subset = subset.widen(parties - 1)?;
                check_unit(*t)?;
                if permutation.len() != parties {
                    return Err(Error::DimensionMismatch("permutation length".into()));
                }
            }
            Self::Purification { n, purifier, inner } => {
                inner.normalize_in_place()?;
                if inner.party_count() + 1 != *n || *purifier == 0 || *purifier > *n {
                    return Err(Error::InvalidParameter(format!(
                        "purifier {purifier} of a {}-party state does not fit {n} parties",
                        inner.party_count()
                    )));
                }
            }
            Self::SpikeQuantumGt1 { subset, .. } => {
                *subset = subset.widen(parties)?;
                if subset.is_full() {
                    return Err(Error::InvalidParameter("subset must be a proper subset".into()));
                }
            }
            Self::UpsetLt1 { n, generators, m, t_j, .. } => {
                for g in generators.iter_mut() {
                    *g = g.widen(*n)?;
                }
                if m.len() != *n || t_j.len() != generators.len() {
                    return Err(Error::DimensionMismatch("upset parameters have inconsistent lengths".into()));
                }
                for &t in t_j.iter() {
                    check_unit(t)?;
                }
            }
            Self::UpsetGt1 { n, generators, .. } => {
                for g in generators.iter_mut() {
                    *g = g.widen(*n)?;
                }
            }
            Self::TensorComposite { n, components, .. } => {
                for c in components.iter_mut() {
                    c.normalize_in_place()?;
                    if c.party_count() < *n {
                        return Err(Error::DimensionMismatch(format!(
                            "component on {} parties inside {n}-party composite",
                            c.party_count()
                        )));
                    }
                }
            }
            Self::DilutionGt1 { .. } => {}
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        crate::json::to_string(self)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str::<Self>(s)?.normalized()
    }
}

fn check_unit(t: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::InvalidParameter(format!("weight t = {t} outside [0, 1]")));
    }
    Ok(())
}

fn pow_u128(base: u64, exp: usize) -> Result<u128> {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc
            .checked_mul(base as u128)
            .ok_or_else(|| Error::Overflow(format!("{base}^{exp} exceeds the multiplicity range")))?;
    }
    Ok(acc)
}

fn product_u128(values: impl IntoIterator<Item = u64>) -> Result<u128> {
    values.into_iter().try_fold(1u128, |acc, v| {
        acc.checked_mul(v as u128).ok_or_else(|| Error::Overflow("alphabet product exceeds the multiplicity range".into()))
    })
}

/// `{(1 − t, 1), (t / m, m)}`.
pub(crate) fn spike_spectrum(t: f64, m: u128) -> Result<WeightedSpectrum> {
    WeightedSpectrum::new([(1.0 - t, 1), (t / m as f64, m)])
}

impl Marginals for ConstructionDescriptor {
    fn parties(&self) -> usize {
        self.party_count()
    }

    fn marginal_spectrum(&self, subset: SubsetMask) -> Result<WeightedSpectrum> {
        let parties = self.party_count();
        let subset = if subset.n() == parties { subset } else { subset.widen(parties)? };
        match self {
            Self::SpikeClassical { m, t, .. } => {
                let m_i = product_u128(subset.parties().into_iter().map(|p| m[p - 1]))?;
                spike_spectrum(*t, m_i)
            }
            Self::SpikeQuantumLt1 { subset: target, m, t, .. } => {
                let full = SubsetMask::full(parties)?;
                let target = target.widen(parties)?;
                let rest = full.difference(target).expect("target is proper");
                let (k, l) = (target.len(), rest.len());
                let a = subset.intersection(target).map_or(0, |s| s.len());
                let b = subset.intersection(rest).map_or(0, |s| s.len());
                let cut = a * (l - b) + (k - a) * b;
                if cut == 0 {
                    return Ok(WeightedSpectrum::pure());
                }
                spike_spectrum(*t, pow_u128(*m, cut)?)
            }
            Self::Purification { purifier, inner, .. } => {
                if subset.is_full() {
                    return Ok(WeightedSpectrum::pure());
                }
                let side = if subset.contains(*purifier) { subset.complement().expect("not full") } else { subset };
                inner.marginal_spectrum(drop_party(side, *purifier)?)
            }
            Self::DilutionGt1 { n, r, .. } => {
                let k = subset.len();
                let copy = 1.0 / *n as f64;
                let mut parts: Vec<(f64, &WeightedSpectrum)> = vec![(copy, r); k];
                let pure = WeightedSpectrum::pure();
                if k < *n {
                    parts.push(((*n - k) as f64 / *n as f64, &pure));
                }
                WeightedSpectrum::direct_sum(&parts)
            }
            Self::SpikeQuantumGt1 { subset: target, r, .. } => {
                if subset.is_full() {
                    return Ok(WeightedSpectrum::pure());
                }
                let target = target.widen(parties)?;
                let rest = target.complement().expect("target is proper");
                let blocks = target.len() * rest.len();
                let weight = 1.0 / blocks as f64;
                let pure = WeightedSpectrum::pure();
                let mut parts = Vec::with_capacity(blocks);
                for i in target.parties() {
                    for j in rest.parties() {
                        let split = subset.contains(i) != subset.contains(j);
                        parts.push((weight, if split { r } else { &pure }));
                    }
                }
                WeightedSpectrum::direct_sum(&parts)
            }
            Self::UpsetLt1 { generators, m, t_j, .. } => {
                let weight = 1.0 / generators.len() as f64;
                let mut atoms: Vec<(f64, u128)> = Vec::new();
                for (g, &t) in generators.iter().zip(t_j) {
                    match subset.intersection(*g) {
                        None => atoms.push((weight, 1)),
                        Some(common) => {
                            let m_c = product_u128(common.parties().into_iter().map(|p| m[p - 1]))?;
                            atoms.push((weight * (1.0 - t), 1));
                            atoms.push((weight * t / m_c as f64, m_c));
                        }
                    }
                }
                WeightedSpectrum::new(atoms)
            }
            Self::UpsetGt1 { generators, m, .. } => {
                let mut product = WeightedSpectrum::pure();
                for g in generators {
                    let size = g.len() as u128;
                    let factor = match subset.intersection(*g) {
                        None => WeightedSpectrum::pure(),
                        Some(common) if common == *g => WeightedSpectrum::uniform(size * *m as u128)?,
                        Some(common) => {
                            let a = common.len() as u128;
                            WeightedSpectrum::new([
                                ((size - a) as f64 / size as f64, 1),
                                (1.0 / (size * *m as u128) as f64, a * *m as u128),
                            ])?
                        }
                    };
                    product = product.tensor(&factor)?;
                }
                let diagonal = WeightedSpectrum::uniform(*m as u128)?;
                WeightedSpectrum::direct_sum(&[(0.5, &diagonal), (0.5, &product)])
            }
            Self::TensorComposite { components, .. } => {
                let mut acc = WeightedSpectrum::pure();
                for c in components {
                    let inner = subset.widen(c.party_count())?;
                    acc = acc.tensor(&c.marginal_spectrum(inner)?)?;
                }
                Ok(acc)
            }
        }
    }
}

/// Removes party `p` from a mask that does not contain it, shifting higher
/// parties down by one.
fn drop_party(subset: SubsetMask, p: usize) -> Result<SubsetMask> {
    debug_assert!(!subset.contains(p));
    let bits = subset.bits();
    let low = bits & ((1u32 << (p - 1)) - 1);
    let high = (bits >> p) << (p - 1);
    SubsetMask::new(low | high, subset.n() - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn drop_party_shifts() {
        let s = SubsetMask::parse("14", 4).unwrap();
        assert_eq!(drop_party(s, 2).unwrap().to_string(), "13");
        assert_eq!(drop_party(s, 3).unwrap().to_string(), "13");
        let s = SubsetMask::parse("23", 3).unwrap();
        assert_eq!(drop_party(s, 1).unwrap().to_string(), "12");
    }

    #[test]
    fn json_round_trip_rebinds_subsets() {
        let d = ConstructionDescriptor::UpsetGt1 {
            n: 3,
            generators: vec![SubsetMask::parse("12", 3).unwrap()],
            s_bits: 3.0,
            alpha: RenyiOrder::Finite(2.0),
            m: 4,
        };
        let s = d.to_json().unwrap();
        assert_eq!(s, r#"{"kind":"upset_gt1","n":3,"generators":["12"],"s_bits":3.0,"alpha":"2","M":4}"#);
        assert_eq!(ConstructionDescriptor::from_json(&s).unwrap(), d);
    }

    #[test]
    fn spectrum_variants_round_trip() {
        let alpha = RenyiOrder::Finite(2.0);
        let r = crate::spectrum::WeightedSpectrum::uniform(4).unwrap();
        for d in [
            ConstructionDescriptor::DilutionGt1 { n: 3, alpha, r: r.clone() },
            ConstructionDescriptor::SpikeQuantumGt1 {
                n: 3,
                subset: SubsetMask::parse("12", 4).unwrap(),
                s_bits: 2.0,
                alpha,
                r,
            },
        ] {
            assert_eq!(ConstructionDescriptor::from_json(&d.to_json().unwrap()).unwrap(), d);
        }
    }

    #[test]
    fn spike_spectra_are_normalized() {
        let d = ConstructionDescriptor::SpikeClassical {
            n: 2,
            s_bits: 3.0,
            alpha: RenyiOrder::Finite(0.5),
            m: vec![1 << 20, 1 << 20],
            t: 1e-6,
        };
        let spec = d.marginal_spectrum(SubsetMask::full(2).unwrap()).unwrap();
        assert_eq!(spec.atoms()[1].multiplicity, 1 << 40);
    }
}
