//! Spectra as multisets of `(value, multiplicity)` pairs.
//!
//! Every entropy formula consumes a [`WeightedSpectrum`]. Multiplicities are
//! `u128` so analytic spectra of very large alphabets (e.g. `2^80` equal
//! eigenvalues) are represented without enumeration.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance under which two eigenvalues count as one multiplet.
pub const MERGE_TOL: f64 = 1e-9;
/// Numerical eigenvalues below this are treated as exact zeros.
pub const ZERO_CUTOFF: f64 = 1e-12;
/// Negative eigenvalues above `-NEGATIVE_TOL` are clamped to zero.
pub const NEGATIVE_TOL: f64 = 1e-9;
/// Allowed deviation of the total weight from 1.
pub const NORM_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub value: f64,
    #[serde(with = "multiplicity_serde")]
    pub multiplicity: u128,
}

/// Multiplicities travel as JSON integers when they fit in `u64` and as
/// decimal strings beyond that; serde cannot buffer `u128` inside tagged
/// enums.
mod multiplicity_serde {
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(m: &u128, s: S) -> Result<S::Ok, S::Error> {
        match u64::try_from(*m) {
            Ok(small) => s.serialize_u64(small),
            Err(_) => s.serialize_str(&m.to_string()),
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Int(u64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<u128, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Int(m) => Ok(m as u128),
            Repr::Text(t) => t.parse().map_err(|_| de::Error::custom(format!("invalid multiplicity `{t}`"))),
        }
    }
}

/// Normalized multiset of nonnegative values, sorted by decreasing value with
/// pairwise distinct values.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeightedSpectrum {
    atoms: Vec<Atom>,
}

impl WeightedSpectrum {
    /// Exact atoms (analytic spectra, probabilities). Zero values are
    /// dropped, near-equal values merged, and the total checked.
    pub fn new(atoms: impl IntoIterator<Item = (f64, u128)>) -> Result<Self> {
        let mut raw = Vec::new();
        for (value, multiplicity) in atoms {
            if !value.is_finite() || value < 0.0 {
                return Err(Error::InvalidWeight(value));
            }
            if multiplicity == 0 || value == 0.0 {
                continue;
            }
            raw.push(Atom { value, multiplicity });
        }
        Self::finish(raw)
    }

    /// Spectrum of a numerically diagonalized density matrix: negative
    /// eigenvalues above `-NEGATIVE_TOL` are clamped, values below
    /// [`ZERO_CUTOFF`] dropped, and the rest merged with [`MERGE_TOL`].
    pub fn from_eigenvalues(values: &[f64]) -> Result<Self> {
        let mut raw = Vec::with_capacity(values.len());
        for &v in values {
            if !v.is_finite() {
                return Err(Error::InvalidWeight(v));
            }
            if v < -NEGATIVE_TOL {
                return Err(Error::NotPositive(v));
            }
            if v < ZERO_CUTOFF {
                continue;
            }
            raw.push(Atom { value: v, multiplicity: 1 });
        }
        Self::finish(raw)
    }

    /// Spectrum of a probability vector; only exact zeros are dropped.
    pub fn from_probabilities(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&p| (p, 1)))
    }

    /// The pure spectrum `{(1, 1)}`.
    pub fn pure() -> Self {
        Self { atoms: vec![Atom { value: 1.0, multiplicity: 1 }] }
    }

    /// Uniform distribution on `m` points.
    pub fn uniform(m: u128) -> Result<Self> {
        if m == 0 {
            return Err(Error::EmptySpectrum);
        }
        Ok(Self { atoms: vec![Atom { value: 1.0 / m as f64, multiplicity: m }] })
    }

    fn finish(mut raw: Vec<Atom>) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::EmptySpectrum);
        }
        raw.sort_by(|a, b| b.value.total_cmp(&a.value));
        let atoms = merge_sorted(raw);
        let spec = Self { atoms };
        let total = spec.total();
        if (total - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { total });
        }
        Ok(spec)
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    /// `Σ value · multiplicity`.
    pub fn total(&self) -> f64 {
        neumaier_sum(self.atoms.iter().map(|a| a.value * a.multiplicity as f64))
    }

    pub fn max_value(&self) -> f64 {
        self.atoms[0].value
    }

    /// Multiplicity of the largest value.
    pub fn max_multiplicity(&self) -> u128 {
        self.atoms[0].multiplicity
    }

    /// Number of nonzero values counted with multiplicity.
    pub fn rank(&self) -> u128 {
        self.atoms.iter().map(|a| a.multiplicity).sum()
    }

    /// Number of distinct values.
    pub fn distinct(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_pure(&self) -> bool {
        self.atoms.len() == 1 && self.atoms[0].multiplicity == 1
    }

    /// Spectrum of the tensor product.
    pub fn tensor(&self, other: &WeightedSpectrum) -> Result<WeightedSpectrum> {
        let mut raw = Vec::with_capacity(self.atoms.len() * other.atoms.len());
        for a in &self.atoms {
            for b in &other.atoms {
                let multiplicity = a
                    .multiplicity
                    .checked_mul(b.multiplicity)
                    .ok_or_else(|| Error::Overflow("spectrum multiplicity".into()))?;
                raw.push(Atom { value: a.value * b.value, multiplicity });
            }
        }
        Self::finish(raw)
    }

    /// Spectrum of `⊕_k w_k ρ_k` for weights `w_k` summing to one.
    pub fn direct_sum(parts: &[(f64, &WeightedSpectrum)]) -> Result<WeightedSpectrum> {
        let mut raw = Vec::new();
        for &(w, spec) in parts {
            if !w.is_finite() || w < 0.0 {
                return Err(Error::InvalidWeight(w));
            }
            if w == 0.0 {
                continue;
            }
            raw.extend(spec.atoms.iter().map(|a| Atom { value: w * a.value, multiplicity: a.multiplicity }));
        }
        Self::finish(raw)
    }

    /// Expands the spectrum into individual values (one per unit of multiplicity).
    pub fn expand(&self, limit: usize) -> Result<Vec<f64>> {
        let rank = self.rank();
        if rank > limit as u128 {
            return Err(Error::BudgetExceeded(format!("spectrum rank {rank} exceeds {limit}")));
        }
        let mut out = Vec::with_capacity(rank as usize);
        for a in &self.atoms {
            out.extend(std::iter::repeat_n(a.value, a.multiplicity as usize));
        }
        Ok(out)
    }

    /// Maximum absolute difference between two spectra after aligning them
    /// value by value in decreasing order (missing values count as zero).
    /// Intended for low-rank comparisons in tests and reports.
    pub fn distance(&self, other: &WeightedSpectrum) -> f64 {
        let mut a = self.atoms.iter().flat_map(|x| std::iter::repeat_n(x.value, x.multiplicity.min(1 << 20) as usize));
        let mut b = other.atoms.iter().flat_map(|x| std::iter::repeat_n(x.value, x.multiplicity.min(1 << 20) as usize));
        let mut worst: f64 = 0.0;
        loop {
            match (a.next(), b.next()) {
                (None, None) => break,
                (x, y) => worst = worst.max((x.unwrap_or(0.0) - y.unwrap_or(0.0)).abs()),
            }
        }
        worst
    }
}

impl<'de> Deserialize<'de> for WeightedSpectrum {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            atoms: Vec<Atom>,
        }
        let raw = Raw::deserialize(deserializer)?;
        WeightedSpectrum::new(raw.atoms.into_iter().map(|a| (a.value, a.multiplicity)))
            .map_err(serde::de::Error::custom)
    }
}

/// Groups a decreasingly sorted list into multiplets whose members lie within
/// `MERGE_TOL` (relative to the group's largest value); each group is replaced
/// by its multiplicity-weighted mean.
fn merge_sorted(sorted: Vec<Atom>) -> Vec<Atom> {
    let mut out: Vec<Atom> = Vec::with_capacity(sorted.len());
    let mut head = f64::NAN;
    let mut weighted = 0.0;
    for atom in sorted {
        if let Some(last) = out.last_mut() {
            if head - atom.value <= MERGE_TOL * head {
                weighted += atom.value * atom.multiplicity as f64;
                last.multiplicity += atom.multiplicity;
                last.value = weighted / last.multiplicity as f64;
                continue;
            }
        }
        head = atom.value;
        weighted = atom.value * atom.multiplicity as f64;
        out.push(atom);
    }
    out
}

/// Compensated (Neumaier) summation.
pub fn neumaier_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}
