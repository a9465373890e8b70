//! Entropy vectors: one real number per nonempty subset of parties.

use std::collections::BTreeMap;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::order::RenyiOrder;
use crate::subset::{low_bits, subset_enumerate, SubsetMask, MAX_PARTIES};

/// Values indexed by the nonempty subsets of `[n]`, stored in ascending
/// bitmask order. `order` is `None` for targets and indicator vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct EntropyVector {
    n: usize,
    order: Option<RenyiOrder>,
    values: Vec<f64>,
}

impl EntropyVector {
    pub fn new(n: usize, order: Option<RenyiOrder>, values: Vec<f64>) -> Result<Self> {
        check_n(n)?;
        let expected = low_bits(n) as usize;
        if values.len() != expected {
            return Err(Error::DimensionMismatch(format!(
                "{n} parties need {expected} entries, got {}",
                values.len()
            )));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidWeight(*v));
        }
        Ok(Self { n, order, values })
    }

    pub fn zeros(n: usize, order: Option<RenyiOrder>) -> Result<Self> {
        check_n(n)?;
        Ok(Self { n, order, values: vec![0.0; low_bits(n) as usize] })
    }

    /// Evaluates `f` on every nonempty subset.
    pub fn from_fn(
        n: usize,
        order: Option<RenyiOrder>,
        mut f: impl FnMut(SubsetMask) -> Result<f64>,
    ) -> Result<Self> {
        let values = subset_enumerate(n)?.into_iter().map(&mut f).collect::<Result<Vec<_>>>()?;
        Self::new(n, order, values)
    }

    /// `s · δ_I`.
    pub fn delta(subset: SubsetMask, s: f64) -> Result<Self> {
        let mut v = Self::zeros(subset.n(), None)?;
        v.values[subset.index()] = s;
        Ok(v)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> Option<RenyiOrder> {
        self.order
    }

    pub fn with_order(mut self, order: Option<RenyiOrder>) -> Self {
        self.order = order;
        self
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, subset: SubsetMask) -> f64 {
        debug_assert_eq!(subset.n(), self.n);
        self.values[subset.index()]
    }

    /// Looks up by ascending-digit label.
    pub fn get_label(&self, label: &str) -> Result<f64> {
        Ok(self.get(SubsetMask::parse(label, self.n)?))
    }

    pub fn set(&mut self, subset: SubsetMask, value: f64) {
        self.values[subset.index()] = value;
    }

    pub fn iter(&self) -> impl Iterator<Item = (SubsetMask, f64)> + '_ {
        let n = self.n;
        self.values
            .iter()
            .enumerate()
            .map(move |(i, &v)| (SubsetMask::new(i as u32 + 1, n).expect("valid index"), v))
    }

    /// Entries for subsets of the first `m` parties, as an `m`-party vector.
    pub fn restrict(&self, m: usize) -> Result<EntropyVector> {
        if m == 0 || m > self.n {
            return Err(Error::InvalidParameter(format!("cannot restrict {} parties to {m}", self.n)));
        }
        let values = self.values[..low_bits(m) as usize].to_vec();
        Self::new(m, self.order, values)
    }

    /// Coordinate-wise sum of two vectors on the same parties.
    pub fn add(&self, other: &EntropyVector) -> Result<EntropyVector> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(format!("{} vs {} parties", self.n, other.n)));
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        Self::new(self.n, self.order.or(other.order), values)
    }

    /// Vector of the composite whose parties are `self`'s followed by
    /// `other`'s: `v(I) = self(I ∩ A) + other(I ∩ B)` with empty sets
    /// contributing zero.
    pub fn direct_sum(&self, other: &EntropyVector) -> Result<EntropyVector> {
        let n = self.n + other.n;
        check_n(n)?;
        let low = low_bits(self.n);
        let values = (1..=low_bits(n))
            .map(|bits| {
                let a = bits & low;
                let b = bits >> self.n;
                let va = if a == 0 { 0.0 } else { self.values[a as usize - 1] };
                let vb = if b == 0 { 0.0 } else { other.values[b as usize - 1] };
                va + vb
            })
            .collect();
        Self::new(n, self.order.or(other.order), values)
    }

    pub fn scale(&self, factor: f64) -> EntropyVector {
        Self { n: self.n, order: self.order, values: self.values.iter().map(|v| v * factor).collect() }
    }

    /// `max_I |self(I) − other(I)|`.
    pub fn sup_distance(&self, other: &EntropyVector) -> Result<f64> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(format!("{} vs {} parties", self.n, other.n)));
        }
        Ok(self.values.iter().zip(&other.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
    }

    pub fn min_entry(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Serializes with 17 significant digits.
    pub fn to_json(&self) -> Result<String> {
        crate::json::to_string(self)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::EmptySystem);
    }
    if n > MAX_PARTIES {
        return Err(Error::InvalidParameter(format!("at most {MAX_PARTIES} parties supported, got {n}")));
    }
    Ok(())
}

struct Entries<'a>(&'a EntropyVector);

impl Serialize for Entries<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = serializer.serialize_map(Some(self.0.values.len()))?;
        for (mask, v) in self.0.iter() {
            map.serialize_entry(&mask.to_string(), &v)?;
        }
        map.end()
    }
}

impl Serialize for EntropyVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("EntropyVector", 3)?;
        st.serialize_field("n", &self.n)?;
        if let Some(order) = self.order {
            st.serialize_field("alpha", &order)?;
        }
        st.serialize_field("entries", &Entries(self))?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for EntropyVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        #[derive(Deserialize)]
        struct Raw {
            n: usize,
            #[serde(default)]
            alpha: Option<RenyiOrder>,
            entries: BTreeMap<String, f64>,
        }
        let raw = Raw::deserialize(deserializer)?;
        let mut v = EntropyVector::zeros(raw.n, raw.alpha).map_err(D::Error::custom)?;
        let mut seen = vec![false; v.values.len()];
        for (label, value) in raw.entries {
            let mask = SubsetMask::parse(&label, raw.n).map_err(D::Error::custom)?;
            if !value.is_finite() {
                return Err(D::Error::custom(format!("non-finite entry for subset {label}")));
            }
            v.values[mask.index()] = value;
            seen[mask.index()] = true;
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            let mask = SubsetMask::new(i as u32 + 1, raw.n).map_err(D::Error::custom)?;
            return Err(D::Error::custom(format!("missing entry for subset {mask}")));
        }
        Ok(v)
    }
}
