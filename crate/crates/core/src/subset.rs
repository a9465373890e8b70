//! Nonempty subsets of the party set `[n] = {1, ..., n}` encoded as bitmasks.
//!
//! Party `i` corresponds to bit `i - 1`. The canonical text form lists the
//! member parties as ascending digits without separators, so `{1, 3}` is
//! `"13"`. Text forms therefore cover at most nine parties.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest party count for which the full subset lattice is enumerated.
pub const MAX_PARTIES: usize = 24;

/// A nonempty subset of `[n]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubsetMask {
    bits: u32,
    n: u8,
}

impl SubsetMask {
    pub fn new(bits: u32, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptySystem);
        }
        if n > MAX_PARTIES {
            return Err(Error::InvalidParameter(format!(
                "at most {MAX_PARTIES} parties supported, got {n}"
            )));
        }
        if bits == 0 {
            return Err(Error::EmptySubset);
        }
        if bits >> n != 0 {
            return Err(Error::SubsetOutOfRange { bits: bits as u64, n });
        }
        Ok(Self { bits, n: n as u8 })
    }

    /// The full party set `[n]`.
    pub fn full(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptySystem);
        }
        Self::new(low_bits(n), n)
    }

    /// The singleton `{party}` (1-based).
    pub fn singleton(party: usize, n: usize) -> Result<Self> {
        if party == 0 || party > n {
            return Err(Error::IndexOutOfRange(format!("party {party} not in [1, {n}]")));
        }
        Self::new(1 << (party - 1), n)
    }

    /// Builds a subset from 1-based party labels.
    pub fn from_parties(parties: &[usize], n: usize) -> Result<Self> {
        let mut bits = 0u32;
        for &p in parties {
            if p == 0 || p > n {
                return Err(Error::IndexOutOfRange(format!("party {p} not in [1, {n}]")));
            }
            bits |= 1 << (p - 1);
        }
        Self::new(bits, n)
    }

    /// Parses the ascending-digit form, e.g. `"13"` for `{1, 3}`.
    pub fn parse(label: &str, n: usize) -> Result<Self> {
        let label = label.trim();
        if label.is_empty() {
            return Err(Error::EmptySubset);
        }
        let mut bits = 0u32;
        let mut last = 0u32;
        for c in label.chars() {
            let d = c
                .to_digit(10)
                .filter(|&d| d >= 1)
                .ok_or_else(|| Error::InvalidSubsetLabel(label.to_string()))?;
            if d <= last {
                return Err(Error::InvalidSubsetLabel(label.to_string()));
            }
            last = d;
            bits |= 1 << (d - 1);
        }
        Self::new(bits, n)
    }

    #[inline]
    pub fn bits(self) -> u32 {
        self.bits
    }

    #[inline]
    pub fn n(self) -> usize {
        self.n as usize
    }

    /// Zero-based position in [`subset_enumerate`] order.
    #[inline]
    pub fn index(self) -> usize {
        self.bits as usize - 1
    }

    #[inline]
    pub fn contains(self, party: usize) -> bool {
        party >= 1 && party <= self.n() && self.bits & (1 << (party - 1)) != 0
    }

    #[inline]
    pub fn len(self) -> usize {
        self.bits.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        false
    }

    #[inline]
    pub fn is_full(self) -> bool {
        self.bits == low_bits(self.n())
    }

    /// Member parties in ascending order (1-based).
    pub fn parties(self) -> Vec<usize> {
        (1..=self.n()).filter(|&p| self.contains(p)).collect()
    }

    #[inline]
    pub fn is_subset_of(self, other: SubsetMask) -> bool {
        self.bits & !other.bits == 0
    }

    #[inline]
    pub fn is_proper_subset_of(self, other: SubsetMask) -> bool {
        self.bits != other.bits && self.is_subset_of(other)
    }

    /// `[n] \ self`, or `None` when `self` is the full set.
    pub fn complement(self) -> Option<SubsetMask> {
        let c = low_bits(self.n()) & !self.bits;
        (c != 0).then_some(SubsetMask { bits: c, n: self.n })
    }

    pub fn intersection(self, other: SubsetMask) -> Option<SubsetMask> {
        let b = self.bits & other.bits;
        (b != 0).then_some(SubsetMask { bits: b, n: self.n })
    }

    pub fn union(self, other: SubsetMask) -> SubsetMask {
        SubsetMask { bits: self.bits | other.bits, n: self.n }
    }

    /// `self \ other`, or `None` when empty.
    pub fn difference(self, other: SubsetMask) -> Option<SubsetMask> {
        let b = self.bits & !other.bits;
        (b != 0).then_some(SubsetMask { bits: b, n: self.n })
    }

    /// Reinterprets the mask on a larger (or equal) party set.
    pub fn widen(self, n: usize) -> Result<SubsetMask> {
        Self::new(self.bits, n)
    }
}

impl fmt::Display for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in self.parties() {
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

impl Serialize for SubsetMask {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

/// Deserializes a bare label against the largest admissible party count; the
/// caller re-validates against the real `n` with [`SubsetMask::widen`].
impl<'de> Deserialize<'de> for SubsetMask {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        SubsetMask::parse(&s, 9).map_err(serde::de::Error::custom)
    }
}

#[inline]
pub(crate) fn low_bits(n: usize) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

/// All `2^n - 1` nonempty subsets of `[n]` in ascending bitmask order.
pub fn subset_enumerate(n: usize) -> Result<Vec<SubsetMask>> {
    if n == 0 {
        return Err(Error::EmptySystem);
    }
    if n > MAX_PARTIES {
        return Err(Error::InvalidParameter(format!(
            "at most {MAX_PARTIES} parties supported, got {n}"
        )));
    }
    Ok((1..=low_bits(n)).map(|bits| SubsetMask { bits, n: n as u8 }).collect())
}
