use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Order α of a Rényi entropy.
///
/// The limits α = 0, 1, ∞ are separate variants so that the removable
/// singularity at α = 1 is never evaluated through the finite formula.
/// `Finite` should be built through [`RenyiOrder::finite`], which maps 0 and
/// 1 onto their dedicated variants and rejects everything else outside
/// `(0, ∞)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RenyiOrder {
    Zero,
    One,
    Infinity,
    Finite(f64),
}

impl RenyiOrder {
    pub fn finite(alpha: f64) -> Result<Self> {
        if alpha.is_nan() || alpha < 0.0 {
            return Err(Error::InvalidOrder(alpha.to_string()));
        }
        Ok(if alpha == 0.0 {
            RenyiOrder::Zero
        } else if alpha == 1.0 {
            RenyiOrder::One
        } else if alpha.is_infinite() {
            RenyiOrder::Infinity
        } else {
            RenyiOrder::Finite(alpha)
        })
    }

    /// Numeric value of α (`f64::INFINITY` for the max-entropy limit).
    pub fn value(self) -> f64 {
        match self {
            RenyiOrder::Zero => 0.0,
            RenyiOrder::One => 1.0,
            RenyiOrder::Infinity => f64::INFINITY,
            RenyiOrder::Finite(a) => a,
        }
    }

    /// `0 < α < 1`.
    pub fn is_between_zero_and_one(self) -> bool {
        matches!(self, RenyiOrder::Finite(a) if a > 0.0 && a < 1.0)
    }

    /// `1 < α ≤ ∞`.
    pub fn is_above_one(self) -> bool {
        match self {
            RenyiOrder::Infinity => true,
            RenyiOrder::Finite(a) => a > 1.0,
            _ => false,
        }
    }

    /// `α / (α − 1)`, the prefactor that turns `log(1/λ_max)` into an upper
    /// bound on `S_α` for α > 1 (equal to 1 at α = ∞).
    pub fn conjugate_factor(self) -> Result<f64> {
        match self {
            RenyiOrder::Infinity => Ok(1.0),
            RenyiOrder::Finite(a) if a > 1.0 => Ok(a / (a - 1.0)),
            other => Err(Error::UnsupportedOrder {
                order: other.to_string(),
                operation: "alpha/(alpha-1) prefactor",
            }),
        }
    }

    pub(crate) fn validate(self) -> Result<Self> {
        match self {
            RenyiOrder::Finite(a) if !(a > 0.0 && a.is_finite() && a != 1.0) => {
                Err(Error::InvalidOrder(a.to_string()))
            }
            other => Ok(other),
        }
    }
}

impl fmt::Display for RenyiOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RenyiOrder::Zero => f.write_str("0"),
            RenyiOrder::One => f.write_str("1"),
            RenyiOrder::Infinity => f.write_str("inf"),
            RenyiOrder::Finite(a) => write!(f, "{a}"),
        }
    }
}

impl FromStr for RenyiOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        match t.to_ascii_lowercase().as_str() {
            "0" => return Ok(RenyiOrder::Zero),
            "1" => return Ok(RenyiOrder::One),
            "inf" | "infinity" | "∞" => return Ok(RenyiOrder::Infinity),
            _ => {}
        }
        let a: f64 = t.parse().map_err(|_| Error::InvalidOrder(s.to_string()))?;
        if !a.is_finite() {
            return Err(Error::InvalidOrder(s.to_string()));
        }
        RenyiOrder::finite(a)
    }
}

impl Serialize for RenyiOrder {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for RenyiOrder {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
