use serde::Serialize;

use crate::error::{Error, Result};
use crate::order::RenyiOrder;
use crate::subset::SubsetMask;
use crate::vector::EntropyVector;

use super::monotonicity::SATISFY_TOL;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InequalityInstance {
    /// Human-readable form, e.g. `S(12)+S(23)-S(123)-S(2)`.
    pub expression: String,
    pub slack: f64,
}

/// Strong subadditivity and weak monotonicity for three parties.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VonNeumannReport {
    pub ssa: Vec<InequalityInstance>,
    pub weak_monotonicity: Vec<InequalityInstance>,
    pub min_slack: f64,
    pub passed: bool,
}

/// Slacks `S(AB) + S(BC) − S(ABC) − S(B)` and `S(AC) + S(BC) − S(A) − S(B)`
/// for every labelling of the three parties (three distinct instances each).
pub fn check_vn_inequalities(ev: &EntropyVector) -> Result<VonNeumannReport> {
    if ev.n() != 3 {
        return Err(Error::InvalidParameter(format!("strong subadditivity check needs 3 parties, got {}", ev.n())));
    }
    if let Some(order) = ev.order() {
        if order != RenyiOrder::One {
            return Err(Error::UnsupportedOrder { order: order.to_string(), operation: "von Neumann inequalities" });
        }
    }
    let s = |parties: &[usize]| -> Result<f64> { Ok(ev.get(SubsetMask::from_parties(parties, 3)?)) };
    let mut ssa = Vec::with_capacity(3);
    let mut weak = Vec::with_capacity(3);
    for (a, b, c) in [(1, 2, 3), (2, 1, 3), (1, 3, 2)] {
        // b is the shared middle party
        let slack = s(&[a, b])? + s(&[b, c])? - s(&[1, 2, 3])? - s(&[b])?;
        ssa.push(InequalityInstance {
            expression: format!("S({})+S({})-S(123)-S({b})", label(&[a, b]), label(&[b, c])),
            slack,
        });
    }
    for (a, b, c) in [(1, 2, 3), (1, 3, 2), (2, 3, 1)] {
        // c is the shared party
        let slack = s(&[a, c])? + s(&[b, c])? - s(&[a])? - s(&[b])?;
        weak.push(InequalityInstance {
            expression: format!("S({})+S({})-S({a})-S({b})", label(&[a, c]), label(&[b, c])),
            slack,
        });
    }
    let min_slack = ssa.iter().chain(&weak).map(|x| x.slack).fold(f64::INFINITY, f64::min);
    Ok(VonNeumannReport { ssa, weak_monotonicity: weak, min_slack, passed: min_slack >= -SATISFY_TOL })
}

fn label(parties: &[usize]) -> String {
    let mut p = parties.to_vec();
    p.sort_unstable();
    p.iter().map(|x| x.to_string()).collect()
}
