use serde::Serialize;

use crate::subset::SubsetMask;
use crate::vector::EntropyVector;

/// Slack allowed before a pair counts as a violation.
pub const SATISFY_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MonotonicityViolation {
    pub smaller: SubsetMask,
    pub larger: SubsetMask,
    pub entropy_smaller: f64,
    pub entropy_larger: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NegativeEntry {
    pub subset: SubsetMask,
    pub value: f64,
}

/// Strict inclusions `I ⊊ J` with `S(I) > S(J) + 1e-9`, plus entries below
/// `−1e-9`.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct MonotonicityReport {
    pub violations: Vec<MonotonicityViolation>,
    pub negative: Vec<NegativeEntry>,
}

impl MonotonicityReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.negative.is_empty()
    }
}

pub fn check_monotonicity(ev: &EntropyVector) -> MonotonicityReport {
    let entries: Vec<(SubsetMask, f64)> = ev.iter().collect();
    let mut report = MonotonicityReport::default();
    for &(i, si) in &entries {
        if si < -SATISFY_TOL {
            report.negative.push(NegativeEntry { subset: i, value: si });
        }
        for &(j, sj) in &entries {
            if i.is_proper_subset_of(j) && si > sj + SATISFY_TOL {
                report.violations.push(MonotonicityViolation {
                    smaller: i,
                    larger: j,
                    entropy_smaller: si,
                    entropy_larger: sj,
                });
            }
        }
    }
    report
}
