use serde::Serialize;

use crate::entropy::schatten_norm;
use crate::error::{Error, Result};
use crate::order::RenyiOrder;
use crate::spectrum::WeightedSpectrum;
use crate::state::DensityMatrix;
use crate::subset::SubsetMask;

/// Tolerance for purity and equality flags.
pub const EQUALITY_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EqualityFlags {
    pub rho_a_pure: bool,
    pub rho_b_pure: bool,
    pub rho_ab_pure: bool,
    /// `lhs = 1 + ‖ρ_AB‖_α` within tolerance.
    pub lhs_equals_classic: bool,
}

/// `‖ρ_A‖_α + ‖ρ_B‖_α ≤ κ* + ‖ρ_AB‖_α/κ* ≤ 1 + ‖ρ_AB‖_α` with
/// `κ* = max(M_α, √‖ρ_AB‖_α)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AudenaertReport {
    pub alpha: RenyiOrder,
    pub norm_a: f64,
    pub norm_b: f64,
    /// `‖ρ_A‖_α + ‖ρ_B‖_α`.
    pub lhs: f64,
    pub norm_ab: f64,
    pub m_alpha: f64,
    pub kappa_star: f64,
    pub bound_plus: f64,
    pub bound_classic: f64,
    /// Multiplicities of the largest eigenvalues of `ρ_A` and `ρ_B`.
    pub max_multiplicity_a: u128,
    pub max_multiplicity_b: u128,
    pub equality_flags: EqualityFlags,
}

impl AudenaertReport {
    /// `bound_plus − lhs`.
    pub fn slack_plus(&self) -> f64 {
        self.bound_plus - self.lhs
    }

    /// `bound_classic − bound_plus`.
    pub fn slack_classic(&self) -> f64 {
        self.bound_classic - self.bound_plus
    }

    /// The bound `κ + ‖ρ_AB‖_α/κ` at any admissible `κ`.
    pub fn bound_at(&self, kappa: f64) -> f64 {
        kappa + self.norm_ab / kappa
    }

    pub fn chain_holds(&self, tol: f64) -> bool {
        self.slack_plus() >= -tol && self.slack_classic() >= -tol
    }
}

fn is_pure(spec: &WeightedSpectrum) -> bool {
    spec.max_value() >= 1.0 - EQUALITY_TOL
}

/// Report from the three spectra directly.
pub fn audenaert_from_spectra(
    a: &WeightedSpectrum,
    b: &WeightedSpectrum,
    ab: &WeightedSpectrum,
    alpha: RenyiOrder,
) -> Result<AudenaertReport> {
    let alpha = alpha.validate()?;
    if !alpha.is_above_one() {
        return Err(Error::UnsupportedOrder { order: alpha.to_string(), operation: "audenaert_report" });
    }
    let norm_a = schatten_norm(a, alpha)?;
    let norm_b = schatten_norm(b, alpha)?;
    let norm_ab = schatten_norm(ab, alpha)?;
    let m_alpha = match alpha {
        RenyiOrder::Infinity => (1.0 / a.max_multiplicity() as f64).max(1.0 / b.max_multiplicity() as f64),
        _ => {
            let e = alpha.value() - 1.0;
            ((a.max_value() / norm_a).powf(e)).max((b.max_value() / norm_b).powf(e))
        }
    };
    let root = norm_ab.sqrt();
    let kappa_star = m_alpha.max(root);
    let bound_plus = if m_alpha <= root { 2.0 * root } else { m_alpha + norm_ab / m_alpha };
    let lhs = norm_a + norm_b;
    let bound_classic = 1.0 + norm_ab;
    Ok(AudenaertReport {
        alpha,
        norm_a,
        norm_b,
        lhs,
        norm_ab,
        m_alpha,
        kappa_star,
        bound_plus,
        bound_classic,
        max_multiplicity_a: a.max_multiplicity(),
        max_multiplicity_b: b.max_multiplicity(),
        equality_flags: EqualityFlags {
            rho_a_pure: is_pure(a),
            rho_b_pure: is_pure(b),
            rho_ab_pure: is_pure(ab),
            lhs_equals_classic: (bound_classic - lhs).abs() <= EQUALITY_TOL,
        },
    })
}

/// Report for a bipartite density matrix, `1 < α ≤ ∞`.
pub fn audenaert_report(rho_ab: &DensityMatrix, alpha: RenyiOrder) -> Result<AudenaertReport> {
    if rho_ab.n() != 2 {
        return Err(Error::InvalidParameter(format!("bipartite state required, got {} parties", rho_ab.n())));
    }
    let a = rho_ab.marginal_spectrum(SubsetMask::parse("1", 2)?)?;
    let b = rho_ab.marginal_spectrum(SubsetMask::parse("2", 2)?)?;
    let ab = rho_ab.spectrum()?;
    audenaert_from_spectra(&a, &b, &ab, alpha)
}
