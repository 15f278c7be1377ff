//! Downweighting of heterogeneous instruments through the components of
//! Cochran's Q statistic.
//!
//! Each component `Q_j` is referred to a χ²₁ distribution; its upper
//! p-value `q_j` multiplies the instrument's weight by `min(1, 20 q_j)`, so
//! only components significant at the 5% level are downweighted. The
//! procedure is one pass: reference estimate from unpenalized weights,
//! penalties applied once, estimator refit.

use serde::{Deserialize, Serialize};

use crate::distributions::chisq_sf;
use crate::error::{Error, Result};
use crate::summary_data::{ratio_estimates, SummarySet};
use crate::wls::{WeightKind, WeightVector};

/// Multiplier applied to the component p-value.
pub const PENALTY_MULTIPLIER: f64 = 20.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PenaltyReport {
    pub q_total: f64,
    /// Degrees of freedom of the χ² reference for `q_total`.
    pub q_total_df: usize,
    pub q_total_p: f64,
    pub q_j: Vec<f64>,
    pub p_j: Vec<f64>,
    pub factor_j: Vec<f64>,
    pub reference_estimate: f64,
}

impl PenaltyReport {
    fn from_components(q_j: Vec<f64>, df: usize, reference_estimate: f64) -> Result<Self> {
        if q_j.iter().any(|q| !q.is_finite()) {
            return Err(Error::NonFinite("Cochran's Q"));
        }
        let p_j = q_j.iter().map(|&q| chisq_sf(q, 1.0)).collect::<Result<Vec<_>>>()?;
        let factor_j = p_j.iter().map(|p| (PENALTY_MULTIPLIER * p).min(1.0)).collect();
        let q_total: f64 = q_j.iter().sum();
        let q_total_p = if df > 0 { chisq_sf(q_total, df as f64)? } else { 1.0 };
        Ok(Self {
            q_total,
            q_total_df: df,
            q_total_p,
            q_j,
            p_j,
            factor_j,
            reference_estimate,
        })
    }
}

/// Components `(θ_j - θ_ref)² / var(θ_j)` about a reference causal estimate
/// (the IVW estimate, or a median estimate for the median methods).
pub fn cochran_q_ivw(set: &SummarySet, theta_ref: f64) -> Result<PenaltyReport> {
    let ratios = ratio_estimates(set)?;
    let q_j = ratios
        .theta
        .iter()
        .zip(&ratios.variance)
        .map(|(t, v)| (t - theta_ref).powi(2) / v)
        .collect();
    PenaltyReport::from_components(q_j, set.len().saturating_sub(1), theta_ref)
}

/// Components of the weighted residual sum of squares of the MR-Egger fit.
/// The total is referred to χ² on `J - 2` degrees of freedom; components
/// still use χ²₁. `reference_estimate` records the slope.
pub fn cochran_q_egger(set: &SummarySet, intercept_ref: f64, slope_ref: f64) -> Result<PenaltyReport> {
    if set.len() < 3 {
        return Err(Error::InsufficientVariants {
            method: "MR-Egger Q",
            needed: 3,
            got: set.len(),
        });
    }
    let q_j = set
        .variants()
        .iter()
        .map(|v| (v.beta_y() - intercept_ref - slope_ref * v.beta_x()).powi(2) / (v.se_y() * v.se_y()))
        .collect();
    PenaltyReport::from_components(q_j, set.len() - 2, slope_ref)
}

/// `w'_j = w_j · factor_j`.
pub fn penalize_weights(base: &WeightVector, report: &PenaltyReport) -> Result<WeightVector> {
    if base.len() != report.factor_j.len() {
        return Err(Error::LengthMismatch {
            expected: base.len(),
            got: report.factor_j.len(),
        });
    }
    let w = base.values().iter().zip(&report.factor_j).map(|(w, f)| w * f).collect();
    WeightVector::new(w, WeightKind::Penalized)
}
