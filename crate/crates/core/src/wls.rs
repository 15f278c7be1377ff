//! Weighted regression of outcome associations on exposure associations:
//! the inverse-variance weighted (IVW) estimator without an intercept, the
//! MR-Egger estimator with one, and the diagnostics that describe when the
//! two are consistent.

use serde::{Deserialize, Serialize};

use crate::estimate::{egger_inference, normal_inference, EffectsModel, Estimate, InterceptEstimate, Method, Reference};
use crate::error::{Error, Result};
use crate::linalg::lstsq_qr;
use crate::summary_data::SummarySet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WeightKind {
    InverseVariance,
    Penalized,
}

/// Per-variant analysis weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightVector {
    w: Vec<f64>,
    kind: WeightKind,
}

impl WeightVector {
    /// `se_y^-2` for every variant.
    pub fn inverse_variance(set: &SummarySet) -> WeightVector {
        WeightVector {
            w: set.variants().iter().map(|v| v.se_y().powi(-2)).collect(),
            kind: WeightKind::InverseVariance,
        }
    }

    pub fn new(w: Vec<f64>, kind: WeightKind) -> Result<WeightVector> {
        if let Some(bad) = w.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::InvalidWeights(format!("weight {bad} is not a finite non-negative number")));
        }
        Ok(WeightVector { w, kind })
    }

    pub fn values(&self) -> &[f64] {
        &self.w
    }

    pub fn kind(&self) -> WeightKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.w.len()
    }

    pub fn is_empty(&self) -> bool {
        self.w.is_empty()
    }

    pub fn positive_count(&self) -> usize {
        self.w.iter().filter(|v| **v > 0.0).count()
    }

    /// Weights rescaled to sum to one.
    pub fn normalized(&self) -> Result<Vec<f64>> {
        let total: f64 = self.w.iter().sum();
        if total <= 0.0 {
            return Err(Error::InvalidWeights("all weights are zero".into()));
        }
        Ok(self.w.iter().map(|v| v / total).collect())
    }

    pub(crate) fn check(&self, set: &SummarySet, method: &'static str, needed: usize) -> Result<()> {
        if self.w.len() != set.len() {
            return Err(Error::LengthMismatch {
                expected: set.len(),
                got: self.w.len(),
            });
        }
        let got = self.positive_count();
        if got < needed {
            return Err(Error::InsufficientVariants { method, needed, got });
        }
        Ok(())
    }
}

/// Weighted least-squares fit on the observations with positive weight.
#[derive(Debug, Clone)]
struct WlsFit {
    coef: Vec<f64>,
    /// Standard errors with the residual scale fixed at 1.
    se_fixed: Vec<f64>,
    /// Residual standard error; `None` when there are no residual degrees of freedom.
    sigma: Option<f64>,
    n: usize,
}

fn wls_fit(set: &SummarySet, weights: &WeightVector, intercept: bool) -> Result<WlsFit> {
    let mut cols: Vec<Vec<f64>> = if intercept { vec![Vec::new(), Vec::new()] } else { vec![Vec::new()] };
    let mut y = Vec::new();
    for (v, &w) in set.variants().iter().zip(weights.values()) {
        if w <= 0.0 {
            continue;
        }
        let sw = w.sqrt();
        if intercept {
            cols[0].push(sw);
        }
        cols.last_mut().expect("at least one column").push(v.beta_x() * sw);
        y.push(v.beta_y() * sw);
    }
    let n = y.len();
    let p = cols.len();
    let fit = lstsq_qr(&cols, &y).ok_or_else(|| {
        Error::SingularDesign(if intercept {
            "exposure associations do not vary, the slope is undefined".into()
        } else {
            "all exposure associations are zero".into()
        })
    })?;
    let se_fixed: Vec<f64> = (0..p).map(|k| fit.xtx_inv[k * p + k].sqrt()).collect();
    let sigma = (n > p).then(|| (fit.rss / (n - p) as f64).sqrt());
    if fit.coef.iter().chain(&se_fixed).chain(sigma.iter()).any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("weighted regression"));
    }
    Ok(WlsFit {
        coef: fit.coef,
        se_fixed,
        sigma,
        n,
    })
}

/// Inverse-variance weighted estimate: weighted regression through the origin.
///
/// Fixed effects divide the raw regression standard error by the residual
/// standard error; multiplicative random effects divide by `min(sigma, 1)`.
/// With a single variant the residual scale is undefined and a
/// random-effects request falls back to fixed effects (flagged in the
/// estimate). Intervals and p-values use the normal distribution.
pub fn ivw(set: &SummarySet, weights: &WeightVector, effects: EffectsModel) -> Result<Estimate> {
    ivw_as(set, weights, effects, Method::Ivw)
}

pub(crate) fn ivw_as(set: &SummarySet, weights: &WeightVector, effects: EffectsModel, method: Method) -> Result<Estimate> {
    set.require_nonzero_exposure()?;
    weights.check(set, "IVW", 1)?;
    let fit = wls_fit(set, weights, false)?;
    let theta = fit.coef[0];
    let (se, effects_model, fallback) = match (effects, fit.sigma) {
        (EffectsModel::Fixed, _) => (fit.se_fixed[0], EffectsModel::Fixed, false),
        (EffectsModel::MultiplicativeRandom, Some(sigma)) => {
            (fit.se_fixed[0] * sigma.max(1.0), EffectsModel::MultiplicativeRandom, false)
        }
        (EffectsModel::MultiplicativeRandom, None) => (fit.se_fixed[0], EffectsModel::Fixed, true),
    };
    let (ci, p) = normal_inference(theta, se);
    Ok(Estimate {
        method,
        theta,
        se: Some(se),
        ci: Some(ci),
        p_value: Some(p),
        intercept: None,
        residual_scale: fit.sigma,
        effects_model,
        reference: Reference::Normal,
        se_reported: true,
        effects_fallback: fallback,
        n_variants: fit.n,
    })
}

/// Closed-form IVW estimate and its fixed-effect standard error:
/// `Σ w βx βy / Σ w βx²` and `1 / sqrt(Σ w βx²)`.
pub fn ivw_closed_form(set: &SummarySet, weights: &WeightVector) -> Result<(f64, f64)> {
    weights.check(set, "IVW", 1)?;
    let (mut num, mut den) = (0.0, 0.0);
    for (v, &w) in set.variants().iter().zip(weights.values()) {
        num += w * v.beta_x() * v.beta_y();
        den += w * v.beta_x() * v.beta_x();
    }
    if den <= 0.0 {
        return Err(Error::AllDegenerate);
    }
    Ok((num / den, den.powf(-0.5)))
}

/// MR-Egger regression: weighted regression with a free intercept.
///
/// Requires a harmonized set and at least three variants with positive
/// weight. Standard errors use multiplicative random effects; intervals use
/// the t distribution on `J - 2` degrees of freedom, except that under
/// under-dispersion the wider of the unit-scale normal interval and the
/// estimated-scale t interval is reported. The intercept (pleiotropy test)
/// is reported alongside.
pub fn egger(set: &SummarySet, weights: &WeightVector) -> Result<Estimate> {
    egger_as(set, weights, Method::Egger)
}

pub(crate) fn egger_as(set: &SummarySet, weights: &WeightVector, method: Method) -> Result<Estimate> {
    if !set.is_harmonized() {
        return Err(Error::NotHarmonized);
    }
    set.require_nonzero_exposure()?;
    weights.check(set, "MR-Egger", 3)?;
    let fit = wls_fit(set, weights, true)?;
    let sigma = fit.sigma.expect("n >= 3 leaves residual degrees of freedom");
    let df = (fit.n - 2) as f64;
    let inflate = sigma.max(1.0);

    let slope_se = fit.se_fixed[1] * inflate;
    let (ci, p) = egger_inference(fit.coef[1], slope_se, sigma, df)?;
    let icpt_se = fit.se_fixed[0] * inflate;
    let (icpt_ci, icpt_p) = egger_inference(fit.coef[0], icpt_se, sigma, df)?;

    Ok(Estimate {
        method,
        theta: fit.coef[1],
        se: Some(slope_se),
        ci: Some(ci),
        p_value: Some(p),
        intercept: Some(InterceptEstimate {
            estimate: fit.coef[0],
            se: Some(icpt_se),
            ci: Some(icpt_ci),
            p_value: Some(icpt_p),
        }),
        residual_scale: Some(sigma),
        effects_model: EffectsModel::MultiplicativeRandom,
        reference: Reference::StudentT { df },
        se_reported: true,
        effects_fallback: false,
        n_variants: fit.n,
    })
}

/// Asymptotic IVW bias `Σ α βx w / Σ βx² w` given true pleiotropic effects.
pub fn ivw_bias_term(set: &SummarySet, weights: &WeightVector, alpha: &[f64]) -> Result<f64> {
    if alpha.len() != set.len() {
        return Err(Error::LengthMismatch {
            expected: set.len(),
            got: alpha.len(),
        });
    }
    weights.check(set, "IVW bias", 1)?;
    let (mut num, mut den) = (0.0, 0.0);
    for ((v, &w), &a) in set.variants().iter().zip(weights.values()).zip(alpha) {
        num += a * v.beta_x() * w;
        den += v.beta_x() * v.beta_x() * w;
    }
    if den <= 0.0 {
        return Err(Error::AllDegenerate);
    }
    Ok(num / den)
}

/// Weighted covariance of pleiotropic effects and exposure associations,
/// normalized by the total weight. Zero is the InSIDE condition.
pub fn inside_weighted_covariance(alpha: &[f64], beta_x: &[f64], weights: &[f64]) -> Result<f64> {
    let n = alpha.len();
    for len in [beta_x.len(), weights.len()] {
        if len != n {
            return Err(Error::LengthMismatch { expected: n, got: len });
        }
    }
    let total: f64 = weights.iter().sum();
    if total <= 0.0 {
        return Err(Error::InvalidWeights("all weights are zero".into()));
    }
    let mean_a = alpha.iter().zip(weights).map(|(a, w)| a * w).sum::<f64>() / total;
    let mean_b = beta_x.iter().zip(weights).map(|(b, w)| b * w).sum::<f64>() / total;
    let cov = alpha
        .iter()
        .zip(beta_x)
        .zip(weights)
        .map(|((a, b), w)| (a - mean_a) * (b - mean_b) * w)
        .sum::<f64>();
    Ok(cov / total)
}

/// Heterogeneity of the weighted exposure associations `βx / se_y` (with
/// standard errors `se_x / se_y`). Its I² approximates the attenuation of
/// the MR-Egger slope.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EggerDiagnostics {
    pub i_squared: f64,
    pub q_statistic: f64,
    pub df: usize,
}

pub fn instrument_strength_diagnostics(set: &SummarySet) -> Result<EggerDiagnostics> {
    let j = set.len();
    if j < 2 {
        return Err(Error::InsufficientVariants {
            method: "I-squared",
            needed: 2,
            got: j,
        });
    }
    let (mut sw, mut swb) = (0.0, 0.0);
    let values: Vec<(f64, f64)> = set
        .variants()
        .iter()
        .map(|v| {
            let b = v.beta_x() / v.se_y();
            let s = v.se_x() / v.se_y();
            (b, 1.0 / (s * s))
        })
        .collect();
    for &(b, w) in &values {
        sw += w;
        swb += w * b;
    }
    let mean = swb / sw;
    let q: f64 = values.iter().map(|&(b, w)| w * (b - mean) * (b - mean)).sum();
    if !q.is_finite() {
        return Err(Error::NonFinite("I-squared"));
    }
    let df = j - 1;
    let i_squared = if q > 0.0 { ((q - df as f64) / q).max(0.0) } else { 0.0 };
    Ok(EggerDiagnostics {
        i_squared,
        q_statistic: q,
        df,
    })
}

/// I² (floored at zero) of the weighted exposure associations.
pub fn i_squared_instrument_strength(set: &SummarySet) -> Result<f64> {
    instrument_strength_diagnostics(set).map(|d| d.i_squared)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::summary_data::VariantAssociation;
    use proptest::prelude::*;

    fn set(bx: &[f64], by: &[f64], sy: &[f64]) -> SummarySet {
        SummarySet::from_columns(bx, &vec![0.01; bx.len()], by, sy).unwrap()
    }

    #[test]
    fn single_instrument_is_ratio() {
        let s = set(&[0.2], &[0.05], &[0.1]);
        let w = WeightVector::inverse_variance(&s);
        let e = ivw(&s, &w, EffectsModel::Fixed).unwrap();
        assert!((e.theta - 0.25).abs() < 1e-14);
        assert!((e.se.unwrap() - 0.5).abs() < 1e-14);
        assert_eq!(e.residual_scale, None);

        let r = ivw(&s, &w, EffectsModel::MultiplicativeRandom).unwrap();
        assert!(r.effects_fallback);
        assert_eq!(r.effects_model, EffectsModel::Fixed);
        assert_eq!(r.se, e.se);
    }

    #[test]
    fn three_instrument_closed_form() {
        let s = set(&[0.1, 0.2, 0.3], &[0.01, 0.02, 0.09], &[0.05; 3]);
        let w = WeightVector::inverse_variance(&s);
        // Σ βx βy = 0.001 + 0.004 + 0.027 = 0.032; Σ βx² = 0.14
        let e = ivw(&s, &w, EffectsModel::Fixed).unwrap();
        assert!((e.theta - 0.032 / 0.14).abs() < 1e-12);
        assert!((e.theta - 0.228571).abs() < 1e-6);
    }

    #[test]
    fn exact_fit_has_zero_residual_scale() {
        let bx = [0.05, 0.08, 0.11, 0.03];
        let by: Vec<f64> = bx.iter().map(|b| 0.4 * b).collect();
        let s = set(&bx, &by, &[0.02; 4]);
        let e = ivw(&s, &WeightVector::inverse_variance(&s), EffectsModel::MultiplicativeRandom).unwrap();
        assert!((e.theta - 0.4).abs() < 1e-12);
        assert!(e.residual_scale.unwrap() < 1e-10);
    }

    #[test]
    fn egger_exact_line() {
        let bx = [0.05, 0.08, 0.11, 0.03, 0.07];
        let by: Vec<f64> = bx.iter().map(|b| 0.01 + 0.3 * b).collect();
        let s = set(&bx, &by, &[0.02; 5]).harmonize();
        let e = egger(&s, &WeightVector::inverse_variance(&s)).unwrap();
        assert!((e.theta - 0.3).abs() < 1e-10);
        assert!((e.intercept.as_ref().unwrap().estimate - 0.01).abs() < 1e-12);
        assert!(e.residual_scale.unwrap() < 1e-10);
        let ci = e.ci.unwrap();
        assert!(ci.low < e.theta && e.theta < ci.high);
    }

    #[test]
    fn egger_errors() {
        let s = set(&[0.1; 4], &[0.01, 0.02, 0.03, 0.04], &[0.05; 4]).harmonize();
        assert!(matches!(
            egger(&s, &WeightVector::inverse_variance(&s)),
            Err(Error::SingularDesign(_))
        ));
        let s = set(&[0.1, 0.2], &[0.01, 0.02], &[0.05; 2]).harmonize();
        assert!(matches!(
            egger(&s, &WeightVector::inverse_variance(&s)),
            Err(Error::InsufficientVariants { needed: 3, got: 2, .. })
        ));
        let s = set(&[0.1, 0.2, 0.3], &[0.01, 0.02, 0.0], &[0.05; 3]);
        assert_eq!(egger(&s, &WeightVector::inverse_variance(&s)), Err(Error::NotHarmonized));
    }

    #[test]
    fn zero_exposure_is_rejected() {
        let s = set(&[0.1, 0.0], &[0.01, 0.02], &[0.05; 2]);
        assert!(matches!(
            ivw(&s, &WeightVector::inverse_variance(&s), EffectsModel::Fixed),
            Err(Error::DegenerateInstrument(_))
        ));
    }

    /// Explicit weighted sums for the 2 × 2 normal equations.
    fn egger_oracle(bx: &[f64], by: &[f64], w: &[f64]) -> (f64, f64) {
        let (mut s0, mut s1, mut s2, mut t0, mut t1) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for i in 0..bx.len() {
            s0 += w[i];
            s1 += w[i] * bx[i];
            s2 += w[i] * bx[i] * bx[i];
            t0 += w[i] * by[i];
            t1 += w[i] * bx[i] * by[i];
        }
        let det = s0 * s2 - s1 * s1;
        ((s2 * t0 - s1 * t1) / det, (s0 * t1 - s1 * t0) / det)
    }

    #[test]
    fn egger_matches_normal_equations() {
        let bx = [0.031, 0.072, 0.055, 0.094, 0.043];
        let by = [0.004, 0.011, -0.002, 0.017, 0.006];
        let sy = [0.012, 0.015, 0.011, 0.02, 0.013];
        let s = set(&bx, &by, &sy).harmonize();
        let w = WeightVector::inverse_variance(&s);
        let e = egger(&s, &w).unwrap();
        let (a, b) = egger_oracle(&bx, &by, w.values());
        assert!((e.theta - b).abs() < 1e-10);
        assert!((e.intercept.unwrap().estimate - a).abs() < 1e-10);
    }

    #[test]
    fn bias_term_cases() {
        let bx = [0.04, 0.09, 0.06, 0.03];
        let s = set(&bx, &[0.01, 0.02, 0.0, 0.01], &[0.02, 0.03, 0.025, 0.02]);
        let w = WeightVector::inverse_variance(&s);
        assert_eq!(ivw_bias_term(&s, &w, &[0.0; 4]).unwrap(), 0.0);
        let alpha: Vec<f64> = bx.iter().map(|b| 0.7 * b).collect();
        assert!((ivw_bias_term(&s, &w, &alpha).unwrap() - 0.7).abs() < 1e-14);
        let alpha = [0.013, -0.04, 0.021, 0.002];
        let ws = w.values();
        let num: f64 = (0..4).map(|i| alpha[i] * bx[i] * ws[i]).sum();
        let den: f64 = (0..4).map(|i| bx[i] * bx[i] * ws[i]).sum();
        assert!((ivw_bias_term(&s, &w, &alpha).unwrap() - num / den).abs() < 1e-14);
        assert!(ivw_bias_term(&s, &w, &[0.0; 3]).is_err());
    }

    #[test]
    fn inside_covariance_cases() {
        let bx = [0.04, 0.09, 0.06, 0.03];
        assert!(inside_weighted_covariance(&[0.2; 4], &bx, &[1.0, 2.0, 3.0, 4.0]).unwrap().abs() < 1e-16);
        let mean = bx.iter().sum::<f64>() / 4.0;
        let var = bx.iter().map(|b| (b - mean).powi(2)).sum::<f64>() / 4.0;
        assert!((inside_weighted_covariance(&bx, &bx, &[1.0; 4]).unwrap() - var).abs() < 1e-16);

        let alpha = [0.01, -0.02, 0.05, 0.0];
        let w = [2.0, 1.0, 0.5, 3.0];
        let tw: f64 = w.iter().sum();
        let ma = (0..4).map(|i| alpha[i] * w[i]).sum::<f64>() / tw;
        let mb = (0..4).map(|i| bx[i] * w[i]).sum::<f64>() / tw;
        let want = (0..4).map(|i| (alpha[i] - ma) * (bx[i] - mb) * w[i]).sum::<f64>() / tw;
        assert!((inside_weighted_covariance(&alpha, &bx, &w).unwrap() - want).abs() < 1e-16);
        assert!(inside_weighted_covariance(&alpha, &bx, &w[..3]).is_err());
    }

    #[test]
    fn i_squared_cases() {
        let same = SummarySet::from_columns(&[0.05; 3], &[0.01; 3], &[0.0; 3], &[0.02; 3]).unwrap();
        assert_eq!(i_squared_instrument_strength(&same).unwrap(), 0.0);
        let far = SummarySet::from_columns(&[0.0, 0.2], &[0.01; 2], &[0.0; 2], &[0.02; 2]).unwrap();
        assert!(i_squared_instrument_strength(&far).unwrap() > 0.99);
        let one = SummarySet::from_columns(&[0.1], &[0.01], &[0.0], &[0.02]).unwrap();
        assert!(i_squared_instrument_strength(&one).is_err());
    }

    #[test]
    fn balanced_pleiotropy_makes_ivw_and_egger_coincide() {
        // Construct α with zero weighted mean and zero weighted covariance with βx.
        let bx = [0.03, 0.05, 0.07, 0.09, 0.04, 0.08];
        let sy = [0.02f64; 6];
        let w = vec![sy[0].powi(-2); 6];
        let raw = [0.01, -0.02, 0.015, -0.005, -0.01, 0.02];
        // project out the constant and βx directions
        let proj = |v: &[f64], basis: &[f64]| -> f64 {
            let num: f64 = v.iter().zip(basis).map(|(a, b)| a * b).sum();
            let den: f64 = basis.iter().map(|b| b * b).sum();
            num / den
        };
        let ones = [1.0; 6];
        let mean_b = bx.iter().sum::<f64>() / 6.0;
        let centered: Vec<f64> = bx.iter().map(|b| b - mean_b).collect();
        let c1 = proj(&raw, &ones);
        let r1: Vec<f64> = raw.iter().map(|a| a - c1).collect();
        let c2 = proj(&r1, &centered);
        let alpha: Vec<f64> = r1.iter().zip(&centered).map(|(a, c)| a - c2 * c).collect();
        assert!(inside_weighted_covariance(&alpha, &bx, &w).unwrap().abs() < 1e-15);

        let theta = 0.3;
        let by: Vec<f64> = bx.iter().zip(&alpha).map(|(b, a)| a + theta * b).collect();
        let s = set(&bx, &by, &sy).harmonize();
        let wv = WeightVector::inverse_variance(&s);
        let i = ivw(&s, &wv, EffectsModel::Fixed).unwrap();
        let e = egger(&s, &wv).unwrap();
        assert!((i.theta - theta).abs() < 1e-12);
        assert!((e.theta - theta).abs() < 1e-12);
        assert!(ivw_bias_term(&s, &wv, &alpha).unwrap().abs() < 1e-12);
    }

    fn arb_instance() -> impl Strategy<Value = SummarySet> {
        prop::collection::vec((0.01f64..0.2, -0.05f64..0.05, 0.005f64..0.05), 3..30).prop_map(|rows| {
            let v = rows
                .into_iter()
                .enumerate()
                .map(|(i, (bx, by, sy))| VariantAssociation::new(format!("r{i}"), bx, 0.01, by, sy).unwrap())
                .collect();
            SummarySet::new(v).unwrap().harmonize()
        })
    }

    proptest! {
        #[test]
        fn random_se_never_below_fixed(s in arb_instance()) {
            let w = WeightVector::inverse_variance(&s);
            let f = ivw(&s, &w, EffectsModel::Fixed).unwrap();
            let r = ivw(&s, &w, EffectsModel::MultiplicativeRandom).unwrap();
            prop_assert_eq!(f.theta, r.theta);
            prop_assert!(r.se.unwrap() >= f.se.unwrap());
            if r.residual_scale.unwrap() <= 1.0 {
                prop_assert_eq!(r.se, f.se);
            }
        }

        #[test]
        fn sign_equivariance(s in arb_instance()) {
            let w = WeightVector::inverse_variance(&s);
            let neg: Vec<f64> = s.beta_y().iter().map(|b| -b).collect();
            let t = s.with_outcome(&neg, &s.se_y()).unwrap();
            let a = ivw(&s, &w, EffectsModel::MultiplicativeRandom).unwrap();
            let b = ivw(&t, &w, EffectsModel::MultiplicativeRandom).unwrap();
            prop_assert!((a.theta + b.theta).abs() < 1e-12);
            let a = egger(&s, &w).unwrap();
            let b = egger(&t, &w).unwrap();
            prop_assert!((a.theta + b.theta).abs() < 1e-10);
            prop_assert!((a.intercept.unwrap().estimate + b.intercept.unwrap().estimate).abs() < 1e-10);
        }

        #[test]
        fn scale_equivariance(s in arb_instance(), k in 0.1f64..10.0) {
            let by: Vec<f64> = s.beta_y().iter().map(|b| b * k).collect();
            let sy: Vec<f64> = s.se_y().iter().map(|b| b * k).collect();
            let t = s.with_outcome(&by, &sy).unwrap();
            for effects in [EffectsModel::Fixed, EffectsModel::MultiplicativeRandom] {
                let a = ivw(&s, &WeightVector::inverse_variance(&s), effects).unwrap();
                let b = ivw(&t, &WeightVector::inverse_variance(&t), effects).unwrap();
                prop_assert!((b.theta - k * a.theta).abs() < 1e-10 * (1.0 + a.theta.abs() * k));
                prop_assert!((b.se.unwrap() / (k * a.se.unwrap()) - 1.0).abs() < 1e-10);
                prop_assert!((b.p_value.unwrap() - a.p_value.unwrap()).abs() < 1e-9);
            }
            let a = egger(&s, &WeightVector::inverse_variance(&s)).unwrap();
            let b = egger(&t, &WeightVector::inverse_variance(&t)).unwrap();
            prop_assert!((b.se.unwrap() / (k * a.se.unwrap()) - 1.0).abs() < 1e-9);
            prop_assert!((b.p_value.unwrap() - a.p_value.unwrap()).abs() < 1e-9);
        }
    }
}
