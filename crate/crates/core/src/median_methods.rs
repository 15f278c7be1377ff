//! Median-based estimators of the causal effect: the simple median, the
//! inverse-variance weighted median and its penalized variant, each with a
//! parametric-bootstrap standard error.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::estimate::{normal_inference, EffectsModel, Estimate, Method, Reference};
use crate::error::{Error, Result};
use crate::penalization::cochran_q_ivw;
use crate::rng::stream_rng;
use crate::summary_data::{ratio_estimates, SummarySet};

/// Default number of parametric bootstrap draws.
pub const DEFAULT_BOOTSTRAP_DRAWS: usize = 1000;

/// Non-negative weights normalized to sum to one.
#[derive(Debug, Clone, PartialEq)]
pub struct MedianWeights(Vec<f64>);

impl MedianWeights {
    pub fn new(raw: &[f64]) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::Empty);
        }
        if raw.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::InvalidWeights("median weights must be finite and non-negative".into()));
        }
        let total: f64 = raw.iter().sum();
        if total <= 0.0 || !total.is_finite() {
            return Err(Error::InvalidWeights("at least one median weight must be positive".into()));
        }
        Ok(Self(raw.iter().map(|w| w / total).collect()))
    }

    pub fn equal(n: usize) -> Result<Self> {
        Self::new(&vec![1.0; n])
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Definition of the cumulative weight at each sorted estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CumulativeRule {
    /// `s_j = Σ_{l ≤ j} w_l - w_j / 2`; reduces to the ordinary median
    /// under equal weights.
    #[default]
    Midpoint,
    /// `s_j = Σ_{l ≤ j} w_l`.
    Inclusive,
}

/// Weighted median with linear interpolation between the order statistics
/// that straddle half the total weight.
pub fn weighted_median(theta: &[f64], weights: &MedianWeights) -> Result<f64> {
    weighted_median_with(theta, weights, CumulativeRule::Midpoint)
}

pub fn weighted_median_with(theta: &[f64], weights: &MedianWeights, rule: CumulativeRule) -> Result<f64> {
    if theta.is_empty() {
        return Err(Error::Empty);
    }
    if theta.len() != weights.len() {
        return Err(Error::LengthMismatch {
            expected: theta.len(),
            got: weights.len(),
        });
    }
    if theta.iter().any(|t| !t.is_finite()) {
        return Err(Error::NonFinite("weighted median"));
    }
    let mut scratch = Vec::with_capacity(theta.len());
    Ok(median_kernel(theta, weights.values(), rule, &mut scratch))
}

fn median_kernel(theta: &[f64], w: &[f64], rule: CumulativeRule, scratch: &mut Vec<(f64, f64)>) -> f64 {
    scratch.clear();
    scratch.extend(theta.iter().copied().zip(w.iter().copied()));
    // stable: ties keep their original order
    scratch.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut cum = 0.0;
    let mut below: Option<(usize, f64)> = None;
    let mut next_s = None;
    for (j, &(_, wj)) in scratch.iter().enumerate() {
        cum += wj;
        let s = match rule {
            CumulativeRule::Midpoint => cum - 0.5 * wj,
            CumulativeRule::Inclusive => cum,
        };
        // half the weight lands on this point up to rounding
        if (s - 0.5).abs() <= 1e-12 {
            return scratch[j].0;
        }
        if s < 0.5 {
            below = Some((j, s));
        } else {
            next_s = Some(s);
            break;
        }
    }
    match (below, next_s) {
        (None, _) => scratch[0].0,
        (Some((k, _)), None) => scratch[k].0,
        (Some((k, sk)), Some(sk1)) => {
            let (lo, hi) = (scratch[k].0, scratch[k + 1].0);
            lo + (hi - lo) * (0.5 - sk) / (sk1 - sk)
        }
    }
}

/// Parametric-bootstrap standard error of the weighted median.
///
/// Each draw resamples `βx* ~ N(βx, se_x)` and `βy* ~ N(βy, se_y)`
/// independently per variant and recomputes the weighted median of the
/// ratio estimates with the weights held fixed. Draw `d` uses stream `d` of
/// the generator keyed by `seed`. Returns the sample standard deviation.
pub fn bootstrap_se(set: &SummarySet, weights: &MedianWeights, draws: usize, seed: u64) -> Result<f64> {
    if draws < 2 {
        return Err(Error::Domain(format!("bootstrap needs at least 2 draws, got {draws}")));
    }
    if weights.len() != set.len() {
        return Err(Error::LengthMismatch {
            expected: set.len(),
            got: weights.len(),
        });
    }
    let variants = set.variants();
    let mut ratios = vec![0.0; variants.len()];
    let mut scratch = Vec::with_capacity(variants.len());
    let (mut mean, mut m2) = (0.0, 0.0);
    for d in 0..draws {
        let mut rng = stream_rng(seed, d as u64);
        for (r, v) in ratios.iter_mut().zip(variants) {
            let bx = loop {
                let z: f64 = rng.sample(StandardNormal);
                let bx = v.beta_x() + v.se_x() * z;
                if bx != 0.0 {
                    break bx;
                }
            };
            let z: f64 = rng.sample(StandardNormal);
            *r = (v.beta_y() + v.se_y() * z) / bx;
        }
        let m = median_kernel(&ratios, weights.values(), CumulativeRule::Midpoint, &mut scratch);
        // Welford
        let delta = m - mean;
        mean += delta / (d + 1) as f64;
        m2 += delta * (m - mean);
    }
    let sd = (m2 / (draws - 1) as f64).sqrt();
    if !sd.is_finite() {
        return Err(Error::NonFinite("bootstrap standard error"));
    }
    Ok(sd)
}

/// Bootstrap settings for the median estimators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BootstrapConfig {
    pub draws: usize,
    pub seed: u64,
}

impl Default for BootstrapConfig {
    fn default() -> Self {
        Self {
            draws: DEFAULT_BOOTSTRAP_DRAWS,
            seed: 0,
        }
    }
}

fn median_estimate(set: &SummarySet, theta: &[f64], weights: &MedianWeights, cfg: &BootstrapConfig, method: Method) -> Result<Estimate> {
    let point = weighted_median(theta, weights)?;
    let se = bootstrap_se(set, weights, cfg.draws, cfg.seed)?;
    let reported = se > 0.0;
    let (ci, p) = if reported {
        let (ci, p) = normal_inference(point, se);
        (Some(ci), Some(p))
    } else {
        (None, None)
    };
    Ok(Estimate {
        method,
        theta: point,
        se: reported.then_some(se),
        ci,
        p_value: p,
        intercept: None,
        residual_scale: None,
        effects_model: EffectsModel::Fixed,
        reference: Reference::Normal,
        se_reported: reported,
        effects_fallback: false,
        n_variants: set.len(),
    })
}

/// Median of the ratio estimates (equal weights).
pub fn simple_median(set: &SummarySet, cfg: &BootstrapConfig) -> Result<Estimate> {
    let ratios = ratio_estimates(set)?;
    let weights = MedianWeights::equal(set.len())?;
    median_estimate(set, &ratios.theta, &weights, cfg, Method::SimpleMedian)
}

/// Weighted median with weights `βx² / se_y²`.
pub fn weighted_median_estimate(set: &SummarySet, cfg: &BootstrapConfig) -> Result<Estimate> {
    let ratios = ratio_estimates(set)?;
    let weights = MedianWeights::new(&ratios.precision())?;
    median_estimate(set, &ratios.theta, &weights, cfg, Method::WeightedMedian)
}

/// Weighted median with each weight multiplied by `min(1, 20 q_j)`, where
/// `q_j` is the χ²₁ p-value of the instrument's Q component about the
/// (unpenalized) weighted median.
pub fn penalized_weighted_median(set: &SummarySet, cfg: &BootstrapConfig) -> Result<Estimate> {
    let ratios = ratio_estimates(set)?;
    let raw = ratios.precision();
    let first = weighted_median(&ratios.theta, &MedianWeights::new(&raw)?)?;
    let report = cochran_q_ivw(set, first)?;
    let penalized: Vec<f64> = raw.iter().zip(&report.factor_j).map(|(w, f)| w * f).collect();
    let weights = MedianWeights::new(&penalized)?;
    median_estimate(set, &ratios.theta, &weights, cfg, Method::PenalizedWeightedMedian)
}
