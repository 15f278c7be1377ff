//! Estimate records shared by every estimator.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::distributions::{normal_quantile, t_quantile, t_two_sided_p, normal_sf};
use crate::error::{Error, Result};

/// The eleven estimators compared in the scenario study.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Ivw,
    Egger,
    RobustIvw,
    RobustEgger,
    PenalizedIvw,
    PenalizedEgger,
    PenalizedRobustIvw,
    PenalizedRobustEgger,
    SimpleMedian,
    WeightedMedian,
    PenalizedWeightedMedian,
}

impl Method {
    pub const ALL: [Method; 11] = [
        Method::Ivw,
        Method::Egger,
        Method::RobustIvw,
        Method::RobustEgger,
        Method::PenalizedIvw,
        Method::PenalizedEgger,
        Method::PenalizedRobustIvw,
        Method::PenalizedRobustEgger,
        Method::SimpleMedian,
        Method::WeightedMedian,
        Method::PenalizedWeightedMedian,
    ];

    pub fn slug(self) -> &'static str {
        match self {
            Method::Ivw => "ivw",
            Method::Egger => "egger",
            Method::RobustIvw => "robust-ivw",
            Method::RobustEgger => "robust-egger",
            Method::PenalizedIvw => "penalized-ivw",
            Method::PenalizedEgger => "penalized-egger",
            Method::PenalizedRobustIvw => "penalized-robust-ivw",
            Method::PenalizedRobustEgger => "penalized-robust-egger",
            Method::SimpleMedian => "simple-median",
            Method::WeightedMedian => "weighted-median",
            Method::PenalizedWeightedMedian => "penalized-weighted-median",
        }
    }

    /// Long label in "regression type, intercept" form.
    pub fn label(self) -> &'static str {
        match self {
            Method::Ivw => "Standard, no intercept",
            Method::Egger => "Standard, intercept",
            Method::RobustIvw => "Robust, no intercept",
            Method::RobustEgger => "Robust, intercept",
            Method::PenalizedIvw => "Penalized standard, no intercept",
            Method::PenalizedEgger => "Penalized standard, intercept",
            Method::PenalizedRobustIvw => "Penalized robust, no intercept",
            Method::PenalizedRobustEgger => "Penalized robust, intercept",
            Method::SimpleMedian => "Simple median",
            Method::WeightedMedian => "Weighted median",
            Method::PenalizedWeightedMedian => "Penalized weighted median",
        }
    }

    pub fn has_intercept(self) -> bool {
        matches!(
            self,
            Method::Egger | Method::RobustEgger | Method::PenalizedEgger | Method::PenalizedRobustEgger
        )
    }

    pub fn is_robust(self) -> bool {
        matches!(
            self,
            Method::RobustIvw | Method::RobustEgger | Method::PenalizedRobustIvw | Method::PenalizedRobustEgger
        )
    }

    pub fn is_penalized(self) -> bool {
        matches!(
            self,
            Method::PenalizedIvw
                | Method::PenalizedEgger
                | Method::PenalizedRobustIvw
                | Method::PenalizedRobustEgger
                | Method::PenalizedWeightedMedian
        )
    }

    pub fn is_median(self) -> bool {
        matches!(
            self,
            Method::SimpleMedian | Method::WeightedMedian | Method::PenalizedWeightedMedian
        )
    }

    /// The penalized counterpart, if one exists.
    pub fn penalized(self) -> Option<Method> {
        match self {
            Method::Ivw => Some(Method::PenalizedIvw),
            Method::Egger => Some(Method::PenalizedEgger),
            Method::RobustIvw => Some(Method::PenalizedRobustIvw),
            Method::RobustEgger => Some(Method::PenalizedRobustEgger),
            Method::WeightedMedian => Some(Method::PenalizedWeightedMedian),
            m if m.is_penalized() => Some(m),
            _ => None,
        }
    }

    /// The robust-regression counterpart, if one exists.
    pub fn robust(self) -> Option<Method> {
        match self {
            Method::Ivw => Some(Method::RobustIvw),
            Method::Egger => Some(Method::RobustEgger),
            Method::PenalizedIvw => Some(Method::PenalizedRobustIvw),
            Method::PenalizedEgger => Some(Method::PenalizedRobustEgger),
            m if m.is_robust() => Some(m),
            _ => None,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.slug())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.slug() == s)
            .ok_or_else(|| Error::Domain(format!("unknown method `{s}`")))
    }
}

/// How the regression standard error treats the residual scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EffectsModel {
    /// Residual standard error fixed at 1.
    Fixed,
    /// Over-dispersion inflates the standard error; under-dispersion does not shrink it.
    #[default]
    MultiplicativeRandom,
}

impl FromStr for EffectsModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fixed" => Ok(EffectsModel::Fixed),
            "random" | "multiplicative-random" => Ok(EffectsModel::MultiplicativeRandom),
            _ => Err(Error::Domain(format!("unknown effects model `{s}`"))),
        }
    }
}

/// Reference distribution used for intervals and p-values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Reference {
    Normal,
    StudentT { df: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub low: f64,
    pub high: f64,
}

impl Interval {
    pub fn excludes(&self, value: f64) -> bool {
        value < self.low || value > self.high
    }
}

/// Intercept of an intercept-bearing regression (the pleiotropy test).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterceptEstimate {
    pub estimate: f64,
    pub se: Option<f64>,
    pub ci: Option<Interval>,
    pub p_value: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub method: Method,
    /// Causal effect estimate (regression slope or median).
    pub theta: f64,
    pub se: Option<f64>,
    pub ci: Option<Interval>,
    pub p_value: Option<f64>,
    pub intercept: Option<InterceptEstimate>,
    pub residual_scale: Option<f64>,
    pub effects_model: EffectsModel,
    pub reference: Reference,
    /// False when the estimator could not produce a standard error.
    pub se_reported: bool,
    /// Set when a random-effects analysis had to fall back to fixed effects.
    pub effects_fallback: bool,
    pub n_variants: usize,
}

impl Estimate {
    /// True when the 95% interval excludes `value`; a missing SE never rejects.
    pub fn rejects(&self, value: f64) -> bool {
        self.ci.is_some_and(|ci| ci.excludes(value))
    }

    pub fn intercept_rejects_zero(&self) -> bool {
        self.intercept
            .as_ref()
            .and_then(|i| i.ci)
            .is_some_and(|ci| ci.excludes(0.0))
    }
}

pub(crate) fn z975() -> f64 {
    // normal_quantile only fails outside (0, 1)
    normal_quantile(0.975).expect("valid probability")
}

/// Wald interval and two-sided p-value from the standard normal.
pub(crate) fn normal_inference(estimate: f64, se: f64) -> (Interval, f64) {
    let z = z975();
    let p = (2.0 * normal_sf((estimate / se).abs())).min(1.0);
    (
        Interval {
            low: estimate - z * se,
            high: estimate + z * se,
        },
        p,
    )
}

/// Interval and p-value for an intercept-bearing regression.
///
/// `se` is the multiplicative-random-effects standard error and `sigma` the
/// residual standard error. Under-dispersion (`sigma < 1`) takes the wider of
/// the normal interval with the scale fixed at 1 and the t interval with the
/// estimated scale; otherwise the t interval on `se` is used. The p-value is
/// always t-based on `se`.
pub(crate) fn egger_inference(estimate: f64, se: f64, sigma: f64, df: f64) -> Result<(Interval, f64)> {
    let t = t_quantile(0.975, df)?;
    let p = t_two_sided_p(estimate / se, df)?;
    let ci = if sigma < 1.0 {
        let z = z975();
        let half = (z * se).max(t * se * sigma);
        Interval {
            low: estimate - half,
            high: estimate + half,
        }
    } else {
        Interval {
            low: estimate - t * se,
            high: estimate + t * se,
        }
    };
    Ok((ci, p))
}
