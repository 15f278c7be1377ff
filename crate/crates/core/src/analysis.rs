//! Runs a selection of estimators on one summarized dataset, sharing the
//! intermediate fits (reference estimates, penalized weights) between them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimate::{EffectsModel, Estimate, Method};
use crate::median_methods::{penalized_weighted_median, simple_median, weighted_median_estimate, BootstrapConfig, DEFAULT_BOOTSTRAP_DRAWS};
use crate::penalization::{cochran_q_egger, cochran_q_ivw, penalize_weights};
use crate::rng::{derive_seed, Stream};
use crate::robust_mm::{mm_regress_as, BisquareParams, MmControl};
use crate::summary_data::SummarySet;
use crate::wls::{egger, egger_as, i_squared_instrument_strength, ivw, ivw_as, WeightVector};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisOptions {
    pub methods: Vec<Method>,
    pub effects: EffectsModel,
    pub bootstrap_draws: usize,
    pub seed: u64,
    pub bisquare: BisquareParams,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self {
            methods: Method::ALL.to_vec(),
            effects: EffectsModel::MultiplicativeRandom,
            bootstrap_draws: DEFAULT_BOOTSTRAP_DRAWS,
            seed: 0,
            bisquare: BisquareParams::default(),
        }
    }
}

impl AnalysisOptions {
    fn method_seed(&self, stream: Stream, method: Method) -> u64 {
        let index = Method::ALL.iter().position(|m| *m == method).unwrap_or(0) as u64;
        derive_seed(self.seed, stream as u64, index)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MethodResult {
    pub method: Method,
    pub outcome: std::result::Result<Estimate, Error>,
}

/// A heterogeneity statistic and its χ² reference.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Heterogeneity {
    pub statistic: f64,
    pub df: usize,
    pub p_value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Diagnostics {
    /// Cochran's Q about the IVW estimate.
    pub q_ivw: Option<Heterogeneity>,
    /// Residual heterogeneity of the MR-Egger fit.
    pub q_egger: Option<Heterogeneity>,
    /// I² of the weighted exposure associations.
    pub i_squared: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisReport {
    pub n_variants: usize,
    pub results: Vec<MethodResult>,
    pub diagnostics: Diagnostics,
}

/// Harmonizes `set` and runs every requested method. Individual estimator
/// failures are reported per method; only an empty method list is an error.
pub fn analyze(set: &SummarySet, options: &AnalysisOptions) -> Result<AnalysisReport> {
    if options.methods.is_empty() {
        return Err(Error::Domain("no methods selected".into()));
    }
    let set = set.harmonize();
    let mut runner = Runner::new(&set, options);
    let results = options
        .methods
        .iter()
        .map(|&method| MethodResult {
            method,
            outcome: runner.run(method),
        })
        .collect();
    let diagnostics = runner.diagnostics();
    Ok(AnalysisReport {
        n_variants: set.len(),
        results,
        diagnostics,
    })
}

/// Runs `methods` on an already harmonized set without diagnostics.
pub fn run_methods(set: &SummarySet, options: &AnalysisOptions) -> Vec<(Method, Result<Estimate>)> {
    let mut runner = Runner::new(set, options);
    options.methods.iter().map(|&m| (m, runner.run(m))).collect()
}

struct Runner<'a> {
    set: &'a SummarySet,
    options: &'a AnalysisOptions,
    base: WeightVector,
    ivw: Option<Result<Estimate>>,
    egger: Option<Result<Estimate>>,
    ivw_penalized: Option<Result<WeightVector>>,
    egger_penalized: Option<Result<WeightVector>>,
}

impl<'a> Runner<'a> {
    fn new(set: &'a SummarySet, options: &'a AnalysisOptions) -> Self {
        Self {
            set,
            options,
            base: WeightVector::inverse_variance(set),
            ivw: None,
            egger: None,
            ivw_penalized: None,
            egger_penalized: None,
        }
    }

    fn ivw(&mut self) -> Result<Estimate> {
        if self.ivw.is_none() {
            self.ivw = Some(ivw(self.set, &self.base, self.options.effects));
        }
        self.ivw.clone().expect("just set")
    }

    fn egger(&mut self) -> Result<Estimate> {
        if self.egger.is_none() {
            self.egger = Some(egger(self.set, &self.base));
        }
        self.egger.clone().expect("just set")
    }

    fn ivw_penalized(&mut self) -> Result<WeightVector> {
        if self.ivw_penalized.is_none() {
            let w = self
                .ivw()
                .and_then(|reference| cochran_q_ivw(self.set, reference.theta))
                .and_then(|report| penalize_weights(&self.base, &report));
            self.ivw_penalized = Some(w);
        }
        self.ivw_penalized.clone().expect("just set")
    }

    fn egger_penalized(&mut self) -> Result<WeightVector> {
        if self.egger_penalized.is_none() {
            let w = self
                .egger()
                .and_then(|fit| {
                    let icpt = fit.intercept.map(|i| i.estimate).unwrap_or(0.0);
                    cochran_q_egger(self.set, icpt, fit.theta)
                })
                .and_then(|report| penalize_weights(&self.base, &report));
            self.egger_penalized = Some(w);
        }
        self.egger_penalized.clone().expect("just set")
    }

    fn robust(&self, weights: &WeightVector, intercept: bool, method: Method) -> Result<Estimate> {
        let seed = self.options.method_seed(Stream::Robust, method);
        mm_regress_as(
            self.set,
            weights,
            intercept,
            &self.options.bisquare,
            &MmControl::default(),
            self.options.effects,
            seed,
            method,
        )
        .map(|(_, est)| est)
    }

    fn run(&mut self, method: Method) -> Result<Estimate> {
        let cfg = BootstrapConfig {
            draws: self.options.bootstrap_draws,
            seed: self.options.method_seed(Stream::Bootstrap, method),
        };
        match method {
            Method::Ivw => self.ivw(),
            Method::Egger => self.egger(),
            Method::RobustIvw => {
                let w = self.base.clone();
                self.robust(&w, false, method)
            }
            Method::RobustEgger => {
                let w = self.base.clone();
                self.robust(&w, true, method)
            }
            Method::PenalizedIvw => {
                let w = self.ivw_penalized()?;
                ivw_as(self.set, &w, self.options.effects, method)
            }
            Method::PenalizedEgger => {
                let w = self.egger_penalized()?;
                egger_as(self.set, &w, method)
            }
            Method::PenalizedRobustIvw => {
                let w = self.ivw_penalized()?;
                self.robust(&w, false, method)
            }
            Method::PenalizedRobustEgger => {
                let w = self.egger_penalized()?;
                self.robust(&w, true, method)
            }
            Method::SimpleMedian => simple_median(self.set, &cfg),
            Method::WeightedMedian => weighted_median_estimate(self.set, &cfg),
            Method::PenalizedWeightedMedian => penalized_weighted_median(self.set, &cfg),
        }
    }

    fn diagnostics(&mut self) -> Diagnostics {
        let q_ivw = self.ivw().and_then(|fit| cochran_q_ivw(self.set, fit.theta)).ok().map(|r| Heterogeneity {
            statistic: r.q_total,
            df: r.q_total_df,
            p_value: r.q_total_p,
        });
        let q_egger = self
            .egger()
            .and_then(|fit| cochran_q_egger(self.set, fit.intercept.map(|i| i.estimate).unwrap_or(0.0), fit.theta))
            .ok()
            .map(|r| Heterogeneity {
                statistic: r.q_total,
                df: r.q_total_df,
                p_value: r.q_total_p,
            });
        Diagnostics {
            q_ivw,
            q_egger,
            i_squared: i_squared_instrument_strength(self.set).ok(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> SummarySet {
        let bx = [0.05, -0.07, 0.04, 0.09, 0.06, 0.03, -0.08, 0.05];
        let by = [0.006, -0.009, 0.003, 0.011, 0.004, 0.005, -0.007, 0.021];
        SummarySet::from_columns(&bx, &[0.01; 8], &by, &[0.004; 8]).unwrap()
    }

    #[test]
    fn runs_every_method() {
        let opts = AnalysisOptions {
            bootstrap_draws: 200,
            seed: 3,
            ..Default::default()
        };
        let report = analyze(&sample(), &opts).unwrap();
        assert_eq!(report.results.len(), 11);
        for r in &report.results {
            let est = r.outcome.as_ref().unwrap_or_else(|e| panic!("{}: {e}", r.method));
            assert!(est.theta.is_finite());
            assert_eq!(est.method, r.method);
            assert_eq!(est.intercept.is_some(), r.method.has_intercept());
        }
        assert!(report.diagnostics.q_ivw.is_some());
        assert_eq!(report.diagnostics.q_egger.unwrap().df, 6);
    }

    #[test]
    fn matches_direct_calls() {
        let opts = AnalysisOptions {
            methods: vec![Method::Ivw, Method::Egger],
            ..Default::default()
        };
        let set = sample();
        let report = analyze(&set, &opts).unwrap();
        let h = set.harmonize();
        let w = WeightVector::inverse_variance(&h);
        assert_eq!(report.results[0].outcome.as_ref().unwrap(), &ivw(&h, &w, EffectsModel::MultiplicativeRandom).unwrap());
        assert_eq!(report.results[1].outcome.as_ref().unwrap(), &egger(&h, &w).unwrap());
    }

    #[test]
    fn failures_stay_per_method() {
        let set = SummarySet::from_columns(&[0.05, 0.07], &[0.01; 2], &[0.01, 0.012], &[0.004; 2]).unwrap();
        let opts = AnalysisOptions {
            methods: vec![Method::Ivw, Method::Egger],
            ..Default::default()
        };
        let report = analyze(&set, &opts).unwrap();
        assert!(report.results[0].outcome.is_ok());
        assert!(matches!(report.results[1].outcome, Err(Error::InsufficientVariants { .. })));
        assert!(analyze(&set, &AnalysisOptions { methods: vec![], ..Default::default() }).is_err());
    }

    #[test]
    fn seeded_output_is_reproducible() {
        let opts = AnalysisOptions {
            bootstrap_draws: 100,
            seed: 11,
            ..Default::default()
        };
        assert_eq!(analyze(&sample(), &opts).unwrap(), analyze(&sample(), &opts).unwrap());
    }
}
