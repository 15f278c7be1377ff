//! Monte Carlo study of the estimators on simulated genetic data.
//!
//! Each replicate draws instrument parameters, simulates individuals,
//! regresses exposure and outcome on each variant, and runs the selected
//! methods on the resulting summarized data. Replicates are independent
//! work units keyed by `(seed, replicate, stream)`, run on a rayon pool and
//! folded in replicate order, so reports do not depend on the thread count.

mod generate;
mod report;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use generate::{
    draw_parameters, extract_summary, generate_individual_data, sample_partition, GeneratedStudy, IndividualData, SimpleRegression,
    TrueParameters,
};
pub use report::{write_report_csv, MethodRow, SimulationReport, REPORT_HEADER};

use crate::analysis::{run_methods, AnalysisOptions};
use crate::error::{Error, Result};
use crate::estimate::{EffectsModel, Estimate, Method};
use crate::median_methods::DEFAULT_BOOTSTRAP_DRAWS;
use crate::rng::{derive_seed, replicate_rng, Stream};
use crate::robust_mm::BisquareParams;
use crate::wls::i_squared_instrument_strength;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SampleDesign {
    /// Exposure associations from the first half of the participants,
    /// outcome associations from the second half.
    TwoSample,
    /// Both from all participants.
    OneSample,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InvalidAssignment {
    /// Each variant invalid independently with probability `prop_invalid`.
    #[default]
    Bernoulli,
    /// Exactly `round(prop_invalid * j)` invalid variants.
    FixedCount,
}

/// One simulation configuration.
///
/// Scenario 1: all instruments valid. Scenario 2: balanced pleiotropy,
/// `α ~ U(-0.1, 0.1)`. Scenario 3: directional pleiotropy, `α ~ U(0, 0.1)`.
/// Scenario 4: pleiotropy through the confounder, `φ ~ U(-0.1, 0.1)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioSpec {
    pub scenario: u8,
    pub prop_invalid: f64,
    pub theta: f64,
    /// Participants in total.
    pub n: usize,
    pub j: usize,
    pub design: SampleDesign,
    pub maf: f64,
    pub gamma_range: (f64, f64),
    pub invalid_assignment: InvalidAssignment,
    pub n_sim: usize,
    pub seed: u64,
}

impl ScenarioSpec {
    /// Two-sample design with 40,000 participants, 25 variants and 1,000
    /// replicates.
    pub fn new(scenario: u8, prop_invalid: f64, theta: f64) -> Result<Self> {
        let spec = Self {
            scenario,
            prop_invalid,
            theta,
            n: 40_000,
            j: 25,
            design: SampleDesign::TwoSample,
            maf: 0.3,
            gamma_range: (0.03, 0.1),
            invalid_assignment: InvalidAssignment::Bernoulli,
            n_sim: 1000,
            seed: 0,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Range of the nonzero pleiotropic effects (on `α`, or `φ` in scenario 4).
    pub fn pleiotropy_range(&self) -> (f64, f64) {
        match self.scenario {
            3 => (0.0, 0.1),
            _ => (-0.1, 0.1),
        }
    }

    pub fn exposure_sample_size(&self) -> usize {
        match self.design {
            SampleDesign::TwoSample => self.n / 2,
            SampleDesign::OneSample => self.n,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidScenario(m));
        if !(1..=4).contains(&self.scenario) {
            return bad(format!("scenario must be 1-4, got {}", self.scenario));
        }
        if !(0.0..=1.0).contains(&self.prop_invalid) {
            return bad(format!("prop_invalid must lie in [0, 1], got {}", self.prop_invalid));
        }
        if self.scenario == 1 && self.prop_invalid > 0.0 {
            return bad("scenario 1 has no invalid instruments; prop_invalid must be 0".into());
        }
        if !self.theta.is_finite() {
            return bad("theta must be finite".into());
        }
        if self.j == 0 {
            return bad("at least one variant is required".into());
        }
        if self.design == SampleDesign::TwoSample && self.n % 2 != 0 {
            return bad(format!("two-sample design needs an even number of participants, got {}", self.n));
        }
        if self.exposure_sample_size() < self.j + 3 {
            return bad(format!("{} participants are too few for {} variants", self.n, self.j));
        }
        if !(self.maf > 0.0 && self.maf < 1.0) {
            return bad(format!("maf must lie in (0, 1), got {}", self.maf));
        }
        let (lo, hi) = self.gamma_range;
        if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
            return bad(format!("invalid gamma range ({lo}, {hi})"));
        }
        if self.n_sim == 0 {
            return bad("n_sim must be positive".into());
        }
        Ok(())
    }
}

/// Estimators and resources for [`run_study_with`].
#[derive(Debug, Clone, PartialEq)]
pub struct StudyOptions {
    pub methods: Vec<Method>,
    pub bootstrap_draws: usize,
    pub effects: EffectsModel,
    pub bisquare: BisquareParams,
    /// Worker threads; `None` uses the ambient rayon pool.
    pub threads: Option<usize>,
}

impl Default for StudyOptions {
    fn default() -> Self {
        Self {
            methods: Method::ALL.to_vec(),
            bootstrap_draws: DEFAULT_BOOTSTRAP_DRAWS,
            effects: EffectsModel::MultiplicativeRandom,
            bisquare: BisquareParams::default(),
            threads: None,
        }
    }
}

/// Everything the aggregation keeps from one replicate.
#[derive(Debug, Clone, PartialEq)]
pub struct ReplicateOutcome {
    pub replicate: usize,
    /// Aligned with the requested methods; `None` when the method failed.
    pub estimates: Vec<Option<Estimate>>,
    pub r_squared: f64,
    pub f_statistic: f64,
    pub mean_variant_f: f64,
    pub i_squared: Option<f64>,
    pub invalid: usize,
    pub regenerations: usize,
}

const MAX_ATTEMPTS: u64 = 256;

/// Generates replicate `replicate` of `spec`, regenerating the individuals
/// while some genotype column is constant in a subsample.
pub fn generate_study(spec: &ScenarioSpec, replicate: usize) -> Result<(GeneratedStudy, usize)> {
    let truth = draw_parameters(spec, &mut replicate_rng(spec.seed, replicate as u64, Stream::Parameters, 0));
    for attempt in 0..MAX_ATTEMPTS {
        let mut rng = replicate_rng(spec.seed, replicate as u64, Stream::Individuals, attempt);
        let data = generate_individual_data(spec, &truth, &mut rng);
        match extract_summary(&data, spec.design, &truth, spec.theta) {
            Ok(study) => return Ok((study, attempt as usize)),
            Err(Error::DegenerateInstrument(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::DegenerateInstrument(format!("replicate {replicate}: constant genotype after {MAX_ATTEMPTS} attempts")))
}

pub fn run_replicate(spec: &ScenarioSpec, options: &StudyOptions, replicate: usize) -> Result<ReplicateOutcome> {
    let (study, regenerations) = generate_study(spec, replicate)?;
    let set = study.summary.harmonize();
    let analysis = AnalysisOptions {
        methods: options.methods.clone(),
        effects: options.effects,
        bootstrap_draws: options.bootstrap_draws,
        seed: derive_seed(spec.seed, replicate as u64, Stream::Bootstrap as u64),
        bisquare: options.bisquare,
    };
    let estimates = run_methods(&set, &analysis).into_iter().map(|(_, r)| r.ok()).collect();
    Ok(ReplicateOutcome {
        replicate,
        estimates,
        r_squared: study.r_squared,
        f_statistic: study.f_statistic,
        mean_variant_f: study.mean_variant_f,
        i_squared: i_squared_instrument_strength(&set).ok(),
        invalid: study.truth.invalid_count(),
        regenerations,
    })
}

/// Runs `spec` with every method and default settings.
pub fn run_study(spec: &ScenarioSpec) -> Result<SimulationReport> {
    run_study_with(spec, &StudyOptions::default())
}

pub fn run_study_with(spec: &ScenarioSpec, options: &StudyOptions) -> Result<SimulationReport> {
    spec.validate()?;
    if options.methods.is_empty() {
        return Err(Error::Domain("no methods selected".into()));
    }
    let work = || -> Result<Vec<ReplicateOutcome>> {
        (0..spec.n_sim).into_par_iter().map(|r| run_replicate(spec, options, r)).collect()
    };
    let outcomes = match options.threads {
        Some(threads) => rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::Domain(format!("thread pool: {e}")))?
            .install(work)?,
        None => work()?,
    };
    Ok(SimulationReport::aggregate(spec, &options.methods, &outcomes))
}
