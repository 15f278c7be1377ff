//! Individual-level data for one replicate and the per-variant regressions
//! that turn it into summarized associations.

use std::ops::Range;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::{InvalidAssignment, SampleDesign, ScenarioSpec};
use crate::error::{Error, Result};
use crate::linalg::cholesky_solve;
use crate::summary_data::{SummarySet, VariantAssociation};

/// Per-variant truth of one replicate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrueParameters {
    /// Genetic effects on the exposure.
    pub gamma: Vec<f64>,
    /// Direct effects on the outcome.
    pub alpha: Vec<f64>,
    /// Effects on the confounder.
    pub phi: Vec<f64>,
    pub valid: Vec<bool>,
}

impl TrueParameters {
    pub fn invalid_count(&self) -> usize {
        self.valid.iter().filter(|v| !**v).count()
    }
}

pub fn draw_parameters<R: Rng>(spec: &ScenarioSpec, rng: &mut R) -> TrueParameters {
    let j = spec.j;
    let (glo, ghi) = spec.gamma_range;
    let gamma: Vec<f64> = (0..j).map(|_| uniform(rng, glo, ghi)).collect();
    let valid: Vec<bool> = match (spec.scenario, spec.invalid_assignment) {
        (1, _) => vec![true; j],
        (_, InvalidAssignment::Bernoulli) => (0..j).map(|_| !rng.random_bool(spec.prop_invalid)).collect(),
        (_, InvalidAssignment::FixedCount) => {
            let k = (spec.prop_invalid * j as f64).round() as usize;
            let mut order: Vec<usize> = (0..j).collect();
            // partial Fisher-Yates
            for i in 0..k.min(j) {
                let pick = rng.random_range(i..j);
                order.swap(i, pick);
            }
            let mut valid = vec![true; j];
            for &i in &order[..k.min(j)] {
                valid[i] = false;
            }
            valid
        }
    };
    let (lo, hi) = spec.pleiotropy_range();
    let mut alpha = vec![0.0; j];
    let mut phi = vec![0.0; j];
    for i in 0..j {
        if valid[i] {
            continue;
        }
        let effect = uniform(rng, lo, hi);
        match spec.scenario {
            4 => phi[i] = effect,
            _ => alpha[i] = effect,
        }
    }
    TrueParameters { gamma, alpha, phi, valid }
}

fn uniform<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    if hi > lo {
        rng.random_range(lo..hi)
    } else {
        lo
    }
}

/// Genotypes (row-major, `n × j`) and the three continuous variables.
#[derive(Debug, Clone, PartialEq)]
pub struct IndividualData {
    pub n: usize,
    pub j: usize,
    pub g: Vec<u8>,
    pub u: Vec<f64>,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

impl IndividualData {
    pub fn genotype(&self, i: usize, k: usize) -> u8 {
        self.g[i * self.j + k]
    }
}

/// Simulates `n` individuals:
/// `U = Σ φ G + e_U`, `X = Σ γ G + U + e_X`, `Y = Σ α G + θ X + U + e_Y`,
/// with `G ~ Binomial(2, maf)` and standard normal errors.
pub fn generate_individual_data<R: Rng>(spec: &ScenarioSpec, truth: &TrueParameters, rng: &mut R) -> IndividualData {
    let (n, j) = (spec.n, spec.j);
    let q = 1.0 - spec.maf;
    // thresholds on a uniform u32 for genotype 0 and for genotype <= 1
    let t0 = (q * q * 4_294_967_296.0) as u64;
    let t1 = ((1.0 - spec.maf * spec.maf) * 4_294_967_296.0) as u64;
    let mut g = vec![0u8; n * j];
    let mut u = Vec::with_capacity(n);
    let mut x = Vec::with_capacity(n);
    let mut y = Vec::with_capacity(n);
    for i in 0..n {
        let row = &mut g[i * j..(i + 1) * j];
        let (mut su, mut sx, mut sy) = (0.0, 0.0, 0.0);
        for k in 0..j {
            let draw = rng.next_u32() as u64;
            let gk = if draw < t0 {
                0
            } else if draw < t1 {
                1
            } else {
                2
            };
            row[k] = gk;
            let gf = gk as f64;
            su += truth.phi[k] * gf;
            sx += truth.gamma[k] * gf;
            sy += truth.alpha[k] * gf;
        }
        let ui = su + rng.sample::<f64, _>(StandardNormal);
        let xi = sx + ui + rng.sample::<f64, _>(StandardNormal);
        let yi = sy + spec.theta * xi + ui + rng.sample::<f64, _>(StandardNormal);
        u.push(ui);
        x.push(xi);
        y.push(yi);
    }
    IndividualData { n, j, g, u, x, y }
}

/// Exposure-sample and outcome-sample index ranges.
pub fn sample_partition(n: usize, design: SampleDesign) -> (Range<usize>, Range<usize>) {
    match design {
        SampleDesign::TwoSample => (0..n / 2, n / 2..n),
        SampleDesign::OneSample => (0..n, 0..n),
    }
}

/// Least-squares slope and standard error of a simple regression.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimpleRegression {
    pub slope: f64,
    pub se: f64,
}

impl SimpleRegression {
    /// From raw sums `Σg, Σg², Σy, Σy², Σgy` over `n` observations; `None`
    /// when the regressor is constant.
    pub fn from_sums(n: f64, sg: f64, sgg: f64, sy: f64, syy: f64, sgy: f64) -> Option<Self> {
        let sxx = sgg - sg * sg / n;
        if !(sxx > 0.0) || n < 3.0 {
            return None;
        }
        let sxy = sgy - sg * sy / n;
        let syy_c = syy - sy * sy / n;
        let slope = sxy / sxx;
        let rss = (syy_c - slope * sxy).max(0.0);
        Some(Self {
            slope,
            se: (rss / (n - 2.0) / sxx).sqrt(),
        })
    }

    pub fn fit(g: &[f64], y: &[f64]) -> Option<Self> {
        let n = g.len() as f64;
        let (mut sg, mut sgg, mut sy, mut syy, mut sgy) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for (a, b) in g.iter().zip(y) {
            sg += a;
            sgg += a * a;
            sy += b;
            syy += b * b;
            sgy += a * b;
        }
        Self::from_sums(n, sg, sgg, sy, syy, sgy)
    }
}

/// One replicate's summarized data with its truth and instrument-strength
/// diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedStudy {
    pub summary: SummarySet,
    pub truth: TrueParameters,
    pub theta: f64,
    /// R² of the multivariable regression of the exposure on all variants
    /// in the exposure sample.
    pub r_squared: f64,
    /// Overall F statistic of that regression.
    pub f_statistic: f64,
    /// Mean of the per-variant first-stage F statistics.
    pub mean_variant_f: f64,
}

struct SampleSums {
    n: f64,
    sg: Vec<f64>,
    sgg: Vec<f64>,
    sgv: Vec<f64>,
    sv: f64,
    svv: f64,
    /// Upper triangle of `Σ g_k g_l`, only for the exposure sample.
    cross: Option<Vec<f64>>,
}

fn accumulate(data: &IndividualData, rows: Range<usize>, v: &[f64], with_cross: bool) -> SampleSums {
    let j = data.j;
    let mut s = SampleSums {
        n: rows.len() as f64,
        sg: vec![0.0; j],
        sgg: vec![0.0; j],
        sgv: vec![0.0; j],
        sv: 0.0,
        svv: 0.0,
        cross: with_cross.then(|| vec![0.0; j * j]),
    };
    // genotype counts are small integers, so integer accumulation is exact
    let mut cnt = vec![0u64; j];
    let mut cnt2 = vec![0u64; j];
    let mut cross = vec![0u64; if with_cross { j * j } else { 0 }];
    for i in rows {
        let row = &data.g[i * j..(i + 1) * j];
        let vi = v[i];
        s.sv += vi;
        s.svv += vi * vi;
        for k in 0..j {
            let gk = row[k];
            if gk == 0 {
                continue;
            }
            cnt[k] += gk as u64;
            cnt2[k] += (gk * gk) as u64;
            s.sgv[k] += gk as f64 * vi;
            if with_cross {
                let base = k * j;
                for l in k + 1..j {
                    cross[base + l] += (gk * row[l]) as u64;
                }
            }
        }
    }
    for k in 0..j {
        s.sg[k] = cnt[k] as f64;
        s.sgg[k] = cnt2[k] as f64;
    }
    if let Some(c) = s.cross.as_mut() {
        for k in 0..j {
            c[k * j + k] = s.sgg[k];
            for l in k + 1..j {
                c[k * j + l] = cross[k * j + l] as f64;
                c[l * j + k] = c[k * j + l];
            }
        }
    }
    s
}

/// Per-variant simple regressions of the exposure (exposure sample) and of
/// the outcome (outcome sample) on each genotype.
pub fn extract_summary(data: &IndividualData, design: SampleDesign, truth: &TrueParameters, theta: f64) -> Result<GeneratedStudy> {
    let j = data.j;
    let (exp_rows, out_rows) = sample_partition(data.n, design);
    let ex = accumulate(data, exp_rows, &data.x, true);
    let out = accumulate(data, out_rows, &data.y, false);

    let mut variants = Vec::with_capacity(j);
    let mut f_sum = 0.0;
    for k in 0..j {
        let id = format!("v{}", k + 1);
        let bx = SimpleRegression::from_sums(ex.n, ex.sg[k], ex.sgg[k], ex.sv, ex.svv, ex.sgv[k]);
        let by = SimpleRegression::from_sums(out.n, out.sg[k], out.sgg[k], out.sv, out.svv, out.sgv[k]);
        let (Some(bx), Some(by)) = (bx, by) else {
            return Err(Error::DegenerateInstrument(id));
        };
        f_sum += (bx.slope / bx.se).powi(2);
        variants.push(VariantAssociation::new(id, bx.slope, bx.se, by.slope, by.se)?);
    }
    let summary = SummarySet::new(variants)?;

    // multivariable fit on centered normal equations
    let n = ex.n;
    let cross = ex.cross.as_ref().expect("exposure sums carry cross products");
    let mut a = vec![0.0; j * j];
    for k in 0..j {
        for l in 0..j {
            a[k * j + l] = cross[k * j + l] - ex.sg[k] * ex.sg[l] / n;
        }
    }
    let sgx: Vec<f64> = (0..j).map(|k| ex.sgv[k] - ex.sg[k] * ex.sv / n).collect();
    let mut b = sgx.clone();
    if !cholesky_solve(&mut a, &mut b, j) {
        return Err(Error::SingularDesign("genotype matrix is collinear".into()));
    }
    let sxx = ex.svv - ex.sv * ex.sv / n;
    let explained: f64 = b.iter().zip(&sgx).map(|(c, s)| c * s).sum();
    let r_squared = (explained / sxx).clamp(0.0, 1.0);
    let dof = n - j as f64 - 1.0;
    let f_statistic = (r_squared / j as f64) / ((1.0 - r_squared) / dof);

    Ok(GeneratedStudy {
        summary,
        truth: truth.clone(),
        theta,
        r_squared,
        f_statistic,
        mean_variant_f: f_sum / j as f64,
    })
}
