//! MM-estimation of a weighted linear regression with Tukey's bisquare
//! objective, with or without an intercept.
//!
//! The S stage draws random elemental subsets, polishes each with a couple
//! of reweighting steps and keeps the fit with the smallest M-scale of the
//! residuals (tuning `c_s`, 50% breakdown). The M stage holds that scale
//! fixed and iterates reweighted least squares with the efficient tuning
//! `c_m` from the S solution. Analysis weights enter by multiplying the
//! response and every design column by `sqrt(w)`.

use std::sync::OnceLock;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::distributions::{normal_cdf, normal_pdf};
use crate::estimate::{egger_inference, normal_inference, EffectsModel, Estimate, InterceptEstimate, Method, Reference};
use crate::error::{Error, Result};
use crate::linalg::inv2;
use crate::rng::stream_rng;
use crate::summary_data::SummarySet;
use crate::wls::WeightVector;

/// Tuning constants of the bisquare objective.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BisquareParams {
    /// S-stage tuning (high breakdown).
    pub c_s: f64,
    /// M-stage tuning (95% efficiency at the normal).
    pub c_m: f64,
    /// Right-hand side of the M-scale equation.
    pub breakdown_target: f64,
}

impl Default for BisquareParams {
    fn default() -> Self {
        Self {
            c_s: 1.548,
            c_m: 4.685,
            breakdown_target: 0.5,
        }
    }
}

/// Iteration limits of the two stages.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MmControl {
    pub max_candidates: usize,
    pub refine_steps: usize,
    pub m_tolerance: f64,
    pub max_m_iterations: usize,
    pub max_subsample_failures: usize,
}

impl Default for MmControl {
    fn default() -> Self {
        Self {
            max_candidates: 500,
            refine_steps: 2,
            m_tolerance: 1e-10,
            max_m_iterations: 500,
            max_subsample_failures: 1000,
        }
    }
}

/// Outcome of [`mm_regress`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RobustFit {
    pub slope: f64,
    pub intercept: Option<f64>,
    /// Robust residual scale on the transformed (weighted) scale; zero only
    /// for an exact fit.
    pub scale: f64,
    pub exact_fit: bool,
    pub converged: bool,
    pub se_available: bool,
    /// M-stage iterations performed.
    pub iterations: usize,
}

/// Bisquare objective, `c²/6 · (1 - (1 - (r/c)²)³)` capped at `c²/6`.
pub fn rho_bisquare(r: f64, c: f64) -> f64 {
    let cap = c * c / 6.0;
    if r.abs() >= c {
        return cap;
    }
    let u = 1.0 - (r / c).powi(2);
    cap * (1.0 - u * u * u)
}

/// Derivative of [`rho_bisquare`]; zero beyond `|r| >= c`.
pub fn psi_bisquare(r: f64, c: f64) -> f64 {
    if r.abs() >= c {
        return 0.0;
    }
    let u = 1.0 - (r / c).powi(2);
    r * u * u
}

/// Reweighting factor `psi(r) / r`.
pub fn weight_bisquare(r: f64, c: f64) -> f64 {
    if r.abs() >= c {
        return 0.0;
    }
    let u = 1.0 - (r / c).powi(2);
    u * u
}

/// Second derivative of the objective.
pub fn psi_prime_bisquare(r: f64, c: f64) -> f64 {
    if r.abs() >= c {
        return 0.0;
    }
    let t = (r / c).powi(2);
    (1.0 - t) * (1.0 - 5.0 * t)
}

/// `rho` rescaled to the unit interval.
fn rho_unit(r: f64, c: f64) -> f64 {
    if r.abs() >= c {
        return 1.0;
    }
    let u = 1.0 - (r / c).powi(2);
    1.0 - u * u * u
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MScale {
    pub scale: f64,
    /// Set when too many residuals are exactly zero for a positive root.
    pub exact_fit: bool,
}

/// M-estimate of scale: the `s > 0` solving `mean(rho(r/s)) / (c²/6) = 0.5`.
pub fn m_scale(residuals: &[f64], c: f64) -> MScale {
    m_scale_with_target(residuals, c, 0.5)
}

pub fn m_scale_with_target(residuals: &[f64], c: f64, b: f64) -> MScale {
    let n = residuals.len();
    let nonzero = residuals.iter().filter(|r| **r != 0.0).count();
    if n == 0 || (nonzero as f64) <= b * n as f64 {
        return MScale {
            scale: 0.0,
            exact_fit: true,
        };
    }
    let f = |s: f64| residuals.iter().map(|r| rho_unit(r / s, c)).sum::<f64>() / n as f64 - b;

    let mut abs: Vec<f64> = residuals.iter().map(|r| r.abs()).collect();
    abs.sort_by(f64::total_cmp);
    let start = match abs[n / 2] {
        m if m > 0.0 => m / 0.6745,
        _ => abs[n - 1],
    };
    // f is decreasing in s; bracket the root in log-space
    let (mut lo, mut hi) = (start, start);
    let mut flo = f(lo);
    while flo < 0.0 {
        lo *= 0.5;
        flo = f(lo);
    }
    let mut fhi = f(hi);
    while fhi > 0.0 {
        hi *= 2.0;
        fhi = f(hi);
    }
    if flo == 0.0 {
        return MScale { scale: lo, exact_fit: false };
    }
    if fhi == 0.0 || lo == hi {
        return MScale { scale: hi, exact_fit: false };
    }
    // Illinois regula falsi on log s
    let (mut a, mut fa, mut bb, mut fb) = (lo.ln(), flo, hi.ln(), fhi);
    let mut side = 0i8;
    for _ in 0..200 {
        let x = (a * fb - bb * fa) / (fb - fa);
        let fx = f(x.exp());
        if fx == 0.0 || (bb - a).abs() < 1e-14 {
            a = x;
            bb = x;
            break;
        }
        if fx > 0.0 {
            a = x;
            fa = fx;
            if side == 1 {
                fb *= 0.5;
            }
            side = 1;
        } else {
            bb = x;
            fb = fx;
            if side == -1 {
                fa *= 0.5;
            }
            side = -1;
        }
        if (bb - a).abs() < 1e-13 {
            break;
        }
    }
    MScale {
        scale: (0.5 * (a + bb)).exp(),
        exact_fit: false,
    }
}

/// Scale `s0` with `E[rho_unit(Z / s0)] = b` for standard normal `Z`; the
/// M-scale divided by `s0` estimates the residual standard deviation.
pub fn consistency_factor(c: f64, b: f64) -> f64 {
    static DEFAULT: OnceLock<f64> = OnceLock::new();
    let defaults = BisquareParams::default();
    if c == defaults.c_s && b == defaults.breakdown_target {
        *DEFAULT.get_or_init(|| solve_consistency(c, b))
    } else {
        solve_consistency(c, b)
    }
}

fn expected_rho_unit(c: f64, s: f64) -> f64 {
    // 2 ∫_0^{cs} rho_unit(z/s) φ(z) dz + P(|Z| > cs), composite Simpson
    let upper = c * s;
    let n = 2000;
    let h = upper / n as f64;
    let g = |z: f64| rho_unit(z / s, c) * normal_pdf(z);
    let mut acc = g(0.0) + g(upper);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * g(i as f64 * h);
    }
    2.0 * acc * h / 3.0 + 2.0 * (1.0 - normal_cdf(upper))
}

fn solve_consistency(c: f64, b: f64) -> f64 {
    let (mut lo, mut hi) = (1e-3f64, 1e3f64);
    for _ in 0..100 {
        let mid = (lo * hi).sqrt();
        if expected_rho_unit(c, mid) > b {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo * hi).sqrt()
}

/// Transformed regression problem: rows with positive weight only.
struct Design {
    x: Vec<f64>,
    /// `sqrt(w)` intercept column, present when fitting an intercept.
    ones: Option<Vec<f64>>,
    y: Vec<f64>,
}

impl Design {
    fn n(&self) -> usize {
        self.y.len()
    }
    fn p(&self) -> usize {
        if self.ones.is_some() {
            2
        } else {
            1
        }
    }
    /// Fitted value of row `i` for coefficients `[slope]` or `[intercept, slope]`.
    fn fitted(&self, i: usize, beta: &[f64]) -> f64 {
        match &self.ones {
            Some(ones) => beta[0] * ones[i] + beta[1] * self.x[i],
            None => beta[0] * self.x[i],
        }
    }
    fn residuals(&self, beta: &[f64], out: &mut Vec<f64>) {
        out.clear();
        out.extend((0..self.n()).map(|i| self.y[i] - self.fitted(i, beta)));
    }
    fn row(&self, i: usize) -> [f64; 2] {
        match &self.ones {
            Some(ones) => [ones[i], self.x[i]],
            None => [self.x[i], 0.0],
        }
    }
    /// Weighted least squares with observation weights `u`.
    fn wls(&self, u: &[f64]) -> Option<Vec<f64>> {
        match &self.ones {
            None => {
                let (mut num, mut den) = (0.0, 0.0);
                for i in 0..self.n() {
                    num += u[i] * self.x[i] * self.y[i];
                    den += u[i] * self.x[i] * self.x[i];
                }
                (den > 0.0).then(|| vec![num / den])
            }
            Some(ones) => {
                let (mut a00, mut a01, mut a11, mut b0, mut b1) = (0.0, 0.0, 0.0, 0.0, 0.0);
                for i in 0..self.n() {
                    let (o, x, y) = (ones[i], self.x[i], self.y[i]);
                    a00 += u[i] * o * o;
                    a01 += u[i] * o * x;
                    a11 += u[i] * x * x;
                    b0 += u[i] * o * y;
                    b1 += u[i] * x * y;
                }
                let inv = inv2([a00, a01, a01, a11])?;
                Some(vec![inv[0] * b0 + inv[1] * b1, inv[2] * b0 + inv[3] * b1])
            }
        }
    }
    /// Exact fit through the rows in `idx` (length `p`).
    fn elemental(&self, idx: &[usize]) -> Option<Vec<f64>> {
        match &self.ones {
            None => {
                let i = idx[0];
                (self.x[i] != 0.0).then(|| vec![self.y[i] / self.x[i]])
            }
            Some(ones) => {
                let (i, k) = (idx[0], idx[1]);
                let inv = inv2([ones[i], self.x[i], ones[k], self.x[k]])?;
                Some(vec![inv[0] * self.y[i] + inv[1] * self.y[k], inv[2] * self.y[i] + inv[3] * self.y[k]])
            }
        }
    }
}

fn build_design(set: &SummarySet, weights: &WeightVector, intercept: bool) -> Design {
    let mut x = Vec::new();
    let mut y = Vec::new();
    let mut ones = Vec::new();
    for (v, &w) in set.variants().iter().zip(weights.values()) {
        if w <= 0.0 {
            continue;
        }
        let sw = w.sqrt();
        x.push(v.beta_x() * sw);
        y.push(v.beta_y() * sw);
        ones.push(sw);
    }
    Design {
        x,
        ones: intercept.then_some(ones),
        y,
    }
}

/// Residuals below this magnitude count as exactly zero.
fn zero_threshold(design: &Design) -> f64 {
    1e-12 * design.y.iter().fold(0.0f64, |m, v| m.max(v.abs()))
}

fn clean(residuals: &mut [f64], tol: f64) {
    for r in residuals.iter_mut() {
        if r.abs() <= tol {
            *r = 0.0;
        }
    }
}

struct Candidate {
    beta: Vec<f64>,
    scale: f64,
    exact_fit: bool,
}

fn mean_rho_unit(res: &[f64], s: f64, c: f64) -> f64 {
    res.iter().map(|r| rho_unit(r / s, c)).sum::<f64>() / res.len() as f64
}

/// Reweighting steps at tuning `c`, updating the scale by one fixed-point
/// step each time. Returns the refined coefficients.
#[allow(clippy::too_many_arguments)]
fn refine(design: &Design, mut beta: Vec<f64>, mut s: f64, c: f64, b: f64, steps: usize, tol: f64, res: &mut Vec<f64>, u: &mut Vec<f64>) -> Vec<f64> {
    for _ in 0..steps {
        design.residuals(&beta, res);
        u.clear();
        u.extend(res.iter().map(|r| weight_bisquare(r / s, c)));
        let Some(next) = design.wls(u) else { break };
        let change = next.iter().zip(&beta).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        let size = beta.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        beta = next;
        design.residuals(&beta, res);
        let s_next = s * (mean_rho_unit(res, s, c) / b).sqrt();
        let s_change = (s_next - s).abs() / s;
        s = s_next;
        if !(s > 0.0) || (change <= tol * size && s_change <= tol) {
            break;
        }
    }
    beta
}

fn s_stage(design: &Design, params: &BisquareParams, control: &MmControl, seed: u64) -> Result<Candidate> {
    let (n, p) = (design.n(), design.p());
    let (c, b) = (params.c_s, params.breakdown_target);
    let tol0 = zero_threshold(design);
    let mut rng = stream_rng(seed, 0);
    let mut res = Vec::with_capacity(n);
    let mut u = Vec::with_capacity(n);
    let mut best: Option<Candidate> = None;
    let mut failures = 0usize;
    let mut idx = [0usize; 2];

    let mut drawn = 0;
    while drawn < control.max_candidates {
        idx[0] = rng.random_range(0..n);
        if p == 2 {
            idx[1] = loop {
                let k = rng.random_range(0..n);
                if k != idx[0] {
                    break k;
                }
            };
        }
        let Some(start) = design.elemental(&idx[..p]) else {
            failures += 1;
            if failures >= control.max_subsample_failures {
                return Err(Error::Subsampling(format!("{failures} singular elemental subsets")));
            }
            continue;
        };
        drawn += 1;

        design.residuals(&start, &mut res);
        clean(&mut res, tol0);
        let initial = m_scale_with_target(&res, c, b);
        if initial.exact_fit {
            return Ok(Candidate {
                beta: start,
                scale: 0.0,
                exact_fit: true,
            });
        }
        let beta = refine(design, start, initial.scale, c, b, control.refine_steps, 0.0, &mut res, &mut u);
        design.residuals(&beta, &mut res);
        clean(&mut res, tol0);
        if let Some(cur) = &best {
            // cannot beat the incumbent unless mean rho at its scale drops below b
            if mean_rho_unit(&res, cur.scale, c) >= b {
                continue;
            }
        }
        let scale = m_scale_with_target(&res, c, b);
        if scale.exact_fit {
            return Ok(Candidate {
                beta,
                scale: 0.0,
                exact_fit: true,
            });
        }
        if best.as_ref().map_or(true, |cur| scale.scale < cur.scale) {
            best = Some(Candidate {
                beta,
                scale: scale.scale,
                exact_fit: false,
            });
        }
    }

    let best = best.ok_or_else(|| Error::Subsampling("no usable elemental subset".into()))?;
    // polish the winner to convergence
    let polished = refine(design, best.beta.clone(), best.scale, c, b, 200, 1e-12, &mut res, &mut u);
    design.residuals(&polished, &mut res);
    clean(&mut res, tol0);
    let scale = m_scale_with_target(&res, c, b);
    if scale.exact_fit {
        return Ok(Candidate {
            beta: polished,
            scale: 0.0,
            exact_fit: true,
        });
    }
    Ok(if scale.scale < best.scale {
        Candidate {
            beta: polished,
            scale: scale.scale,
            exact_fit: false,
        }
    } else {
        best
    })
}

/// Sandwich covariance `s² n/(n-p) A⁻¹ B A⁻¹` with `A = Σ ψ'(r/s) x xᵀ` and
/// `B = Σ ψ(r/s)² x xᵀ`. `None` when `A` is not positive definite.
fn sandwich(design: &Design, beta: &[f64], s: f64, c: f64) -> Option<[f64; 4]> {
    let (n, p) = (design.n(), design.p());
    if n <= p {
        return None;
    }
    let mut a = [0.0; 4];
    let mut bm = [0.0; 4];
    for i in 0..n {
        let r = (design.y[i] - design.fitted(i, beta)) / s;
        let (psi, dpsi) = (psi_bisquare(r, c), psi_prime_bisquare(r, c));
        let row = design.row(i);
        for j in 0..p {
            for k in 0..p {
                a[j * 2 + k] += dpsi * row[j] * row[k];
                bm[j * 2 + k] += psi * psi * row[j] * row[k];
            }
        }
    }
    let factor = s * s * n as f64 / (n - p) as f64;
    let cov = if p == 1 {
        if !(a[0] > 0.0) {
            return None;
        }
        [factor * bm[0] / (a[0] * a[0]), 0.0, 0.0, 0.0]
    } else {
        let det = a[0] * a[3] - a[1] * a[2];
        if !(a[0] > 0.0 && det > 0.0) {
            return None;
        }
        let ai = inv2(a)?;
        // A⁻¹ B A⁻¹
        let mut tmp = [0.0; 4];
        for i in 0..2 {
            for j in 0..2 {
                tmp[i * 2 + j] = (0..2).map(|k| ai[i * 2 + k] * bm[k * 2 + j]).sum();
            }
        }
        let mut out = [0.0; 4];
        for i in 0..2 {
            for j in 0..2 {
                out[i * 2 + j] = factor * (0..2).map(|k| tmp[i * 2 + k] * ai[k * 2 + j]).sum::<f64>();
            }
        }
        out
    };
    let ok = (0..p).all(|k| cov[k * 2 + k].is_finite() && cov[k * 2 + k] > 0.0);
    ok.then_some(cov)
}

/// Robust (MM) counterpart of the IVW (`intercept = false`) or MR-Egger
/// (`intercept = true`) regression.
///
/// The slope standard error comes from the M-estimator sandwich and is
/// post-processed like the least-squares one: the residual standard error
/// is the robust scale over its normal-consistency factor, and random
/// effects divide by `min(sigma, 1)`. The intercept variant always uses
/// random effects with a t reference on `J - 2` degrees of freedom.
/// A non-positive-definite sandwich leaves the standard error unreported
/// rather than failing.
pub fn mm_regress(
    set: &SummarySet,
    weights: &WeightVector,
    intercept: bool,
    params: &BisquareParams,
    effects: EffectsModel,
    seed: u64,
) -> Result<(RobustFit, Estimate)> {
    mm_regress_with_control(set, weights, intercept, params, &MmControl::default(), effects, seed)
}

pub fn mm_regress_with_control(
    set: &SummarySet,
    weights: &WeightVector,
    intercept: bool,
    params: &BisquareParams,
    control: &MmControl,
    effects: EffectsModel,
    seed: u64,
) -> Result<(RobustFit, Estimate)> {
    let method = match (intercept, weights.kind()) {
        (false, crate::wls::WeightKind::InverseVariance) => Method::RobustIvw,
        (true, crate::wls::WeightKind::InverseVariance) => Method::RobustEgger,
        (false, crate::wls::WeightKind::Penalized) => Method::PenalizedRobustIvw,
        (true, crate::wls::WeightKind::Penalized) => Method::PenalizedRobustEgger,
    };
    mm_regress_as(set, weights, intercept, params, control, effects, seed, method)
}

#[allow(clippy::too_many_arguments)]
pub(crate) fn mm_regress_as(
    set: &SummarySet,
    weights: &WeightVector,
    intercept: bool,
    params: &BisquareParams,
    control: &MmControl,
    effects: EffectsModel,
    seed: u64,
    method: Method,
) -> Result<(RobustFit, Estimate)> {
    if !(params.c_s > 0.0 && params.c_m > 0.0) {
        return Err(Error::Domain("bisquare tuning constants must be positive".into()));
    }
    if intercept && !set.is_harmonized() {
        return Err(Error::NotHarmonized);
    }
    set.require_nonzero_exposure()?;
    let needed = if intercept { 3 } else { 2 };
    weights.check(set, if intercept { "robust MR-Egger" } else { "robust IVW" }, needed)?;

    let design = build_design(set, weights, intercept);
    let (n, p) = (design.n(), design.p());
    let start = s_stage(&design, params, control, seed)?;
    let icpt = |beta: &[f64]| intercept.then(|| beta[0]);
    let slope = |beta: &[f64]| beta[p - 1];

    if start.exact_fit {
        let fit = RobustFit {
            slope: slope(&start.beta),
            intercept: icpt(&start.beta),
            scale: 0.0,
            exact_fit: true,
            converged: true,
            se_available: false,
            iterations: 0,
        };
        let estimate = unreported(&fit, method, effects, intercept, n, Some(0.0));
        return Ok((fit, estimate));
    }

    // M stage
    let s = start.scale;
    let c = params.c_m;
    let mut beta = start.beta;
    let mut res = Vec::with_capacity(n);
    let mut u = Vec::with_capacity(n);
    let mut converged = false;
    let mut iterations = 0;
    while iterations < control.max_m_iterations {
        iterations += 1;
        design.residuals(&beta, &mut res);
        u.clear();
        u.extend(res.iter().map(|r| weight_bisquare(r / s, c)));
        let Some(next) = design.wls(&u) else { break };
        let change = next.iter().zip(&beta).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        let size = next.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        beta = next;
        if change <= control.m_tolerance * size {
            converged = true;
            break;
        }
    }
    if beta.iter().any(|b| !b.is_finite()) {
        return Err(Error::NonFinite("MM regression"));
    }

    let sigma = s / consistency_factor(params.c_s, params.breakdown_target);
    let cov = sandwich(&design, &beta, s, c);
    let fit = RobustFit {
        slope: slope(&beta),
        intercept: icpt(&beta),
        scale: s,
        exact_fit: false,
        converged,
        se_available: cov.is_some(),
        iterations,
    };
    let Some(cov) = cov else {
        let estimate = unreported(&fit, method, effects, intercept, n, Some(sigma));
        return Ok((fit, estimate));
    };

    let raw_se = |k: usize| cov[k * 2 + k].sqrt();
    let estimate = if intercept {
        let inflate = 1.0 / sigma.min(1.0);
        let df = (n - 2) as f64;
        let slope_se = raw_se(1) * inflate;
        let icpt_se = raw_se(0) * inflate;
        let (ci, pv) = egger_inference(fit.slope, slope_se, sigma, df)?;
        let (ici, ip) = egger_inference(beta[0], icpt_se, sigma, df)?;
        Estimate {
            method,
            theta: fit.slope,
            se: Some(slope_se),
            ci: Some(ci),
            p_value: Some(pv),
            intercept: Some(InterceptEstimate {
                estimate: beta[0],
                se: Some(icpt_se),
                ci: Some(ici),
                p_value: Some(ip),
            }),
            residual_scale: Some(sigma),
            effects_model: EffectsModel::MultiplicativeRandom,
            reference: Reference::StudentT { df },
            se_reported: true,
            effects_fallback: false,
            n_variants: n,
        }
    } else {
        let se = match effects {
            EffectsModel::Fixed => raw_se(0) / sigma,
            EffectsModel::MultiplicativeRandom => raw_se(0) / sigma.min(1.0),
        };
        let (ci, pv) = normal_inference(fit.slope, se);
        Estimate {
            method,
            theta: fit.slope,
            se: Some(se),
            ci: Some(ci),
            p_value: Some(pv),
            intercept: None,
            residual_scale: Some(sigma),
            effects_model: effects,
            reference: Reference::Normal,
            se_reported: true,
            effects_fallback: false,
            n_variants: n,
        }
    };
    if !estimate.se.is_some_and(|v| v.is_finite() && v > 0.0) {
        let estimate = unreported(&fit, method, effects, intercept, n, Some(sigma));
        return Ok((RobustFit { se_available: false, ..fit }, estimate));
    }
    Ok((fit, estimate))
}

fn unreported(fit: &RobustFit, method: Method, effects: EffectsModel, intercept: bool, n: usize, sigma: Option<f64>) -> Estimate {
    Estimate {
        method,
        theta: fit.slope,
        se: None,
        ci: None,
        p_value: None,
        intercept: fit.intercept.map(|estimate| InterceptEstimate {
            estimate,
            se: None,
            ci: None,
            p_value: None,
        }),
        residual_scale: sigma,
        effects_model: if intercept { EffectsModel::MultiplicativeRandom } else { effects },
        reference: if intercept {
            Reference::StudentT { df: n.saturating_sub(2) as f64 }
        } else {
            Reference::Normal
        },
        se_reported: false,
        effects_fallback: false,
        n_variants: n,
    }
}
