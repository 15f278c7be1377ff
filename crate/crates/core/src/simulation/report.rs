//! Aggregated metrics of a simulation study and their CSV / text output.

use std::fmt::Write as _;
use std::io::Write;

use serde::{Deserialize, Serialize};

use super::{ReplicateOutcome, ScenarioSpec};
use crate::error::{Error, Result};
use crate::estimate::Method;

/// Columns of the report CSV.
pub const REPORT_HEADER: [&str; 7] = ["row", "mean", "sd", "mean_se", "power", "na_count", "intercept_rejection"];

/// Metrics of one method across replicates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodRow {
    pub method: Method,
    /// Mean estimate over replicates where the method produced one.
    pub mean: Option<f64>,
    pub sd: Option<f64>,
    /// Mean over reported standard errors only.
    pub mean_se: Option<f64>,
    /// Percentage of replicates whose 95% interval excludes zero; a missing
    /// standard error counts as a non-rejection.
    pub power: f64,
    /// Replicates without a standard error (including failed fits).
    pub na_count: usize,
    /// Replicates where the method failed outright.
    pub failures: usize,
    /// Percentage rejecting a zero intercept (intercept methods only).
    pub intercept_rejection: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub spec: ScenarioSpec,
    pub rows: Vec<MethodRow>,
    /// Percentage where the simple median and robust IVW both reject.
    pub joint_rejection: Option<f64>,
    pub mean_f: f64,
    pub mean_f_per_variant: f64,
    pub mean_r2: f64,
    pub mean_i2: Option<f64>,
    pub invalid_fraction: f64,
    pub regenerations: usize,
}

#[derive(Default)]
struct Moments {
    n: usize,
    sum: f64,
    sum_sq: f64,
}

impl Moments {
    fn push(&mut self, v: f64) {
        self.n += 1;
        self.sum += v;
        self.sum_sq += v * v;
    }
    fn mean(&self) -> Option<f64> {
        (self.n > 0).then(|| self.sum / self.n as f64)
    }
    fn sd(&self) -> Option<f64> {
        if self.n < 2 {
            return None;
        }
        let n = self.n as f64;
        let mean = self.sum / n;
        Some(((self.sum_sq - n * mean * mean) / (n - 1.0)).max(0.0).sqrt())
    }
}

fn percent(count: usize, total: usize) -> f64 {
    100.0 * count as f64 / total as f64
}

impl SimulationReport {
    /// Folds replicate outcomes in the order given.
    pub fn aggregate(spec: &ScenarioSpec, methods: &[Method], outcomes: &[ReplicateOutcome]) -> Self {
        let total = outcomes.len().max(1);
        let rows = methods
            .iter()
            .enumerate()
            .map(|(k, &method)| {
                let (mut est, mut se) = (Moments::default(), Moments::default());
                let (mut rejections, mut failures, mut icpt) = (0, 0, 0);
                for o in outcomes {
                    let Some(e) = &o.estimates[k] else {
                        failures += 1;
                        continue;
                    };
                    est.push(e.theta);
                    if let Some(s) = e.se {
                        se.push(s);
                    }
                    rejections += usize::from(e.rejects(0.0));
                    icpt += usize::from(e.intercept_rejects_zero());
                }
                MethodRow {
                    method,
                    mean: est.mean(),
                    sd: est.sd(),
                    mean_se: se.mean(),
                    power: percent(rejections, total),
                    na_count: outcomes.len() - se.n,
                    failures,
                    intercept_rejection: method.has_intercept().then(|| percent(icpt, total)),
                }
            })
            .collect();

        let position = |m: Method| methods.iter().position(|x| *x == m);
        let joint_rejection = match (position(Method::SimpleMedian), position(Method::RobustIvw)) {
            (Some(a), Some(b)) => {
                let both = outcomes
                    .iter()
                    .filter(|o| {
                        let rej = |k: usize| o.estimates[k].as_ref().is_some_and(|e| e.rejects(0.0));
                        rej(a) && rej(b)
                    })
                    .count();
                Some(percent(both, total))
            }
            _ => None,
        };

        let mut f = Moments::default();
        let mut fv = Moments::default();
        let mut r2 = Moments::default();
        let mut i2 = Moments::default();
        let (mut invalid, mut regenerations) = (0, 0);
        for o in outcomes {
            f.push(o.f_statistic);
            fv.push(o.mean_variant_f);
            r2.push(o.r_squared);
            if let Some(v) = o.i_squared {
                i2.push(v);
            }
            invalid += o.invalid;
            regenerations += o.regenerations;
        }
        Self {
            spec: spec.clone(),
            rows,
            joint_rejection,
            mean_f: f.mean().unwrap_or(f64::NAN),
            mean_f_per_variant: fv.mean().unwrap_or(f64::NAN),
            mean_r2: r2.mean().unwrap_or(f64::NAN),
            mean_i2: i2.mean(),
            invalid_fraction: invalid as f64 / (total * spec.j) as f64,
            regenerations,
        }
    }

    pub fn row(&self, method: Method) -> Option<&MethodRow> {
        self.rows.iter().find(|r| r.method == method)
    }

    /// Fixed-width text table.
    pub fn to_table(&self) -> String {
        let s = &self.spec;
        let mut out = String::new();
        let design = match s.design {
            super::SampleDesign::TwoSample => "two-sample",
            super::SampleDesign::OneSample => "one-sample",
        };
        let _ = writeln!(
            out,
            "scenario {} | theta {} | prop_invalid {} | n {} | j {} | {} | n_sim {} | seed {}",
            s.scenario, s.theta, s.prop_invalid, s.n, s.j, design, s.n_sim, s.seed
        );
        let _ = writeln!(out, "{:<34} {:>8} {:>8} {:>8} {:>7} {:>5} {:>9}", "method", "mean", "sd", "mean_se", "power", "na", "icpt_rej");
        let num = |v: Option<f64>| v.map_or_else(|| "NA".to_string(), |x| format!("{x:.3}"));
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{:<34} {:>8} {:>8} {:>8} {:>7.1} {:>5} {:>9}",
                r.method.label(),
                num(r.mean),
                num(r.sd),
                num(r.mean_se),
                r.power,
                r.na_count,
                r.intercept_rejection.map_or_else(String::new, |v| format!("{v:.1}"))
            );
        }
        if let Some(j) = self.joint_rejection {
            let _ = writeln!(out, "{:<34} {:>8} {:>8} {:>8} {:>7.1}", "simple median + robust IVW", "", "", "", j);
        }
        let _ = writeln!(
            out,
            "mean F {:.2} (per-variant {:.2}) | mean R2 {:.4} | mean I2 {} | invalid {:.3} | regenerated {}",
            self.mean_f,
            self.mean_f_per_variant,
            self.mean_r2,
            self.mean_i2.map_or_else(|| "NA".into(), |v| format!("{:.1}%", 100.0 * v)),
            self.invalid_fraction,
            self.regenerations
        );
        out
    }
}

/// Writes the report as CSV: one row per method, the joint-rejection row
/// `joint:simple-median+robust-ivw` (power column) and `diagnostic:*` rows
/// (value in the mean column). Missing values are empty cells.
pub fn write_report_csv<W: Write>(report: &SimulationReport, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let io = |e: csv::Error| Error::Io(e.to_string());
    let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    w.write_record(REPORT_HEADER).map_err(io)?;
    for r in &report.rows {
        w.write_record([
            r.method.slug().to_string(),
            opt(r.mean),
            opt(r.sd),
            opt(r.mean_se),
            r.power.to_string(),
            r.na_count.to_string(),
            opt(r.intercept_rejection),
        ])
        .map_err(io)?;
    }
    if let Some(j) = report.joint_rejection {
        w.write_record(["joint:simple-median+robust-ivw", "", "", "", &j.to_string(), "", ""]).map_err(io)?;
    }
    let diagnostics = [
        ("diagnostic:mean_f", Some(report.mean_f)),
        ("diagnostic:mean_f_per_variant", Some(report.mean_f_per_variant)),
        ("diagnostic:mean_r2", Some(report.mean_r2)),
        ("diagnostic:mean_i2", report.mean_i2),
        ("diagnostic:invalid_fraction", Some(report.invalid_fraction)),
        ("diagnostic:regenerations", Some(report.regenerations as f64)),
    ];
    for (name, value) in diagnostics {
        w.write_record([name, &opt(value), "", "", "", "", ""]).map_err(io)?;
    }
    w.flush()?;
    Ok(())
}
