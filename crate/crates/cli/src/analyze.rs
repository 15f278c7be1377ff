use std::io::{self, Write};
use std::path::PathBuf;

use clap::Args;
use robustmr::analysis::{analyze, AnalysisOptions, AnalysisReport};
use robustmr::median_methods::DEFAULT_BOOTSTRAP_DRAWS;
use robustmr::summary_data::read_csv_path;
use robustmr::{BisquareParams, Estimate};
use serde::Serialize;

use crate::{resolve_seed, select_methods, Effects, Failure, Format};

#[derive(Args)]
pub struct AnalyzeArgs {
    /// CSV with columns id, beta_x, se_x, beta_y, se_y.
    #[arg(long)]
    input: PathBuf,
    /// Comma-separated methods, e.g. `ivw,egger,weighted-median`; `all` for every method.
    #[arg(long, value_delimiter = ',')]
    methods: Option<Vec<String>>,
    #[arg(long, value_enum, default_value = "random")]
    effects: Effects,
    /// Also run the robust-regression counterparts of the selected methods.
    #[arg(long)]
    robust: bool,
    /// Also run the penalized-weight counterparts of the selected methods.
    #[arg(long)]
    penalize: bool,
    #[arg(long, default_value_t = DEFAULT_BOOTSTRAP_DRAWS)]
    bootstrap_draws: usize,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

pub const HEADER: [&str; 9] = ["method", "parameter", "estimate", "se", "ci_low", "ci_high", "p_value", "residual_scale", "status"];

/// One output line; `None` cells print empty (CSV) or null (JSON).
#[derive(Serialize)]
struct Row {
    method: String,
    parameter: &'static str,
    estimate: Option<f64>,
    se: Option<f64>,
    ci_low: Option<f64>,
    ci_high: Option<f64>,
    p_value: Option<f64>,
    residual_scale: Option<f64>,
    status: String,
}

fn status(e: &Estimate) -> String {
    if !e.se_reported {
        "se-unavailable".into()
    } else if e.effects_fallback {
        "fixed-effects-fallback".into()
    } else {
        "ok".into()
    }
}

fn rows(report: &AnalysisReport) -> Vec<Row> {
    let mut out = Vec::new();
    for r in &report.results {
        let method = r.method.slug().to_string();
        match &r.outcome {
            Ok(e) => {
                out.push(Row {
                    method: method.clone(),
                    parameter: "slope",
                    estimate: Some(e.theta),
                    se: e.se,
                    ci_low: e.ci.map(|c| c.low),
                    ci_high: e.ci.map(|c| c.high),
                    p_value: e.p_value,
                    residual_scale: e.residual_scale,
                    status: status(e),
                });
                if let Some(i) = &e.intercept {
                    out.push(Row {
                        method,
                        parameter: "intercept",
                        estimate: Some(i.estimate),
                        se: i.se,
                        ci_low: i.ci.map(|c| c.low),
                        ci_high: i.ci.map(|c| c.high),
                        p_value: i.p_value,
                        residual_scale: e.residual_scale,
                        status: status(e),
                    });
                }
            }
            Err(err) => out.push(Row {
                method,
                parameter: "slope",
                estimate: None,
                se: None,
                ci_low: None,
                ci_high: None,
                p_value: None,
                residual_scale: None,
                status: format!("error: {err}"),
            }),
        }
    }
    let d = &report.diagnostics;
    for (name, q) in [("q_ivw", d.q_ivw), ("q_egger", d.q_egger)] {
        if let Some(q) = q {
            out.push(Row {
                method: "diagnostic".into(),
                parameter: name,
                estimate: Some(q.statistic),
                se: None,
                ci_low: None,
                ci_high: None,
                p_value: Some(q.p_value),
                residual_scale: None,
                status: format!("df={}", q.df),
            });
        }
    }
    if let Some(i2) = d.i_squared {
        out.push(Row {
            method: "diagnostic".into(),
            parameter: "i_squared",
            estimate: Some(i2),
            se: None,
            ci_low: None,
            ci_high: None,
            p_value: None,
            residual_scale: None,
            status: "ok".into(),
        });
    }
    out
}

fn cell(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn write_csv(rows: &[Row], out: impl Write) -> Result<(), Failure> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Failure::usage(e.to_string());
    w.write_record(HEADER).map_err(io)?;
    for r in rows {
        w.write_record([
            r.method.clone(),
            r.parameter.to_string(),
            cell(r.estimate),
            cell(r.se),
            cell(r.ci_low),
            cell(r.ci_high),
            cell(r.p_value),
            cell(r.residual_scale),
            r.status.clone(),
        ])
        .map_err(io)?;
    }
    w.flush().map_err(|e| Failure::usage(e.to_string()))
}

#[derive(Serialize)]
struct JsonReport<'a> {
    seed: u64,
    n_variants: usize,
    rows: &'a [Row],
}

fn table(rows: &[Row]) -> String {
    let num = |v: Option<f64>| v.map_or_else(String::new, |x| format!("{x:.4}"));
    let mut s = format!(
        "{:<26} {:<10} {:>9} {:>9} {:>20} {:>10} {}\n",
        "method", "parameter", "estimate", "se", "95% CI", "p", "status"
    );
    for r in rows {
        let ci = match (r.ci_low, r.ci_high) {
            (Some(a), Some(b)) => format!("({a:.4}, {b:.4})"),
            _ => String::new(),
        };
        let p = r.p_value.map_or_else(String::new, |p| format!("{p:.3e}"));
        s.push_str(&format!(
            "{:<26} {:<10} {:>9} {:>9} {:>20} {:>10} {}\n",
            r.method,
            r.parameter,
            num(r.estimate),
            num(r.se),
            ci,
            p,
            r.status
        ));
    }
    s
}

pub fn run(args: AnalyzeArgs) -> Result<(), Failure> {
    let methods = select_methods(args.methods.as_deref(), args.robust, args.penalize)?;
    let set = read_csv_path(&args.input).map_err(|e| {
        let mut f = Failure::from(e);
        f.message = format!("{}: {}", args.input.display(), f.message);
        f
    })?;
    let seed = resolve_seed(args.seed);
    let options = AnalysisOptions {
        methods,
        effects: args.effects.into(),
        bootstrap_draws: args.bootstrap_draws,
        seed,
        bisquare: BisquareParams::default(),
    };
    let report = analyze(&set, &options)?;
    let rows = rows(&report);
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match args.format {
        Format::Csv => write_csv(&rows, &mut out)?,
        Format::Json => {
            let doc = JsonReport {
                seed,
                n_variants: report.n_variants,
                rows: &rows,
            };
            let text = serde_json::to_string_pretty(&doc).map_err(|e| Failure::usage(e.to_string()))?;
            writeln!(out, "{text}").map_err(|e| Failure::usage(e.to_string()))?;
        }
        Format::Table => write!(out, "{}", table(&rows)).map_err(|e| Failure::usage(e.to_string()))?,
    }
    // estimator failures are still reported row by row, then fail the run
    if let Some((method, err)) = report.results.iter().find_map(|r| r.outcome.as_ref().err().map(|e| (r.method, e))) {
        let mut failure = Failure::from(err.clone());
        failure.code = 3;
        failure.message = format!("{method}: {}", failure.message);
        return Err(failure);
    }
    Ok(())
}
