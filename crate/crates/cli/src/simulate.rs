use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::Args;
use robustmr::median_methods::DEFAULT_BOOTSTRAP_DRAWS;
use robustmr::simulation::{run_study_with, write_report_csv, InvalidAssignment, SampleDesign, ScenarioSpec, StudyOptions};
use robustmr::BisquareParams;

use crate::{resolve_seed, select_methods, Effects, Failure};

#[derive(Args)]
pub struct SimulateArgs {
    /// 1 valid instruments, 2 balanced pleiotropy, 3 directional pleiotropy,
    /// 4 pleiotropy through the confounder.
    #[arg(long)]
    scenario: u8,
    /// Probability that a variant is invalid [default: 0 for scenario 1, 0.3 otherwise].
    #[arg(long)]
    prop_invalid: Option<f64>,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    theta: f64,
    /// Participants in total.
    #[arg(long, default_value_t = 40_000)]
    n: usize,
    /// Number of variants.
    #[arg(long, default_value_t = 25)]
    j: usize,
    /// Estimate exposure and outcome associations in the same participants.
    #[arg(long)]
    one_sample: bool,
    /// Exactly round(prop_invalid * j) invalid variants per replicate.
    #[arg(long)]
    fixed_invalid_count: bool,
    #[arg(long, default_value_t = 1000)]
    n_sim: usize,
    #[arg(long)]
    seed: Option<u64>,
    /// Report CSV path; without it the CSV goes to stdout and the table to stderr.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_BOOTSTRAP_DRAWS)]
    bootstrap_draws: usize,
    #[arg(long, value_delimiter = ',')]
    methods: Option<Vec<String>>,
    #[arg(long, value_enum, default_value = "random")]
    effects: Effects,
}

pub fn run(args: SimulateArgs) -> Result<(), Failure> {
    let methods = select_methods(args.methods.as_deref(), false, false)?;
    if args.threads == Some(0) {
        return Err(Failure::usage("--threads must be positive"));
    }
    let prop_invalid = args.prop_invalid.unwrap_or(if args.scenario == 1 { 0.0 } else { 0.3 });
    let mut spec = ScenarioSpec::new(args.scenario, prop_invalid, args.theta)?;
    spec.n = args.n;
    spec.j = args.j;
    spec.n_sim = args.n_sim;
    if args.one_sample {
        spec.design = SampleDesign::OneSample;
    }
    if args.fixed_invalid_count {
        spec.invalid_assignment = InvalidAssignment::FixedCount;
    }
    spec.validate()?;
    spec.seed = resolve_seed(args.seed);

    let options = StudyOptions {
        methods,
        bootstrap_draws: args.bootstrap_draws,
        effects: args.effects.into(),
        bisquare: BisquareParams::default(),
        threads: args.threads,
    };
    let report = run_study_with(&spec, &options)?;
    let io_err = |e: io::Error| Failure::usage(e.to_string());
    match &args.out {
        Some(path) => {
            let file = File::create(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
            let mut w = BufWriter::new(file);
            write_report_csv(&report, &mut w)?;
            w.flush().map_err(io_err)?;
            print!("{}", report.to_table());
        }
        None => {
            write_report_csv(&report, io::stdout().lock())?;
            eprint!("{}", report.to_table());
        }
    }
    if report.regenerations > 0 {
        eprintln!("regenerated {} datasets with a constant genotype column", report.regenerations);
    }
    Ok(())
}
