use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use mre_core::decomp::{optimize_mre, OptimizerConfig};
use mre_core::report::{
    ext_werner_report, measure, sweep_werner, MeasureOptions, MeasureReport, OptimizeReport, WERNER_CSV_HEADER,
};
use mre_core::statefile::{load, LoadError};
use mre_core::states::ExtWernerParams;

/// Entanglement measures for two-qubit states.
#[derive(Debug, Parser)]
#[command(name = "mre", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Report entropy, concurrence, EF and MRE of a state file.
    Measure {
        path: PathBuf,
        #[command(flatten)]
        search: SearchArgs,
        /// Score only the seed ensembles.
        #[arg(long)]
        no_optimize: bool,
        /// Also search separable states for a relative-entropy upper bound.
        #[arg(long)]
        re_upper: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Tabulate Werner-state measures over a range of F.
    SweepWerner {
        #[arg(long, default_value_t = 0.0)]
        from: f64,
        #[arg(long, default_value_t = 1.0)]
        to: f64,
        #[arg(long, default_value_t = 0.05)]
        step: f64,
        /// Report the closed form without clamping below F = 1/4.
        #[arg(long)]
        raw: bool,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Closed-form and pipeline values for an extended Werner state.
    ExtWerner {
        /// Bell-state weights for Phi+, Phi-, Psi+, Psi-.
        #[arg(long, num_args = 4, value_names = ["B1", "B2", "B3", "B4"], allow_negative_numbers = true)]
        b: Vec<f64>,
        /// Weights of |00>, |01>, |10>, |11>.
        #[arg(long, num_args = 4, value_names = ["C1", "C2", "C3", "C4"], allow_negative_numbers = true,
              default_values_t = [0.0, 0.0, 0.0, 0.0])]
        c: Vec<f64>,
        #[command(flatten)]
        search: SearchArgs,
        /// Score only the seed ensembles.
        #[arg(long)]
        no_optimize: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Minimize the MRE objective over ensembles of a state file.
    Optimize {
        path: PathBuf,
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
struct SearchArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 32)]
    restarts: usize,
    /// Iteration cap for each local search.
    #[arg(long, default_value_t = 2000)]
    iters: usize,
    #[arg(long)]
    ensemble_size: Option<usize>,
}

impl SearchArgs {
    fn config(&self) -> OptimizerConfig {
        OptimizerConfig {
            restarts: self.restarts,
            max_iterations: self.iters,
            ensemble_size: self.ensemble_size,
            seed: self.seed,
            ..OptimizerConfig::default()
        }
    }

    fn options(&self, no_optimize: bool, re_upper: bool) -> MeasureOptions {
        MeasureOptions {
            optimizer: self.config(),
            optimize: !no_optimize,
            re_upper,
        }
    }
}

struct Failure {
    code: u8,
    message: String,
}

impl From<LoadError> for Failure {
    fn from(e: LoadError) -> Self {
        Failure {
            code: e.exit_code() as u8,
            message: e.to_string(),
        }
    }
}

impl From<mre_core::Error> for Failure {
    fn from(e: mre_core::Error) -> Self {
        Failure {
            code: 2,
            message: e.to_string(),
        }
    }
}

fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("reports serialize")
}

fn run(cli: Cli) -> Result<String, Failure> {
    let out = match cli.command {
        Command::Measure {
            path,
            search,
            no_optimize,
            re_upper,
            format,
        } => {
            let rho = load(&path)?.density();
            let report = measure(&rho, &search.options(no_optimize, re_upper)).map_err(|e| Failure {
                code: 3,
                message: e.to_string(),
            })?;
            match format {
                Format::Json => json(&report),
                Format::Csv => format!("{}\n{}", MeasureReport::CSV_HEADER, report.csv_row()),
            }
        }
        Command::SweepWerner {
            from,
            to,
            step,
            raw,
            format,
        } => {
            let rows = sweep_werner(from, to, step, raw)?;
            match format {
                Format::Json => json(&rows),
                Format::Csv => std::iter::once(WERNER_CSV_HEADER.to_string())
                    .chain(rows.iter().map(|r| r.csv_row()))
                    .collect::<Vec<_>>()
                    .join("\n"),
            }
        }
        Command::ExtWerner {
            b,
            c,
            search,
            no_optimize,
            format,
        } => {
            let params = ExtWernerParams::new([b[0], b[1], b[2], b[3]], [c[0], c[1], c[2], c[3]])?;
            let report = ext_werner_report(&params, &search.options(no_optimize, false))?;
            match format {
                Format::Json => json(&report),
                Format::Csv => format!(
                    "{},closed_mre,closed_separable\n{},{},{}",
                    MeasureReport::CSV_HEADER,
                    report.measure.csv_row(),
                    report.closed_form.mre,
                    report.closed_form.separable
                ),
            }
        }
        Command::Optimize { path, search, format } => {
            let rho = load(&path)?.density();
            let result = optimize_mre(&rho, &search.config())?;
            let report = OptimizeReport::from(&result);
            match format {
                Format::Json => json(&report),
                Format::Csv => format!("{}\n{}", OptimizeReport::CSV_HEADER, report.csv_row()),
            }
        }
    };
    Ok(out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            println!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("mre: {}", f.message.replace('\n', " "));
            ExitCode::from(f.code)
        }
    }
}
