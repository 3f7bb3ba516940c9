use std::process::ExitCode;

use clap::{Parser, Subcommand};
use weaving::cli::{
    cmd_check, cmd_profile, cmd_scaling, cmd_table, OutputFormat, ProfileOptions, ScalingOptions,
    StateSource, TableOptions,
};
use weaving::correlations::{SearchMode, WeightRule};
use weaving::error::{Error, Result};
use weaving::limits::set_max_dim;

#[derive(Parser)]
#[command(name = "weaving", version, about = "Multipartite correlation profiles and weaving")]
struct Cli {
    /// Weight rule: k-1, uniform, delta:K or file:PATH.
    #[arg(long, global = true, default_value = "k-1")]
    weights: String,
    /// Partition search: brute, fast or auto (table defaults to brute).
    #[arg(long, global = true)]
    mode: Option<String>,
    /// Worker threads.
    #[arg(long, global = true)]
    parallel: Option<usize>,
    /// json or csv.
    #[arg(long, global = true, default_value = "json")]
    output: String,
    /// Override the largest Hilbert-space dimension.
    #[arg(long, global = true)]
    max_dim: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Benchmark families at one N, closed form against the matrix pipeline.
    Table {
        #[arg(long = "n", short = 'n', alias = "N")]
        n: usize,
        #[arg(long = "d", short = 'd', default_value_t = 3)]
        d: usize,
        #[arg(long)]
        closed_form_only: bool,
    },
    /// Full profile of a family (`dicke:6:3`) or a JSON state file.
    Profile {
        /// Family string or path to a JSON state file.
        #[arg(long)]
        state: String,
    },
    /// Closed-form weaving over N = n_min, 2 n_min, ... , n_max.
    Scaling {
        /// Closed-form family id, e.g. dicke-1.
        #[arg(long)]
        family: String,
        #[arg(long, default_value_t = 4)]
        n_min: usize,
        #[arg(long, default_value_t = 4096)]
        n_max: usize,
        #[arg(long = "d", short = 'd', default_value_t = 2)]
        d: usize,
        #[arg(long, short = 'a', default_value_t = 0.5)]
        a: f64,
    },
    /// Randomized property suite.
    Check {
        #[arg(long, default_value_t = 2017)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        trials: usize,
    },
}

fn run(cli: Cli) -> Result<String> {
    if let Some(t) = cli.parallel {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| Error::Argument(format!("--parallel: {e}")))?;
    }
    if let Some(d) = cli.max_dim {
        set_max_dim(d);
    }
    let format: OutputFormat = cli.output.parse()?;
    let weights: WeightRule = cli.weights.parse()?;
    let mode = |default: SearchMode| cli.mode.as_deref().map_or(Ok(default), str::parse);
    match cli.command {
        Command::Table { n, d, closed_form_only } => {
            let report = cmd_table(&TableOptions { n, d, weights, mode: mode(SearchMode::Brute)?, closed_form_only })?;
            let out = match format {
                OutputFormat::Json => report.to_json()?,
                OutputFormat::Csv => report.to_csv()?,
            };
            if !report.all_agree() {
                print!("{out}");
                return Err(Error::Consistency("closed form and matrix pipeline disagree".into()));
            }
            Ok(out)
        }
        Command::Profile { state } => {
            let state: StateSource = state.parse()?;
            let report = cmd_profile(&ProfileOptions { state, weights, mode: mode(SearchMode::Auto)? })?;
            match format {
                OutputFormat::Json => report.to_json(),
                OutputFormat::Csv => report.to_csv(),
            }
        }
        Command::Scaling { family, n_min, n_max, d, a } => {
            let report = cmd_scaling(&ScalingOptions { family, d, a, n_min, n_max, weights })?;
            match format {
                OutputFormat::Json => report.to_json(),
                OutputFormat::Csv => report.to_csv(),
            }
        }
        Command::Check { seed, trials } => {
            let report = cmd_check(seed, trials)?;
            let out = match format {
                OutputFormat::Json => report.to_json()?,
                OutputFormat::Csv => report.to_csv()?,
            };
            if !report.suite.passed {
                print!("{out}");
                let failed: Vec<_> =
                    report.suite.properties.iter().filter(|p| !p.passed).map(|p| p.name.as_str()).collect();
                return Err(Error::PropertyFailure(failed.join(", ")));
            }
            Ok(out)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(out) => {
            print!("{out}");
            if !out.ends_with('\n') {
                println!();
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
