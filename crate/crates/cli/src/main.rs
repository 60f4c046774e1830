//! Batch CLI for the cliquelab experiments. One command per process; results
//! are appended to a JSON-lines log and echoed to stdout. Exit codes: 0 on
//! pass, 2 when a checked property fails, 1 on error.

mod config;
mod exec;
mod report;

use clap::{Parser, Subcommand};
use config::*;

#[derive(Parser)]
#[command(name = "cliquelab", version, about = "clique test distributions, monotone circuits, sunflowers")]
struct Cli {
    #[command(subcommand)]
    command: TopCommand,
}

#[derive(Subcommand)]
enum TopCommand {
    /// Execute a JSON experiment config.
    Run {
        #[arg(long)]
        config: String,
    },
    /// Sample graphs from one of the test distributions (GRAPH format).
    Sample {
        #[arg(long, value_enum)]
        dist: DistKind,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        alpha: Option<usize>,
        #[arg(long)]
        beta: Option<usize>,
        #[arg(long)]
        count: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<String>,
    },
    /// Assemble the threshold-of-clique-indicators circuit (MONO v1).
    BuildDistinguisher {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        alpha: usize,
        #[arg(long)]
        beta: usize,
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long)]
        circuit_out: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<String>,
    },
    /// Build the distinguisher and measure accept/reject rates.
    MeasureSuccess {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        alpha: usize,
        #[arg(long)]
        beta: usize,
        #[arg(long)]
        trials: u64,
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long)]
        ell: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        tau: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<String>,
    },
    /// Robust (clique) sunflower membership of a FAMILY file.
    CheckRobust {
        #[arg(long)]
        family: String,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        eps: f64,
        /// "set" or "clique" (default).
        #[arg(long)]
        kind: Option<String>,
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<String>,
    },
    /// Exact k-sunflower search in a FAMILY file.
    FindSunflower {
        #[arg(long)]
        family: String,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<String>,
    },
    /// Robust closure of a FAMILY file viewed as an approximator.
    Closure {
        #[arg(long)]
        family: String,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        mc_trials: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<String>,
    },
    /// Gate-by-gate approximation of a MONO v1 circuit.
    Approximate {
        #[arg(long)]
        circuit: String,
        /// "id", "trim" or "full" (default).
        #[arg(long)]
        icomp: Option<String>,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long)]
        c: Option<usize>,
        #[arg(long)]
        mc_trials: Option<u64>,
        #[arg(long)]
        trace_out: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<String>,
    },
    /// Expected suprema of lifted processes; --chain checks the whole
    /// interpolation chain.
    CompareProcesses {
        #[arg(long)]
        family: String,
        /// "left", "square", "link", or a lifting JSON file.
        #[arg(long)]
        lifting: String,
        #[arg(long)]
        ell: Option<usize>,
        /// Column core for the link lifting (1-based, repeatable).
        #[arg(long)]
        core: Option<Vec<usize>>,
        #[arg(long)]
        p: f64,
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long)]
        chain: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<String>,
    },
    /// Run one of the lemma-level verification suites.
    VerifyLemma {
        /// erdos-rado | sunflower-rcs | rs-implies-rcs | lemma33-bridge |
        /// comparison-chain
        #[arg(long)]
        lemma: String,
        #[arg(long)]
        ell: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        core_size: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        families: Option<usize>,
        #[arg(long)]
        family: Option<String>,
        #[arg(long)]
        lifting: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<String>,
    },
    /// Flatten a run-record log into a CSV or JSON table.
    Report {
        #[arg(long)]
        records: String,
        /// "csv" (default) or "json".
        #[arg(long, default_value = "csv")]
        format: String,
    },
}

fn main() {
    std::process::exit(real_main());
}

fn real_main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help/version are not errors.
            if e.use_stderr() {
                eprintln!("{e}");
                return 1;
            }
            print!("{e}");
            return 0;
        }
    };
    init_thread_pool();
    match run_command(cli.command) {
        Ok(pass) => {
            if pass {
                0
            } else {
                2
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

/// CLIQUELAB_THREADS caps the rayon worker count.
fn init_thread_pool() {
    if let Ok(v) = std::env::var("CLIQUELAB_THREADS") {
        if let Ok(threads) = v.parse::<usize>() {
            if threads >= 1 {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(threads)
                    .build_global();
            }
        }
    }
}

fn run_command(cmd: TopCommand) -> cliquelab::Result<bool> {
    let config = match cmd {
        TopCommand::Run { config } => {
            let text = std::fs::read_to_string(&config)?;
            serde_json::from_str::<ExperimentConfig>(&text).map_err(|e| {
                cliquelab::Error::InvalidParameter(format!("config schema violation: {e}"))
            })?
        }
        TopCommand::Report { records, format } => {
            let format = match format.as_str() {
                "csv" => report::ReportFormat::Csv,
                "json" => report::ReportFormat::Json,
                other => {
                    return Err(cliquelab::Error::InvalidParameter(format!(
                        "format must be csv or json, got '{other}'"
                    )))
                }
            };
            let text = std::fs::read_to_string(&records)?;
            let table = report::build_table(&text);
            if table.skipped > 0 {
                eprintln!("warning: skipped {} corrupt record(s)", table.skipped);
            }
            print!("{}", report::render(&table, &format)?);
            return Ok(true);
        }
        TopCommand::Sample {
            dist,
            n,
            alpha,
            beta,
            count,
            seed,
            out,
        } => ExperimentConfig {
            command: CommandSpec::Sample(SampleParams {
                dist,
                n,
                alpha,
                beta,
                count,
            }),
            master_seed: seed,
            output_path: out,
        },
        TopCommand::BuildDistinguisher {
            n,
            alpha,
            beta,
            delta,
            circuit_out,
            seed,
            out,
        } => ExperimentConfig {
            command: CommandSpec::BuildDistinguisher(BuildDistinguisherParams {
                n,
                alpha,
                beta,
                delta,
                circuit_out,
            }),
            master_seed: seed,
            output_path: out,
        },
        TopCommand::MeasureSuccess {
            n,
            alpha,
            beta,
            trials,
            delta,
            ell,
            m,
            tau,
            seed,
            out,
        } => ExperimentConfig {
            command: CommandSpec::MeasureSuccess(MeasureSuccessParams {
                n,
                alpha,
                beta,
                trials,
                delta,
                ell,
                m,
                tau,
            }),
            master_seed: seed,
            output_path: out,
        },
        TopCommand::CheckRobust {
            family,
            p,
            eps,
            kind,
            mode,
            trials,
            seed,
            out,
        } => ExperimentConfig {
            command: CommandSpec::CheckRobust(CheckRobustParams {
                family,
                p,
                eps,
                kind,
                mode,
                trials,
            }),
            master_seed: seed,
            output_path: out,
        },
        TopCommand::FindSunflower {
            family,
            k,
            seed,
            out,
        } => ExperimentConfig {
            command: CommandSpec::FindSunflower(FindSunflowerParams { family, k }),
            master_seed: seed,
            output_path: out,
        },
        TopCommand::Closure {
            family,
            p,
            eps,
            mc_trials,
            seed,
            out,
        } => ExperimentConfig {
            command: CommandSpec::Closure(ClosureParams {
                family,
                p,
                eps,
                mc_trials,
            }),
            master_seed: seed,
            output_path: out,
        },
        TopCommand::Approximate {
            circuit,
            icomp,
            p,
            eps,
            c,
            mc_trials,
            trace_out,
            seed,
            out,
        } => ExperimentConfig {
            command: CommandSpec::Approximate(ApproximateParams {
                circuit,
                icomp,
                p,
                eps,
                c,
                mc_trials,
                trace_out,
            }),
            master_seed: seed,
            output_path: out,
        },
        TopCommand::CompareProcesses {
            family,
            lifting,
            ell,
            core,
            p,
            mode,
            trials,
            chain,
            seed,
            out,
        } => ExperimentConfig {
            command: CommandSpec::CompareProcesses(CompareProcessesParams {
                family,
                lifting,
                ell,
                core,
                p,
                mode,
                trials,
                chain: Some(chain),
            }),
            master_seed: seed,
            output_path: out,
        },
        TopCommand::VerifyLemma {
            lemma,
            ell,
            k,
            core_size,
            n,
            p,
            eps,
            samples,
            families,
            family,
            lifting,
            seed,
            out,
        } => ExperimentConfig {
            command: CommandSpec::VerifyLemma(VerifyLemmaParams {
                lemma,
                ell,
                k,
                core_size,
                n,
                p,
                eps,
                samples,
                families,
                family,
                lifting,
            }),
            master_seed: seed,
            output_path: out,
        },
    };
    let record = exec::run(&config)?;
    println!("{}", serde_json::to_string(&record).expect("record serializes"));
    Ok(record.pass)
}
