use std::fs::File;
use std::io;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Duration;

use clap::{ArgGroup, Parser, Subcommand};

use rtlacam::bench::{run_matrix, write_csv, RunSpec};
use rtlacam::movingai::{read_map, read_scenario};
use rtlacam::oracle::joint_bfs_oracle;
use rtlacam::paths::{dump_paths, read_paths};
use rtlacam::validate::validate;
use rtlacam::{ExpansionBudget, Solver};

#[derive(Parser)]
#[command(name = "rtlacam", version, about = "Real-time LaCAM, LaCAM and PIBT on MovingAI grids")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a solver over scenarios and agent counts and write one CSV row per run.
    ///
    /// Runs without a wall-clock budget execute in parallel (one per core);
    /// runs with `--budget-ms` execute serially so timings are not disturbed.
    #[command(group(ArgGroup::new("budget").args(["budget_ms", "budget_expansions"])))]
    Solve {
        #[arg(long)]
        map: PathBuf,
        /// One or more .scen files.
        #[arg(long, num_args = 1.., required = true)]
        scen: Vec<PathBuf>,
        /// Agent counts, comma separated and nondecreasing.
        #[arg(long, value_delimiter = ',', required = true)]
        agents: Vec<usize>,
        /// pibt, lacam, rt-lacam or naive-rt-lacam.
        #[arg(long)]
        solver: Solver,
        /// Per-iteration wall-clock budget in milliseconds (real-time solvers).
        #[arg(long)]
        budget_ms: Option<f64>,
        /// Per-iteration expansion budget (real-time solvers).
        #[arg(long)]
        budget_expansions: Option<u64>,
        /// Cumulative planning timeout in seconds.
        #[arg(long, default_value_t = 60.0)]
        timeout_s: f64,
        /// Executed-step limit; defaults to 10 * width * height * agents.
        #[arg(long)]
        step_limit: Option<u64>,
        /// Seed for randomized tie-breaking; omit for deterministic ranking.
        #[arg(long)]
        seed: Option<u64>,
        /// Policy table file; selects the policy ranker.
        #[arg(long)]
        policy: Option<PathBuf>,
        /// CSV output file (stdout if omitted).
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Path output: a file for a single run, otherwise a directory.
        #[arg(long)]
        paths: Option<PathBuf>,
        /// Write zero in the timing columns for byte-reproducible CSVs.
        #[arg(long)]
        omit_timing: bool,
        /// Never run instances in parallel.
        #[arg(long)]
        serial: bool,
    },
    /// Check a path file against a scenario. Exit status 0 iff valid.
    Validate {
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        scen: PathBuf,
        #[arg(long)]
        agents: usize,
        #[arg(long)]
        paths: PathBuf,
    },
    /// Solve a small instance optimally by exhaustive joint-space search.
    Oracle {
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        scen: PathBuf,
        #[arg(long)]
        agents: usize,
        #[arg(long, default_value_t = rtlacam::oracle::DEFAULT_STATE_CAP)]
        cap: usize,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> rtlacam::Result<ExitCode> {
    match cli.command {
        Command::Solve {
            map,
            scen,
            agents,
            solver,
            budget_ms,
            budget_expansions,
            timeout_s,
            step_limit,
            seed,
            policy,
            csv,
            paths,
            omit_timing,
            serial,
        } => {
            let single = scen.len() == 1 && agents.len() == 1;
            let mut spec = RunSpec::new(map, scen, agents, solver);
            spec.budget = budget_ms
                .map(ExpansionBudget::millis)
                .or(budget_expansions.map(ExpansionBudget::Expansions));
            spec.timeout = Duration::from_secs_f64(timeout_s);
            spec.step_limit = step_limit;
            spec.seed = seed;
            spec.policy = policy;
            spec.omit_timing = omit_timing;
            spec.parallel = !serial;
            if !single {
                spec.paths_dir = paths.clone();
            }
            let outputs = run_matrix(&spec)?;
            if single {
                if let (Some(p), Some(out)) = (&paths, outputs.first()) {
                    if out.result.is_success() {
                        dump_paths(&out.result.configs, p)?;
                    }
                }
            }
            let records: Vec<_> = outputs.into_iter().map(|o| o.record).collect();
            match csv {
                Some(p) => write_csv(&records, File::create(p)?)?,
                None => write_csv(&records, io::stdout().lock())?,
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Validate {
            map,
            scen,
            agents,
            paths,
        } => {
            let map = Arc::new(read_map(map)?);
            let instance = read_scenario(&scen, map, agents)?;
            let configs = read_paths(&paths)?;
            if let Some(c) = configs.iter().find(|c| c.len() != agents) {
                return Err(rtlacam::Error::InvalidInstance(format!(
                    "paths file has {} agents, expected {agents}",
                    c.len()
                )));
            }
            let report = validate(&instance, &configs);
            println!(
                "{}: {} timesteps, cost {}, normalized cost {:.4}",
                if report.valid { "valid" } else { "INVALID" },
                configs.len(),
                report.cost,
                report.normalized_cost.value
            );
            for v in &report.violations {
                println!("  {v}");
            }
            println!("valid,timesteps,cost,normalized_cost,violations");
            println!(
                "{},{},{},{},{}",
                report.valid,
                configs.len(),
                report.cost,
                report.normalized_cost.value,
                report.violations.len()
            );
            Ok(if report.valid { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Oracle { map, scen, agents, cap } => {
            let map = Arc::new(read_map(map)?);
            let instance = read_scenario(&scen, map, agents)?;
            match joint_bfs_oracle(&instance, cap) {
                Ok(s) => {
                    println!("cost {}\nmakespan {}\nstates {}", s.cost, s.makespan, s.states);
                    Ok(ExitCode::SUCCESS)
                }
                Err(e) => {
                    println!("{e}");
                    Ok(ExitCode::from(1))
                }
            }
        }
    }
}
