//! Solver x scenario x agent-count sweeps with CSV output.
//!
//! One [`RunRecord`] is produced per (scenario, agent count). Runs whose
//! budgets are expansion counts (or that have no per-iteration budget) are
//! executed on a rayon pool; wall-clock budgets run serially so concurrent
//! runs do not distort each other's timing. Records always come back in
//! (scenario, agent count) order.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::movingai::{read_map, read_scenario};
use crate::paths::dump_paths;
use crate::pibt::{PolicyRanker, PolicyTable};
use crate::problem::Problem;
use crate::realtime::{default_step_limit, ExpansionBudget, RunLimits};
use crate::solver::{solve, Outcome, SolveResult, Solver};
use crate::validate::validate_with_tables;

/// Column order of the results CSV.
pub const CSV_HEADER: [&str; 14] = [
    "map",
    "scen",
    "n_agents",
    "solver",
    "budget",
    "seed",
    "outcome",
    "total_planning_time_s",
    "heuristic_time_s",
    "iterations",
    "expansions",
    "cost",
    "normalized_cost",
    "valid",
];

#[derive(Clone, Debug)]
pub struct RunSpec {
    pub map: PathBuf,
    pub scens: Vec<PathBuf>,
    pub agents: Vec<usize>,
    pub solver: Solver,
    /// Per-iteration budget; required by the real-time solvers.
    pub budget: Option<ExpansionBudget>,
    pub timeout: Duration,
    /// Defaults to `10 * width * height * agents`.
    pub step_limit: Option<u64>,
    /// Seeds the distance ranker's tie-breaking; `None` is fully deterministic.
    pub seed: Option<u64>,
    pub policy: Option<PathBuf>,
    /// Write timing columns as zero so repeated runs give identical bytes.
    pub omit_timing: bool,
    /// Allow parallel execution when no wall-clock budget is involved.
    pub parallel: bool,
    /// Directory for one path file per successful run.
    pub paths_dir: Option<PathBuf>,
}

impl RunSpec {
    pub fn new(map: impl Into<PathBuf>, scens: Vec<PathBuf>, agents: Vec<usize>, solver: Solver) -> Self {
        RunSpec {
            map: map.into(),
            scens,
            agents,
            solver,
            budget: None,
            timeout: Duration::from_secs(60),
            step_limit: None,
            seed: None,
            policy: None,
            omit_timing: false,
            parallel: true,
            paths_dir: None,
        }
    }

    pub fn check(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidInstance(m));
        if self.agents.is_empty() || self.agents.contains(&0) {
            return bad("agent counts must be positive".into());
        }
        if self.agents.windows(2).any(|w| w[0] > w[1]) {
            return bad("agent counts must be nondecreasing".into());
        }
        if self.scens.is_empty() {
            return bad("at least one scenario is required".into());
        }
        if self.solver.is_realtime() && self.budget.is_none() {
            return bad(format!("{} needs a per-iteration budget", self.solver));
        }
        Ok(())
    }

    fn budget(&self) -> ExpansionBudget {
        self.budget.unwrap_or(ExpansionBudget::Expansions(1))
    }

    fn runs_parallel(&self) -> bool {
        self.parallel && !matches!(self.budget, Some(ExpansionBudget::WallClock(_)) if self.solver.is_realtime())
    }
}

pub fn budget_label(solver: Solver, budget: Option<ExpansionBudget>) -> String {
    if !solver.is_realtime() {
        return String::new();
    }
    match budget {
        Some(ExpansionBudget::WallClock(d)) => format!("{}ms", d.as_secs_f64() * 1000.0),
        Some(ExpansionBudget::Expansions(k)) => format!("{k}exp"),
        None => String::new(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunRecord {
    pub map: String,
    pub scen: String,
    pub n_agents: usize,
    pub solver: Solver,
    pub budget: String,
    pub seed: Option<u64>,
    pub outcome: Outcome,
    pub total_planning_time_s: f64,
    pub heuristic_time_s: f64,
    pub iterations: u64,
    pub expansions: u64,
    pub cost: Option<u64>,
    pub normalized_cost: Option<f64>,
    pub valid: Option<bool>,
}

/// A record together with the run it summarizes.
pub struct RunOutput {
    pub record: RunRecord,
    pub result: SolveResult,
    pub problem: Problem,
}

fn file_name(p: &Path) -> String {
    p.file_name().map_or_else(|| p.display().to_string(), |s| s.to_string_lossy().into_owned())
}

/// Runs one solver on one loaded problem and summarizes it.
pub fn run_one(
    problem: &Problem,
    solver: Solver,
    budget: ExpansionBudget,
    limits: RunLimits,
    heuristic_time: Duration,
) -> (RunRecord, SolveResult) {
    let result = solve(problem, solver, budget, limits);
    let instance = problem.instance();
    let (cost, normalized, valid) = if result.is_success() {
        let report = validate_with_tables(instance, &result.configs, problem.tables());
        (
            Some(report.cost),
            Some(report.normalized_cost.value),
            Some(report.valid),
        )
    } else {
        (None, None, None)
    };
    let planning = if matches!(result.outcome, Outcome::Timeout) {
        limits.cumulative_timeout
    } else {
        result.planning_time
    };
    let record = RunRecord {
        map: String::new(),
        scen: String::new(),
        n_agents: instance.num_agents(),
        solver,
        budget: budget_label(solver, Some(budget)),
        seed: None,
        outcome: result.outcome,
        total_planning_time_s: planning.as_secs_f64(),
        heuristic_time_s: heuristic_time.as_secs_f64(),
        iterations: result.iterations,
        expansions: result.expansions,
        cost,
        normalized_cost: normalized,
        valid,
    };
    (record, result)
}

pub fn run_matrix(spec: &RunSpec) -> Result<Vec<RunOutput>> {
    spec.check()?;
    let map = Arc::new(read_map(&spec.map)?);
    let policy = spec.policy.as_ref().map(PolicyTable::read).transpose()?;

    let mut jobs = Vec::new();
    for scen in &spec.scens {
        for &n in &spec.agents {
            let instance = read_scenario(scen, Arc::clone(&map), n)?;
            jobs.push((scen.clone(), instance));
        }
    }

    let run = |(scen, instance): &(PathBuf, crate::instance::Instance)| -> RunOutput {
        let t = Instant::now();
        let mut problem = Problem::new(instance.clone()).with_seed(spec.seed);
        if let Some(policy) = &policy {
            let fallback = problem.distance_ranker().with_seed(spec.seed);
            problem = problem.with_ranker(Arc::new(PolicyRanker::new(policy.clone(), fallback)));
        }
        let heuristic_time = t.elapsed();
        let limits = RunLimits::new(
            spec.timeout,
            spec.step_limit
                .unwrap_or_else(|| default_step_limit(map.num_cells(), instance.num_agents())),
        );
        let (mut record, result) = run_one(&problem, spec.solver, spec.budget(), limits, heuristic_time);
        record.map = file_name(&spec.map);
        record.scen = file_name(scen);
        record.budget = budget_label(spec.solver, spec.budget);
        record.seed = spec.seed;
        if spec.omit_timing {
            record.total_planning_time_s = 0.0;
            record.heuristic_time_s = 0.0;
        }
        RunOutput { record, result, problem }
    };

    let outputs: Vec<RunOutput> = if spec.runs_parallel() {
        jobs.par_iter().map(run).collect()
    } else {
        jobs.iter().map(run).collect()
    };

    if let Some(dir) = &spec.paths_dir {
        std::fs::create_dir_all(dir)?;
        for out in outputs.iter().filter(|o| o.result.is_success()) {
            dump_paths(&out.result.configs, dir.join(paths_file_name(&out.record)))?;
        }
    }
    Ok(outputs)
}

/// `<scen stem>-<n>-<solver>[-<budget>].paths`
pub fn paths_file_name(r: &RunRecord) -> String {
    let stem = r.scen.trim_end_matches(".scen");
    if r.budget.is_empty() {
        format!("{stem}-{}-{}.paths", r.n_agents, r.solver)
    } else {
        format!("{stem}-{}-{}-{}.paths", r.n_agents, r.solver, r.budget)
    }
}

pub fn write_csv<W: Write>(records: &[RunRecord], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}
