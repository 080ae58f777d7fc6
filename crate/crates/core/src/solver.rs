//! Common result types and a uniform entry point over all solvers.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::config::Configuration;
use crate::lacam::solve_full_horizon;
use crate::pibt::PriorityState;
use crate::problem::Problem;
use crate::realtime::{run_naive_realtime, run_realtime, ExpansionBudget, RunLimits};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Success,
    Timeout,
    Unsolvable,
    StepLimit,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Success => "success",
            Outcome::Timeout => "timeout",
            Outcome::Unsolvable => "unsolvable",
            Outcome::StepLimit => "step-limit",
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Solver {
    Pibt,
    Lacam,
    RtLacam,
    NaiveRtLacam,
}

impl Solver {
    pub const ALL: [Solver; 4] = [Solver::Pibt, Solver::Lacam, Solver::RtLacam, Solver::NaiveRtLacam];

    pub fn as_str(self) -> &'static str {
        match self {
            Solver::Pibt => "pibt",
            Solver::Lacam => "lacam",
            Solver::RtLacam => "rt-lacam",
            Solver::NaiveRtLacam => "naive-rt-lacam",
        }
    }

    pub fn is_realtime(self) -> bool {
        matches!(self, Solver::RtLacam | Solver::NaiveRtLacam)
    }
}

impl fmt::Display for Solver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Solver {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Solver::ALL
            .into_iter()
            .find(|x| x.as_str() == s)
            .ok_or_else(|| format!("unknown solver `{s}` (expected pibt, lacam, rt-lacam or naive-rt-lacam)"))
    }
}

/// The executed (or planned, for full-horizon LaCAM) configuration sequence
/// plus search statistics.
#[derive(Clone, Debug)]
pub struct SolveResult {
    pub outcome: Outcome,
    /// Starts with the start configuration. Complete only on success.
    pub configs: Vec<Configuration>,
    pub planning_time: Duration,
    pub iterations: u64,
    pub expansions: u64,
    pub explored: usize,
}

impl SolveResult {
    pub(crate) fn success(configs: Vec<Configuration>) -> Self {
        SolveResult {
            outcome: Outcome::Success,
            configs,
            planning_time: Duration::ZERO,
            iterations: 0,
            expansions: 0,
            explored: 0,
        }
    }

    pub(crate) fn failed(outcome: Outcome, start: Configuration) -> Self {
        SolveResult {
            outcome,
            ..SolveResult::success(vec![start])
        }
    }

    pub fn is_success(&self) -> bool {
        self.outcome == Outcome::Success
    }
}

/// Iterated PIBT with persistent priorities, one planning call per step.
pub fn run_pibt(problem: &Problem, limits: RunLimits) -> SolveResult {
    let instance = problem.instance();
    let start = instance.start().clone();
    if problem.unreachable_agent().is_some() {
        return SolveResult::failed(Outcome::Unsolvable, start);
    }
    let goal = instance.goal();
    let mut generator = problem.generator();
    let mut priorities = PriorityState::new(start.len()).updated(&start, goal);
    let mut configs = vec![start];
    let mut planning = Duration::ZERO;
    let outcome = loop {
        let current = configs.last().unwrap();
        if current == goal {
            break Outcome::Success;
        }
        if configs.len() as u64 > limits.step_limit {
            break Outcome::StepLimit;
        }
        if planning > limits.cumulative_timeout {
            break Outcome::Timeout;
        }
        let t = Instant::now();
        let next = generator
            .generate(current, &[], &priorities)
            .unwrap_or_else(|| current.clone());
        planning += t.elapsed();
        priorities = priorities.updated(&next, goal);
        configs.push(next);
    };
    SolveResult {
        outcome,
        iterations: configs.len() as u64 - 1,
        configs,
        planning_time: planning,
        expansions: 0,
        explored: 0,
    }
}

/// Dispatches to the named solver. `budget` is ignored by non-real-time solvers.
pub fn solve(problem: &Problem, solver: Solver, budget: ExpansionBudget, limits: RunLimits) -> SolveResult {
    match solver {
        Solver::Pibt => run_pibt(problem, limits),
        Solver::Lacam => solve_full_horizon(problem, limits.cumulative_timeout),
        Solver::RtLacam => run_realtime(problem, budget, limits),
        Solver::NaiveRtLacam => run_naive_realtime(problem, budget, limits),
    }
}
