//! Real-time LaCAM: interleaved planning and execution over one persistent
//! LaCAM search tree.
//!
//! Every iteration continues the search where the previous one stopped,
//! under a small budget, then moves the agents one step along the tree path
//! from the current configuration (the root) towards the most recently
//! created node. After the move the tree is rerooted at the new
//! configuration, so backtracking from any node always ends at the agents'
//! actual position. The naive baseline instead starts a fresh tree every
//! iteration.

use std::collections::VecDeque;
use std::time::{Duration, Instant};

use crate::config::{valid_transition, Configuration};
use crate::error::{Error, Result};
use crate::lacam::{ExpansionOutcome, SearchTree};
use crate::problem::Problem;
use crate::solver::{Outcome, SolveResult};

/// How much search one planning iteration may do. At least one expansion is
/// always performed before the budget is consulted.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExpansionBudget {
    WallClock(Duration),
    Expansions(u64),
}

impl ExpansionBudget {
    pub fn millis(ms: f64) -> Self {
        ExpansionBudget::WallClock(Duration::from_secs_f64(ms / 1000.0))
    }

    fn exhausted(self, expansions: u64, started: Instant) -> bool {
        match self {
            ExpansionBudget::WallClock(d) => started.elapsed() >= d,
            ExpansionBudget::Expansions(k) => expansions >= k,
        }
    }
}

/// Whole-run limits shared by all iterative solvers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunLimits {
    /// Bound on the summed planning time of all iterations.
    pub cumulative_timeout: Duration,
    /// Bound on the number of executed steps.
    pub step_limit: u64,
}

impl RunLimits {
    pub fn new(cumulative_timeout: Duration, step_limit: u64) -> Self {
        RunLimits {
            cumulative_timeout,
            step_limit,
        }
    }

    /// 60 s of planning and `10 * width * height * agents` steps.
    pub fn for_problem(problem: &Problem) -> Self {
        let inst = problem.instance();
        RunLimits::new(Duration::from_secs(60), default_step_limit(inst.map().num_cells(), inst.num_agents()))
    }
}

pub fn default_step_limit(cells: usize, agents: usize) -> u64 {
    10 * cells as u64 * agents.max(1) as u64
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct IterationStats {
    pub planning_time: Duration,
    pub expansions: u64,
    pub open_size: usize,
    pub explored_size: usize,
}

#[derive(Clone, Debug, Default)]
pub struct ExecutionTrace {
    pub configs: Vec<Configuration>,
    pub iterations: Vec<IterationStats>,
}

impl ExecutionTrace {
    pub fn total_planning_time(&self) -> Duration {
        self.iterations.iter().map(|i| i.planning_time).sum()
    }
}

/// One real-time LaCAM run in progress.
pub struct RtSession {
    tree: SearchTree,
    trace: ExecutionTrace,
    goal_path: Option<VecDeque<Configuration>>,
    audit: bool,
}

impl RtSession {
    pub fn new(problem: &Problem) -> Result<Self> {
        let tree = SearchTree::new(problem)?;
        Ok(RtSession {
            trace: ExecutionTrace {
                configs: vec![problem.instance().start().clone()],
                iterations: Vec::new(),
            },
            tree,
            goal_path: None,
            audit: false,
        })
    }

    /// After every committed move, verify that rerooting left the search
    /// state untouched and the parent links form a tree at the new root.
    pub fn set_audit(&mut self, audit: bool) {
        self.audit = audit;
    }

    pub fn tree(&self) -> &SearchTree {
        &self.tree
    }

    pub fn tree_mut(&mut self) -> &mut SearchTree {
        &mut self.tree
    }

    pub fn trace(&self) -> &ExecutionTrace {
        &self.trace
    }

    pub fn current(&self) -> &Configuration {
        self.tree.node(self.tree.root()).config()
    }

    pub fn at_goal(&self) -> bool {
        self.current() == self.tree.goal()
    }

    /// True once the search has reached the goal and the rest of the path is
    /// being executed open loop.
    pub fn goal_path_known(&self) -> bool {
        self.goal_path.is_some()
    }

    /// Continues the search under `budget` and picks the next configuration.
    /// Fails with [`Outcome::Unsolvable`] if the search space is exhausted.
    pub fn plan_iteration(&mut self, budget: ExpansionBudget) -> Result<Configuration, Outcome> {
        self.plan(budget, None)
    }

    fn plan(&mut self, budget: ExpansionBudget, deadline: Option<Instant>) -> Result<Configuration, Outcome> {
        if let Some(path) = &mut self.goal_path {
            let next = path.pop_front().unwrap_or_else(|| self.tree.goal().clone());
            self.record(Duration::ZERO, 0);
            return Ok(next);
        }
        let started = Instant::now();
        let before = self.tree.expansions();
        loop {
            match self.tree.expand_once() {
                ExpansionOutcome::GoalFound(goal) => {
                    let mut path: VecDeque<_> = self.tree.backtrack_path(goal).into();
                    path.pop_front();
                    let next = path.pop_front().unwrap_or_else(|| self.current().clone());
                    self.goal_path = Some(path);
                    self.record(started.elapsed(), self.tree.expansions() - before);
                    return Ok(next);
                }
                ExpansionOutcome::OpenExhausted => {
                    self.record(started.elapsed(), self.tree.expansions() - before);
                    return Err(Outcome::Unsolvable);
                }
                ExpansionOutcome::Progressed(_) => {
                    let done = self.tree.expansions() - before;
                    if budget.exhausted(done, started) {
                        break;
                    }
                    if deadline.is_some_and(|d| Instant::now() > d) {
                        self.record(started.elapsed(), done);
                        return Err(Outcome::Timeout);
                    }
                }
            }
        }
        self.record(started.elapsed(), self.tree.expansions() - before);
        let target = self.tree.last_created();
        Ok(self
            .tree
            .first_step_towards(target)
            .unwrap_or_else(|| self.current().clone()))
    }

    fn record(&mut self, planning_time: Duration, expansions: u64) {
        self.trace.iterations.push(IterationStats {
            planning_time,
            expansions,
            open_size: self.tree.open().len(),
            explored_size: self.tree.explored_len(),
        });
    }

    /// Executes the move to `next` and reroots the tree there.
    pub fn commit_step(&mut self, next: Configuration) -> Result<()> {
        if &next != self.current() {
            let id = self
                .tree
                .lookup(&next)
                .ok_or_else(|| Error::InvalidStep(format!("{next:?} was never explored")))?;
            let adjacent = self.tree.node(id).parent() == Some(self.tree.root());
            if !adjacent || !valid_transition(self.tree.map(), self.current(), &next) {
                return Err(Error::InvalidStep(format!(
                    "{next:?} is not one tree edge away from {:?}",
                    self.current()
                )));
            }
            let before = self.audit.then(|| self.tree.fingerprint());
            self.tree.reroot(id);
            if let Some(before) = before {
                if self.tree.fingerprint() != before {
                    return Err(Error::InvalidStep("rerooting changed the search state".into()));
                }
                self.tree
                    .check_rooted_tree()
                    .map_err(|e| Error::InvalidStep(format!("after rerooting: {e}")))?;
            }
        }
        self.trace.configs.push(next);
        Ok(())
    }

    /// Plans and executes until the goal is reached or a limit is hit.
    pub fn run(&mut self, budget: ExpansionBudget, limits: RunLimits) -> Result<SolveResult> {
        let mut planning = self.trace.total_planning_time();
        let outcome = loop {
            if self.at_goal() {
                break Outcome::Success;
            }
            if self.trace.configs.len() as u64 > limits.step_limit {
                break Outcome::StepLimit;
            }
            if planning > limits.cumulative_timeout {
                break Outcome::Timeout;
            }
            let deadline = Instant::now() + (limits.cumulative_timeout - planning);
            let step = self.plan(budget, Some(deadline));
            planning += self.trace.iterations.last().map_or(Duration::ZERO, |i| i.planning_time);
            match step {
                Ok(next) => self.commit_step(next)?,
                Err(o) => break o,
            }
        };
        Ok(SolveResult {
            outcome,
            configs: self.trace.configs.clone(),
            planning_time: planning,
            iterations: self.trace.iterations.len() as u64,
            expansions: self.tree.expansions(),
            explored: self.tree.explored_len(),
        })
    }
}

pub fn run_realtime(problem: &Problem, budget: ExpansionBudget, limits: RunLimits) -> SolveResult {
    match RtSession::new(problem) {
        Ok(mut session) => session
            .run(budget, limits)
            .expect("a planned step is always adjacent to the root"),
        Err(_) => SolveResult::failed(Outcome::Unsolvable, problem.instance().start().clone()),
    }
}

/// Replans from scratch every iteration: a fresh tree rooted at the current
/// configuration, searched under `budget`, then one step towards the goal
/// (if found) or the most recently created node.
pub fn run_naive_realtime(problem: &Problem, budget: ExpansionBudget, limits: RunLimits) -> SolveResult {
    let instance = problem.instance();
    let goal = instance.goal();
    let mut configs = vec![instance.start().clone()];
    let mut planning = Duration::ZERO;
    let mut expansions = 0;
    let mut explored = 0;
    let mut iterations = 0;
    let outcome = loop {
        let current = configs.last().unwrap().clone();
        if &current == goal {
            break Outcome::Success;
        }
        if configs.len() as u64 > limits.step_limit {
            break Outcome::StepLimit;
        }
        if planning > limits.cumulative_timeout {
            break Outcome::Timeout;
        }
        let started = Instant::now();
        let deadline = started + (limits.cumulative_timeout - planning);
        let mut tree = match SearchTree::from_config(problem, current.clone()) {
            Ok(t) => t,
            Err(_) => break Outcome::Unsolvable,
        };
        let mut target = None;
        let mut stop = None;
        loop {
            match tree.expand_once() {
                ExpansionOutcome::GoalFound(id) => {
                    target = Some(id);
                    break;
                }
                ExpansionOutcome::OpenExhausted => {
                    stop = Some(Outcome::Unsolvable);
                    break;
                }
                ExpansionOutcome::Progressed(_) => {
                    if budget.exhausted(tree.expansions(), started) {
                        break;
                    }
                    if Instant::now() > deadline {
                        stop = Some(Outcome::Timeout);
                        break;
                    }
                }
            }
        }
        planning += started.elapsed();
        expansions += tree.expansions();
        explored = tree.explored_len();
        iterations += 1;
        if let Some(o) = stop {
            break o;
        }
        let target = target.unwrap_or(tree.last_created());
        let next = tree.first_step_towards(target).unwrap_or(current);
        debug_assert!(valid_transition(instance.map(), configs.last().unwrap(), &next));
        configs.push(next);
    };
    SolveResult {
        outcome,
        configs,
        planning_time: planning,
        iterations,
        expansions,
        explored,
    }
}
