//! Multi-agent path finding on 4-connected grids.
//!
//! The centerpiece is real-time LaCAM ([`realtime`]): LaCAM's lazy
//! depth-first search over joint configurations ([`lacam`]) is grown a little
//! every iteration under a small budget, the agents execute one step, and the
//! persistent search tree is rerooted at their new configuration. Because the
//! tree is never thrown away, the run explores exactly the tree full-horizon
//! LaCAM would, and so inherits its completeness.
//!
//! Alongside it live PIBT ([`pibt`]), the configuration generator LaCAM
//! calls, with pluggable action rankers; a naive replan-from-scratch
//! baseline; MovingAI file support ([`movingai`]); a validator and
//! normalized-cost metric ([`validate`]); an exhaustive joint-space oracle
//! for small instances ([`oracle`]); and a benchmark harness ([`bench`]).
//!
//! ```
//! use std::time::Duration;
//! use rtlacam::{gen, realtime, validate, ExpansionBudget, Problem, RunLimits};
//!
//! let problem = Problem::new(gen::bulge_corridor(6));
//! let limits = RunLimits::new(Duration::from_secs(10), 10_000);
//! let run = realtime::run_realtime(&problem, ExpansionBudget::Expansions(1), limits);
//! assert!(run.is_success());
//! assert!(validate::validate(problem.instance(), &run.configs).valid);
//! ```

pub mod bench;
pub mod config;
pub mod error;
pub mod gen;
pub mod grid;
pub mod heuristic;
pub mod instance;
pub mod lacam;
pub mod movingai;
pub mod oracle;
pub mod paths;
pub mod pibt;
pub mod problem;
pub mod realtime;
pub mod solver;
pub mod validate;

pub use config::{step_cost, valid_transition, Configuration};
pub use error::{Error, Result};
pub use grid::{Action, GridMap, Vertex};
pub use heuristic::DistanceTable;
pub use instance::{AgentId, AgentTask, Instance};
pub use lacam::{solve_full_horizon, ExpansionOutcome, SearchTree};
pub use problem::Problem;
pub use realtime::{run_naive_realtime, run_realtime, ExpansionBudget, RtSession, RunLimits};
pub use solver::{run_pibt, solve, Outcome, SolveResult, Solver};
