//! Loads a MovingAI map and scenario and compares the four solvers on it.
//!
//!     cargo run --release --example solve_scenario [MAP SCEN AGENTS]
//!
//! Defaults to the bundled random-32-32-20 data with 100 agents.

use std::path::PathBuf;
use std::sync::Arc;

use rtlacam::movingai::{read_map, read_scenario};
use rtlacam::validate::validate_with_tables;
use rtlacam::{solve, ExpansionBudget, Problem, RunLimits, Solver};

fn main() -> rtlacam::Result<()> {
    let data = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data");
    let mut args = std::env::args().skip(1);
    let map_path = args.next().map_or_else(|| data.join("random-32-32-20.map"), PathBuf::from);
    let scen_path = args
        .next()
        .map_or_else(|| data.join("random-32-32-20-random-1.scen"), PathBuf::from);
    let agents: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(100);

    let map = Arc::new(read_map(&map_path)?);
    let problem = Problem::new(read_scenario(&scen_path, map, agents)?);
    let limits = RunLimits::for_problem(&problem);
    println!("{} agents, lower bound {:?}", agents, problem.lower_bound());

    for solver in Solver::ALL {
        let result = solve(&problem, solver, ExpansionBudget::Expansions(1), limits);
        print!(
            "{:<15} {:<10} steps {:>5}  expansions {:>7}  time {:>8.3}s",
            solver.as_str(),
            result.outcome.as_str(),
            result.configs.len() - 1,
            result.expansions,
            result.planning_time.as_secs_f64()
        );
        if result.is_success() {
            let report = validate_with_tables(problem.instance(), &result.configs, problem.tables());
            print!("  cost {}  normalized {:.3}", report.cost, report.normalized_cost.value);
        }
        println!();
    }
    Ok(())
}
