//! Compares every solver against the exhaustive joint-space optimum on a
//! handful of tiny random instances.
//!
//!     cargo run --release --example oracle_check

use std::time::Duration;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use rtlacam::gen::{random_instance, random_map};
use rtlacam::oracle::{joint_bfs_oracle, DEFAULT_STATE_CAP};
use rtlacam::validate::solution_cost;
use rtlacam::{solve, ExpansionBudget, Problem, RunLimits, Solver};

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let limits = RunLimits::new(Duration::from_secs(5), 500);
    for k in 0..8 {
        let map = random_map(5, 5, 0.2, &mut rng);
        let Some(instance) = random_instance(map, 3, &mut rng) else {
            continue;
        };
        let problem = Problem::new(instance);
        let optimum = match joint_bfs_oracle(problem.instance(), DEFAULT_STATE_CAP) {
            Ok(s) => s.cost.to_string(),
            Err(e) => e.to_string(),
        };
        print!("#{k}  optimum {optimum:<36}");
        for solver in Solver::ALL {
            let r = solve(&problem, solver, ExpansionBudget::Expansions(1), limits);
            let cost = if r.is_success() {
                solution_cost(problem.instance(), &r.configs).to_string()
            } else {
                r.outcome.to_string()
            };
            print!("  {}={cost}", solver.as_str());
        }
        println!();
    }
}
