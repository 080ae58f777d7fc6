//! Two agents must pass each other in a corridor with one side pocket.
//! Replanning from scratch with a tiny budget keeps sending both agents
//! towards the same local target and they shuffle forever; keeping the
//! search tree across iterations gets them through.
//!
//!     cargo run --release --example naive_livelock

use std::time::Duration;

use rtlacam::gen::bulge_corridor;
use rtlacam::{solve, ExpansionBudget, Problem, RunLimits, Solver};

fn main() {
    let budget = ExpansionBudget::Expansions(1);
    println!("length  rt-lacam              naive-rt-lacam");
    for length in 4..=10 {
        let problem = Problem::new(bulge_corridor(length));
        let limits = RunLimits::new(Duration::from_secs(10), 2_000);
        let rt = solve(&problem, Solver::RtLacam, budget, limits);
        let naive = solve(&problem, Solver::NaiveRtLacam, budget, limits);
        println!(
            "{length:>6}  {:<10} {:>4} steps  {:<10} {:>4} steps",
            rt.outcome.as_str(),
            rt.configs.len() - 1,
            naive.outcome.as_str(),
            naive.configs.len() - 1
        );
    }
}
