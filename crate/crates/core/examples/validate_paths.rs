//! Writes a solution as a path file, reads it back and validates it, then
//! corrupts one step and shows the violations the validator reports.
//!
//!     cargo run --example validate_paths

use std::time::Duration;

use rtlacam::paths::{dump_paths, read_paths};
use rtlacam::validate::validate;
use rtlacam::{solve_full_horizon, GridMap, Instance, Problem, Vertex};

fn main() -> rtlacam::Result<()> {
    let map = GridMap::from_ascii(&["....", ".@@.", "...."]);
    let pairs = [
        (Vertex::new(0, 0), Vertex::new(3, 2)),
        (Vertex::new(3, 2), Vertex::new(0, 0)),
        (Vertex::new(3, 0), Vertex::new(0, 2)),
    ];
    let problem = Problem::new(Instance::new(map, &pairs)?);
    let result = solve_full_horizon(&problem, Duration::from_secs(5));
    println!("lacam: {} in {} steps", result.outcome, result.configs.len() - 1);

    let file = std::env::temp_dir().join("rtlacam-example.paths");
    dump_paths(&result.configs, &file)?;
    let mut configs = read_paths(&file)?;
    print!("{}", std::fs::read_to_string(&file)?);
    let report = validate(problem.instance(), &configs);
    println!("valid {}  cost {}  normalized {:.3}", report.valid, report.cost, report.normalized_cost.value);

    // teleport agent 0 straight to its goal at t = 1
    let mut bent = configs[1].to_vec();
    bent[0] = Vertex::new(3, 2);
    configs[1] = bent.into();
    let report = validate(problem.instance(), &configs);
    println!("after corrupting t=1: valid {}", report.valid);
    for v in &report.violations {
        println!("  {v}");
    }
    Ok(())
}
