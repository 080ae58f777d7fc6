//! Runs a solver x agent-count matrix over the bundled scenarios and prints
//! the results CSV, the same table the `rtlacam solve` command writes.
//!
//!     cargo run --release --example bench_sweep [SCENARIO_COUNT]

use std::path::PathBuf;
use std::time::Duration;

use rtlacam::bench::{run_matrix, write_csv, RunSpec};
use rtlacam::{ExpansionBudget, Solver};

fn main() -> rtlacam::Result<()> {
    let data = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data");
    let count: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(3);
    let scens: Vec<PathBuf> = (1..=count)
        .map(|k| data.join(format!("random-32-32-20-random-{k}.scen")))
        .collect();

    let mut records = Vec::new();
    for (solver, budget) in [
        (Solver::Lacam, None),
        (Solver::RtLacam, Some(ExpansionBudget::Expansions(1))),
        (Solver::RtLacam, Some(ExpansionBudget::Expansions(50))),
    ] {
        let mut spec = RunSpec::new(data.join("random-32-32-20.map"), scens.clone(), vec![50, 100], solver);
        spec.budget = budget;
        spec.timeout = Duration::from_secs(60);
        records.extend(run_matrix(&spec)?.into_iter().map(|o| o.record));
    }
    write_csv(&records, std::io::stdout().lock())
}
