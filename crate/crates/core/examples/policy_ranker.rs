//! Plugs a per-(agent, vertex) action-weight table into PIBT in place of the
//! distance ranking. The table here is built from the distance heuristic and
//! written to disk, so it stands in for a learned policy's output.
//!
//!     cargo run --release --example policy_ranker

use std::sync::Arc;
use std::time::Duration;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use rtlacam::gen::{random_instance, random_map};
use rtlacam::pibt::{policy_ranker, PolicyTable};
use rtlacam::{run_realtime, ExpansionBudget, Problem, RunLimits};

fn main() -> rtlacam::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let map = random_map(12, 12, 0.2, &mut rng);
    let instance = random_instance(map, 8, &mut rng).expect("map has room for 8 agents");
    let base = Problem::new(instance);

    let table = PolicyTable::from_distance_tables(base.instance(), base.tables());
    let path = std::env::temp_dir().join("rtlacam-policy.txt");
    std::fs::write(&path, table.serialize())?;
    let loaded = PolicyTable::read(&path)?;
    println!("policy table: {} entries written to {}", loaded.len(), path.display());

    let with_policy = base
        .clone()
        .with_ranker(Arc::new(policy_ranker(loaded, base.distance_ranker())));

    let limits = RunLimits::new(Duration::from_secs(10), 10_000);
    for (name, problem) in [("distance", &base), ("policy", &with_policy)] {
        let r = run_realtime(problem, ExpansionBudget::Expansions(1), limits);
        println!(
            "{name:<9} {}  steps {}  expansions {}",
            r.outcome,
            r.configs.len() - 1,
            r.expansions
        );
    }
    Ok(())
}
