//! Drives a real-time LaCAM session by hand: plan under a one-expansion
//! budget, commit the chosen step, and watch the persistent tree grow while
//! its root follows the agents.
//!
//!     cargo run --example realtime_session [CORRIDOR_LENGTH]

use rtlacam::gen::bulge_corridor;
use rtlacam::validate::validate;
use rtlacam::{ExpansionBudget, Problem, RtSession};

fn main() -> rtlacam::Result<()> {
    let length: u32 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(6);
    let problem = Problem::new(bulge_corridor(length));
    let mut session = RtSession::new(&problem)?;
    session.set_audit(true);

    println!("step  positions            explored  open  goal known");
    let mut step = 0;
    while !session.at_goal() {
        let next = match session.plan_iteration(ExpansionBudget::Expansions(1)) {
            Ok(next) => next,
            Err(outcome) => {
                println!("search ended: {outcome}");
                return Ok(());
            }
        };
        session.commit_step(next)?;
        step += 1;
        let tree = session.tree();
        let here: Vec<String> = session.current().iter().map(|v| v.to_string()).collect();
        println!(
            "{step:>4}  {:<20} {:>8}  {:>4}  {}",
            here.join(" "),
            tree.explored_len(),
            tree.open().len(),
            session.goal_path_known()
        );
    }

    let report = validate(problem.instance(), &session.trace().configs);
    println!(
        "reached the goal in {step} steps, {} expansions, cost {}, valid {}",
        session.tree().expansions(),
        report.cost,
        report.valid
    );
    Ok(())
}
