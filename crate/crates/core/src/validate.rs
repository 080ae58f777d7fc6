//! Solution checking and cost metrics.

use std::collections::HashMap;
use std::fmt;

use crate::config::{edge_collisions, step_cost, Configuration};
use crate::heuristic::{sum_of_distances, DistanceTable};
use crate::instance::{AgentId, Instance};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ViolationKind {
    /// Two agents on one vertex at the timestep.
    Vertex,
    /// Two agents swap between the timestep and the next.
    Edge,
    /// An agent jumps, or stands on a blocked or out-of-bounds cell.
    Move,
    /// Wrong start or goal, or a configuration of the wrong size.
    Endpoint,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ViolationKind::Vertex => "vertex",
            ViolationKind::Edge => "edge",
            ViolationKind::Move => "move",
            ViolationKind::Endpoint => "endpoint",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Violation {
    pub timestep: usize,
    pub kind: ViolationKind,
    pub agents: Vec<AgentId>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t={} {} agents {:?}", self.timestep, self.kind, self.agents)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolutionReport {
    pub valid: bool,
    pub violations: Vec<Violation>,
    pub cost: u64,
    pub normalized_cost: NormalizedCost,
}

/// Cost divided by the sum of individual shortest path lengths.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormalizedCost {
    pub value: f64,
    /// Set when the lower bound is zero (every agent starts on its goal) or
    /// some goal is unreachable; `value` is then reported as 1.0.
    pub undefined: bool,
}

pub fn normalized_cost(instance: &Instance, cost: u64, tables: &[DistanceTable]) -> NormalizedCost {
    match sum_of_distances(instance, tables) {
        Some(lb) if lb > 0 => NormalizedCost {
            value: cost as f64 / lb as f64,
            undefined: false,
        },
        _ => NormalizedCost {
            value: 1.0,
            undefined: true,
        },
    }
}

/// Checks endpoints, moves and collisions of a configuration sequence and
/// sums its cost. Transition violations are reported at the timestep the
/// transition leaves from.
pub fn validate(instance: &Instance, configs: &[Configuration]) -> SolutionReport {
    let tables = DistanceTable::for_instance(instance);
    validate_with_tables(instance, configs, &tables)
}

pub fn validate_with_tables(instance: &Instance, configs: &[Configuration], tables: &[DistanceTable]) -> SolutionReport {
    let n = instance.num_agents();
    let map = instance.map();
    let mut violations = Vec::new();
    let all: Vec<AgentId> = (0..n).collect();

    let Some(first) = configs.first() else {
        return SolutionReport {
            valid: false,
            violations: vec![Violation {
                timestep: 0,
                kind: ViolationKind::Endpoint,
                agents: all,
            }],
            cost: 0,
            normalized_cost: normalized_cost(instance, 0, tables),
        };
    };

    let mut shaped = true;
    for (t, c) in configs.iter().enumerate() {
        if c.len() != n {
            violations.push(Violation {
                timestep: t,
                kind: ViolationKind::Endpoint,
                agents: all.clone(),
            });
            shaped = false;
        }
    }
    if shaped {
        let mismatched = |c: &Configuration, target: &Configuration| -> Vec<AgentId> {
            (0..n).filter(|&i| c[i] != target[i]).collect()
        };
        let bad_start = mismatched(first, instance.start());
        if !bad_start.is_empty() {
            violations.push(Violation {
                timestep: 0,
                kind: ViolationKind::Endpoint,
                agents: bad_start,
            });
        }
        for (t, c) in configs.iter().enumerate() {
            let off_map: Vec<AgentId> = (0..n).filter(|&i| !map.is_passable(c[i])).collect();
            if !off_map.is_empty() {
                violations.push(Violation {
                    timestep: t,
                    kind: ViolationKind::Move,
                    agents: off_map,
                });
            }
            let mut at: HashMap<_, Vec<AgentId>> = HashMap::new();
            for (i, v) in c.iter().enumerate() {
                at.entry(*v).or_default().push(i);
            }
            let mut clashes: Vec<Vec<AgentId>> = at.into_values().filter(|a| a.len() > 1).collect();
            clashes.sort();
            violations.extend(clashes.into_iter().map(|agents| Violation {
                timestep: t,
                kind: ViolationKind::Vertex,
                agents,
            }));
        }
        for (t, pair) in configs.windows(2).enumerate() {
            let (from, to) = (&pair[0], &pair[1]);
            let jumps: Vec<AgentId> = (0..n)
                .filter(|&i| map.is_passable(to[i]) && !map.is_move(from[i], to[i]))
                .collect();
            if !jumps.is_empty() {
                violations.push(Violation {
                    timestep: t,
                    kind: ViolationKind::Move,
                    agents: jumps,
                });
            }
            violations.extend(edge_collisions(from, to).into_iter().map(|(i, j)| Violation {
                timestep: t,
                kind: ViolationKind::Edge,
                agents: vec![i, j],
            }));
        }
        let last = configs.last().unwrap();
        let bad_goal = mismatched(last, instance.goal());
        if !bad_goal.is_empty() {
            violations.push(Violation {
                timestep: configs.len() - 1,
                kind: ViolationKind::Endpoint,
                agents: bad_goal,
            });
        }
    }

    let cost = if shaped {
        configs
            .windows(2)
            .map(|w| step_cost(instance.goal(), &w[0], &w[1]))
            .sum()
    } else {
        0
    };
    SolutionReport {
        valid: violations.is_empty(),
        violations,
        cost,
        normalized_cost: normalized_cost(instance, cost, tables),
    }
}

/// Sum of per-transition costs; zero for goal waits.
pub fn solution_cost(instance: &Instance, configs: &[Configuration]) -> u64 {
    configs
        .windows(2)
        .map(|w| step_cost(instance.goal(), &w[0], &w[1]))
        .sum()
}
