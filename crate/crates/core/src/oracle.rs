//! Exhaustive joint-space search for small instances. Used as ground truth.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, VecDeque};

use thiserror::Error;

use crate::config::{step_cost, valid_transition, Configuration};
use crate::grid::Vertex;
use crate::instance::Instance;

pub const DEFAULT_STATE_CAP: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleSolution {
    /// Minimum sum of step costs (goal waits are free).
    pub cost: u64,
    /// Minimum number of timesteps to reach the goal configuration.
    pub makespan: u64,
    /// Distinct joint states seen by the larger of the two searches.
    pub states: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("joint state space exceeds the cap of {0} states")]
    TooLarge(usize),
    #[error("goal configuration is unreachable")]
    Unsolvable,
}

/// Every valid joint successor of `from`, stay moves included.
pub fn joint_successors(instance: &Instance, from: &Configuration) -> Vec<Configuration> {
    let map = instance.map();
    let options: Vec<Vec<Vertex>> = from.iter().map(|&v| map.neighbors(v)).collect();
    let mut out = Vec::new();
    let mut partial = Vec::with_capacity(from.len());
    fn rec(
        options: &[Vec<Vertex>],
        from: &Configuration,
        partial: &mut Vec<Vertex>,
        out: &mut Vec<Vec<Vertex>>,
    ) {
        let i = partial.len();
        if i == options.len() {
            out.push(partial.clone());
            return;
        }
        for &u in &options[i] {
            // prune vertex and swap conflicts with agents already placed
            let clash = partial
                .iter()
                .enumerate()
                .any(|(j, &w)| w == u || (w == from[i] && u == from[j]));
            if !clash {
                partial.push(u);
                rec(options, from, partial, out);
                partial.pop();
            }
        }
    }
    rec(&options, from, &mut partial, &mut out);
    out.into_iter()
        .map(Configuration::from)
        .filter(|c| valid_transition(map, from, c))
        .collect()
}

/// Optimal cost and makespan by uniform-cost search and breadth-first
/// search over joint configurations.
pub fn joint_bfs_oracle(instance: &Instance, state_cap: usize) -> Result<OracleSolution, OracleError> {
    let start = instance.start().clone();
    let goal = instance.goal().clone();

    let mut depth: HashMap<Configuration, u64> = HashMap::from([(start.clone(), 0)]);
    let mut queue = VecDeque::from([start.clone()]);
    let mut makespan = None;
    while let Some(c) = queue.pop_front() {
        let d = depth[&c];
        if c == goal {
            makespan = Some(d);
            break;
        }
        for s in joint_successors(instance, &c) {
            if !depth.contains_key(&s) {
                if depth.len() >= state_cap {
                    return Err(OracleError::TooLarge(state_cap));
                }
                depth.insert(s.clone(), d + 1);
                queue.push_back(s);
            }
        }
    }
    let makespan = makespan.ok_or(OracleError::Unsolvable)?;
    let bfs_states = depth.len();
    drop(depth);

    let mut best: HashMap<Configuration, u64> = HashMap::from([(start.clone(), 0)]);
    let mut heap = BinaryHeap::from([Reverse((0u64, start))]);
    while let Some(Reverse((g, c))) = heap.pop() {
        if best.get(&c).is_some_and(|&b| b < g) {
            continue;
        }
        if c == goal {
            return Ok(OracleSolution {
                cost: g,
                makespan,
                states: bfs_states.max(best.len()),
            });
        }
        for s in joint_successors(instance, &c) {
            let ng = g + step_cost(&goal, &c, &s);
            if best.get(&s).is_none_or(|&b| ng < b) {
                if !best.contains_key(&s) && best.len() >= state_cap {
                    return Err(OracleError::TooLarge(state_cap));
                }
                best.insert(s.clone(), ng);
                heap.push(Reverse((ng, s)));
            }
        }
    }
    Err(OracleError::Unsolvable)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridMap;

    fn v(x: u32, y: u32) -> Vertex {
        Vertex::new(x, y)
    }

    #[test]
    fn single_agent_is_manhattan() {
        let inst = Instance::new(GridMap::empty(5, 4), &[(v(0, 3), v(4, 0))]).unwrap();
        let s = joint_bfs_oracle(&inst, DEFAULT_STATE_CAP).unwrap();
        assert_eq!(s.cost, 7);
        assert_eq!(s.makespan, 7);
    }

    #[test]
    fn two_cell_swap_is_unsolvable() {
        let inst = Instance::new(GridMap::empty(2, 1), &[(v(0, 0), v(1, 0)), (v(1, 0), v(0, 0))]).unwrap();
        assert_eq!(joint_bfs_oracle(&inst, DEFAULT_STATE_CAP), Err(OracleError::Unsolvable));
    }

    #[test]
    fn bulge_swap_has_finite_optimum() {
        // corridor of length 4 with a bulge above x = 1
        let m = GridMap::from_ascii(&["@.@@", "...."]);
        let inst = Instance::new(m, &[(v(0, 1), v(3, 1)), (v(3, 1), v(0, 1))]).unwrap();
        let s = joint_bfs_oracle(&inst, DEFAULT_STATE_CAP).unwrap();
        // Agent 0 ducks into the bulge (2 moves), lets agent 1 pass (3 moves),
        // then steps out and walks to the far end (3 more moves).
        assert_eq!(s.cost, 8);
        assert_eq!(s.makespan, 5);
        assert!(joint_bfs_oracle(&inst, 3).is_err());
    }

    #[test]
    fn cap_is_enforced() {
        let inst = Instance::new(GridMap::empty(8, 8), &[(v(0, 0), v(7, 7)), (v(7, 7), v(0, 0))]).unwrap();
        assert_eq!(joint_bfs_oracle(&inst, 50), Err(OracleError::TooLarge(50)));
    }
}
