//! Per-agent distance-to-goal tables.

use std::collections::VecDeque;

use crate::grid::{GridMap, Vertex};
use crate::instance::Instance;

const UNREACHABLE: u32 = u32::MAX;

/// Exact shortest-path distance from every cell to one goal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceTable {
    goal: Vertex,
    width: u32,
    dist: Vec<u32>,
}

impl DistanceTable {
    /// Breadth-first search outward from `goal`. All moves cost one, so this
    /// equals a backward Dijkstra.
    pub fn backward_bfs(map: &GridMap, goal: Vertex) -> Self {
        let mut dist = vec![UNREACHABLE; map.num_cells()];
        let mut queue = VecDeque::new();
        if map.is_passable(goal) {
            dist[map.index(goal)] = 0;
            queue.push_back(goal);
        }
        while let Some(u) = queue.pop_front() {
            let d = dist[map.index(u)] + 1;
            for v in map.neighbors(u).into_iter().skip(1) {
                let slot = &mut dist[map.index(v)];
                if *slot == UNREACHABLE {
                    *slot = d;
                    queue.push_back(v);
                }
            }
        }
        DistanceTable {
            goal,
            width: map.width(),
            dist,
        }
    }

    /// One table per agent, in agent order.
    pub fn for_instance(instance: &Instance) -> Vec<DistanceTable> {
        instance
            .tasks()
            .iter()
            .map(|t| Self::backward_bfs(instance.map(), t.goal))
            .collect()
    }

    pub fn goal(&self) -> Vertex {
        self.goal
    }

    /// Distance to the goal, `None` when unreachable or blocked.
    pub fn get(&self, v: Vertex) -> Option<u32> {
        let d = self.raw(v);
        (d != UNREACHABLE).then_some(d)
    }

    /// Distance with `u32::MAX` standing in for infinity; handy as a sort key.
    pub fn raw(&self, v: Vertex) -> u32 {
        self.dist[v.y as usize * self.width as usize + v.x as usize]
    }

    pub fn reachable(&self, v: Vertex) -> bool {
        self.get(v).is_some()
    }
}

/// Sum of each agent's distance from start to goal, a lower bound on the cost
/// of any solution. `None` if some agent cannot reach its goal.
pub fn sum_of_distances(instance: &Instance, tables: &[DistanceTable]) -> Option<u64> {
    instance
        .tasks()
        .iter()
        .zip(tables)
        .map(|(t, d)| d.get(t.start).map(u64::from))
        .sum()
}
