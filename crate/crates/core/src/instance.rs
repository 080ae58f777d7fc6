use std::collections::HashMap;
use std::sync::Arc;

use crate::config::Configuration;
use crate::error::{Error, Result};
use crate::grid::{GridMap, Vertex};

pub type AgentId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AgentTask {
    pub id: AgentId,
    pub start: Vertex,
    pub goal: Vertex,
}

/// A MAPF problem: a map plus one start/goal pair per agent.
///
/// Immutable once built; the map is shared behind an `Arc` so instances with
/// different agent counts on one map stay cheap.
#[derive(Clone, Debug)]
pub struct Instance {
    map: Arc<GridMap>,
    tasks: Vec<AgentTask>,
    start: Configuration,
    goal: Configuration,
}

impl Instance {
    /// Validates and builds an instance from `(start, goal)` pairs in agent order.
    pub fn new(map: impl Into<Arc<GridMap>>, pairs: &[(Vertex, Vertex)]) -> Result<Self> {
        let map = map.into();
        let mut starts: HashMap<Vertex, AgentId> = HashMap::new();
        let mut goals: HashMap<Vertex, AgentId> = HashMap::new();
        for (id, &(s, g)) in pairs.iter().enumerate() {
            for (what, v) in [("start", s), ("goal", g)] {
                if !map.in_bounds(v) {
                    return Err(invalid(id, format!("{what} {v} is out of bounds")));
                }
                if !map.is_passable(v) {
                    return Err(invalid(id, format!("{what} {v} is blocked")));
                }
            }
            if let Some(other) = starts.insert(s, id) {
                return Err(invalid(id, format!("start {s} shared with agent {other}")));
            }
            if let Some(other) = goals.insert(g, id) {
                return Err(invalid(id, format!("goal {g} shared with agent {other}")));
            }
        }
        let tasks: Vec<AgentTask> = pairs
            .iter()
            .enumerate()
            .map(|(id, &(start, goal))| AgentTask { id, start, goal })
            .collect();
        Ok(Instance {
            map,
            start: tasks.iter().map(|t| t.start).collect::<Vec<_>>().into(),
            goal: tasks.iter().map(|t| t.goal).collect::<Vec<_>>().into(),
            tasks,
        })
    }

    pub fn map(&self) -> &GridMap {
        &self.map
    }

    pub fn shared_map(&self) -> Arc<GridMap> {
        Arc::clone(&self.map)
    }

    pub fn tasks(&self) -> &[AgentTask] {
        &self.tasks
    }

    pub fn num_agents(&self) -> usize {
        self.tasks.len()
    }

    pub fn start(&self) -> &Configuration {
        &self.start
    }

    pub fn goal(&self) -> &Configuration {
        &self.goal
    }

    /// The same map and tasks starting from `start` instead.
    pub fn with_start(&self, start: Configuration) -> Self {
        assert_eq!(start.len(), self.num_agents());
        let tasks = self
            .tasks
            .iter()
            .zip(start.iter())
            .map(|(t, &s)| AgentTask { start: s, ..*t })
            .collect();
        Instance {
            map: Arc::clone(&self.map),
            tasks,
            start,
            goal: self.goal.clone(),
        }
    }
}

fn invalid(agent: AgentId, msg: String) -> Error {
    Error::InvalidAgent { agent, msg }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_shared_goal_and_blocked_start() {
        let m = GridMap::from_ascii(&["..@", "..."]);
        let v = Vertex::new;
        let err = Instance::new(m.clone(), &[(v(0, 0), v(1, 1)), (v(1, 0), v(1, 1))]).unwrap_err();
        assert!(matches!(err, Error::InvalidAgent { agent: 1, .. }));
        let err = Instance::new(m, &[(v(0, 0), v(1, 1)), (v(2, 0), v(0, 1))]).unwrap_err();
        assert!(matches!(err, Error::InvalidAgent { agent: 1, .. }), "{err}");
    }
}
