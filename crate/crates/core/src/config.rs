//! Joint configurations and the collision rules between consecutive ones.

use std::collections::HashMap;
use std::fmt;
use std::ops::Deref;
use std::sync::Arc;

use crate::grid::{GridMap, Vertex};

/// The positions of all agents at one timestep, indexed by agent id.
///
/// Equality and hashing use the full ordered position list. Clones share
/// storage.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration(Arc<[Vertex]>);

impl Configuration {
    pub fn new(positions: Vec<Vertex>) -> Self {
        Configuration(positions.into())
    }

    pub fn positions(&self) -> &[Vertex] {
        &self.0
    }

    pub fn to_vec(&self) -> Vec<Vertex> {
        self.0.to_vec()
    }

    pub fn num_agents(&self) -> usize {
        self.0.len()
    }

    /// True iff no two agents share a vertex.
    pub fn is_collision_free(&self) -> bool {
        first_vertex_collision(&self.0).is_none()
    }
}

impl Deref for Configuration {
    type Target = [Vertex];

    fn deref(&self) -> &[Vertex] {
        &self.0
    }
}

impl From<Vec<Vertex>> for Configuration {
    fn from(v: Vec<Vertex>) -> Self {
        Configuration(v.into())
    }
}

impl FromIterator<Vertex> for Configuration {
    fn from_iter<I: IntoIterator<Item = Vertex>>(iter: I) -> Self {
        Configuration(iter.into_iter().collect())
    }
}

impl fmt::Debug for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

/// The first pair `(i, j)`, `i < j`, occupying the same vertex.
pub(crate) fn first_vertex_collision(positions: &[Vertex]) -> Option<(usize, usize)> {
    let mut seen: HashMap<Vertex, usize> = HashMap::with_capacity(positions.len());
    for (j, &v) in positions.iter().enumerate() {
        if let Some(&i) = seen.get(&v) {
            return Some((i, j));
        }
        seen.insert(v, j);
    }
    None
}

/// Every pair `(i, j)`, `i < j`, that swaps vertices between `from` and `to`.
pub(crate) fn edge_collisions(from: &[Vertex], to: &[Vertex]) -> Vec<(usize, usize)> {
    let occupant: HashMap<Vertex, usize> = from.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut out = Vec::new();
    for (i, (&fi, &ti)) in from.iter().zip(to).enumerate() {
        if fi == ti {
            continue;
        }
        if let Some(&j) = occupant.get(&ti) {
            if j > i && to[j] == fi {
                out.push((i, j));
            }
        }
    }
    out
}

/// True iff every agent stays or makes one cardinal step onto a passable
/// cell, `to` has no vertex collision and no two agents swap.
pub fn valid_transition(map: &GridMap, from: &Configuration, to: &Configuration) -> bool {
    if from.len() != to.len() {
        return false;
    }
    from.iter().zip(to.iter()).all(|(&a, &b)| map.is_move(a, b))
        && first_vertex_collision(to).is_none()
        && edge_collisions(from, to).is_empty()
}

/// Unit cost per agent, except zero for an agent that stays on its goal.
pub fn step_cost(goals: &Configuration, from: &Configuration, to: &Configuration) -> u64 {
    from.iter()
        .zip(to.iter())
        .zip(goals.iter())
        .filter(|((f, t), g)| !(f == t && t == g))
        .count() as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(v: &[(u32, u32)]) -> Configuration {
        Configuration::new(v.iter().map(|&p| p.into()).collect())
    }

    #[test]
    fn vertex_collision_is_invalid() {
        let m = GridMap::empty(3, 1);
        assert!(!valid_transition(&m, &c(&[(0, 0), (2, 0)]), &c(&[(1, 0), (1, 0)])));
    }

    #[test]
    fn swap_is_invalid() {
        let m = GridMap::empty(3, 1);
        assert!(!valid_transition(&m, &c(&[(0, 0), (1, 0)]), &c(&[(1, 0), (0, 0)])));
    }

    #[test]
    fn one_steps_one_waits() {
        let m = GridMap::empty(3, 1);
        assert!(valid_transition(&m, &c(&[(0, 0), (2, 0)]), &c(&[(1, 0), (2, 0)])));
    }

    #[test]
    fn following_is_valid_but_jumping_is_not() {
        let m = GridMap::empty(4, 1);
        assert!(valid_transition(&m, &c(&[(0, 0), (1, 0)]), &c(&[(1, 0), (2, 0)])));
        assert!(!valid_transition(&m, &c(&[(0, 0)]), &c(&[(2, 0)])));
        let walled = GridMap::from_ascii(&[".@."]);
        assert!(!valid_transition(&walled, &c(&[(0, 0)]), &c(&[(1, 0)])));
    }

    #[test]
    fn step_costs() {
        let goals = c(&[(0, 0), (1, 0), (2, 0)]);
        assert_eq!(step_cost(&goals, &goals, &goals), 0);
        let off = c(&[(0, 1), (1, 1)]);
        assert_eq!(step_cost(&c(&[(0, 0), (1, 0)]), &off, &off), 2);
        let from = c(&[(0, 1), (1, 1), (2, 0)]);
        let to = c(&[(0, 0), (1, 1), (2, 0)]);
        assert_eq!(step_cost(&goals, &from, &to), 2);
    }
}
