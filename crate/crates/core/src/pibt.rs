//! Priority Inheritance with Backtracking (PIBT) as a one-step configuration
//! generator.
//!
//! Given the current configuration, a set of positional constraints and the
//! agents' priorities, [`ConfigGenerator::generate`] returns one successor
//! configuration that is collision free and honors every constraint, or
//! `None` if the constrained subproblem has no PIBT solution. Unconstrained
//! agents pick vertices in the order given by an [`ActionRanker`]; an agent
//! that wants a vertex held by a not-yet-planned agent lends it its priority
//! and waits for it to move out first.

use std::cmp::Reverse;
use std::collections::HashMap;
use std::fs;
use std::path::Path;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::{valid_transition, Configuration};
use crate::error::{Error, Result};
use crate::grid::{Action, GridMap, Vertex};
use crate::heuristic::DistanceTable;
use crate::instance::{AgentId, Instance};

/// Forces `agent` onto `vertex` in the generated successor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Constraint {
    pub agent: AgentId,
    pub vertex: Vertex,
}

/// Per-agent PIBT priorities: the number of steps since the agent was last at
/// its goal. Higher elapsed goes first, ties go to the lower agent id.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PriorityState {
    elapsed: Vec<u32>,
}

impl PriorityState {
    pub fn new(num_agents: usize) -> Self {
        PriorityState {
            elapsed: vec![0; num_agents],
        }
    }

    pub fn from_elapsed(elapsed: Vec<u32>) -> Self {
        PriorityState { elapsed }
    }

    pub fn elapsed(&self, agent: AgentId) -> u32 {
        self.elapsed[agent]
    }

    /// Agents from highest to lowest priority.
    pub fn order(&self) -> Vec<AgentId> {
        let mut order: Vec<AgentId> = (0..self.elapsed.len()).collect();
        order.sort_by_key(|&i| (Reverse(self.elapsed[i]), i));
        order
    }

    /// Priorities after moving to `config`.
    pub fn updated(&self, config: &Configuration, goals: &Configuration) -> Self {
        let elapsed = self
            .elapsed
            .iter()
            .zip(config.iter().zip(goals.iter()))
            .map(|(&e, (v, g))| if v == g { 0 } else { e.saturating_add(1) })
            .collect();
        PriorityState { elapsed }
    }
}

pub fn update_priorities(
    priorities: &PriorityState,
    new_config: &Configuration,
    goals: &Configuration,
) -> PriorityState {
    priorities.updated(new_config, goals)
}

/// Orders an agent's candidate next vertices from most to least preferred.
///
/// Implementations must only permute `candidates`, which arrive in canonical
/// action order, and must be deterministic.
pub trait ActionRanker: Send + Sync {
    fn rank(&self, agent: AgentId, current: Vertex, candidates: &mut [Vertex]);
}

/// Greedy ranking by distance to goal.
#[derive(Clone, Debug)]
pub struct DistanceRanker {
    tables: Arc<Vec<DistanceTable>>,
    seed: Option<u64>,
}

impl DistanceRanker {
    pub fn new(tables: Arc<Vec<DistanceTable>>) -> Self {
        DistanceRanker { tables, seed: None }
    }

    /// Breaks distance ties with a shuffle seeded by `seed`, the agent and
    /// its current vertex instead of the canonical action order.
    pub fn with_seed(mut self, seed: Option<u64>) -> Self {
        self.seed = seed;
        self
    }

    pub fn tables(&self) -> &Arc<Vec<DistanceTable>> {
        &self.tables
    }
}

impl ActionRanker for DistanceRanker {
    fn rank(&self, agent: AgentId, current: Vertex, candidates: &mut [Vertex]) {
        if let Some(seed) = self.seed {
            let key = seed
                ^ (agent as u64).rotate_left(32)
                ^ ((current.x as u64) << 16)
                ^ current.y as u64;
            candidates.shuffle(&mut ChaCha8Rng::seed_from_u64(key));
        }
        let table = &self.tables[agent];
        candidates.sort_by_key(|&v| table.raw(v));
    }
}

pub fn distance_ranker(tables: Arc<Vec<DistanceTable>>) -> DistanceRanker {
    DistanceRanker::new(tables)
}

/// Per-(agent, vertex) action weights, in canonical action order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PolicyTable {
    weights: HashMap<(AgentId, Vertex), [f64; 5]>,
}

impl PolicyTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, agent: AgentId, at: Vertex, weights: [f64; 5]) -> Result<()> {
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
            return Err(Error::PolicyFormat {
                line: 0,
                msg: format!("weight {w} for agent {agent} at {at} is not a nonnegative number"),
            });
        }
        self.weights.insert((agent, at), weights);
        Ok(())
    }

    pub fn get(&self, agent: AgentId, at: Vertex) -> Option<&[f64; 5]> {
        self.weights.get(&(agent, at))
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Reads `agent_id x y w_stay w_up w_right w_down w_left` lines. Blank
    /// lines and lines starting with `#` are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut table = PolicyTable::new();
        for (i, line) in text.lines().enumerate() {
            let ln = i + 1;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |msg: String| Error::PolicyFormat { line: ln, msg };
            let cols: Vec<&str> = line.split_whitespace().collect();
            if cols.len() != 8 {
                return Err(err(format!("expected 8 columns, found {}", cols.len())));
            }
            let int = |s: &str| s.parse::<u32>().map_err(|_| err(format!("bad integer `{s}`")));
            let agent = int(cols[0])? as AgentId;
            let at = Vertex::new(int(cols[1])?, int(cols[2])?);
            let mut w = [0.0; 5];
            for (k, slot) in w.iter_mut().enumerate() {
                let s = cols[3 + k];
                *slot = s.parse::<f64>().map_err(|_| err(format!("bad weight `{s}`")))?;
            }
            table
                .insert(agent, at, w)
                .map_err(|e| err(e.to_string()))?;
        }
        Ok(table)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&fs::read_to_string(path)?)
    }

    /// Lines sorted by agent, then row, then column.
    pub fn serialize(&self) -> String {
        let mut keys: Vec<_> = self.weights.keys().copied().collect();
        keys.sort_by_key(|&(a, v)| (a, v.y, v.x));
        let mut out = String::new();
        for (a, v) in keys {
            let w = &self.weights[&(a, v)];
            out.push_str(&format!(
                "{a} {} {} {:e} {:e} {:e} {:e} {:e}\n",
                v.x, v.y, w[0], w[1], w[2], w[3], w[4]
            ));
        }
        out
    }

    /// A greedy policy equal to `softmax(-dist)` over each agent's available
    /// actions at every passable cell. Unavailable actions and unreachable
    /// targets get weight zero.
    pub fn from_distance_tables(instance: &Instance, tables: &[DistanceTable]) -> Self {
        let map = instance.map();
        let mut table = PolicyTable::new();
        for (agent, dist) in tables.iter().enumerate() {
            for v in map.passable_cells() {
                let ds: Vec<Option<u32>> = Action::ALL
                    .iter()
                    .map(|&a| map.apply(v, a).and_then(|u| dist.get(u)))
                    .collect();
                let Some(best) = ds.iter().flatten().min().copied() else {
                    continue;
                };
                let mut w = [0.0; 5];
                for (slot, d) in w.iter_mut().zip(&ds) {
                    if let Some(d) = d {
                        *slot = (-f64::from(d - best)).exp();
                    }
                }
                let total: f64 = w.iter().sum();
                w.iter_mut().for_each(|x| *x /= total);
                table.weights.insert((agent, v), w);
            }
        }
        table
    }
}

/// Ranks by descending policy weight; cells without an entry fall back to
/// distance ranking.
#[derive(Clone, Debug)]
pub struct PolicyRanker {
    policy: PolicyTable,
    fallback: DistanceRanker,
}

impl PolicyRanker {
    pub fn new(policy: PolicyTable, fallback: DistanceRanker) -> Self {
        PolicyRanker { policy, fallback }
    }
}

impl ActionRanker for PolicyRanker {
    fn rank(&self, agent: AgentId, current: Vertex, candidates: &mut [Vertex]) {
        match self.policy.get(agent, current) {
            Some(w) => candidates.sort_by(|&a, &b| {
                let wa = Action::between(current, a).map_or(0.0, |x| w[x.index()]);
                let wb = Action::between(current, b).map_or(0.0, |x| w[x.index()]);
                wb.total_cmp(&wa)
            }),
            None => self.fallback.rank(agent, current, candidates),
        }
    }
}

pub fn policy_ranker(policy: PolicyTable, fallback: DistanceRanker) -> PolicyRanker {
    PolicyRanker::new(policy, fallback)
}

const NONE: u32 = u32::MAX;

/// Reusable PIBT state for one map. The output of [`generate`] depends only
/// on its arguments; the scratch buffers are reset on every call.
///
/// [`generate`]: ConfigGenerator::generate
pub struct ConfigGenerator {
    map: Arc<GridMap>,
    ranker: Arc<dyn ActionRanker>,
    occupied_now: Vec<u32>,
    occupied_next: Vec<u32>,
}

impl ConfigGenerator {
    pub fn new(map: Arc<GridMap>, ranker: Arc<dyn ActionRanker>) -> Self {
        let cells = map.num_cells();
        ConfigGenerator {
            map,
            ranker,
            occupied_now: vec![NONE; cells],
            occupied_next: vec![NONE; cells],
        }
    }

    pub fn map(&self) -> &Arc<GridMap> {
        &self.map
    }

    pub fn ranker(&self) -> &Arc<dyn ActionRanker> {
        &self.ranker
    }

    pub fn generate(
        &mut self,
        config: &Configuration,
        constraints: &[Constraint],
        priorities: &PriorityState,
    ) -> Option<Configuration> {
        let mut next: Vec<Option<Vertex>> = vec![None; config.len()];
        for (i, &v) in config.iter().enumerate() {
            let c = self.map.index(v);
            self.occupied_now[c] = i as u32;
        }
        let result = self.plan(config, constraints, priorities, &mut next);
        for &v in config.iter() {
            let c = self.map.index(v);
            self.occupied_now[c] = NONE;
        }
        for v in next.iter().flatten() {
            let c = self.map.index(*v);
            self.occupied_next[c] = NONE;
        }
        if !result {
            return None;
        }
        let out: Configuration = next.into_iter().map(|v| v.unwrap()).collect::<Vec<_>>().into();
        // PIBT never produces a conflict here; the check keeps the collision
        // shield unconditional for arbitrary rankers.
        valid_transition(&self.map, config, &out).then_some(out)
    }

    fn plan(
        &mut self,
        config: &Configuration,
        constraints: &[Constraint],
        priorities: &PriorityState,
        next: &mut [Option<Vertex>],
    ) -> bool {
        for c in constraints {
            let from = config[c.agent];
            if next[c.agent].is_some() || !self.map.is_move(from, c.vertex) {
                return false;
            }
            let cell = self.map.index(c.vertex);
            if self.occupied_next[cell] != NONE {
                return false;
            }
            let occupant = self.occupied_now[cell];
            if occupant != NONE && next[occupant as usize] == Some(from) {
                return false;
            }
            self.occupied_next[cell] = c.agent as u32;
            next[c.agent] = Some(c.vertex);
        }
        for agent in priorities.order() {
            if next[agent].is_none() && !self.pibt(agent, config, next) {
                return false;
            }
        }
        true
    }

    fn pibt(&mut self, agent: AgentId, config: &Configuration, next: &mut [Option<Vertex>]) -> bool {
        let here = config[agent];
        let mut candidates = self.map.neighbors(here);
        self.ranker.rank(agent, here, &mut candidates);
        for u in candidates {
            let cell = self.map.index(u);
            if self.occupied_next[cell] != NONE {
                continue;
            }
            let occupant = self.occupied_now[cell];
            // swap with an agent already moving onto our vertex
            if occupant != NONE && occupant as usize != agent && next[occupant as usize] == Some(here) {
                continue;
            }
            self.occupied_next[cell] = agent as u32;
            next[agent] = Some(u);
            if occupant == NONE || occupant as usize == agent {
                return true;
            }
            let occupant = occupant as usize;
            if next[occupant].is_none() && !self.pibt(occupant, config, next) {
                continue;
            }
            return true;
        }
        let cell = self.map.index(here);
        self.occupied_next[cell] = agent as u32;
        next[agent] = Some(here);
        false
    }
}

/// One-shot convenience wrapper around [`ConfigGenerator::generate`].
pub fn generate(
    map: Arc<GridMap>,
    config: &Configuration,
    constraints: &[Constraint],
    priorities: &PriorityState,
    ranker: Arc<dyn ActionRanker>,
) -> Option<Configuration> {
    ConfigGenerator::new(map, ranker).generate(config, constraints, priorities)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: u32, y: u32) -> Vertex {
        Vertex::new(x, y)
    }

    fn setup(map: GridMap, pairs: &[(Vertex, Vertex)]) -> (Instance, Arc<Vec<DistanceTable>>) {
        let inst = Instance::new(map, pairs).unwrap();
        let tables = Arc::new(DistanceTable::for_instance(&inst));
        (inst, tables)
    }

    fn gen(inst: &Instance, tables: &Arc<Vec<DistanceTable>>) -> ConfigGenerator {
        ConfigGenerator::new(inst.shared_map(), Arc::new(DistanceRanker::new(tables.clone())))
    }

    #[test]
    fn single_agent_descends() {
        let (inst, tables) = setup(GridMap::empty(5, 5), &[(v(0, 0), v(3, 2))]);
        let mut g = gen(&inst, &tables);
        let next = g.generate(inst.start(), &[], &PriorityState::new(1)).unwrap();
        assert_eq!(tables[0].get(next[0]), Some(tables[0].get(v(0, 0)).unwrap() - 1));
    }

    #[test]
    fn constraint_forces_stay() {
        let (inst, tables) = setup(GridMap::empty(5, 5), &[(v(0, 0), v(3, 2))]);
        let mut g = gen(&inst, &tables);
        let c = [Constraint { agent: 0, vertex: v(0, 0) }];
        let next = g.generate(inst.start(), &c, &PriorityState::new(1)).unwrap();
        assert_eq!(&next, inst.start());
    }

    #[test]
    fn contradictory_constraints_fail() {
        let (inst, tables) = setup(GridMap::empty(3, 1), &[(v(0, 0), v(2, 0)), (v(1, 0), v(0, 0))]);
        let mut g = gen(&inst, &tables);
        let p = PriorityState::new(2);
        let same = [Constraint { agent: 0, vertex: v(1, 0) }, Constraint { agent: 1, vertex: v(1, 0) }];
        assert!(g.generate(inst.start(), &same, &p).is_none());
        let swap = [Constraint { agent: 0, vertex: v(1, 0) }, Constraint { agent: 1, vertex: v(0, 0) }];
        assert!(g.generate(inst.start(), &swap, &p).is_none());
        let far = [Constraint { agent: 0, vertex: v(2, 0) }];
        assert!(g.generate(inst.start(), &far, &p).is_none());
        // agent 1 is left with nowhere valid to go
        let pinned = [Constraint { agent: 0, vertex: v(1, 0) }];
        let next = g.generate(inst.start(), &pinned, &p).unwrap();
        assert_eq!(next.positions(), &[v(1, 0), v(2, 0)]);
        // the generator reports failure rather than a colliding successor
        let blocked = [Constraint { agent: 0, vertex: v(1, 0) }, Constraint { agent: 1, vertex: v(1, 0) }];
        assert!(g.generate(inst.start(), &blocked, &p).is_none());
    }

    // All valid successors of `from`, by brute-force enumeration.
    fn all_successors(map: &GridMap, from: &Configuration) -> Vec<Configuration> {
        let mut out = vec![vec![]];
        for &p in from.iter() {
            out = out
                .into_iter()
                .flat_map(|prefix: Vec<Vertex>| {
                    map.neighbors(p).into_iter().map(move |u| {
                        let mut next = prefix.clone();
                        next.push(u);
                        next
                    })
                })
                .collect();
        }
        out.into_iter()
            .map(Configuration::from)
            .filter(|c| valid_transition(map, from, c))
            .collect()
    }

    #[test]
    fn head_on_corridor_pushes_lower_priority() {
        // agent 0 (higher priority by id) walks right; agent 1 is in its way
        let (inst, tables) = setup(GridMap::empty(4, 1), &[(v(1, 0), v(3, 0)), (v(2, 0), v(0, 0))]);
        let mut g = gen(&inst, &tables);
        let next = g.generate(inst.start(), &[], &PriorityState::new(2)).unwrap();
        assert!(all_successors(inst.map(), inst.start()).contains(&next));
        assert_eq!(next.positions(), &[v(2, 0), v(3, 0)]);
        assert!(tables[0].get(next[0]) < tables[0].get(inst.start()[0]));

        // with agent 1 ahead in priority the roles flip
        let p = PriorityState::from_elapsed(vec![0, 1]);
        let next = g.generate(inst.start(), &[], &p).unwrap();
        assert!(all_successors(inst.map(), inst.start()).contains(&next));
        assert_eq!(next.positions(), &[v(0, 0), v(1, 0)]);
    }

    #[test]
    fn priorities_update_and_order() {
        let goals: Configuration = vec![v(0, 0), v(1, 0), v(2, 0)].into();
        let at: Configuration = vec![v(0, 0), v(1, 1), v(2, 1)].into();
        let p = PriorityState::from_elapsed(vec![5, 3, 3]).updated(&at, &goals);
        assert_eq!(p.elapsed(0), 0);
        assert_eq!(p.elapsed(1), 4);
        assert_eq!(p.order(), vec![1, 2, 0]);
    }

    #[test]
    fn distance_ranker_sorts_stably() {
        let m = GridMap::empty(3, 3);
        let t = DistanceTable::backward_bfs(&m, v(2, 1));
        let r = DistanceRanker::new(Arc::new(vec![t]));
        let mut c = m.neighbors(v(1, 1));
        r.rank(0, v(1, 1), &mut c);
        // dists in action order are [1, 2, 0, 2, 2]
        assert_eq!(c, vec![v(2, 1), v(1, 1), v(1, 0), v(1, 2), v(0, 1)]);

        let walled = GridMap::from_ascii(&["..@.", "..@.", "..@."]);
        let t = DistanceTable::backward_bfs(&walled, v(3, 0));
        let r = DistanceRanker::new(Arc::new(vec![t]));
        let mut c = walled.neighbors(v(0, 1));
        let before = c.clone();
        r.rank(0, v(0, 1), &mut c);
        assert_eq!(c, before);
    }

    #[test]
    fn seeded_ranker_is_repeatable() {
        let m = GridMap::empty(5, 5);
        let t = Arc::new(vec![DistanceTable::backward_bfs(&m, v(4, 4))]);
        let a = DistanceRanker::new(t.clone()).with_seed(Some(7));
        let b = DistanceRanker::new(t).with_seed(Some(7));
        for cell in m.passable_cells() {
            let mut x = m.neighbors(cell);
            let mut y = x.clone();
            a.rank(0, cell, &mut x);
            b.rank(0, cell, &mut y);
            assert_eq!(x, y);
        }
    }

    #[test]
    fn policy_ranker_orders_by_weight() {
        let m = GridMap::empty(3, 3);
        let t = Arc::new(vec![DistanceTable::backward_bfs(&m, v(2, 1))]);
        let mut policy = PolicyTable::new();
        policy.insert(0, v(1, 1), [0.9, 0.0, 0.05, 0.05, 0.0]).unwrap();
        policy.insert(0, v(1, 0), [0.2; 5]).unwrap();
        let r = PolicyRanker::new(policy, DistanceRanker::new(t));
        let mut c = m.neighbors(v(1, 1));
        r.rank(0, v(1, 1), &mut c);
        assert_eq!(c[0], v(1, 1));
        let mut c = m.neighbors(v(1, 0));
        let before = c.clone();
        r.rank(0, v(1, 0), &mut c);
        assert_eq!(c, before);
        // no entry: distance fallback
        let mut c = m.neighbors(v(0, 1));
        r.rank(0, v(0, 1), &mut c);
        assert_eq!(c[0], v(1, 1));
    }

    #[test]
    fn policy_table_parse_errors() {
        assert!(PolicyTable::parse("0 1 1 0.1 0.2 0.3 0.4 0.5\n# note\n").is_ok());
        assert!(matches!(
            PolicyTable::parse("0 1 1 0.1 0.2 0.3 0.4\n"),
            Err(Error::PolicyFormat { line: 1, .. })
        ));
        assert!(matches!(
            PolicyTable::parse("\n0 1 1 0.1 -0.2 0.3 0.4 0.5\n"),
            Err(Error::PolicyFormat { line: 2, .. })
        ));
    }

    #[test]
    fn policy_table_text_round_trip() {
        let (inst, tables) = setup(GridMap::from_ascii(&["...", ".@.", "..."]), &[(v(0, 0), v(2, 2))]);
        let p = PolicyTable::from_distance_tables(&inst, &tables);
        assert_eq!(PolicyTable::parse(&p.serialize()).unwrap(), p);
    }
}
