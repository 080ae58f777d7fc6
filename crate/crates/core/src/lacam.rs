//! LaCAM: a lazy depth-first search over joint configurations.
//!
//! Each high-level node owns a FIFO of low-level nodes, partial assignments
//! that pin the node's `k` highest-priority agents to specific vertices.
//! Expanding a node consumes one low-level node, enqueues its children (the
//! next agent in priority order pinned to each of its available vertices),
//! and asks the configuration generator for a single successor honoring the
//! assignment. A successor that was already explored
//! is pushed onto the open stack again so that its own, further constrained
//! low-level nodes get their turn; its parent pointer is left alone.
//!
//! Every consumed low-level node enqueues all of its children, so the queue
//! is the breadth-first order of a fixed tree and a node stores only how many
//! entries it has consumed; the next assignment is decoded from that count.
//!
//! The tree persists across calls so it can be driven one expansion at a
//! time, and [`SearchTree::reroot`] lets the real-time loop keep the agents'
//! current configuration at the root.

use std::collections::hash_map::{DefaultHasher, Entry};
use std::collections::HashMap;
use std::hash::{Hash, Hasher};
use std::time::{Duration, Instant};

use crate::config::{valid_transition, Configuration};
use crate::error::{Error, Result};
use crate::grid::GridMap;
use crate::instance::AgentId;
use crate::pibt::{ConfigGenerator, Constraint, PriorityState};
use crate::problem::Problem;
use crate::solver::{Outcome, SolveResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// The first `depth` agents of the owning node's constraint order, each
/// pinned to one vertex.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LowLevelNode {
    assignment: Vec<Constraint>,
}

impl LowLevelNode {
    pub fn depth(&self) -> usize {
        self.assignment.len()
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.assignment
    }

}

#[derive(Clone, Debug)]
pub struct HighLevelNode {
    config: Configuration,
    parent: Option<NodeId>,
    /// Low-level nodes consumed so far.
    consumed: u64,
    priorities: PriorityState,
    created: u64,
}

impl HighLevelNode {
    pub fn config(&self) -> &Configuration {
        &self.config
    }

    pub fn parent(&self) -> Option<NodeId> {
        self.parent
    }

    pub fn priorities(&self) -> &PriorityState {
        &self.priorities
    }

    /// Agents in the order the constraint tree pins them: highest priority first.
    pub fn constraint_order(&self) -> Vec<AgentId> {
        self.priorities.order()
    }

    /// Creation stamp; strictly increasing in creation order.
    pub fn created(&self) -> u64 {
        self.created
    }

    pub fn consumed_low_level(&self) -> u64 {
        self.consumed
    }

    /// The `index`-th low-level node in queue order, and whether it is the
    /// last one. `None` once the queue is exhausted.
    fn low_level_at(&self, map: &GridMap, order: &[AgentId], index: u64) -> Option<(LowLevelNode, bool)> {
        let n = self.config.len();
        let mut rest = index;
        let mut width = 1u64;
        let mut branching = Vec::new();
        for depth in 0..=n {
            if rest < width {
                let last = depth == n && rest + 1 == width;
                let mut assignment = Vec::with_capacity(depth);
                for (k, &b) in branching.iter().enumerate().rev() {
                    let agent = order[k];
                    let vertex = map.neighbors(self.config[agent])[(rest % b) as usize];
                    assignment.push(Constraint { agent, vertex });
                    rest /= b;
                }
                assignment.reverse();
                return Some((LowLevelNode { assignment }, last));
            }
            rest -= width;
            if depth < n {
                let b = map.neighbors(self.config[order[depth]]).len() as u64;
                branching.push(b);
                width = width.saturating_mul(b);
            }
        }
        None
    }
}

/// What a successful (non-goal) expansion did.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Progress {
    /// The generator produced a configuration never seen before.
    Created(NodeId),
    /// The generator produced an explored configuration; it was re-pushed.
    Revisited(NodeId),
    /// The generator found no successor for this assignment.
    Discarded,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExpansionOutcome {
    GoalFound(NodeId),
    Progressed(Progress),
    OpenExhausted,
}

/// One consumed low-level node: the expanded configuration and the
/// assignment handed to the generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpansionRecord {
    pub node: NodeId,
    pub config: Configuration,
    pub assignment: LowLevelNode,
}

/// The persistent LaCAM search state.
pub struct SearchTree {
    goal: Configuration,
    generator: ConfigGenerator,
    nodes: Vec<HighLevelNode>,
    explored: HashMap<Configuration, NodeId>,
    open: Vec<NodeId>,
    root: NodeId,
    last_created: NodeId,
    expansions: u64,
    log: Option<Vec<ExpansionRecord>>,
}

impl SearchTree {
    /// A tree holding only the instance's start configuration.
    pub fn new(problem: &Problem) -> Result<Self> {
        Self::from_config(problem, problem.instance().start().clone())
    }

    /// A tree rooted at an arbitrary configuration of the instance's agents.
    pub fn from_config(problem: &Problem, start: Configuration) -> Result<Self> {
        let instance = problem.instance();
        if start.len() != instance.num_agents() || !start.is_collision_free() {
            return Err(Error::InvalidInstance(format!("bad root configuration {start:?}")));
        }
        for (agent, (v, table)) in start.iter().zip(problem.tables().iter()).enumerate() {
            if !table.reachable(*v) {
                return Err(Error::UnreachableGoal { agent });
            }
        }
        let priorities = PriorityState::new(start.len()).updated(&start, instance.goal());
        let root = HighLevelNode {
            config: start.clone(),
            parent: None,
            consumed: 0,
            priorities,
            created: 0,
        };
        Ok(SearchTree {
            goal: instance.goal().clone(),
            generator: problem.generator(),
            nodes: vec![root],
            explored: HashMap::from([(start, NodeId(0))]),
            open: vec![NodeId(0)],
            root: NodeId(0),
            last_created: NodeId(0),
            expansions: 0,
            log: None,
        })
    }

    /// Records every consumed low-level node from now on.
    pub fn enable_log(&mut self) {
        self.log.get_or_insert_with(Vec::new);
    }

    pub fn log(&self) -> Option<&[ExpansionRecord]> {
        self.log.as_deref()
    }

    pub fn take_log(&mut self) -> Option<Vec<ExpansionRecord>> {
        self.log.take()
    }

    pub fn node(&self, id: NodeId) -> &HighLevelNode {
        &self.nodes[id.index()]
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn last_created(&self) -> NodeId {
        self.last_created
    }

    pub fn lookup(&self, config: &Configuration) -> Option<NodeId> {
        self.explored.get(config).copied()
    }

    pub fn explored_len(&self) -> usize {
        self.explored.len()
    }

    pub fn open(&self) -> &[NodeId] {
        &self.open
    }

    /// Low-level nodes consumed so far.
    pub fn expansions(&self) -> u64 {
        self.expansions
    }

    pub fn goal(&self) -> &Configuration {
        &self.goal
    }

    pub fn map(&self) -> &GridMap {
        self.generator.map()
    }

    pub fn expand_once(&mut self) -> ExpansionOutcome {
        let top = loop {
            let Some(&top) = self.open.last() else {
                return ExpansionOutcome::OpenExhausted;
            };
            let node = &self.nodes[top.index()];
            if node.config == self.goal {
                return ExpansionOutcome::GoalFound(top);
            }
            let order = node.priorities.order();
            match node.low_level_at(self.generator.map(), &order, node.consumed) {
                Some(low) => break (top, low),
                // a duplicate open entry whose constraints ran out earlier
                None => {
                    self.open.pop();
                }
            }
        };
        let (top, (low, last)) = top;

        let node = &mut self.nodes[top.index()];
        node.consumed += 1;
        if last {
            self.open.pop();
        }
        self.expansions += 1;

        let config = node.config.clone();
        let priorities = node.priorities.clone();
        let successor = self.generator.generate(&config, low.constraints(), &priorities);
        if let Some(log) = &mut self.log {
            log.push(ExpansionRecord {
                node: top,
                config: config.clone(),
                assignment: low,
            });
        }
        let Some(next) = successor else {
            return ExpansionOutcome::Progressed(Progress::Discarded);
        };
        let fresh = NodeId(self.nodes.len() as u32);
        match self.explored.entry(next) {
            Entry::Occupied(e) => {
                let id = *e.get();
                self.open.push(id);
                ExpansionOutcome::Progressed(Progress::Revisited(id))
            }
            Entry::Vacant(e) => {
                let next = e.key().clone();
                e.insert(fresh);
                let priorities = priorities.updated(&next, &self.goal);
                self.nodes.push(HighLevelNode {
                    config: next,
                    parent: Some(top),
                    consumed: 0,
                    priorities,
                    created: fresh.0 as u64,
                });
                self.open.push(fresh);
                self.last_created = fresh;
                ExpansionOutcome::Progressed(Progress::Created(fresh))
            }
        }
    }

    /// Configurations from the root to `node`, both inclusive.
    pub fn backtrack_path(&self, node: NodeId) -> Vec<Configuration> {
        let mut path = Vec::new();
        let mut cur = Some(node);
        while let Some(id) = cur {
            debug_assert!(path.len() <= self.nodes.len(), "cycle in parent links");
            let n = &self.nodes[id.index()];
            path.push(n.config.clone());
            cur = n.parent;
        }
        path.reverse();
        path
    }

    /// The second configuration on the root-to-`node` path, if any.
    pub fn first_step_towards(&self, node: NodeId) -> Option<Configuration> {
        let mut cur = node;
        loop {
            let parent = self.nodes[cur.index()].parent?;
            if parent == self.root {
                return Some(self.nodes[cur.index()].config.clone());
            }
            cur = parent;
        }
    }

    /// Makes `new_root` the root by reversing the parent links on the path
    /// between it and the current root. Nothing else changes.
    pub fn reroot(&mut self, new_root: NodeId) {
        let mut chain = vec![new_root];
        while let Some(p) = self.nodes[chain.last().unwrap().index()].parent {
            chain.push(p);
        }
        debug_assert_eq!(*chain.last().unwrap(), self.root);
        for pair in chain.windows(2) {
            self.nodes[pair[1].index()].parent = Some(pair[0]);
        }
        self.nodes[new_root.index()].parent = None;
        self.root = new_root;
    }

    /// Hash of everything search-related except the parent links and the
    /// root: node configurations, priorities, low-level queue positions, the
    /// open stack, the explored table and the counters.
    pub fn fingerprint(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.nodes.len().hash(&mut h);
        for n in &self.nodes {
            n.config.hash(&mut h);
            n.priorities.hash(&mut h);
            n.consumed.hash(&mut h);
            n.created.hash(&mut h);
        }
        self.open.hash(&mut h);
        self.explored.len().hash(&mut h);
        for (i, n) in self.nodes.iter().enumerate() {
            (self.explored.get(&n.config) == Some(&NodeId(i as u32))).hash(&mut h);
        }
        self.last_created.hash(&mut h);
        self.expansions.hash(&mut h);
        h.finish()
    }

    /// Checks that the parent links form a tree rooted at `root` and that
    /// every link is a valid transition.
    pub fn check_rooted_tree(&self) -> Result<(), String> {
        const UNKNOWN: u8 = 0;
        const VISITING: u8 = 1;
        const DONE: u8 = 2;
        if self.nodes[self.root.index()].parent.is_some() {
            return Err("root has a parent".into());
        }
        let map = self.generator.map();
        let mut state = vec![UNKNOWN; self.nodes.len()];
        state[self.root.index()] = DONE;
        for start in 0..self.nodes.len() {
            let mut stack = vec![];
            let mut cur = start;
            while state[cur] == UNKNOWN {
                state[cur] = VISITING;
                stack.push(cur);
                let n = &self.nodes[cur];
                let Some(p) = n.parent else {
                    return Err(format!("node {cur} has no parent but is not the root"));
                };
                if !valid_transition(map, &self.nodes[p.index()].config, &n.config) {
                    return Err(format!("invalid edge {} -> {cur}", p.index()));
                }
                cur = p.index();
            }
            if state[cur] == VISITING {
                return Err(format!("cycle through node {cur}"));
            }
            for s in stack {
                state[s] = DONE;
            }
        }
        Ok(())
    }
}

/// Runs LaCAM to completion, timeout or exhaustion.
pub fn solve_full_horizon(problem: &Problem, timeout: Duration) -> SolveResult {
    match SearchTree::new(problem) {
        Ok(tree) => solve_tree(tree, timeout, problem).0,
        Err(_) => SolveResult::failed(Outcome::Unsolvable, problem.instance().start().clone()),
    }
}

/// As [`solve_full_horizon`], also returning the tree for inspection.
pub fn solve_tree(mut tree: SearchTree, timeout: Duration, problem: &Problem) -> (SolveResult, SearchTree) {
    let started = Instant::now();
    let outcome = loop {
        match tree.expand_once() {
            ExpansionOutcome::GoalFound(id) => break Ok(id),
            ExpansionOutcome::OpenExhausted => break Err(Outcome::Unsolvable),
            ExpansionOutcome::Progressed(_) => {
                if started.elapsed() > timeout {
                    break Err(Outcome::Timeout);
                }
            }
        }
    };
    let elapsed = started.elapsed();
    let mut result = match outcome {
        Ok(goal) => SolveResult::success(tree.backtrack_path(goal)),
        Err(o) => SolveResult::failed(o, problem.instance().start().clone()),
    };
    result.planning_time = elapsed;
    result.expansions = tree.expansions();
    result.explored = tree.explored_len();
    result.iterations = 1;
    (result, tree)
}
