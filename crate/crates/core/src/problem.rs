use std::sync::Arc;

use crate::heuristic::{sum_of_distances, DistanceTable};
use crate::instance::{AgentId, Instance};
use crate::pibt::{ActionRanker, ConfigGenerator, DistanceRanker};

/// An instance together with its cached distance tables and the ranker the
/// configuration generator uses. Cheap to clone.
#[derive(Clone)]
pub struct Problem {
    instance: Instance,
    tables: Arc<Vec<DistanceTable>>,
    ranker: Arc<dyn ActionRanker>,
}

impl Problem {
    /// Computes distance tables and selects the deterministic distance ranker.
    pub fn new(instance: Instance) -> Self {
        let tables = Arc::new(DistanceTable::for_instance(&instance));
        let ranker = Arc::new(DistanceRanker::new(Arc::clone(&tables)));
        Problem {
            instance,
            tables,
            ranker,
        }
    }

    pub fn with_ranker(mut self, ranker: Arc<dyn ActionRanker>) -> Self {
        self.ranker = ranker;
        self
    }

    /// Uses the distance ranker with seeded tie-breaking.
    pub fn with_seed(self, seed: Option<u64>) -> Self {
        let ranker = Arc::new(DistanceRanker::new(Arc::clone(&self.tables)).with_seed(seed));
        self.with_ranker(ranker)
    }

    pub fn instance(&self) -> &Instance {
        &self.instance
    }

    pub fn tables(&self) -> &Arc<Vec<DistanceTable>> {
        &self.tables
    }

    pub fn distance_ranker(&self) -> DistanceRanker {
        DistanceRanker::new(Arc::clone(&self.tables))
    }

    pub fn ranker(&self) -> &Arc<dyn ActionRanker> {
        &self.ranker
    }

    pub fn generator(&self) -> ConfigGenerator {
        ConfigGenerator::new(self.instance.shared_map(), Arc::clone(&self.ranker))
    }

    /// The first agent whose goal is unreachable from its start.
    pub fn unreachable_agent(&self) -> Option<AgentId> {
        self.instance
            .tasks()
            .iter()
            .zip(self.tables.iter())
            .position(|(t, d)| !d.reachable(t.start))
    }

    /// Sum of individual shortest path lengths.
    pub fn lower_bound(&self) -> Option<u64> {
        sum_of_distances(&self.instance, &self.tables)
    }
}
