//! Seeded generators for maps, instances and scenario files.

use std::collections::VecDeque;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::grid::{GridMap, Vertex};
use crate::heuristic::DistanceTable;
use crate::instance::Instance;
use crate::movingai::ScenarioEntry;

/// A `width x height` map with `round(obstacle_ratio * cells)` blocked cells
/// placed uniformly at random.
pub fn random_map<R: Rng>(width: u32, height: u32, obstacle_ratio: f64, rng: &mut R) -> GridMap {
    let cells = width as usize * height as usize;
    let blocked = ((obstacle_ratio * cells as f64).round() as usize).min(cells.saturating_sub(1));
    let mut passable = vec![true; cells];
    let mut idx: Vec<usize> = (0..cells).collect();
    idx.shuffle(rng);
    for &i in &idx[..blocked] {
        passable[i] = false;
    }
    GridMap::new(width, height, passable)
}

/// Cells of the largest 4-connected passable component, in row-major order.
pub fn largest_component(map: &GridMap) -> Vec<Vertex> {
    let mut label = vec![usize::MAX; map.num_cells()];
    let mut best: Vec<Vertex> = Vec::new();
    for seed in map.passable_cells() {
        if label[map.index(seed)] != usize::MAX {
            continue;
        }
        let mut comp = vec![seed];
        label[map.index(seed)] = 0;
        let mut queue = VecDeque::from([seed]);
        while let Some(u) = queue.pop_front() {
            for w in map.neighbors(u).into_iter().skip(1) {
                if label[map.index(w)] == usize::MAX {
                    label[map.index(w)] = 0;
                    comp.push(w);
                    queue.push_back(w);
                }
            }
        }
        if comp.len() > best.len() {
            best = comp;
        }
    }
    best.sort_by_key(|v| (v.y, v.x));
    best
}

/// `n` agents with distinct random starts and distinct random goals drawn
/// from the largest component. `None` if the component is too small.
pub fn random_instance<R: Rng>(map: impl Into<Arc<GridMap>>, n: usize, rng: &mut R) -> Option<Instance> {
    let map = map.into();
    let cells = largest_component(&map);
    if cells.len() < n {
        return None;
    }
    let starts: Vec<Vertex> = cells.choose_multiple(rng, n).copied().collect();
    let goals: Vec<Vertex> = cells.choose_multiple(rng, n).copied().collect();
    let pairs: Vec<_> = starts.into_iter().zip(goals).collect();
    Instance::new(map, &pairs).ok()
}

/// Two agents swapping ends of a `1 x length` corridor with a single bulge
/// cell above column 1:
///
/// ```text
/// @.@@@@
/// ......
/// ```
pub fn bulge_corridor(length: u32) -> Instance {
    assert!(length >= 3, "corridor needs room for the bulge");
    let mut map = GridMap::new(length, 2, vec![false; length as usize * 2]);
    map.set_passable(Vertex::new(1, 0), true);
    for x in 0..length {
        map.set_passable(Vertex::new(x, 1), true);
    }
    let left = Vertex::new(0, 1);
    let right = Vertex::new(length - 1, 1);
    Instance::new(map, &[(left, right), (right, left)]).expect("valid corridor instance")
}

/// `rows` scenario entries with pairwise distinct starts and pairwise
/// distinct goals inside the largest component, bucketed by optimal length
/// in groups of ten rows like the published random scenarios.
pub fn random_scenario<R: Rng>(map: &GridMap, map_name: &str, rows: usize, rng: &mut R) -> Vec<ScenarioEntry> {
    let cells = largest_component(map);
    assert!(cells.len() >= rows, "component too small for {rows} rows");
    let starts: Vec<Vertex> = cells.choose_multiple(rng, rows).copied().collect();
    let goals: Vec<Vertex> = cells.choose_multiple(rng, rows).copied().collect();
    starts
        .into_iter()
        .zip(goals)
        .enumerate()
        .map(|(i, (start, goal))| ScenarioEntry {
            bucket: (i / 10) as u32,
            map_name: map_name.to_string(),
            width: map.width(),
            height: map.height(),
            start,
            goal,
            optimal_length: DistanceTable::backward_bfs(map, goal)
                .get(start)
                .expect("same component") as f64,
        })
        .collect()
}
