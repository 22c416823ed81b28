//! Shortest motivating `s`-`t` path in linear time.
//!
//! A reverse-topological DP: `d(u)` is the length of the shortest `u`-`t`
//! path along which the agent never abandons. An edge `uv` may extend the
//! path from `v` when `b·w(uv) + d(v) ≤ r`. Any motivating subgraph without
//! branching vertices is such a path, so this also solves the `k = 0` case.

use crate::graph::VertexId;
use crate::instance::PlanningInstance;
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PathResult {
    Finite { length: Rational, path: Vec<VertexId> },
    Infinite,
}

impl PathResult {
    pub fn is_finite(&self) -> bool {
        matches!(self, PathResult::Finite { .. })
    }

    pub fn length(&self) -> Option<&Rational> {
        match self {
            PathResult::Finite { length, .. } => Some(length),
            PathResult::Infinite => None,
        }
    }

    pub fn path(&self) -> Option<&[VertexId]> {
        match self {
            PathResult::Finite { path, .. } => Some(path),
            PathResult::Infinite => None,
        }
    }
}

/// Work counters from one run, for checking the linear-time bound.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PathStats {
    pub vertices_visited: usize,
    pub edges_relaxed: usize,
}

pub fn solve_motivating_path(instance: &PlanningInstance) -> PathResult {
    solve_motivating_path_with_stats(instance).0
}

pub fn solve_motivating_path_with_stats(instance: &PlanningInstance) -> (PathResult, PathStats) {
    let g = &instance.graph;
    let b = &instance.salience;
    let r = &instance.reward;
    let mut stats = PathStats::default();
    let mut dist: Vec<Option<Rational>> = vec![None; g.len()];
    let mut next: Vec<Option<VertexId>> = vec![None; g.len()];
    dist[instance.t] = Some(Rational::zero());
    for &u in g.topo_order().iter().rev() {
        stats.vertices_visited += 1;
        if u == instance.t {
            continue;
        }
        // Out-edges come sorted by head position; the strict comparison keeps
        // the earliest head among equally short continuations.
        for &e in g.out_edges(u) {
            stats.edges_relaxed += 1;
            let edge = g.edge(e);
            let Some(dv) = &dist[edge.head] else {
                continue;
            };
            if &(b * &edge.weight + dv) > r {
                continue;
            }
            let cand = &edge.weight + dv;
            if dist[u].as_ref().is_none_or(|du| cand < *du) {
                dist[u] = Some(cand);
                next[u] = Some(edge.head);
            }
        }
    }
    let result = match dist[instance.s].take() {
        None => PathResult::Infinite,
        Some(length) => {
            let mut path = vec![instance.s];
            let mut u = instance.s;
            while u != instance.t {
                u = next[u].expect("finite distance has a successor");
                path.push(u);
            }
            PathResult::Finite { length, path }
        }
    };
    (result, stats)
}
