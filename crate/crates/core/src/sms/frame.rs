//! Guessed interesting vertices and the reachability graph they induce.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::graph::{TaskGraph, VertexId};

/// One guess of the interesting vertices of a solution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GuessFrame {
    /// Branching vertices `u₁..u_k` in topological order.
    pub branching: Vec<VertexId>,
    /// `uᵢ*`: the out-neighbor the agent moves to from `uᵢ`.
    pub star: Vec<VertexId>,
    /// `uᵢ◇`: the other out-neighbor of `uᵢ`.
    pub diamond: Vec<VertexId>,
    /// Merge vertices not already among `s`, `t` and the sets above.
    pub merges: Vec<VertexId>,
}

impl GuessFrame {
    /// `V(H)`: all guessed vertices plus `s` and `t`, in topological order.
    pub fn vertices(&self, g: &TaskGraph, s: VertexId, t: VertexId) -> Vec<VertexId> {
        let mut vs: Vec<VertexId> = [s, t]
            .into_iter()
            .chain(self.branching.iter().copied())
            .chain(self.star.iter().copied())
            .chain(self.diamond.iter().copied())
            .chain(self.merges.iter().copied())
            .collect();
        vs.sort_by_key(|&v| g.topo_pos(v));
        vs.dedup();
        vs
    }
}

fn combinations(items: &[VertexId], k: usize, start: usize, cur: &mut Vec<VertexId>, out: &mut Vec<Vec<VertexId>>) {
    if cur.len() == k {
        out.push(cur.clone());
        return;
    }
    for i in start..items.len() {
        if items.len() - i < k - cur.len() {
            break;
        }
        cur.push(items[i]);
        combinations(items, k, i + 1, cur, out);
        cur.pop();
    }
}

/// All frames with exactly `k` branching vertices, in lexicographic order of
/// topological indices. Fails once more than `cap` frames would be produced.
pub(crate) fn enumerate_frames(
    g: &TaskGraph,
    s: VertexId,
    t: VertexId,
    k: usize,
    reach: &[Vec<bool>],
    cap: u64,
) -> Result<Vec<GuessFrame>> {
    let by_topo: Vec<VertexId> = g.topo_order().to_vec();
    let candidates: Vec<VertexId> = by_topo
        .iter()
        .copied()
        .filter(|&v| v != t && g.out_degree(v) >= 2)
        .collect();
    let mut sets = Vec::new();
    combinations(&candidates, k, 0, &mut Vec::new(), &mut sets);
    let mut frames = Vec::new();
    let too_many = || Error::InstanceTooLarge(format!("more than {cap} guess frames"));
    for b in sets {
        let mut pairs: Vec<(Vec<VertexId>, Vec<VertexId>)> = vec![(Vec::new(), Vec::new())];
        for (i, &u) in b.iter().enumerate() {
            let succ: Vec<VertexId> = g.successors(u).collect();
            let mut next = Vec::new();
            for (stars, diamonds) in &pairs {
                for &x in &succ {
                    if i + 1 < k && !reach[x][b[i + 1]] {
                        continue;
                    }
                    for &y in &succ {
                        if y == x {
                            continue;
                        }
                        let mut st = stars.clone();
                        let mut di = diamonds.clone();
                        st.push(x);
                        di.push(y);
                        next.push((st, di));
                    }
                }
            }
            pairs = next;
        }
        for (star, diamond) in pairs {
            let base = GuessFrame {
                branching: b.clone(),
                star,
                diamond,
                merges: Vec::new(),
            };
            let taken = base.vertices(g, s, t);
            let others: Vec<VertexId> = by_topo
                .iter()
                .copied()
                .filter(|v| !taken.contains(v) && g.in_degree(*v) >= 2)
                .collect();
            for size in 0..=k {
                let mut subsets = Vec::new();
                combinations(&others, size, 0, &mut Vec::new(), &mut subsets);
                for merges in subsets {
                    if frames.len() as u64 >= cap {
                        return Err(too_many());
                    }
                    frames.push(GuessFrame {
                        merges,
                        ..base.clone()
                    });
                }
            }
        }
    }
    Ok(frames)
}

/// `H`: an edge `uv` between guessed vertices whenever `G` has a `u`-`v`
/// path whose interior avoids every guessed vertex. Each edge carries the
/// sorted set of lengths such paths can have.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReachabilityGraph {
    /// `V(H)` in topological order.
    pub vertices: Vec<VertexId>,
    /// Pairs of indices into `vertices`, sorted.
    pub edges: Vec<(usize, usize)>,
    pub lengths: Vec<Vec<u64>>,
}

impl ReachabilityGraph {
    /// Indices of `vertices` that `from` has an edge to.
    pub fn out(&self, from: usize) -> impl Iterator<Item = (usize, &[u64])> + '_ {
        self.edges
            .iter()
            .zip(&self.lengths)
            .filter(move |(e, _)| e.0 == from)
            .map(|(e, l)| (e.1, l.as_slice()))
    }

    pub fn index_of(&self, v: VertexId) -> Option<usize> {
        self.vertices.iter().position(|&x| x == v)
    }
}

/// Builds `H` for a frame. Requires integer weights.
pub fn build_reachability_graph(
    graph: &TaskGraph,
    frame: &GuessFrame,
    s: VertexId,
    t: VertexId,
) -> Result<ReachabilityGraph> {
    let weights = integer_weights(graph)?;
    Ok(reachability_graph(graph, &weights, frame.vertices(graph, s, t)).0)
}

pub(crate) fn integer_weights(graph: &TaskGraph) -> Result<Vec<u64>> {
    graph
        .edges()
        .iter()
        .map(|e| e.weight.to_u64().ok_or(Error::NonIntegerWeights))
        .collect()
}

/// The reachability graph on `vertices` plus the number of length entries
/// computed along the way (a work measure).
pub(crate) fn reachability_graph(
    g: &TaskGraph,
    weights: &[u64],
    vertices: Vec<VertexId>,
) -> (ReachabilityGraph, u64) {
    let mut index = vec![None; g.len()];
    for (i, &v) in vertices.iter().enumerate() {
        index[v] = Some(i);
    }
    let mut work = 0u64;
    // For vertices outside H: lengths of paths to each H vertex through
    // vertices outside H only.
    let mut tails: Vec<BTreeMap<usize, BTreeSet<u64>>> = vec![BTreeMap::new(); g.len()];
    let collect = |u: VertexId, tails: &Vec<BTreeMap<usize, BTreeSet<u64>>>, work: &mut u64| {
        let mut acc: BTreeMap<usize, BTreeSet<u64>> = BTreeMap::new();
        for &e in g.out_edges(u) {
            let head = g.edge(e).head;
            let w = weights[e];
            match index[head] {
                Some(h) => {
                    acc.entry(h).or_default().insert(w);
                    *work += 1;
                }
                None => {
                    for (&h, lens) in &tails[head] {
                        let entry = acc.entry(h).or_default();
                        for &l in lens {
                            entry.insert(l + w);
                        }
                        *work += lens.len() as u64;
                    }
                }
            }
        }
        acc
    };
    for &u in g.topo_order().iter().rev() {
        if index[u].is_none() {
            tails[u] = collect(u, &tails, &mut work);
        }
    }
    let mut edges = Vec::new();
    let mut lengths = Vec::new();
    for (i, &u) in vertices.iter().enumerate() {
        for (h, lens) in collect(u, &tails, &mut work) {
            edges.push((i, h));
            lengths.push(lens.into_iter().collect());
        }
    }
    (
        ReachabilityGraph {
            vertices,
            edges,
            lengths,
        },
        work,
    )
}
