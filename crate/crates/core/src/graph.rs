//! Weighted task graphs: validated DAGs with exact non-negative edge weights.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use crate::error::{Error, Result};
use crate::rational::Rational;

pub type VertexId = usize;
pub type EdgeId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub tail: VertexId,
    pub head: VertexId,
    pub weight: Rational,
}

/// A directed acyclic graph with named vertices and rational edge weights.
///
/// Construction validates the graph, so every `TaskGraph` is acyclic, free of
/// self-loops and parallel edges, and carries only non-negative weights. The
/// stored topological order breaks ties by vertex input order.
#[derive(Debug, Clone)]
pub struct TaskGraph {
    names: Vec<String>,
    index: HashMap<String, VertexId>,
    edges: Vec<Edge>,
    edge_index: HashMap<(VertexId, VertexId), EdgeId>,
    out: Vec<Vec<EdgeId>>,
    inc: Vec<Vec<EdgeId>>,
    topo: Vec<VertexId>,
    pos: Vec<usize>,
}

impl PartialEq for TaskGraph {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.edges == other.edges
    }
}

impl Eq for TaskGraph {}

impl TaskGraph {
    pub fn new<S: AsRef<str>>(vertices: &[S], edges: &[(S, S, Rational)]) -> Result<Self> {
        let mut index = HashMap::with_capacity(vertices.len());
        let mut names = Vec::with_capacity(vertices.len());
        for v in vertices {
            let v = v.as_ref();
            if index.insert(v.to_string(), names.len()).is_some() {
                return Err(Error::DuplicateVertex(v.to_string()));
            }
            names.push(v.to_string());
        }
        let lookup = |v: &str| {
            index
                .get(v)
                .copied()
                .ok_or_else(|| Error::DanglingEndpoint(v.to_string()))
        };
        let mut es = Vec::with_capacity(edges.len());
        for (a, b, w) in edges {
            es.push(Edge {
                tail: lookup(a.as_ref())?,
                head: lookup(b.as_ref())?,
                weight: w.clone(),
            });
        }
        Self::from_parts(names, es)
    }

    /// Builds a graph from already-indexed edges.
    pub fn from_parts(names: Vec<String>, edges: Vec<Edge>) -> Result<Self> {
        let n = names.len();
        let mut index = HashMap::with_capacity(n);
        for (i, v) in names.iter().enumerate() {
            if index.insert(v.clone(), i).is_some() {
                return Err(Error::DuplicateVertex(v.clone()));
            }
        }
        let mut edge_index = HashMap::with_capacity(edges.len());
        let mut out = vec![Vec::new(); n];
        let mut inc = vec![Vec::new(); n];
        for (id, e) in edges.iter().enumerate() {
            for v in [e.tail, e.head] {
                if v >= n {
                    return Err(Error::DanglingEndpoint(format!("#{v}")));
                }
            }
            if e.tail == e.head {
                return Err(Error::SelfLoop(names[e.tail].clone()));
            }
            if e.weight.is_negative() {
                return Err(Error::NegativeWeight {
                    from: names[e.tail].clone(),
                    to: names[e.head].clone(),
                    weight: e.weight.clone(),
                });
            }
            if edge_index.insert((e.tail, e.head), id).is_some() {
                return Err(Error::ParallelEdge {
                    from: names[e.tail].clone(),
                    to: names[e.head].clone(),
                });
            }
            out[e.tail].push(id);
            inc[e.head].push(id);
        }

        // Kahn's algorithm; the min-heap on vertex index makes the order
        // deterministic with ties resolved by input order.
        let mut indeg: Vec<usize> = inc.iter().map(Vec::len).collect();
        let mut heap: BinaryHeap<Reverse<VertexId>> =
            (0..n).filter(|&v| indeg[v] == 0).map(Reverse).collect();
        let mut topo = Vec::with_capacity(n);
        while let Some(Reverse(u)) = heap.pop() {
            topo.push(u);
            for &e in &out[u] {
                let h = edges[e].head;
                indeg[h] -= 1;
                if indeg[h] == 0 {
                    heap.push(Reverse(h));
                }
            }
        }
        if topo.len() < n {
            let stuck = (0..n).find(|&v| indeg[v] > 0).expect("cycle vertex");
            return Err(Error::CycleDetected(names[stuck].clone()));
        }
        let mut pos = vec![0; n];
        for (i, &v) in topo.iter().enumerate() {
            pos[v] = i;
        }
        for list in out.iter_mut() {
            list.sort_by_key(|&e| pos[edges[e].head]);
        }
        for list in inc.iter_mut() {
            list.sort_by_key(|&e| pos[edges[e].tail]);
        }

        Ok(TaskGraph {
            names,
            index,
            edges,
            edge_index,
            out,
            inc,
            topo,
            pos,
        })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, v: VertexId) -> &str {
        &self.names[v]
    }

    pub fn vertex(&self, name: &str) -> Option<VertexId> {
        self.index.get(name).copied()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> &Edge {
        &self.edges[id]
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn find_edge(&self, tail: VertexId, head: VertexId) -> Option<EdgeId> {
        self.edge_index.get(&(tail, head)).copied()
    }

    /// Out-edges of `v`, ordered by the topological position of their heads.
    pub fn out_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.out[v]
    }

    pub fn in_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.inc[v]
    }

    pub fn out_degree(&self, v: VertexId) -> usize {
        self.out[v].len()
    }

    pub fn in_degree(&self, v: VertexId) -> usize {
        self.inc[v].len()
    }

    pub fn successors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.out[v].iter().map(move |&e| self.edges[e].head)
    }

    pub fn topo_order(&self) -> &[VertexId] {
        &self.topo
    }

    pub fn topo_pos(&self, v: VertexId) -> usize {
        self.pos[v]
    }

    pub fn total_weight(&self) -> Rational {
        self.edges.iter().map(|e| &e.weight).sum()
    }

    /// Vertices reachable from `from` (including itself).
    pub fn reachable_from(&self, from: VertexId) -> Vec<bool> {
        let mut seen = vec![false; self.len()];
        seen[from] = true;
        for &u in &self.topo[self.pos[from]..] {
            if seen[u] {
                for v in self.successors(u) {
                    seen[v] = true;
                }
            }
        }
        seen
    }

    /// Vertices from which `to` is reachable (including itself).
    pub fn reaching(&self, to: VertexId) -> Vec<bool> {
        let mut seen = vec![false; self.len()];
        seen[to] = true;
        for &u in self.topo[..=self.pos[to]].iter().rev() {
            if !seen[u] && self.successors(u).any(|v| seen[v]) {
                seen[u] = true;
            }
        }
        seen
    }

    /// The subgraph on the same vertex set keeping only `keep` edges.
    pub fn edge_subgraph(&self, keep: impl IntoIterator<Item = EdgeId>) -> TaskGraph {
        let mut ids: Vec<EdgeId> = keep.into_iter().collect();
        ids.sort_unstable();
        ids.dedup();
        let edges = ids.into_iter().map(|e| self.edges[e].clone()).collect();
        TaskGraph::from_parts(self.names.clone(), edges).expect("subgraph of a valid graph")
    }

    /// The subgraph induced on `keep`, plus the old-to-new vertex map.
    pub fn induced(&self, keep: &[bool]) -> (TaskGraph, Vec<Option<VertexId>>) {
        let mut map = vec![None; self.len()];
        let mut names = Vec::new();
        for v in 0..self.len() {
            if keep[v] {
                map[v] = Some(names.len());
                names.push(self.names[v].clone());
            }
        }
        let edges = self
            .edges
            .iter()
            .filter_map(|e| {
                Some(Edge {
                    tail: map[e.tail]?,
                    head: map[e.head]?,
                    weight: e.weight.clone(),
                })
            })
            .collect();
        let g = TaskGraph::from_parts(names, edges).expect("induced subgraph of a valid graph");
        (g, map)
    }
}

/// Checks a raw graph description and returns its topological order.
pub fn validate<S: AsRef<str>>(
    vertices: &[S],
    edges: &[(S, S, Rational)],
) -> Result<Vec<String>> {
    let g = TaskGraph::new(vertices, edges)?;
    Ok(g.topo.iter().map(|&v| g.names[v].clone()).collect())
}
