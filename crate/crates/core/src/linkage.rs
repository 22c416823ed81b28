//! Exact motivating k-linkage in DAGs.
//!
//! Given terminal pairs `(sᵢ, tᵢ)` with target lengths `ℓᵢ`, salience factors
//! `bᵢ` and rewards `rᵢ`, find internally vertex-disjoint `sᵢ`-`tᵢ` paths of
//! weight exactly `ℓᵢ` such that at every vertex `u` of path `i` with next edge
//! `uv` and remaining length `d`, `(bᵢ − 1)·w(uv) + d ≤ rᵢ`.
//!
//! The solver is a memoized recursion over cells `(u₁..u_k, d₁..d_k)` that
//! always advances the topologically earliest unfinished head. Only cells
//! reached from the start cell are materialized.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Edge, TaskGraph};
use crate::rational::Rational;

pub const DEFAULT_CELL_BUDGET: u64 = 20_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Link {
    pub source: usize,
    pub sink: usize,
    pub length: u64,
    pub salience: Rational,
    pub reward: Rational,
}

/// An integer-weighted DAG with `k` links.
#[derive(Debug, Clone)]
pub struct LinkageInstance {
    names: Vec<String>,
    edges: Vec<(usize, usize, u64)>,
    out: Vec<Vec<(usize, u64)>>,
    topo: Vec<usize>,
    links: Vec<Link>,
    /// Vertex of the instance this one was derived from (identity unless
    /// produced by [`normalize_terminals`]).
    origin: Vec<usize>,
}

impl PartialEq for LinkageInstance {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.edges == other.edges && self.links == other.links
    }
}

impl Eq for LinkageInstance {}

impl LinkageInstance {
    pub fn new(
        names: Vec<String>,
        edges: Vec<(usize, usize, u64)>,
        links: Vec<Link>,
    ) -> Result<Self> {
        let n = names.len();
        let origin = (0..n).collect();
        Self::with_origin(names, edges, links, origin)
    }

    fn with_origin(
        names: Vec<String>,
        edges: Vec<(usize, usize, u64)>,
        links: Vec<Link>,
        origin: Vec<usize>,
    ) -> Result<Self> {
        // Reuse the task-graph validation for acyclicity and shape.
        let graph = TaskGraph::from_parts(
            names.clone(),
            edges
                .iter()
                .map(|&(tail, head, w)| Edge {
                    tail,
                    head,
                    weight: Rational::from_u64(w),
                })
                .collect(),
        )?;
        let n = names.len();
        for (i, l) in links.iter().enumerate() {
            if l.source >= n || l.sink >= n {
                return Err(Error::InvalidLink(i, "terminal out of range".into()));
            }
            if l.salience < Rational::one() {
                return Err(Error::InvalidLink(i, format!("salience {} < 1", l.salience)));
            }
        }
        let out = (0..n)
            .map(|v| {
                graph
                    .out_edges(v)
                    .iter()
                    .map(|&e| (graph.edge(e).head, edges[e].2))
                    .collect()
            })
            .collect();
        Ok(LinkageInstance {
            topo: graph.topo_order().to_vec(),
            names,
            edges,
            out,
            links,
            origin,
        })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn edges(&self) -> &[(usize, usize, u64)] {
        &self.edges
    }

    pub fn links(&self) -> &[Link] {
        &self.links
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn out(&self, v: usize) -> &[(usize, u64)] {
        &self.out[v]
    }

    pub fn weight(&self, u: usize, v: usize) -> Option<u64> {
        self.out[u].iter().find(|&&(h, _)| h == v).map(|&(_, w)| w)
    }

    /// `W`, the sum of all edge weights.
    pub fn total_weight(&self) -> u64 {
        self.edges.iter().map(|e| e.2).sum()
    }
}

/// Transitive closure as one bitset row per vertex.
#[derive(Debug, Clone)]
pub struct Reachability {
    words: usize,
    rows: Vec<u64>,
}

impl Reachability {
    pub fn new(inst: &LinkageInstance) -> Self {
        let n = inst.vertex_count();
        let words = n.div_ceil(64).max(1);
        let mut rows = vec![0u64; n * words];
        for &u in inst.topo.iter().rev() {
            rows[u * words + u / 64] |= 1 << (u % 64);
            for &(v, _) in inst.out(u) {
                for k in 0..words {
                    let bits = rows[v * words + k];
                    rows[u * words + k] |= bits;
                }
            }
        }
        Reachability { words, rows }
    }

    /// Whether `to` is reachable from `from` (every vertex reaches itself).
    pub fn reaches(&self, from: usize, to: usize) -> bool {
        self.rows[from * self.words + to / 64] >> (to % 64) & 1 == 1
    }
}

fn fresh_name(taken: &mut std::collections::HashSet<String>, base: &str) -> String {
    let mut k = 2;
    loop {
        let cand = format!("{base}#{k}");
        if taken.insert(cand.clone()) {
            return cand;
        }
        k += 1;
    }
}

/// Gives every terminal occurrence its own vertex, removes in-edges of
/// sources and out-edges of sinks.
///
/// The first occurrence of a vertex as a terminal keeps the original vertex;
/// each further occurrence gets a copy that inherits the out-edges (for a
/// source) or in-edges (for a sink) of the original. Afterwards no link path
/// can pass through any terminal.
pub fn normalize_terminals(inst: &LinkageInstance) -> LinkageInstance {
    let n = inst.vertex_count();
    let mut names = inst.names.clone();
    let mut origin: Vec<usize> = inst.origin.clone();
    let mut taken: std::collections::HashSet<String> = names.iter().cloned().collect();
    // Per original vertex: instances acting as sources / sinks.
    let mut source_reps: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut sink_reps: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut used = vec![false; n];
    let mut links = inst.links.clone();
    for link in links.iter_mut() {
        for (is_source, v) in [(true, link.source), (false, link.sink)] {
            let rep = if !used[v] {
                used[v] = true;
                v
            } else {
                let id = names.len();
                names.push(fresh_name(&mut taken, &inst.names[v]));
                origin.push(inst.origin[v]);
                id
            };
            if is_source {
                source_reps[v].push(rep);
                link.source = rep;
            } else {
                sink_reps[v].push(rep);
                link.sink = rep;
            }
        }
    }
    let is_terminal = |v: usize| !source_reps[v].is_empty() || !sink_reps[v].is_empty();
    let out_reps = |v: usize| -> Vec<usize> {
        if is_terminal(v) {
            source_reps[v].clone()
        } else {
            vec![v]
        }
    };
    let in_reps = |v: usize| -> Vec<usize> {
        if is_terminal(v) {
            sink_reps[v].clone()
        } else {
            vec![v]
        }
    };
    let mut edges = Vec::new();
    for &(a, b, w) in &inst.edges {
        for &x in &out_reps(a) {
            for &y in &in_reps(b) {
                edges.push((x, y, w));
            }
        }
    }
    LinkageInstance::with_origin(names, edges, links, origin)
        .expect("normalization preserves acyclicity")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkageSolution {
    /// One vertex sequence per link, in link order.
    pub paths: Vec<Vec<usize>>,
}

struct Dp<'a> {
    inst: &'a LinkageInstance,
    reach: Reachability,
    /// Position in a topological order that puts all sinks last.
    order: Vec<usize>,
    min_len: Vec<Vec<Option<u64>>>,
    max_len: Vec<Vec<Option<u64>>>,
    slack: Vec<Rational>,
    memo: HashMap<Box<[u64]>, Option<(u32, u32)>>,
    budget: u64,
}

impl<'a> Dp<'a> {
    fn new(inst: &'a LinkageInstance, budget: u64) -> Self {
        let n = inst.vertex_count();
        let mut is_sink = vec![false; n];
        for l in &inst.links {
            is_sink[l.sink] = true;
        }
        let mut order = vec![0; n];
        let ordered = inst
            .topo
            .iter()
            .filter(|&&v| !is_sink[v])
            .chain(inst.topo.iter().filter(|&&v| is_sink[v]));
        for (i, &v) in ordered.enumerate() {
            order[v] = i;
        }
        let mut min_len = Vec::new();
        let mut max_len = Vec::new();
        for l in &inst.links {
            let mut lo: Vec<Option<u64>> = vec![None; n];
            let mut hi: Vec<Option<u64>> = vec![None; n];
            lo[l.sink] = Some(0);
            hi[l.sink] = Some(0);
            for &u in inst.topo.iter().rev() {
                if u == l.sink {
                    continue;
                }
                for &(v, w) in inst.out(u) {
                    if let Some(x) = lo[v] {
                        lo[u] = Some(lo[u].map_or(x + w, |c| c.min(x + w)));
                    }
                    if let Some(x) = hi[v] {
                        hi[u] = Some(hi[u].map_or(x + w, |c| c.max(x + w)));
                    }
                }
            }
            min_len.push(lo);
            max_len.push(hi);
        }
        let slack = inst
            .links
            .iter()
            .map(|l| &l.salience - Rational::one())
            .collect();
        Dp {
            inst,
            reach: Reachability::new(inst),
            order,
            min_len,
            max_len,
            slack,
            memo: HashMap::new(),
            budget,
        }
    }

    fn feasible_length(&self, link: usize, v: usize, d: u64) -> bool {
        matches!(
            (self.min_len[link][v], self.max_len[link][v]),
            (Some(lo), Some(hi)) if lo <= d && d <= hi
        )
    }

    /// `cell` holds `k` heads followed by `k` remaining lengths.
    fn eval(&mut self, cell: &[u64]) -> Result<bool> {
        if let Some(v) = self.memo.get(cell) {
            return Ok(v.is_some());
        }
        if self.memo.len() as u64 >= self.budget {
            return Err(Error::InstanceTooLarge(format!(
                "linkage table exceeded {} cells",
                self.budget
            )));
        }
        let k = self.inst.links.len();
        let (heads, dists) = cell.split_at(k);
        let active = (0..k)
            .filter(|&i| heads[i] as usize != self.inst.links[i].sink)
            .min_by_key(|&i| self.order[heads[i] as usize]);
        let result = match active {
            None => dists.iter().all(|&d| d == 0).then_some((u32::MAX, u32::MAX)),
            Some(i) => self.advance(cell, i)?,
        };
        self.memo.insert(cell.into(), result);
        Ok(result.is_some())
    }

    fn advance(&mut self, cell: &[u64], i: usize) -> Result<Option<(u32, u32)>> {
        let k = self.inst.links.len();
        let u = cell[i] as usize;
        let d = cell[k + i];
        let heads = &cell[..k];
        if (0..k).any(|j| j != i && self.reach.reaches(heads[j] as usize, u)) {
            return Ok(None);
        }
        let link = &self.inst.links[i];
        let bound = &link.reward - Rational::from_u64(d);
        for idx in 0..self.inst.out(u).len() {
            let (v, w) = self.inst.out(u)[idx];
            if w > d || heads.iter().any(|&h| h as usize == v) {
                continue;
            }
            if !self.feasible_length(i, v, d - w) {
                continue;
            }
            if &self.slack[i] * Rational::from_u64(w) > bound {
                continue;
            }
            let mut next = cell.to_vec();
            next[i] = v as u64;
            next[k + i] = d - w;
            if self.eval(&next)? {
                return Ok(Some((i as u32, v as u32)));
            }
        }
        Ok(None)
    }
}

/// Outcome of a linkage run: the solution (if any) and the number of table
/// cells materialized.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkageRun {
    pub solution: Option<LinkageSolution>,
    pub cells: u64,
}

pub fn solve_linkage(inst: &LinkageInstance) -> Result<Option<LinkageSolution>> {
    solve_linkage_with_budget(inst, DEFAULT_CELL_BUDGET).map(|r| r.solution)
}

/// Solves `inst` after normalizing its terminals; paths are reported in the
/// vertex ids of `inst`.
pub fn solve_linkage_with_budget(inst: &LinkageInstance, budget: u64) -> Result<LinkageRun> {
    let norm = normalize_terminals(inst);
    let k = norm.links.len();
    if k == 0 {
        return Ok(LinkageRun {
            solution: Some(LinkageSolution { paths: Vec::new() }),
            cells: 0,
        });
    }
    let mut dp = Dp::new(&norm, budget);
    let mut start: Vec<u64> = norm.links.iter().map(|l| l.source as u64).collect();
    start.extend(norm.links.iter().map(|l| l.length));
    if start[..k]
        .iter()
        .enumerate()
        .any(|(i, &s)| !dp.feasible_length(i, s as usize, start[k + i]))
    {
        return Ok(LinkageRun {
            solution: None,
            cells: 0,
        });
    }
    let found = dp.eval(&start)?;
    let cells = dp.memo.len() as u64;
    if !found {
        return Ok(LinkageRun {
            solution: None,
            cells,
        });
    }
    let mut paths: Vec<Vec<usize>> = norm.links.iter().map(|l| vec![l.source]).collect();
    let mut cell = start;
    loop {
        let step = dp.memo[cell.as_slice()].expect("true cell records a step");
        if step.0 == u32::MAX {
            break;
        }
        let (i, v) = (step.0 as usize, step.1 as usize);
        let w = norm.weight(cell[i] as usize, v).expect("step follows an edge");
        paths[i].push(v);
        cell[i] = v as u64;
        cell[k + i] -= w;
    }
    // Copies only ever serve as terminals, so interior vertices keep their ids.
    for (p, l) in paths.iter_mut().zip(&inst.links) {
        let last = p.len() - 1;
        p[0] = l.source;
        p[last] = l.sink;
    }
    Ok(LinkageRun {
        solution: Some(LinkageSolution { paths }),
        cells,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkEdgeJson {
    pub from: String,
    pub to: String,
    pub w: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkJson {
    pub source: String,
    pub sink: String,
    pub length: u64,
    pub b: Rational,
    pub r: Rational,
}

/// Wire format for the `linkage` command.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkageJson {
    pub vertices: Vec<String>,
    pub edges: Vec<LinkEdgeJson>,
    pub links: Vec<LinkJson>,
}

impl LinkageInstance {
    pub fn from_json(json: &LinkageJson) -> Result<Self> {
        let index: HashMap<&str, usize> = json
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.as_str(), i))
            .collect();
        let lookup = |v: &str| {
            index
                .get(v)
                .copied()
                .ok_or_else(|| Error::DanglingEndpoint(v.to_string()))
        };
        let edges = json
            .edges
            .iter()
            .map(|e| Ok((lookup(&e.from)?, lookup(&e.to)?, e.w)))
            .collect::<Result<Vec<_>>>()?;
        let links = json
            .links
            .iter()
            .map(|l| {
                Ok(Link {
                    source: lookup(&l.source)?,
                    sink: lookup(&l.sink)?,
                    length: l.length,
                    salience: l.b.clone(),
                    reward: l.r.clone(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        LinkageInstance::new(json.vertices.clone(), edges, links)
    }

    pub fn to_json(&self) -> LinkageJson {
        LinkageJson {
            vertices: self.names.clone(),
            edges: self
                .edges
                .iter()
                .map(|&(a, b, w)| LinkEdgeJson {
                    from: self.names[a].clone(),
                    to: self.names[b].clone(),
                    w,
                })
                .collect(),
            links: self
                .links
                .iter()
                .map(|l| LinkJson {
                    source: self.names[l.source].clone(),
                    sink: self.names[l.sink].clone(),
                    length: l.length,
                    b: l.salience.clone(),
                    r: l.reward.clone(),
                })
                .collect(),
        }
    }
}
