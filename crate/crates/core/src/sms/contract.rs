//! Candidate contracted solutions `H′` with weights `w′`, and the linkage
//! instance that realizes them in `G`.

use crate::error::Result;
use crate::graph::{TaskGraph, VertexId};
use crate::linkage::{Link, LinkageInstance};
use crate::rational::Rational;

use super::frame::{GuessFrame, ReachabilityGraph};

/// One possible out-edge set of an `H` vertex: `(to, fixed, domain)` per edge.
type EdgeChoice = Vec<(usize, bool, Vec<u64>)>;

/// Receives `w′` and the distances to `t`; `Ok(false)` stops the stream.
pub type WeightingVisitor<'a> = dyn FnMut(&[u64], &[u64]) -> Result<bool> + 'a;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContractedEdge {
    /// Indices into [`ContractedGraph::vertices`].
    pub from: usize,
    pub to: usize,
    /// Set for the two edges out of a branching vertex: they are edges of `G`
    /// and keep their weight.
    pub fixed: bool,
    /// Whether the edge lies on the agent's path `P′`.
    pub on_path: bool,
    /// Candidate values of `w′` for this edge.
    pub domain: Vec<u64>,
}

/// A spanning subgraph `H′` of `H` with the out-degree pattern of a solution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContractedGraph {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<ContractedEdge>,
    /// Per branching vertex: indices of its edges to `uᵢ*` and `uᵢ◇`.
    pub branches: Vec<(usize, usize)>,
}

/// Every `H′` consistent with `frame`: branching vertices keep exactly their
/// two guessed out-edges, `t` none, every other vertex exactly one. The
/// greedy path `P′` must visit all branching vertices, every vertex must be
/// reachable from `s`, and each extra merge vertex must have in-degree ≥ 2.
pub(crate) fn enumerate_contractions(
    g: &TaskGraph,
    weights: &[u64],
    h: &ReachabilityGraph,
    frame: &GuessFrame,
    s: VertexId,
    t: VertexId,
) -> Vec<ContractedGraph> {
    let n = h.vertices.len();
    let idx = |v: VertexId| h.index_of(v).expect("frame vertex in H");
    let (si, ti) = (idx(s), idx(t));
    let weight = |a: VertexId, b: VertexId| weights[g.find_edge(a, b).expect("guessed edge")];

    // Out-edge options per H vertex: (to, fixed, domain).
    let mut options: Vec<Vec<EdgeChoice>> = Vec::with_capacity(n);
    let mut branch_of = vec![None; n];
    for (i, &u) in frame.branching.iter().enumerate() {
        branch_of[idx(u)] = Some(i);
    }
    for (hv, branch) in branch_of.iter().enumerate() {
        let opts = if hv == ti {
            vec![Vec::new()]
        } else if let Some(i) = *branch {
            let u = frame.branching[i];
            let (x, y) = (frame.star[i], frame.diamond[i]);
            vec![vec![
                (idx(x), true, vec![weight(u, x)]),
                (idx(y), true, vec![weight(u, y)]),
            ]]
        } else {
            h.out(hv)
                .map(|(to, lens)| vec![(to, false, lens.to_vec())])
                .collect()
        };
        options.push(opts);
    }
    if options.iter().any(Vec::is_empty) {
        return Vec::new();
    }
    let merge_idx: Vec<usize> = frame.merges.iter().map(|&v| idx(v)).collect();

    let mut out = Vec::new();
    let mut choice = vec![0usize; n];
    loop {
        if let Some(cg) = assemble(&options, &choice, &branch_of, &merge_idx, si, ti, &h.vertices) {
            out.push(cg);
        }
        // Odometer over the option lists.
        let mut pos = 0;
        loop {
            if pos == n {
                return out;
            }
            choice[pos] += 1;
            if choice[pos] < options[pos].len() {
                break;
            }
            choice[pos] = 0;
            pos += 1;
        }
    }
}

fn assemble(
    options: &[Vec<EdgeChoice>],
    choice: &[usize],
    branch_of: &[Option<usize>],
    merge_idx: &[usize],
    si: usize,
    ti: usize,
    vertices: &[VertexId],
) -> Option<ContractedGraph> {
    let n = options.len();
    let mut edges = Vec::new();
    let mut first_edge = vec![0; n];
    for (hv, opts) in options.iter().enumerate() {
        first_edge[hv] = edges.len();
        for (to, fixed, domain) in &opts[choice[hv]] {
            edges.push(ContractedEdge {
                from: hv,
                to: *to,
                fixed: *fixed,
                on_path: false,
                domain: domain.clone(),
            });
        }
    }
    // P′: star edges at branching vertices, the only edge elsewhere.
    let mut cur = si;
    let mut visited_branches = 0;
    while cur != ti {
        let e = first_edge[cur];
        if branch_of[cur].is_some() {
            visited_branches += 1;
        }
        edges[e].on_path = true;
        cur = edges[e].to;
    }
    if visited_branches != branch_of.iter().filter(|b| b.is_some()).count() {
        return None;
    }
    let mut seen = vec![false; n];
    seen[si] = true;
    let mut indeg = vec![0; n];
    for hv in 0..n {
        let range = first_edge[hv]..first_edge.get(hv + 1).copied().unwrap_or(edges.len());
        for e in &edges[range] {
            indeg[e.to] += 1;
            if seen[hv] {
                seen[e.to] = true;
            }
        }
    }
    if !seen.iter().all(|&x| x) || merge_idx.iter().any(|&m| indeg[m] < 2) {
        return None;
    }
    let branches = (0..n)
        .filter(|&hv| branch_of[hv].is_some())
        .map(|hv| (first_edge[hv], first_edge[hv] + 1))
        .collect();
    Some(ContractedGraph {
        vertices: vertices.to_vec(),
        edges,
        branches,
    })
}

/// `Dist_{H′}(·, t)` under `wprime`.
pub fn contracted_distances(cg: &ContractedGraph, wprime: &[u64], t_index: usize) -> Vec<u64> {
    let n = cg.vertices.len();
    let mut dist = vec![u64::MAX; n];
    dist[t_index] = 0;
    // Vertices are topologically ordered and edges grouped by tail.
    for hv in (0..n).rev() {
        for (e, edge) in cg.edges.iter().enumerate() {
            if edge.from == hv && dist[edge.to] != u64::MAX {
                dist[hv] = dist[hv].min(wprime[e] + dist[edge.to]);
            }
        }
    }
    dist
}

/// Streams every weighting `w′` with `Σ w′ ≤ total` that satisfies the
/// strict temptation inequality at each branching vertex and keeps every
/// `P′` edge within the reward. `visit` receives `w′` and the distances to
/// `t`; returning `Ok(false)` stops the stream.
pub fn enumerate_weightings(
    cg: &ContractedGraph,
    t_index: usize,
    total: u64,
    salience: &Rational,
    reward: &Rational,
    visit: &mut WeightingVisitor,
) -> Result<()> {
    let domains: Vec<Vec<u64>> = cg
        .edges
        .iter()
        .map(|e| {
            e.domain
                .iter()
                .copied()
                .filter(|&l| !e.on_path || cost_on_path(e, l, 0, salience) <= *reward)
                .collect()
        })
        .collect();
    let mut wprime = vec![0; cg.edges.len()];

    #[allow(clippy::too_many_arguments)]
    fn rec(
        cg: &ContractedGraph,
        domains: &[Vec<u64>],
        t_index: usize,
        i: usize,
        left: u64,
        wprime: &mut Vec<u64>,
        salience: &Rational,
        reward: &Rational,
        visit: &mut WeightingVisitor,
    ) -> Result<bool> {
        if i == domains.len() {
            let dist = contracted_distances(cg, wprime, t_index);
            if !admissible(cg, wprime, &dist, salience, reward) {
                return Ok(true);
            }
            return visit(wprime, &dist);
        }
        for &l in &domains[i] {
            if l > left {
                break;
            }
            wprime[i] = l;
            if !rec(cg, domains, t_index, i + 1, left - l, wprime, salience, reward, visit)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    rec(cg, &domains, t_index, 0, total, &mut wprime, salience, reward, visit).map(|_| ())
}

/// Perceived cost at the tail of a `P′` edge when the rest of the way is
/// `rest`: a fixed edge is one step, any other segment is at least its length.
fn cost_on_path(e: &ContractedEdge, len: u64, rest: u64, salience: &Rational) -> Rational {
    if e.fixed {
        salience * Rational::from_u64(len) + Rational::from_u64(rest)
    } else {
        Rational::from_u64(len + rest)
    }
}

fn admissible(
    cg: &ContractedGraph,
    wprime: &[u64],
    dist: &[u64],
    salience: &Rational,
    reward: &Rational,
) -> bool {
    let perceived = |e: usize| {
        let edge = &cg.edges[e];
        salience * Rational::from_u64(wprime[e]) + Rational::from_u64(dist[edge.to])
    };
    cg.branches.iter().all(|&(star, diamond)| perceived(star) < perceived(diamond))
        && cg.edges.iter().enumerate().all(|(e, edge)| {
            !edge.on_path || cost_on_path(edge, wprime[e], dist[edge.to], salience) <= *reward
        })
}

/// The linkage instance whose solutions are subdivisions of `H′` in `G`:
/// one link per `H′` edge between private copies of its endpoints, routed
/// through vertices outside `V(H)`. Also returns the `G` vertex behind each
/// linkage vertex.
#[allow(clippy::too_many_arguments)]
pub(crate) fn linkage_for(
    g: &TaskGraph,
    weights: &[u64],
    cg: &ContractedGraph,
    wprime: &[u64],
    dist: &[u64],
    salience: &Rational,
    reward: &Rational,
) -> (LinkageInstance, Vec<VertexId>) {
    let mut in_h = vec![false; g.len()];
    for &v in &cg.vertices {
        in_h[v] = true;
    }
    let mut local = vec![usize::MAX; g.len()];
    let mut origin = Vec::new();
    for v in 0..g.len() {
        if !in_h[v] {
            local[v] = origin.len();
            origin.push(v);
        }
    }
    let mut edges = Vec::new();
    for (e, edge) in g.edges().iter().enumerate() {
        if !in_h[edge.tail] && !in_h[edge.head] {
            edges.push((local[edge.tail], local[edge.head], weights[e]));
        }
    }
    let mut links = Vec::new();
    for (j, ce) in cg.edges.iter().enumerate() {
        let (u, v) = (cg.vertices[ce.from], cg.vertices[ce.to]);
        let src = origin.len();
        let snk = src + 1;
        origin.push(u);
        origin.push(v);
        if let Some(e) = g.find_edge(u, v) {
            edges.push((src, snk, weights[e]));
        }
        if !ce.fixed {
            for &e in g.out_edges(u) {
                let head = g.edge(e).head;
                if !in_h[head] {
                    edges.push((src, local[head], weights[e]));
                }
            }
            for &e in g.in_edges(v) {
                let tail = g.edge(e).tail;
                if !in_h[tail] {
                    edges.push((local[tail], snk, weights[e]));
                }
            }
        }
        let length = wprime[j];
        let (sal, rew) = if ce.on_path {
            (
                salience.clone(),
                reward - Rational::from_u64(dist[ce.to]),
            )
        } else {
            (Rational::one(), Rational::from_u64(length))
        };
        links.push(Link {
            source: src,
            sink: snk,
            length,
            salience: sal,
            reward: rew,
        });
    }
    let names = (0..origin.len()).map(|i| format!("#{i}")).collect();
    let inst = LinkageInstance::new(names, edges, links).expect("subgraph of a DAG");
    (inst, origin)
}
