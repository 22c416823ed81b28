//! Motivating subgraphs with at most `k` branching vertices, for integer
//! weights, in time polynomial in `n·W` for fixed `k`.
//!
//! For each `k′ = 0..=k` the solver guesses the branching vertices of a
//! solution, the two out-neighbors of each, and the merge vertices. Those
//! vertices with `s` and `t` span a contracted graph `H′`; after guessing its
//! edges and their lengths, a motivating linkage instance decides whether the
//! contracted edges can be realized by internally disjoint paths of `G`.

mod contract;
mod frame;

use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;

use crate::agent::{greedy_walk, is_motivating};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, TaskGraph, VertexId};
use crate::instance::{scale_to_integers, PlanningInstance, ScaledInstance};
use crate::linkage::solve_linkage_with_budget;
use crate::path::{solve_motivating_path, PathResult};

pub use contract::{contracted_distances, enumerate_weightings, ContractedEdge, ContractedGraph};
pub use frame::{build_reachability_graph, GuessFrame, ReachabilityGraph};

pub const DEFAULT_BUDGET: u64 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmsOptions {
    /// Cap on elementary steps: frames, contracted graphs, weightings and
    /// linkage table cells together.
    pub budget: u64,
    /// Worker threads for frame evaluation; 1 keeps the output deterministic.
    pub threads: usize,
}

impl Default for SmsOptions {
    fn default() -> Self {
        SmsOptions {
            budget: DEFAULT_BUDGET,
            threads: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmsSolution {
    /// Edge ids of the input graph, sorted.
    pub edges: Vec<EdgeId>,
    pub branching_count: usize,
    /// The walk the agent takes in the subgraph.
    pub agent_path: Vec<VertexId>,
}

struct Budget {
    limit: u64,
    used: AtomicU64,
}

impl Budget {
    fn charge(&self, n: u64) -> Result<()> {
        let before = self.used.fetch_add(n, Ordering::Relaxed);
        if before.saturating_add(n) > self.limit {
            return Err(Error::InstanceTooLarge(format!(
                "search exceeded the budget of {} steps",
                self.limit
            )));
        }
        Ok(())
    }

    fn remaining(&self) -> u64 {
        self.limit.saturating_sub(self.used.load(Ordering::Relaxed))
    }
}

struct Context<'a> {
    inst: &'a PlanningInstance,
    weights: Vec<u64>,
    total: u64,
    k: usize,
    budget: Budget,
}

/// Solves an instance with integer weights. The instance is pruned first;
/// the result refers to the edges and vertices of `scaled.instance`.
pub fn solve_sms(scaled: &ScaledInstance, k: usize, options: &SmsOptions) -> Result<Option<SmsSolution>> {
    let full = &scaled.instance;
    frame::integer_weights(&full.graph)?;
    let (inst, back) = match full.prune_mapped() {
        Ok(p) => p,
        Err(Error::TargetUnreachable) => return Ok(None),
        Err(e) => return Err(e),
    };
    let weights = frame::integer_weights(&inst.graph)?;
    let total = weights
        .iter()
        .try_fold(0u64, |acc, &w| acc.checked_add(w))
        .ok_or_else(|| Error::InstanceTooLarge("total weight overflows".into()))?;
    let ctx = Context {
        inst: &inst,
        weights,
        total,
        k,
        budget: Budget {
            limit: options.budget,
            used: AtomicU64::new(0),
        },
    };
    let Some(sol) = search(&ctx, options.threads)? else {
        return Ok(None);
    };
    let g = &inst.graph;
    let mut edges: Vec<EdgeId> = sol
        .edges
        .iter()
        .map(|&e| {
            let edge = g.edge(e);
            full.graph
                .find_edge(back[edge.tail], back[edge.head])
                .expect("pruned edge exists in the input")
        })
        .collect();
    edges.sort_unstable();
    Ok(Some(SmsSolution {
        edges,
        branching_count: sol.branching_count,
        agent_path: sol.agent_path.iter().map(|&v| back[v]).collect(),
    }))
}

/// Scales `instance` to integer weights and solves it. Edge and vertex ids
/// are shared with `instance`.
pub fn solve_instance(instance: &PlanningInstance, k: usize, options: &SmsOptions) -> Result<Option<SmsSolution>> {
    solve_sms(&scale_to_integers(instance), k, options)
}

fn search(ctx: &Context, threads: usize) -> Result<Option<SmsSolution>> {
    let inst = ctx.inst;
    let g = &inst.graph;
    if let PathResult::Finite { path, .. } = solve_motivating_path(inst) {
        let edges = path
            .windows(2)
            .map(|w| g.find_edge(w[0], w[1]).expect("path edge"))
            .collect();
        return Ok(Some(finish(inst, edges)));
    }
    if ctx.k == 0 {
        return Ok(None);
    }
    let reach: Vec<Vec<bool>> = (0..g.len()).map(|v| g.reachable_from(v)).collect();
    let pool = if threads > 1 {
        Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(|e| Error::InstanceTooLarge(format!("thread pool: {e}")))?,
        )
    } else {
        None
    };
    for kk in 1..=ctx.k {
        let frames = frame::enumerate_frames(g, inst.s, inst.t, kk, &reach, ctx.budget.remaining())?;
        ctx.budget.charge(frames.len() as u64)?;
        let found = match &pool {
            None => {
                let mut found = None;
                for f in &frames {
                    if let Some(sol) = try_frame(ctx, f)? {
                        found = Some(sol);
                        break;
                    }
                }
                found
            }
            Some(pool) => pool
                .install(|| {
                    frames.par_iter().find_map_any(|f| match try_frame(ctx, f) {
                        Ok(None) => None,
                        other => Some(other),
                    })
                })
                .transpose()?
                .flatten(),
        };
        if found.is_some() {
            return Ok(found);
        }
    }
    Ok(None)
}

fn finish(inst: &PlanningInstance, mut edges: Vec<EdgeId>) -> SmsSolution {
    edges.sort_unstable();
    edges.dedup();
    let sub = inst.restrict_to_edges(edges.iter().copied());
    SmsSolution {
        branching_count: sub.branching_vertices().len(),
        agent_path: greedy_walk(&sub),
        edges,
    }
}

fn try_frame(ctx: &Context, frame: &GuessFrame) -> Result<Option<SmsSolution>> {
    let inst = ctx.inst;
    let g = &inst.graph;
    let (h, work) = frame::reachability_graph(g, &ctx.weights, frame.vertices(g, inst.s, inst.t));
    ctx.budget.charge(work)?;
    let contractions = contract::enumerate_contractions(g, &ctx.weights, &h, frame, inst.s, inst.t);
    ctx.budget.charge(contractions.len() as u64)?;
    let t_index = h.index_of(inst.t).expect("t in H");
    for cg in &contractions {
        let mut found = None;
        contract::enumerate_weightings(
            cg,
            t_index,
            ctx.total,
            &inst.salience,
            &inst.reward,
            &mut |wprime, dist| {
                ctx.budget.charge(1)?;
                found = realize(ctx, cg, wprime, dist)?;
                Ok(found.is_none())
            },
        )?;
        if found.is_some() {
            return Ok(found);
        }
    }
    Ok(None)
}

/// Runs the linkage solver for one weighted `H′` and glues the segments.
fn realize(ctx: &Context, cg: &ContractedGraph, wprime: &[u64], dist: &[u64]) -> Result<Option<SmsSolution>> {
    let inst = ctx.inst;
    let g = &inst.graph;
    let (linkage, origin) =
        contract::linkage_for(g, &ctx.weights, cg, wprime, dist, &inst.salience, &inst.reward);
    let run = solve_linkage_with_budget(&linkage, ctx.budget.remaining()).map_err(|e| match e {
        Error::InstanceTooLarge(_) => Error::InstanceTooLarge(format!(
            "search exceeded the budget of {} steps",
            ctx.budget.limit
        )),
        other => other,
    })?;
    ctx.budget.charge(run.cells)?;
    let Some(sol) = run.solution else {
        return Ok(None);
    };
    let edges: Vec<EdgeId> = sol
        .paths
        .iter()
        .flat_map(|p| p.windows(2).map(|w| (origin[w[0]], origin[w[1]])))
        .map(|(a, b)| g.find_edge(a, b).expect("segment edge exists in G"))
        .collect();
    let result = finish(inst, edges);
    let sub = inst.restrict_to_edges(result.edges.iter().copied());
    let ok = is_motivating(&sub).is_ok_and(|r| r.motivating) && result.branching_count <= ctx.k;
    debug_assert!(ok, "glued subgraph failed re-verification");
    Ok(ok.then_some(result))
}

/// Branching and merging vertex counts of an edge subset.
pub fn branching_and_merging(g: &TaskGraph, edges: &[EdgeId]) -> (usize, usize) {
    let mut outd = vec![0usize; g.len()];
    let mut ind = vec![0usize; g.len()];
    for &e in edges {
        outd[g.edge(e).tail] += 1;
        ind[g.edge(e).head] += 1;
    }
    (
        outd.iter().filter(|&&d| d >= 2).count(),
        ind.iter().filter(|&&d| d >= 2).count(),
    )
}
