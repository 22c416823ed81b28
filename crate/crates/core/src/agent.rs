//! The present-biased agent: perceived costs, greedy moves and abandonment.
//!
//! An agent standing at `u` values a `u`-`t` path as `b` times its first edge
//! plus the rest of the path, picks any path of minimum perceived cost `ζ(u)`
//! and takes its first edge. It abandons at `u` when `ζ(u) > r`; a tie with the
//! reward means the agent keeps going.

use crate::error::{Error, Result};
use crate::graph::VertexId;
use crate::instance::PlanningInstance;
use crate::rational::Rational;

/// `b·w(e₁) + w(e₂) + … + w(eₚ)`; zero for the empty path.
pub fn perceived_path_cost(weights: &[Rational], salience: &Rational) -> Rational {
    match weights.split_first() {
        None => Rational::zero(),
        Some((first, rest)) => salience * first + rest.iter().sum::<Rational>(),
    }
}

/// Remaining true distance and perceived cost to the target for each vertex.
///
/// Vertices with no path to the target carry `None` in both columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CostTable {
    true_dist: Vec<Option<Rational>>,
    perceived: Vec<Option<Rational>>,
}

impl CostTable {
    pub fn true_dist(&self, v: VertexId) -> Option<&Rational> {
        self.true_dist[v].as_ref()
    }

    /// `ζ(v)`.
    pub fn perceived(&self, v: VertexId) -> Option<&Rational> {
        self.perceived[v].as_ref()
    }
}

pub fn cost_table(instance: &PlanningInstance) -> CostTable {
    let g = &instance.graph;
    let b = &instance.salience;
    let n = g.len();
    let mut true_dist: Vec<Option<Rational>> = vec![None; n];
    let mut perceived: Vec<Option<Rational>> = vec![None; n];
    true_dist[instance.t] = Some(Rational::zero());
    perceived[instance.t] = Some(Rational::zero());
    for &u in g.topo_order().iter().rev() {
        if u == instance.t {
            continue;
        }
        let mut best: Option<Rational> = None;
        let mut best_perceived: Option<Rational> = None;
        for &e in g.out_edges(u) {
            let edge = g.edge(e);
            let Some(rest) = &true_dist[edge.head] else {
                continue;
            };
            let d = &edge.weight + rest;
            let p = b * &edge.weight + rest;
            if best.as_ref().is_none_or(|cur| d < *cur) {
                best = Some(d);
            }
            if best_perceived.as_ref().is_none_or(|cur| p < *cur) {
                best_perceived = Some(p);
            }
        }
        true_dist[u] = best;
        perceived[u] = best_perceived;
    }
    CostTable {
        true_dist,
        perceived,
    }
}

/// Heads `v` of out-edges `uv` with `b·w(uv) + dist(v) = ζ(u)`, in
/// topological order.
pub fn greedy_successors(
    instance: &PlanningInstance,
    table: &CostTable,
    u: VertexId,
) -> Vec<VertexId> {
    let g = &instance.graph;
    if u == instance.t {
        return Vec::new();
    }
    let Some(zeta) = table.perceived(u) else {
        return Vec::new();
    };
    g.out_edges(u)
        .iter()
        .filter_map(|&e| {
            let edge = g.edge(e);
            let rest = table.true_dist(edge.head)?;
            (&instance.salience * &edge.weight + rest == *zeta).then_some(edge.head)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MotivationReport {
    pub motivating: bool,
    /// Vertices the agent can visit when ignoring abandonment, topologically
    /// ordered. Independent of the reward.
    pub reachable: Vec<VertexId>,
    /// Earliest reachable vertex where the agent gives up, with its `ζ`.
    pub witness: Option<(VertexId, Rational)>,
    /// Maximum `ζ` over `reachable`: the least reward that motivates.
    pub required_reward: Rational,
}

/// Vertices reachable from `s` along greedy edges, in topological order.
pub fn greedy_reachable(instance: &PlanningInstance, table: &CostTable) -> Vec<VertexId> {
    let g = &instance.graph;
    let mut seen = vec![false; g.len()];
    seen[instance.s] = true;
    let mut out = Vec::new();
    for &u in &g.topo_order()[g.topo_pos(instance.s)..] {
        if !seen[u] {
            continue;
        }
        out.push(u);
        for v in greedy_successors(instance, table, u) {
            seen[v] = true;
        }
    }
    out
}

/// Decides whether every walk the agent may take from `s` reaches `t`.
pub fn is_motivating(instance: &PlanningInstance) -> Result<MotivationReport> {
    let table = cost_table(instance);
    if table.true_dist(instance.s).is_none() {
        return Err(Error::TargetUnreachable);
    }
    let reachable = greedy_reachable(instance, &table);
    let mut witness = None;
    let mut required = Rational::zero();
    for &u in &reachable {
        let zeta = table.perceived(u).expect("greedy vertices reach t");
        if witness.is_none() && *zeta > instance.reward {
            witness = Some((u, zeta.clone()));
        }
        if *zeta > required {
            required = zeta.clone();
        }
    }
    Ok(MotivationReport {
        motivating: witness.is_none(),
        reachable,
        witness,
        required_reward: required,
    })
}

/// Shorthand for `is_motivating(..).motivating`, treating an unreachable
/// target as not motivating.
pub fn motivates(instance: &PlanningInstance) -> bool {
    is_motivating(instance).is_ok_and(|r| r.motivating)
}

/// The least reward for which the instance is motivating.
pub fn min_reward(instance: &PlanningInstance) -> Result<Rational> {
    is_motivating(instance).map(|r| r.required_reward)
}

/// One greedy walk from `s`, taking the topologically earliest successor at
/// ties and ignoring abandonment. Stops at `t` or where no successor exists.
pub fn greedy_walk(instance: &PlanningInstance) -> Vec<VertexId> {
    let table = cost_table(instance);
    let mut walk = vec![instance.s];
    let mut u = instance.s;
    while let Some(&v) = greedy_successors(instance, &table, u).first() {
        walk.push(v);
        u = v;
    }
    walk
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceOutcome {
    ReachedTarget,
    AbandonedAt { vertex: VertexId, perceived: Rational },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AgentTrace {
    pub walk: Vec<VertexId>,
    pub outcome: TraceOutcome,
}

/// Every maximal greedy walk from `s`. Fails with `BudgetExceeded` once more
/// than `max_traces` walks exist.
pub fn enumerate_traces(instance: &PlanningInstance, max_traces: usize) -> Result<Vec<AgentTrace>> {
    let table = cost_table(instance);
    if table.true_dist(instance.s).is_none() {
        return Err(Error::TargetUnreachable);
    }
    let mut traces = Vec::new();
    let mut stack = vec![vec![instance.s]];
    while let Some(walk) = stack.pop() {
        let u = *walk.last().expect("non-empty walk");
        let zeta = table.perceived(u).expect("greedy vertices reach t");
        let outcome = if u == instance.t {
            Some(TraceOutcome::ReachedTarget)
        } else if *zeta > instance.reward {
            Some(TraceOutcome::AbandonedAt {
                vertex: u,
                perceived: zeta.clone(),
            })
        } else {
            None
        };
        match outcome {
            Some(outcome) => {
                if traces.len() == max_traces {
                    return Err(Error::BudgetExceeded {
                        limit: max_traces as u64,
                    });
                }
                traces.push(AgentTrace { walk, outcome });
            }
            None => {
                for v in greedy_successors(instance, &table, u).into_iter().rev() {
                    let mut next = walk.clone();
                    next.push(v);
                    stack.push(next);
                }
            }
        }
    }
    Ok(traces)
}
