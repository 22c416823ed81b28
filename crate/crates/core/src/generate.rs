//! Seeded random instances for testing and the `gen random` command.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::agent::cost_table;
use crate::graph::TaskGraph;
use crate::instance::{prune, PlanningInstance};
use crate::linkage::{Link, LinkageInstance};
use crate::rational::Rational;

#[derive(Debug, Clone)]
pub struct RandomSpec {
    pub n: usize,
    /// Target edge count; capped at what a DAG on `n` vertices allows.
    pub edges: usize,
    pub max_w: u64,
    /// Cap on the sum of weights (integer weights only).
    pub max_total: Option<u64>,
    pub rational_weights: bool,
    pub saliences: Vec<Rational>,
    /// Restrict the result to vertices on some `s`-`t` path.
    pub prune: bool,
    pub seed: u64,
}

impl Default for RandomSpec {
    fn default() -> Self {
        RandomSpec {
            n: 7,
            edges: 11,
            max_w: 4,
            max_total: None,
            rational_weights: false,
            saliences: vec![
                Rational::one(),
                Rational::new(3, 2),
                Rational::from_integer(2),
                Rational::from_integer(3),
            ],
            prune: true,
            seed: 0,
        }
    }
}

/// Random DAG edges over `0..n` (forward in index order), always containing a
/// `0`-`(n-1)` path.
fn random_dag(rng: &mut ChaCha8Rng, n: usize, target_edges: usize) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    if n < 2 {
        return edges;
    }
    let mut present = vec![vec![false; n]; n];
    let mut backbone: Vec<usize> = (1..n - 1).filter(|_| rng.gen_bool(0.5)).collect();
    backbone.insert(0, 0);
    backbone.push(n - 1);
    for w in backbone.windows(2) {
        present[w[0]][w[1]] = true;
        edges.push((w[0], w[1]));
    }
    let max_edges = n * (n - 1) / 2;
    let target = target_edges.min(max_edges);
    let mut candidates: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .filter(|&(a, b)| !present[a][b])
        .collect();
    candidates.shuffle(rng);
    for (a, b) in candidates {
        if edges.len() >= target {
            break;
        }
        edges.push((a, b));
    }
    edges
}

/// Picks a reward near one of the instance's perceived costs so that both
/// motivating and non-motivating instances are common.
fn critical_reward(rng: &mut ChaCha8Rng, inst: &PlanningInstance) -> Rational {
    let table = cost_table(inst);
    let mut values: Vec<Rational> = (0..inst.graph.len())
        .filter_map(|v| table.perceived(v).cloned())
        .collect();
    values.sort();
    values.dedup();
    let base = values.choose(rng).cloned().unwrap_or_default();
    match rng.gen_range(0..3) {
        0 => base,
        1 => (base - Rational::new(1, 2)).max(Rational::zero()),
        _ => base + Rational::one(),
    }
}

pub fn random_instance(spec: &RandomSpec) -> PlanningInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let n = spec.n.max(2);
    let pairs = random_dag(&mut rng, n, spec.edges);
    let mut weights: Vec<Rational> = pairs
        .iter()
        .map(|_| {
            if spec.rational_weights {
                let den = rng.gen_range(1..=4i64);
                Rational::new(rng.gen_range(0..=spec.max_w as i64 * den), den)
            } else {
                Rational::from_integer(rng.gen_range(0..=spec.max_w as i64))
            }
        })
        .collect();
    if let (Some(cap), false) = (spec.max_total, spec.rational_weights) {
        let mut ints: Vec<u64> = weights.iter().map(|w| w.to_u64().unwrap()).collect();
        while ints.iter().sum::<u64>() > cap {
            let positive: Vec<usize> = (0..ints.len()).filter(|&i| ints[i] > 0).collect();
            let i = *positive.choose(&mut rng).unwrap();
            ints[i] -= 1;
        }
        weights = ints.into_iter().map(Rational::from_u64).collect();
    }
    let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let edges: Vec<(String, String, Rational)> = pairs
        .iter()
        .zip(weights)
        .map(|(&(a, b), w)| (names[a].clone(), names[b].clone(), w))
        .collect();
    let salience = spec
        .saliences
        .choose(&mut rng)
        .cloned()
        .unwrap_or_else(Rational::one);
    let last = names[n - 1].clone();
    let mut inst =
        PlanningInstance::from_named(&names, &edges, "v0", &last, Rational::zero(), salience)
            .expect("generated DAG is valid");
    if spec.prune {
        inst = prune(&inst).expect("backbone guarantees an s-t path");
    }
    let reward = critical_reward(&mut rng, &inst);
    inst.with_reward(reward)
}

/// A random instance built around a tempting shortcut: from `u` the agent
/// prefers a zero-weight step onto a chain of unit edges, while the direct
/// edge of weight 2 to the chain's end is truly shorter. Keeping the shortcut
/// lowers the perceived cost one step earlier, so with the chosen reward the
/// instance usually needs one branching vertex. Has at most `n` vertices
/// (at least 6) and total weight at most `max_total` (at least 6).
pub fn planted_instance(n: usize, extra_edges: usize, max_total: u64, seed: u64) -> PlanningInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(6..=n.max(6));
    let p = rng.gen_range(0..=n - 6);
    let mut edges: Vec<(usize, usize, u64)> = Vec::new();
    let mut budget = max_total.max(6) - 6;
    let add = |edges: &mut Vec<(usize, usize, u64)>, a: usize, b: usize, w: u64| edges.push((a, b, w));
    // A heavier lead-in would become the bottleneck on its own.
    for i in 0..p {
        add(&mut edges, i, i + 1, 0);
    }
    let (x, u, us, a, b, end) = (p, p + 1, p + 2, p + 3, p + 4, p + 5);
    for (from, to, w) in [(x, u, 1), (u, us, 0), (us, a, 1), (a, b, 1), (b, end, 1), (u, end, 2)] {
        add(&mut edges, from, to, w);
    }
    for i in end..n - 1 {
        let w = rng.gen_range(0..=budget.min(1));
        budget -= w;
        add(&mut edges, i, i + 1, w);
    }
    let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let build = |edges: &[(usize, usize, u64)], reward: Rational| {
        let named: Vec<(String, String, Rational)> = edges
            .iter()
            .map(|&(a, b, w)| (names[a].clone(), names[b].clone(), Rational::from_u64(w)))
            .collect();
        PlanningInstance::from_named(
            &names,
            &named,
            "v0",
            &names[n - 1],
            reward,
            Rational::from_integer(3),
        )
        .expect("planted DAG is valid")
    };
    let core = build(&edges, Rational::zero());
    let reward = crate::agent::min_reward(&core).expect("backbone reaches t");
    let mut candidates: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .filter(|&(a, b)| !edges.iter().any(|e| (e.0, e.1) == (a, b)))
        .collect();
    candidates.shuffle(&mut rng);
    for (a, b) in candidates.into_iter().take(extra_edges) {
        let w = rng.gen_range(0..=budget.min(3));
        budget -= w;
        add(&mut edges, a, b, w);
    }
    build(&edges, reward)
}

#[derive(Debug, Clone)]
pub struct RandomLinkageSpec {
    pub n: usize,
    pub edges: usize,
    pub max_total: u64,
    pub links: usize,
    pub seed: u64,
}

impl Default for RandomLinkageSpec {
    fn default() -> Self {
        RandomLinkageSpec {
            n: 7,
            edges: 12,
            max_total: 12,
            links: 2,
            seed: 0,
        }
    }
}

fn path_lengths(g: &TaskGraph, from: usize, to: usize) -> Vec<u64> {
    let mut acc = Vec::new();
    fn go(g: &TaskGraph, u: usize, to: usize, len: u64, acc: &mut Vec<u64>) {
        if u == to {
            acc.push(len);
            return;
        }
        for &e in g.out_edges(u) {
            let edge = g.edge(e);
            go(g, edge.head, to, len + edge.weight.to_u64().unwrap(), acc);
        }
    }
    go(g, from, to, 0, &mut acc);
    acc
}

/// A random linkage instance whose target lengths are usually realizable.
pub fn random_linkage_instance(spec: &RandomLinkageSpec) -> LinkageInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let n = spec.n.max(3);
    let pairs = random_dag(&mut rng, n, spec.edges);
    let mut ints: Vec<u64> = pairs.iter().map(|_| rng.gen_range(0..=4)).collect();
    while ints.iter().sum::<u64>() > spec.max_total {
        let positive: Vec<usize> = (0..ints.len()).filter(|&i| ints[i] > 0).collect();
        let i = *positive.choose(&mut rng).unwrap();
        ints[i] -= 1;
    }
    let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let named: Vec<(String, String, Rational)> = pairs
        .iter()
        .zip(&ints)
        .map(|(&(a, b), &w)| (names[a].clone(), names[b].clone(), Rational::from_u64(w)))
        .collect();
    let g = TaskGraph::new(&names, &named).expect("valid DAG");
    let connected: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .filter(|&(a, b)| g.reachable_from(a)[b])
        .collect();
    let saliences = [Rational::one(), Rational::new(3, 2), Rational::from_integer(2)];
    let mut links = Vec::new();
    for _ in 0..spec.links.max(1) {
        let &(a, b) = connected.choose(&mut rng).expect("backbone gives a pair");
        let lengths = path_lengths(&g, a, b);
        let length = if rng.gen_bool(0.75) {
            *lengths.choose(&mut rng).unwrap()
        } else {
            rng.gen_range(0..=spec.max_total)
        };
        let salience = saliences.choose(&mut rng).unwrap().clone();
        let slack = rng.gen_range(0..=spec.max_total as i64);
        let reward = Rational::from_u64(length) + Rational::from_integer(slack);
        links.push(Link {
            source: a,
            sink: b,
            length,
            salience,
            reward,
        });
    }
    let edges = pairs
        .iter()
        .zip(&ints)
        .map(|(&(a, b), &w)| (a, b, w))
        .collect();
    LinkageInstance::new(names, edges, links).expect("valid linkage instance")
}
