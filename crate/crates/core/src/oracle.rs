//! Exhaustive reference implementations, used to cross-check the solvers on
//! small instances. Every cap is a hard error so a check can never pass by
//! silently looking at fewer candidates.

use crate::agent::{greedy_walk, is_motivating, perceived_path_cost};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, VertexId};
use crate::instance::PlanningInstance;
use crate::linkage::{LinkageInstance, LinkageSolution};
use crate::path::PathResult;
use crate::rational::Rational;
use crate::sms::SmsSolution;

/// Default cap on candidate subgraphs examined by [`brute_force_sms`].
pub const DEFAULT_SUBGRAPH_CAP: u64 = 1 << 22;
/// Edge cap for [`enumerate_minimal_motivating_subgraphs`].
pub const MINIMAL_EDGE_CAP: usize = 16;

/// Minimum-length motivating `s`-`t` path by enumerating all `s`-`t` paths.
pub fn brute_force_motivating_path(inst: &PlanningInstance, max_paths: u64) -> Result<PathResult> {
    let g = &inst.graph;
    let to_t = g.reaching(inst.t);
    let mut best: Option<(Rational, Vec<VertexId>)> = None;
    let mut count = 0u64;
    let mut stack = vec![inst.s];
    let mut weights: Vec<Rational> = Vec::new();

    fn go(
        inst: &PlanningInstance,
        to_t: &[bool],
        stack: &mut Vec<VertexId>,
        weights: &mut Vec<Rational>,
        count: &mut u64,
        max_paths: u64,
        best: &mut Option<(Rational, Vec<VertexId>)>,
    ) -> Result<()> {
        let u = *stack.last().unwrap();
        if u == inst.t {
            *count += 1;
            if *count > max_paths {
                return Err(Error::BudgetExceeded { limit: max_paths });
            }
            let motivating = (0..weights.len())
                .all(|i| perceived_path_cost(&weights[i..], &inst.salience) <= inst.reward);
            if motivating {
                let len: Rational = weights.iter().sum();
                if best.as_ref().is_none_or(|(b, _)| len < *b) {
                    *best = Some((len, stack.clone()));
                }
            }
            return Ok(());
        }
        for &e in inst.graph.out_edges(u) {
            let edge = inst.graph.edge(e);
            if !to_t[edge.head] {
                continue;
            }
            stack.push(edge.head);
            weights.push(edge.weight.clone());
            go(inst, to_t, stack, weights, count, max_paths, best)?;
            stack.pop();
            weights.pop();
        }
        Ok(())
    }

    if to_t[inst.s] {
        go(inst, &to_t, &mut stack, &mut weights, &mut count, max_paths, &mut best)?;
    }
    Ok(match best {
        Some((length, path)) => PathResult::Finite { length, path },
        None => PathResult::Infinite,
    })
}

fn solution_for(inst: &PlanningInstance, mut edges: Vec<EdgeId>) -> SmsSolution {
    edges.sort_unstable();
    let sub = inst.restrict_to_edges(edges.iter().copied());
    let branching_count = sub.branching_vertices().len();
    SmsSolution {
        agent_path: greedy_walk(&sub),
        edges,
        branching_count,
    }
}

fn motivates_edges(inst: &PlanningInstance, edges: &[EdgeId]) -> bool {
    is_motivating(&inst.restrict_to_edges(edges.iter().copied()))
        .map(|r| r.motivating)
        .unwrap_or(false)
}

/// Walks all pruned subgraphs: in topological order, every vertex reached
/// from `s` (other than `t`) picks a non-empty set of out-edges toward `t`.
struct Enumerator<'a> {
    inst: &'a PlanningInstance,
    useful: Vec<Vec<EdgeId>>,
    max_branching: usize,
    cap: u64,
    seen: u64,
    chosen: Vec<EdgeId>,
    reached: Vec<u32>,
}

impl<'a> Enumerator<'a> {
    fn new(inst: &'a PlanningInstance, max_branching: usize, cap: u64) -> Result<Self> {
        let g = &inst.graph;
        let to_t = g.reaching(inst.t);
        let useful: Vec<Vec<EdgeId>> = (0..g.len())
            .map(|u| {
                g.out_edges(u)
                    .iter()
                    .copied()
                    .filter(|&e| to_t[g.edge(e).head])
                    .collect()
            })
            .collect();
        if let Some(d) = useful.iter().map(Vec::len).max() {
            if d > 20 {
                return Err(Error::InstanceTooLarge(format!("out-degree {d}")));
            }
        }
        let mut reached = vec![0; g.len()];
        reached[inst.s] = 1;
        Ok(Enumerator {
            inst,
            useful,
            max_branching,
            cap,
            seen: 0,
            chosen: Vec::new(),
            reached,
        })
    }

    fn run(&mut self, visit: &mut dyn FnMut(&[EdgeId]) -> bool) -> Result<()> {
        if !self.inst.graph.reaching(self.inst.t)[self.inst.s] {
            return Ok(());
        }
        self.rec(0, 0, visit).map(|_| ())
    }

    /// Returns `Ok(false)` once `visit` asks to stop.
    fn rec(
        &mut self,
        pos: usize,
        branching: usize,
        visit: &mut dyn FnMut(&[EdgeId]) -> bool,
    ) -> Result<bool> {
        let inst = self.inst;
        let g = &inst.graph;
        if pos == g.len() {
            self.seen += 1;
            if self.seen > self.cap {
                return Err(Error::InstanceTooLarge(format!(
                    "more than {} candidate subgraphs",
                    self.cap
                )));
            }
            return Ok(visit(&self.chosen));
        }
        let u = g.topo_order()[pos];
        if self.reached[u] == 0 || u == self.inst.t {
            return self.rec(pos + 1, branching, visit);
        }
        let out = self.useful[u].clone();
        for mask in 1u32..(1 << out.len()) {
            let size = mask.count_ones() as usize;
            let extra = usize::from(size >= 2);
            if branching + extra > self.max_branching {
                continue;
            }
            let picked: Vec<EdgeId> = (0..out.len())
                .filter(|&i| mask >> i & 1 == 1)
                .map(|i| out[i])
                .collect();
            for &e in &picked {
                self.chosen.push(e);
                self.reached[g.edge(e).head] += 1;
            }
            let go_on = self.rec(pos + 1, branching + extra, visit)?;
            for &e in &picked {
                self.chosen.pop();
                self.reached[g.edge(e).head] -= 1;
            }
            if !go_on {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Fewest-edge motivating subgraph with at most `k` branching vertices, by
/// enumerating every pruned subgraph. At most `cap` candidates are examined.
pub fn brute_force_sms(inst: &PlanningInstance, k: usize, cap: u64) -> Result<Option<SmsSolution>> {
    let mut best: Option<Vec<EdgeId>> = None;
    let mut en = Enumerator::new(inst, k, cap)?;
    en.run(&mut |edges| {
        if best.as_ref().is_none_or(|b| edges.len() < b.len()) && motivates_edges(inst, edges) {
            best = Some(edges.to_vec());
        }
        true
    })?;
    Ok(best.map(|edges| solution_for(inst, edges)))
}

/// Whether some motivating subgraph with at most `k` branching vertices exists.
pub fn brute_force_sms_exists(inst: &PlanningInstance, k: usize, cap: u64) -> Result<bool> {
    let mut found = false;
    let mut en = Enumerator::new(inst, k, cap)?;
    en.run(&mut |edges| {
        found = motivates_edges(inst, edges);
        !found
    })?;
    Ok(found)
}

/// All motivating subgraphs from which no single edge can be deleted without
/// losing motivation.
pub fn enumerate_minimal_motivating_subgraphs(inst: &PlanningInstance) -> Result<Vec<SmsSolution>> {
    let m = inst.graph.edge_count();
    if m > MINIMAL_EDGE_CAP {
        return Err(Error::InstanceTooLarge(format!(
            "{m} edges, minimal enumeration allows {MINIMAL_EDGE_CAP}"
        )));
    }
    let mut found = Vec::new();
    let mut en = Enumerator::new(inst, usize::MAX, u64::MAX)?;
    en.run(&mut |edges| {
        if motivates_edges(inst, edges) {
            let minimal = (0..edges.len()).all(|i| {
                let mut rest = edges.to_vec();
                rest.remove(i);
                !motivates_edges(inst, &rest)
            });
            if minimal {
                found.push(edges.to_vec());
            }
        }
        true
    })?;
    Ok(found.into_iter().map(|e| solution_for(inst, e)).collect())
}

fn link_paths(
    inst: &LinkageInstance,
    link: usize,
    steps: &mut u64,
    max_steps: u64,
) -> Result<Vec<Vec<usize>>> {
    let l = &inst.links()[link];
    let slack = &l.salience - Rational::one();
    let mut out = Vec::new();
    let mut stack = vec![l.source];

    #[allow(clippy::too_many_arguments)]
    fn go(
        inst: &LinkageInstance,
        sink: usize,
        slack: &Rational,
        reward: &Rational,
        d: u64,
        stack: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        steps: &mut u64,
        max_steps: u64,
    ) -> Result<()> {
        *steps += 1;
        if *steps > max_steps {
            return Err(Error::BudgetExceeded { limit: max_steps });
        }
        let u = *stack.last().unwrap();
        if u == sink && stack.len() > 1 {
            if d == 0 {
                out.push(stack.clone());
            }
            return Ok(());
        }
        for &(v, w) in inst.out(u) {
            if w > d || slack * Rational::from_u64(w) + Rational::from_u64(d) > *reward {
                continue;
            }
            stack.push(v);
            go(inst, sink, slack, reward, d - w, stack, out, steps, max_steps)?;
            stack.pop();
        }
        Ok(())
    }

    go(inst, l.sink, &slack, &l.reward, l.length, &mut stack, &mut out, steps, max_steps)?;
    Ok(out)
}

fn compatible(p: &[usize], q: &[usize]) -> bool {
    let interior = |x: &[usize]| x[1..x.len() - 1].to_vec();
    interior(p).iter().all(|v| !q.contains(v)) && interior(q).iter().all(|v| !p.contains(v))
}

/// Exhaustive linkage search: all exact-length guarded paths per link, then a
/// backtracking search for a pairwise compatible choice. Paths may share
/// endpoints but no path may pass through a vertex of another.
pub fn brute_force_linkage(inst: &LinkageInstance, max_steps: u64) -> Result<Option<LinkageSolution>> {
    let mut steps = 0;
    let mut options = Vec::new();
    for i in 0..inst.links().len() {
        options.push(link_paths(inst, i, &mut steps, max_steps)?);
    }

    fn pick(
        options: &[Vec<Vec<usize>>],
        chosen: &mut Vec<Vec<usize>>,
        steps: &mut u64,
        max_steps: u64,
    ) -> Result<bool> {
        let i = chosen.len();
        if i == options.len() {
            return Ok(true);
        }
        for p in &options[i] {
            *steps += 1;
            if *steps > max_steps {
                return Err(Error::BudgetExceeded { limit: max_steps });
            }
            if chosen.iter().all(|q| compatible(p, q)) {
                chosen.push(p.clone());
                if pick(options, chosen, steps, max_steps)? {
                    return Ok(true);
                }
                chosen.pop();
            }
        }
        Ok(false)
    }

    let mut chosen = Vec::new();
    Ok(pick(&options, &mut chosen, &mut steps, max_steps)?.then_some(LinkageSolution { paths: chosen }))
}

/// Independent check of a linkage solution against every requirement.
pub fn check_linkage_solution(
    inst: &LinkageInstance,
    sol: &LinkageSolution,
) -> std::result::Result<(), String> {
    if sol.paths.len() != inst.links().len() {
        return Err(format!("{} paths for {} links", sol.paths.len(), inst.links().len()));
    }
    for (i, (p, l)) in sol.paths.iter().zip(inst.links()).enumerate() {
        if p.len() < 2 || p[0] != l.source || p[p.len() - 1] != l.sink {
            return Err(format!("path {i} has wrong endpoints: {p:?}"));
        }
        let mut weights = Vec::new();
        for w in p.windows(2) {
            match inst.weight(w[0], w[1]) {
                Some(x) => weights.push(x),
                None => return Err(format!("path {i} uses missing edge {}->{}", w[0], w[1])),
            }
        }
        let total: u64 = weights.iter().sum();
        if total != l.length {
            return Err(format!("path {i} has length {total}, wanted {}", l.length));
        }
        let mut d = total;
        for &w in &weights {
            let lhs = (&l.salience - Rational::one()) * Rational::from_u64(w) + Rational::from_u64(d);
            if lhs > l.reward {
                return Err(format!("path {i} violates the guard: {lhs} > {}", l.reward));
            }
            d -= w;
        }
        for (j, q) in sol.paths.iter().enumerate() {
            if i != j && !compatible(p, q) {
                return Err(format!("paths {i} and {j} intersect"));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linkage::Link;
    use crate::reduction::{subset_sum_to_sms, SubsetSumInstance};

    fn q(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    fn sample() -> PlanningInstance {
        subset_sum_to_sms(
            &SubsetSumInstance::new(vec![3, 6, 7], 10).unwrap(),
            &q(2),
            Some(Rational::new(1, 160)),
        )
        .unwrap()
        .instance
    }

    #[test]
    fn single_edge() {
        let inst =
            PlanningInstance::from_named(&["s", "t"], &[("s", "t", q(1))], "s", "t", q(2), q(2)).unwrap();
        let sol = brute_force_sms(&inst, 0, 100).unwrap().unwrap();
        assert_eq!(sol.edges, vec![0]);
        assert_eq!(sol.agent_path, vec![0, 1]);
        assert_eq!(
            brute_force_motivating_path(&inst, 10).unwrap(),
            PathResult::Finite {
                length: q(1),
                path: vec![0, 1]
            }
        );
    }

    #[test]
    fn longer_route_when_short_one_demotivates() {
        // s->a->t has length 4 but perceived 8 at s; s->b->c->t has length 5
        // with perceived costs 6, 6, 4.
        let inst = PlanningInstance::from_named(
            &["s", "a", "b", "c", "t"],
            &[
                ("s", "a", q(4)),
                ("a", "t", q(0)),
                ("s", "b", q(1)),
                ("b", "c", q(2)),
                ("c", "t", q(2)),
            ],
            "s",
            "t",
            q(6),
            q(2),
        )
        .unwrap();
        let res = brute_force_motivating_path(&inst, 10).unwrap();
        let names: Vec<&str> = res.path().unwrap().iter().map(|&v| inst.graph.name(v)).collect();
        assert_eq!(names, vec!["s", "b", "c", "t"]);
        assert_eq!(res.length(), Some(&q(5)));
    }

    #[test]
    fn path_cap_is_a_hard_error() {
        let inst = sample();
        assert_eq!(
            brute_force_motivating_path(&inst, 2),
            Err(Error::BudgetExceeded { limit: 2 })
        );
    }

    #[test]
    fn sample_subgraphs() {
        let inst = sample();
        assert_eq!(brute_force_sms(&inst, 0, DEFAULT_SUBGRAPH_CAP).unwrap(), None);
        let sol = brute_force_sms(&inst, 1, DEFAULT_SUBGRAPH_CAP).unwrap().unwrap();
        let g = &inst.graph;
        let names: Vec<&str> = sol.agent_path.iter().map(|&v| g.name(v)).collect();
        assert_eq!(names, vec!["s", "a0", "a1", "a2", "a3", "t"]);
        let has = |a: &str, b: &str| {
            sol.edges
                .contains(&g.find_edge(g.vertex(a).unwrap(), g.vertex(b).unwrap()).unwrap())
        };
        assert!(has("c1", "c2") && has("c3", "c4") && !has("c2", "c3"));
        assert_eq!(sol.branching_count, 1);
    }

    #[test]
    fn subgraph_cap_is_a_hard_error() {
        assert!(matches!(
            brute_force_sms(&sample(), 1, 3),
            Err(Error::InstanceTooLarge(_))
        ));
    }

    #[test]
    fn minimal_subgraphs_of_a_path() {
        let inst = PlanningInstance::from_named(
            &["s", "a", "t"],
            &[("s", "a", q(1)), ("a", "t", q(1))],
            "s",
            "t",
            q(3),
            q(2),
        )
        .unwrap();
        let all = enumerate_minimal_motivating_subgraphs(&inst).unwrap();
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].edges, vec![0, 1]);
    }

    #[test]
    fn minimal_subgraphs_of_sample_have_thin_off_path_parts() {
        let inst = sample();
        assert!(matches!(
            enumerate_minimal_motivating_subgraphs(&inst),
            Err(Error::InstanceTooLarge(_))
        ));
        // Two items keep the construction within the edge cap.
        let small = subset_sum_to_sms(&SubsetSumInstance::new(vec![1, 2], 2).unwrap(), &q(2), None)
            .unwrap()
            .instance;
        let all = enumerate_minimal_motivating_subgraphs(&small).unwrap();
        assert!(!all.is_empty());
        for sol in &all {
            let sub = small.restrict_to_edges(sol.edges.iter().copied());
            for v in 0..sub.graph.len() {
                if !sol.agent_path.contains(&v) {
                    assert!(sub.graph.out_degree(v) <= 1);
                }
            }
        }
    }

    #[test]
    fn linkage_trivial_and_conflict() {
        let names: Vec<String> = (0..5).map(|i| format!("v{i}")).collect();
        let link = |s, t, len| Link {
            source: s,
            sink: t,
            length: len,
            salience: q(1),
            reward: q(10),
        };
        let one = LinkageInstance::new(names[..2].to_vec(), vec![(0, 1, 3)], vec![link(0, 1, 3)]).unwrap();
        let sol = brute_force_linkage(&one, 100).unwrap().unwrap();
        assert_eq!(sol.paths, vec![vec![0, 1]]);
        check_linkage_solution(&one, &sol).unwrap();

        let cross = LinkageInstance::new(
            names,
            vec![(0, 2, 1), (1, 2, 1), (2, 3, 1), (2, 4, 1)],
            vec![link(0, 3, 2), link(1, 4, 2)],
        )
        .unwrap();
        assert_eq!(brute_force_linkage(&cross, 100).unwrap(), None);
        let bogus = LinkageSolution {
            paths: vec![vec![0, 2, 3], vec![1, 2, 4]],
        };
        assert!(check_linkage_solution(&cross, &bogus).is_err());
    }

    #[test]
    fn oracle_is_scale_invariant() {
        for seed in 0..30 {
            let inst = crate::generate::random_instance(&crate::generate::RandomSpec {
                seed: 900 + seed,
                n: 6,
                edges: 9,
                ..Default::default()
            });
            let factor = Rational::new(7, 3);
            let scaled = {
                let g = &inst.graph;
                let edges: Vec<(String, String, Rational)> = g
                    .edges()
                    .iter()
                    .map(|e| (g.name(e.tail).to_string(), g.name(e.head).to_string(), &e.weight * &factor))
                    .collect();
                PlanningInstance::from_named(
                    g.names(),
                    &edges,
                    g.name(inst.s),
                    g.name(inst.t),
                    &inst.reward * &factor,
                    inst.salience.clone(),
                )
                .unwrap()
            };
            for k in 0..=2 {
                let a = brute_force_sms(&inst, k, DEFAULT_SUBGRAPH_CAP).unwrap();
                let b = brute_force_sms(&scaled, k, DEFAULT_SUBGRAPH_CAP).unwrap();
                assert_eq!(a, b, "seed {seed} k {k}");
            }
        }
    }
}
