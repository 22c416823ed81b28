//! Subset-Sum instances turned into single-branching motivating-subgraph
//! instances, plus a small Subset-Sum solver used as a test oracle.

use crate::error::{Error, Result};
use crate::graph::{EdgeId, VertexId};
use crate::instance::{prune, PlanningInstance};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetSumInstance {
    pub items: Vec<u64>,
    pub target: u64,
}

impl SubsetSumInstance {
    pub fn new(items: Vec<u64>, target: u64) -> Result<Self> {
        if items.is_empty() {
            return Err(Error::EmptySet);
        }
        Ok(SubsetSumInstance { items, target })
    }
}

/// What a vertex of a generated instance stands for. `C(i)` and `CStar(i)`
/// are 1-based; `C(n + 1)` and `C(n + 2)` close the c-chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    S,
    A(u8),
    C(usize),
    CStar(usize),
    T,
}

impl Role {
    pub fn name(self) -> String {
        match self {
            Role::S => "s".into(),
            Role::A(i) => format!("a{i}"),
            Role::C(i) => format!("c{i}"),
            Role::CStar(i) => format!("c{i}*"),
            Role::T => "t".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionOutput {
    pub instance: PlanningInstance,
    pub epsilon: Rational,
    /// Role of each vertex, indexed by vertex id.
    pub roles: Vec<Role>,
}

impl ReductionOutput {
    pub fn vertex(&self, role: Role) -> Option<VertexId> {
        self.roles.iter().position(|&r| r == role)
    }

    fn edge(&self, from: Role, to: Role) -> EdgeId {
        let g = &self.instance.graph;
        g.find_edge(self.vertex(from).unwrap(), self.vertex(to).unwrap())
            .expect("edge of the construction")
    }

    /// The subgraph built from a Subset-Sum witness: the a-path plus a c-path
    /// that takes `cᵢcᵢ₊₁` for chosen items and the detour via `cᵢ*`
    /// otherwise. `chosen` holds 0-based item indices.
    pub fn witness_subgraph(&self, chosen: &[usize]) -> PlanningInstance {
        let n = self.roles.iter().filter(|r| matches!(r, Role::CStar(_))).count();
        let mut keep = vec![
            self.edge(Role::S, Role::A(0)),
            self.edge(Role::A(0), Role::A(1)),
            self.edge(Role::A(1), Role::A(2)),
            self.edge(Role::A(2), Role::A(3)),
            self.edge(Role::A(3), Role::T),
            self.edge(Role::A(0), Role::C(1)),
            self.edge(Role::C(n + 1), Role::C(n + 2)),
            self.edge(Role::C(n + 2), Role::T),
        ];
        for i in 1..=n {
            if chosen.contains(&(i - 1)) {
                keep.push(self.edge(Role::C(i), Role::C(i + 1)));
            } else {
                keep.push(self.edge(Role::C(i), Role::CStar(i)));
                keep.push(self.edge(Role::CStar(i), Role::C(i + 1)));
            }
        }
        prune(&self.instance.restrict_to_edges(keep)).expect("a-path connects s and t")
    }
}

/// Weights of the a-path edges `sa₀, a₀a₁, a₁a₂, a₂a₃, a₃t` before adding ε.
fn a_path_weights(b: &Rational) -> [Rational; 5] {
    let one = Rational::one();
    let a3t = &one / b;
    let a2a3 = (&one - &a3t) / b;
    let a1a2 = (&one - &a2a3 - &a3t) / b;
    let a0a1 = (&one - &a1a2 - &a2a3 - &a3t) / b;
    let sa0 = (&one - &a0a1 - &a1a2 - &a2a3 - &a3t) / b;
    [sa0, a0a1, a1a2, a2a3, a3t]
}

/// `ε = w(a₁a₂)/(2W)`, lowered if needed so that `w(cₙ₊₁cₙ₊₂)` stays
/// non-negative.
pub fn auto_epsilon(ss: &SubsetSumInstance, b: &Rational) -> Result<Rational> {
    if ss.target == 0 {
        return Err(Error::ZeroTarget);
    }
    if b <= &Rational::one() {
        return Err(Error::InvalidSalience(b.clone()));
    }
    let [_, _, a1a2, a2a3, _] = a_path_weights(b);
    let by_target = a1a2 / Rational::from_u64(2 * ss.target);
    let by_sign = a2a3 * (b - Rational::one()) / (Rational::from_integer(4) * b);
    Ok(by_target.min(by_sign))
}

/// Builds the reduction instance with reward 1. `epsilon = None` picks
/// [`auto_epsilon`].
pub fn subset_sum_to_sms(
    ss: &SubsetSumInstance,
    b: &Rational,
    epsilon: Option<Rational>,
) -> Result<ReductionOutput> {
    if ss.target == 0 {
        return Err(Error::ZeroTarget);
    }
    if b <= &Rational::one() {
        return Err(Error::InvalidSalience(b.clone()));
    }
    let eps = match epsilon {
        Some(e) => e,
        None => auto_epsilon(ss, b)?,
    };
    let [sa0, a0a1, a1a2, a2a3, a3t] = a_path_weights(b);
    let w_total = Rational::from_u64(ss.target);
    if eps <= Rational::zero() || eps >= &a1a2 / &w_total {
        return Err(Error::InvalidEpsilon(eps));
    }
    let two_eps = Rational::from_integer(2) * &eps;
    let bm1 = b - Rational::one();
    let cn1cn2 = &a2a3 - &two_eps - &two_eps / &bm1;
    if cn1cn2.is_negative() {
        return Err(Error::InvalidEpsilon(eps));
    }

    let n = ss.items.len();
    let mut roles = vec![Role::S, Role::A(0), Role::A(1), Role::A(2), Role::A(3)];
    for i in 1..=n {
        roles.push(Role::C(i));
        roles.push(Role::CStar(i));
    }
    roles.extend([Role::C(n + 1), Role::C(n + 2), Role::T]);
    let names: Vec<String> = roles.iter().map(|r| r.name()).collect();

    let zero = Rational::zero();
    let mut edges: Vec<(String, String, Rational)> = Vec::new();
    let mut add = |a: Role, c: Role, w: Rational| edges.push((a.name(), c.name(), w));
    add(Role::S, Role::A(0), sa0 + &eps / b);
    add(Role::A(0), Role::A(1), a0a1.clone());
    add(Role::A(1), Role::A(2), a1a2.clone());
    add(Role::A(2), Role::A(3), a2a3.clone());
    add(Role::A(3), Role::T, a3t.clone());
    add(Role::A(0), Role::C(1), &a0a1 + &two_eps / &bm1);
    for (i, &x) in ss.items.iter().enumerate() {
        let i = i + 1;
        add(Role::C(i), Role::CStar(i), zero.clone());
        add(Role::C(i), Role::C(i + 1), Rational::from_u64(x) * &a1a2 / &w_total);
        add(Role::CStar(i), Role::C(i + 1), zero.clone());
    }
    add(Role::C(n + 1), Role::C(n + 2), cn1cn2);
    add(Role::C(n + 2), Role::T, a3t + &eps);

    let instance =
        PlanningInstance::from_named(&names, &edges, "s", "t", Rational::one(), b.clone())?;
    Ok(ReductionOutput {
        instance,
        epsilon: eps,
        roles,
    })
}

const DP_TARGET_LIMIT: u64 = 1_000_000;
const BRUTE_FORCE_ITEMS: usize = 24;

/// A subset of item indices summing to the target, or `None`.
pub fn solve_subset_sum(ss: &SubsetSumInstance) -> Result<Option<Vec<usize>>> {
    let n = ss.items.len();
    let target = ss.target;
    if target <= DP_TARGET_LIMIT {
        let t = target as usize;
        // reach[i][s]: some subset of the first i items sums to s.
        let mut reach = vec![vec![false; t + 1]; n + 1];
        reach[0][0] = true;
        for i in 0..n {
            let x = ss.items[i];
            for s in 0..=t {
                reach[i + 1][s] =
                    reach[i][s] || (x as usize <= s && reach[i][s - x as usize]);
            }
        }
        if !reach[n][t] {
            return Ok(None);
        }
        let mut picked = Vec::new();
        let mut s = t;
        for i in (0..n).rev() {
            if !reach[i][s] {
                picked.push(i);
                s -= ss.items[i] as usize;
            }
        }
        picked.reverse();
        return Ok(Some(picked));
    }
    if n <= BRUTE_FORCE_ITEMS {
        for mask in 0u32..(1 << n) {
            let sum: u64 = (0..n).filter(|&i| mask >> i & 1 == 1).map(|i| ss.items[i]).sum();
            if sum == target {
                return Ok(Some((0..n).filter(|&i| mask >> i & 1 == 1).collect()));
            }
        }
        return Ok(None);
    }
    Err(Error::InstanceTooLarge(format!(
        "subset sum with {n} items and target {target}"
    )))
}
