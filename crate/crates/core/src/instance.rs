//! Planning instances `(G, w, s, t, r, b)`, their JSON form, pruning and
//! integer scaling.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Edge, EdgeId, TaskGraph, VertexId};
use crate::rational::Rational;

/// A task graph together with start, target, reward and salience factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanningInstance {
    pub graph: TaskGraph,
    pub s: VertexId,
    pub t: VertexId,
    pub reward: Rational,
    pub salience: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeJson {
    pub from: String,
    pub to: String,
    pub w: Rational,
}

/// Wire format of a planning instance. Rationals travel as `"p/q"` strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceJson {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeJson>,
    pub s: String,
    pub t: String,
    pub r: Rational,
    pub b: Rational,
}

impl PlanningInstance {
    pub fn new(
        graph: TaskGraph,
        s: VertexId,
        t: VertexId,
        reward: Rational,
        salience: Rational,
    ) -> Result<Self> {
        if s >= graph.len() {
            return Err(Error::DanglingEndpoint(format!("#{s}")));
        }
        if t >= graph.len() {
            return Err(Error::DanglingEndpoint(format!("#{t}")));
        }
        if salience < Rational::one() {
            return Err(Error::InvalidSalience(salience));
        }
        if reward.is_negative() {
            return Err(Error::NegativeReward(reward));
        }
        Ok(PlanningInstance {
            graph,
            s,
            t,
            reward,
            salience,
        })
    }

    /// Convenience constructor from named vertices and edges.
    pub fn from_named<S: AsRef<str>>(
        vertices: &[S],
        edges: &[(S, S, Rational)],
        s: &str,
        t: &str,
        reward: Rational,
        salience: Rational,
    ) -> Result<Self> {
        let graph = TaskGraph::new(vertices, edges)?;
        let sv = graph
            .vertex(s)
            .ok_or_else(|| Error::DanglingEndpoint(s.to_string()))?;
        let tv = graph
            .vertex(t)
            .ok_or_else(|| Error::DanglingEndpoint(t.to_string()))?;
        Self::new(graph, sv, tv, reward, salience)
    }

    pub fn from_json(json: &InstanceJson) -> Result<Self> {
        let edges: Vec<(&str, &str, Rational)> = json
            .edges
            .iter()
            .map(|e| (e.from.as_str(), e.to.as_str(), e.w.clone()))
            .collect();
        let vertices: Vec<&str> = json.vertices.iter().map(String::as_str).collect();
        Self::from_named(
            &vertices,
            &edges,
            &json.s,
            &json.t,
            json.r.clone(),
            json.b.clone(),
        )
    }

    pub fn to_json(&self) -> InstanceJson {
        let g = &self.graph;
        InstanceJson {
            vertices: g.names().to_vec(),
            edges: g
                .edges()
                .iter()
                .map(|e| EdgeJson {
                    from: g.name(e.tail).to_string(),
                    to: g.name(e.head).to_string(),
                    w: e.weight.clone(),
                })
                .collect(),
            s: g.name(self.s).to_string(),
            t: g.name(self.t).to_string(),
            r: self.reward.clone(),
            b: self.salience.clone(),
        }
    }

    pub fn weight(&self, e: EdgeId) -> &Rational {
        &self.graph.edge(e).weight
    }

    pub fn with_reward(&self, reward: Rational) -> Self {
        PlanningInstance {
            reward,
            ..self.clone()
        }
    }

    /// Same vertices, only the listed edges.
    pub fn restrict_to_edges(&self, keep: impl IntoIterator<Item = EdgeId>) -> Self {
        PlanningInstance {
            graph: self.graph.edge_subgraph(keep),
            ..self.clone()
        }
    }

    /// Mask of vertices lying on some `s`-`t` path.
    pub fn relevant_vertices(&self) -> Result<Vec<bool>> {
        let from_s = self.graph.reachable_from(self.s);
        if !from_s[self.t] {
            return Err(Error::TargetUnreachable);
        }
        let to_t = self.graph.reaching(self.t);
        Ok(from_s.iter().zip(&to_t).map(|(a, b)| *a && *b).collect())
    }

    /// Like [`prune`], also returning for each new vertex its old index.
    pub fn prune_mapped(&self) -> Result<(PlanningInstance, Vec<VertexId>)> {
        let keep = self.relevant_vertices()?;
        let (graph, map) = self.graph.induced(&keep);
        let mut back = vec![0; graph.len()];
        for (old, new) in map.iter().enumerate() {
            if let Some(new) = new {
                back[*new] = old;
            }
        }
        let inst = PlanningInstance {
            graph,
            s: map[self.s].expect("s kept"),
            t: map[self.t].expect("t kept"),
            reward: self.reward.clone(),
            salience: self.salience.clone(),
        };
        Ok((inst, back))
    }

    /// Vertices with out-degree at least two.
    pub fn branching_vertices(&self) -> Vec<VertexId> {
        (0..self.graph.len())
            .filter(|&v| self.graph.out_degree(v) >= 2)
            .collect()
    }
}

/// The sub-instance induced on vertices that lie on some `s`-`t` path.
pub fn prune(instance: &PlanningInstance) -> Result<PlanningInstance> {
    instance.prune_mapped().map(|(p, _)| p)
}

/// An instance whose weights and reward were multiplied by `scale` to make
/// them integral.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScaledInstance {
    pub instance: PlanningInstance,
    pub scale: Rational,
    pub total_weight: BigInt,
}

impl ScaledInstance {
    /// Divides weights and reward by `scale`, recovering the source instance.
    pub fn unscale(&self) -> PlanningInstance {
        let g = &self.instance.graph;
        let edges = g
            .edges()
            .iter()
            .map(|e| Edge {
                weight: &e.weight / &self.scale,
                ..e.clone()
            })
            .collect();
        PlanningInstance {
            graph: TaskGraph::from_parts(g.names().to_vec(), edges).expect("same shape"),
            reward: &self.instance.reward / &self.scale,
            ..self.instance.clone()
        }
    }
}

fn lcm(a: &BigInt, b: &BigInt) -> BigInt {
    use num_integer::Integer;
    a.lcm(b)
}

/// Multiplies every weight and the reward by the lcm of their denominators.
pub fn scale_to_integers(instance: &PlanningInstance) -> ScaledInstance {
    let g = &instance.graph;
    let mut den = instance.reward.denom();
    for e in g.edges() {
        den = lcm(&den, &e.weight.denom());
    }
    let scale = Rational::from_bigint(den);
    let edges: Vec<Edge> = g
        .edges()
        .iter()
        .map(|e| Edge {
            weight: &e.weight * &scale,
            ..e.clone()
        })
        .collect();
    let mut total = BigInt::zero();
    for e in &edges {
        total += e.weight.numer();
    }
    ScaledInstance {
        instance: PlanningInstance {
            graph: TaskGraph::from_parts(g.names().to_vec(), edges).expect("same shape"),
            reward: &instance.reward * &scale,
            ..instance.clone()
        },
        scale,
        total_weight: total,
    }
}
