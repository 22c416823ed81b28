//! Exact-arithmetic tools for planning with a present-biased agent on a task
//! graph: agent simulation, motivating paths, motivating linkages, the
//! bounded-branching motivating subgraph solver, a Subset-Sum reduction and
//! brute-force oracles.

pub mod agent;
pub mod dot;
pub mod error;
pub mod generate;
pub mod graph;
pub mod instance;
pub mod linkage;
pub mod oracle;
pub mod path;
pub mod rational;
pub mod reduction;
pub mod sms;

pub use error::{Error, Result};
pub use graph::{Edge, EdgeId, TaskGraph, VertexId};
pub use instance::{prune, scale_to_integers, InstanceJson, PlanningInstance, ScaledInstance};
pub use rational::Rational;
