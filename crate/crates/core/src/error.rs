use thiserror::Error;

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("graph contains a cycle through vertex {0:?}")]
    CycleDetected(String),
    #[error("edge {from:?} -> {to:?} has negative weight {weight}")]
    NegativeWeight { from: String, to: String, weight: Rational },
    #[error("edge endpoint {0:?} is not a declared vertex")]
    DanglingEndpoint(String),
    #[error("vertex {0:?} declared more than once")]
    DuplicateVertex(String),
    #[error("self-loop on vertex {0:?}")]
    SelfLoop(String),
    #[error("parallel edge {from:?} -> {to:?}")]
    ParallelEdge { from: String, to: String },
    #[error("no path from the start vertex to the target vertex")]
    TargetUnreachable,
    #[error("salience factor {0} is out of range")]
    InvalidSalience(Rational),
    #[error("reward {0} is negative")]
    NegativeReward(Rational),
    #[error("enumeration exceeded its budget of {limit}")]
    BudgetExceeded { limit: u64 },
    #[error("instance too large: {0}")]
    InstanceTooLarge(String),
    #[error("edge weights or reward are not integers")]
    NonIntegerWeights,
    #[error("epsilon {0} is outside the admissible range")]
    InvalidEpsilon(Rational),
    #[error("subset-sum target is zero; the empty subset is a trivial witness")]
    ZeroTarget,
    #[error("subset-sum instance has no elements")]
    EmptySet,
    #[error("link {0} is malformed: {1}")]
    InvalidLink(usize, String),
}

pub type Result<T> = std::result::Result<T, Error>;
