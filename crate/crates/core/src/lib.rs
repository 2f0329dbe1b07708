//! Acyclic binary CP-nets and profiles of them (mCP-nets): dominance,
//! optimality, Pareto and majority voting, reduction gadgets, and a
//! brute-force oracle for cross-checking all of it on small instances.

pub mod error;
pub mod formula;
pub mod gadgets;
pub mod io;
pub mod model;
pub mod oracle;
pub mod semantics;
pub mod voting;

pub use error::{Error, Result};
pub use formula::{CnfFormula, Literal, PartialAssignment, Qbf2Formula};
pub use model::{CpNet, CpTable, FeatureId, McpNet, NetBuilder, Outcome, Value};
pub use semantics::{DominanceAnswer, FlipSequence, FlipStep, SearchConfig};
