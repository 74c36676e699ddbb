//! Routing protocols built from the graph rewrite rules.
//!
//! * Bell pairs: [`repeater_protocol`] isolates a path and splices it with X
//!   measurements; [`x_protocol`] splices first and only then cuts the two
//!   endpoints loose, which never costs more.
//! * GHZ states: a [`RepeaterLine`] carries the targets with one spare vertex
//!   between consecutive intermediate targets. [`ghz_extract_lc_variant`]
//!   runs local complementations along the line, [`ghz_extract_x_variant`]
//!   X-measures the spare vertices instead. Both can run with or without
//!   isolating the line first; [`cost_with_isolation`] and
//!   [`cost_without_isolation`] count the difference.

mod cost;
mod ghz;
mod line;
mod report;
mod route;

use thiserror::Error;

use crate::graph::{GraphError, VertexId};

pub use cost::{
    compare_costs, cost_with_isolation, cost_without_isolation, isolation_cost_formula, no_isolation_cost_formula,
    reduce_to_canonical, CostComparison,
};
pub use ghz::{ghz_extract_lc_variant, ghz_extract_x_variant, ghz_star_center};
pub use line::{build_repeater_line, LineLayout, RepeaterLine};
pub use report::{run_script, Directive, Executor, NeighborhoodSnapshot, ProtocolReport, Step};
pub use route::{find_route, isolate_path, repeater_protocol, shortest_paths, x_protocol};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProtocolError {
    #[error(transparent)]
    Graph(#[from] GraphError),

    #[error("no path between {0} and {1}")]
    NoPath(VertexId, VertexId),

    #[error("invalid path: {0}")]
    InvalidPath(String),

    #[error("invalid repeater line: {0}")]
    InvalidLine(String),

    #[error("no repeater line found through targets {0:?}")]
    LineNotFound(Vec<VertexId>),

    #[error("step {step}: vertex {vertex} is not live")]
    StaleVertex { step: usize, vertex: VertexId },

    #[error("post-condition failed: {0}")]
    PostCondition(String),
}

pub type ProtocolResult<T> = Result<T, ProtocolError>;
