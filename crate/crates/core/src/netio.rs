//! JSON network documents, report and script serialization, DOT export.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, GraphError, VertexId};
use crate::grid::{make_grid, GridError, GridSpec};
use crate::protocols::{Directive, ProtocolReport};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NetIoError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },

    #[error("{at}: vertex {vertex} declared twice")]
    DuplicateVertex { vertex: u32, at: String },

    #[error("{at}: edge ({a}, {b}) references undeclared vertex {missing}")]
    DanglingEdge { a: u32, b: u32, missing: u32, at: String },

    #[error("{at}: self-loop on vertex {vertex}")]
    SelfLoop { vertex: u32, at: String },

    #[error("{at}: edge ({a}, {b}) listed twice")]
    DuplicateEdge { a: u32, b: u32, at: String },

    #[error("{at}: coordinates for undeclared vertex {vertex}")]
    UnknownCoordinate { vertex: u32, at: String },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error(transparent)]
    Graph(#[from] GraphError),

    #[error(transparent)]
    Grid(#[from] GridError),
}

pub type NetIoResult<T> = Result<T, NetIoError>;

fn syntax(e: serde_json::Error) -> NetIoError {
    NetIoError::Syntax { line: e.line(), column: e.column(), message: e.to_string() }
}

/// On-disk description of a network.
///
/// With `grid` set, `vertices` and `edges` may be omitted; when given they
/// must describe exactly the lattice.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkDocument {
    #[serde(default)]
    pub vertices: Vec<u32>,
    #[serde(default)]
    pub edges: Vec<(u32, u32)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub coords: BTreeMap<u32, (f64, f64)>,
}

impl NetworkDocument {
    pub fn from_graph(g: &Graph) -> Self {
        NetworkDocument {
            vertices: g.vertices().map(|v| v.0).collect(),
            edges: g.edges().map(|(a, b)| (a.0, b.0)).collect(),
            grid: None,
            coords: BTreeMap::new(),
        }
    }

    pub fn from_grid(spec: GridSpec) -> Self {
        NetworkDocument { grid: Some(spec), ..Default::default() }
    }

    /// Validates the document and builds its graph.
    pub fn to_graph(&self) -> NetIoResult<Graph> {
        let explicit = self.explicit_graph()?;
        let g = match self.grid {
            None => explicit,
            Some(spec) => {
                let lattice = make_grid(spec)?;
                if !self.vertices.is_empty() || !self.edges.is_empty() {
                    let declared: BTreeSet<u32> = self.vertices.iter().copied().collect();
                    let expected: BTreeSet<u32> = lattice.vertices().map(|v| v.0).collect();
                    if !self.vertices.is_empty() && declared != expected {
                        return Err(NetIoError::GridMismatch(format!(
                            "a {}x{} grid has vertices 1..={}",
                            spec.rows,
                            spec.cols,
                            spec.size()
                        )));
                    }
                    for (a, b) in explicit.edges() {
                        if !lattice.contains(a) || !lattice.contains(b) || !lattice.has_edge(a, b) {
                            return Err(NetIoError::GridMismatch(format!("edge ({a}, {b}) is not a lattice edge")));
                        }
                    }
                    if explicit.num_edges() != lattice.num_edges() {
                        return Err(NetIoError::GridMismatch(format!(
                            "{} edges listed, the lattice has {}",
                            explicit.num_edges(),
                            lattice.num_edges()
                        )));
                    }
                }
                lattice
            }
        };
        for (i, &v) in self.coords.keys().enumerate() {
            if !g.contains(VertexId(v)) {
                return Err(NetIoError::UnknownCoordinate { vertex: v, at: format!("/coords/{i}") });
            }
        }
        Ok(g)
    }

    fn explicit_graph(&self) -> NetIoResult<Graph> {
        let mut g = Graph::new();
        for (i, &v) in self.vertices.iter().enumerate() {
            if g.contains(VertexId(v)) {
                return Err(NetIoError::DuplicateVertex { vertex: v, at: format!("/vertices/{i}") });
            }
            g.add_vertex(VertexId(v))?;
        }
        let declared_implicitly = self.vertices.is_empty() && self.grid.is_some();
        for (i, &(a, b)) in self.edges.iter().enumerate() {
            let at = format!("/edges/{i}");
            if a == b {
                return Err(NetIoError::SelfLoop { vertex: a, at });
            }
            for x in [a, b] {
                if !g.contains(VertexId(x)) {
                    if declared_implicitly {
                        g.add_vertex(VertexId(x))?;
                    } else {
                        return Err(NetIoError::DanglingEdge { a, b, missing: x, at });
                    }
                }
            }
            if g.has_edge(VertexId(a), VertexId(b)) {
                return Err(NetIoError::DuplicateEdge { a, b, at });
            }
            g.add_edge(VertexId(a), VertexId(b))?;
        }
        Ok(g)
    }
}

/// Parses a network document without validating it against graph rules.
pub fn parse_document(text: &str) -> NetIoResult<NetworkDocument> {
    serde_json::from_str(text).map_err(syntax)
}

/// Parses and validates a network document.
pub fn parse_network(text: &str) -> NetIoResult<(NetworkDocument, Graph)> {
    let doc = parse_document(text)?;
    let g = doc.to_graph()?;
    Ok((doc, g))
}

pub fn export_network(doc: &NetworkDocument) -> String {
    serde_json::to_string_pretty(doc).expect("network documents always serialize")
}

pub fn export_json(report: &ProtocolReport) -> String {
    serde_json::to_string_pretty(report).expect("reports always serialize")
}

pub fn parse_report(text: &str) -> NetIoResult<ProtocolReport> {
    serde_json::from_str(text).map_err(syntax)
}

/// A measurement script: either a bare array of directives or an object
/// with a `plan` array.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
enum ScriptFile {
    Bare(Vec<Directive>),
    Wrapped { plan: Vec<Directive> },
}

pub fn parse_script(text: &str) -> NetIoResult<Vec<Directive>> {
    match serde_json::from_str(text).map_err(syntax)? {
        ScriptFile::Bare(p) | ScriptFile::Wrapped { plan: p } => Ok(p),
    }
}

pub fn export_script(plan: &[Directive]) -> String {
    serde_json::to_string_pretty(plan).expect("directives always serialize")
}

/// Vertex and edge classes for DOT output.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Highlights {
    pub targets: BTreeSet<VertexId>,
    /// Drawn as dashed ghosts when no longer in the graph.
    pub measured: BTreeSet<VertexId>,
    pub final_edges: BTreeSet<(VertexId, VertexId)>,
}

impl Highlights {
    pub fn from_report(report: &ProtocolReport, targets: impl IntoIterator<Item = VertexId>) -> Self {
        Highlights {
            targets: targets.into_iter().collect(),
            measured: report.measurements().map(|m| m.vertex).collect(),
            final_edges: report.final_graph.edges().collect(),
        }
    }
}

/// Graphviz rendering with sorted vertices and edges.
pub fn export_dot(g: &Graph, highlights: Option<&Highlights>) -> String {
    let empty = Highlights::default();
    let h = highlights.unwrap_or(&empty);
    let mut out = String::from("graph network {\n  node [shape=circle];\n");
    let mut nodes: BTreeSet<VertexId> = g.vertices().collect();
    nodes.extend(h.measured.iter().copied());
    for v in nodes {
        let attrs = if !g.contains(v) {
            r#"class="measured", style=dashed, color=gray60, fontcolor=gray60"#
        } else if h.targets.contains(&v) {
            r#"class="target", style=filled, fillcolor=gold"#
        } else if h.measured.contains(&v) {
            r#"class="measured", style=dashed"#
        } else {
            r#"class="vertex""#
        };
        writeln!(out, "  {v} [{attrs}];").unwrap();
    }
    for (a, b) in g.edges() {
        let key = (a.min(b), a.max(b));
        if h.final_edges.contains(&key) {
            writeln!(out, "  {a} -- {b} [class=\"final\", penwidth=2.5];").unwrap();
        } else {
            writeln!(out, "  {a} -- {b};").unwrap();
        }
    }
    out.push_str("}\n");
    out
}
