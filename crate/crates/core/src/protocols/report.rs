use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{ProtocolError, ProtocolResult};
use crate::graph::{Basis, Graph, MeasurementRecord, VertexId};

/// A single instruction for the rewrite engine.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op")]
pub enum Directive {
    X {
        vertex: VertexId,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        w: Option<VertexId>,
    },
    Y {
        vertex: VertexId,
    },
    Z {
        vertex: VertexId,
    },
    #[serde(rename = "LC")]
    Lc {
        vertex: VertexId,
    },
}

impl Directive {
    pub fn vertex(&self) -> VertexId {
        match *self {
            Directive::X { vertex, .. }
            | Directive::Y { vertex }
            | Directive::Z { vertex }
            | Directive::Lc { vertex } => vertex,
        }
    }
}

/// Transcript entry: a measurement or a local complementation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Step {
    Measure(MeasurementRecord),
    Lc { vertex: VertexId },
}

impl Step {
    /// The directive that replays this step exactly.
    pub fn as_directive(&self) -> Directive {
        match self {
            Step::Lc { vertex } => Directive::Lc { vertex: *vertex },
            Step::Measure(rec) => match rec.basis {
                Basis::X => Directive::X { vertex: rec.vertex, w: rec.special_neighbor },
                Basis::Y => Directive::Y { vertex: rec.vertex },
                Basis::Z => Directive::Z { vertex: rec.vertex },
            },
        }
    }
}

/// Neighborhood of a tracked vertex after `step` transcript entries.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NeighborhoodSnapshot {
    pub step: usize,
    pub vertex: VertexId,
    pub neighbors: BTreeSet<VertexId>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProtocolReport {
    pub transcript: Vec<Step>,
    pub x_count: usize,
    pub y_count: usize,
    pub z_count: usize,
    pub lc_count: usize,
    pub final_graph: Graph,
    pub neighborhood_snapshots: Vec<NeighborhoodSnapshot>,
}

impl ProtocolReport {
    pub fn measurement_count(&self) -> usize {
        self.x_count + self.y_count + self.z_count
    }

    pub fn measurements(&self) -> impl Iterator<Item = &MeasurementRecord> {
        self.transcript.iter().filter_map(|s| match s {
            Step::Measure(m) => Some(m),
            Step::Lc { .. } => None,
        })
    }

    pub fn measured_with(&self, basis: Basis) -> Vec<VertexId> {
        self.measurements().filter(|m| m.basis == basis).map(|m| m.vertex).collect()
    }

    pub fn lc_vertices(&self) -> Vec<VertexId> {
        self.transcript
            .iter()
            .filter_map(|s| match s {
                Step::Lc { vertex } => Some(*vertex),
                Step::Measure(_) => None,
            })
            .collect()
    }

    /// `N_v` after `step` transcript entries, if `v` was tracked and alive.
    pub fn snapshot(&self, step: usize, v: VertexId) -> Option<&BTreeSet<VertexId>> {
        self.neighborhood_snapshots.iter().find(|s| s.step == step && s.vertex == v).map(|s| &s.neighbors)
    }

    pub fn transcript_directives(&self) -> Vec<Directive> {
        self.transcript.iter().map(Step::as_directive).collect()
    }
}

/// Runs directives against a graph, keeping the transcript, counts and
/// neighborhood snapshots for a set of tracked vertices.
#[derive(Clone, Debug)]
pub struct Executor {
    graph: Graph,
    transcript: Vec<Step>,
    tracked: BTreeSet<VertexId>,
    snapshots: Vec<NeighborhoodSnapshot>,
}

impl Executor {
    pub fn new(graph: Graph) -> Self {
        Self::tracking(graph, BTreeSet::new())
    }

    pub fn tracking(graph: Graph, tracked: BTreeSet<VertexId>) -> Self {
        let mut ex = Executor { graph, transcript: Vec::new(), tracked, snapshots: Vec::new() };
        ex.snap();
        ex
    }

    fn snap(&mut self) {
        let step = self.transcript.len();
        for &v in &self.tracked {
            if let Ok(ns) = self.graph.neighbors(v) {
                self.snapshots.push(NeighborhoodSnapshot { step, vertex: v, neighbors: ns.clone() });
            }
        }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn steps(&self) -> usize {
        self.transcript.len()
    }

    pub fn apply(&mut self, d: &Directive) -> ProtocolResult<()> {
        let vertex = d.vertex();
        if !self.graph.contains(vertex) {
            return Err(ProtocolError::StaleVertex { step: self.transcript.len(), vertex });
        }
        let step = match *d {
            Directive::Lc { vertex } => {
                self.graph.complement_at(vertex)?;
                Step::Lc { vertex }
            }
            Directive::X { vertex, w } => Step::Measure(self.graph.apply_x(vertex, w)?),
            Directive::Y { vertex } => Step::Measure(self.graph.apply_y(vertex)?),
            Directive::Z { vertex } => Step::Measure(self.graph.apply_z(vertex)?),
        };
        self.transcript.push(step);
        self.snap();
        Ok(())
    }

    pub fn x(&mut self, v: VertexId, w: VertexId) -> ProtocolResult<()> {
        self.apply(&Directive::X { vertex: v, w: Some(w) })
    }

    pub fn y(&mut self, v: VertexId) -> ProtocolResult<()> {
        self.apply(&Directive::Y { vertex: v })
    }

    pub fn z(&mut self, v: VertexId) -> ProtocolResult<()> {
        self.apply(&Directive::Z { vertex: v })
    }

    pub fn lc(&mut self, v: VertexId) -> ProtocolResult<()> {
        self.apply(&Directive::Lc { vertex: v })
    }

    /// Z-measures every live vertex adjacent to `keep` that is not in
    /// `keep`, ascending by label.
    pub fn isolate(&mut self, keep: &BTreeSet<VertexId>) -> ProtocolResult<BTreeSet<VertexId>> {
        let cn = self.graph.combined_neighborhood(keep)?;
        let outside: BTreeSet<VertexId> = cn.difference(keep).copied().collect();
        for &v in &outside {
            self.z(v)?;
        }
        Ok(outside)
    }

    pub fn finish(self) -> ProtocolReport {
        let mut report = ProtocolReport {
            transcript: self.transcript,
            x_count: 0,
            y_count: 0,
            z_count: 0,
            lc_count: 0,
            final_graph: self.graph,
            neighborhood_snapshots: self.snapshots,
        };
        for s in &report.transcript {
            match s {
                Step::Lc { .. } => report.lc_count += 1,
                Step::Measure(m) => match m.basis {
                    Basis::X => report.x_count += 1,
                    Basis::Y => report.y_count += 1,
                    Basis::Z => report.z_count += 1,
                },
            }
        }
        report
    }
}

/// Replays a plan of directives, one step at a time.
pub fn run_script(g: &Graph, plan: &[Directive]) -> ProtocolResult<ProtocolReport> {
    let touched = plan.iter().map(Directive::vertex).filter(|v| g.contains(*v)).collect();
    let mut ex = Executor::tracking(g.clone(), touched);
    for d in plan {
        ex.apply(d)?;
    }
    Ok(ex.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::vset;

    fn v(x: u32) -> VertexId {
        VertexId(x)
    }

    #[test]
    fn empty_plan_is_identity() {
        let g = Graph::from_edges([(1u32, 2u32)]).unwrap();
        let r = run_script(&g, &[]).unwrap();
        assert_eq!(r.final_graph, g);
        assert_eq!(r.measurement_count(), 0);
        assert!(r.transcript.is_empty());
    }

    #[test]
    fn stale_vertex_names_step() {
        let g = Graph::from_edges([(1u32, 2u32), (2, 3)]).unwrap();
        let plan = [Directive::Z { vertex: v(2) }, Directive::Lc { vertex: v(2) }];
        let err = run_script(&g, &plan).unwrap_err();
        assert_eq!(err, ProtocolError::StaleVertex { step: 1, vertex: v(2) });
    }

    #[test]
    fn counts_and_snapshots() {
        let g = Graph::from_edges([(1u32, 2u32), (2, 3), (3, 4)]).unwrap();
        let plan = [
            Directive::Lc { vertex: v(2) },
            Directive::X { vertex: v(3), w: Some(v(4)) },
            Directive::Y { vertex: v(1) },
        ];
        let r = run_script(&g, &plan).unwrap();
        assert_eq!((r.x_count, r.y_count, r.z_count, r.lc_count), (1, 1, 0, 1));
        assert_eq!(r.snapshot(0, v(2)), Some(&vset([1u32, 3])));
        assert_eq!(r.snapshot(1, v(3)), Some(&vset([1u32, 2, 4])));
        assert_eq!(r.snapshot(2, v(3)), None);
        for m in r.measurements() {
            assert!(!r.final_graph.contains(m.vertex));
        }
    }

    #[test]
    fn directive_json_shape() {
        let d: Directive = serde_json::from_str(r#"{"op":"X","vertex":4,"w":1}"#).unwrap();
        assert_eq!(d, Directive::X { vertex: v(4), w: Some(v(1)) });
        let d: Directive = serde_json::from_str(r#"{"op":"LC","vertex":12}"#).unwrap();
        assert_eq!(d, Directive::Lc { vertex: v(12) });
    }
}
