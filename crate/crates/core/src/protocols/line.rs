use std::collections::BTreeSet;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use super::route::shortest_paths;
use super::{find_route, Directive, ProtocolError, ProtocolResult};
use crate::graph::{Graph, Path, VertexId};

/// A path through all GHZ targets, endpoints included.
///
/// The canonical layout for `n >= 3` targets has `2n - 3` vertices with the
/// targets at positions `1, 2, 4, ..., 2n - 4, 2n - 3` (1-based), i.e. one
/// spare vertex between consecutive intermediate targets. For `n = 2` the
/// canonical line is the bare edge. Longer lines are allowed; the surplus
/// vertices are removed by measurement before the protocol proper runs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepeaterLine {
    line: Path,
    target_positions: BTreeSet<usize>,
}

/// How a raw line reduces to the canonical layout.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineLayout {
    pub canonical: Path,
    /// Measurements that remove surplus vertices, in execution order.
    pub removals: Vec<Directive>,
}

impl RepeaterLine {
    /// Line through `targets`; both endpoints must be targets.
    pub fn new(line: Path, targets: &BTreeSet<VertexId>) -> ProtocolResult<Self> {
        let positions: BTreeSet<usize> =
            line.vertices().iter().enumerate().filter(|(_, v)| targets.contains(v)).map(|(i, _)| i + 1).collect();
        if positions.len() != targets.len() {
            return Err(ProtocolError::InvalidLine("some targets are not on the line".into()));
        }
        Self::from_positions(line, positions)
    }

    pub fn from_positions(line: Path, target_positions: BTreeSet<usize>) -> ProtocolResult<Self> {
        let len = line.len();
        if target_positions.len() < 2 {
            return Err(ProtocolError::InvalidLine("need at least two targets".into()));
        }
        if line.as_set().len() != len {
            return Err(ProtocolError::InvalidLine("line repeats a vertex".into()));
        }
        if !target_positions.contains(&1) || !target_positions.contains(&len) {
            return Err(ProtocolError::InvalidLine("endpoints must be targets".into()));
        }
        if target_positions.iter().any(|&p| p == 0 || p > len) {
            return Err(ProtocolError::InvalidLine("target position out of range".into()));
        }
        Ok(RepeaterLine { line, target_positions })
    }

    /// The canonical line for `n` targets over the given vertices, which
    /// must number `2n - 3` (or 2 for `n = 2`).
    pub fn canonical(line: Path) -> ProtocolResult<Self> {
        let len = line.len();
        let n = match len {
            0 | 1 => return Err(ProtocolError::InvalidLine("line too short".into())),
            2 => 2,
            l if l % 2 == 1 => (l + 3) / 2,
            l => return Err(ProtocolError::InvalidLine(format!("canonical line length {l} is even"))),
        };
        Self::from_positions(line, canonical_positions(n))
    }

    pub fn line(&self) -> &Path {
        &self.line
    }

    pub fn target_positions(&self) -> &BTreeSet<usize> {
        &self.target_positions
    }

    pub fn n(&self) -> usize {
        self.target_positions.len()
    }

    /// Targets in line order.
    pub fn targets(&self) -> Vec<VertexId> {
        self.target_positions.iter().map(|&p| self.line.vertices()[p - 1]).collect()
    }

    pub fn target_set(&self) -> BTreeSet<VertexId> {
        self.targets().into_iter().collect()
    }

    pub fn is_canonical(&self) -> bool {
        let n = self.n();
        let expected_len = if n == 2 { 2 } else { 2 * n - 3 };
        self.line.len() == expected_len && self.target_positions == canonical_positions(n)
    }

    /// Reduce to the canonical layout.
    ///
    /// Surplus vertices before the second target and after the second-last
    /// target are X-measured with the adjacent endpoint as special neighbor,
    /// working inward from that endpoint; that splices the line cleanly.
    /// Between intermediate targets the first spare vertex is kept and the
    /// rest are Y-measured, which splices an interior vertex in one step.
    pub fn layout(&self) -> ProtocolResult<LineLayout> {
        let vs = self.line.vertices();
        let last = vs.len() - 1;
        let idx: Vec<usize> = self.target_positions.iter().map(|p| p - 1).collect();
        let gaps = idx.len() - 1;
        let mut keep = vec![true; vs.len()];
        let mut removals = Vec::new();
        for (k, pair) in idx.windows(2).enumerate() {
            let (lo, hi) = (pair[0], pair[1]);
            let interior = lo + 1..hi;
            if k == 0 {
                for i in interior {
                    keep[i] = false;
                    removals.push(Directive::X { vertex: vs[i], w: Some(vs[0]) });
                }
            } else if k + 1 == gaps {
                for i in interior.rev() {
                    keep[i] = false;
                    removals.push(Directive::X { vertex: vs[i], w: Some(vs[last]) });
                }
            } else {
                if interior.is_empty() {
                    return Err(ProtocolError::InvalidLine(format!(
                        "no spare vertex between targets {} and {}",
                        vs[lo], vs[hi]
                    )));
                }
                for i in lo + 2..hi {
                    keep[i] = false;
                    removals.push(Directive::Y { vertex: vs[i] });
                }
            }
        }
        let canonical = Path(vs.iter().zip(&keep).filter(|(_, k)| **k).map(|(v, _)| *v).collect());
        Ok(LineLayout { canonical, removals })
    }

    /// The canonical line this one reduces to.
    pub fn to_canonical(&self) -> ProtocolResult<RepeaterLine> {
        let layout = self.layout()?;
        let rl = RepeaterLine::new(layout.canonical, &self.target_set())?;
        debug_assert!(rl.is_canonical());
        Ok(rl)
    }
}

pub(crate) fn canonical_positions(n: usize) -> BTreeSet<usize> {
    if n == 2 {
        return BTreeSet::from([1, 2]);
    }
    let mut s: BTreeSet<usize> = (2..=2 * n - 4).step_by(2).collect();
    s.insert(1);
    s.insert(2 * n - 3);
    s
}

const SEGMENT_LIMIT: usize = 64;
const EXPANSION_BUDGET: usize = 2_000_000;
const MAX_TARGETS: usize = 8;

/// Search for a repeater line through `targets`.
///
/// Tries every target ordering (up to eight targets) and chains shortest
/// paths between consecutive targets, keeping only chord-free lines whose
/// intermediate targets are separated by at least one spare vertex. Among
/// the lines found, the shortest wins, then the one needing the fewest
/// isolation measurements, then the lexicographically smallest. This is a
/// heuristic; a `LineNotFound` error does not prove no line exists.
pub fn build_repeater_line(g: &Graph, targets: &BTreeSet<VertexId>) -> ProtocolResult<RepeaterLine> {
    for &t in targets {
        g.neighbors(t)?;
    }
    let ts: Vec<VertexId> = targets.iter().copied().collect();
    if ts.len() < 2 {
        return Err(ProtocolError::InvalidLine("need at least two targets".into()));
    }
    if ts.len() > MAX_TARGETS {
        return Err(ProtocolError::LineNotFound(ts));
    }
    if ts.len() == 2 {
        let p = find_route(g, ts[0], ts[1])?;
        return RepeaterLine::new(p, targets);
    }

    let mut search = Search { g, targets, best: None, budget: EXPANSION_BUDGET };
    for order in ts.iter().copied().permutations(ts.len()) {
        if order[0] > order[order.len() - 1] {
            continue;
        }
        let mut line = vec![order[0]];
        search.extend(&order, 1, &mut line)?;
        if search.budget == 0 {
            break;
        }
    }
    match search.best {
        Some((_, line)) => RepeaterLine::new(Path(line), targets),
        None => Err(ProtocolError::LineNotFound(ts)),
    }
}

type LineKey = (usize, usize, Vec<VertexId>);

struct Search<'a> {
    g: &'a Graph,
    targets: &'a BTreeSet<VertexId>,
    best: Option<(LineKey, Vec<VertexId>)>,
    budget: usize,
}

impl Search<'_> {
    fn extend(&mut self, order: &[VertexId], next: usize, line: &mut Vec<VertexId>) -> ProtocolResult<()> {
        if self.budget == 0 {
            return Ok(());
        }
        self.budget -= 1;
        if let Some((key, _)) = &self.best {
            if line.len() > key.0 {
                return Ok(());
            }
        }
        if next == order.len() {
            self.offer(line)?;
            return Ok(());
        }
        let from = *line.last().unwrap();
        let to = order[next];
        let intermediate_gap = next >= 2 && next + 1 < order.len();
        let mut avoid: BTreeSet<VertexId> = line.iter().copied().collect();
        avoid.extend(self.targets.iter().copied().filter(|t| *t != to));
        avoid.remove(&from);
        for seg in shortest_paths(self.g, from, to, &avoid, SEGMENT_LIMIT)? {
            let fresh = &seg.vertices()[1..];
            if intermediate_gap && fresh.len() < 2 {
                continue;
            }
            if !self.chord_free(line, fresh)? {
                continue;
            }
            let mark = line.len();
            line.extend_from_slice(fresh);
            self.extend(order, next + 1, line)?;
            line.truncate(mark);
        }
        Ok(())
    }

    // Appending `fresh` must not create edges to the existing line other
    // than the junction edge.
    fn chord_free(&self, line: &[VertexId], fresh: &[VertexId]) -> ProtocolResult<bool> {
        let junction = *line.last().unwrap();
        for (i, &v) in fresh.iter().enumerate() {
            let ns = self.g.neighbors(v)?;
            for &u in line {
                if ns.contains(&u) && !(i == 0 && u == junction) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    fn offer(&mut self, line: &[VertexId]) -> ProtocolResult<()> {
        let set: BTreeSet<VertexId> = line.iter().copied().collect();
        let cn = self.g.combined_neighborhood(&set)?;
        let key = (line.len(), cn.len() - set.len(), line.to_vec());
        if self.best.as_ref().is_none_or(|(k, _)| key < *k) {
            self.best = Some((key, line.to_vec()));
        }
        Ok(())
    }
}
