//! Simple labeled graphs and the rewrite rules that act on graph states.
//!
//! A [`Graph`] is the only state the rewrite engine carries. Every Pauli
//! measurement is expressed through two primitives, vertex deletion and
//! local complementation:
//!
//! * `Z_v(G) = G - v`
//! * `Y_v(G) = Z_v LC_v (G)`
//! * `X_v(G) = LC_w Z_v LC_v LC_w (G)` for a chosen neighbor `w` of `v`
//!
//! Operations come in two flavors. Methods named after the operation
//! (`delete_vertex`, `local_complement`, `measure_*`) borrow the graph and
//! return a new value. The `apply_*` / `remove_vertex` / `complement_at`
//! variants mutate in place and are what the protocol executor uses.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Vertex label. Labels are positive integers and are never reused once a
/// vertex has been deleted from a graph.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<u32> for VertexId {
    fn from(label: u32) -> Self {
        VertexId(label)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),

    #[error("vertex {0} already exists")]
    DuplicateVertex(VertexId),

    #[error("vertex label {0} was deleted and cannot be reused")]
    RetiredLabel(VertexId),

    #[error("vertex label 0 is not allowed, labels are positive")]
    ZeroLabel,

    #[error("self-loop at vertex {0}")]
    SelfLoop(VertexId),

    #[error("{w} is not a neighbor of {v}")]
    NotANeighbor { v: VertexId, w: VertexId },

    #[error("invalid path: {0}")]
    InvalidPath(String),
}

pub type GraphResult<T> = Result<T, GraphError>;

/// Pauli measurement basis.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Basis {
    X,
    Y,
    Z,
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Basis::X => "X",
            Basis::Y => "Y",
            Basis::Z => "Z",
        };
        f.write_str(s)
    }
}

/// One executed single-qubit Pauli measurement.
///
/// `special_neighbor` is the `w` of an X measurement. It is `None` for Y and
/// Z, and also for an X measurement of an isolated vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasurementRecord {
    pub vertex: VertexId,
    pub basis: Basis,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub special_neighbor: Option<VertexId>,
}

/// Simple undirected graph with labeled vertices.
///
/// Equality compares the vertex and edge sets only; the record of deleted
/// labels does not participate.
#[derive(Clone, Debug, Default)]
pub struct Graph {
    adj: BTreeMap<VertexId, BTreeSet<VertexId>>,
    retired: BTreeSet<VertexId>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.adj == other.adj
    }
}

impl Eq for Graph {}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Graph with the given isolated vertices.
    pub fn with_vertices<I>(labels: I) -> GraphResult<Self>
    where
        I: IntoIterator,
        I::Item: Into<VertexId>,
    {
        let mut g = Graph::new();
        for v in labels {
            g.add_vertex(v.into())?;
        }
        Ok(g)
    }

    /// Build a graph from an edge list; endpoints are added as needed.
    pub fn from_edges<I, V>(edges: I) -> GraphResult<Self>
    where
        I: IntoIterator<Item = (V, V)>,
        V: Into<VertexId>,
    {
        let mut g = Graph::new();
        for (a, b) in edges {
            let (a, b) = (a.into(), b.into());
            for v in [a, b] {
                if !g.contains(v) {
                    g.add_vertex(v)?;
                }
            }
            g.add_edge(a, b)?;
        }
        Ok(g)
    }

    pub fn add_vertex(&mut self, v: VertexId) -> GraphResult<()> {
        if v.0 == 0 {
            return Err(GraphError::ZeroLabel);
        }
        if self.retired.contains(&v) {
            return Err(GraphError::RetiredLabel(v));
        }
        if self.adj.contains_key(&v) {
            return Err(GraphError::DuplicateVertex(v));
        }
        self.adj.insert(v, BTreeSet::new());
        Ok(())
    }

    /// Adds the edge `a-b`. Returns `false` if it was already present.
    pub fn add_edge(&mut self, a: VertexId, b: VertexId) -> GraphResult<bool> {
        self.check(a)?;
        self.check(b)?;
        if a == b {
            return Err(GraphError::SelfLoop(a));
        }
        let fresh = self.adj.get_mut(&a).unwrap().insert(b);
        self.adj.get_mut(&b).unwrap().insert(a);
        Ok(fresh)
    }

    pub fn remove_edge(&mut self, a: VertexId, b: VertexId) -> GraphResult<bool> {
        self.check(a)?;
        self.check(b)?;
        let had = self.adj.get_mut(&a).unwrap().remove(&b);
        self.adj.get_mut(&b).unwrap().remove(&a);
        Ok(had)
    }

    fn toggle_edge_unchecked(&mut self, a: VertexId, b: VertexId) {
        debug_assert_ne!(a, b);
        let na = self.adj.get_mut(&a).unwrap();
        if !na.remove(&b) {
            na.insert(b);
            self.adj.get_mut(&b).unwrap().insert(a);
        } else {
            self.adj.get_mut(&b).unwrap().remove(&a);
        }
    }

    fn check(&self, v: VertexId) -> GraphResult<()> {
        if self.adj.contains_key(&v) {
            Ok(())
        } else {
            Err(GraphError::UnknownVertex(v))
        }
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.adj.contains_key(&v)
    }

    pub fn has_edge(&self, a: VertexId, b: VertexId) -> bool {
        self.adj.get(&a).is_some_and(|n| n.contains(&b))
    }

    pub fn num_vertices(&self) -> usize {
        self.adj.len()
    }

    pub fn num_edges(&self) -> usize {
        self.adj.values().map(BTreeSet::len).sum::<usize>() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    /// Vertices in ascending label order.
    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.adj.keys().copied()
    }

    /// Edges as `(a, b)` with `a < b`, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.adj.iter().flat_map(|(&a, ns)| ns.range(a..).map(move |&b| (a, b)))
    }

    /// Labels that were deleted from this graph.
    pub fn retired(&self) -> &BTreeSet<VertexId> {
        &self.retired
    }

    pub fn neighbors(&self, v: VertexId) -> GraphResult<&BTreeSet<VertexId>> {
        self.adj.get(&v).ok_or(GraphError::UnknownVertex(v))
    }

    pub fn degree(&self, v: VertexId) -> GraphResult<usize> {
        self.neighbors(v).map(BTreeSet::len)
    }

    /// `N_v` as an owned set.
    pub fn neighborhood(&self, v: VertexId) -> GraphResult<BTreeSet<VertexId>> {
        self.neighbors(v).cloned()
    }

    /// Union of the neighborhoods of `set`. May contain members of `set`.
    pub fn combined_neighborhood<'a, I>(&self, set: I) -> GraphResult<BTreeSet<VertexId>>
    where
        I: IntoIterator<Item = &'a VertexId>,
    {
        let mut out = BTreeSet::new();
        for v in set {
            out.extend(self.neighbors(*v)?.iter().copied());
        }
        Ok(out)
    }

    // ---- in-place rewrites ----

    /// Removes `v` and every edge incident to it. The label is retired.
    pub fn remove_vertex(&mut self, v: VertexId) -> GraphResult<()> {
        let ns = self.adj.remove(&v).ok_or(GraphError::UnknownVertex(v))?;
        for n in ns {
            self.adj.get_mut(&n).unwrap().remove(&v);
        }
        self.retired.insert(v);
        Ok(())
    }

    /// Local complementation at `v`, in place.
    pub fn complement_at(&mut self, v: VertexId) -> GraphResult<()> {
        let ns: Vec<VertexId> = self.neighbors(v)?.iter().copied().collect();
        for (i, &a) in ns.iter().enumerate() {
            for &b in &ns[i + 1..] {
                self.toggle_edge_unchecked(a, b);
            }
        }
        Ok(())
    }

    pub fn apply_z(&mut self, v: VertexId) -> GraphResult<MeasurementRecord> {
        self.remove_vertex(v)?;
        Ok(MeasurementRecord { vertex: v, basis: Basis::Z, special_neighbor: None })
    }

    pub fn apply_y(&mut self, v: VertexId) -> GraphResult<MeasurementRecord> {
        self.complement_at(v)?;
        self.remove_vertex(v)?;
        Ok(MeasurementRecord { vertex: v, basis: Basis::Y, special_neighbor: None })
    }

    /// X measurement of `v` with special neighbor `w`.
    ///
    /// Without an explicit `w` the smallest-labeled neighbor is used. An
    /// isolated `v` is simply deleted.
    pub fn apply_x(&mut self, v: VertexId, w: Option<VertexId>) -> GraphResult<MeasurementRecord> {
        let ns = self.neighbors(v)?;
        let w = match w {
            Some(w) if ns.contains(&w) => Some(w),
            Some(w) => return Err(GraphError::NotANeighbor { v, w }),
            None => ns.iter().next().copied(),
        };
        match w {
            Some(w) => {
                self.complement_at(w)?;
                self.complement_at(v)?;
                self.remove_vertex(v)?;
                self.complement_at(w)?;
            }
            None => self.remove_vertex(v)?,
        }
        Ok(MeasurementRecord { vertex: v, basis: Basis::X, special_neighbor: w })
    }

    pub fn apply_measurement(
        &mut self,
        v: VertexId,
        basis: Basis,
        w: Option<VertexId>,
    ) -> GraphResult<MeasurementRecord> {
        match basis {
            Basis::X => self.apply_x(v, w),
            Basis::Y => self.apply_y(v),
            Basis::Z => self.apply_z(v),
        }
    }

    // ---- value-returning rewrites ----

    pub fn delete_vertex(&self, v: VertexId) -> GraphResult<Graph> {
        let mut g = self.clone();
        g.remove_vertex(v)?;
        Ok(g)
    }

    pub fn local_complement(&self, v: VertexId) -> GraphResult<Graph> {
        let mut g = self.clone();
        g.complement_at(v)?;
        Ok(g)
    }

    pub fn measure_z(&self, v: VertexId) -> GraphResult<Graph> {
        self.delete_vertex(v)
    }

    pub fn measure_y(&self, v: VertexId) -> GraphResult<Graph> {
        let mut g = self.clone();
        g.apply_y(v)?;
        Ok(g)
    }

    pub fn measure_x(&self, v: VertexId, w: Option<VertexId>) -> GraphResult<(Graph, MeasurementRecord)> {
        let mut g = self.clone();
        let rec = g.apply_x(v, w)?;
        Ok((g, rec))
    }

    // ---- structure queries ----

    pub fn induced_subgraph<'a, I>(&self, set: I) -> GraphResult<Graph>
    where
        I: IntoIterator<Item = &'a VertexId>,
    {
        let keep: BTreeSet<VertexId> = set.into_iter().copied().collect();
        let mut adj = BTreeMap::new();
        for &v in &keep {
            let ns = self.neighbors(v)?;
            adj.insert(v, ns.intersection(&keep).copied().collect());
        }
        Ok(Graph { adj, retired: BTreeSet::new() })
    }

    /// True iff every pair of distinct vertices of `set` is adjacent.
    pub fn is_complete_on(&self, set: &BTreeSet<VertexId>) -> GraphResult<bool> {
        for &v in set {
            let ns = self.neighbors(v)?;
            if set.iter().any(|u| *u != v && !ns.contains(u)) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// True iff the induced graph on `set` is a star with the given center:
    /// the center is adjacent to every other member and no two leaves are
    /// adjacent.
    pub fn is_star_on(&self, set: &BTreeSet<VertexId>, center: VertexId) -> GraphResult<bool> {
        if !set.contains(&center) {
            return Ok(false);
        }
        let cn = self.neighbors(center)?;
        for &v in set {
            if v == center {
                continue;
            }
            if !cn.contains(&v) {
                return Ok(false);
            }
            let ns = self.neighbors(v)?;
            if set.iter().any(|u| *u != center && ns.contains(u)) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Connected components, each sorted, listed by smallest member.
    pub fn connected_components(&self) -> Vec<BTreeSet<VertexId>> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for v in self.vertices() {
            if seen.contains(&v) {
                continue;
            }
            let comp = self.component_of(v).expect("vertex is live");
            seen.extend(comp.iter().copied());
            out.push(comp);
        }
        out
    }

    pub fn component_of(&self, v: VertexId) -> GraphResult<BTreeSet<VertexId>> {
        self.check(v)?;
        let mut comp = BTreeSet::from([v]);
        let mut queue = VecDeque::from([v]);
        while let Some(u) = queue.pop_front() {
            for &n in &self.adj[&u] {
                if comp.insert(n) {
                    queue.push_back(n);
                }
            }
        }
        Ok(comp)
    }

    /// True iff `set` is a union of whole connected components.
    pub fn is_isolated_set(&self, set: &BTreeSet<VertexId>) -> GraphResult<bool> {
        for &v in set {
            if !self.neighbors(v)?.is_subset(set) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// BFS distances from `src` to every reachable vertex.
    pub fn distances_from(&self, src: VertexId) -> GraphResult<BTreeMap<VertexId, usize>> {
        self.check(src)?;
        let mut dist = BTreeMap::from([(src, 0)]);
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            let d = dist[&u];
            for &n in &self.adj[&u] {
                if let std::collections::btree_map::Entry::Vacant(e) = dist.entry(n) {
                    e.insert(d + 1);
                    queue.push_back(n);
                }
            }
        }
        Ok(dist)
    }

    /// Checks the structural invariants: symmetric, irreflexive, closed.
    pub fn is_well_formed(&self) -> bool {
        self.adj
            .iter()
            .all(|(v, ns)| !ns.contains(v) && ns.iter().all(|n| self.adj.get(n).is_some_and(|m| m.contains(v))))
            && self.retired.iter().all(|r| !self.adj.contains_key(r))
    }
}

/// Ordered sequence of distinct vertices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Path(pub Vec<VertexId>);

impl Path {
    pub fn new<I>(labels: I) -> Self
    where
        I: IntoIterator,
        I::Item: Into<VertexId>,
    {
        Path(labels.into_iter().map(Into::into).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.0
    }

    pub fn first(&self) -> Option<VertexId> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<VertexId> {
        self.0.last().copied()
    }

    /// Vertices strictly between the endpoints.
    pub fn interior(&self) -> &[VertexId] {
        if self.0.len() <= 2 {
            &[]
        } else {
            &self.0[1..self.0.len() - 1]
        }
    }

    pub fn as_set(&self) -> BTreeSet<VertexId> {
        self.0.iter().copied().collect()
    }

    /// Checks that entries are distinct, live in `g`, and consecutive entries
    /// are adjacent.
    pub fn validate(&self, g: &Graph) -> GraphResult<()> {
        if self.0.is_empty() {
            return Err(GraphError::InvalidPath("empty path".into()));
        }
        let mut seen = BTreeSet::new();
        for &v in &self.0 {
            g.check(v)?;
            if !seen.insert(v) {
                return Err(GraphError::InvalidPath(format!("vertex {v} repeats")));
            }
        }
        for pair in self.0.windows(2) {
            if !g.has_edge(pair[0], pair[1]) {
                return Err(GraphError::InvalidPath(format!("{} and {} are not adjacent", pair[0], pair[1])));
            }
        }
        Ok(())
    }

    /// A valid path with no chords: the only edges among its vertices are
    /// the consecutive ones. This is a repeater line.
    pub fn is_induced(&self, g: &Graph) -> GraphResult<bool> {
        self.validate(g)?;
        let set = self.as_set();
        for (i, &v) in self.0.iter().enumerate() {
            let on_path = g.neighbors(v)?.intersection(&set).count();
            let expected = usize::from(i > 0) + usize::from(i + 1 < self.0.len());
            if on_path != expected {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for v in &self.0 {
            if !first {
                f.write_str(",")?;
            }
            first = false;
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct GraphRepr {
    vertices: Vec<VertexId>,
    edges: Vec<(VertexId, VertexId)>,
}

impl Serialize for Graph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        GraphRepr { vertices: self.vertices().collect(), edges: self.edges().collect() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = GraphRepr::deserialize(d)?;
        let mut g = Graph::with_vertices(repr.vertices).map_err(serde::de::Error::custom)?;
        for (a, b) in repr.edges {
            g.add_edge(a, b).map_err(serde::de::Error::custom)?;
        }
        Ok(g)
    }
}

/// Shorthand for building vertex sets in tests and examples.
pub fn vset<I>(labels: I) -> BTreeSet<VertexId>
where
    I: IntoIterator,
    I::Item: Into<VertexId>,
{
    labels.into_iter().map(Into::into).collect()
}
