//! Grid networks and majorization-based path ranking.
//!
//! Vertices of a `rows x cols` grid are labeled row-major from 1, with
//! `(x, y)` = (column, row) and the origin at the top-left. A monotone
//! shortest path is encoded as its run lengths: the first entry counts the
//! edges of the first straight run, the next counts the following run in
//! the other direction, and so on, padded with zeros to the path length.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, GraphError, Path, VertexId};
use crate::protocols::{x_protocol, ProtocolError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GridError {
    #[error("grid dimensions must be positive, got {rows}x{cols}")]
    ZeroDimension { rows: usize, cols: usize },

    #[error("vertex {0} is not in the grid")]
    NotInGrid(VertexId),

    #[error("path is not a monotone shortest path: {0}")]
    NonMonotone(String),

    #[error("path vector does not match the displacement: {0}")]
    VectorMismatch(String),

    #[error("vectors cannot be compared: {0}")]
    Incompatible(String),

    #[error("paths do not share endpoints")]
    MixedEndpoints,

    #[error(transparent)]
    Graph(#[from] GraphError),

    #[error(transparent)]
    Protocol(#[from] ProtocolError),
}

pub type GridResult<T> = Result<T, GridError>;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GridSpec {
    pub rows: usize,
    pub cols: usize,
}

impl GridSpec {
    pub fn new(rows: usize, cols: usize) -> GridResult<Self> {
        if rows == 0 || cols == 0 {
            return Err(GridError::ZeroDimension { rows, cols });
        }
        Ok(GridSpec { rows, cols })
    }

    pub fn size(&self) -> usize {
        self.rows * self.cols
    }

    pub fn label(&self, x: usize, y: usize) -> Option<VertexId> {
        (x < self.cols && y < self.rows).then(|| VertexId((y * self.cols + x + 1) as u32))
    }

    pub fn coord(&self, v: VertexId) -> GridResult<(usize, usize)> {
        let i = v.0 as usize;
        if i == 0 || i > self.size() {
            return Err(GridError::NotInGrid(v));
        }
        Ok(((i - 1) % self.cols, (i - 1) / self.cols))
    }

    pub fn coordinates(&self) -> BTreeMap<VertexId, (usize, usize)> {
        (0..self.rows)
            .flat_map(|y| (0..self.cols).map(move |x| (x, y)))
            .map(|(x, y)| (self.label(x, y).unwrap(), (x, y)))
            .collect()
    }

    /// Lattice distance between two grid vertices.
    pub fn distance(&self, a: VertexId, b: VertexId) -> GridResult<usize> {
        let (ax, ay) = self.coord(a)?;
        let (bx, by) = self.coord(b)?;
        Ok(ax.abs_diff(bx) + ay.abs_diff(by))
    }
}

pub fn make_grid(spec: GridSpec) -> GridResult<Graph> {
    let spec = GridSpec::new(spec.rows, spec.cols)?;
    let mut g = Graph::with_vertices((1..=spec.size()).map(|l| l as u32))?;
    for y in 0..spec.rows {
        for x in 0..spec.cols {
            let v = spec.label(x, y).unwrap();
            if let Some(r) = spec.label(x + 1, y) {
                g.add_edge(v, r)?;
            }
            if let Some(d) = spec.label(x, y + 1) {
                g.add_edge(v, d)?;
            }
        }
    }
    Ok(g)
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
}

impl Axis {
    fn other(self) -> Axis {
        match self {
            Axis::X => Axis::Y,
            Axis::Y => Axis::X,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    /// Direction from coordinate `from` toward `to`; `Plus` when equal.
    pub fn toward(from: usize, to: usize) -> Sign {
        if to < from {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    fn apply(self, at: usize, step: usize, bound: usize) -> Option<usize> {
        match self {
            Sign::Plus => at.checked_add(step).filter(|v| *v < bound),
            Sign::Minus => at.checked_sub(step),
        }
    }
}

/// Run-length encoding of a monotone shortest grid path.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PathVector {
    pub entries: Vec<usize>,
    /// Axis of the first run; runs alternate from there.
    pub first_axis: Axis,
    pub dx: usize,
    pub dy: usize,
}

impl PathVector {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total(&self) -> usize {
        self.entries.iter().sum()
    }

    pub fn sorted_desc(&self) -> Vec<usize> {
        let mut s = self.entries.clone();
        s.sort_unstable_by(|a, b| b.cmp(a));
        s
    }

    fn axis_of(&self, i: usize) -> Axis {
        if i.is_multiple_of(2) {
            self.first_axis
        } else {
            self.first_axis.other()
        }
    }

    fn check_sums(&self) -> GridResult<()> {
        let (mut sx, mut sy) = (0, 0);
        for (i, &e) in self.entries.iter().enumerate() {
            match self.axis_of(i) {
                Axis::X => sx += e,
                Axis::Y => sy += e,
            }
        }
        if sx != self.dx || sy != self.dy || self.entries.len() != self.dx + self.dy {
            return Err(GridError::VectorMismatch(format!(
                "x-runs sum {sx} (want {}), y-runs sum {sy} (want {}), length {} (want {})",
                self.dx,
                self.dy,
                self.entries.len(),
                self.dx + self.dy
            )));
        }
        Ok(())
    }
}

/// Encode a monotone shortest path.
pub fn path_vector(spec: &GridSpec, p: &Path) -> GridResult<PathVector> {
    let vs = p.vertices();
    let Some((&start, _)) = vs.split_first() else {
        return Err(GridError::NonMonotone("empty path".into()));
    };
    let end = *vs.last().unwrap();
    let coords = vs.iter().map(|&v| spec.coord(v)).collect::<GridResult<Vec<_>>>()?;
    let (sx, sy) = spec.coord(start)?;
    let (ex, ey) = spec.coord(end)?;
    let (dx, dy) = (sx.abs_diff(ex), sy.abs_diff(ey));
    if vs.len() != dx + dy + 1 {
        return Err(GridError::NonMonotone(format!("{} vertices for distance {}", vs.len(), dx + dy)));
    }
    let mut runs: Vec<(Axis, usize)> = Vec::new();
    for (i, w) in coords.windows(2).enumerate() {
        let ((x0, y0), (x1, y1)) = (w[0], w[1]);
        let axis = match (x0.abs_diff(x1), y0.abs_diff(y1)) {
            (1, 0) => Axis::X,
            (0, 1) => Axis::Y,
            _ => return Err(GridError::NonMonotone(format!("step {} is not a lattice edge", i + 1))),
        };
        // a step must not move away from the far endpoint
        let toward = match axis {
            Axis::X => x1.abs_diff(ex) < x0.abs_diff(ex),
            Axis::Y => y1.abs_diff(ey) < y0.abs_diff(ey),
        };
        if !toward {
            return Err(GridError::NonMonotone(format!("step {} moves away from {end}", i + 1)));
        }
        match runs.last_mut() {
            Some((a, n)) if *a == axis => *n += 1,
            _ => runs.push((axis, 1)),
        }
    }
    let first_axis = runs.first().map(|r| r.0).unwrap_or(Axis::X);
    let mut entries: Vec<usize> = runs.iter().map(|r| r.1).collect();
    entries.resize(dx + dy, 0);
    Ok(PathVector { entries, first_axis, dx, dy })
}

/// Decode a vector into a path starting at `start`, moving in the given
/// direction along each axis.
pub fn path_from_vector(
    spec: &GridSpec,
    start: VertexId,
    v: &PathVector,
    x_sign: Sign,
    y_sign: Sign,
) -> GridResult<Path> {
    v.check_sums()?;
    let (mut x, mut y) = spec.coord(start)?;
    let mut out = vec![start];
    for (i, &run) in v.entries.iter().enumerate() {
        for _ in 0..run {
            match v.axis_of(i) {
                Axis::X => x = x_sign.apply(x, 1, spec.cols).ok_or_else(leaves)?,
                Axis::Y => y = y_sign.apply(y, 1, spec.rows).ok_or_else(leaves)?,
            }
            out.push(spec.label(x, y).unwrap());
        }
    }
    Ok(Path(out))
}

/// Decode a vector into the monotone path from `a` to `b`.
pub fn path_between(spec: &GridSpec, a: VertexId, b: VertexId, v: &PathVector) -> GridResult<Path> {
    let (ax, ay) = spec.coord(a)?;
    let (bx, by) = spec.coord(b)?;
    let p = path_from_vector(spec, a, v, Sign::toward(ax, bx), Sign::toward(ay, by))?;
    if p.last() != Some(b) {
        return Err(GridError::VectorMismatch(format!("vector leads to {}, not {b}", p.last().unwrap())));
    }
    Ok(p)
}

fn leaves() -> GridError {
    GridError::VectorMismatch("path leaves the grid".into())
}

/// Every monotone shortest path from `a` to `b`, in lexicographic order of
/// vertex sequence. There are `C(D, D_x)` of them.
pub fn enumerate_shortest_paths(spec: &GridSpec, a: VertexId, b: VertexId) -> GridResult<Vec<Path>> {
    let (ax, ay) = spec.coord(a)?;
    let (bx, by) = spec.coord(b)?;
    let mut out = Vec::new();
    let mut cur = vec![a];
    fn rec(
        spec: &GridSpec,
        (x, y): (usize, usize),
        (bx, by): (usize, usize),
        cur: &mut Vec<VertexId>,
        out: &mut Vec<Path>,
    ) {
        if (x, y) == (bx, by) {
            out.push(Path(cur.clone()));
            return;
        }
        let mut next = Vec::with_capacity(2);
        if x != bx {
            next.push((if bx > x { x + 1 } else { x - 1 }, y));
        }
        if y != by {
            next.push((x, if by > y { y + 1 } else { y - 1 }));
        }
        for (nx, ny) in next {
            cur.push(spec.label(nx, ny).unwrap());
            rec(spec, (nx, ny), (bx, by), cur, out);
            cur.pop();
        }
    }
    rec(spec, (ax, ay), (bx, by), &mut cur, &mut out);
    out.sort();
    Ok(out)
}

/// Outcome of comparing two vectors under majorization.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MajorizationOrder {
    /// The left vector strictly majorizes the right one (it is less uniform).
    LeftMajorizes,
    RightMajorizes,
    Equal,
    Incomparable,
}

impl MajorizationOrder {
    pub fn reverse(self) -> Self {
        match self {
            MajorizationOrder::LeftMajorizes => MajorizationOrder::RightMajorizes,
            MajorizationOrder::RightMajorizes => MajorizationOrder::LeftMajorizes,
            other => other,
        }
    }
}

/// Majorization between two equal-length, equal-sum slices.
pub fn majorization(s: &[usize], t: &[usize]) -> GridResult<MajorizationOrder> {
    if s.len() != t.len() {
        return Err(GridError::Incompatible(format!("lengths {} and {}", s.len(), t.len())));
    }
    let (ss, ts): (usize, usize) = (s.iter().sum(), t.iter().sum());
    if ss != ts {
        return Err(GridError::Incompatible(format!("sums {ss} and {ts}")));
    }
    let mut sd = s.to_vec();
    let mut td = t.to_vec();
    sd.sort_unstable_by(|a, b| b.cmp(a));
    td.sort_unstable_by(|a, b| b.cmp(a));
    let (mut ps, mut pt) = (0, 0);
    let (mut s_ge, mut t_ge) = (true, true);
    for (a, b) in sd.iter().zip(&td) {
        ps += a;
        pt += b;
        match ps.cmp(&pt) {
            Ordering::Less => s_ge = false,
            Ordering::Greater => t_ge = false,
            Ordering::Equal => {}
        }
    }
    Ok(match (s_ge, t_ge) {
        (true, true) => MajorizationOrder::Equal,
        (true, false) => MajorizationOrder::LeftMajorizes,
        (false, true) => MajorizationOrder::RightMajorizes,
        (false, false) => MajorizationOrder::Incomparable,
    })
}

pub fn majorizes(s: &PathVector, t: &PathVector) -> GridResult<MajorizationOrder> {
    majorization(&s.entries, &t.entries)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankedPath {
    pub path: Path,
    pub vector: PathVector,
    /// Total measurements of the X protocol along this path.
    pub x_protocol_cost: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Comparison {
    pub left: usize,
    pub right: usize,
    pub order: MajorizationOrder,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathRanking {
    pub paths: Vec<RankedPath>,
    /// One entry per unordered pair `left < right`.
    pub comparisons: Vec<Comparison>,
    /// Indices of paths whose vector strictly majorizes no other vector,
    /// best first: lowest X protocol cost, then lexicographic.
    pub minimal: Vec<usize>,
    /// Distinct minimal vectors, sorted descending.
    pub minimal_vectors: Vec<Vec<usize>>,
}

impl PathRanking {
    pub fn best(&self) -> &RankedPath {
        &self.paths[self.minimal[0]]
    }

    pub fn order(&self, i: usize, j: usize) -> Option<MajorizationOrder> {
        if i == j {
            return Some(MajorizationOrder::Equal);
        }
        let (a, b, flip) = if i < j { (i, j, false) } else { (j, i, true) };
        self.comparisons.iter().find(|c| c.left == a && c.right == b).map(|c| {
            if flip {
                c.order.reverse()
            } else {
                c.order
            }
        })
    }
}

/// Rank shortest paths between a common pair of endpoints.
pub fn rank_paths(spec: &GridSpec, paths: &[Path]) -> GridResult<PathRanking> {
    let Some(first) = paths.first() else {
        return Ok(PathRanking { paths: vec![], comparisons: vec![], minimal: vec![], minimal_vectors: vec![] });
    };
    let ends = (first.first(), first.last());
    if paths.iter().any(|p| (p.first(), p.last()) != ends) {
        return Err(GridError::MixedEndpoints);
    }
    let g = make_grid(*spec)?;
    let ranked = paths
        .iter()
        .map(|p| {
            Ok(RankedPath {
                path: p.clone(),
                vector: path_vector(spec, p)?,
                x_protocol_cost: x_protocol(&g, p)?.measurement_count(),
            })
        })
        .collect::<GridResult<Vec<_>>>()?;

    let mut comparisons = Vec::new();
    let mut dominates_something = vec![false; ranked.len()];
    for i in 0..ranked.len() {
        for j in i + 1..ranked.len() {
            let order = majorizes(&ranked[i].vector, &ranked[j].vector)?;
            match order {
                MajorizationOrder::LeftMajorizes => dominates_something[i] = true,
                MajorizationOrder::RightMajorizes => dominates_something[j] = true,
                _ => {}
            }
            comparisons.push(Comparison { left: i, right: j, order });
        }
    }
    let mut minimal: Vec<usize> = (0..ranked.len()).filter(|&i| !dominates_something[i]).collect();
    minimal.sort_by(|&a, &b| {
        ranked[a].x_protocol_cost.cmp(&ranked[b].x_protocol_cost).then_with(|| ranked[a].path.cmp(&ranked[b].path))
    });
    let minimal_vectors: BTreeSet<Vec<usize>> = minimal.iter().map(|&i| ranked[i].vector.sorted_desc()).collect();
    Ok(PathRanking { paths: ranked, comparisons, minimal, minimal_vectors: minimal_vectors.into_iter().collect() })
}

/// Z-measurement count of the X protocol along a shortest grid path,
/// computed from the initial neighborhoods alone:
///
/// `|(∪ N_i) \ P| - |(∪ (N_i ∩ N_{i+2})) \ P|`
///
/// where `N_i` is the neighborhood of the `i`-th path vertex and `P` the set
/// of path vertices. With `grid` set, the path is first checked to be a
/// monotone shortest path of that grid.
pub fn closed_form_z_cost(g: &Graph, grid: Option<&GridSpec>, p: &Path) -> GridResult<usize> {
    if let Some(spec) = grid {
        path_vector(spec, p)?;
    }
    p.validate(g)?;
    let on_path = p.as_set();
    let ns = p.vertices().iter().map(|&v| g.neighborhood(v)).collect::<Result<Vec<_>, _>>()?;
    let union: BTreeSet<VertexId> = ns.iter().flatten().copied().filter(|v| !on_path.contains(v)).collect();
    let shared: BTreeSet<VertexId> = ns
        .iter()
        .zip(ns.iter().skip(2))
        .flat_map(|(a, b)| a.intersection(b).copied().collect::<Vec<_>>())
        .filter(|v| !on_path.contains(v))
        .collect();
    Ok(union.len() - shared.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: u32) -> VertexId {
        VertexId(x)
    }

    #[test]
    fn grid_adjacency() {
        let g = make_grid(GridSpec::new(3, 3).unwrap()).unwrap();
        assert_eq!(g.neighborhood(v(5)).unwrap(), crate::graph::vset([2u32, 4, 6, 8]));
        let g = make_grid(GridSpec::new(4, 4).unwrap()).unwrap();
        assert_eq!(g.neighborhood(v(1)).unwrap(), crate::graph::vset([2u32, 5]));
        let g = make_grid(GridSpec::new(4, 3).unwrap()).unwrap();
        Path::new([1u32, 4, 5, 6, 9, 12, 11, 10]).validate(&g).unwrap();
        assert!(GridSpec::new(0, 3).is_err());
        assert!(make_grid(GridSpec { rows: 2, cols: 0 }).is_err());
    }

    #[test]
    fn coords() {
        let s = GridSpec::new(4, 3).unwrap();
        assert_eq!(s.coord(v(1)).unwrap(), (0, 0));
        assert_eq!(s.coord(v(12)).unwrap(), (2, 3));
        assert_eq!(s.label(2, 3), Some(v(12)));
        assert!(s.coord(v(13)).is_err());
    }

    #[test]
    fn four_by_four_vectors() {
        let s = GridSpec::new(4, 4).unwrap();
        let corner = path_vector(&s, &Path::new([1u32, 5, 9, 13, 14, 15, 16])).unwrap();
        assert_eq!(corner.entries, vec![3, 3, 0, 0, 0, 0]);
        assert_eq!(corner.first_axis, Axis::Y);
        let stairs = path_vector(&s, &Path::new([1u32, 5, 6, 10, 11, 15, 16])).unwrap();
        assert_eq!(stairs.entries, vec![1, 1, 1, 1, 1, 1]);
        assert_eq!(majorizes(&corner, &stairs).unwrap(), MajorizationOrder::LeftMajorizes);
    }

    #[test]
    fn straight_path_vector() {
        let s = GridSpec::new(1, 6).unwrap();
        let pv = path_vector(&s, &Path::new([1u32, 2, 3, 4, 5])).unwrap();
        assert_eq!(pv.entries, vec![4, 0, 0, 0]);
        assert_eq!(pv.first_axis, Axis::X);
    }

    #[test]
    fn non_monotone_rejected() {
        let s = GridSpec::new(3, 3).unwrap();
        assert!(matches!(path_vector(&s, &Path::new([1u32, 2, 5, 4, 7])), Err(GridError::NonMonotone(_))));
        assert!(matches!(path_vector(&s, &Path::new([1u32, 3])), Err(GridError::NonMonotone(_))));
    }

    #[test]
    fn decode_mismatch() {
        let s = GridSpec::new(3, 3).unwrap();
        let bad = PathVector { entries: vec![2, 1, 0], first_axis: Axis::X, dx: 1, dy: 2 };
        assert!(matches!(path_from_vector(&s, v(1), &bad, Sign::Plus, Sign::Plus), Err(GridError::VectorMismatch(_))));
        let off = PathVector { entries: vec![2, 0], first_axis: Axis::X, dx: 2, dy: 0 };
        assert!(path_from_vector(&s, v(2), &off, Sign::Plus, Sign::Plus).is_err());
        let p = path_from_vector(&s, v(9), &off, Sign::Minus, Sign::Plus).unwrap();
        assert_eq!(p, Path::new([9u32, 8, 7]));
    }

    #[test]
    fn enumeration_counts() {
        let s = GridSpec::new(4, 4).unwrap();
        assert_eq!(enumerate_shortest_paths(&s, v(1), v(16)).unwrap().len(), 20);
        assert_eq!(enumerate_shortest_paths(&s, v(1), v(4)).unwrap().len(), 1);
        let s = GridSpec::new(2, 2).unwrap();
        assert_eq!(enumerate_shortest_paths(&s, v(1), v(4)).unwrap().len(), 2);
        assert_eq!(enumerate_shortest_paths(&s, v(2), v(3)).unwrap().len(), 2);
    }

    #[test]
    fn majorization_cases() {
        assert_eq!(majorization(&[3, 3, 0, 0, 0, 0], &[2, 2, 1, 1, 0, 0]).unwrap(), MajorizationOrder::LeftMajorizes);
        assert_eq!(majorization(&[1, 2, 3], &[3, 1, 2]).unwrap(), MajorizationOrder::Equal);
        assert_eq!(majorization(&[1, 1, 1, 1, 1, 1], &[3, 3, 0, 0, 0, 0]).unwrap(), MajorizationOrder::RightMajorizes);
        // prefix sums 3,4,5,6 vs 2,4,6,6
        assert_eq!(majorization(&[1, 3, 1, 1], &[2, 0, 2, 2]).unwrap(), MajorizationOrder::Incomparable);
        assert!(majorization(&[1, 1], &[2]).is_err());
        assert!(majorization(&[1, 1], &[2, 1]).is_err());
    }

    #[test]
    fn rank_single_and_line() {
        let s = GridSpec::new(1, 5).unwrap();
        let paths = enumerate_shortest_paths(&s, v(1), v(5)).unwrap();
        let r = rank_paths(&s, &paths).unwrap();
        assert_eq!(r.minimal, vec![0]);
        assert_eq!(r.best().path, paths[0]);
        let s = GridSpec::new(3, 3).unwrap();
        let mixed = [Path::new([1u32, 2]), Path::new([1u32, 4])];
        assert_eq!(rank_paths(&s, &mixed), Err(GridError::MixedEndpoints));
    }

    #[test]
    fn closed_form_triangle() {
        let g = Graph::from_edges([(1u32, 2u32), (2, 3), (1, 3)]).unwrap();
        assert_eq!(closed_form_z_cost(&g, None, &Path::new([1u32, 2])).unwrap(), 1);
        let x = x_protocol(&g, &Path::new([1u32, 2])).unwrap();
        assert_eq!(x.z_count, 1);
    }
}
