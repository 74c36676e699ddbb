use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::{Executor, ProtocolError, ProtocolReport, ProtocolResult};
use crate::graph::{Graph, Path, VertexId};

/// All shortest `a`-`b` paths in `g` that avoid `avoid`, sorted
/// lexicographically, at most `limit` of them.
pub fn shortest_paths(
    g: &Graph,
    a: VertexId,
    b: VertexId,
    avoid: &BTreeSet<VertexId>,
    limit: usize,
) -> ProtocolResult<Vec<Path>> {
    g.neighbors(a)?;
    g.neighbors(b)?;
    if a == b {
        return Ok(vec![Path(vec![a])]);
    }
    // BFS from b so that paths can be walked forward from a.
    let mut dist: BTreeMap<VertexId, usize> = BTreeMap::from([(b, 0)]);
    let mut queue = VecDeque::from([b]);
    while let Some(u) = queue.pop_front() {
        if u == a {
            break;
        }
        for &n in g.neighbors(u)? {
            if (n == a || !avoid.contains(&n)) && !dist.contains_key(&n) {
                dist.insert(n, dist[&u] + 1);
                queue.push_back(n);
            }
        }
    }
    if !dist.contains_key(&a) {
        return Ok(Vec::new());
    }

    let mut out = Vec::new();
    let mut stack = vec![a];
    walk(g, &dist, b, &mut stack, &mut out, limit)?;
    Ok(out)
}

// Neighbors are visited in ascending order, so output is lexicographic.
fn walk(
    g: &Graph,
    dist: &BTreeMap<VertexId, usize>,
    b: VertexId,
    stack: &mut Vec<VertexId>,
    out: &mut Vec<Path>,
    limit: usize,
) -> ProtocolResult<()> {
    let u = *stack.last().unwrap();
    if u == b {
        out.push(Path(stack.clone()));
        return Ok(());
    }
    let d = dist[&u];
    for &n in g.neighbors(u)? {
        if out.len() >= limit {
            break;
        }
        if dist.get(&n) == Some(&(d - 1)) {
            stack.push(n);
            walk(g, dist, b, stack, out, limit)?;
            stack.pop();
        }
    }
    Ok(())
}

const ROUTE_LIMIT: usize = 100_000;

/// Shortest `a`-`b` path with the smallest combined neighborhood.
///
/// Remaining ties go to the path whose X protocol needs the fewest
/// measurements, then to the lexicographically greatest vertex sequence.
pub fn find_route(g: &Graph, a: VertexId, b: VertexId) -> ProtocolResult<Path> {
    if a == b {
        return Err(ProtocolError::InvalidPath(format!("endpoints coincide at {a}")));
    }
    let paths = shortest_paths(g, a, b, &BTreeSet::new(), ROUTE_LIMIT)?;
    if paths.is_empty() {
        return Err(ProtocolError::NoPath(a, b));
    }
    let mut best: Option<((usize, usize), Path)> = None;
    let mut by_cn: Vec<(usize, Path)> = Vec::with_capacity(paths.len());
    for p in paths {
        let cn = g.combined_neighborhood(p.vertices())?.len();
        by_cn.push((cn, p));
    }
    let min_cn = by_cn.iter().map(|(c, _)| *c).min().unwrap();
    for (cn, p) in by_cn.into_iter().filter(|(c, _)| *c == min_cn) {
        let cost = x_protocol(g, &p)?.measurement_count();
        let key = (cn, cost);
        let better = match &best {
            None => true,
            Some((k, q)) => key < *k || (key == *k && p > *q),
        };
        if better {
            best = Some((key, p));
        }
    }
    Ok(best.unwrap().1)
}

fn check_line(g: &Graph, p: &Path) -> ProtocolResult<()> {
    p.validate(g).map_err(|e| ProtocolError::InvalidPath(e.to_string()))?;
    if !p.is_induced(g)? {
        return Err(ProtocolError::InvalidPath(format!("path {p} has chords")));
    }
    Ok(())
}

/// Z-measures every off-path neighbor of `p`. Returns the new graph and the
/// measured set.
pub fn isolate_path(g: &Graph, p: &Path) -> ProtocolResult<(Graph, BTreeSet<VertexId>)> {
    p.validate(g).map_err(|e| ProtocolError::InvalidPath(e.to_string()))?;
    let mut ex = Executor::new(g.clone());
    let z = ex.isolate(&p.as_set())?;
    Ok((ex.finish().final_graph, z))
}

// X-measures the interior in path order. The special neighbor is always the
// first vertex, which is the live predecessor once earlier vertices are gone.
fn splice(ex: &mut Executor, p: &Path) -> ProtocolResult<()> {
    let first = p.first().unwrap();
    for &v in p.interior() {
        ex.x(v, first)?;
    }
    Ok(())
}

fn bell_check(g: &Graph, p: &Path) -> ProtocolResult<()> {
    let (a, b) = (p.first().unwrap(), p.last().unwrap());
    if a == b {
        return Ok(());
    }
    if g.neighborhood(a)? != BTreeSet::from([b]) || g.neighborhood(b)? != BTreeSet::from([a]) {
        return Err(ProtocolError::PostCondition(format!("({a},{b}) is not an isolated edge")));
    }
    Ok(())
}

/// Isolate `p`, then X-measure its interior.
pub fn repeater_protocol(g: &Graph, p: &Path) -> ProtocolResult<ProtocolReport> {
    check_line(g, p)?;
    let mut ex = Executor::tracking(g.clone(), p.as_set());
    ex.isolate(&p.as_set())?;
    splice(&mut ex, p)?;
    let report = ex.finish();
    bell_check(&report.final_graph, p)?;
    Ok(report)
}

/// X-measure the interior of `p`, then Z-measure whatever still touches the
/// two endpoints.
pub fn x_protocol(g: &Graph, p: &Path) -> ProtocolResult<ProtocolReport> {
    check_line(g, p)?;
    let mut ex = Executor::tracking(g.clone(), p.as_set());
    splice(&mut ex, p)?;
    let ends = BTreeSet::from([p.first().unwrap(), p.last().unwrap()]);
    ex.isolate(&ends)?;
    let report = ex.finish();
    bell_check(&report.final_graph, p)?;
    Ok(report)
}
