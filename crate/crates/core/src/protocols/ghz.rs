use std::collections::BTreeSet;

use super::{Executor, ProtocolError, ProtocolReport, ProtocolResult, RepeaterLine};
use crate::graph::{Graph, VertexId};

/// Center of the star the X variant leaves behind: position `2n - 4` of the
/// canonical line, or the first vertex when `n = 2`.
pub fn ghz_star_center(canonical: &RepeaterLine) -> VertexId {
    let vs = canonical.line().vertices();
    if vs.len() == 2 {
        vs[0]
    } else {
        vs[vs.len() - 2]
    }
}

// Shared prelude: optional isolation, then surplus removal. Returns the
// executor and the canonical line.
fn prepare(g: &Graph, rl: &RepeaterLine, isolate_first: bool) -> ProtocolResult<(Executor, RepeaterLine)> {
    let line = rl.line();
    line.validate(g).map_err(|e| ProtocolError::InvalidLine(e.to_string()))?;
    if !line.is_induced(g)? {
        return Err(ProtocolError::InvalidLine(format!("line {line} has chords")));
    }
    let layout = rl.layout()?;
    let canonical = RepeaterLine::new(layout.canonical, &rl.target_set())?;

    let mut ex = Executor::tracking(g.clone(), line.as_set());
    if isolate_first {
        ex.isolate(&line.as_set())?;
    }
    for d in &layout.removals {
        ex.apply(d)?;
    }
    if !canonical.line().is_induced(ex.graph())? {
        return Err(ProtocolError::PostCondition(format!(
            "surplus removal did not leave the line {}",
            canonical.line()
        )));
    }
    Ok((ex, canonical))
}

fn finish_isolated(mut ex: Executor, targets: &BTreeSet<VertexId>) -> ProtocolResult<ProtocolReport> {
    ex.isolate(targets)?;
    let report = ex.finish();
    if !report.final_graph.is_isolated_set(targets)? {
        return Err(ProtocolError::PostCondition("targets are not isolated".into()));
    }
    Ok(report)
}

/// GHZ extraction by local complementation.
///
/// LC at every canonical line vertex except the two ends, in line order,
/// then Z on the spare vertices. Without `isolate_first`, every non-target
/// neighbor of the targets is Z-measured at the end instead of isolating the
/// line up front. The targets end up as a complete graph.
pub fn ghz_extract_lc_variant(g: &Graph, rl: &RepeaterLine, isolate_first: bool) -> ProtocolResult<ProtocolReport> {
    let (mut ex, canonical) = prepare(g, rl, isolate_first)?;
    let vs = canonical.line().vertices();
    let len = vs.len();
    for &v in &vs[1..len - 1] {
        ex.lc(v)?;
    }
    for i in (2..len.saturating_sub(2)).step_by(2) {
        ex.z(vs[i])?;
    }
    let targets = canonical.target_set();
    let report = finish_isolated(ex, &targets)?;
    if !report.final_graph.is_complete_on(&targets)? {
        return Err(ProtocolError::PostCondition("targets do not form a complete graph".into()));
    }
    Ok(report)
}

/// GHZ extraction by X measurements of the spare vertices.
///
/// Spares are measured from the far end backwards, each with its line
/// predecessor as special neighbor. The targets end up as a star centered
/// on [`ghz_star_center`]; with `final_lc` one more LC there turns the star
/// into a complete graph.
pub fn ghz_extract_x_variant(
    g: &Graph,
    rl: &RepeaterLine,
    isolate_first: bool,
    final_lc: bool,
) -> ProtocolResult<ProtocolReport> {
    let (mut ex, canonical) = prepare(g, rl, isolate_first)?;
    let vs = canonical.line().vertices();
    let len = vs.len();
    // spares sit at 0-based indices 2, 4, ..., len - 3
    let mut i = len.saturating_sub(3);
    while i >= 2 {
        ex.x(vs[i], vs[i - 1])?;
        i -= 2;
    }
    let targets = canonical.target_set();
    let center = ghz_star_center(&canonical);
    ex.isolate(&targets)?;
    if final_lc {
        ex.lc(center)?;
    }
    let report = finish_isolated(ex, &targets)?;
    let ok = if final_lc {
        report.final_graph.is_complete_on(&targets)?
    } else {
        report.final_graph.is_star_on(&targets, center)?
    };
    if !ok {
        return Err(ProtocolError::PostCondition("targets do not form the expected GHZ graph".into()));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{vset, Path};

    fn v(x: u32) -> VertexId {
        VertexId(x)
    }

    fn line_graph(len: u32) -> Graph {
        Graph::from_edges((1..len).map(|i| (i, i + 1))).unwrap()
    }

    #[test]
    fn n3_lc_gives_triangle() {
        let g = line_graph(3);
        let rl = RepeaterLine::canonical(Path::new([1u32, 2, 3])).unwrap();
        let r = ghz_extract_lc_variant(&g, &rl, true).unwrap();
        assert_eq!(r.lc_vertices(), vec![v(2)]);
        assert_eq!(r.measurement_count(), 0);
        assert!(r.final_graph.is_complete_on(&vset([1u32, 2, 3])).unwrap());
    }

    #[test]
    fn n4_lc_sequence() {
        let g = line_graph(5);
        let rl = RepeaterLine::canonical(Path::new([1u32, 2, 3, 4, 5])).unwrap();
        let r = ghz_extract_lc_variant(&g, &rl, true).unwrap();
        assert_eq!(r.lc_vertices(), vec![v(2), v(3), v(4)]);
        assert_eq!(r.measured_with(crate::graph::Basis::Z), vec![v(3)]);
        let t = vset([1u32, 2, 4, 5]);
        assert_eq!(r.final_graph.induced_subgraph(&t).unwrap().num_edges(), 6);
    }

    #[test]
    fn n3_x_variant_is_the_line() {
        let g = line_graph(3);
        let rl = RepeaterLine::canonical(Path::new([1u32, 2, 3])).unwrap();
        let r = ghz_extract_x_variant(&g, &rl, true, false).unwrap();
        assert_eq!(r.measurement_count(), 0);
        assert_eq!(r.final_graph, g);
        assert_eq!(ghz_star_center(&rl), v(2));
    }

    #[test]
    fn n4_x_variant_star_then_complete() {
        let g = line_graph(5);
        let rl = RepeaterLine::canonical(Path::new([1u32, 2, 3, 4, 5])).unwrap();
        let star = ghz_extract_x_variant(&g, &rl, true, false).unwrap();
        assert_eq!(star.x_count, 1);
        assert!(star.final_graph.is_star_on(&vset([1u32, 2, 4, 5]), v(4)).unwrap());
        let full = ghz_extract_x_variant(&g, &rl, true, true).unwrap();
        let lc = ghz_extract_lc_variant(&g, &rl, true).unwrap();
        assert_eq!(full.final_graph, lc.final_graph);
    }

    #[test]
    fn non_canonical_length_without_spare_fails() {
        let g = line_graph(4);
        let rl = RepeaterLine::new(Path::new([1u32, 2, 3, 4]), &vset([1u32, 2, 3, 4])).unwrap();
        assert!(matches!(ghz_extract_lc_variant(&g, &rl, true), Err(ProtocolError::InvalidLine(_))));
    }
}
