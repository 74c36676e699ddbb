use serde::{Deserialize, Serialize};

use super::{ghz_extract_x_variant, run_script, ProtocolError, ProtocolReport, ProtocolResult, RepeaterLine};
use crate::graph::Graph;

fn require_canonical(rl: &RepeaterLine) -> ProtocolResult<()> {
    if rl.is_canonical() {
        Ok(())
    } else {
        Err(ProtocolError::InvalidLine("cost accounting needs a canonical line".into()))
    }
}

fn spare_count(rl: &RepeaterLine) -> usize {
    rl.n().saturating_sub(3)
}

/// Measurements used by the X variant when the line is isolated first.
pub fn cost_with_isolation(g: &Graph, rl: &RepeaterLine) -> ProtocolResult<usize> {
    require_canonical(rl)?;
    Ok(ghz_extract_x_variant(g, rl, true, false)?.measurement_count())
}

/// Measurements used by the X variant run on the embedded line, isolating
/// only the final targets.
pub fn cost_without_isolation(g: &Graph, rl: &RepeaterLine) -> ProtocolResult<usize> {
    require_canonical(rl)?;
    Ok(ghz_extract_x_variant(g, rl, false, false)?.measurement_count())
}

/// `|N_{v_1} ∪ ... ∪ N_{v_L}| - n`, over the neighborhoods in `g`.
pub fn isolation_cost_formula(g: &Graph, rl: &RepeaterLine) -> ProtocolResult<usize> {
    require_canonical(rl)?;
    let cn = g.combined_neighborhood(rl.line().vertices())?;
    Ok(cn.len() - rl.n())
}

/// `(n - 3) + |∪ N'_t| - n` where `N'_t` is the neighborhood of target `t`
/// right after the spare vertices have been X-measured.
pub fn no_isolation_cost_formula(g: &Graph, rl: &RepeaterLine) -> ProtocolResult<usize> {
    require_canonical(rl)?;
    let report = ghz_extract_x_variant(g, rl, false, false)?;
    let step = spare_count(rl);
    let mut union = std::collections::BTreeSet::new();
    for t in rl.targets() {
        let ns = report
            .snapshot(step, t)
            .ok_or_else(|| ProtocolError::PostCondition(format!("no snapshot of {t} at step {step}")))?;
        union.extend(ns.iter().copied());
    }
    Ok(spare_count(rl) + union.len() - rl.n())
}

/// Executes the surplus removals of a non-canonical line and returns the
/// resulting graph, the canonical line, and the removal transcript.
pub fn reduce_to_canonical(g: &Graph, rl: &RepeaterLine) -> ProtocolResult<(Graph, RepeaterLine, ProtocolReport)> {
    let layout = rl.layout()?;
    let report = run_script(g, &layout.removals)?;
    let canonical = RepeaterLine::new(layout.canonical, &rl.target_set())?;
    if !canonical.line().is_induced(&report.final_graph)? {
        return Err(ProtocolError::PostCondition(format!(
            "surplus removal did not leave the line {}",
            canonical.line()
        )));
    }
    Ok((report.final_graph.clone(), canonical, report))
}

/// Executed counts and closed-form counts for both orders of work.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CostComparison {
    pub with_isolation: usize,
    pub without_isolation: usize,
    pub with_isolation_formula: usize,
    pub without_isolation_formula: usize,
}

impl CostComparison {
    pub fn formulas_agree(&self) -> bool {
        self.with_isolation == self.with_isolation_formula && self.without_isolation == self.without_isolation_formula
    }
}

pub fn compare_costs(g: &Graph, rl: &RepeaterLine) -> ProtocolResult<CostComparison> {
    Ok(CostComparison {
        with_isolation: cost_with_isolation(g, rl)?,
        without_isolation: cost_without_isolation(g, rl)?,
        with_isolation_formula: isolation_cost_formula(g, rl)?,
        without_isolation_formula: no_isolation_cost_formula(g, rl)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Path;

    #[test]
    fn n3_costs_coincide() {
        // line 1-2-3 with a pendant 4 on vertex 2
        let g = Graph::from_edges([(1u32, 2u32), (2, 3), (2, 4)]).unwrap();
        let rl = RepeaterLine::canonical(Path::new([1u32, 2, 3])).unwrap();
        let c = compare_costs(&g, &rl).unwrap();
        assert_eq!(c.with_isolation, c.without_isolation);
        assert_eq!(c.with_isolation, 1);
        assert!(c.formulas_agree());
    }

    #[test]
    fn non_canonical_rejected() {
        let g = Graph::from_edges([(1u32, 2u32), (2, 3), (3, 4)]).unwrap();
        let rl = RepeaterLine::new(Path::new([1u32, 2, 3, 4]), &crate::graph::vset([1u32, 4])).unwrap();
        assert!(cost_with_isolation(&g, &rl).is_err());
    }
}
