//! GHZ state on five vertices of a 4x3 grid.
//!
//! Finds a repeater line through the targets, then extracts the GHZ state
//! with both protocol variants and shows they agree.

use std::collections::BTreeSet;

use ghz_routing::graph::{Basis, VertexId};
use ghz_routing::grid::{make_grid, GridSpec};
use ghz_routing::protocols::{build_repeater_line, ghz_extract_lc_variant, ghz_extract_x_variant, ghz_star_center};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = make_grid(GridSpec::new(4, 3)?)?;
    let targets: BTreeSet<VertexId> = [1u32, 4, 6, 12, 10].into_iter().map(VertexId).collect();

    let line = build_repeater_line(&g, &targets)?;
    let canonical = line.to_canonical()?;
    println!("repeater line   {}", line.line());
    println!("canonical line  {}", canonical.line());
    for d in line.layout()?.removals {
        println!("  surplus removal {d:?}");
    }

    let lc = ghz_extract_lc_variant(&g, &line, true)?;
    println!("LC variant: Z {:?}, LC {:?}", lc.measured_with(Basis::Z), lc.lc_vertices());

    let star = ghz_extract_x_variant(&g, &line, true, false)?;
    println!("X variant: X {:?}, star centred on {}", star.measured_with(Basis::X), ghz_star_center(&canonical));

    let full = ghz_extract_x_variant(&g, &line, true, true)?;
    println!("X variant + LC: same final graph as LC variant: {}", full.final_graph == lc.final_graph);
    println!("K_5 on targets: {}", lc.final_graph.is_complete_on(&targets)?);
    Ok(())
}
