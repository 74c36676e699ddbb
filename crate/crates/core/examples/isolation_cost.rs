//! Measurement cost of GHZ extraction with and without isolating the line
//! first, on a 5x5 grid.

use ghz_routing::graph::Path;
use ghz_routing::grid::{make_grid, GridSpec};
use ghz_routing::protocols::{compare_costs, RepeaterLine};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = make_grid(GridSpec::new(5, 5)?)?;
    let lines: [&[u32]; 3] = [&[7, 8, 9], &[1, 2, 3, 4, 5], &[1, 2, 3, 8, 13, 14, 15]];
    for vs in lines {
        let rl = RepeaterLine::canonical(Path::new(vs.iter().copied()))?;
        let c = compare_costs(&g, &rl)?;
        println!(
            "line {} (n = {}): with isolation {:>2} [formula {:>2}], without {:>2} [formula {:>2}]",
            rl.line(),
            rl.n(),
            c.with_isolation,
            c.with_isolation_formula,
            c.without_isolation,
            c.without_isolation_formula
        );
    }
    Ok(())
}
