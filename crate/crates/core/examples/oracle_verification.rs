//! Cross-checks the graph rewrite rules against dense state vectors.

use ghz_routing::graph::VertexId;
use ghz_routing::grid::{make_grid, GridSpec};
use ghz_routing::oracle::{end_to_end, sweep};
use ghz_routing::protocols::{find_route, x_protocol};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let seed = std::env::var("GHZROUTE_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(0);
    let s = sweep(seed, 100, 10)?;
    println!("random sweep (seed {seed}, {} graphs)", s.cases);
    println!("  max |norm - 1|        {:.2e}", s.max_norm_error);
    println!("  LC unitary identity   {:.15}", s.min_lc_fidelity);
    println!("  Z deletion            {:.15}", s.min_z_fidelity);
    println!("  Y rule                {:.15}", s.min_y_fidelity);
    println!("  X rule                {:.15}", s.min_x_fidelity);
    println!("  X as LC/Z composition {:.15}", s.min_x_composition_fidelity);

    let g = make_grid(GridSpec::new(3, 3)?)?;
    let path = find_route(&g, VertexId(1), VertexId(9))?;
    let report = x_protocol(&g, &path)?;
    let e = end_to_end(&g, &report.transcript_directives(), &[VertexId(1), VertexId(9)])?;
    println!("Bell pair on 3x3 grid ({} qubits): fidelity {:.15}", e.qubits, e.ghz_fidelity);
    Ok(())
}
