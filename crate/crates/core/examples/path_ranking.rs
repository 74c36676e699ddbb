//! Ranks the 20 shortest corner-to-corner paths of a 4x4 grid.
//!
//! Each path is encoded by its run lengths; a path whose vector is more
//! uniform (majorized by the others) needs fewer measurements.

use ghz_routing::graph::VertexId;
use ghz_routing::grid::{closed_form_z_cost, enumerate_shortest_paths, make_grid, rank_paths, GridSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = GridSpec::new(4, 4)?;
    let g = make_grid(spec)?;
    let paths = enumerate_shortest_paths(&spec, VertexId(1), VertexId(16))?;
    let ranking = rank_paths(&spec, &paths)?;

    println!("{:<22} {:<20} {:>4} {:>7}", "path", "vector", "cost", "Z (cf)");
    let mut rows: Vec<_> = ranking.paths.iter().collect();
    rows.sort_by_key(|r| (r.x_protocol_cost, r.path.clone()));
    for r in rows {
        let z = closed_form_z_cost(&g, Some(&spec), &r.path)?;
        println!(
            "{:<22} {:<20} {:>4} {:>7}",
            r.path.to_string(),
            format!("{:?}", r.vector.entries),
            r.x_protocol_cost,
            z
        );
    }
    println!("minimal vectors: {:?}", ranking.minimal_vectors);
    println!("best path: {}", ranking.best().path);
    Ok(())
}
