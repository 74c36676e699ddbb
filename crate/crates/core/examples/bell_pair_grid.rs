//! Bell pair between opposite corners of a 3x3 grid, two ways.
//!
//! Run with `cargo run --example bell_pair_grid`.

use ghz_routing::graph::{Basis, VertexId};
use ghz_routing::grid::{make_grid, GridSpec};
use ghz_routing::protocols::{find_route, repeater_protocol, x_protocol};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = make_grid(GridSpec::new(3, 3)?)?;
    let (a, b) = (VertexId(1), VertexId(9));

    let path = find_route(&g, a, b)?;
    println!("route {a} -> {b}: {path}");

    let repeater = repeater_protocol(&g, &path)?;
    println!(
        "repeater protocol: Z {:?}, X {:?} ({} measurements)",
        repeater.measured_with(Basis::Z),
        repeater.measured_with(Basis::X),
        repeater.measurement_count()
    );

    let x = x_protocol(&g, &path)?;
    println!(
        "X protocol:        X {:?}, Z {:?} ({} measurements)",
        x.measured_with(Basis::X),
        x.measured_with(Basis::Z),
        x.measurement_count()
    );

    for component in x.final_graph.connected_components() {
        println!("  component {:?}", component.iter().map(|v| v.0).collect::<Vec<_>>());
    }
    Ok(())
}
