//! Reads a network from JSON, routes on it, and renders the result as DOT.

use ghz_routing::graph::VertexId;
use ghz_routing::netio::{export_dot, export_json, parse_network, parse_report, Highlights};
use ghz_routing::protocols::{find_route, x_protocol};

const NETWORK: &str = r#"{
  "vertices": [1, 2, 3, 4, 5, 6],
  "edges": [[1, 2], [2, 3], [3, 4], [2, 5], [5, 6], [6, 4]]
}"#;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (_, g) = parse_network(NETWORK)?;
    let (a, b) = (VertexId(1), VertexId(4));
    let path = find_route(&g, a, b)?;
    let report = x_protocol(&g, &path)?;

    let json = export_json(&report);
    assert_eq!(parse_report(&json)?, report);

    let h = Highlights::from_report(&report, [a, b]);
    print!("{}", export_dot(&report.final_graph, Some(&h)));

    if let Err(e) = parse_network(r#"{"vertices": [1], "edges": [[1, 2]]}"#) {
        eprintln!("rejected: {e}");
    }
    Ok(())
}
