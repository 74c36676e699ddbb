//! Replays a hand-written measurement script and serializes it.

use ghz_routing::grid::{make_grid, GridSpec};
use ghz_routing::netio::{export_script, parse_script};
use ghz_routing::protocols::run_script;

const SCRIPT: &str = r#"[
  {"op": "Z", "vertex": 7},
  {"op": "Z", "vertex": 2},
  {"op": "Z", "vertex": 6},
  {"op": "X", "vertex": 4, "w": 1},
  {"op": "X", "vertex": 5, "w": 1},
  {"op": "X", "vertex": 8, "w": 1}
]"#;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = make_grid(GridSpec::new(3, 3)?)?;
    let plan = parse_script(SCRIPT)?;
    let report = run_script(&g, &plan)?;
    println!("{} steps, final edges {:?}", report.transcript.len(), report.final_graph.edges().collect::<Vec<_>>());

    // replaying a transcript reproduces it exactly
    let again = run_script(&g, &report.transcript_directives())?;
    assert_eq!(again, report);
    println!("{}", export_script(&plan));
    Ok(())
}
