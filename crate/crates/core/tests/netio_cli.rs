mod common;

use std::io::Cursor;

use common::{set, v};
use ghz_routing::cli::run_with;
use ghz_routing::grid::{make_grid, GridSpec};
use ghz_routing::netio::{export_dot, export_json, parse_network, parse_report, Highlights, NetIoError};
use ghz_routing::protocols::{find_route, x_protocol};

fn fixture_path(name: &str) -> String {
    format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn cli(args: &[&str], stdin: &str) -> Run {
    let argv: Vec<String> = std::iter::once("ghz-route").chain(args.iter().copied()).map(String::from).collect();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run_with(&argv, &mut Cursor::new(stdin.as_bytes().to_vec()), &mut out, &mut err);
    Run { code, stdout: String::from_utf8(out).unwrap(), stderr: String::from_utf8(err).unwrap() }
}

fn json(s: &str) -> serde_json::Value {
    serde_json::from_str(s).unwrap()
}

#[test]
fn explicit_edge_list_equals_generated_grid() {
    let text = std::fs::read_to_string(fixture_path("grid_4x3_network.json")).unwrap();
    let (_, g) = parse_network(&text).unwrap();
    assert_eq!(g, make_grid(GridSpec::new(4, 3).unwrap()).unwrap());
}

#[test]
fn dangling_edges_are_input_errors() {
    let r = cli(&["route", "--bell", "1", "2"], r#"{"vertices":[1],"edges":[[1,2]]}"#);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("undeclared vertex 2"));
    assert!(matches!(
        parse_network(r#"{"vertices":[1],"edges":[[1,2]]}"#),
        Err(NetIoError::DanglingEdge { missing: 2, .. })
    ));
}

#[test]
fn dot_of_bell_result_has_two_components() {
    let g = make_grid(GridSpec::new(3, 3).unwrap()).unwrap();
    let r = x_protocol(&g, &find_route(&g, v(1), v(9)).unwrap()).unwrap();
    let dot = export_dot(&r.final_graph, Some(&Highlights::from_report(&r, [v(1), v(9)])));
    assert!(dot.contains("1 -- 9 [class=\"final\""));
    assert!(dot.contains("4 [class=\"measured\""));
    assert!(dot.contains("1 [class=\"target\""));
    // rebuild the graph from the DOT edges
    let mut edges = Vec::new();
    for line in dot.lines().filter(|l| l.contains("--")) {
        let mut it = line.trim().split(|c: char| !c.is_ascii_digit()).filter(|s| !s.is_empty());
        let a: u32 = it.next().unwrap().parse().unwrap();
        let b: u32 = it.next().unwrap().parse().unwrap();
        edges.push((a, b));
    }
    let rebuilt = ghz_routing::graph::Graph::from_edges(edges).unwrap();
    let comps = rebuilt.connected_components();
    assert_eq!(comps, vec![set([1, 9]), set([2, 3, 6, 7])]);
    assert_eq!(export_dot(&r.final_graph, None), export_dot(&r.final_graph, None));
}

#[test]
fn reports_round_trip_through_json() {
    let g = make_grid(GridSpec::new(4, 4).unwrap()).unwrap();
    let r = x_protocol(&g, &find_route(&g, v(1), v(16)).unwrap()).unwrap();
    assert_eq!(parse_report(&export_json(&r)).unwrap(), r);
}

#[test]
fn bell_route_on_three_by_three() {
    let r = cli(&["--grid", "3x3", "route", "--bell", "1", "9"], "");
    assert_eq!(r.code, 0, "{}", r.stderr);
    let out = json(&r.stdout);
    assert_eq!(out["report"]["x_count"], 3);
    assert_eq!(out["report"]["z_count"], 0);
    assert_eq!(out["path"], json("[1,4,5,8,9]"));
    let edges = &out["report"]["final_graph"]["edges"];
    assert!(edges.as_array().unwrap().contains(&json("[1,9]")));
}

#[test]
fn network_from_file_or_stdin() {
    let grid = fixture_path("grid3.json");
    let from_file = cli(&["--in", &grid, "route", "--bell", "1", "9"], "");
    let from_stdin = cli(&["route", "--bell", "1", "9"], r#"{"grid":{"rows":3,"cols":3}}"#);
    assert_eq!(from_file.code, 0);
    assert_eq!(from_file.stdout, from_stdin.stdout);
}

#[test]
fn ranked_paths_on_four_by_four() {
    let r = cli(&["--grid", "4x4", "paths", "1", "16", "--rank"], "");
    assert_eq!(r.code, 0, "{}", r.stderr);
    let out = json(&r.stdout);
    assert_eq!(out["paths"].as_array().unwrap().len(), 20);
    assert_eq!(out["minimal_vectors"], json("[[1,1,1,1,1,1]]"));
    let plain = cli(&["--grid", "4x4", "paths", "1", "16"], "");
    assert_eq!(json(&plain.stdout).as_array().unwrap().len(), 20);
}

#[test]
fn paths_need_a_grid() {
    let r = cli(&["paths", "1", "2"], r#"{"vertices":[1,2],"edges":[[1,2]]}"#);
    assert_eq!(r.code, 2);
}

#[test]
fn ghz_route_on_four_by_three() {
    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("ghz.dot");
    let out = dir.path().join("ghz.json");
    let r = cli(
        &[
            "--grid",
            "4x3",
            "--out",
            out.to_str().unwrap(),
            "route",
            "--ghz",
            "1,4,6,12,10",
            "--variant",
            "x",
            "--final-lc",
            "--verify",
            "--dot",
            dot.to_str().unwrap(),
        ],
        "",
    );
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.is_empty());
    let report = json(&std::fs::read_to_string(&out).unwrap());
    let final_edges = report["report"]["final_graph"]["edges"].as_array().unwrap().len();
    assert_eq!(final_edges, 10);
    assert!((report["verification"]["ghz_fidelity"].as_f64().unwrap() - 1.0).abs() < 1e-10);
    assert!(std::fs::read_to_string(&dot).unwrap().starts_with("graph network {"));
}

#[test]
fn final_lc_needs_the_x_variant() {
    let r = cli(&["--grid", "4x3", "route", "--ghz", "1,4,6,12,10", "--final-lc"], "");
    assert_eq!(r.code, 2);
}

#[test]
fn domain_errors_exit_one() {
    let disconnected = r#"{"vertices":[1,2,3,4],"edges":[[1,2],[3,4]]}"#;
    let r = cli(&["route", "--bell", "1", "3"], disconnected);
    assert_eq!(r.code, 1, "{}", r.stderr);
    assert!(r.stderr.contains("no path"));
    let r = cli(&["route", "--ghz", "1,3"], disconnected);
    assert_eq!(r.code, 1, "{}", r.stderr);
}

#[test]
fn input_errors_exit_two() {
    assert_eq!(cli(&["--grid", "3x3", "route", "--bell", "1", "10"], "").code, 2);
    assert_eq!(cli(&["--grid", "3x3", "route", "--bell", "1", "1"], "").code, 2);
    assert_eq!(cli(&["route", "--bell", "1", "2"], "{").code, 2);
    assert_eq!(cli(&["--grid", "0x3", "grid", "1", "1"], "").code, 2);
    assert_eq!(cli(&["bogus"], "").code, 2);
    assert_eq!(cli(&["--grid", "3x3", "script", "/nonexistent/plan.json"], "").code, 2);
}

#[test]
fn help_exits_zero() {
    let r = cli(&["--help"], "");
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("route"));
}

#[test]
fn grid_document_round_trips() {
    let r = cli(&["grid", "4", "3"], "");
    assert_eq!(r.code, 0);
    let (doc, g) = parse_network(&r.stdout).unwrap();
    assert_eq!(doc.grid, Some(GridSpec::new(4, 3).unwrap()));
    assert_eq!(g.num_edges(), 17);
}

#[test]
fn cost_of_a_non_canonical_line() {
    let r = cli(&["--grid", "4x3", "cost", "--line", "1,4,5,6,9,12,11,10", "--targets", "1,4,6,12,10"], "");
    assert_eq!(r.code, 0, "{}", r.stderr);
    let out = json(&r.stdout);
    assert_eq!(out["removal_measurements"], 1);
    assert_eq!(out["formulas_agree"], true);
    let c = &out["costs"];
    assert!(c["without_isolation"].as_u64() <= c["with_isolation"].as_u64());
}

#[test]
fn cost_rejects_chorded_lines() {
    let r = cli(&["--grid", "3x3", "cost", "--line", "1,2,5,4,7"], "");
    assert_eq!(r.code, 2);
}

#[test]
fn script_replays_from_file() {
    let script = fixture_path("bell_3x3_repeater_script.json");
    let r = cli(&["--grid", "3x3", "script", &script], "");
    assert_eq!(r.code, 0, "{}", r.stderr);
    let report = parse_report(&r.stdout).unwrap();
    assert_eq!(report.measurement_count(), 6);
    assert!(report.final_graph.has_edge(v(1), v(9)));

    let dir = tempfile::tempdir().unwrap();
    let stale = dir.path().join("stale.json");
    std::fs::write(&stale, r#"[{"op":"Z","vertex":5},{"op":"Z","vertex":5}]"#).unwrap();
    let r = cli(&["--grid", "3x3", "script", stale.to_str().unwrap()], "");
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("step 1"), "{}", r.stderr);
}

#[test]
fn output_is_byte_identical_across_runs() {
    let args = ["--grid", "4x4", "paths", "1", "16", "--rank"];
    assert_eq!(cli(&args, "").stdout, cli(&args, "").stdout);
    let args = ["oracle", "--seed", "9", "--cases", "15"];
    let (a, b) = (cli(&args, ""), cli(&args, ""));
    assert_eq!(a.code, 0, "{}", a.stderr);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a.stdout)["seed"], 9);
}

#[test]
fn binary_reads_the_seed_from_the_environment() {
    let bin = env!("CARGO_BIN_EXE_ghz-route");
    let run = |env: Option<&str>, args: &[&str]| {
        let mut cmd = std::process::Command::new(bin);
        cmd.args(["oracle", "--cases", "5"]).args(args).env_remove("GHZROUTE_SEED");
        if let Some(s) = env {
            cmd.env("GHZROUTE_SEED", s);
        }
        let out = cmd.output().unwrap();
        assert!(out.status.success());
        json(&String::from_utf8(out.stdout).unwrap())["seed"].as_u64().unwrap()
    };
    assert_eq!(run(None, &[]), 0);
    assert_eq!(run(Some("17"), &[]), 17);
    assert_eq!(run(Some("17"), &["--seed", "3"]), 3);
}
