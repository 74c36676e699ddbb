//! Command-line front end.
//!
//! Machine-readable JSON goes to stdout (or `--out`), a one-line summary to
//! stderr. Exit status: 0 on success, 1 on domain errors, 2 on input errors.

use std::collections::BTreeSet;
use std::fs;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, Path, VertexId};
use crate::grid::{enumerate_shortest_paths, path_vector, rank_paths, GridError, GridSpec, PathVector};
use crate::netio::{self, Highlights, NetIoError, NetworkDocument};
use crate::oracle::{self, EndToEnd, OracleError};
use crate::protocols::{
    build_repeater_line, compare_costs, find_route, ghz_extract_lc_variant, ghz_extract_x_variant, reduce_to_canonical,
    repeater_protocol, run_script, x_protocol, CostComparison, ProtocolError, ProtocolReport, RepeaterLine,
};

pub const SEED_ENV: &str = "GHZROUTE_SEED";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {message}")]
    Io { path: String, message: String },

    #[error("{0}")]
    Input(String),

    #[error("{0}")]
    Domain(String),

    #[error(transparent)]
    NetIo(#[from] NetIoError),

    #[error(transparent)]
    Protocol(#[from] ProtocolError),

    #[error(transparent)]
    Grid(#[from] GridError),

    #[error(transparent)]
    Oracle(#[from] OracleError),
}

pub type CliResult<T> = Result<T, CliError>;

fn protocol_exit_code(e: &ProtocolError) -> i32 {
    match e {
        ProtocolError::Graph(_) | ProtocolError::InvalidPath(_) | ProtocolError::InvalidLine(_) => 2,
        ProtocolError::NoPath(..)
        | ProtocolError::LineNotFound(_)
        | ProtocolError::StaleVertex { .. }
        | ProtocolError::PostCondition(_) => 1,
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Input(_) | CliError::NetIo(_) => 2,
            CliError::Domain(_) => 1,
            CliError::Protocol(e) => protocol_exit_code(e),
            CliError::Grid(GridError::Protocol(e)) => protocol_exit_code(e),
            CliError::Grid(_) => 2,
            CliError::Oracle(OracleError::TooManyQubits(_) | OracleError::MissingQubit(_) | OracleError::Graph(_)) => 2,
            CliError::Oracle(_) => 1,
        }
    }
}

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    #[default]
    Lc,
    X,
}

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum BellProtocol {
    #[default]
    X,
    Repeater,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    Bell,
    Ghz,
    Rank,
    Cost,
    Oracle,
    Script,
}

fn yes() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunOptions {
    #[serde(default)]
    pub variant: Variant,
    #[serde(default = "yes")]
    pub isolate_first: bool,
    #[serde(default)]
    pub final_lc: bool,
    #[serde(default)]
    pub protocol: BellProtocol,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { variant: Variant::Lc, isolate_first: true, final_lc: false, protocol: BellProtocol::X, seed: None }
    }
}

/// What to run, echoed back in every routing output.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunRequest {
    pub task: Task,
    pub targets: Vec<VertexId>,
    #[serde(default)]
    pub options: RunOptions,
}

impl RunRequest {
    pub fn new(task: Task, targets: impl IntoIterator<Item = u32>, options: RunOptions) -> CliResult<Self> {
        let r = RunRequest { task, targets: targets.into_iter().map(VertexId).collect(), options };
        r.validate()?;
        Ok(r)
    }

    pub fn validate(&self) -> CliResult<()> {
        let distinct: BTreeSet<VertexId> = self.targets.iter().copied().collect();
        if distinct.len() != self.targets.len() {
            return Err(CliError::Input("targets must be distinct".into()));
        }
        let ok = match self.task {
            Task::Bell | Task::Rank => self.targets.len() == 2,
            Task::Ghz => self.targets.len() >= 2,
            Task::Cost | Task::Oracle | Task::Script => true,
        };
        if ok {
            Ok(())
        } else {
            Err(CliError::Input(format!("wrong number of targets ({}) for {:?}", self.targets.len(), self.task)))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RouteOutput {
    pub request: RunRequest,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<Path>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub line: Option<RepeaterLine>,
    pub report: ProtocolReport,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verification: Option<EndToEnd>,
}

impl RouteOutput {
    pub fn summary(&self) -> String {
        let r = &self.report;
        let via = match (&self.path, &self.line) {
            (Some(p), _) => format!(" via {p}"),
            (None, Some(l)) => format!(" along {}", l.line()),
            _ => String::new(),
        };
        let mut s = format!(
            "{}{via}: {} measurements ({} X, {} Y, {} Z), {} LC",
            format!("{:?}", self.request.task).to_lowercase(),
            r.measurement_count(),
            r.x_count,
            r.y_count,
            r.z_count,
            r.lc_count
        );
        if let Some(v) = &self.verification {
            s.push_str(&format!("; state-level GHZ fidelity {:.12}", v.ghz_fidelity));
        }
        s
    }
}

/// Bell pair between the two targets along the best shortest path.
pub fn run_bell(g: &Graph, req: &RunRequest) -> CliResult<RouteOutput> {
    req.validate()?;
    let (a, b) = (req.targets[0], req.targets[1]);
    let path = find_route(g, a, b)?;
    let report = match req.options.protocol {
        BellProtocol::X => x_protocol(g, &path)?,
        BellProtocol::Repeater => repeater_protocol(g, &path)?,
    };
    Ok(RouteOutput { request: req.clone(), path: Some(path), line: None, report, verification: None })
}

/// GHZ state on the targets along a searched repeater line.
pub fn run_ghz(g: &Graph, req: &RunRequest) -> CliResult<RouteOutput> {
    req.validate()?;
    let targets: BTreeSet<VertexId> = req.targets.iter().copied().collect();
    let line = build_repeater_line(g, &targets)?;
    let o = &req.options;
    let report = match o.variant {
        Variant::Lc => {
            if o.final_lc {
                return Err(CliError::Input("--final-lc only applies to the x variant".into()));
            }
            ghz_extract_lc_variant(g, &line, o.isolate_first)?
        }
        Variant::X => ghz_extract_x_variant(g, &line, o.isolate_first, o.final_lc)?,
    };
    Ok(RouteOutput { request: req.clone(), path: None, line: Some(line), report, verification: None })
}

/// Replays a routing output at the state level.
pub fn verify(g: &Graph, out: &mut RouteOutput) -> CliResult<()> {
    let r = oracle::end_to_end(g, &out.report.transcript_directives(), &out.request.targets)?;
    out.verification = Some(r);
    if !r.passes() {
        return Err(CliError::Domain(format!(
            "state-level check failed: consistency {}, GHZ fidelity {}",
            r.consistency, r.ghz_fidelity
        )));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathListing {
    pub path: Path,
    pub vector: PathVector,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CostOutput {
    pub line: RepeaterLine,
    pub canonical_line: RepeaterLine,
    /// Measurements spent reducing the line to canonical form; not part of
    /// either cost below.
    pub removal_measurements: usize,
    pub costs: CostComparison,
    pub formulas_agree: bool,
}

/// Cost accounting for a line given as vertices; `targets` defaults to the
/// canonical positions.
pub fn run_cost(g: &Graph, line: &[u32], targets: &[u32]) -> CliResult<CostOutput> {
    let path = Path::new(line.iter().copied());
    let rl = if targets.is_empty() {
        RepeaterLine::canonical(path)?
    } else {
        RepeaterLine::new(path, &targets.iter().map(|&t| VertexId(t)).collect())?
    };
    let (reduced, canonical, removal) = if rl.is_canonical() {
        if !rl.line().is_induced(g).map_err(ProtocolError::from)? {
            return Err(ProtocolError::InvalidLine(format!("line {} has chords", rl.line())).into());
        }
        (g.clone(), rl.clone(), None)
    } else {
        let (h, c, r) = reduce_to_canonical(g, &rl)?;
        (h, c, Some(r))
    };
    let costs = compare_costs(&reduced, &canonical)?;
    Ok(CostOutput {
        line: rl,
        canonical_line: canonical,
        removal_measurements: removal.map_or(0, |r| r.measurement_count()),
        formulas_agree: costs.formulas_agree(),
        costs,
    })
}

fn parse_grid_arg(s: &str) -> Result<GridSpec, String> {
    let (r, c) = s.split_once(['x', 'X']).ok_or_else(|| format!("expected RxC, got {s:?}"))?;
    let rows = r.trim().parse().map_err(|e| format!("rows: {e}"))?;
    let cols = c.trim().parse().map_err(|e| format!("cols: {e}"))?;
    GridSpec::new(rows, cols).map_err(|e| e.to_string())
}

#[derive(Debug, Parser)]
#[command(name = "ghz-route", version, about = "Bell and GHZ extraction on graph-state networks")]
pub struct Cli {
    /// Network document (JSON); read from stdin when a network is needed and
    /// neither --in nor --grid is given
    #[arg(long = "in", value_name = "FILE", global = true)]
    pub input: Option<PathBuf>,

    /// Write machine output here instead of stdout
    #[arg(long, value_name = "FILE", global = true)]
    pub out: Option<PathBuf>,

    /// Use an R x C grid network, e.g. `--grid 4x3`
    #[arg(long, value_name = "RxC", value_parser = parse_grid_arg, global = true)]
    pub grid: Option<GridSpec>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Emit the network document of an R-row, C-column grid
    Grid { rows: usize, cols: usize },
    /// Extract a Bell pair or a GHZ state
    Route(RouteArgs),
    /// List the shortest grid paths between two vertices
    Paths {
        a: u32,
        b: u32,
        /// Rank them by majorization and X protocol cost
        #[arg(long)]
        rank: bool,
    },
    /// Measurement counts for a GHZ repeater line, with and without isolation
    Cost {
        /// Line vertices in order, comma-separated
        #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
        line: Vec<u32>,
        /// Targets on the line; defaults to the canonical positions
        #[arg(long, value_delimiter = ',')]
        targets: Vec<u32>,
    },
    /// Check the rewrite rules against state vectors on random graphs
    Oracle {
        #[arg(long, env = SEED_ENV, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        cases: usize,
        #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u32).range(1..=oracle::MAX_QUBITS as i64))]
        max_vertices: u32,
    },
    /// Replay a JSON measurement script
    Script {
        file: PathBuf,
        /// Also write a DOT rendering of the final graph
        #[arg(long, value_name = "FILE")]
        dot: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("targets").required(true).args(["bell", "ghz"])))]
pub struct RouteArgs {
    /// Bell pair endpoints
    #[arg(long, num_args = 2, value_names = ["A", "B"])]
    pub bell: Option<Vec<u32>>,
    /// GHZ targets, comma-separated
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub ghz: Option<Vec<u32>>,
    #[arg(long, value_enum, default_value_t = Variant::Lc)]
    pub variant: Variant,
    /// Skip isolating the line up front
    #[arg(long)]
    pub no_isolate: bool,
    /// With the x variant, turn the final star into a complete graph
    #[arg(long)]
    pub final_lc: bool,
    /// Bell protocol
    #[arg(long, value_enum, default_value_t = BellProtocol::X)]
    pub protocol: BellProtocol,
    /// Replay the transcript on state vectors (at most 14 vertices)
    #[arg(long)]
    pub verify: bool,
    /// Also write a DOT rendering of the final graph
    #[arg(long, value_name = "FILE")]
    pub dot: Option<PathBuf>,
}

struct Io<'a> {
    stdin: &'a mut dyn Read,
    stderr: &'a mut dyn Write,
}

fn read_file(path: &PathBuf) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Io { path: path.display().to_string(), message: e.to_string() })
}

fn write_file(path: &PathBuf, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| CliError::Io { path: path.display().to_string(), message: e.to_string() })
}

fn load_network(cli: &Cli, io: &mut Io) -> CliResult<(NetworkDocument, Graph)> {
    if let Some(spec) = cli.grid {
        let doc = NetworkDocument::from_grid(spec);
        let g = doc.to_graph()?;
        return Ok((doc, g));
    }
    let text = match &cli.input {
        Some(p) => read_file(p)?,
        None => {
            let mut s = String::new();
            io.stdin
                .read_to_string(&mut s)
                .map_err(|e| CliError::Io { path: "<stdin>".into(), message: e.to_string() })?;
            s
        }
    };
    Ok(netio::parse_network(&text)?)
}

fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("outputs always serialize")
}

fn write_dot(path: &PathBuf, report: &ProtocolReport, targets: &[VertexId]) -> CliResult<()> {
    let h = Highlights::from_report(report, targets.iter().copied());
    write_file(path, &netio::export_dot(&report.final_graph, Some(&h)))
}

// Returns (machine output, summary).
fn dispatch(cli: &Cli, io: &mut Io) -> CliResult<(String, String)> {
    match &cli.command {
        Command::Grid { rows, cols } => {
            let spec = GridSpec::new(*rows, *cols)?;
            let g = NetworkDocument::from_grid(spec).to_graph()?;
            let mut doc = NetworkDocument::from_graph(&g);
            doc.grid = Some(spec);
            doc.coords = spec.coordinates().into_iter().map(|(v, (x, y))| (v.0, (x as f64, y as f64))).collect();
            let summary = format!("grid {rows}x{cols}: {} vertices, {} edges", g.num_vertices(), g.num_edges());
            Ok((netio::export_network(&doc), summary))
        }
        Command::Route(args) => {
            let options = RunOptions {
                variant: args.variant,
                isolate_first: !args.no_isolate,
                final_lc: args.final_lc,
                protocol: args.protocol,
                seed: None,
            };
            let req = match (&args.bell, &args.ghz) {
                (Some(ab), _) => RunRequest::new(Task::Bell, ab.iter().copied(), options)?,
                (None, Some(ts)) => RunRequest::new(Task::Ghz, ts.iter().copied(), options)?,
                (None, None) => unreachable!("clap enforces the target group"),
            };
            let (_, g) = load_network(cli, io)?;
            let mut out = match req.task {
                Task::Bell => run_bell(&g, &req)?,
                _ => run_ghz(&g, &req)?,
            };
            if args.verify {
                verify(&g, &mut out)?;
            }
            if let Some(p) = &args.dot {
                write_dot(p, &out.report, &req.targets)?;
            }
            Ok((json(&out), out.summary()))
        }
        Command::Paths { a, b, rank } => {
            RunRequest::new(Task::Rank, [*a, *b], RunOptions::default())?;
            let (doc, _) = load_network(cli, io)?;
            let spec = doc.grid.ok_or_else(|| CliError::Input("paths needs a grid network".into()))?;
            let paths = enumerate_shortest_paths(&spec, VertexId(*a), VertexId(*b))?;
            if *rank {
                let ranking = rank_paths(&spec, &paths)?;
                let best = ranking.best();
                let summary = format!(
                    "{} shortest paths; best {} with vector {:?}, cost {}",
                    ranking.paths.len(),
                    best.path,
                    best.vector.entries,
                    best.x_protocol_cost
                );
                Ok((json(&ranking), summary))
            } else {
                let listing = paths
                    .into_iter()
                    .map(|p| Ok(PathListing { vector: path_vector(&spec, &p)?, path: p }))
                    .collect::<CliResult<Vec<_>>>()?;
                let summary = format!("{} shortest paths", listing.len());
                Ok((json(&listing), summary))
            }
        }
        Command::Cost { line, targets } => {
            let (_, g) = load_network(cli, io)?;
            let out = run_cost(&g, line, targets)?;
            let c = &out.costs;
            let summary = format!(
                "with isolation {} (formula {}), without {} (formula {})",
                c.with_isolation, c.with_isolation_formula, c.without_isolation, c.without_isolation_formula
            );
            if !out.formulas_agree {
                return Err(CliError::Domain(format!("cost formulas disagree with transcripts: {summary}")));
            }
            Ok((json(&out), summary))
        }
        Command::Oracle { seed, cases, max_vertices } => {
            let s = oracle::sweep(*seed, *cases, *max_vertices)?;
            let summary = format!(
                "oracle seed {seed}, {cases} graphs: worst infidelity LC {:.3e} Z {:.3e} Y {:.3e} X {:.3e}",
                1.0 - s.min_lc_fidelity,
                1.0 - s.min_z_fidelity,
                1.0 - s.min_y_fidelity,
                1.0 - s.min_x_fidelity
            );
            if !s.passes() {
                return Err(CliError::Domain(format!("oracle sweep failed: {}", json(&s))));
            }
            Ok((json(&s), summary))
        }
        Command::Script { file, dot } => {
            let plan = netio::parse_script(&read_file(file)?)?;
            let (_, g) = load_network(cli, io)?;
            let report = run_script(&g, &plan)?;
            if let Some(p) = dot {
                write_dot(p, &report, &[])?;
            }
            let summary = format!(
                "script: {} steps, {} measurements, final graph {} vertices {} edges",
                report.transcript.len(),
                report.measurement_count(),
                report.final_graph.num_vertices(),
                report.final_graph.num_edges()
            );
            Ok((netio::export_json(&report), summary))
        }
    }
}

/// Runs the CLI against explicit streams and returns the exit code.
pub fn run_with(argv: &[String], stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(stdout, "{text}") } else { write!(stderr, "{text}") };
            return code;
        }
    };
    let mut io = Io { stdin, stderr };
    match dispatch(&cli, &mut io) {
        Ok((mut machine, summary)) => {
            if !machine.ends_with('\n') {
                machine.push('\n');
            }
            let written = match &cli.out {
                Some(p) => write_file(p, &machine),
                None => stdout
                    .write_all(machine.as_bytes())
                    .map_err(|e| CliError::Io { path: "<stdout>".into(), message: e.to_string() }),
            };
            if let Err(e) = written {
                let _ = writeln!(io.stderr, "error: {e}");
                return e.exit_code();
            }
            let _ = writeln!(io.stderr, "{summary}");
            0
        }
        Err(e) => {
            let _ = writeln!(io.stderr, "error: {e}");
            e.exit_code()
        }
    }
}

/// Runs the CLI on the process streams.
pub fn run(argv: &[String]) -> i32 {
    let stdin = std::io::stdin();
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdin.lock(), &mut stdout.lock(), &mut stderr.lock())
}
