//! Dense state-vector oracle for the graph rewrite rules.
//!
//! Everything here works on explicit amplitude vectors and is only meant for
//! small graphs (at most [`MAX_QUBITS`] vertices). Qubit `k` of a
//! [`PureState`] is bit `k` of the basis index and belongs to
//! `qubit_order[k]`; the order is ascending by label.
//!
//! Only the measurement branch that the graph rules describe exactly is
//! checked: outcome `|0>` for Z, `|+>` for X and `|+i>` for Y. Global phase
//! is removed by comparing fidelities, never phases.

use std::collections::BTreeSet;
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, GraphError, VertexId};
use crate::protocols::Directive;

pub const MAX_QUBITS: usize = 14;

/// Fidelity threshold the rewrite rules must meet.
pub const FIDELITY_TOLERANCE: f64 = 1e-10;
pub const NORM_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("{0} qubits exceeds the cap of {MAX_QUBITS}")]
    TooManyQubits(usize),

    #[error(transparent)]
    Graph(#[from] GraphError),

    #[error("qubit for vertex {0} is not present")]
    MissingQubit(VertexId),

    #[error("measurement branch has zero probability")]
    ZeroProbability,

    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type OracleResult<T> = Result<T, OracleError>;

type Gate = [[C64; 2]; 2];

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn hadamard() -> Gate {
    let h = c(FRAC_1_SQRT_2, 0.0);
    [[h, h], [h, -h]]
}

/// `exp(-i pi/4 X)`
pub fn sqrt_minus_ix() -> Gate {
    let a = c(FRAC_1_SQRT_2, 0.0);
    let b = c(0.0, -FRAC_1_SQRT_2);
    [[a, b], [b, a]]
}

/// `exp(+i pi/4 Z)`
pub fn sqrt_iz() -> Gate {
    [[C64::from_polar(1.0, FRAC_PI_4), c(0.0, 0.0)], [c(0.0, 0.0), C64::from_polar(1.0, -FRAC_PI_4)]]
}

/// `exp(-i pi/4 Z)`
pub fn sqrt_minus_iz() -> Gate {
    [[C64::from_polar(1.0, -FRAC_PI_4), c(0.0, 0.0)], [c(0.0, 0.0), C64::from_polar(1.0, FRAC_PI_4)]]
}

/// `exp(+i pi/4 Y)`
pub fn sqrt_iy() -> Gate {
    let a = c(FRAC_1_SQRT_2, 0.0);
    [[a, a], [-a, a]]
}

pub fn pauli_z() -> Gate {
    [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]]
}

#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    pub amplitudes: Vec<C64>,
    pub qubit_order: Vec<VertexId>,
}

impl PureState {
    pub fn num_qubits(&self) -> usize {
        self.qubit_order.len()
    }

    fn index_of(&self, v: VertexId) -> OracleResult<usize> {
        self.qubit_order.iter().position(|q| *q == v).ok_or(OracleError::MissingQubit(v))
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalize(&mut self) -> OracleResult<()> {
        let n = self.norm();
        if n < 1e-300 {
            return Err(OracleError::ZeroProbability);
        }
        for a in &mut self.amplitudes {
            *a /= n;
        }
        Ok(())
    }

    /// `<self|other>`; both states must share the qubit order.
    pub fn inner(&self, other: &PureState) -> OracleResult<C64> {
        if self.qubit_order != other.qubit_order {
            return Err(OracleError::Precondition(format!(
                "qubit orders differ: {:?} vs {:?}",
                self.qubit_order, other.qubit_order
            )));
        }
        Ok(self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum())
    }

    /// `|<self|other>|^2` for normalized states.
    pub fn fidelity(&self, other: &PureState) -> OracleResult<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    pub fn apply_gate(&mut self, v: VertexId, gate: &Gate) -> OracleResult<()> {
        let k = self.index_of(v)?;
        let bit = 1usize << k;
        for i in 0..self.amplitudes.len() {
            if i & bit == 0 {
                let (a0, a1) = (self.amplitudes[i], self.amplitudes[i | bit]);
                self.amplitudes[i] = gate[0][0] * a0 + gate[0][1] * a1;
                self.amplitudes[i | bit] = gate[1][0] * a0 + gate[1][1] * a1;
            }
        }
        Ok(())
    }

    /// Contracts qubit `v` with the single-qubit bra `<bra|` and removes it.
    /// Returns the branch probability; the remaining state is renormalized.
    pub fn project(&mut self, v: VertexId, bra: [C64; 2]) -> OracleResult<f64> {
        let k = self.index_of(v)?;
        let bit = 1usize << k;
        let low = bit - 1;
        let mut out = vec![C64::new(0.0, 0.0); self.amplitudes.len() / 2];
        for (j, slot) in out.iter_mut().enumerate() {
            let i0 = ((j & !low) << 1) | (j & low);
            *slot = bra[0].conj() * self.amplitudes[i0] + bra[1].conj() * self.amplitudes[i0 | bit];
        }
        self.amplitudes = out;
        self.qubit_order.remove(k);
        let p = self.norm().powi(2);
        self.normalize()?;
        Ok(p)
    }

    /// Projects `v` onto `|0>` and drops it.
    pub fn project_zero(&mut self, v: VertexId) -> OracleResult<f64> {
        self.project(v, [c(1.0, 0.0), c(0.0, 0.0)])
    }

    /// The local Clifford `exp(-i pi/4 X_v) prod_{w in N} exp(i pi/4 Z_w)`
    /// that realizes local complementation at `v`.
    pub fn apply_lc_unitary(&mut self, v: VertexId, neighbors: &BTreeSet<VertexId>) -> OracleResult<()> {
        self.apply_gate(v, &sqrt_minus_ix())?;
        for &w in neighbors {
            self.apply_gate(w, &sqrt_iz())?;
        }
        Ok(())
    }
}

/// `prod_{(i,j) in E} CZ_ij |+>^V`.
pub fn graph_state(g: &Graph) -> OracleResult<PureState> {
    let n = g.num_vertices();
    if n > MAX_QUBITS {
        return Err(OracleError::TooManyQubits(n));
    }
    let qubit_order: Vec<VertexId> = g.vertices().collect();
    let edges: Vec<(usize, usize)> = g
        .edges()
        .map(|(a, b)| {
            let ia = qubit_order.binary_search(&a).unwrap();
            let ib = qubit_order.binary_search(&b).unwrap();
            (ia, ib)
        })
        .collect();
    let scale = (0.5f64).powf(n as f64 / 2.0);
    let amplitudes = (0..1usize << n)
        .map(|b| {
            let parity = edges.iter().filter(|(i, j)| (b >> i) & 1 == 1 && (b >> j) & 1 == 1).count();
            c(if parity % 2 == 0 { scale } else { -scale }, 0.0)
        })
        .collect();
    Ok(PureState { amplitudes, qubit_order })
}

/// Fidelity between `U_v |G>` and `|LC_v(G)>`.
pub fn check_lc_identity(g: &Graph, v: VertexId) -> OracleResult<f64> {
    let mut psi = graph_state(g)?;
    psi.apply_lc_unitary(v, g.neighbors(v)?)?;
    graph_state(&g.local_complement(v)?)?.fidelity(&psi)
}

/// Fidelity between the `|0>` branch of measuring `Z_v` on `|G>` and
/// `|G - v>`.
pub fn check_z_deletion(g: &Graph, v: VertexId) -> OracleResult<f64> {
    let mut psi = graph_state(g)?;
    psi.project_zero(v)?;
    graph_state(&g.delete_vertex(v)?)?.fidelity(&psi)
}

/// Fidelity between the `|+i>` branch of measuring `Y_v` and the Y rule,
/// after the byproduct `prod_{b in N_v} exp(-i pi/4 Z_b)`.
pub fn check_y_measurement(g: &Graph, v: VertexId) -> OracleResult<f64> {
    let mut psi = graph_state(g)?;
    psi.project(v, [c(FRAC_1_SQRT_2, 0.0), c(0.0, FRAC_1_SQRT_2)])?;
    let mut expected = graph_state(&g.measure_y(v)?)?;
    for &b in g.neighbors(v)? {
        expected.apply_gate(b, &sqrt_minus_iz())?;
    }
    expected.fidelity(&psi)
}

/// Fidelity between the `|+>` branch of measuring `X_v` and the X rule with
/// special neighbor `w`, after the byproduct
/// `exp(i pi/4 Y_w) prod_{b in N_v \ N_w \ {w}} Z_b`.
pub fn check_x_measurement(g: &Graph, v: VertexId, w: VertexId) -> OracleResult<f64> {
    let mut psi = graph_state(g)?;
    psi.project(v, [c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0)])?;
    let (after, _) = g.measure_x(v, Some(w))?;
    let mut expected = graph_state(&after)?;
    let nv = g.neighbors(v)?;
    let nw = g.neighbors(w)?;
    for &b in nv.difference(nw) {
        if b != w {
            expected.apply_gate(b, &pauli_z())?;
        }
    }
    expected.apply_gate(w, &sqrt_iy())?;
    expected.fidelity(&psi)
}

/// Runs graph rewrites and the matching quantum operations side by side.
///
/// LC applies the local Clifford, Z projects onto `|0>`, Y is LC then Z, and
/// X is the composition `LC_w, LC_v, Z_v, LC_w`. After any sequence,
/// [`StateTracker::consistency`] compares the tracked state with the graph
/// state of the tracked graph.
#[derive(Clone, Debug)]
pub struct StateTracker {
    graph: Graph,
    state: PureState,
}

impl StateTracker {
    pub fn new(g: &Graph) -> OracleResult<Self> {
        Ok(StateTracker { graph: g.clone(), state: graph_state(g)? })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn state(&self) -> &PureState {
        &self.state
    }

    pub fn lc(&mut self, v: VertexId) -> OracleResult<()> {
        let ns = self.graph.neighborhood(v)?;
        self.state.apply_lc_unitary(v, &ns)?;
        self.graph.complement_at(v)?;
        Ok(())
    }

    pub fn z(&mut self, v: VertexId) -> OracleResult<()> {
        self.graph.neighbors(v)?;
        self.state.project_zero(v)?;
        self.graph.remove_vertex(v)?;
        Ok(())
    }

    pub fn y(&mut self, v: VertexId) -> OracleResult<()> {
        self.lc(v)?;
        self.z(v)
    }

    pub fn x(&mut self, v: VertexId, w: Option<VertexId>) -> OracleResult<()> {
        let ns = self.graph.neighbors(v)?;
        let w = match w {
            Some(w) if ns.contains(&w) => Some(w),
            Some(w) => return Err(GraphError::NotANeighbor { v, w }.into()),
            None => ns.iter().next().copied(),
        };
        if let Some(w) = w {
            self.lc(w)?;
            self.lc(v)?;
            self.z(v)?;
            self.lc(w)?;
        } else {
            self.z(v)?;
        }
        Ok(())
    }

    pub fn apply(&mut self, d: &Directive) -> OracleResult<()> {
        match *d {
            Directive::Lc { vertex } => self.lc(vertex),
            Directive::X { vertex, w } => self.x(vertex, w),
            Directive::Y { vertex } => self.y(vertex),
            Directive::Z { vertex } => self.z(vertex),
        }
    }

    /// Fidelity of the tracked state with the graph state of the tracked
    /// graph.
    pub fn consistency(&self) -> OracleResult<f64> {
        graph_state(&self.graph)?.fidelity(&self.state)
    }
}

/// Replays directives from `g` at the state level.
pub fn replay(g: &Graph, plan: &[Directive]) -> OracleResult<StateTracker> {
    let mut t = StateTracker::new(g)?;
    for d in plan {
        t.apply(d)?;
    }
    Ok(t)
}

/// GHZ shape a target set takes in a graph.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum GhzShape {
    Complete,
    Star { center: VertexId },
}

/// Checks that `targets` are a whole component forming a complete graph or
/// a star, and says which.
pub fn ghz_shape(g: &Graph, targets: &[VertexId]) -> OracleResult<GhzShape> {
    let set: BTreeSet<VertexId> = targets.iter().copied().collect();
    if set.len() != targets.len() || set.len() < 2 {
        return Err(OracleError::Precondition("need at least two distinct targets".into()));
    }
    if !g.is_isolated_set(&set)? {
        return Err(OracleError::Precondition("targets are not an isolated component".into()));
    }
    if set.len() == 2 {
        return if g.has_edge(targets[0], targets[1]) {
            Ok(GhzShape::Star { center: targets[0] })
        } else {
            Err(OracleError::Precondition("targets are not adjacent".into()))
        };
    }
    if g.is_complete_on(&set)? {
        return Ok(GhzShape::Complete);
    }
    for &t in targets {
        if g.is_star_on(&set, t)? {
            return Ok(GhzShape::Star { center: t });
        }
    }
    Err(OracleError::Precondition("targets form neither a complete graph nor a star".into()))
}

/// GHZ fidelity of the reduced state of `targets`, after mapping the given
/// shape to GHZ form: LC at the first target if complete, then Hadamard on
/// every leaf.
pub fn ghz_fidelity_of_state(psi: &PureState, targets: &[VertexId], shape: GhzShape) -> OracleResult<f64> {
    if targets.len() > MAX_QUBITS {
        return Err(OracleError::TooManyQubits(targets.len()));
    }
    let mut psi = psi.clone();
    let center = match shape {
        GhzShape::Complete => {
            let others: BTreeSet<VertexId> = targets[1..].iter().copied().collect();
            psi.apply_lc_unitary(targets[0], &others)?;
            targets[0]
        }
        GhzShape::Star { center } => center,
    };
    for &t in targets {
        if t != center {
            psi.apply_gate(t, &hadamard())?;
        }
    }
    let mask_all: usize = targets.iter().map(|&t| psi.index_of(t).map(|k| 1usize << k)).sum::<OracleResult<usize>>()?;
    // sum over configurations of the other qubits of |<GHZ|psi_r>|^2
    let mut fid = 0.0;
    for r in 0..psi.amplitudes.len() {
        if r & mask_all != 0 {
            continue;
        }
        let amp = (psi.amplitudes[r] + psi.amplitudes[r | mask_all]) * FRAC_1_SQRT_2;
        fid += amp.norm_sqr();
    }
    Ok(fid)
}

/// GHZ fidelity of the graph state of `g` on `targets`.
pub fn ghz_fidelity(g: &Graph, targets: &[VertexId]) -> OracleResult<f64> {
    let shape = ghz_shape(g, targets)?;
    ghz_fidelity_of_state(&graph_state(g)?, targets, shape)
}

/// Result of replaying a protocol transcript at the state level.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EndToEnd {
    pub qubits: usize,
    /// Tracked state vs. graph state of the tracked final graph.
    pub consistency: f64,
    pub ghz_fidelity: f64,
}

impl EndToEnd {
    pub fn passes(&self) -> bool {
        self.consistency >= 1.0 - FIDELITY_TOLERANCE && (self.ghz_fidelity - 1.0).abs() <= FIDELITY_TOLERANCE
    }
}

/// Replays `plan` on `|G>` and measures the GHZ fidelity of `targets`.
pub fn end_to_end(g: &Graph, plan: &[Directive], targets: &[VertexId]) -> OracleResult<EndToEnd> {
    let t = replay(g, plan)?;
    let shape = ghz_shape(t.graph(), targets)?;
    Ok(EndToEnd {
        qubits: g.num_vertices(),
        consistency: t.consistency()?,
        ghz_fidelity: ghz_fidelity_of_state(t.state(), targets, shape)?,
    })
}

/// Erdős–Rényi graph on labels `1..=n`.
pub fn random_graph<R: Rng>(rng: &mut R, n: u32, p: f64) -> Graph {
    let mut g = Graph::with_vertices(1..=n).expect("fresh labels");
    for a in 1..=n {
        for b in a + 1..=n {
            if rng.gen_bool(p) {
                g.add_edge(VertexId(a), VertexId(b)).expect("live vertices");
            }
        }
    }
    g
}

/// Worst-case numbers from a randomized sweep over the rewrite rules.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub seed: u64,
    pub cases: usize,
    pub max_norm_error: f64,
    pub min_lc_fidelity: f64,
    pub min_z_fidelity: f64,
    pub min_y_fidelity: f64,
    pub min_x_fidelity: f64,
    pub min_x_composition_fidelity: f64,
}

impl SweepSummary {
    pub fn passes(&self) -> bool {
        let ok = 1.0 - FIDELITY_TOLERANCE;
        self.max_norm_error <= NORM_TOLERANCE
            && self.min_lc_fidelity >= ok
            && self.min_z_fidelity >= ok
            && self.min_y_fidelity >= ok
            && self.min_x_fidelity >= ok
            && self.min_x_composition_fidelity >= ok
    }
}

/// Random graphs with 1 to `max_vertices` vertices; every rule is checked at
/// one random vertex per graph.
pub fn sweep(seed: u64, cases: usize, max_vertices: u32) -> OracleResult<SweepSummary> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s = SweepSummary {
        seed,
        cases,
        max_norm_error: 0.0,
        min_lc_fidelity: 1.0,
        min_z_fidelity: 1.0,
        min_y_fidelity: 1.0,
        min_x_fidelity: 1.0,
        min_x_composition_fidelity: 1.0,
    };
    for _ in 0..cases {
        let n = rng.gen_range(1..=max_vertices);
        let p = rng.gen_range(0.2..0.8);
        let g = random_graph(&mut rng, n, p);
        let v = VertexId(rng.gen_range(1..=n));
        s.max_norm_error = s.max_norm_error.max((graph_state(&g)?.norm() - 1.0).abs());
        s.min_lc_fidelity = s.min_lc_fidelity.min(check_lc_identity(&g, v)?);
        s.min_z_fidelity = s.min_z_fidelity.min(check_z_deletion(&g, v)?);
        s.min_y_fidelity = s.min_y_fidelity.min(check_y_measurement(&g, v)?);
        let ns: Vec<VertexId> = g.neighbors(v)?.iter().copied().collect();
        if !ns.is_empty() {
            let w = ns[rng.gen_range(0..ns.len())];
            s.min_x_fidelity = s.min_x_fidelity.min(check_x_measurement(&g, v, w)?);
            let t = replay(&g, &[Directive::X { vertex: v, w: Some(w) }])?;
            s.max_norm_error = s.max_norm_error.max((t.state().norm() - 1.0).abs());
            s.min_x_composition_fidelity = s.min_x_composition_fidelity.min(t.consistency()?);
        }
    }
    Ok(s)
}
