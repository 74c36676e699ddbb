//! Entanglement routing on graph-state networks.
//!
//! Bell pairs and GHZ states are extracted from a network's graph state using
//! only graph rewrites: local complementation, vertex deletion and the Pauli
//! measurement rules built from them. Grid paths are ranked by majorization
//! of their run-length vectors, and every rule can be cross-checked against
//! dense state vectors on small graphs.

pub mod cli;
pub mod graph;
pub mod grid;
pub mod netio;
pub mod oracle;
pub mod protocols;
