//! Analysis of weighted steganographer networks.
//!
//! A steganographer network is an undirected graph whose vertices are parties
//! that may encode or decode hidden messages and whose edges are channels they
//! can use. This crate answers three questions about such a network:
//!
//! * [`attack`]: which edges should a monitor remove, at minimum total cost, so
//!   that no suspected encoder can reach a suspected decoder? Solved as a
//!   minimum cut ([`flow`]) after either a super-terminal or a contraction
//!   reduction.
//! * [`dominator`]: which vertices should encode so that every other vertex
//!   hears a message from a neighbour, at minimum total risk? This is the
//!   minimum-weight dominating set problem.
//! * [`comms`]: which channels should a group of encoders use to reach their
//!   decoders at minimum additive risk? Shortest paths, spanning trees and a
//!   metric-closure Steiner approximation.
//!
//! [`oracle`] holds exhaustive reference solvers used by the test suite and by
//! the `--check` flags of the command-line tool ([`cli`]).

pub mod attack;
pub mod cli;
pub mod comms;
pub mod dominator;
pub mod flow;
pub mod graph;
pub mod oracle;

pub use graph::{
    parse_graph, serialize_graph, Edge, EdgeKey, Graph, GraphError, ParseError, VertexId, Weight,
};

/// Absolute tolerance used for saturation, residual and tie comparisons.
pub const EPSILON: f64 = 1e-9;
