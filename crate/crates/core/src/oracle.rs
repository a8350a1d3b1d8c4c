//! Exhaustive reference solvers.
//!
//! Each oracle enumerates the definition of its problem directly and returns
//! only the optimal weight. They share no code with the solvers they check.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::attack::TerminalSpec;
use crate::graph::{Graph, VertexId, Weight};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleBudget {
    pub max_vertices: usize,
    pub max_edges: usize,
}

impl OracleBudget {
    pub const MIN_CUT: OracleBudget = OracleBudget {
        max_vertices: 12,
        max_edges: usize::MAX,
    };
    pub const MWDS: OracleBudget = OracleBudget {
        max_vertices: 16,
        max_edges: usize::MAX,
    };
    pub const STEINER: OracleBudget = OracleBudget {
        max_vertices: 9,
        max_edges: 14,
    };

    pub fn admits(&self, g: &Graph) -> bool {
        g.vertex_count() <= self.max_vertices && g.edge_count() <= self.max_edges
    }

    fn check(&self, g: &Graph) -> Result<(), OracleError> {
        if self.admits(g) {
            Ok(())
        } else {
            Err(OracleError::BudgetExceeded {
                vertices: g.vertex_count(),
                edges: g.edge_count(),
                budget: *self,
            })
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error(
        "instance with {vertices} vertices and {edges} edges exceeds the oracle budget {budget:?}"
    )]
    BudgetExceeded {
        vertices: usize,
        edges: usize,
        budget: OracleBudget,
    },
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("no edge subset connects the terminals")]
    Unreachable,
}

fn position(ids: &[&VertexId], v: &VertexId) -> Result<usize, OracleError> {
    ids.iter()
        .position(|x| *x == v)
        .ok_or_else(|| OracleError::UnknownVertex(v.clone()))
}

/// Cheapest crossing weight over every bipartition with all encoders on one
/// side and all decoders on the other.
pub fn oracle_min_cut(g: &Graph, spec: &TerminalSpec) -> Result<Weight, OracleError> {
    OracleBudget::MIN_CUT.check(g)?;
    let ids: Vec<&VertexId> = g.vertex_ids().collect();
    let edges: Vec<(usize, usize, Weight)> = g
        .edges()
        .map(|e| {
            Ok((
                position(&ids, e.key.first())?,
                position(&ids, e.key.second())?,
                e.weight,
            ))
        })
        .collect::<Result<_, OracleError>>()?;
    // None = free vertex, Some(true) = encoder side.
    let mut fixed: Vec<Option<bool>> = vec![None; ids.len()];
    for s in spec.encoders() {
        fixed[position(&ids, s)?] = Some(true);
    }
    for t in spec.decoders() {
        fixed[position(&ids, t)?] = Some(false);
    }
    let free: Vec<usize> = (0..ids.len()).filter(|&i| fixed[i].is_none()).collect();

    let mut best = f64::INFINITY;
    for mask in 0u64..(1u64 << free.len()) {
        let mut side: Vec<bool> = fixed.iter().map(|f| f.unwrap_or(false)).collect();
        for (bit, &v) in free.iter().enumerate() {
            side[v] = mask >> bit & 1 == 1;
        }
        let crossing: Weight = edges
            .iter()
            .filter(|(a, b, _)| side[*a] != side[*b])
            .map(|(_, _, w)| w)
            .sum();
        best = best.min(crossing);
    }
    Ok(best)
}

/// Lightest vertex subset in which every vertex is a member or adjacent to one.
pub fn oracle_mwds(g: &Graph) -> Result<Weight, OracleError> {
    OracleBudget::MWDS.check(g)?;
    let ids: Vec<&VertexId> = g.vertex_ids().collect();
    let weights: Vec<Weight> = g.vertices().map(|(_, w)| w).collect();
    let neighbours: Vec<Vec<usize>> = ids
        .iter()
        .map(|v| {
            g.neighbors(v)
                .expect("own vertex")
                .into_iter()
                .map(|u| position(&ids, u))
                .collect::<Result<_, _>>()
        })
        .collect::<Result<_, _>>()?;

    let mut best = f64::INFINITY;
    for mask in 0u64..(1u64 << ids.len()) {
        let member = |v: usize| mask >> v & 1 == 1;
        let dominated =
            (0..ids.len()).all(|v| member(v) || neighbours[v].iter().any(|&u| member(u)));
        if dominated {
            let w: Weight = (0..ids.len())
                .filter(|&v| member(v))
                .map(|v| weights[v])
                .sum();
            best = best.min(w);
        }
    }
    Ok(best)
}

/// Lightest edge subset whose subgraph puts every terminal in one component.
pub fn oracle_steiner(g: &Graph, terminals: &BTreeSet<VertexId>) -> Result<Weight, OracleError> {
    OracleBudget::STEINER.check(g)?;
    let ids: Vec<&VertexId> = g.vertex_ids().collect();
    let term: Vec<usize> = terminals
        .iter()
        .map(|t| position(&ids, t))
        .collect::<Result<_, _>>()?;
    let edges: Vec<(usize, usize, Weight)> = g
        .edges()
        .map(|e| {
            Ok((
                position(&ids, e.key.first())?,
                position(&ids, e.key.second())?,
                e.weight,
            ))
        })
        .collect::<Result<_, OracleError>>()?;
    if term.len() <= 1 {
        return Ok(0.0);
    }

    let mut best = f64::INFINITY;
    for mask in 0u64..(1u64 << edges.len()) {
        let chosen: Vec<&(usize, usize, Weight)> = edges
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, e)| e)
            .collect();
        // Flood fill from the first terminal over the chosen edges.
        let mut reached = vec![false; ids.len()];
        reached[term[0]] = true;
        let mut grew = true;
        while grew {
            grew = false;
            for &&(a, b, _) in &chosen {
                if reached[a] != reached[b] {
                    reached[a] = true;
                    reached[b] = true;
                    grew = true;
                }
            }
        }
        if term.iter().all(|&t| reached[t]) {
            best = best.min(chosen.iter().map(|e| e.2).sum());
        }
    }
    if best.is_infinite() {
        Err(OracleError::Unreachable)
    } else {
        Ok(best)
    }
}
