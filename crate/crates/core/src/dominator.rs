//! Encoder selection for neighbour-only broadcast.
//!
//! Every vertex either encodes (action 1) or decodes (action 0), and every
//! decoder needs at least one encoding neighbour. Minimising the total risk of
//! the encoders is the minimum-weight dominating set problem.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::graph::{Graph, Indexed, VertexId, Weight};
use crate::EPSILON;

/// Default largest graph accepted by [`mwds_exact`].
pub const EXACT_VERTEX_LIMIT: usize = 30;
/// Hard ceiling for the exact solver's bitset representation.
const MAX_EXACT_VERTICES: usize = 64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DominatorError {
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("exact search is limited to {limit} vertices but the graph has {vertices}; use the greedy method")]
    TooLarge { vertices: usize, limit: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Method {
    #[default]
    Exact,
    Greedy,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::Greedy => "greedy",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DominatingSet {
    pub members: BTreeSet<VertexId>,
    pub total_weight: Weight,
    pub method: Method,
}

fn check_members<'a>(
    g: &Graph,
    d: impl IntoIterator<Item = &'a VertexId>,
) -> Result<(), DominatorError> {
    for v in d {
        if !g.contains_vertex(v) {
            return Err(DominatorError::UnknownVertex(v.clone()));
        }
    }
    Ok(())
}

/// Whether every vertex outside `d` has a neighbour in `d`.
pub fn is_dominating(g: &Graph, d: &BTreeSet<VertexId>) -> Result<bool, DominatorError> {
    check_members(g, d)?;
    Ok(g.vertex_ids().all(|v| {
        d.contains(v)
            || g.neighbors(v)
                .expect("vertex of g")
                .into_iter()
                .any(|u| d.contains(u))
    }))
}

/// The 0/1 role assignment of every vertex: 1 encodes, 0 decodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionVector {
    actions: BTreeMap<VertexId, u8>,
}

impl ActionVector {
    pub fn get(&self, v: &VertexId) -> Option<u8> {
        self.actions.get(v).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&VertexId, u8)> + '_ {
        self.actions.iter().map(|(v, a)| (v, *a))
    }

    /// Vertices where `Σ_{u ∈ N(v)} g(u) ≥ 1 − g(v)` fails.
    pub fn coverage_violations(&self, g: &Graph) -> Vec<VertexId> {
        g.vertex_ids()
            .filter(|v| {
                let own = i64::from(self.get(v).unwrap_or(0));
                let heard: i64 = g
                    .neighbors(v)
                    .expect("vertex of g")
                    .into_iter()
                    .map(|u| i64::from(self.get(u).unwrap_or(0)))
                    .sum();
                heard < 1 - own
            })
            .cloned()
            .collect()
    }

    pub fn satisfies_coverage(&self, g: &Graph) -> bool {
        self.coverage_violations(g).is_empty()
    }
}

pub fn action_vector(g: &Graph, d: &BTreeSet<VertexId>) -> Result<ActionVector, DominatorError> {
    check_members(g, d)?;
    Ok(ActionVector {
        actions: g
            .vertex_ids()
            .map(|v| (v.clone(), u8::from(d.contains(v))))
            .collect(),
    })
}

fn finish(
    ix: &Indexed<'_>,
    chosen: impl IntoIterator<Item = usize>,
    method: Method,
) -> DominatingSet {
    let chosen: Vec<usize> = chosen.into_iter().collect();
    DominatingSet {
        total_weight: chosen.iter().map(|&v| ix.vertex_weights[v]).sum(),
        members: chosen.into_iter().map(|v| ix.ids[v].clone()).collect(),
        method,
    }
}

/// Greedy cover: repeatedly take the vertex with the lowest weight per newly
/// covered vertex (itself and its neighbours), lowest id on ties.
pub fn mwds_greedy(g: &Graph) -> DominatingSet {
    let ix = g.indexed();
    finish(&ix, greedy_indices(&ix), Method::Greedy)
}

fn greedy_indices(ix: &Indexed<'_>) -> Vec<usize> {
    let n = ix.len();
    let mut covered = vec![false; n];
    let mut remaining = n;
    let mut chosen = Vec::new();
    while remaining > 0 {
        let mut best: Option<(f64, usize)> = None;
        for v in 0..n {
            let fresh = usize::from(!covered[v])
                + ix.adjacency[v].iter().filter(|(u, _)| !covered[*u]).count();
            if fresh == 0 {
                continue;
            }
            let ratio = ix.vertex_weights[v] / fresh as f64;
            if best.is_none_or(|(r, _)| ratio < r) {
                best = Some((ratio, v));
            }
        }
        let (_, v) = best.expect("an uncovered vertex covers itself");
        chosen.push(v);
        for u in std::iter::once(v).chain(ix.adjacency[v].iter().map(|(u, _)| *u)) {
            if !covered[u] {
                covered[u] = true;
                remaining -= 1;
            }
        }
    }
    chosen.sort_unstable();
    chosen
}

/// A minimum-weight dominating set by branch and bound, for graphs of at
/// most [`EXACT_VERTEX_LIMIT`] vertices. Among optimal sets the
/// lexicographically smallest sorted member list is returned.
pub fn mwds_exact(g: &Graph) -> Result<DominatingSet, DominatorError> {
    mwds_exact_with_limit(g, EXACT_VERTEX_LIMIT)
}

pub fn mwds_exact_with_limit(g: &Graph, limit: usize) -> Result<DominatingSet, DominatorError> {
    let limit = limit.min(MAX_EXACT_VERTICES);
    if g.vertex_count() > limit {
        return Err(DominatorError::TooLarge {
            vertices: g.vertex_count(),
            limit,
        });
    }
    let ix = g.indexed();
    let mut search = Search::new(&ix);
    search.run(&greedy_indices(&ix));
    Ok(finish(&ix, bits(search.best_set), Method::Exact))
}

fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (mask != 0).then(|| {
            let v = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            v
        })
    })
}

/// Compares two vertex sets as ascending index sequences.
fn lex_cmp(a: u64, b: u64) -> Ordering {
    bits(a).cmp(bits(b))
}

struct Search<'a> {
    weights: &'a [Weight],
    closed: Vec<u64>,
    all: u64,
    best_weight: f64,
    best_set: u64,
}

impl<'a> Search<'a> {
    fn new(ix: &'a Indexed<'_>) -> Self {
        let closed: Vec<u64> = (0..ix.len())
            .map(|v| {
                ix.adjacency[v]
                    .iter()
                    .fold(1u64 << v, |m, (u, _)| m | 1u64 << u)
            })
            .collect();
        let all = if ix.len() == 64 {
            u64::MAX
        } else {
            (1u64 << ix.len()) - 1
        };
        Search {
            weights: &ix.vertex_weights,
            closed,
            all,
            best_weight: f64::INFINITY,
            best_set: 0,
        }
    }

    fn run(&mut self, incumbent: &[usize]) {
        // A known cover as the starting incumbent lets pruning start early.
        self.best_set = incumbent.iter().fold(0, |m, &v| m | 1 << v);
        self.best_weight = incumbent.iter().map(|&v| self.weights[v]).sum();
        self.branch(0, 0, 0, 0.0);
    }

    /// Each uncovered vertex must be paid for by some allowed candidate in its
    /// closed neighbourhood; charging it that candidate's weight divided by
    /// how many uncovered vertices the candidate covers never overestimates.
    fn lower_bound(&self, covered: u64, excluded: u64) -> f64 {
        let mut bound = 0.0;
        for v in bits(self.all & !covered) {
            let cheapest = bits(self.closed[v] & !excluded)
                .map(|c| self.weights[c] / f64::from((self.closed[c] & !covered).count_ones()))
                .fold(f64::INFINITY, f64::min);
            bound += cheapest;
        }
        bound
    }

    fn branch(&mut self, chosen: u64, covered: u64, excluded: u64, weight: f64) {
        if covered == self.all {
            let better = weight < self.best_weight - EPSILON
                || (weight <= self.best_weight + EPSILON
                    && lex_cmp(chosen, self.best_set) == Ordering::Less);
            if better {
                self.best_weight = weight;
                self.best_set = chosen;
            }
            return;
        }
        if weight + self.lower_bound(covered, excluded) > self.best_weight + EPSILON {
            return;
        }
        let first_uncovered = (self.all & !covered).trailing_zeros() as usize;
        let mut excluded = excluded;
        for c in bits(self.closed[first_uncovered] & !excluded) {
            self.branch(
                chosen | 1 << c,
                covered | self.closed[c],
                excluded,
                weight + self.weights[c],
            );
            // Later branches never take c, so each set is visited once.
            excluded |= 1 << c;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{id, parse_graph};

    const STAR: &str = "v c 5\nv l1\nv l2\nv l3\ne c l1 1\ne c l2 1\ne c l3 1\n";
    const TRIANGLE: &str = "v a 2\nv b 1\nv c 3\ne a b 1\ne b c 1\ne a c 1\n";

    fn set(ids: &[&str]) -> BTreeSet<VertexId> {
        ids.iter().map(|v| id(v)).collect()
    }

    #[test]
    fn domination_basics() {
        let g = parse_graph(STAR).unwrap();
        assert!(is_dominating(&g, &set(&["c", "l1", "l2", "l3"])).unwrap());
        assert!(!is_dominating(&g, &set(&[])).unwrap());
        assert!(is_dominating(&g, &set(&["c"])).unwrap());
        assert!(!is_dominating(&g, &set(&["l1"])).unwrap());
        assert_eq!(
            is_dominating(&g, &set(&["q"])),
            Err(DominatorError::UnknownVertex(id("q")))
        );
    }

    #[test]
    fn isolated_vertices_must_be_members() {
        let g = parse_graph("v a\nv b\nv x\ne a b 1").unwrap();
        assert!(!is_dominating(&g, &set(&["a"])).unwrap());
        assert!(is_dominating(&g, &set(&["a", "x"])).unwrap());
        assert!(mwds_exact(&g).unwrap().members.contains(&id("x")));
        assert!(mwds_greedy(&g).members.contains(&id("x")));
    }

    #[test]
    fn action_vectors() {
        let g = parse_graph(STAR).unwrap();
        let all = action_vector(&g, &set(&["c", "l1", "l2", "l3"])).unwrap();
        assert!(all.iter().all(|(_, a)| a == 1));
        assert!(all.satisfies_coverage(&g));

        let none = action_vector(&g, &set(&[])).unwrap();
        assert!(none.iter().all(|(_, a)| a == 0));
        assert_eq!(none.coverage_violations(&g).len(), 4);

        let center = action_vector(&g, &set(&["c"])).unwrap();
        assert_eq!(center.get(&id("c")), Some(1));
        assert_eq!(center.get(&id("l2")), Some(0));
        assert!(center.satisfies_coverage(&g));

        assert!(action_vector(&g, &set(&["zz"])).is_err());
    }

    #[test]
    fn exact_small_cases() {
        let g = parse_graph("v only 4").unwrap();
        let d = mwds_exact(&g).unwrap();
        assert_eq!(d.members, set(&["only"]));
        assert_eq!(d.total_weight, 4.0);

        let d = mwds_exact(&parse_graph(TRIANGLE).unwrap()).unwrap();
        assert_eq!(d.members, set(&["b"]));
        assert_eq!(d.total_weight, 1.0);

        let d = mwds_exact(&parse_graph(STAR).unwrap()).unwrap();
        assert_eq!(d.members, set(&["l1", "l2", "l3"]));
        assert_eq!(d.total_weight, 3.0);
        assert_eq!(d.method, Method::Exact);
    }

    #[test]
    fn exact_empty_graph() {
        let d = mwds_exact(&Graph::new()).unwrap();
        assert!(d.members.is_empty());
        assert_eq!(d.total_weight, 0.0);
    }

    #[test]
    fn exact_tie_break_is_lexicographic() {
        // Path a-b-c-d with unit weights: optima of weight 2 are {a,c}, {a,d},
        // {b,c}, {b,d}; the smallest is {a,c}.
        let g = parse_graph("v a\nv b\nv c\nv d\ne a b 1\ne b c 1\ne c d 1").unwrap();
        assert_eq!(mwds_exact(&g).unwrap().members, set(&["a", "c"]));
    }

    #[test]
    fn exact_size_limit() {
        let g = crate::graph::random_graph(31, 0.2, (1.0, 2.0), 1).unwrap();
        assert_eq!(
            mwds_exact(&g).unwrap_err(),
            DominatorError::TooLarge {
                vertices: 31,
                limit: 30
            }
        );
        assert!(mwds_exact_with_limit(&g, 40).is_ok());
    }

    #[test]
    fn greedy_traces() {
        let d = mwds_greedy(&parse_graph(TRIANGLE).unwrap());
        assert_eq!(d.members, set(&["b"]));
        assert_eq!(d.total_weight, 1.0);

        let d = mwds_greedy(&parse_graph(STAR).unwrap());
        assert_eq!(d.members, set(&["l1", "l2", "l3"]));
        assert_eq!(d.total_weight, 3.0);
        assert_eq!(d.method, Method::Greedy);
    }

    #[test]
    fn greedy_feasible_on_random_graphs() {
        for seed in 0..30 {
            let g = crate::graph::random_graph(40, 0.08, (1.0, 3.0), seed).unwrap();
            assert!(is_dominating(&g, &mwds_greedy(&g).members).unwrap());
        }
    }

    #[test]
    fn lex_order_of_masks() {
        assert_eq!(lex_cmp(0b101, 0b110), Ordering::Less);
        assert_eq!(lex_cmp(0b1, 0b11), Ordering::Less);
        assert_eq!(lex_cmp(0b10, 0b11), Ordering::Greater);
    }
}
