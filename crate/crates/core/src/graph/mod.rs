//! The undirected, vertex- and edge-weighted network model.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use thiserror::Error;

mod generate;
mod sgn;

pub use generate::{random_graph, GraphGenerator};
pub use sgn::{parse_graph, serialize_graph, ParseError, ParseErrorKind};

/// Edge and vertex weights: finite, non-negative, unitless cost or risk.
pub type Weight = f64;

/// Default weight given to a vertex declared without one.
pub const DEFAULT_VERTEX_WEIGHT: Weight = 1.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GraphError {
    #[error("invalid vertex id {0:?}: ids are non-empty and use only [A-Za-z0-9_]")]
    InvalidId(String),
    #[error("duplicate vertex {0}")]
    DuplicateVertex(VertexId),
    #[error("duplicate edge {0}")]
    DuplicateEdge(EdgeKey),
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("self-loop at vertex {0}")]
    SelfLoop(VertexId),
    #[error("weight {0} must be finite and positive")]
    InvalidWeight(Weight),
    #[error("edge {0} is not in the graph")]
    UnknownEdge(EdgeKey),
    #[error("invalid generator parameters: {0}")]
    InvalidParameters(String),
}

/// A vertex name. Ordering is byte-lexicographic, which is the tie-breaking
/// order used by every solver in the crate.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(String);

impl VertexId {
    pub fn new(id: impl Into<String>) -> Result<Self, GraphError> {
        let id = id.into();
        if Self::is_valid(&id) {
            Ok(VertexId(id))
        } else {
            Err(GraphError::InvalidId(id))
        }
    }

    pub fn is_valid(id: &str) -> bool {
        !id.is_empty() && id.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_')
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::str::FromStr for VertexId {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        VertexId::new(s)
    }
}

/// An unordered vertex pair, stored with the smaller id first.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeKey {
    lo: VertexId,
    hi: VertexId,
}

impl EdgeKey {
    pub fn new(a: VertexId, b: VertexId) -> Self {
        if a <= b {
            EdgeKey { lo: a, hi: b }
        } else {
            EdgeKey { lo: b, hi: a }
        }
    }

    pub fn first(&self) -> &VertexId {
        &self.lo
    }

    pub fn second(&self) -> &VertexId {
        &self.hi
    }

    pub fn contains(&self, v: &VertexId) -> bool {
        &self.lo == v || &self.hi == v
    }
}

impl fmt::Display for EdgeKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.lo, self.hi)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub key: EdgeKey,
    pub weight: Weight,
}

/// An undirected simple graph with weighted vertices and edges.
///
/// Every edge endpoint is a vertex of the graph, there is at most one edge per
/// unordered pair and there are no self-loops. Edges added through
/// [`Graph::add_edge`] must have a positive weight.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Graph {
    vertices: BTreeMap<VertexId, Weight>,
    adjacency: BTreeMap<VertexId, BTreeMap<VertexId, Weight>>,
    edge_count: usize,
}

fn check_positive(w: Weight) -> Result<Weight, GraphError> {
    if w.is_finite() && w > 0.0 {
        Ok(w)
    } else {
        Err(GraphError::InvalidWeight(w))
    }
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, id: VertexId, weight: Weight) -> Result<(), GraphError> {
        check_positive(weight)?;
        if self.vertices.contains_key(&id) {
            return Err(GraphError::DuplicateVertex(id));
        }
        self.adjacency.insert(id.clone(), BTreeMap::new());
        self.vertices.insert(id, weight);
        Ok(())
    }

    pub fn add_edge(&mut self, a: VertexId, b: VertexId, weight: Weight) -> Result<(), GraphError> {
        check_positive(weight)?;
        self.insert_edge(a, b, weight)
    }

    /// Inserts an edge whose weight may be zero. Used by weight translations
    /// that legitimately map to zero cost.
    pub(crate) fn add_edge_nonnegative(
        &mut self,
        a: VertexId,
        b: VertexId,
        weight: Weight,
    ) -> Result<(), GraphError> {
        if !(weight.is_finite() && weight >= 0.0) {
            return Err(GraphError::InvalidWeight(weight));
        }
        self.insert_edge(a, b, weight)
    }

    fn insert_edge(&mut self, a: VertexId, b: VertexId, weight: Weight) -> Result<(), GraphError> {
        if a == b {
            return Err(GraphError::SelfLoop(a));
        }
        for v in [&a, &b] {
            if !self.vertices.contains_key(v) {
                return Err(GraphError::UnknownVertex(v.clone()));
            }
        }
        if self.adjacency[&a].contains_key(&b) {
            return Err(GraphError::DuplicateEdge(EdgeKey::new(a, b)));
        }
        self.adjacency
            .get_mut(&a)
            .expect("checked")
            .insert(b.clone(), weight);
        self.adjacency
            .get_mut(&b)
            .expect("checked")
            .insert(a, weight);
        self.edge_count += 1;
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains_vertex(&self, v: &VertexId) -> bool {
        self.vertices.contains_key(v)
    }

    pub fn vertex_weight(&self, v: &VertexId) -> Option<Weight> {
        self.vertices.get(v).copied()
    }

    pub fn edge_weight(&self, a: &VertexId, b: &VertexId) -> Option<Weight> {
        self.adjacency.get(a)?.get(b).copied()
    }

    pub fn edge_key_weight(&self, key: &EdgeKey) -> Option<Weight> {
        self.edge_weight(key.first(), key.second())
    }

    /// Vertices with their weights, in lexicographic id order.
    pub fn vertices(&self) -> impl Iterator<Item = (&VertexId, Weight)> + '_ {
        self.vertices.iter().map(|(id, w)| (id, *w))
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = &VertexId> + '_ {
        self.vertices.keys()
    }

    /// Edges in canonical order: by smaller endpoint, then larger endpoint.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.adjacency.iter().flat_map(|(a, nbrs)| {
            nbrs.range((std::ops::Bound::Excluded(a), std::ops::Bound::Unbounded))
                .map(move |(b, w)| Edge {
                    key: EdgeKey {
                        lo: a.clone(),
                        hi: b.clone(),
                    },
                    weight: *w,
                })
        })
    }

    /// `N(v)`: every vertex sharing an edge with `v`. Never contains `v`.
    pub fn neighbors(&self, v: &VertexId) -> Result<BTreeSet<&VertexId>, GraphError> {
        self.adjacency
            .get(v)
            .map(|nbrs| nbrs.keys().collect())
            .ok_or_else(|| GraphError::UnknownVertex(v.clone()))
    }

    pub(crate) fn weighted_neighbors(
        &self,
        v: &VertexId,
    ) -> impl Iterator<Item = (&VertexId, Weight)> + '_ {
        self.adjacency
            .get(v)
            .into_iter()
            .flat_map(|m| m.iter().map(|(u, w)| (u, *w)))
    }

    pub fn degree(&self, v: &VertexId) -> Option<usize> {
        self.adjacency.get(v).map(BTreeMap::len)
    }

    /// Breadth-first reachability, visiting neighbours in lexicographic order.
    /// A vertex always reaches itself.
    pub fn has_path(&self, from: &VertexId, to: &VertexId) -> Result<bool, GraphError> {
        for v in [from, to] {
            if !self.contains_vertex(v) {
                return Err(GraphError::UnknownVertex(v.clone()));
            }
        }
        if from == to {
            return Ok(true);
        }
        let mut seen: BTreeSet<&VertexId> = BTreeSet::from([from]);
        let mut queue = VecDeque::from([from]);
        while let Some(u) = queue.pop_front() {
            for w in self.adjacency[u].keys() {
                if w == to {
                    return Ok(true);
                }
                if seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
        Ok(false)
    }

    /// Sum of all edge weights, accumulated in canonical edge order.
    pub fn total_edge_weight(&self) -> Weight {
        self.edges().map(|e| e.weight).sum()
    }

    /// Sum of the weights of `edges`, each of which must be in the graph.
    pub fn weight_of<'a>(
        &self,
        edges: impl IntoIterator<Item = &'a EdgeKey>,
    ) -> Result<Weight, GraphError> {
        edges.into_iter().try_fold(0.0, |acc, key| {
            self.edge_key_weight(key)
                .map(|w| acc + w)
                .ok_or_else(|| GraphError::UnknownEdge(key.clone()))
        })
    }

    /// A copy of the graph without the listed edges.
    pub fn without_edges(&self, removed: &BTreeSet<EdgeKey>) -> Result<Graph, GraphError> {
        if let Some(missing) = removed.iter().find(|k| self.edge_key_weight(k).is_none()) {
            return Err(GraphError::UnknownEdge(missing.clone()));
        }
        let mut out = Graph::new();
        for (id, w) in self.vertices() {
            out.vertices.insert(id.clone(), w);
            out.adjacency.insert(id.clone(), BTreeMap::new());
        }
        for e in self.edges().filter(|e| !removed.contains(&e.key)) {
            out.insert_edge(e.key.lo, e.key.hi, e.weight)?;
        }
        Ok(out)
    }

    pub(crate) fn indexed(&self) -> Indexed<'_> {
        Indexed::new(self)
    }
}

/// Dense, index-addressed view of a graph. Index order equals lexicographic
/// id order, so comparing indices breaks ties lexicographically.
pub(crate) struct Indexed<'g> {
    pub ids: Vec<&'g VertexId>,
    pub index: HashMap<&'g VertexId, usize>,
    pub vertex_weights: Vec<Weight>,
    /// Neighbour lists sorted by neighbour index.
    pub adjacency: Vec<Vec<(usize, Weight)>>,
    /// Canonical edge list with `a < b`.
    pub edges: Vec<(usize, usize, Weight)>,
}

impl<'g> Indexed<'g> {
    fn new(g: &'g Graph) -> Self {
        let ids: Vec<&VertexId> = g.vertices.keys().collect();
        let index: HashMap<&VertexId, usize> =
            ids.iter().enumerate().map(|(i, v)| (*v, i)).collect();
        let vertex_weights = g.vertices.values().copied().collect();
        let adjacency: Vec<Vec<(usize, Weight)>> = ids
            .iter()
            .map(|v| {
                g.adjacency[*v]
                    .iter()
                    .map(|(u, w)| (index[u], *w))
                    .collect()
            })
            .collect();
        let edges = adjacency
            .iter()
            .enumerate()
            .flat_map(|(a, nbrs)| {
                nbrs.iter()
                    .filter(move |(b, _)| *b > a)
                    .map(move |&(b, w)| (a, b, w))
            })
            .collect();
        Indexed {
            ids,
            index,
            vertex_weights,
            adjacency,
            edges,
        }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn key(&self, a: usize, b: usize) -> EdgeKey {
        EdgeKey::new(self.ids[a].clone(), self.ids[b].clone())
    }
}

#[cfg(test)]
pub(crate) fn id(s: &str) -> VertexId {
    VertexId::new(s).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn star() -> Graph {
        parse_graph("v c\nv l1\nv l2\nv l3\ne c l1 1\ne c l2 1\ne c l3 1\n").unwrap()
    }

    #[test]
    fn vertex_id_charset() {
        assert!(VertexId::new("v_1").is_ok());
        assert!(VertexId::new("").is_err());
        assert!(VertexId::new("a-b").is_err());
        assert!(VertexId::new("é").is_err());
    }

    #[test]
    fn edge_key_is_unordered() {
        assert_eq!(
            EdgeKey::new(id("b"), id("a")),
            EdgeKey::new(id("a"), id("b"))
        );
        assert_eq!(EdgeKey::new(id("b"), id("a")).first(), &id("a"));
    }

    #[test]
    fn neighbors_of_star_center_and_leaf() {
        let g = star();
        let n: Vec<_> = g
            .neighbors(&id("c"))
            .unwrap()
            .into_iter()
            .cloned()
            .collect();
        assert_eq!(n, vec![id("l1"), id("l2"), id("l3")]);
        let n: Vec<_> = g
            .neighbors(&id("l2"))
            .unwrap()
            .into_iter()
            .cloned()
            .collect();
        assert_eq!(n, vec![id("c")]);
    }

    #[test]
    fn neighbors_of_isolated_and_triangle() {
        let g = parse_graph("v x\nv a\nv b\nv c\ne a b 1\ne b c 1\ne a c 1").unwrap();
        assert!(g.neighbors(&id("x")).unwrap().is_empty());
        let n: Vec<_> = g
            .neighbors(&id("a"))
            .unwrap()
            .into_iter()
            .cloned()
            .collect();
        assert_eq!(n, vec![id("b"), id("c")]);
        assert_eq!(
            g.neighbors(&id("zz")),
            Err(GraphError::UnknownVertex(id("zz")))
        );
    }

    #[test]
    fn has_path_cases() {
        let g = parse_graph("v a\nv b\nv c\nv d\ne a b 1\ne b c 1").unwrap();
        assert!(g.has_path(&id("a"), &id("c")).unwrap());
        assert!(!g.has_path(&id("a"), &id("d")).unwrap());
        assert!(g.has_path(&id("d"), &id("d")).unwrap());
        assert!(g.has_path(&id("a"), &id("q")).is_err());
    }

    #[test]
    fn total_weight_matches_two_removal_costs() {
        let g = parse_graph("v a\nv b\nv c\nv d\ne a b 13\ne b c 17\ne c d 31").unwrap();
        assert_eq!(g.total_edge_weight(), 61.0);
        let g = parse_graph("v a\nv b\ne a b 27").unwrap();
        assert_eq!(g.total_edge_weight(), 27.0);
        assert_eq!(Graph::new().total_edge_weight(), 0.0);
    }

    #[test]
    fn rejects_bad_edges() {
        let mut g = Graph::new();
        g.add_vertex(id("a"), 1.0).unwrap();
        g.add_vertex(id("b"), 1.0).unwrap();
        assert_eq!(
            g.add_edge(id("a"), id("a"), 1.0),
            Err(GraphError::SelfLoop(id("a")))
        );
        assert!(matches!(
            g.add_edge(id("a"), id("b"), 0.0),
            Err(GraphError::InvalidWeight(_))
        ));
        assert!(matches!(
            g.add_edge(id("a"), id("b"), f64::NAN),
            Err(GraphError::InvalidWeight(_))
        ));
        g.add_edge(id("a"), id("b"), 1.0).unwrap();
        assert!(matches!(
            g.add_edge(id("b"), id("a"), 2.0),
            Err(GraphError::DuplicateEdge(_))
        ));
        assert_eq!(
            g.add_edge(id("a"), id("c"), 1.0),
            Err(GraphError::UnknownVertex(id("c")))
        );
    }

    #[test]
    fn without_edges_rejects_unknown() {
        let g = star();
        let bogus = BTreeSet::from([EdgeKey::new(id("l1"), id("l2"))]);
        assert!(matches!(
            g.without_edges(&bogus),
            Err(GraphError::UnknownEdge(_))
        ));
        let cut = BTreeSet::from([EdgeKey::new(id("c"), id("l1"))]);
        let h = g.without_edges(&cut).unwrap();
        assert_eq!(h.edge_count(), 2);
        assert_eq!(h.vertex_count(), 4);
    }

    #[test]
    fn indexed_order_is_lexicographic() {
        let g = parse_graph("v b\nv a\nv c\ne c a 2\ne b a 1").unwrap();
        let ix = g.indexed();
        assert_eq!(ix.ids, vec![&id("a"), &id("b"), &id("c")]);
        assert_eq!(ix.edges, vec![(0, 1, 1.0), (0, 2, 2.0)]);
    }
}
