//! Low-risk channel selection for encoders that must reach their decoders.
//!
//! With additive edge risk, connecting a terminal set as cheaply as possible is
//! the Steiner tree problem. Two terminals reduce it to a shortest path and all
//! vertices as terminals to a minimum spanning tree; otherwise the classical
//! metric-closure construction gives a tree within twice the optimum.

use std::cmp::{Ordering, Reverse};
use std::collections::{BTreeMap, BTreeSet, BinaryHeap};
use std::fmt;

use thiserror::Error;

use crate::graph::{EdgeKey, Graph, GraphError, Indexed, VertexId, Weight};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CommsError {
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("no path between {0} and {1}")]
    NoPath(VertexId, VertexId),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("terminal set is empty")]
    NoTerminals,
    #[error("edge {0} has probability {1}; probabilities must lie in (0, 1]")]
    InvalidProbability(EdgeKey, f64),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    ShortestPath,
    Mst,
    MetricClosure,
    /// Union of per-sender plans, from [`comms_plan`] with several senders.
    SenderUnion,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::ShortestPath => "shortest-path",
            Variant::Mst => "mst",
            Variant::MetricClosure => "metric-closure-2approx",
            Variant::SenderUnion => "sender-union",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SteinerPlan {
    pub edges: BTreeSet<EdgeKey>,
    pub total_weight: Weight,
    pub terminals: BTreeSet<VertexId>,
    pub variant: Variant,
}

impl SteinerPlan {
    fn new(
        g: &Graph,
        edges: BTreeSet<EdgeKey>,
        terminals: BTreeSet<VertexId>,
        variant: Variant,
    ) -> Self {
        let total_weight = g.weight_of(&edges).expect("plan edges come from the graph");
        SteinerPlan {
            edges,
            total_weight,
            terminals,
            variant,
        }
    }
}

/// Translates success probabilities into additive risks `-ln p`.
///
/// A path's risk sum is then `-ln` of its success product, so lower total
/// risk means higher probability of delivery.
pub fn prob_to_additive(pg: &Graph) -> Result<Graph, CommsError> {
    let mut out = Graph::new();
    for (v, w) in pg.vertices() {
        out.add_vertex(v.clone(), w)?;
    }
    for e in pg.edges() {
        let p = e.weight;
        if !(p > 0.0 && p <= 1.0) {
            return Err(CommsError::InvalidProbability(e.key, p));
        }
        // -ln(1) is -0.0; normalise so it prints as 0.
        let risk = -p.ln() + 0.0;
        out.add_edge_nonnegative(e.key.first().clone(), e.key.second().clone(), risk)?;
    }
    Ok(out)
}

fn lookup(ix: &Indexed<'_>, v: &VertexId) -> Result<usize, CommsError> {
    ix.index
        .get(v)
        .copied()
        .ok_or_else(|| CommsError::UnknownVertex(v.clone()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Dist(f64);

impl Eq for Dist {}

impl PartialOrd for Dist {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dist {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// Single-source shortest path tree. Equal-distance ties settle the lower
/// index first and prefer the lower-index predecessor.
struct PathTree {
    dist: Vec<f64>,
    parent: Vec<Option<usize>>,
}

impl PathTree {
    fn build(ix: &Indexed<'_>, source: usize) -> Self {
        let n = ix.len();
        let mut dist = vec![f64::INFINITY; n];
        let mut parent: Vec<Option<usize>> = vec![None; n];
        let mut done = vec![false; n];
        dist[source] = 0.0;
        let mut heap = BinaryHeap::from([Reverse((Dist(0.0), source))]);
        while let Some(Reverse((Dist(d), u))) = heap.pop() {
            if done[u] {
                continue;
            }
            done[u] = true;
            for &(v, w) in &ix.adjacency[u] {
                if done[v] {
                    continue;
                }
                let nd = d + w;
                let improves = nd < dist[v] || (nd == dist[v] && parent[v].is_some_and(|p| u < p));
                if improves {
                    dist[v] = nd;
                    parent[v] = Some(u);
                    heap.push(Reverse((Dist(nd), v)));
                }
            }
        }
        PathTree { dist, parent }
    }

    fn path_edges(&self, ix: &Indexed<'_>, target: usize) -> Vec<EdgeKey> {
        let mut out = Vec::new();
        let mut v = target;
        while let Some(p) = self.parent[v] {
            out.push(ix.key(p, v));
            v = p;
        }
        out
    }
}

/// Minimum-risk path between two vertices.
pub fn shortest_path_plan(
    g: &Graph,
    s: &VertexId,
    t: &VertexId,
) -> Result<SteinerPlan, CommsError> {
    let ix = g.indexed();
    let (si, ti) = (lookup(&ix, s)?, lookup(&ix, t)?);
    let terminals = BTreeSet::from([s.clone(), t.clone()]);
    if si == ti {
        return Ok(SteinerPlan::new(
            g,
            BTreeSet::new(),
            terminals,
            Variant::ShortestPath,
        ));
    }
    let tree = PathTree::build(&ix, si);
    if tree.dist[ti].is_infinite() {
        return Err(CommsError::NoPath(s.clone(), t.clone()));
    }
    let edges = tree.path_edges(&ix, ti).into_iter().collect();
    Ok(SteinerPlan::new(g, edges, terminals, Variant::ShortestPath))
}

struct DisjointSets {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (a, b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        match self.rank[a].cmp(&self.rank[b]) {
            Ordering::Less => self.parent[a] = b,
            Ordering::Greater => self.parent[b] = a,
            Ordering::Equal => {
                self.parent[b] = a;
                self.rank[a] += 1;
            }
        }
        true
    }
}

/// Kruskal over `(weight, a, b)` triples, sorted by weight then endpoints.
/// Returns the accepted triples.
fn kruskal(n: usize, mut edges: Vec<(f64, usize, usize)>) -> Vec<(f64, usize, usize)> {
    edges.sort_by(|x, y| x.0.total_cmp(&y.0).then((x.1, x.2).cmp(&(y.1, y.2))));
    let mut sets = DisjointSets::new(n);
    edges
        .into_iter()
        .filter(|&(_, a, b)| sets.union(a, b))
        .collect()
}

/// Minimum spanning tree of a connected graph.
pub fn mst_plan(g: &Graph) -> Result<SteinerPlan, CommsError> {
    let ix = g.indexed();
    let tree = kruskal(
        ix.len(),
        ix.edges.iter().map(|&(a, b, w)| (w, a, b)).collect(),
    );
    if ix.len() > 0 && tree.len() != ix.len() - 1 {
        return Err(CommsError::Disconnected);
    }
    let edges = tree.into_iter().map(|(_, a, b)| ix.key(a, b)).collect();
    Ok(SteinerPlan::new(
        g,
        edges,
        g.vertex_ids().cloned().collect(),
        Variant::Mst,
    ))
}

/// Connects `terminals` with low total weight.
///
/// One terminal needs no edges, two use [`shortest_path_plan`] and the full
/// vertex set uses [`mst_plan`]. Otherwise the plan is built from the metric
/// closure: shortest-path distances between terminals, a spanning tree over
/// those distances, each tree edge expanded into its path, a spanning tree
/// of the expanded edges, and finally non-terminal leaves pruned. The result
/// weighs at most twice the optimum.
pub fn steiner_plan(g: &Graph, terminals: &BTreeSet<VertexId>) -> Result<SteinerPlan, CommsError> {
    let ix = g.indexed();
    let term: Vec<usize> = terminals
        .iter()
        .map(|t| lookup(&ix, t))
        .collect::<Result<_, _>>()?;
    match term.len() {
        0 => return Err(CommsError::NoTerminals),
        1 => {
            return Ok(SteinerPlan::new(
                g,
                BTreeSet::new(),
                terminals.clone(),
                Variant::ShortestPath,
            ))
        }
        2 => {
            let mut it = terminals.iter();
            let (s, t) = (it.next().expect("two"), it.next().expect("two"));
            return shortest_path_plan(g, s, t);
        }
        k if k == ix.len() => {
            return mst_plan(g).map_err(|_| unreachable_pair(&ix, &term));
        }
        _ => {}
    }

    let trees: Vec<PathTree> = term.iter().map(|&t| PathTree::build(&ix, t)).collect();
    let mut closure = Vec::new();
    for i in 0..term.len() {
        for j in i + 1..term.len() {
            let d = trees[i].dist[term[j]];
            if d.is_infinite() {
                return Err(CommsError::NoPath(
                    ix.ids[term[i]].clone(),
                    ix.ids[term[j]].clone(),
                ));
            }
            closure.push((d, i, j));
        }
    }
    let mut expanded: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    for (_, i, j) in kruskal(term.len(), closure) {
        let mut v = term[j];
        while let Some(p) = trees[i].parent[v] {
            let w = ix.adjacency[p]
                .iter()
                .find(|(u, _)| *u == v)
                .expect("tree edge")
                .1;
            expanded.insert((p.min(v), p.max(v)), w);
            v = p;
        }
    }
    let tree = kruskal(
        ix.len(),
        expanded.into_iter().map(|((a, b), w)| (w, a, b)).collect(),
    );
    let edges = prune_leaves(
        ix.len(),
        tree.into_iter().map(|(_, a, b)| (a, b)).collect(),
        &term,
    );
    let edges = edges.into_iter().map(|(a, b)| ix.key(a, b)).collect();
    Ok(SteinerPlan::new(
        g,
        edges,
        terminals.clone(),
        Variant::MetricClosure,
    ))
}

fn unreachable_pair(ix: &Indexed<'_>, term: &[usize]) -> CommsError {
    let tree = PathTree::build(ix, term[0]);
    let far = term
        .iter()
        .find(|&&t| tree.dist[t].is_infinite())
        .copied()
        .unwrap_or(term[0]);
    CommsError::NoPath(ix.ids[term[0]].clone(), ix.ids[far].clone())
}

/// Repeatedly removes edges hanging off non-terminal degree-one vertices.
fn prune_leaves(
    n: usize,
    mut edges: Vec<(usize, usize)>,
    terminals: &[usize],
) -> Vec<(usize, usize)> {
    let mut is_terminal = vec![false; n];
    terminals.iter().for_each(|&t| is_terminal[t] = true);
    loop {
        let mut degree = vec![0usize; n];
        for &(a, b) in &edges {
            degree[a] += 1;
            degree[b] += 1;
        }
        let before = edges.len();
        edges.retain(|&(a, b)| {
            !((degree[a] == 1 && !is_terminal[a]) || (degree[b] == 1 && !is_terminal[b]))
        });
        if edges.len() == before {
            return edges;
        }
    }
}

/// Channels letting every sender reach each of its decoders: the union of one
/// [`steiner_plan`] per sender over `{sender} ∪ decoders`. Feasible but not
/// necessarily optimal for the group as a whole.
pub fn comms_plan(
    g: &Graph,
    decoder_map: &BTreeMap<VertexId, BTreeSet<VertexId>>,
) -> Result<SteinerPlan, CommsError> {
    if decoder_map.values().all(BTreeSet::is_empty) {
        return Err(CommsError::NoTerminals);
    }
    let mut plans = Vec::new();
    for (sender, decoders) in decoder_map {
        let mut terminals = decoders.clone();
        terminals.insert(sender.clone());
        plans.push(steiner_plan(g, &terminals)?);
    }
    if plans.len() == 1 {
        return Ok(plans.pop().expect("one plan"));
    }
    let edges = plans.iter().flat_map(|p| p.edges.iter().cloned()).collect();
    let terminals = plans.into_iter().flat_map(|p| p.terminals).collect();
    Ok(SteinerPlan::new(g, edges, terminals, Variant::SenderUnion))
}
