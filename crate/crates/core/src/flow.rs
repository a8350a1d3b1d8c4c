//! Maximum flow and minimum cut on the directed view of an undirected graph.
//!
//! Each undirected edge `(u, v, w)` becomes two independent arcs `u -> v` and
//! `v -> u`, both of capacity `w`. In the residual graph an arc `a` offers
//! `capacity(a) - flow(a)` forwards and `flow(a)` backwards; the two arcs of
//! one edge are treated independently.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::graph::{EdgeKey, Graph, VertexId, Weight};
use crate::EPSILON;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FlowError {
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("source and sink are both {0}")]
    SourceIsSink(VertexId),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Algorithm {
    /// Shortest augmenting paths (Edmonds–Karp).
    AugmentingPath,
    /// Level graphs with blocking flows (Dinic).
    #[default]
    BlockingFlow,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::AugmentingPath => "augmenting-path",
            Algorithm::BlockingFlow => "blocking-flow",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone)]
struct RawArc {
    tail: usize,
    head: usize,
    capacity: Weight,
    flow: f64,
}

#[derive(Debug, Clone, Copy)]
struct Link {
    to: usize,
    arc: usize,
    forward: bool,
}

/// Read-only view of one arc.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowArc<'a> {
    pub tail: &'a VertexId,
    pub head: &'a VertexId,
    pub capacity: Weight,
    pub flow: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowResult {
    pub value: f64,
    /// Flow on every arc, keyed by `(tail, head)`.
    pub flows: BTreeMap<(VertexId, VertexId), f64>,
    pub algorithm: Algorithm,
}

/// A source/sink cut of the original undirected graph.
#[derive(Debug, Clone, PartialEq)]
pub struct CutResult {
    pub source_side: BTreeSet<VertexId>,
    pub cut_edges: BTreeSet<EdgeKey>,
    pub weight: Weight,
    pub flow_value: f64,
}

#[derive(Debug, Clone)]
pub struct FlowNetwork {
    ids: Vec<VertexId>,
    index: HashMap<VertexId, usize>,
    arcs: Vec<RawArc>,
    edges: Vec<(usize, usize, Weight)>,
    residual: Vec<Vec<Link>>,
    source: usize,
    sink: usize,
}

impl FlowNetwork {
    pub fn from_graph(g: &Graph, source: &VertexId, sink: &VertexId) -> Result<Self, FlowError> {
        for v in [source, sink] {
            if !g.contains_vertex(v) {
                return Err(FlowError::UnknownVertex(v.clone()));
            }
        }
        if source == sink {
            return Err(FlowError::SourceIsSink(source.clone()));
        }
        let ix = g.indexed();
        let ids: Vec<VertexId> = ix.ids.iter().map(|v| (*v).clone()).collect();
        let index: HashMap<VertexId, usize> = ids
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), i))
            .collect();
        let mut arcs = Vec::with_capacity(2 * ix.edges.len());
        let mut residual = vec![Vec::new(); ids.len()];
        for &(a, b, w) in &ix.edges {
            for (tail, head) in [(a, b), (b, a)] {
                let arc = arcs.len();
                arcs.push(RawArc {
                    tail,
                    head,
                    capacity: w,
                    flow: 0.0,
                });
                residual[tail].push(Link {
                    to: head,
                    arc,
                    forward: true,
                });
                residual[head].push(Link {
                    to: tail,
                    arc,
                    forward: false,
                });
            }
        }
        for links in &mut residual {
            links.sort_by_key(|l| (l.to, !l.forward, l.arc));
        }
        Ok(FlowNetwork {
            source: index[source],
            sink: index[sink],
            ids,
            index,
            arcs,
            edges: ix.edges,
            residual,
        })
    }

    pub fn source(&self) -> &VertexId {
        &self.ids[self.source]
    }

    pub fn sink(&self) -> &VertexId {
        &self.ids[self.sink]
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.ids
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn arcs(&self) -> impl Iterator<Item = FlowArc<'_>> + '_ {
        self.arcs.iter().map(|a| self.view(a))
    }

    pub fn arc(&self, tail: &VertexId, head: &VertexId) -> Option<FlowArc<'_>> {
        let (t, h) = (*self.index.get(tail)?, *self.index.get(head)?);
        self.residual[t]
            .iter()
            .find(|l| l.forward && l.to == h)
            .map(|l| self.view(&self.arcs[l.arc]))
    }

    fn view<'a>(&'a self, a: &RawArc) -> FlowArc<'a> {
        FlowArc {
            tail: &self.ids[a.tail],
            head: &self.ids[a.head],
            capacity: a.capacity,
            flow: a.flow,
        }
    }

    pub fn reset_flows(&mut self) {
        for a in &mut self.arcs {
            a.flow = 0.0;
        }
    }

    fn residual_capacity(&self, link: &Link) -> f64 {
        let a = &self.arcs[link.arc];
        if link.forward {
            a.capacity - a.flow
        } else {
            a.flow
        }
    }

    fn push(&mut self, link: Link, amount: f64) {
        let a = &mut self.arcs[link.arc];
        if link.forward {
            a.flow = (a.flow + amount).min(a.capacity);
        } else {
            a.flow = (a.flow - amount).max(0.0);
        }
    }

    /// Net flow leaving the source.
    pub fn flow_value(&self) -> f64 {
        self.arcs
            .iter()
            .map(|a| {
                if a.tail == self.source {
                    a.flow
                } else if a.head == self.source {
                    -a.flow
                } else {
                    0.0
                }
            })
            .sum()
    }

    /// Net flow entering the sink.
    pub fn sink_inflow(&self) -> f64 {
        self.arcs
            .iter()
            .map(|a| {
                if a.head == self.sink {
                    a.flow
                } else if a.tail == self.sink {
                    -a.flow
                } else {
                    0.0
                }
            })
            .sum()
    }

    /// Largest amount by which any arc's flow leaves `[0, capacity]`.
    pub fn capacity_violation(&self) -> f64 {
        self.arcs
            .iter()
            .map(|a| (a.flow - a.capacity).max(-a.flow).max(0.0))
            .fold(0.0, f64::max)
    }

    /// Largest inflow/outflow imbalance over vertices other than source and sink.
    pub fn conservation_violation(&self) -> f64 {
        let mut balance = vec![0.0; self.ids.len()];
        for a in &self.arcs {
            balance[a.tail] -= a.flow;
            balance[a.head] += a.flow;
        }
        balance
            .iter()
            .enumerate()
            .filter(|(v, _)| *v != self.source && *v != self.sink)
            .map(|(_, b)| b.abs())
            .fold(0.0, f64::max)
    }

    /// Computes a maximum flow from scratch, leaving it recorded on the arcs.
    pub fn max_flow(&mut self, algorithm: Algorithm) -> FlowResult {
        self.reset_flows();
        match algorithm {
            Algorithm::AugmentingPath => self.edmonds_karp(),
            Algorithm::BlockingFlow => self.dinic(),
        }
        FlowResult {
            value: self.flow_value(),
            flows: self
                .arcs
                .iter()
                .map(|a| ((self.ids[a.tail].clone(), self.ids[a.head].clone()), a.flow))
                .collect(),
            algorithm,
        }
    }

    fn edmonds_karp(&mut self) {
        let n = self.ids.len();
        loop {
            // parent[v] = (vertex the link belongs to, link index)
            let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
            let mut seen = vec![false; n];
            seen[self.source] = true;
            let mut queue = VecDeque::from([self.source]);
            'bfs: while let Some(u) = queue.pop_front() {
                for (i, link) in self.residual[u].iter().enumerate() {
                    if !seen[link.to] && self.residual_capacity(link) > EPSILON {
                        seen[link.to] = true;
                        parent[link.to] = Some((u, i));
                        if link.to == self.sink {
                            break 'bfs;
                        }
                        queue.push_back(link.to);
                    }
                }
            }
            if !seen[self.sink] {
                return;
            }
            let mut path = Vec::new();
            let mut v = self.sink;
            while let Some((u, i)) = parent[v] {
                path.push(self.residual[u][i]);
                v = u;
            }
            let bottleneck = path
                .iter()
                .map(|l| self.residual_capacity(l))
                .fold(f64::INFINITY, f64::min);
            for link in path {
                self.push(link, bottleneck);
            }
        }
    }

    fn dinic(&mut self) {
        let n = self.ids.len();
        let mut level = vec![usize::MAX; n];
        let mut cursor = vec![0usize; n];
        while self.build_levels(&mut level) {
            cursor.iter_mut().for_each(|c| *c = 0);
            loop {
                let pushed = self.blocking_dfs(self.source, f64::INFINITY, &level, &mut cursor);
                if pushed <= EPSILON {
                    break;
                }
            }
        }
    }

    fn build_levels(&self, level: &mut [usize]) -> bool {
        level.iter_mut().for_each(|l| *l = usize::MAX);
        level[self.source] = 0;
        let mut queue = VecDeque::from([self.source]);
        while let Some(u) = queue.pop_front() {
            for link in &self.residual[u] {
                if level[link.to] == usize::MAX && self.residual_capacity(link) > EPSILON {
                    level[link.to] = level[u] + 1;
                    queue.push_back(link.to);
                }
            }
        }
        level[self.sink] != usize::MAX
    }

    fn blocking_dfs(&mut self, u: usize, limit: f64, level: &[usize], cursor: &mut [usize]) -> f64 {
        if u == self.sink {
            return limit;
        }
        while cursor[u] < self.residual[u].len() {
            let link = self.residual[u][cursor[u]];
            let room = self.residual_capacity(&link);
            if room > EPSILON && level[link.to] == level[u] + 1 {
                let pushed = self.blocking_dfs(link.to, limit.min(room), level, cursor);
                if pushed > EPSILON {
                    self.push(link, pushed);
                    return pushed;
                }
            }
            cursor[u] += 1;
        }
        0.0
    }

    fn reachable_mask(&self) -> Vec<bool> {
        let mut seen = vec![false; self.ids.len()];
        seen[self.source] = true;
        // (vertex, next link to examine): children are entered in link order,
        // which is ascending neighbour id.
        let mut stack = vec![(self.source, 0usize)];
        while let Some((u, next)) = stack.last_mut() {
            let u = *u;
            let Some(link) = self.residual[u].get(*next) else {
                stack.pop();
                continue;
            };
            *next += 1;
            if !seen[link.to] && self.residual_capacity(link) > EPSILON {
                seen[link.to] = true;
                stack.push((link.to, 0));
            }
        }
        seen
    }

    /// Vertices reachable from the source through arcs with residual
    /// capacity above [`EPSILON`], under the flow currently on the arcs.
    pub fn residual_reachable(&self) -> BTreeSet<VertexId> {
        self.reachable_mask()
            .into_iter()
            .zip(&self.ids)
            .filter(|(r, _)| *r)
            .map(|(_, id)| id.clone())
            .collect()
    }

    /// The minimum cut found by the default algorithm.
    pub fn min_cut(&mut self) -> CutResult {
        self.min_cut_with(Algorithm::default())
    }

    /// Runs `algorithm` to a maximum flow and returns the cut whose source
    /// side is exactly the residual-reachable set. That is the minimum cut
    /// with the smallest source side.
    pub fn min_cut_with(&mut self, algorithm: Algorithm) -> CutResult {
        let flow = self.max_flow(algorithm);
        let side = self.reachable_mask();
        let mut cut_edges = BTreeSet::new();
        let mut weight = 0.0;
        for &(a, b, w) in &self.edges {
            if side[a] != side[b] {
                cut_edges.insert(EdgeKey::new(self.ids[a].clone(), self.ids[b].clone()));
                weight += w;
            }
        }
        CutResult {
            source_side: side
                .iter()
                .zip(&self.ids)
                .filter(|(r, _)| **r)
                .map(|(_, id)| id.clone())
                .collect(),
            cut_edges,
            weight,
            flow_value: flow.value,
        }
    }
}
