//! Minimum-cost edge removal separating suspected encoders from decoders.
//!
//! The monitor knows a set `S` of encoders and a set `T` of decoders and wants
//! the cheapest edge set whose removal leaves no `S`–`T` path. With additive
//! costs this is a minimum cut between the two sets, reduced to a single
//! source/sink pair in one of two ways:
//!
//! * [`augment_super`] adds a super-source joined to every encoder and a
//!   super-sink joined to every decoder with edges too expensive to cut;
//! * [`contract`] collapses `S` into one vertex and `T` into another, dropping
//!   edges inside either set and summing edges that become parallel.
//!
//! [`plan_cut`] solves either reduction and maps the cut back onto the
//! original edges.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::flow::{FlowError, FlowNetwork};
use crate::graph::{EdgeKey, Graph, GraphError, VertexId, Weight, DEFAULT_VERTEX_WEIGHT};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AttackError {
    #[error("the encoder set is empty")]
    NoEncoders,
    #[error("the decoder set is empty")]
    NoDecoders,
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("encoder and decoder sets must be disjoint (S ∩ T = ∅), both contain: {}", join(.0))]
    Overlap(Vec<VertexId>),
    #[error("edge {0} is not in the graph")]
    UnknownEdge(EdgeKey),
    #[error("total edge weight is too large to pick a finite blocking weight")]
    WeightOverflow,
    #[error("internal error: artificial edge {0} appeared in a minimum cut")]
    ArtificialEdgeInCut(EdgeKey),
    #[error("internal error: contracted edge {0} has no provenance")]
    UnmappedEdge(EdgeKey),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Flow(#[from] FlowError),
}

fn join(ids: &[VertexId]) -> String {
    ids.iter()
        .map(VertexId::as_str)
        .collect::<Vec<_>>()
        .join(", ")
}

/// Encoder set `S` and decoder set `T`, validated against a graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TerminalSpec {
    encoders: BTreeSet<VertexId>,
    decoders: BTreeSet<VertexId>,
}

impl TerminalSpec {
    pub fn new(
        g: &Graph,
        encoders: impl IntoIterator<Item = VertexId>,
        decoders: impl IntoIterator<Item = VertexId>,
    ) -> Result<Self, AttackError> {
        let encoders: BTreeSet<VertexId> = encoders.into_iter().collect();
        let decoders: BTreeSet<VertexId> = decoders.into_iter().collect();
        if encoders.is_empty() {
            return Err(AttackError::NoEncoders);
        }
        if decoders.is_empty() {
            return Err(AttackError::NoDecoders);
        }
        if let Some(v) = encoders
            .iter()
            .chain(&decoders)
            .find(|v| !g.contains_vertex(v))
        {
            return Err(AttackError::UnknownVertex(v.clone()));
        }
        let shared: Vec<VertexId> = encoders.intersection(&decoders).cloned().collect();
        if !shared.is_empty() {
            return Err(AttackError::Overlap(shared));
        }
        Ok(TerminalSpec { encoders, decoders })
    }

    pub fn encoders(&self) -> &BTreeSet<VertexId> {
        &self.encoders
    }

    pub fn decoders(&self) -> &BTreeSet<VertexId> {
        &self.decoders
    }

    fn check_against(&self, g: &Graph) -> Result<(), AttackError> {
        match self
            .encoders
            .iter()
            .chain(&self.decoders)
            .find(|v| !g.contains_vertex(v))
        {
            Some(v) => Err(AttackError::UnknownVertex(v.clone())),
            None => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Method {
    SuperTerminal,
    #[default]
    Contraction,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::SuperTerminal => "super-terminal",
            Method::Contraction => "contraction",
        }
    }

    pub fn other(self) -> Method {
        match self {
            Method::SuperTerminal => Method::Contraction,
            Method::Contraction => Method::SuperTerminal,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A fresh id starting with `base` that is not a vertex of `g`.
fn fresh_id(g: &Graph, base: &str) -> VertexId {
    let base = VertexId::new(base).expect("valid base id");
    if !g.contains_vertex(&base) {
        return base;
    }
    (1u64..)
        .map(|k| VertexId::new(format!("{base}_{k}")).expect("valid suffixed id"))
        .find(|v| !g.contains_vertex(v))
        .expect("finite graph")
}

#[derive(Debug, Clone, PartialEq)]
pub struct Augmented {
    pub graph: Graph,
    pub source: VertexId,
    pub sink: VertexId,
    /// Weight of every inserted edge.
    pub blocking_weight: Weight,
}

/// Adds a super-source joined to each encoder and a super-sink joined to each
/// decoder. The new edges weigh one more than all original edges together, so
/// no minimum cut ever uses them.
pub fn augment_super(g: &Graph, spec: &TerminalSpec) -> Result<Augmented, AttackError> {
    spec.check_against(g)?;
    let total = g.total_edge_weight();
    let blocking_weight = total + 1.0;
    if !(blocking_weight.is_finite() && blocking_weight > total) {
        return Err(AttackError::WeightOverflow);
    }
    let source = fresh_id(g, "v_s");
    let sink = fresh_id(g, "v_t");
    let mut graph = g.clone();
    graph.add_vertex(source.clone(), DEFAULT_VERTEX_WEIGHT)?;
    graph.add_vertex(sink.clone(), DEFAULT_VERTEX_WEIGHT)?;
    for s in &spec.encoders {
        graph.add_edge(source.clone(), s.clone(), blocking_weight)?;
    }
    for t in &spec.decoders {
        graph.add_edge(t.clone(), sink.clone(), blocking_weight)?;
    }
    Ok(Augmented {
        graph,
        source,
        sink,
        blocking_weight,
    })
}

/// Provenance of contracted edges: each maps to the original edges whose
/// weights were summed into it.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ContractionMap {
    entries: BTreeMap<EdgeKey, Vec<EdgeKey>>,
}

impl ContractionMap {
    pub fn originals(&self, contracted: &EdgeKey) -> Option<&[EdgeKey]> {
        self.entries.get(contracted).map(Vec::as_slice)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&EdgeKey, &[EdgeKey])> + '_ {
        self.entries.iter().map(|(k, v)| (k, v.as_slice()))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Contracted {
    pub graph: Graph,
    pub source: VertexId,
    pub sink: VertexId,
    pub map: ContractionMap,
}

/// Replaces `S` by one vertex and `T` by another.
///
/// Edges are processed in canonical order. Edges with both ends in `S`, or
/// both in `T`, are dropped. Every other edge is redirected (an `S` endpoint
/// becomes the source, a `T` endpoint the sink) and its weight added to the
/// redirected edge. Vertices outside `S ∪ T` appear only if some surviving
/// edge touches them; the source and sink are always present.
pub fn contract(g: &Graph, spec: &TerminalSpec) -> Result<Contracted, AttackError> {
    spec.check_against(g)?;
    let source = fresh_id(g, "v_s");
    let sink = fresh_id(g, "v_t");
    let image = |v: &VertexId| -> VertexId {
        if spec.encoders.contains(v) {
            source.clone()
        } else if spec.decoders.contains(v) {
            sink.clone()
        } else {
            v.clone()
        }
    };

    let mut merged: BTreeMap<EdgeKey, (Weight, Vec<EdgeKey>)> = BTreeMap::new();
    for e in g.edges() {
        let (a, b) = (image(e.key.first()), image(e.key.second()));
        if a == b {
            continue;
        }
        let slot = merged
            .entry(EdgeKey::new(a, b))
            .or_insert((0.0, Vec::new()));
        slot.0 += e.weight;
        slot.1.push(e.key);
    }

    let mut graph = Graph::new();
    graph.add_vertex(source.clone(), DEFAULT_VERTEX_WEIGHT)?;
    graph.add_vertex(sink.clone(), DEFAULT_VERTEX_WEIGHT)?;
    for key in merged.keys() {
        for v in [key.first(), key.second()] {
            if !graph.contains_vertex(v) {
                graph.add_vertex(
                    v.clone(),
                    g.vertex_weight(v).unwrap_or(DEFAULT_VERTEX_WEIGHT),
                )?;
            }
        }
    }
    let mut map = ContractionMap::default();
    for (key, (w, originals)) in merged {
        graph.add_edge(key.first().clone(), key.second().clone(), w)?;
        map.entries.insert(key, originals);
    }
    Ok(Contracted {
        graph,
        source,
        sink,
        map,
    })
}

/// Edges to remove and what removing them costs.
#[derive(Debug, Clone, PartialEq)]
pub struct CutPlan {
    pub removed_edges: BTreeSet<EdgeKey>,
    pub total_cost: Weight,
    pub method: Method,
}

/// The cheapest set of original edges whose removal disconnects every encoder
/// from every decoder.
pub fn plan_cut(g: &Graph, spec: &TerminalSpec, method: Method) -> Result<CutPlan, AttackError> {
    let mut removed_edges = BTreeSet::new();
    match method {
        Method::SuperTerminal => {
            let aug = augment_super(g, spec)?;
            let cut = FlowNetwork::from_graph(&aug.graph, &aug.source, &aug.sink)?.min_cut();
            for e in cut.cut_edges {
                if e.contains(&aug.source) || e.contains(&aug.sink) {
                    return Err(AttackError::ArtificialEdgeInCut(e));
                }
                removed_edges.insert(e);
            }
        }
        Method::Contraction => {
            let con = contract(g, spec)?;
            let cut = FlowNetwork::from_graph(&con.graph, &con.source, &con.sink)?.min_cut();
            for e in cut.cut_edges {
                let originals = con
                    .map
                    .originals(&e)
                    .ok_or_else(|| AttackError::UnmappedEdge(e.clone()))?;
                removed_edges.extend(originals.iter().cloned());
            }
        }
    }
    let total_cost = g.weight_of(&removed_edges)?;
    Ok(CutPlan {
        removed_edges,
        total_cost,
        method,
    })
}

/// Whether deleting `removed` leaves no path from any encoder to any decoder.
pub fn verify_disconnection(
    g: &Graph,
    spec: &TerminalSpec,
    removed: &BTreeSet<EdgeKey>,
) -> Result<bool, AttackError> {
    spec.check_against(g)?;
    if let Some(k) = removed.iter().find(|k| g.edge_key_weight(k).is_none()) {
        return Err(AttackError::UnknownEdge(k.clone()));
    }
    let mut seen: BTreeSet<&VertexId> = spec.encoders.iter().collect();
    let mut queue: VecDeque<&VertexId> = spec.encoders.iter().collect();
    while let Some(u) = queue.pop_front() {
        if spec.decoders.contains(u) {
            return Ok(false);
        }
        for (w, _) in g.weighted_neighbors(u) {
            if !removed.contains(&EdgeKey::new(u.clone(), w.clone())) && seen.insert(w) {
                queue.push_back(w);
            }
        }
    }
    Ok(true)
}
