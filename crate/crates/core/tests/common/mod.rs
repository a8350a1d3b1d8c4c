//! Instance builders and independent reference computations shared by the
//! integration tests. Nothing here calls the solvers under test.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;
use stegnet::attack::TerminalSpec;
use stegnet::graph::GraphGenerator;
use stegnet::{parse_graph, Graph, VertexId, Weight};

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

pub fn fixture(name: &str) -> Graph {
    parse_graph(&std::fs::read_to_string(fixture_path(name)).unwrap()).unwrap()
}

pub fn id(s: &str) -> VertexId {
    VertexId::new(s).unwrap()
}

pub struct Picker(SplitMix64);

impl Picker {
    pub fn new(seed: u64) -> Self {
        Picker(SplitMix64::seed_from_u64(seed ^ 0x5eed_0f7e57))
    }

    /// Uniform-ish integer in `[lo, hi]`.
    pub fn range(&mut self, lo: usize, hi: usize) -> usize {
        lo + (self.0.next_u64() % (hi - lo + 1) as u64) as usize
    }

    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.range(0, i);
            items.swap(i, j);
        }
    }
}

pub fn integer_graph(n: usize, p: f64, max_weight: f64, seed: u64) -> Graph {
    GraphGenerator::new(n, p, (1.0, max_weight), seed)
        .integer_weights(true)
        .generate()
        .unwrap()
}

/// A random graph with disjoint random encoder and decoder sets of the given
/// sizes.
pub fn cut_instance(
    n: usize,
    p: f64,
    encoders: usize,
    decoders: usize,
    seed: u64,
) -> (Graph, TerminalSpec) {
    let g = integer_graph(n, p, 20.0, seed);
    let mut ids: Vec<VertexId> = g.vertex_ids().cloned().collect();
    Picker::new(seed).shuffle(&mut ids);
    let s = ids[..encoders].to_vec();
    let t = ids[encoders..encoders + decoders].to_vec();
    let spec = TerminalSpec::new(&g, s, t).unwrap();
    (g, spec)
}

/// Same graph with every vertex renamed by `rename`.
pub fn relabel(g: &Graph, rename: impl Fn(&VertexId) -> VertexId) -> Graph {
    let mut out = Graph::new();
    for (v, w) in g.vertices() {
        out.add_vertex(rename(v), w).unwrap();
    }
    for e in g.edges() {
        out.add_edge(rename(e.key.first()), rename(e.key.second()), e.weight)
            .unwrap();
    }
    out
}

pub fn is_connected(g: &Graph) -> bool {
    let mut ids = g.vertex_ids();
    let Some(first) = ids.next() else { return true };
    ids.all(|v| g.has_path(first, v).unwrap())
}

/// All-pairs shortest distances by Floyd–Warshall.
pub fn all_pairs(g: &Graph) -> BTreeMap<(VertexId, VertexId), Weight> {
    let ids: Vec<&VertexId> = g.vertex_ids().collect();
    let n = ids.len();
    let mut d = vec![vec![f64::INFINITY; n]; n];
    for i in 0..n {
        d[i][i] = 0.0;
        for j in 0..n {
            if let Some(w) = g.edge_weight(ids[i], ids[j]) {
                d[i][j] = w;
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    let mut out = BTreeMap::new();
    for i in 0..n {
        for j in 0..n {
            out.insert((ids[i].clone(), ids[j].clone()), d[i][j]);
        }
    }
    out
}

/// Minimum spanning tree weight by Prim's algorithm (quadratic scan), or
/// `None` when the graph is disconnected.
pub fn prim_weight(g: &Graph) -> Option<Weight> {
    let ids: Vec<&VertexId> = g.vertex_ids().collect();
    if ids.is_empty() {
        return Some(0.0);
    }
    let mut in_tree = vec![false; ids.len()];
    let mut best = vec![f64::INFINITY; ids.len()];
    best[0] = 0.0;
    let mut total = 0.0;
    for _ in 0..ids.len() {
        let u = (0..ids.len())
            .filter(|&i| !in_tree[i])
            .min_by(|&a, &b| best[a].total_cmp(&best[b]))?;
        if best[u].is_infinite() {
            return None;
        }
        in_tree[u] = true;
        total += best[u];
        for v in 0..ids.len() {
            if let Some(w) = g.edge_weight(ids[u], ids[v]) {
                if !in_tree[v] && w < best[v] {
                    best[v] = w;
                }
            }
        }
    }
    Some(total)
}

/// Every simple path from `s` to `t`, as vertex sequences.
pub fn simple_paths(g: &Graph, s: &VertexId, t: &VertexId) -> Vec<Vec<VertexId>> {
    fn walk(g: &Graph, t: &VertexId, path: &mut Vec<VertexId>, out: &mut Vec<Vec<VertexId>>) {
        let last = path.last().unwrap().clone();
        if &last == t {
            out.push(path.clone());
            return;
        }
        for u in g.neighbors(&last).unwrap() {
            if !path.contains(u) {
                path.push(u.clone());
                walk(g, t, path, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    walk(g, t, &mut vec![s.clone()], &mut out);
    out
}

/// Whether the listed edges put every terminal in one component.
pub fn edges_connect(edges: &BTreeSet<stegnet::EdgeKey>, terminals: &BTreeSet<VertexId>) -> bool {
    let Some(first) = terminals.iter().next() else {
        return true;
    };
    let mut reached: BTreeSet<&VertexId> = BTreeSet::from([first]);
    loop {
        let before = reached.len();
        for e in edges {
            if reached.contains(e.first()) || reached.contains(e.second()) {
                reached.insert(e.first());
                reached.insert(e.second());
            }
        }
        if reached.len() == before {
            break;
        }
    }
    terminals.iter().all(|t| reached.contains(t))
}

/// Small graphs for exhaustive checks: classic shapes plus seeded random ones.
pub fn small_graph_family() -> Vec<Graph> {
    let mut out = vec![
        Graph::new(),
        parse_graph("v a").unwrap(),
        parse_graph("v a\nv b").unwrap(),
        parse_graph("v a\nv b\ne a b 1").unwrap(),
        parse_graph("v a\nv b\nv c\ne a b 1\ne b c 1").unwrap(),
        parse_graph("v a\nv b\nv c\ne a b 1\ne b c 1\ne a c 1").unwrap(),
        parse_graph("v c\nv l1\nv l2\nv l3\nv l4\ne c l1 1\ne c l2 1\ne c l3 1\ne c l4 1").unwrap(),
        parse_graph("v a\nv b\nv c\nv d\nv e\ne a b 1\ne b c 1\ne c d 1\ne d e 1\ne e a 1")
            .unwrap(),
        parse_graph("v a\nv b\nv c\nv d\nv x\ne a b 1\ne c d 1").unwrap(),
    ];
    for (i, n) in (1..=7).cycle().take(16).enumerate() {
        let p = [0.2, 0.45, 0.7][i % 3];
        out.push(integer_graph(n, p, 5.0, 1000 + i as u64));
    }
    out.push(integer_graph(7, 1.0, 5.0, 42));
    out
}
