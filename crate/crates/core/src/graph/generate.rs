//! Seeded Erdős–Rényi instances.
//!
//! The stream is SplitMix64 seeded with the raw seed. Each uniform draw is
//! `(next_u64 >> 11) * 2^-53`. Vertices are `v0 .. v{n-1}`. Draw order:
//!
//! 1. if vertex weights are requested, one weight per vertex, `v0` first;
//! 2. for `i` in `0..n`, for `j` in `i+1..n`: draw `u`; the edge `(vi, vj)`
//!    exists iff `u < p`, and if it does its weight is drawn next.
//!
//! A continuous weight in `[lo, hi]` is `lo + (hi - lo) * u`. An integer
//! weight picks one of the `c` integers in `[ceil(lo), floor(hi)]` as
//! `ceil(lo) + min(floor(u * c), c - 1)`.

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

use super::{Graph, GraphError, VertexId, Weight, DEFAULT_VERTEX_WEIGHT};

#[derive(Debug, Clone, Copy, PartialEq)]
enum Sampler {
    Uniform { lo: f64, hi: f64 },
    Integer { lo: f64, count: f64 },
}

impl Sampler {
    fn new(range: (Weight, Weight), integer: bool) -> Result<Self, GraphError> {
        let (lo, hi) = range;
        if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && lo <= hi) {
            return Err(GraphError::InvalidParameters(format!(
                "weight range [{lo}, {hi}] must satisfy 0 < lo <= hi and be finite"
            )));
        }
        if !integer {
            return Ok(Sampler::Uniform { lo, hi });
        }
        let (first, last) = (lo.ceil(), hi.floor());
        if first > last {
            return Err(GraphError::InvalidParameters(format!(
                "weight range [{lo}, {hi}] contains no integer"
            )));
        }
        Ok(Sampler::Integer {
            lo: first,
            count: last - first + 1.0,
        })
    }

    fn sample(&self, rng: &mut SplitMix64) -> Weight {
        let u = unit(rng);
        match *self {
            Sampler::Uniform { lo, hi } => lo + (hi - lo) * u,
            Sampler::Integer { lo, count } => lo + (u * count).floor().min(count - 1.0),
        }
    }
}

fn unit(rng: &mut SplitMix64) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Configurable generator behind [`random_graph`].
#[derive(Debug, Clone, PartialEq)]
pub struct GraphGenerator {
    pub n: usize,
    pub edge_probability: f64,
    pub weight_range: (Weight, Weight),
    pub integer_weights: bool,
    /// When set, vertex weights are drawn from this range (integer-valued if
    /// `integer_weights`); otherwise every vertex weighs 1.
    pub vertex_weight_range: Option<(Weight, Weight)>,
    pub seed: u64,
}

impl GraphGenerator {
    pub fn new(n: usize, edge_probability: f64, weight_range: (Weight, Weight), seed: u64) -> Self {
        GraphGenerator {
            n,
            edge_probability,
            weight_range,
            integer_weights: false,
            vertex_weight_range: None,
            seed,
        }
    }

    pub fn integer_weights(mut self, yes: bool) -> Self {
        self.integer_weights = yes;
        self
    }

    pub fn vertex_weights(mut self, range: (Weight, Weight)) -> Self {
        self.vertex_weight_range = Some(range);
        self
    }

    pub fn generate(&self) -> Result<Graph, GraphError> {
        if self.n == 0 {
            return Err(GraphError::InvalidParameters("n must be at least 1".into()));
        }
        let p = self.edge_probability;
        if !(0.0..=1.0).contains(&p) {
            return Err(GraphError::InvalidParameters(format!(
                "edge probability {p} outside [0, 1]"
            )));
        }
        let edge_sampler = Sampler::new(self.weight_range, self.integer_weights)?;
        let vertex_sampler = self
            .vertex_weight_range
            .map(|r| Sampler::new(r, self.integer_weights))
            .transpose()?;

        let mut rng = SplitMix64::seed_from_u64(self.seed);
        let ids: Vec<VertexId> = (0..self.n)
            .map(|i| VertexId::new(format!("v{i}")).expect("generated ids are valid"))
            .collect();
        let mut g = Graph::new();
        for v in &ids {
            let w = vertex_sampler.map_or(DEFAULT_VERTEX_WEIGHT, |s| s.sample(&mut rng));
            g.add_vertex(v.clone(), w)?;
        }
        for i in 0..self.n {
            for j in i + 1..self.n {
                if unit(&mut rng) < p {
                    let w = edge_sampler.sample(&mut rng);
                    g.add_edge(ids[i].clone(), ids[j].clone(), w)?;
                }
            }
        }
        Ok(g)
    }
}

/// A seeded random graph on `n` vertices: each pair is joined with
/// probability `edge_probability` and weighted uniformly from `weight_range`.
pub fn random_graph(
    n: usize,
    edge_probability: f64,
    weight_range: (Weight, Weight),
    seed: u64,
) -> Result<Graph, GraphError> {
    GraphGenerator::new(n, edge_probability, weight_range, seed).generate()
}
