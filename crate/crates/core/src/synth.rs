//! Random graph generators for tests and benchmarks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{AttributedGraph, VertexId};
use crate::quasiclique::Gamma;

/// G(n, p) edge list, each pair (u < v) included independently.
pub fn erdos_renyi<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Vec<(VertexId, VertexId)> {
    let mut edges = Vec::new();
    for u in 0..n as VertexId {
        for v in u + 1..n as VertexId {
            if rng.random::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    edges
}

/// G(n, p) where each vertex independently carries each of the attributes
/// `a0..a{attributes-1}` with probability `attr_prob`.
pub fn random_attributed<R: Rng + ?Sized>(
    n: usize,
    p: f64,
    attributes: usize,
    attr_prob: f64,
    rng: &mut R,
) -> Result<AttributedGraph> {
    let edges = erdos_renyi(n, p, rng);
    let attrs: Vec<Vec<String>> = (0..n)
        .map(|_| {
            (0..attributes)
                .filter(|_| rng.random::<f64>() < attr_prob)
                .map(|a| format!("a{a}"))
                .collect()
        })
        .collect();
    AttributedGraph::from_tokens(n, &edges, &attrs)
}

/// Parameters for a graph with planted quasi-cliques.
#[derive(Debug, Clone, PartialEq)]
pub struct PlantedConfig {
    pub vertices: usize,
    /// Expected background degree.
    pub background_degree: f64,
    pub groups: usize,
    pub group_size: usize,
    /// Every planted group is at least this dense.
    pub gamma: Gamma,
    /// Probability of each intra-group edge before degrees are topped up.
    pub group_edge_prob: f64,
    pub noise_attributes: usize,
    pub noise_prob: f64,
    pub seed: u64,
}

impl Default for PlantedConfig {
    fn default() -> Self {
        Self {
            vertices: 2000,
            background_degree: 3.0,
            groups: 20,
            group_size: 12,
            gamma: Gamma::new(3, 5).expect("valid gamma"),
            group_edge_prob: 0.5,
            noise_attributes: 50,
            noise_prob: 0.2,
            seed: 7,
        }
    }
}

/// A planted instance: disjoint groups of `group_size` vertices, each made
/// γ-dense and tagged with its own attribute `planted{i}`, over a sparse
/// random background. Noise attributes `noise{j}` are scattered uniformly.
#[derive(Debug, Clone)]
pub struct PlantedInstance {
    pub graph: AttributedGraph,
    /// Members of each planted group, ascending.
    pub groups: Vec<Vec<VertexId>>,
    pub edges: Vec<(VertexId, VertexId)>,
}

pub fn planted_quasi_cliques(cfg: &PlantedConfig) -> Result<PlantedInstance> {
    let n = cfg.vertices;
    if cfg.groups * cfg.group_size > n {
        return Err(Error::InvalidParameter(format!(
            "{} groups of {} do not fit in {n} vertices",
            cfg.groups, cfg.group_size
        )));
    }
    if cfg.group_size < 2 {
        return Err(Error::InvalidParameter("group size must be at least 2".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let p = if n > 1 {
        (cfg.background_degree / (n - 1) as f64).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let mut edges = erdos_renyi(n, p, &mut rng);

    let mut order: Vec<VertexId> = (0..n as VertexId).collect();
    order.shuffle(&mut rng);
    let need = cfg.gamma.ceil_times(cfg.group_size - 1);
    let mut groups = Vec::with_capacity(cfg.groups);
    for chunk in order.chunks(cfg.group_size).take(cfg.groups) {
        let mut members = chunk.to_vec();
        members.sort_unstable();
        let s = members.len();
        let mut adj = vec![vec![false; s]; s];
        for i in 0..s {
            for j in i + 1..s {
                if rng.random::<f64>() < cfg.group_edge_prob {
                    adj[i][j] = true;
                    adj[j][i] = true;
                }
            }
        }
        // Top up low-degree members with edges to random non-neighbours.
        for i in 0..s {
            loop {
                let deg = adj[i].iter().filter(|&&b| b).count();
                if deg >= need {
                    break;
                }
                let missing: Vec<usize> = (0..s).filter(|&j| j != i && !adj[i][j]).collect();
                let j = missing[rng.random_range(0..missing.len())];
                adj[i][j] = true;
                adj[j][i] = true;
            }
        }
        for i in 0..s {
            for j in i + 1..s {
                if adj[i][j] {
                    edges.push((members[i], members[j]));
                }
            }
        }
        groups.push(members);
    }

    let mut attrs: Vec<Vec<String>> = (0..n)
        .map(|_| {
            (0..cfg.noise_attributes)
                .filter(|_| rng.random::<f64>() < cfg.noise_prob)
                .map(|j| format!("noise{j}"))
                .collect()
        })
        .collect();
    for (i, members) in groups.iter().enumerate() {
        for &v in members {
            attrs[v as usize].push(format!("planted{i}"));
        }
    }
    let graph = AttributedGraph::from_tokens(n, &edges, &attrs)?;
    Ok(PlantedInstance {
        graph,
        groups,
        edges,
    })
}
