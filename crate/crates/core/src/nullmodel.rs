//! Expected structural correlation of a random vertex sample, and the
//! normalized correlation δ = ε / ε_exp.
//!
//! Two estimators are provided: a Monte-Carlo simulation that samples
//! vertex subsets of the given size and measures their coverage directly,
//! and an analytical upper bound based on the probability that a vertex
//! keeps at least the member-degree floor inside a random subgraph.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Mutex;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use statrs::function::factorial::ln_binomial;

use crate::error::{Error, Result};
use crate::graph::{degree_distribution, induced_view, AttributedGraph, DegreeHistogram, VertexId};
use crate::quasiclique::{Engine, QuasiCliqueParams, SearchStrategy, DEFAULT_CANDIDATE_LIMIT};

/// Above this degree binomial terms are evaluated in log space.
const DIRECT_EVALUATION_MAX_DEGREE: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum NullModelKind {
    #[default]
    Analytical,
    Simulation,
}

impl FromStr for NullModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "analytical" => Ok(Self::Analytical),
            "simulation" => Ok(Self::Simulation),
            other => Err(Error::InvalidParameter(format!("unknown null model `{other}`"))),
        }
    }
}

impl fmt::Display for NullModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Analytical => "analytical",
            Self::Simulation => "simulation",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct NullModelConfig {
    pub kind: NullModelKind,
    /// Monte-Carlo samples per support value (simulation only).
    pub samples: usize,
    pub seed: u64,
}

impl Default for NullModelConfig {
    fn default() -> Self {
        Self {
            kind: NullModelKind::Analytical,
            samples: 100,
            seed: 0,
        }
    }
}

impl NullModelConfig {
    pub fn validate(&self) -> Result<()> {
        if self.kind == NullModelKind::Simulation && self.samples == 0 {
            return Err(Error::InvalidParameter(
                "simulation needs at least one sample".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpectedCorrelation {
    pub value: f64,
    pub kind: NullModelKind,
    /// Sample standard deviation over the trials; zero for the analytical
    /// model.
    pub std_dev: f64,
}

impl ExpectedCorrelation {
    fn analytical(value: f64) -> Self {
        Self {
            value: value.clamp(0.0, 1.0),
            kind: NullModelKind::Analytical,
            std_dev: 0.0,
        }
    }
}

/// ρ = (σ - 1) / (n - 1): probability that a given other vertex joins a
/// random sample of size σ that already contains some vertex.
pub fn sample_prob(sigma: usize, n: usize) -> Result<f64> {
    if n < 2 || sigma == 0 || sigma > n {
        return Err(Error::InvalidParameter(format!(
            "sample size {sigma} is invalid for a graph with {n} vertices"
        )));
    }
    Ok((sigma - 1) as f64 / (n - 1) as f64)
}

/// Binomial probability C(α, β) ρ^β (1-ρ)^(α-β).
pub fn binomial_term(alpha: usize, beta: usize, rho: f64) -> Result<f64> {
    if beta > alpha {
        return Err(Error::InvalidParameter(format!(
            "binomial term needs beta <= alpha, got {beta} > {alpha}"
        )));
    }
    if !(0.0..=1.0).contains(&rho) {
        return Err(Error::InvalidParameter(format!("rho {rho} is outside [0, 1]")));
    }
    Ok(binomial_unchecked(alpha, beta, rho))
}

fn binomial_unchecked(alpha: usize, beta: usize, rho: f64) -> f64 {
    if rho == 0.0 {
        return if beta == 0 { 1.0 } else { 0.0 };
    }
    if rho == 1.0 {
        return if beta == alpha { 1.0 } else { 0.0 };
    }
    if alpha <= DIRECT_EVALUATION_MAX_DEGREE {
        let k = beta.min(alpha - beta);
        let mut c = 1.0f64;
        for i in 0..k {
            c = c * (alpha - i) as f64 / (i + 1) as f64;
        }
        c * rho.powi(beta as i32) * (1.0 - rho).powi((alpha - beta) as i32)
    } else {
        let ln = ln_binomial(alpha as u64, beta as u64)
            + beta as f64 * rho.ln()
            + (alpha - beta) as f64 * (-rho).ln_1p();
        ln.exp()
    }
}

/// P(Binomial(α, ρ) >= z), kept within [0, 1].
fn upper_tail(alpha: usize, z: usize, rho: f64) -> f64 {
    if z > alpha {
        return 0.0;
    }
    let lower: f64 = (0..z).map(|b| binomial_unchecked(alpha, b, rho)).sum();
    // Subtracting a small lower tail is the more accurate route; a large
    // lower tail means the upper one is small and is summed directly.
    if lower <= 0.5 {
        (1.0 - lower).clamp(0.0, 1.0)
    } else {
        (z..=alpha)
            .map(|b| binomial_unchecked(alpha, b, rho))
            .sum::<f64>()
            .min(1.0)
    }
}

/// Analytical upper bound on the expected structural correlation of an
/// attribute set with support `sigma`:
/// `Σ_{α>=z} p(α) · P(Binomial(α, ρ) >= z)`.
pub fn max_eps_exp(
    hist: &DegreeHistogram,
    sigma: usize,
    params: &QuasiCliqueParams,
    n: usize,
) -> Result<ExpectedCorrelation> {
    let rho = sample_prob(sigma, n)?;
    let z = params.min_degree();
    // Weighting by counts and dividing once keeps σ = n exact.
    let mut total = 0.0;
    for alpha in z..=hist.max_degree() {
        let count = hist.count(alpha);
        if count == 0 {
            continue;
        }
        total += count as f64 * upper_tail(alpha, z, rho);
    }
    Ok(ExpectedCorrelation::analytical(total / hist.vertex_count() as f64))
}

/// Stream seed for one simulation trial; independent of evaluation order.
fn trial_seed(seed: u64, sigma: usize, trial: usize) -> u64 {
    fn splitmix(mut x: u64) -> u64 {
        x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
        x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        x ^ (x >> 31)
    }
    seed ^ splitmix(splitmix(sigma as u64) ^ trial as u64)
}

fn pairwise_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        2..=8 => values.iter().sum(),
        n => {
            let (a, b) = values.split_at(n / 2);
            pairwise_sum(a) + pairwise_sum(b)
        }
    }
}

/// Simulation estimate: the mean coverage fraction of `cfg.samples` uniform
/// vertex samples of size `sigma`, drawn without replacement.
pub fn sim_eps_exp(
    g: &AttributedGraph,
    sigma: usize,
    params: &QuasiCliqueParams,
    cfg: &NullModelConfig,
) -> Result<ExpectedCorrelation> {
    sim_eps_exp_with(g, sigma, params, cfg, SearchStrategy::DepthFirst, DEFAULT_CANDIDATE_LIMIT)
}

pub(crate) fn sim_eps_exp_with(
    g: &AttributedGraph,
    sigma: usize,
    params: &QuasiCliqueParams,
    cfg: &NullModelConfig,
    strategy: SearchStrategy,
    candidate_limit: u64,
) -> Result<ExpectedCorrelation> {
    cfg.validate()?;
    let n = g.vertex_count();
    if sigma == 0 || sigma > n {
        return Err(Error::InvalidParameter(format!(
            "sample size {sigma} is invalid for a graph with {n} vertices"
        )));
    }
    let result = |values: Vec<f64>| {
        let r = values.len() as f64;
        let mean = pairwise_sum(&values) / r;
        let std_dev = if values.len() > 1 {
            let sq: Vec<f64> = values.iter().map(|v| (v - mean) * (v - mean)).collect();
            (pairwise_sum(&sq) / (r - 1.0)).sqrt()
        } else {
            0.0
        };
        ExpectedCorrelation {
            value: mean.clamp(0.0, 1.0),
            kind: NullModelKind::Simulation,
            std_dev,
        }
    };
    if sigma < params.min_size() {
        return Ok(result(vec![0.0; cfg.samples]));
    }
    let coverage = |members: &[VertexId]| -> Result<f64> {
        let view = induced_view(g, members)?;
        let mut engine = Engine::new(*params, strategy).with_candidate_limit(candidate_limit);
        Ok(engine.covered_vertices(&view)?.len() as f64 / sigma as f64)
    };
    if sigma == n {
        // Every sample is the whole vertex set.
        let all: Vec<VertexId> = (0..n as VertexId).collect();
        let eps = coverage(&all)?;
        return Ok(result(vec![eps; cfg.samples]));
    }
    let values = (0..cfg.samples)
        .into_par_iter()
        .map(|trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(cfg.seed, sigma, trial));
            let mut members: Vec<VertexId> = rand::seq::index::sample(&mut rng, n, sigma)
                .into_iter()
                .map(|i| i as VertexId)
                .collect();
            members.sort_unstable();
            coverage(&members)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(result(values))
}

/// δ = ε / ε_exp. A positive ε over a zero expectation is infinitely
/// significant; 0/0 is defined as 0.
pub fn normalized_delta(eps: f64, eps_exp: &ExpectedCorrelation) -> f64 {
    if eps_exp.value > 0.0 {
        eps / eps_exp.value
    } else if eps > 0.0 {
        f64::INFINITY
    } else {
        0.0
    }
}

/// ε_exp for one graph and parameter set, memoized by support.
#[derive(Debug)]
pub struct NullModel<'g> {
    graph: &'g AttributedGraph,
    histogram: DegreeHistogram,
    params: QuasiCliqueParams,
    config: NullModelConfig,
    strategy: SearchStrategy,
    candidate_limit: u64,
    cache: Mutex<HashMap<usize, ExpectedCorrelation>>,
}

impl<'g> NullModel<'g> {
    pub fn new(
        graph: &'g AttributedGraph,
        params: QuasiCliqueParams,
        config: NullModelConfig,
    ) -> Result<Self> {
        config.validate()?;
        Ok(Self {
            graph,
            histogram: degree_distribution(graph),
            params,
            config,
            strategy: SearchStrategy::DepthFirst,
            candidate_limit: DEFAULT_CANDIDATE_LIMIT,
            cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn with_search(mut self, strategy: SearchStrategy, candidate_limit: u64) -> Self {
        self.strategy = strategy;
        self.candidate_limit = candidate_limit;
        self
    }

    pub fn config(&self) -> &NullModelConfig {
        &self.config
    }

    pub fn histogram(&self) -> &DegreeHistogram {
        &self.histogram
    }

    pub fn eps_exp(&self, sigma: usize) -> Result<ExpectedCorrelation> {
        if let Some(hit) = self.cache.lock().expect("cache lock").get(&sigma) {
            return Ok(*hit);
        }
        let n = self.graph.vertex_count();
        let value = if n < 2 {
            // No sample can hold a quasi-clique.
            ExpectedCorrelation {
                value: 0.0,
                kind: self.config.kind,
                std_dev: 0.0,
            }
        } else {
            match self.config.kind {
                NullModelKind::Analytical => max_eps_exp(&self.histogram, sigma, &self.params, n)?,
                NullModelKind::Simulation => sim_eps_exp_with(
                    self.graph,
                    sigma,
                    &self.params,
                    &self.config,
                    self.strategy,
                    self.candidate_limit,
                )?,
            }
        };
        // Concurrent misses compute identical values, so last write wins.
        self.cache.lock().expect("cache lock").insert(sigma, value);
        Ok(value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn params(gamma: &str, min_size: usize) -> QuasiCliqueParams {
        QuasiCliqueParams::new(gamma.parse().unwrap(), min_size).unwrap()
    }

    #[test]
    fn sample_probability_cases() {
        assert_eq!(sample_prob(1, 11).unwrap(), 0.0);
        assert_eq!(sample_prob(11, 11).unwrap(), 1.0);
        assert_eq!(sample_prob(6, 11).unwrap(), 0.5);
        assert!(sample_prob(12, 11).is_err());
        assert!(sample_prob(1, 1).is_err());
    }

    #[test]
    fn binomial_edge_values() {
        for alpha in [0, 1, 5, 60, 61, 100, 500] {
            assert_eq!(binomial_term(alpha, alpha, 1.0).unwrap(), 1.0);
            assert_eq!(binomial_term(alpha, 0, 0.0).unwrap(), 1.0);
        }
        assert!((binomial_term(5, 2, 0.5).unwrap() - 0.3125).abs() <= 1e-15);
        assert!(binomial_term(3, 4, 0.5).is_err());
        assert!(binomial_term(3, 1, 1.5).is_err());
    }

    #[test]
    fn log_space_agrees_with_direct_evaluation_near_the_switch() {
        // Direct evaluation is still accurate at α = 61; compare both paths.
        for beta in [0, 10, 30, 61] {
            let rho: f64 = 0.37;
            let k = beta.min(61 - beta);
            let mut c = 1.0f64;
            for i in 0..k {
                c = c * (61 - i) as f64 / (i + 1) as f64;
            }
            let direct = c * rho.powi(beta as i32) * (1.0 - rho).powi(61 - beta as i32);
            let logged = binomial_term(61, beta, rho).unwrap();
            assert!((direct - logged).abs() <= 1e-12 * direct.max(1e-300), "{beta}");
        }
    }

    proptest! {
        #[test]
        fn rows_sum_to_one(alpha in 0usize..=300, rho in 0.0f64..=1.0) {
            let total: f64 = (0..=alpha).map(|b| binomial_term(alpha, b, rho).unwrap()).sum();
            prop_assert!((total - 1.0).abs() <= 1e-12, "alpha={alpha} rho={rho} total={total}");
        }
    }

    #[test]
    fn normalized_delta_conventions() {
        let e = ExpectedCorrelation::analytical(0.25);
        assert_eq!(normalized_delta(0.25, &e), 1.0);
        assert_eq!(normalized_delta(0.0, &e), 0.0);
        let zero = ExpectedCorrelation::analytical(0.0);
        assert_eq!(normalized_delta(0.0, &zero), 0.0);
        let inf = normalized_delta(0.1, &zero);
        assert!(inf > f64::MAX);
        assert_eq!(inf.to_string(), "inf");
    }

    #[test]
    fn bound_extremes() {
        // Degrees 0,1,2,3,3 on 5 vertices.
        let g = AttributedGraph::from_tokens::<&str>(
            5,
            &[(1, 2), (2, 3), (3, 4), (2, 4)],
            &[],
        )
        .unwrap();
        let h = degree_distribution(&g);
        let p = params("0.5", 4); // z = 2
        let full = max_eps_exp(&h, 5, &p, 5).unwrap();
        // Vertices of degree >= 2: 2, 3, 4.
        assert!((full.value - 0.6).abs() < 1e-15);
        assert_eq!(max_eps_exp(&h, 1, &p, 5).unwrap().value, 0.0);
    }

    #[test]
    fn simulation_degenerate_supports() {
        let k5: Vec<_> = (0..5u32)
            .flat_map(|a| (a + 1..5).map(move |b| (a, b)))
            .collect();
        let mut edges = k5.clone();
        edges.push((5, 6));
        let g = AttributedGraph::from_tokens::<&str>(8, &edges, &[]).unwrap();
        let p = params("1", 4);
        let cfg = NullModelConfig {
            kind: NullModelKind::Simulation,
            samples: 20,
            seed: 9,
        };
        let all = sim_eps_exp(&g, 8, &p, &cfg).unwrap();
        assert_eq!(all.value, 5.0 / 8.0);
        assert_eq!(all.std_dev, 0.0);
        let small = sim_eps_exp(&g, 3, &p, &cfg).unwrap();
        assert_eq!(small.value, 0.0);
        let a = sim_eps_exp(&g, 6, &p, &cfg).unwrap();
        let b = sim_eps_exp(&g, 6, &p, &cfg).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert_eq!(a.std_dev.to_bits(), b.std_dev.to_bits());
    }

    #[test]
    fn memoized_model_matches_direct_calls() {
        let g = AttributedGraph::from_tokens::<&str>(4, &[(0, 1), (1, 2), (2, 3), (0, 3)], &[])
            .unwrap();
        let p = params("0.5", 3);
        let model = NullModel::new(&g, p, NullModelConfig::default()).unwrap();
        let direct = max_eps_exp(&degree_distribution(&g), 3, &p, 4).unwrap();
        assert_eq!(model.eps_exp(3).unwrap(), direct);
        assert_eq!(model.eps_exp(3).unwrap(), direct);
    }
}
