//! Quasi-clique search over induced graph views.
//!
//! A vertex set `Q` is γ-dense when `|Q| >= min_size` and every member has at
//! least `⌈γ·(|Q|-1)⌉` neighbors inside `Q`. A quasi-clique is a γ-dense set
//! with no γ-dense proper superset.
//!
//! Three searches share one set-enumeration-tree walker:
//! * [`Engine::enumerate_maximal`] lists every quasi-clique;
//! * [`Engine::covered_vertices`] returns the union of all quasi-cliques,
//!   discarding candidates whose vertices are all known to be covered;
//! * [`Engine::top_k`] keeps the `k` best quasi-cliques by size, then
//!   density, raising the size floor as the result set fills.

mod search;

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::graph::{GraphView, VertexId};

pub use search::DEFAULT_CANDIDATE_LIMIT;

/// Density threshold γ as an exact rational in (0, 1].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Gamma(Ratio<u64>);

impl Gamma {
    pub fn new(numer: u64, denom: u64) -> Result<Self> {
        if denom == 0 || numer == 0 || numer > denom {
            return Err(Error::InvalidParameter(format!(
                "gamma must lie in (0, 1], got {numer}/{denom}"
            )));
        }
        Ok(Gamma(Ratio::new(numer, denom)))
    }

    /// Rounds to nine decimal places before converting.
    pub fn from_f64(value: f64) -> Result<Self> {
        if !value.is_finite() {
            return Err(Error::InvalidParameter(format!("gamma {value} is not finite")));
        }
        const SCALE: u64 = 1_000_000_000;
        let scaled = (value * SCALE as f64).round();
        if scaled < 0.0 {
            return Err(Error::InvalidParameter(format!("gamma {value} is negative")));
        }
        Self::new(scaled as u64, SCALE)
    }

    pub fn ratio(&self) -> Ratio<u64> {
        self.0
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// `⌈γ·k⌉`, computed exactly.
    pub fn ceil_times(&self, k: usize) -> usize {
        let (n, d) = (*self.0.numer() as u128, *self.0.denom() as u128);
        ((n * k as u128).div_ceil(d)) as usize
    }
}

impl FromStr for Gamma {
    type Err = Error;

    /// Parses decimal notation exactly (`0.6` is 3/5).
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("cannot parse gamma `{s}`"));
        let s = s.trim();
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        if int.is_empty() && frac.is_empty()
            || !int.bytes().all(|b| b.is_ascii_digit())
            || !frac.bytes().all(|b| b.is_ascii_digit())
            || frac.len() > 18
        {
            return Err(bad());
        }
        let denom = 10u64.pow(frac.len() as u32);
        let int: u64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
        let frac_v: u64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
        let numer = int
            .checked_mul(denom)
            .and_then(|v| v.checked_add(frac_v))
            .ok_or_else(bad)?;
        Gamma::new(numer, denom)
    }
}

impl fmt::Display for Gamma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_f64())
    }
}

/// Density and size thresholds of a quasi-clique.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuasiCliqueParams {
    gamma: Gamma,
    min_size: usize,
}

impl QuasiCliqueParams {
    pub fn new(gamma: Gamma, min_size: usize) -> Result<Self> {
        if min_size < 2 {
            return Err(Error::InvalidParameter(format!(
                "min_size must be at least 2, got {min_size}"
            )));
        }
        Ok(Self { gamma, min_size })
    }

    pub fn gamma(&self) -> Gamma {
        self.gamma
    }

    pub fn min_size(&self) -> usize {
        self.min_size
    }

    /// Degree every member of a set of size `size` needs: `⌈γ·(size-1)⌉`.
    pub fn required_degree(&self, size: usize) -> usize {
        self.gamma.ceil_times(size.saturating_sub(1))
    }

    /// The member-degree floor z = `⌈γ·(min_size-1)⌉`.
    pub fn min_degree(&self) -> usize {
        self.required_degree(self.min_size)
    }
}

/// Order in which candidates leave the work list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum SearchStrategy {
    BreadthFirst,
    #[default]
    DepthFirst,
}

impl FromStr for SearchStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bfs" | "breadth-first" => Ok(Self::BreadthFirst),
            "dfs" | "depth-first" => Ok(Self::DepthFirst),
            other => Err(Error::InvalidParameter(format!("unknown strategy `{other}`"))),
        }
    }
}

impl fmt::Display for SearchStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::BreadthFirst => "bfs",
            Self::DepthFirst => "dfs",
        })
    }
}

/// A γ-dense vertex set with its minimum-degree density.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuasiClique {
    vertices: Vec<VertexId>,
    density: Ratio<u64>,
}

impl QuasiClique {
    /// `vertices` must be sorted; `density` is `min deg_Q / (|Q|-1)`.
    pub(crate) fn new(vertices: Vec<VertexId>, density: Ratio<u64>) -> Self {
        debug_assert!(vertices.windows(2).all(|w| w[0] < w[1]));
        Self { vertices, density }
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn size(&self) -> usize {
        self.vertices.len()
    }

    pub fn density(&self) -> Ratio<u64> {
        self.density
    }

    pub fn density_f64(&self) -> f64 {
        self.density.to_f64().unwrap_or(f64::NAN)
    }
}

/// Ranking used for top-k output: larger first, then denser, then the
/// lexicographically smaller vertex list.
pub fn pattern_order(a: &QuasiClique, b: &QuasiClique) -> Ordering {
    b.size()
        .cmp(&a.size())
        .then_with(|| b.density.cmp(&a.density))
        .then_with(|| a.vertices.cmp(&b.vertices))
}

/// Degrees inside `q` (graph vertex ids, all members of `view`) for each
/// element of `q`, or `None` if some vertex is not in the view.
fn inner_degrees(view: &GraphView, q: &[VertexId]) -> Option<Vec<usize>> {
    let mut positions = Vec::with_capacity(q.len());
    for &v in q {
        positions.push(view.position(v)?);
    }
    let mut sorted = positions.clone();
    sorted.sort_unstable();
    Some(
        positions
            .iter()
            .map(|&p| {
                view.local_neighbors(p)
                    .iter()
                    .filter(|&&n| sorted.binary_search(&(n as usize)).is_ok())
                    .count()
            })
            .collect(),
    )
}

/// `min deg_Q(v) / (|Q|-1)` for a set of at least two view members.
pub fn density_of(view: &GraphView, q: &[VertexId]) -> Option<Ratio<u64>> {
    if q.len() < 2 {
        return None;
    }
    let degrees = inner_degrees(view, q)?;
    let min = degrees.into_iter().min().unwrap_or(0) as u64;
    Some(Ratio::new(min, q.len() as u64 - 1))
}

/// Size and degree test of the quasi-clique definition; maximality is not
/// checked.
pub fn is_gamma_dense(view: &GraphView, q: &[VertexId], params: &QuasiCliqueParams) -> bool {
    if q.len() < params.min_size() {
        return false;
    }
    let need = params.required_degree(q.len());
    match inner_degrees(view, q) {
        Some(degrees) => degrees.into_iter().all(|d| d >= need),
        None => false,
    }
}

/// Repeatedly removes vertices whose degree is below the member-degree floor.
pub fn vertex_prune(view: &GraphView, params: &QuasiCliqueParams) -> GraphView {
    let z = params.min_degree();
    let n = view.len();
    let mut degree: Vec<usize> = (0..n).map(|p| view.degree(p)).collect();
    let mut removed = vec![false; n];
    let mut stack: Vec<usize> = (0..n).filter(|&p| degree[p] < z).collect();
    for &p in &stack {
        removed[p] = true;
    }
    while let Some(p) = stack.pop() {
        for &q in view.local_neighbors(p) {
            let q = q as usize;
            if !removed[q] {
                degree[q] -= 1;
                if degree[q] < z {
                    removed[q] = true;
                    stack.push(q);
                }
            }
        }
    }
    let keep: Vec<u32> = (0..n as u32).filter(|&p| !removed[p as usize]).collect();
    if keep.len() == n {
        return view.clone();
    }
    view.subview(&keep)
}

/// Runs quasi-clique searches with a per-invocation candidate ceiling and
/// keeps a running count of visited candidates.
#[derive(Debug, Clone)]
pub struct Engine {
    params: QuasiCliqueParams,
    strategy: SearchStrategy,
    candidate_limit: u64,
    visited: u64,
}

impl Engine {
    pub fn new(params: QuasiCliqueParams, strategy: SearchStrategy) -> Self {
        Self {
            params,
            strategy,
            candidate_limit: DEFAULT_CANDIDATE_LIMIT,
            visited: 0,
        }
    }

    pub fn with_candidate_limit(mut self, limit: u64) -> Self {
        self.candidate_limit = limit;
        self
    }

    pub fn params(&self) -> &QuasiCliqueParams {
        &self.params
    }

    /// Candidates expanded by every search run on this engine so far.
    pub fn candidates_visited(&self) -> u64 {
        self.visited
    }

    fn searcher<'a>(&self, prepared: &'a search::Prepared) -> search::Searcher<'a> {
        search::Searcher::new(prepared, self.params, self.candidate_limit)
    }

    /// Every quasi-clique of `view`, sorted by [`pattern_order`].
    pub fn enumerate_maximal(&mut self, view: &GraphView) -> Result<Vec<QuasiClique>> {
        let prepared = search::Prepared::new(view, &self.params);
        let mut searcher = self.searcher(&prepared);
        let result = searcher.enumerate(self.strategy);
        self.visited += searcher.visited();
        result
    }

    /// K: the union of all quasi-cliques of `view`, ascending.
    pub fn covered_vertices(&mut self, view: &GraphView) -> Result<Vec<VertexId>> {
        let prepared = search::Prepared::new(view, &self.params);
        let mut searcher = self.searcher(&prepared);
        let result = searcher.cover(self.strategy);
        self.visited += searcher.visited();
        result
    }

    /// The `k` best quasi-cliques under [`pattern_order`]. Always searches
    /// depth-first.
    pub fn top_k(&mut self, view: &GraphView, k: usize) -> Result<Vec<QuasiClique>> {
        if k == 0 {
            return Err(Error::InvalidParameter("k must be at least 1".into()));
        }
        let prepared = search::Prepared::new(view, &self.params);
        let mut searcher = self.searcher(&prepared);
        let result = searcher.top_k(k);
        self.visited += searcher.visited();
        result
    }
}

pub fn enumerate_maximal(
    view: &GraphView,
    params: &QuasiCliqueParams,
    strategy: SearchStrategy,
) -> Result<Vec<QuasiClique>> {
    Engine::new(*params, strategy).enumerate_maximal(view)
}

pub fn covered_vertices(
    view: &GraphView,
    params: &QuasiCliqueParams,
    strategy: SearchStrategy,
) -> Result<Vec<VertexId>> {
    Engine::new(*params, strategy).covered_vertices(view)
}

pub fn top_k_patterns(
    view: &GraphView,
    params: &QuasiCliqueParams,
    k: usize,
) -> Result<Vec<QuasiClique>> {
    Engine::new(*params, SearchStrategy::DepthFirst).top_k(view, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{induced_view, AttributedGraph};

    fn params(gamma: &str, min_size: usize) -> QuasiCliqueParams {
        QuasiCliqueParams::new(gamma.parse().unwrap(), min_size).unwrap()
    }

    fn complete(n: u32) -> Vec<(u32, u32)> {
        (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect()
    }

    fn view_of(n: usize, edges: &[(u32, u32)]) -> GraphView {
        let g = AttributedGraph::from_tokens::<&str>(n, edges, &[]).unwrap();
        crate::graph::full_view(&g)
    }

    #[test]
    fn gamma_parsing_is_exact() {
        let g: Gamma = "0.6".parse().unwrap();
        assert_eq!(g.ratio(), Ratio::new(3, 5));
        assert_eq!(g.ceil_times(5), 3);
        assert_eq!(g.ceil_times(3), 2);
        assert_eq!(Gamma::from_f64(0.3 + 4.0 * 0.1).unwrap(), "0.7".parse().unwrap());
        assert!("0".parse::<Gamma>().is_err());
        assert!("1.5".parse::<Gamma>().is_err());
        assert!("abc".parse::<Gamma>().is_err());
        assert_eq!("1".parse::<Gamma>().unwrap().ceil_times(4), 4);
        assert!(QuasiCliqueParams::new(g, 1).is_err());
    }

    #[test]
    fn min_degree_floor() {
        assert_eq!(params("0.6", 4).min_degree(), 2);
        assert_eq!(params("0.5", 4).min_degree(), 2);
        assert_eq!(params("0.5", 10).min_degree(), 5);
        assert_eq!(params("0.01", 2).min_degree(), 1);
    }

    #[test]
    fn too_small_sets_are_never_dense() {
        let v = view_of(5, &complete(5));
        let p = params("0.6", 4);
        assert!(!is_gamma_dense(&v, &[0, 1, 2], &p));
        assert!(is_gamma_dense(&v, &[0, 1, 2, 3], &p));
        assert_eq!(density_of(&v, &[0, 1, 2, 3]), Some(Ratio::new(1, 1)));
    }

    #[test]
    fn vertex_prune_keeps_complete_graph() {
        let v = view_of(6, &complete(6));
        assert_eq!(vertex_prune(&v, &params("1", 6)), v);
    }

    #[test]
    fn vertex_prune_clears_star() {
        let star: Vec<_> = (1..=5).map(|leaf| (0, leaf)).collect();
        let v = view_of(6, &star);
        assert!(vertex_prune(&v, &params("0.5", 4)).is_empty());
    }

    #[test]
    fn views_below_min_size_have_no_quasi_cliques() {
        let v = view_of(3, &complete(3));
        let p = params("0.5", 4);
        for strategy in [SearchStrategy::BreadthFirst, SearchStrategy::DepthFirst] {
            assert!(enumerate_maximal(&v, &p, strategy).unwrap().is_empty());
            assert!(covered_vertices(&v, &p, strategy).unwrap().is_empty());
        }
        assert!(top_k_patterns(&v, &p, 3).unwrap().is_empty());
    }

    #[test]
    fn complete_graph_is_one_quasi_clique() {
        let v = view_of(6, &complete(6));
        let p = params("0.8", 3);
        let all = enumerate_maximal(&v, &p, SearchStrategy::DepthFirst).unwrap();
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].vertices(), &[0, 1, 2, 3, 4, 5]);
        assert_eq!(
            covered_vertices(&v, &p, SearchStrategy::BreadthFirst).unwrap(),
            vec![0, 1, 2, 3, 4, 5]
        );
    }

    #[test]
    fn candidate_ceiling_is_a_hard_error() {
        // Two disjoint 4-cycles: needs more than one expansion.
        let edges = [(0, 1), (1, 2), (2, 3), (0, 3), (4, 5), (5, 6), (6, 7), (4, 7)];
        let v = view_of(8, &edges);
        let mut engine =
            Engine::new(params("0.5", 4), SearchStrategy::DepthFirst).with_candidate_limit(1);
        assert!(matches!(
            engine.enumerate_maximal(&v),
            Err(Error::CandidateOverflow { limit: 1 })
        ));
    }

    #[test]
    fn members_outside_view_are_not_dense() {
        let g = AttributedGraph::from_tokens::<&str>(5, &complete(5), &[]).unwrap();
        let v = induced_view(&g, &[0, 1, 2, 3]).unwrap();
        assert!(!is_gamma_dense(&v, &[0, 1, 2, 4], &params("0.5", 3)));
    }
}
