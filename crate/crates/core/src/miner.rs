//! Level-wise search over attribute sets.
//!
//! Frequent attribute sets are grown by unioning members of the same
//! equivalence class (sets sharing all but their last attribute). Each
//! visited set is scored by its structural correlation; sets whose coverage
//! can no longer satisfy the thresholds are not extended, and a child's
//! quasi-clique search is confined to the coverage of its parents.

use std::cmp::Ordering;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{induced_view, AttributedGraph, VertexId};
use crate::index::{intersect_sorted, AttributeIndex, AttributeSet};
use crate::nullmodel::{normalized_delta, ExpectedCorrelation, NullModel, NullModelConfig};
use crate::quasiclique::{
    pattern_order, Engine, QuasiClique, QuasiCliqueParams, SearchStrategy,
    DEFAULT_CANDIDATE_LIMIT,
};

/// Number of patterns reported per qualifying attribute set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TopK {
    Limited(usize),
    All,
}

impl Default for TopK {
    fn default() -> Self {
        TopK::Limited(5)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MinerConfig {
    pub sigma_min: usize,
    pub qc_params: QuasiCliqueParams,
    pub eps_min: f64,
    pub delta_min: f64,
    pub top_k: TopK,
    pub strategy: SearchStrategy,
    pub null_model: NullModelConfig,
    pub max_set_size: Option<usize>,
    /// Candidate ceiling for each individual quasi-clique search.
    pub candidate_limit: u64,
    /// Abort the whole run on the first overflow instead of skipping the set.
    pub fail_fast: bool,
}

impl MinerConfig {
    pub fn new(sigma_min: usize, qc_params: QuasiCliqueParams) -> Self {
        Self {
            sigma_min,
            qc_params,
            eps_min: 0.0,
            delta_min: 0.0,
            top_k: TopK::default(),
            strategy: SearchStrategy::default(),
            null_model: NullModelConfig::default(),
            max_set_size: None,
            candidate_limit: DEFAULT_CANDIDATE_LIMIT,
            fail_fast: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if self.sigma_min == 0 {
            return bad("sigma_min must be at least 1".into());
        }
        if !(0.0..=1.0).contains(&self.eps_min) {
            return bad(format!("eps_min {} is outside [0, 1]", self.eps_min));
        }
        if !(self.delta_min >= 0.0) || self.delta_min.is_infinite() {
            return bad(format!("delta_min {} must be a finite value >= 0", self.delta_min));
        }
        if self.top_k == TopK::Limited(0) {
            return bad("top-k must be at least 1".into());
        }
        if self.max_set_size == Some(0) {
            return bad("max_set_size must be at least 1".into());
        }
        if self.candidate_limit == 0 {
            return bad("candidate limit must be at least 1".into());
        }
        self.null_model.validate()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationRecord {
    pub attribute_set: AttributeSet,
    pub support: usize,
    /// K_S, ascending.
    pub covered: Vec<VertexId>,
    pub eps: f64,
    pub eps_exp: ExpectedCorrelation,
    pub delta: f64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternRecord {
    pub attribute_set: AttributeSet,
    pub quasi_clique: QuasiClique,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MiningStats {
    /// Attribute sets with σ >= σ_min whose correlation was computed.
    pub attribute_sets_visited: u64,
    /// Quasi-clique search candidates expanded, null model excluded.
    pub candidates_visited: u64,
    /// Sets that qualified for extension but were blocked by pruning.
    pub extensions_pruned: u64,
    /// Sets skipped because a search hit the candidate ceiling.
    pub overflowed: Vec<AttributeSet>,
}

impl MiningStats {
    fn absorb(&mut self, other: MiningStats) {
        self.attribute_sets_visited += other.attribute_sets_visited;
        self.candidates_visited += other.candidates_visited;
        self.extensions_pruned += other.extensions_pruned;
        self.overflowed.extend(other.overflowed);
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct MiningOutput {
    pub records: Vec<CorrelationRecord>,
    pub patterns: Vec<PatternRecord>,
    pub stats: MiningStats,
}

impl MiningOutput {
    fn absorb(&mut self, other: MiningOutput) {
        self.records.extend(other.records);
        self.patterns.extend(other.patterns);
        self.stats.absorb(other.stats);
    }
}

fn qualifies_eps(covered: usize, support: usize, cfg: &MinerConfig) -> bool {
    covered as f64 >= cfg.eps_min * support as f64
}

fn qualifies_delta(covered: usize, support: usize, eps_exp: f64, cfg: &MinerConfig) -> bool {
    cfg.delta_min == 0.0
        || (covered > 0 && covered as f64 >= cfg.delta_min * eps_exp * support as f64)
}

/// True when the record satisfies both ε >= ε_min and δ >= δ_min.
///
/// The comparisons are made on |K| against threshold · σ so that the
/// outcome does not depend on how ε was rounded.
pub fn qualifies(rec: &CorrelationRecord, cfg: &MinerConfig) -> bool {
    let k = rec.covered.len();
    qualifies_eps(k, rec.support, cfg)
        && qualifies_delta(k, rec.support, rec.eps_exp.value, cfg)
}

/// Whether supersets of `rec.attribute_set` can still qualify. Their
/// coverage is at most |K| and their support at least σ_min, so both
/// thresholds are checked against those extremes.
pub fn prune_extension(
    rec: &CorrelationRecord,
    cfg: &MinerConfig,
    eps_exp_at_sigma_min: &ExpectedCorrelation,
) -> bool {
    let k = rec.covered.len() as f64;
    let sigma_min = cfg.sigma_min as f64;
    if k == 0.0 && cfg.delta_min > 0.0 {
        return false;
    }
    k >= cfg.eps_min * sigma_min && k >= cfg.delta_min * eps_exp_at_sigma_min.value * sigma_min
}

/// Scores one attribute set. Support always counts the whole of V(s); the
/// search itself only looks at V(s) ∩ restriction when one is given.
pub fn structural_correlation(
    g: &AttributedGraph,
    index: &AttributeIndex,
    s: &AttributeSet,
    cfg: &MinerConfig,
    restriction: Option<&[VertexId]>,
) -> Result<CorrelationRecord> {
    cfg.validate()?;
    let null = NullModel::new(g, cfg.qc_params, cfg.null_model)?
        .with_search(cfg.strategy, cfg.candidate_limit);
    let ctx = Context {
        g,
        cfg,
        null: &null,
    };
    let posting = index.vertex_set(s).into_vec();
    if posting.is_empty() {
        return Err(Error::InvalidParameter(format!(
            "attribute set {s} has no supporting vertices"
        )));
    }
    let mut engine = ctx.engine();
    ctx.score(s, &posting, restriction, &mut engine)
}

struct Context<'a> {
    g: &'a AttributedGraph,
    cfg: &'a MinerConfig,
    null: &'a NullModel<'a>,
}

/// A set kept for extension, with what its children need.
struct Frontier {
    set: AttributeSet,
    posting: Vec<VertexId>,
    covered: Option<Vec<VertexId>>,
}

fn frontier_order(a: &Frontier, b: &Frontier) -> Ordering {
    a.posting
        .len()
        .cmp(&b.posting.len())
        .then_with(|| a.set.cmp(&b.set))
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    Pruned,
    Naive,
}

impl<'a> Context<'a> {
    fn engine(&self) -> Engine {
        Engine::new(self.cfg.qc_params, self.cfg.strategy)
            .with_candidate_limit(self.cfg.candidate_limit)
    }

    fn record(
        &self,
        s: &AttributeSet,
        support: usize,
        covered: Vec<VertexId>,
    ) -> Result<CorrelationRecord> {
        let eps = covered.len() as f64 / support as f64;
        let eps_exp = self.null.eps_exp(support)?;
        Ok(CorrelationRecord {
            attribute_set: s.clone(),
            support,
            covered,
            eps,
            delta: normalized_delta(eps, &eps_exp),
            eps_exp,
        })
    }

    fn score(
        &self,
        s: &AttributeSet,
        posting: &[VertexId],
        restriction: Option<&[VertexId]>,
        engine: &mut Engine,
    ) -> Result<CorrelationRecord> {
        let restricted;
        let members = match restriction {
            Some(r) => {
                restricted = intersect_sorted(posting, r);
                &restricted[..]
            }
            None => posting,
        };
        let view = induced_view(self.g, members)?;
        let covered = engine.covered_vertices(&view)?;
        self.record(s, posting.len(), covered)
    }

    fn patterns(&self, covered: &[VertexId], engine: &mut Engine) -> Result<Vec<QuasiClique>> {
        // Every quasi-clique lies inside K, so searching G(K) loses nothing.
        let view = induced_view(self.g, covered)?;
        match self.cfg.top_k {
            TopK::Limited(k) => engine.top_k(&view, k),
            TopK::All => engine.enumerate_maximal(&view),
        }
    }

    /// Full evaluation of one set. Returns `Ok(None)` when the set was
    /// skipped after an overflow.
    fn visit(
        &self,
        s: &AttributeSet,
        posting: Vec<VertexId>,
        restriction: Option<&[VertexId]>,
        mode: Mode,
        out: &mut MiningOutput,
    ) -> Result<Option<Frontier>> {
        let mut engine = self.engine();
        let result = self.evaluate(s, &posting, restriction, mode, &mut engine, out);
        out.stats.candidates_visited += engine.candidates_visited();
        out.stats.attribute_sets_visited += 1;
        match result {
            Ok(keep) => Ok(keep.map(|covered| Frontier {
                set: s.clone(),
                posting,
                covered,
            })),
            Err(Error::CandidateOverflow { limit }) if !self.cfg.fail_fast => {
                log::warn!(
                    "attribute set {s} (support {}) skipped: quasi-clique search exceeded {limit} candidates",
                    posting.len()
                );
                out.stats.overflowed.push(s.clone());
                Ok(None)
            }
            Err(e) => Err(e),
        }
    }

    /// Returns the coverage to hand to children when the set is extended.
    #[allow(clippy::type_complexity)]
    fn evaluate(
        &self,
        s: &AttributeSet,
        posting: &[VertexId],
        restriction: Option<&[VertexId]>,
        mode: Mode,
        engine: &mut Engine,
        out: &mut MiningOutput,
    ) -> Result<Option<Option<Vec<VertexId>>>> {
        let (rec, all_qcs) = match mode {
            Mode::Pruned => (self.score(s, posting, restriction, engine)?, None),
            Mode::Naive => {
                let view = induced_view(self.g, posting)?;
                let qcs = engine.enumerate_maximal(&view)?;
                let mut covered: Vec<VertexId> =
                    qcs.iter().flat_map(|q| q.vertices().iter().copied()).collect();
                covered.sort_unstable();
                covered.dedup();
                (self.record(s, posting.len(), covered)?, Some(qcs))
            }
        };
        let qualified = qualifies(&rec, self.cfg);
        let mut patterns = Vec::new();
        if qualified {
            patterns = match all_qcs {
                Some(mut qcs) => {
                    qcs.sort_by(pattern_order);
                    if let TopK::Limited(k) = self.cfg.top_k {
                        qcs.truncate(k);
                    }
                    qcs
                }
                None => self.patterns(&rec.covered, engine)?,
            };
        }
        let next = match mode {
            Mode::Naive => Some(None),
            Mode::Pruned => {
                let floor = self.null.eps_exp(self.cfg.sigma_min)?;
                if prune_extension(&rec, self.cfg, &floor) {
                    Some(Some(rec.covered.clone()))
                } else {
                    out.stats.extensions_pruned += 1;
                    None
                }
            }
        };
        if qualified {
            out.patterns.extend(patterns.into_iter().map(|q| PatternRecord {
                attribute_set: s.clone(),
                quasi_clique: q,
            }));
            out.records.push(rec);
        }
        Ok(next)
    }

    /// Extends `parent` with each earlier member of its class, then recurses
    /// into the new class.
    fn extend(&self, parent: &Frontier, earlier: &[Frontier], mode: Mode) -> Result<MiningOutput> {
        let mut out = MiningOutput::default();
        let size = parent.set.len() + 1;
        if self.cfg.max_set_size.is_some_and(|cap| size > cap) {
            return Ok(out);
        }
        let mut class = Vec::new();
        for other in earlier {
            let set = parent.set.union(&other.set);
            let posting = intersect_sorted(&parent.posting, &other.posting);
            if posting.len() < self.cfg.sigma_min {
                continue;
            }
            let restriction = match (&parent.covered, &other.covered) {
                (Some(a), Some(b)) => Some(intersect_sorted(a, b)),
                (Some(a), None) | (None, Some(a)) => Some(a.clone()),
                (None, None) => None,
            };
            if let Some(child) = self.visit(&set, posting, restriction.as_deref(), mode, &mut out)? {
                class.push(child);
            }
        }
        class.sort_by(frontier_order);
        for i in 0..class.len() {
            out.absorb(self.extend(&class[i], &class[..i], mode)?);
        }
        Ok(out)
    }

    fn run(&self, index: &AttributeIndex, mode: Mode) -> Result<MiningOutput> {
        let mut singles = index.frequent_attributes(self.cfg.sigma_min);
        singles.sort_by(|(sa, pa), (sb, pb)| {
            pa.support().cmp(&pb.support()).then_with(|| sa.cmp(sb))
        });
        let visited = singles
            .into_par_iter()
            .map(|(s, posting)| {
                let mut out = MiningOutput::default();
                let kept = self.visit(&s, posting.into_vec(), None, mode, &mut out)?;
                Ok((out, kept))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut out = MiningOutput::default();
        let mut frontier = Vec::new();
        for (part, kept) in visited {
            out.absorb(part);
            frontier.extend(kept);
        }
        // Already in frontier order: sorted singletons, filtered.
        let subtrees = (0..frontier.len())
            .into_par_iter()
            .map(|i| self.extend(&frontier[i], &frontier[..i], mode))
            .collect::<Result<Vec<_>>>()?;
        for part in subtrees {
            out.absorb(part);
        }
        Ok(out)
    }
}

fn run(g: &AttributedGraph, index: &AttributeIndex, cfg: &MinerConfig, mode: Mode) -> Result<MiningOutput> {
    cfg.validate()?;
    let null = NullModel::new(g, cfg.qc_params, cfg.null_model)?
        .with_search(cfg.strategy, cfg.candidate_limit);
    let ctx = Context {
        g,
        cfg,
        null: &null,
    };
    ctx.run(index, mode)
}

/// Pruned search: coverage pruning inside each quasi-clique search,
/// parent-coverage restriction, and threshold-based extension pruning.
pub fn run_scpm(g: &AttributedGraph, index: &AttributeIndex, cfg: &MinerConfig) -> Result<MiningOutput> {
    run(g, index, cfg, Mode::Pruned)
}

/// Reference search: every frequent attribute set, full quasi-clique
/// enumeration on each induced graph, thresholds applied afterwards.
pub fn run_naive(g: &AttributedGraph, index: &AttributeIndex, cfg: &MinerConfig) -> Result<MiningOutput> {
    run(g, index, cfg, Mode::Naive)
}
