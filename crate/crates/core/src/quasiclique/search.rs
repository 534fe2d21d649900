//! Set-enumeration-tree walker shared by all quasi-clique searches.
//!
//! Vertices are relabeled into canonical order (ascending degree after the
//! degree-floor reduction, ties by vertex id) so that the extensions of a
//! candidate are always the vertices that come after the last one chosen.
//!
//! Candidate pruning applied to every `(chosen, extensions)` pair:
//! * size bound: `|chosen| + |extensions|` must reach the current floor;
//! * degree bounds: a chosen vertex with `d` chosen neighbors and `e`
//!   extension neighbors can reach at most `d + min(e, q - |chosen|)` inside
//!   a result of size `q`, which must meet `⌈γ(q-1)⌉` for some admissible
//!   `q`; extensions are filtered by the same bound and the two rules are
//!   iterated to a fixpoint;
//! * for γ >= 1/2 every γ-dense set has diameter at most two, so extensions
//!   must lie within two hops of every chosen vertex;
//! * lookahead: when `chosen ∪ extensions` is itself γ-dense the subtree is
//!   accepted as a whole.

use std::collections::{HashSet, VecDeque};

use num_rational::Ratio;

use super::{pattern_order, QuasiClique, QuasiCliqueParams, SearchStrategy};
use crate::error::{Error, Result};
use crate::graph::{GraphView, VertexId};

/// Expansions allowed per search invocation.
pub const DEFAULT_CANDIDATE_LIMIT: u64 = 50_000_000;

/// A view after the degree-floor reduction, relabeled into canonical order.
pub(crate) struct Prepared {
    global: Vec<VertexId>,
    adj: Vec<Vec<u32>>,
}

impl Prepared {
    pub(crate) fn new(view: &GraphView, params: &QuasiCliqueParams) -> Self {
        let pruned = super::vertex_prune(view, params);
        let n = pruned.len();
        let mut order: Vec<usize> = (0..n).collect();
        // Members are sorted by id, so a stable sort on degree breaks ties by id.
        order.sort_by_key(|&p| pruned.degree(p));
        let mut rank = vec![0u32; n];
        for (r, &p) in order.iter().enumerate() {
            rank[p] = r as u32;
        }
        let global = order.iter().map(|&p| pruned.members()[p]).collect();
        let adj = order
            .iter()
            .map(|&p| {
                let mut list: Vec<u32> = pruned
                    .local_neighbors(p)
                    .iter()
                    .map(|&q| rank[q as usize])
                    .collect();
                list.sort_unstable();
                list
            })
            .collect();
        Prepared { global, adj }
    }

    fn len(&self) -> usize {
        self.adj.len()
    }
}

struct Node {
    chosen: Vec<u32>,
    extensions: Vec<u32>,
}

/// Outcome of pruning one candidate.
struct Refined {
    lookahead_dense: bool,
    chosen_dense: bool,
}

enum Goal<'m> {
    Enumerate(&'m mut Vec<Vec<u32>>),
    Cover(&'m mut CoverState),
    TopK(&'m mut TopState),
    Exists { floor: usize, found: bool },
}

struct CoverState {
    covered: Vec<bool>,
}

impl CoverState {
    fn all_covered(&self, a: &[u32], b: &[u32]) -> bool {
        a.iter().chain(b).all(|&v| self.covered[v as usize])
    }
}

struct TopState {
    k: usize,
    best: Vec<QuasiClique>,
    seen: HashSet<Vec<VertexId>>,
}

pub(crate) struct Searcher<'a> {
    g: &'a Prepared,
    params: QuasiCliqueParams,
    two_hop: bool,
    limit: u64,
    visited: u64,
    // Scratch space, all zeroed between uses.
    tag: Vec<u8>,
    in_chosen: Vec<u32>,
    in_ext: Vec<u32>,
    mark: Vec<u32>,
    stamp: u32,
}

const CHOSEN: u8 = 1;
const EXT: u8 = 2;

impl<'a> Searcher<'a> {
    pub(crate) fn new(g: &'a Prepared, params: QuasiCliqueParams, limit: u64) -> Self {
        let n = g.len();
        let two_hop = params.gamma().ratio() >= Ratio::new(1, 2);
        Searcher {
            g,
            params,
            two_hop,
            limit,
            visited: 0,
            tag: vec![0; n],
            in_chosen: vec![0; n],
            in_ext: vec![0; n],
            mark: vec![0; n],
            stamp: 0,
        }
    }

    pub(crate) fn visited(&self) -> u64 {
        self.visited
    }

    fn need(&self, size: usize) -> usize {
        self.params.required_degree(size)
    }

    fn root(&self) -> Node {
        Node {
            chosen: Vec::new(),
            extensions: (0..self.g.len() as u32).collect(),
        }
    }

    pub(crate) fn enumerate(&mut self, strategy: SearchStrategy) -> Result<Vec<QuasiClique>> {
        let mut found = Vec::new();
        let root = self.root();
        self.run(root, strategy, &mut Goal::Enumerate(&mut found))?;
        // Every γ-dense set lies inside some recorded set, so the maximal
        // recorded sets are exactly the quasi-cliques.
        for set in &mut found {
            set.sort_unstable();
        }
        found.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        found.dedup();
        let mut kept: Vec<Vec<u32>> = Vec::new();
        let mut by_vertex: Vec<Vec<usize>> = vec![Vec::new(); self.g.len()];
        for set in found {
            let pivot = *set
                .iter()
                .min_by_key(|&&v| by_vertex[v as usize].len())
                .expect("recorded sets are non-empty");
            let dominated = by_vertex[pivot as usize].iter().any(|&i| {
                let sup = &kept[i];
                sup.len() > set.len() && set.iter().all(|v| sup.binary_search(v).is_ok())
            });
            if dominated {
                continue;
            }
            for &v in &set {
                by_vertex[v as usize].push(kept.len());
            }
            kept.push(set);
        }
        let mut out: Vec<QuasiClique> = kept.iter().map(|s| self.to_quasi_clique(s)).collect();
        out.sort_by(pattern_order);
        Ok(out)
    }

    pub(crate) fn cover(&mut self, strategy: SearchStrategy) -> Result<Vec<VertexId>> {
        let mut state = CoverState {
            covered: vec![false; self.g.len()],
        };
        let root = self.root();
        self.run(root, strategy, &mut Goal::Cover(&mut state))?;
        let mut out: Vec<VertexId> = state
            .covered
            .iter()
            .enumerate()
            .filter(|(_, &c)| c)
            .map(|(v, _)| self.g.global[v])
            .collect();
        out.sort_unstable();
        Ok(out)
    }

    pub(crate) fn top_k(&mut self, k: usize) -> Result<Vec<QuasiClique>> {
        let mut state = TopState {
            k,
            best: Vec::new(),
            seen: HashSet::new(),
        };
        let root = self.root();
        self.run(root, SearchStrategy::DepthFirst, &mut Goal::TopK(&mut state))?;
        Ok(state.best)
    }

    fn floor(&self, goal: &Goal<'_>) -> usize {
        let min = self.params.min_size();
        match goal {
            Goal::TopK(state) if state.best.len() == state.k => {
                min.max(state.best.last().map_or(0, QuasiClique::size))
            }
            Goal::Exists { floor, .. } => *floor,
            _ => min,
        }
    }

    fn run(&mut self, root: Node, strategy: SearchStrategy, goal: &mut Goal<'_>) -> Result<()> {
        let mut work = VecDeque::from([root]);
        while let Some(node) = match strategy {
            SearchStrategy::BreadthFirst => work.pop_front(),
            SearchStrategy::DepthFirst => work.pop_back(),
        } {
            self.visited += 1;
            if self.visited > self.limit {
                return Err(Error::CandidateOverflow { limit: self.limit });
            }
            let floor = self.floor(goal);
            if let Goal::Cover(state) = goal {
                if state.all_covered(&node.chosen, &node.extensions) {
                    continue;
                }
            }
            let Node {
                chosen,
                mut extensions,
            } = node;
            let Some(refined) = self.refine(&chosen, &mut extensions, floor) else {
                continue;
            };
            if let Goal::Cover(state) = goal {
                if state.all_covered(&chosen, &extensions) {
                    continue;
                }
            }
            if refined.lookahead_dense {
                let mut set = chosen;
                set.extend_from_slice(&extensions);
                if self.record(set, goal)? {
                    return Ok(());
                }
                continue;
            }
            if refined.chosen_dense && self.record(chosen.clone(), goal)? {
                return Ok(());
            }
            self.push_children(&chosen, &extensions, floor, strategy, &mut work);
        }
        Ok(())
    }

    fn push_children(
        &mut self,
        chosen: &[u32],
        extensions: &[u32],
        floor: usize,
        strategy: SearchStrategy,
        work: &mut VecDeque<Node>,
    ) {
        let mut children = Vec::with_capacity(extensions.len());
        for (i, &u) in extensions.iter().enumerate() {
            let rest = &extensions[i + 1..];
            if chosen.len() + 1 + rest.len() < floor {
                break;
            }
            let rest = if self.two_hop {
                self.within_two_hops(u, rest)
            } else {
                rest.to_vec()
            };
            if chosen.len() + 1 + rest.len() < floor {
                continue;
            }
            let mut next = Vec::with_capacity(chosen.len() + 1);
            next.extend_from_slice(chosen);
            next.push(u);
            children.push(Node {
                chosen: next,
                extensions: rest,
            });
        }
        match strategy {
            SearchStrategy::BreadthFirst => work.extend(children),
            // Reversed so the first child is expanded first.
            SearchStrategy::DepthFirst => work.extend(children.into_iter().rev()),
        }
    }

    fn next_stamp(&mut self) -> u32 {
        self.stamp = self.stamp.wrapping_add(1);
        if self.stamp == 0 {
            self.mark.iter_mut().for_each(|m| *m = 0);
            self.stamp = 1;
        }
        self.stamp
    }

    /// Elements of `candidates` at distance at most two from `u`.
    fn within_two_hops(&mut self, u: u32, candidates: &[u32]) -> Vec<u32> {
        let stamp = self.next_stamp();
        let g = self.g;
        for &w in &g.adj[u as usize] {
            self.mark[w as usize] = stamp;
        }
        candidates
            .iter()
            .copied()
            .filter(|&w| {
                self.mark[w as usize] == stamp
                    || g.adj[w as usize]
                        .iter()
                        .any(|&x| self.mark[x as usize] == stamp)
            })
            .collect()
    }

    /// Largest `q` in `[lo, hi]` window where `base + min(ext, q - offset)`
    /// meets the degree requirement, as an interval; `None` if empty.
    ///
    /// The slack is non-decreasing up to `q = offset + ext` and
    /// non-increasing after it.
    fn feasible_sizes(
        &self,
        base: usize,
        ext: usize,
        offset: usize,
        lo: usize,
        hi: usize,
    ) -> Option<(usize, usize)> {
        if lo > hi {
            return None;
        }
        let ok = |q: usize| base + ext.min(q - offset) >= self.need(q);
        let peak = (offset + ext).clamp(lo, hi);
        if !ok(peak) {
            return None;
        }
        // First feasible size in [lo, peak].
        let (mut a, mut b) = (lo, peak);
        while a < b {
            let mid = a + (b - a) / 2;
            if ok(mid) {
                b = mid;
            } else {
                a = mid + 1;
            }
        }
        let first = a;
        // Last feasible size in [peak, hi].
        let (mut a, mut b) = (peak, hi);
        while a < b {
            let mid = a + (b - a).div_ceil(2);
            if ok(mid) {
                a = mid;
            } else {
                b = mid - 1;
            }
        }
        Some((first, a))
    }

    /// Applies the candidate pruning rules; `None` when the candidate cannot
    /// lead to any γ-dense set of size at least `floor`.
    fn refine(&mut self, chosen: &[u32], extensions: &mut Vec<u32>, floor: usize) -> Option<Refined> {
        let g = self.g;
        loop {
            let (xn, cn) = (chosen.len(), extensions.len());
            if xn + cn < floor {
                return None;
            }
            for &v in chosen {
                self.tag[v as usize] = CHOSEN;
            }
            for &v in extensions.iter() {
                self.tag[v as usize] = EXT;
            }
            for &v in chosen.iter().chain(extensions.iter()) {
                let (mut dx, mut dc) = (0, 0);
                for &w in &g.adj[v as usize] {
                    match self.tag[w as usize] {
                        CHOSEN => dx += 1,
                        EXT => dc += 1,
                        _ => {}
                    }
                }
                self.in_chosen[v as usize] = dx;
                self.in_ext[v as usize] = dc;
            }
            for &v in chosen.iter().chain(extensions.iter()) {
                self.tag[v as usize] = 0;
            }

            let mut lo = floor.max(xn);
            let mut hi = xn + cn;
            for &v in chosen {
                let (dx, dc) = (self.in_chosen[v as usize], self.in_ext[v as usize]);
                let (a, b) = self.feasible_sizes(dx as usize, dc as usize, xn, lo, hi)?;
                lo = a;
                hi = b;
            }
            let ext_lo = lo.max(xn + 1);
            let before = extensions.len();
            extensions.retain(|&u| {
                let (dx, dc) = (self.in_chosen[u as usize], self.in_ext[u as usize]);
                self.feasible_sizes(dx as usize, dc as usize, xn + 1, ext_lo, hi)
                    .is_some()
            });
            if extensions.len() != before {
                continue;
            }

            let min_size = self.params.min_size().max(floor);
            let chosen_dense = xn >= min_size && {
                let need = self.need(xn);
                chosen
                    .iter()
                    .all(|&v| self.in_chosen[v as usize] as usize >= need)
            };
            let total = xn + cn;
            let lookahead_dense = cn > 0 && total >= min_size && {
                let need = self.need(total);
                chosen.iter().chain(extensions.iter()).all(|&v| {
                    (self.in_chosen[v as usize] + self.in_ext[v as usize]) as usize >= need
                })
            };
            return Some(Refined {
                lookahead_dense,
                chosen_dense,
            });
        }
    }

    /// Handles a γ-dense set found by the walk. Returns `true` when the
    /// search can stop.
    fn record(&mut self, set: Vec<u32>, goal: &mut Goal<'_>) -> Result<bool> {
        match goal {
            Goal::Enumerate(found) => {
                if !self.has_single_vertex_extension(&set) {
                    found.push(set);
                }
                Ok(false)
            }
            Goal::Cover(state) => {
                for &v in &set {
                    state.covered[v as usize] = true;
                }
                Ok(false)
            }
            Goal::TopK(state) => {
                let floor = if state.best.len() == state.k {
                    state.best.last().map_or(0, QuasiClique::size)
                } else {
                    0
                };
                if set.len() < floor {
                    return Ok(false);
                }
                let qc = self.to_quasi_clique(&set);
                if state.best.len() == state.k
                    && pattern_order(&qc, state.best.last().expect("full")).is_ge()
                {
                    return Ok(false);
                }
                if state.seen.contains(qc.vertices()) || !self.is_maximal(&set)? {
                    return Ok(false);
                }
                state.seen.insert(qc.vertices().to_vec());
                let at = state
                    .best
                    .binary_search_by(|probe| pattern_order(probe, &qc))
                    .unwrap_or_else(|i| i);
                state.best.insert(at, qc);
                state.best.truncate(state.k);
                Ok(false)
            }
            Goal::Exists { floor, found } => {
                if set.len() >= *floor {
                    *found = true;
                    return Ok(true);
                }
                Ok(false)
            }
        }
    }

    /// Whether adding one vertex to the γ-dense `set` keeps it γ-dense.
    fn has_single_vertex_extension(&mut self, set: &[u32]) -> bool {
        let g = self.g;
        let need = self.need(set.len() + 1);
        for &v in set {
            self.tag[v as usize] = CHOSEN;
        }
        let mut short = Vec::new();
        let mut possible = true;
        for &v in set {
            let d = g.adj[v as usize]
                .iter()
                .filter(|&&w| self.tag[w as usize] == CHOSEN)
                .count();
            if d + 1 < need {
                possible = false;
                break;
            }
            if d < need {
                short.push(v);
            }
        }
        let mut found = false;
        if possible {
            // in_chosen counts neighbors in `set`, in_ext counts neighbors
            // among the members that still need one more.
            let mut touched = Vec::new();
            for &v in set {
                for &w in &g.adj[v as usize] {
                    if self.tag[w as usize] != CHOSEN {
                        if self.in_chosen[w as usize] == 0 && self.in_ext[w as usize] == 0 {
                            touched.push(w);
                        }
                        self.in_chosen[w as usize] += 1;
                    }
                }
            }
            for &v in &short {
                for &w in &g.adj[v as usize] {
                    if self.tag[w as usize] != CHOSEN {
                        self.in_ext[w as usize] += 1;
                    }
                }
            }
            found = touched.iter().any(|&w| {
                self.in_chosen[w as usize] as usize >= need
                    && self.in_ext[w as usize] as usize == short.len()
            });
            for &w in &touched {
                self.in_chosen[w as usize] = 0;
                self.in_ext[w as usize] = 0;
            }
        }
        for &v in set {
            self.tag[v as usize] = 0;
        }
        found
    }

    /// Exact maximality: no γ-dense proper superset exists in the view.
    fn is_maximal(&mut self, set: &[u32]) -> Result<bool> {
        if self.has_single_vertex_extension(set) {
            return Ok(false);
        }
        let mut in_set = vec![false; self.g.len()];
        for &v in set {
            in_set[v as usize] = true;
        }
        let mut extensions: Vec<u32> = (0..self.g.len() as u32)
            .filter(|&v| !in_set[v as usize])
            .collect();
        if self.two_hop {
            for &v in set {
                extensions = self.within_two_hops(v, &extensions);
            }
        }
        let root = Node {
            chosen: set.to_vec(),
            extensions,
        };
        let mut goal = Goal::Exists {
            floor: set.len() + 1,
            found: false,
        };
        self.run(root, SearchStrategy::DepthFirst, &mut goal)?;
        let Goal::Exists { found, .. } = goal else {
            unreachable!()
        };
        Ok(!found)
    }

    fn to_quasi_clique(&mut self, set: &[u32]) -> QuasiClique {
        let g = self.g;
        for &v in set {
            self.tag[v as usize] = CHOSEN;
        }
        let min_degree = set
            .iter()
            .map(|&v| {
                g.adj[v as usize]
                    .iter()
                    .filter(|&&w| self.tag[w as usize] == CHOSEN)
                    .count()
            })
            .min()
            .unwrap_or(0);
        for &v in set {
            self.tag[v as usize] = 0;
        }
        let mut vertices: Vec<VertexId> = set.iter().map(|&v| g.global[v as usize]).collect();
        vertices.sort_unstable();
        QuasiClique::new(
            vertices,
            Ratio::new(min_degree as u64, set.len().saturating_sub(1).max(1) as u64),
        )
    }
}
