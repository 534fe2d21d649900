//! Attributed graphs, degree statistics and induced subgraph views.
//!
//! Vertices are stored under dense identifiers `0..n`. The external
//! identifiers found in the input files are kept in ascending order, so the
//! dense order agrees with the order of the original ids.

use std::collections::HashMap;
use std::io::BufRead;

use crate::error::{Error, Result};

/// Dense internal vertex identifier.
pub type VertexId = u32;
/// Dense internal attribute identifier.
pub type AttrId = u32;

/// Bidirectional map between attribute tokens and dense ids, assigned in
/// first-seen order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AttributeDictionary {
    tokens: Vec<String>,
    lookup: HashMap<String, AttrId>,
}

impl AttributeDictionary {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns the id of `token`, assigning the next free id if it is new.
    pub fn intern(&mut self, token: &str) -> AttrId {
        if let Some(&id) = self.lookup.get(token) {
            return id;
        }
        let id = self.tokens.len() as AttrId;
        self.tokens.push(token.to_owned());
        self.lookup.insert(token.to_owned(), id);
        id
    }

    pub fn id(&self, token: &str) -> Option<AttrId> {
        self.lookup.get(token).copied()
    }

    pub fn token(&self, id: AttrId) -> Option<&str> {
        self.tokens.get(id as usize).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}

/// Immutable undirected attributed graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttributedGraph {
    adjacency: Vec<Vec<VertexId>>,
    attributes: Vec<Vec<AttrId>>,
    dictionary: AttributeDictionary,
    original_ids: Vec<u64>,
}

/// Counters collected while loading a graph from text.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LoadReport {
    pub self_loops_dropped: usize,
    pub duplicate_edges: usize,
}

impl AttributedGraph {
    /// Builds a graph over vertices `0..n` from an edge list and per-vertex
    /// attribute ids. Self-loops are dropped and duplicate edges merged.
    ///
    /// Every attribute id must be present in `dictionary`.
    pub fn from_parts(
        n: usize,
        edges: &[(VertexId, VertexId)],
        attributes: Vec<Vec<AttrId>>,
        dictionary: AttributeDictionary,
    ) -> Result<Self> {
        let original_ids = (0..n as u64).collect();
        let (graph, _) = Self::assemble(n, edges, attributes, dictionary, original_ids)?;
        Ok(graph)
    }

    /// Convenience constructor used by tests and generators: attributes are
    /// given as tokens and interned in first-seen order.
    pub fn from_tokens<S: AsRef<str>>(
        n: usize,
        edges: &[(VertexId, VertexId)],
        attributes: &[Vec<S>],
    ) -> Result<Self> {
        let mut dictionary = AttributeDictionary::new();
        let mut attrs = vec![Vec::new(); n];
        for (v, tokens) in attributes.iter().enumerate().take(n) {
            attrs[v] = tokens.iter().map(|t| dictionary.intern(t.as_ref())).collect();
        }
        Self::from_parts(n, edges, attrs, dictionary)
    }

    fn assemble(
        n: usize,
        edges: &[(VertexId, VertexId)],
        mut attributes: Vec<Vec<AttrId>>,
        dictionary: AttributeDictionary,
        original_ids: Vec<u64>,
    ) -> Result<(Self, LoadReport)> {
        if n > u32::MAX as usize {
            return Err(Error::TooManyVertices(n));
        }
        let mut report = LoadReport::default();
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in edges {
            for w in [u, v] {
                if w as usize >= n {
                    return Err(Error::UnknownVertex(w));
                }
            }
            if u == v {
                report.self_loops_dropped += 1;
                continue;
            }
            adjacency[u as usize].push(v);
            adjacency[v as usize].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
            let before = list.len();
            list.dedup();
            report.duplicate_edges += before - list.len();
        }
        // Each duplicate edge was counted once from each endpoint.
        report.duplicate_edges /= 2;

        attributes.resize(n, Vec::new());
        for set in &mut attributes {
            set.sort_unstable();
            set.dedup();
            if let Some(&a) = set.last() {
                if a as usize >= dictionary.len() {
                    return Err(Error::InvalidParameter(format!(
                        "attribute id {a} is missing from the dictionary"
                    )));
                }
            }
        }
        Ok((
            Self {
                adjacency,
                attributes,
                dictionary,
                original_ids,
            },
            report,
        ))
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adjacency[v as usize]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adjacency[v as usize].len()
    }

    /// The attribute set F(v), sorted.
    pub fn attributes(&self, v: VertexId) -> &[AttrId] {
        &self.attributes[v as usize]
    }

    pub fn dictionary(&self) -> &AttributeDictionary {
        &self.dictionary
    }

    /// External identifier of an internal vertex.
    pub fn original_id(&self, v: VertexId) -> u64 {
        self.original_ids[v as usize]
    }

    /// Internal identifier for an external one.
    pub fn vertex_for(&self, original: u64) -> Option<VertexId> {
        self.original_ids
            .binary_search(&original)
            .ok()
            .map(|i| i as VertexId)
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.adjacency[u as usize].binary_search(&v).is_ok()
    }
}

fn parse_vertex(token: &str, source_name: &'static str, line: usize) -> Result<u64> {
    token.parse::<u64>().map_err(|_| {
        if !token.is_empty() && token.bytes().all(|b| b.is_ascii_digit()) {
            Error::VertexOverflow {
                source_name,
                line,
                token: token.to_owned(),
            }
        } else {
            Error::Parse {
                source_name,
                line,
                message: format!("expected a non-negative integer vertex id, found `{token}`"),
            }
        }
    })
}

fn content_lines<R: BufRead>(
    reader: R,
) -> impl Iterator<Item = (usize, std::io::Result<String>)> {
    reader
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| match l {
            Ok(text) => {
                let t = text.trim();
                !t.is_empty() && !t.starts_with('#')
            }
            Err(_) => true,
        })
}

/// Loads an attributed graph from an edge list and an attribute file.
///
/// Edge lines hold two whitespace-separated vertex ids. Attribute lines hold
/// a vertex id followed by its attribute tokens. Lines starting with `#` are
/// comments. Vertices are remapped to `0..n` in ascending original-id order.
pub fn load_graph<E: BufRead, A: BufRead>(
    edge_source: E,
    attribute_source: A,
) -> Result<(AttributedGraph, LoadReport)> {
    let mut raw_edges = Vec::new();
    for (line_no, line) in content_lines(edge_source) {
        let line = line?;
        let mut tokens = line.split_whitespace();
        let (Some(a), Some(b), None) = (tokens.next(), tokens.next(), tokens.next()) else {
            return Err(Error::Parse {
                source_name: "edge file",
                line: line_no,
                message: "expected exactly two vertex ids".into(),
            });
        };
        raw_edges.push((
            parse_vertex(a, "edge file", line_no)?,
            parse_vertex(b, "edge file", line_no)?,
        ));
    }

    let mut raw_attrs: Vec<(u64, Vec<String>)> = Vec::new();
    for (line_no, line) in content_lines(attribute_source) {
        let line = line?;
        let mut tokens = line.split_whitespace();
        let id = tokens.next().expect("non-empty line has a token");
        let v = parse_vertex(id, "attribute file", line_no)?;
        raw_attrs.push((v, tokens.map(str::to_owned).collect()));
    }

    let mut original_ids: Vec<u64> = raw_edges
        .iter()
        .flat_map(|&(a, b)| [a, b])
        .chain(raw_attrs.iter().map(|(v, _)| *v))
        .collect();
    original_ids.sort_unstable();
    original_ids.dedup();
    if original_ids.len() > u32::MAX as usize {
        return Err(Error::TooManyVertices(original_ids.len()));
    }
    let dense = |id: u64| original_ids.binary_search(&id).expect("collected id") as VertexId;

    let edges: Vec<_> = raw_edges.iter().map(|&(a, b)| (dense(a), dense(b))).collect();
    let mut dictionary = AttributeDictionary::new();
    let mut attributes = vec![Vec::new(); original_ids.len()];
    for (v, tokens) in &raw_attrs {
        let slot: &mut Vec<AttrId> = &mut attributes[dense(*v) as usize];
        slot.extend(tokens.iter().map(|t| dictionary.intern(t)));
    }

    let n = original_ids.len();
    let (graph, report) =
        AttributedGraph::assemble(n, &edges, attributes, dictionary, original_ids)?;
    if report.self_loops_dropped > 0 {
        log::warn!("dropped {} self-loop(s) from the edge file", report.self_loops_dropped);
    }
    Ok((graph, report))
}

/// Degree distribution p(α) of a graph.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeHistogram {
    counts: Vec<usize>,
    vertex_count: usize,
}

impl DegreeHistogram {
    /// Number of vertices with degree `alpha`.
    pub fn count(&self, alpha: usize) -> usize {
        self.counts.get(alpha).copied().unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        self.counts.len().saturating_sub(1)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// p(α) = count(α) / |V|; zero for an empty graph.
    pub fn probability(&self, alpha: usize) -> f64 {
        if self.vertex_count == 0 {
            return 0.0;
        }
        self.count(alpha) as f64 / self.vertex_count as f64
    }

    pub fn probabilities(&self) -> Vec<f64> {
        (0..self.counts.len()).map(|a| self.probability(a)).collect()
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }
}

/// Histogram of vertex degrees, isolated vertices included at degree 0.
pub fn degree_distribution(g: &AttributedGraph) -> DegreeHistogram {
    let max = (0..g.vertex_count() as VertexId)
        .map(|v| g.degree(v))
        .max()
        .unwrap_or(0);
    let mut counts = vec![0; max + 1];
    for v in 0..g.vertex_count() as VertexId {
        counts[g.degree(v)] += 1;
    }
    if g.vertex_count() == 0 {
        counts.clear();
    }
    DegreeHistogram {
        counts,
        vertex_count: g.vertex_count(),
    }
}

/// Subgraph induced by a sorted vertex subset.
///
/// Local adjacency lists hold positions into `members`, so position order and
/// vertex-id order agree.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GraphView {
    members: Vec<VertexId>,
    local_adjacency: Vec<Vec<u32>>,
}

impl GraphView {
    pub fn members(&self) -> &[VertexId] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Neighbors of the member at `pos`, as positions.
    pub fn local_neighbors(&self, pos: usize) -> &[u32] {
        &self.local_adjacency[pos]
    }

    /// Neighbors of the member at `pos`, as graph vertex ids.
    pub fn neighbors(&self, pos: usize) -> impl Iterator<Item = VertexId> + '_ {
        self.local_adjacency[pos]
            .iter()
            .map(move |&p| self.members[p as usize])
    }

    pub fn degree(&self, pos: usize) -> usize {
        self.local_adjacency[pos].len()
    }

    pub fn position(&self, v: VertexId) -> Option<usize> {
        self.members.binary_search(&v).ok()
    }

    pub fn edge_count(&self) -> usize {
        self.local_adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Edges as `(u, v)` graph vertex pairs with `u < v`.
    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (i, adj) in self.local_adjacency.iter().enumerate() {
            for &j in adj {
                if (j as usize) > i {
                    out.push((self.members[i], self.members[j as usize]));
                }
            }
        }
        out
    }

    /// View induced by a strictly ascending list of positions of this view.
    pub fn subview(&self, positions: &[u32]) -> GraphView {
        let mut remap = vec![u32::MAX; self.members.len()];
        for (new, &old) in positions.iter().enumerate() {
            remap[old as usize] = new as u32;
        }
        let members = positions.iter().map(|&p| self.members[p as usize]).collect();
        let local_adjacency = positions
            .iter()
            .map(|&p| {
                self.local_adjacency[p as usize]
                    .iter()
                    .filter_map(|&q| match remap[q as usize] {
                        u32::MAX => None,
                        r => Some(r),
                    })
                    .collect()
            })
            .collect();
        GraphView {
            members,
            local_adjacency,
        }
    }

    /// Builds a view directly from positions-based adjacency. Used by
    /// generators and tests; lists must be sorted and symmetric.
    pub fn from_local_parts(members: Vec<VertexId>, local_adjacency: Vec<Vec<u32>>) -> Self {
        debug_assert_eq!(members.len(), local_adjacency.len());
        GraphView {
            members,
            local_adjacency,
        }
    }
}

/// The subgraph of `g` induced by `members`.
pub fn induced_view(g: &AttributedGraph, members: &[VertexId]) -> Result<GraphView> {
    if members.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::UnsortedMembers);
    }
    if let Some(&last) = members.last() {
        if last as usize >= g.vertex_count() {
            return Err(Error::UnknownVertex(last));
        }
    }
    // Dense lookup pays off once the view covers a sizeable share of the graph.
    let dense = members.len() * 16 >= g.vertex_count();
    let lookup: Vec<u32> = if dense {
        let mut table = vec![u32::MAX; g.vertex_count()];
        for (i, &v) in members.iter().enumerate() {
            table[v as usize] = i as u32;
        }
        table
    } else {
        Vec::new()
    };
    let local_adjacency = members
        .iter()
        .map(|&v| {
            g.neighbors(v)
                .iter()
                .filter_map(|&u| {
                    if dense {
                        match lookup[u as usize] {
                            u32::MAX => None,
                            p => Some(p),
                        }
                    } else {
                        members.binary_search(&u).ok().map(|p| p as u32)
                    }
                })
                .collect()
        })
        .collect();
    Ok(GraphView {
        members: members.to_vec(),
        local_adjacency,
    })
}

/// View over every vertex of `g`.
pub fn full_view(g: &AttributedGraph) -> GraphView {
    let all: Vec<VertexId> = (0..g.vertex_count() as VertexId).collect();
    induced_view(g, &all).expect("all vertices are valid members")
}
