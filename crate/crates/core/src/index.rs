//! Vertical attribute index: attribute -> sorted posting list of vertices.

use std::fmt;

use crate::graph::{AttrId, AttributedGraph, VertexId};

/// A canonical (strictly ascending) set of attribute ids.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct AttributeSet(Vec<AttrId>);

impl AttributeSet {
    /// Sorts and deduplicates `ids`.
    pub fn new(mut ids: Vec<AttrId>) -> Self {
        ids.sort_unstable();
        ids.dedup();
        AttributeSet(ids)
    }

    pub fn singleton(a: AttrId) -> Self {
        AttributeSet(vec![a])
    }

    pub fn ids(&self) -> &[AttrId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn union(&self, other: &AttributeSet) -> AttributeSet {
        let mut ids = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                std::cmp::Ordering::Less => {
                    ids.push(self.0[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    ids.push(other.0[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    ids.push(self.0[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        ids.extend_from_slice(&self.0[i..]);
        ids.extend_from_slice(&other.0[j..]);
        AttributeSet(ids)
    }

    pub fn is_subset(&self, other: &AttributeSet) -> bool {
        self.0.iter().all(|a| other.0.binary_search(a).is_ok())
    }

    /// Tokens joined by `sep`, in id order.
    pub fn display_with(&self, g: &AttributedGraph, sep: &str) -> String {
        self.0
            .iter()
            .map(|&a| g.dictionary().token(a).unwrap_or("?"))
            .collect::<Vec<_>>()
            .join(sep)
    }
}

impl fmt::Display for AttributeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "}}")
    }
}

/// Strictly ascending list of vertices that carry some attribute set.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PostingList(Vec<VertexId>);

impl PostingList {
    pub fn from_sorted(vertices: Vec<VertexId>) -> Self {
        debug_assert!(vertices.windows(2).all(|w| w[0] < w[1]));
        PostingList(vertices)
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.0
    }

    /// σ, the number of vertices in the list.
    pub fn support(&self) -> usize {
        self.0.len()
    }

    pub fn into_vec(self) -> Vec<VertexId> {
        self.0
    }

    pub fn intersect(&self, other: &PostingList) -> PostingList {
        PostingList(intersect_sorted(&self.0, &other.0))
    }
}

/// Length ratio above which intersection switches to galloping search.
const GALLOP_RATIO: usize = 32;

/// Intersection of two strictly ascending lists.
pub fn intersect_sorted(a: &[VertexId], b: &[VertexId]) -> Vec<VertexId> {
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let mut out = Vec::with_capacity(small.len());
    if small.is_empty() {
        return out;
    }
    if large.len() / small.len() > GALLOP_RATIO {
        let mut base = 0;
        for &x in small {
            // Exponential probe then binary search in the bracketed window.
            let mut step = 1;
            let mut hi = base;
            while hi < large.len() && large[hi] < x {
                base = hi;
                hi += step;
                step *= 2;
            }
            let end = (hi + 1).min(large.len());
            match large[base..end].binary_search(&x) {
                Ok(i) => {
                    out.push(x);
                    base += i + 1;
                }
                Err(i) => base += i,
            }
            if base >= large.len() {
                break;
            }
        }
    } else {
        let (mut i, mut j) = (0, 0);
        while i < small.len() && j < large.len() {
            match small[i].cmp(&large[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    out.push(small[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
    }
    out
}

/// Posting lists for every attribute that occurs on at least one vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttributeIndex {
    lists: Vec<PostingList>,
}

impl AttributeIndex {
    /// Posting list of a single attribute; `None` when it occurs nowhere.
    pub fn posting(&self, a: AttrId) -> Option<&PostingList> {
        self.lists.get(a as usize).filter(|l| l.support() > 0)
    }

    /// Attributes with a non-empty posting list, ascending.
    pub fn attributes(&self) -> impl Iterator<Item = AttrId> + '_ {
        self.lists
            .iter()
            .enumerate()
            .filter(|(_, l)| l.support() > 0)
            .map(|(a, _)| a as AttrId)
    }

    /// V(S): vertices carrying every attribute of `s`. Unknown attributes
    /// yield an empty list. `s` must be non-empty.
    pub fn vertex_set(&self, s: &AttributeSet) -> PostingList {
        assert!(!s.is_empty(), "V(∅) is handled by the caller");
        let mut lists: Vec<&PostingList> = Vec::with_capacity(s.len());
        for &a in s.ids() {
            match self.posting(a) {
                Some(l) => lists.push(l),
                None => return PostingList::default(),
            }
        }
        lists.sort_by_key(|l| l.support());
        let mut acc = lists[0].clone();
        for l in &lists[1..] {
            if acc.support() == 0 {
                break;
            }
            acc = acc.intersect(l);
        }
        acc
    }

    /// σ(S).
    pub fn support(&self, s: &AttributeSet) -> usize {
        self.vertex_set(s).support()
    }

    /// Singletons with support at least `sigma_min`, by ascending attribute id.
    pub fn frequent_attributes(&self, sigma_min: usize) -> Vec<(AttributeSet, PostingList)> {
        self.attributes()
            .filter_map(|a| {
                let list = &self.lists[a as usize];
                (list.support() >= sigma_min.max(1))
                    .then(|| (AttributeSet::singleton(a), list.clone()))
            })
            .collect()
    }
}

pub fn build_index(g: &AttributedGraph) -> AttributeIndex {
    let mut lists = vec![Vec::new(); g.dictionary().len()];
    for v in 0..g.vertex_count() as VertexId {
        for &a in g.attributes(v) {
            // Vertices are visited in ascending order, so lists stay sorted.
            lists[a as usize].push(v);
        }
    }
    AttributeIndex {
        lists: lists.into_iter().map(PostingList).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn naive_intersection(a: &[u32], b: &[u32]) -> Vec<u32> {
        a.iter().copied().filter(|x| b.contains(x)).collect()
    }

    fn sorted_set() -> impl Strategy<Value = Vec<u32>> {
        proptest::collection::btree_set(0u32..2000, 0..300).prop_map(|s| s.into_iter().collect())
    }

    proptest! {
        #[test]
        fn intersection_matches_filter(a in sorted_set(), b in sorted_set()) {
            prop_assert_eq!(intersect_sorted(&a, &b), naive_intersection(&a, &b));
        }

        #[test]
        fn galloping_path_matches_filter(
            a in proptest::collection::btree_set(0u32..5000, 0..4),
            b in proptest::collection::btree_set(0u32..5000, 200..1000),
        ) {
            let a: Vec<_> = a.into_iter().collect();
            let b: Vec<_> = b.into_iter().collect();
            prop_assert_eq!(intersect_sorted(&a, &b), naive_intersection(&a, &b));
        }
    }

    #[test]
    fn union_and_subset() {
        let a = AttributeSet::new(vec![3, 1]);
        let b = AttributeSet::new(vec![2, 3]);
        assert_eq!(a.union(&b).ids(), &[1, 2, 3]);
        assert!(a.is_subset(&a.union(&b)));
        assert!(!a.is_subset(&b));
    }

    #[test]
    fn unused_attribute_is_absent() {
        let mut dict = crate::graph::AttributeDictionary::new();
        dict.intern("used");
        dict.intern("unused");
        let g = AttributedGraph::from_parts(2, &[], vec![vec![0], vec![0]], dict).unwrap();
        let index = build_index(&g);
        assert!(index.posting(1).is_none());
        assert_eq!(index.attributes().collect::<Vec<_>>(), vec![0]);
        assert_eq!(index.support(&AttributeSet::new(vec![0, 1])), 0);
        assert_eq!(index.support(&AttributeSet::singleton(7)), 0);
    }
}
