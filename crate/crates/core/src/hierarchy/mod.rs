//! Rooted DAGs of tags, descendant sets, edge-list I/O, generators and the
//! link-rewiring randomizer.

mod io;
mod rewire;

use std::collections::VecDeque;

use fixedbitset::FixedBitSet;

use crate::{Error, Result, TagId, Vocabulary};

pub use io::{load_hierarchy, parse_hierarchy, save_hierarchy};
pub use rewire::{rewire, rewired_link_count, RewireOrder};

/// A directed acyclic graph of tags with links pointing from parent to child.
///
/// Extractors produce trees or forests (at most one parent per tag); exact
/// hierarchies loaded from disk may have multi-parent tags.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hierarchy {
    vocab: Vocabulary,
    parents: Vec<Vec<TagId>>,
    children: Vec<Vec<TagId>>,
    edge_count: usize,
}

impl Hierarchy {
    /// Builds a hierarchy from `(parent, child)` links. Duplicate links are
    /// merged; self-links and longer cycles are rejected.
    pub fn from_edges<I>(vocab: Vocabulary, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (TagId, TagId)>,
    {
        let n = vocab.len();
        let mut parents = vec![Vec::new(); n];
        let mut children = vec![Vec::new(); n];
        for (p, c) in edges {
            if p.index() >= n || c.index() >= n {
                return Err(Error::InvalidParameter(format!("link ({p}, {c}) outside vocabulary")));
            }
            if p == c {
                return Err(Error::Cycle(vocab.name(p).to_owned()));
            }
            children[p.index()].push(c);
            parents[c.index()].push(p);
        }
        let mut edge_count = 0;
        for list in children.iter_mut().chain(parents.iter_mut()) {
            list.sort_unstable();
            list.dedup();
        }
        for list in &children {
            edge_count += list.len();
        }
        let h = Self {
            vocab,
            parents,
            children,
            edge_count,
        };
        if let Some(t) = h.find_cycle() {
            return Err(Error::Cycle(h.vocab.name(t).to_owned()));
        }
        Ok(h)
    }

    /// Builds a forest from a parent array.
    pub fn from_parents(vocab: Vocabulary, parent: &[Option<TagId>]) -> Result<Self> {
        if parent.len() != vocab.len() {
            return Err(Error::InvalidParameter(format!(
                "parent array has {} entries for {} tags",
                parent.len(),
                vocab.len()
            )));
        }
        let edges = parent
            .iter()
            .enumerate()
            .filter_map(|(c, p)| p.map(|p| (p, TagId::from(c))));
        Self::from_edges(vocab, edges)
    }

    /// Tags left over after Kahn's algorithm sit on or below a cycle.
    fn find_cycle(&self) -> Option<TagId> {
        let order = self.kahn_order();
        if order.len() == self.tag_count() {
            return None;
        }
        let mut placed = vec![false; self.tag_count()];
        for t in order {
            placed[t.index()] = true;
        }
        // Walk parents among unplaced tags until one repeats; it lies on a cycle.
        let mut t = TagId::from(placed.iter().position(|&p| !p)?);
        let mut seen = vec![false; self.tag_count()];
        while !seen[t.index()] {
            seen[t.index()] = true;
            t = *self.parents[t.index()].iter().find(|p| !placed[p.index()])?;
        }
        Some(t)
    }

    fn kahn_order(&self) -> Vec<TagId> {
        let mut indegree: Vec<usize> = self.parents.iter().map(Vec::len).collect();
        let mut queue: VecDeque<TagId> = self.vocab.ids().filter(|t| indegree[t.index()] == 0).collect();
        let mut order = Vec::with_capacity(self.tag_count());
        while let Some(t) = queue.pop_front() {
            order.push(t);
            for &c in &self.children[t.index()] {
                indegree[c.index()] -= 1;
                if indegree[c.index()] == 0 {
                    queue.push_back(c);
                }
            }
        }
        order
    }

    /// Parents before children.
    pub fn topological_order(&self) -> Vec<TagId> {
        self.kahn_order()
    }

    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    /// N.
    pub fn tag_count(&self) -> usize {
        self.vocab.len()
    }

    /// M, the number of links.
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn parents(&self, tag: TagId) -> &[TagId] {
        &self.parents[tag.index()]
    }

    /// The parent of a tag in a tree or forest (first parent in a DAG).
    pub fn parent(&self, tag: TagId) -> Option<TagId> {
        self.parents[tag.index()].first().copied()
    }

    pub fn children(&self, tag: TagId) -> &[TagId] {
        &self.children[tag.index()]
    }

    pub fn has_edge(&self, parent: TagId, child: TagId) -> bool {
        self.children[parent.index()].binary_search(&child).is_ok()
    }

    /// Links as `(parent, child)`, ordered by parent then child id.
    pub fn edges(&self) -> impl Iterator<Item = (TagId, TagId)> + '_ {
        self.children
            .iter()
            .enumerate()
            .flat_map(|(p, cs)| cs.iter().map(move |&c| (TagId::from(p), c)))
    }

    pub fn roots(&self) -> Vec<TagId> {
        self.vocab
            .ids()
            .filter(|t| self.parents[t.index()].is_empty())
            .collect()
    }

    /// At most one parent per tag.
    pub fn is_forest(&self) -> bool {
        self.parents.iter().all(|p| p.len() <= 1)
    }

    /// A forest with exactly one root.
    pub fn is_tree(&self) -> bool {
        self.is_forest() && self.tag_count() > 0 && self.edge_count + 1 == self.tag_count()
    }

    /// Shortest distance from any root, per tag.
    pub fn depths(&self) -> Vec<usize> {
        let mut depth = vec![usize::MAX; self.tag_count()];
        let mut queue = VecDeque::new();
        for r in self.roots() {
            depth[r.index()] = 0;
            queue.push_back(r);
        }
        while let Some(t) = queue.pop_front() {
            for &c in &self.children[t.index()] {
                if depth[c.index()] == usize::MAX {
                    depth[c.index()] = depth[t.index()] + 1;
                    queue.push_back(c);
                }
            }
        }
        depth
    }

    /// Undirected neighbour lists (parents and children).
    pub fn undirected_neighbors(&self) -> Vec<Vec<TagId>> {
        (0..self.tag_count())
            .map(|i| {
                let mut v = self.parents[i].clone();
                v.extend_from_slice(&self.children[i]);
                v
            })
            .collect()
    }

    pub fn descendant_table(&self) -> DescendantTable {
        DescendantTable::new(self)
    }

    /// Re-expresses this hierarchy over `vocab`, matching tags by name. Tags
    /// of `vocab` absent here become isolated; tags present here but missing
    /// from `vocab` are an error.
    pub fn aligned_to(&self, vocab: &Vocabulary) -> Result<Hierarchy> {
        let unknown: Vec<&str> = self.vocab.names().filter(|n| vocab.get(n).is_none()).collect();
        if !unknown.is_empty() {
            return Err(Error::TagMismatch(format!(
                "not in the reference tag set: {}",
                preview(&unknown)
            )));
        }
        let map: Vec<TagId> = self.vocab.names().map(|n| vocab.get(n).unwrap()).collect();
        Hierarchy::from_edges(
            vocab.clone(),
            self.edges().map(|(p, c)| (map[p.index()], map[c.index()])),
        )
    }

    /// Errors unless both hierarchies cover the same tag names; returns
    /// `other` re-indexed onto this hierarchy's identifiers.
    pub fn same_tags(&self, other: &Hierarchy) -> Result<Hierarchy> {
        let missing: Vec<&str> = self.vocab.names().filter(|n| other.vocab.get(n).is_none()).collect();
        let extra: Vec<&str> = other.vocab.names().filter(|n| self.vocab.get(n).is_none()).collect();
        if !missing.is_empty() || !extra.is_empty() {
            let mut parts = Vec::new();
            if !missing.is_empty() {
                parts.push(format!("missing from reconstruction: {}", preview(&missing)));
            }
            if !extra.is_empty() {
                parts.push(format!("absent from exact hierarchy: {}", preview(&extra)));
            }
            return Err(Error::TagMismatch(parts.join("; ")));
        }
        if self.vocab == other.vocab {
            return Ok(other.clone());
        }
        other.aligned_to(&self.vocab)
    }
}

fn preview(names: &[&str]) -> String {
    const SHOWN: usize = 10;
    let mut s = names.iter().take(SHOWN).map(|n| format!("{n:?}")).collect::<Vec<_>>().join(", ");
    if names.len() > SHOWN {
        s.push_str(&format!(" and {} more", names.len() - SHOWN));
    }
    s
}

/// Per-tag descendant sets D(i), excluding i itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DescendantTable {
    sets: Vec<FixedBitSet>,
}

impl DescendantTable {
    pub fn new(h: &Hierarchy) -> Self {
        let n = h.tag_count();
        let mut sets = vec![FixedBitSet::with_capacity(n); n];
        for &t in h.topological_order().iter().rev() {
            let mut acc = FixedBitSet::with_capacity(n);
            for &c in h.children(t) {
                acc.insert(c.index());
                acc.union_with(&sets[c.index()]);
            }
            sets[t.index()] = acc;
        }
        Self { sets }
    }

    pub fn tag_count(&self) -> usize {
        self.sets.len()
    }

    pub fn set(&self, tag: TagId) -> &FixedBitSet {
        &self.sets[tag.index()]
    }

    /// |D(i)|.
    pub fn size(&self, tag: TagId) -> usize {
        self.sets[tag.index()].count_ones(..)
    }

    /// Whether a directed path leads from `ancestor` to `tag`.
    pub fn is_descendant(&self, ancestor: TagId, tag: TagId) -> bool {
        self.sets[ancestor.index()].contains(tag.index())
    }

    pub fn descendants(&self, tag: TagId) -> impl Iterator<Item = TagId> + '_ {
        self.sets[tag.index()].ones().map(TagId::from)
    }

    /// |D_self(i) ∩ D_other(i)|.
    pub fn intersection_size(&self, other: &DescendantTable, tag: TagId) -> usize {
        self.sets[tag.index()].intersection_count(&other.sets[tag.index()])
    }
}

/// Full binary tree with `2^levels - 1` tags named by heap index (`0` is the root).
pub fn binary_tree(levels: u32) -> Hierarchy {
    assert!(levels >= 1, "a binary tree needs at least one level");
    let n = (1usize << levels) - 1;
    let edges = (1..n).map(|c| (TagId::from((c - 1) / 2), TagId::from(c)));
    Hierarchy::from_edges(Vocabulary::numbered(n), edges).expect("heap layout is acyclic")
}
