use std::collections::VecDeque;
use std::str::FromStr;

use crate::{CooccurrenceNetwork, Error, Hierarchy, Result, TagId, Vocabulary};

/// Centrality used to order tags before greedy insertion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HeymannCentrality {
    /// Weighted degree (total co-occurrence count) in the co-occurrence
    /// network, ties broken by plain degree.
    DegreeStrength,
    /// Closeness (Wasserman-Faust form) on hop distances in the thresholded
    /// similarity graph.
    Closeness,
}

impl FromStr for HeymannCentrality {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "degree-strength" => Ok(HeymannCentrality::DegreeStrength),
            "closeness" => Ok(HeymannCentrality::Closeness),
            other => Err(Error::InvalidParameter(format!(
                "unknown centrality {other:?} (degree-strength, closeness)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeymannParams {
    /// Minimum cosine similarity for a similarity-graph edge and for
    /// attaching a tag under an already inserted one.
    pub similarity_threshold: f64,
    pub centrality: HeymannCentrality,
}

impl Default for HeymannParams {
    fn default() -> Self {
        Self {
            similarity_threshold: 0.1,
            centrality: HeymannCentrality::DegreeStrength,
        }
    }
}

/// Output of the greedy insertion: a tree whose root is a synthetic tag.
#[derive(Debug, Clone)]
pub struct HeymannTree {
    pub tree: Hierarchy,
    pub synthetic_root: TagId,
}

impl HeymannTree {
    /// The forest over the real tags; children of the synthetic root become roots.
    pub fn without_synthetic_root(&self) -> Hierarchy {
        let n = self.tree.tag_count() - 1;
        let mut vocab = Vocabulary::new();
        for t in self.tree.vocab().ids().filter(|&t| t != self.synthetic_root) {
            vocab.intern(self.tree.vocab().name(t));
        }
        debug_assert_eq!(vocab.len(), n);
        let parent: Vec<Option<TagId>> = (0..n)
            .map(|i| self.tree.parent(TagId::from(i)).filter(|&p| p != self.synthetic_root))
            .collect();
        Hierarchy::from_parents(vocab, &parent).expect("subforest of a tree")
    }
}

/// Cosine similarity of the tags' object-incidence vectors, Q_ij / sqrt(Q_i Q_j).
fn cosine(network: &CooccurrenceNetwork, a: TagId, b: TagId, q_ab: u64) -> f64 {
    q_ab as f64 / ((network.frequency(a) as f64) * (network.frequency(b) as f64)).sqrt()
}

pub fn extract_heymann(network: &CooccurrenceNetwork, params: &HeymannParams) -> Result<HeymannTree> {
    if !(0.0..=1.0).contains(&params.similarity_threshold) {
        return Err(Error::InvalidParameter(format!(
            "similarity threshold {} outside [0, 1]",
            params.similarity_threshold
        )));
    }
    let n = network.tag_count();
    if n == 0 {
        return Err(Error::EmptyNetwork);
    }
    let threshold = params.similarity_threshold;
    let graph: Vec<Vec<(TagId, f64)>> = (0..n)
        .map(|i| {
            let a = TagId::from(i);
            network
                .neighbors(a)
                .map(|(b, w)| (b, cosine(network, a, b, w)))
                .filter(|&(_, s)| s >= threshold)
                .collect()
        })
        .collect();

    let (primary, secondary): (Vec<f64>, Vec<f64>) = match params.centrality {
        HeymannCentrality::DegreeStrength => (0..n)
            .map(|i| {
                let t = TagId::from(i);
                (network.strength(t) as f64, network.degree(t) as f64)
            })
            .unzip(),
        HeymannCentrality::Closeness => (closeness(&graph), vec![0.0; n]),

    };
    let mut order: Vec<TagId> = (0..n).map(TagId::from).collect();
    order.sort_by(|&a, &b| {
        primary[b.index()]
            .total_cmp(&primary[a.index()])
            .then(secondary[b.index()].total_cmp(&secondary[a.index()]))
            .then(network.frequency(b).cmp(&network.frequency(a)))
            .then(a.cmp(&b))
    });

    let mut vocab = network.vocab().clone();
    let mut root_name = String::from("<root>");
    while vocab.get(&root_name).is_some() {
        root_name.push('_');
    }
    let root = vocab.intern(&root_name);

    let mut inserted = vec![false; n];
    let mut parent: Vec<Option<TagId>> = vec![None; n + 1];
    for &t in &order {
        let best = network
            .neighbors(t)
            .filter(|(u, _)| inserted[u.index()])
            .map(|(u, w)| (u, w, cosine(network, t, u, w)))
            .max_by(|a, b| a.2.total_cmp(&b.2).then(a.1.cmp(&b.1)).then(b.0.cmp(&a.0)));
        parent[t.index()] = Some(match best {
            Some((u, _, s)) if s >= threshold => u,
            _ => root,
        });
        inserted[t.index()] = true;
    }
    let tree = Hierarchy::from_parents(vocab, &parent)?;
    Ok(HeymannTree {
        tree,
        synthetic_root: root,
    })
}

fn closeness(graph: &[Vec<(TagId, f64)>]) -> Vec<f64> {
    let n = graph.len();
    let mut dist = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    (0..n)
        .map(|s| {
            dist.iter_mut().for_each(|d| *d = usize::MAX);
            dist[s] = 0;
            queue.push_back(s);
            let (mut reached, mut total) = (0usize, 0usize);
            while let Some(u) = queue.pop_front() {
                reached += 1;
                total += dist[u];
                for &(v, _) in &graph[u] {
                    if dist[v.index()] == usize::MAX {
                        dist[v.index()] = dist[u] + 1;
                        queue.push_back(v.index());
                    }
                }
            }
            if total == 0 || n < 2 {
                0.0
            } else {
                let r = (reached - 1) as f64;
                (r / (n - 1) as f64) * (r / total as f64)
            }
        })
        .collect()
}
