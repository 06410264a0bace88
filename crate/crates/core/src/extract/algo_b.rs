use crate::stats::{eigenvector_centrality, CentralityVector};
use crate::{CooccurrenceNetwork, Error, Hierarchy, Result, TagId};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlgoBParams {
    /// Links with z-score at or below this value are pruned unless one tag
    /// covers at least half of the other's objects.
    pub z_threshold: f64,
    /// Power-iteration rounds for the centrality.
    pub iterations: usize,
    /// Hang secondary roots under the most central root.
    pub force_single_root: bool,
}

impl Default for AlgoBParams {
    fn default() -> Self {
        Self {
            z_threshold: 10.0,
            iterations: 100,
            force_single_root: false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct AlgoBOutput {
    pub hierarchy: Hierarchy,
    /// Centrality on the pruned network.
    pub centrality: CentralityVector,
    /// Position of each tag in the ascending centrality order (ties: lower
    /// frequency first, then higher id first). Parents always outrank children.
    pub rank: Vec<usize>,
    /// The pruned network the centrality was computed on.
    pub pruned: CooccurrenceNetwork,
}

pub fn extract_b(network: &CooccurrenceNetwork, params: &AlgoBParams) -> Result<Hierarchy> {
    extract_b_with_centrality(network, params).map(|out| out.hierarchy)
}

/// Runs algorithm B and returns the intermediate centrality ordering along
/// with the forest.
pub fn extract_b_with_centrality(
    network: &CooccurrenceNetwork,
    params: &AlgoBParams,
) -> Result<AlgoBOutput> {
    if params.z_threshold.is_nan() || params.z_threshold < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "z threshold {} must be non-negative",
            params.z_threshold
        )));
    }
    let n = network.tag_count();
    if n == 0 {
        return Err(Error::EmptyNetwork);
    }
    let threshold = params.z_threshold;
    let one_sided = |a: TagId, b: TagId, w: u64| {
        network.z_score_with(a, b, w) > threshold || 2 * w >= network.frequency(a)
    };
    let pruned = network.filter_links(|a, b, w| {
        network.z_score_with(a, b, w) > threshold
            || 2 * w >= network.frequency(a)
            || 2 * w >= network.frequency(b)
    });

    let centrality = eigenvector_centrality(&pruned, params.iterations);
    let mut order: Vec<TagId> = (0..n).map(TagId::from).collect();
    order.sort_by(|&a, &b| {
        centrality
            .score(a)
            .total_cmp(&centrality.score(b))
            .then(network.frequency(a).cmp(&network.frequency(b)))
            .then(b.cmp(&a))
    });
    let mut rank = vec![0; n];
    for (r, &t) in order.iter().enumerate() {
        rank[t.index()] = r;
    }

    let mut parent: Vec<Option<TagId>> = vec![None; n];
    let mut children: Vec<Vec<TagId>> = vec![Vec::new(); n];
    // Candidate slot per tag (index + 1), reset after each sweep step.
    let mut slot = vec![0usize; n];
    let mut candidates: Vec<Candidate> = Vec::new();
    let mut branch = Vec::new();

    for &tag in &order {
        candidates.clear();
        for (t, w) in pruned.neighbors(tag) {
            if rank[t.index()] > rank[tag.index()] {
                candidates.push(Candidate {
                    tag: t,
                    score: network.z_score_with(tag, t, w),
                    weight: w,
                    aggregates: one_sided(tag, t, w),
                });
                slot[t.index()] = candidates.len();
            }
        }
        if candidates.is_empty() {
            continue;
        }

        // Already attached descendants of `tag`.
        branch.clear();
        branch.extend_from_slice(&children[tag.index()]);
        let mut k = 0;
        while k < branch.len() {
            let d = branch[k];
            branch.extend_from_slice(&children[d.index()]);
            k += 1;
        }
        for &d in &branch {
            for (t, w) in network.neighbors(d) {
                let s = slot[t.index()];
                if s == 0 {
                    continue;
                }
                let cand = &mut candidates[s - 1];
                if cand.aggregates && one_sided(d, t, w) {
                    cand.score += network.z_score_with(d, t, w);
                }
            }
        }

        let best = candidates
            .iter()
            .max_by(|a, b| {
                a.score
                    .total_cmp(&b.score)
                    .then(a.weight.cmp(&b.weight))
                    .then(b.tag.cmp(&a.tag))
            })
            .expect("non-empty");
        parent[tag.index()] = Some(best.tag);
        children[best.tag.index()].push(tag);
        for c in &candidates {
            slot[c.tag.index()] = 0;
        }
    }

    if params.force_single_root {
        let top = *order.last().expect("non-empty");
        for (i, p) in parent.iter_mut().enumerate() {
            if p.is_none() && i != top.index() {
                *p = Some(top);
            }
        }
    }

    let hierarchy = Hierarchy::from_parents(network.vocab().clone(), &parent)?;
    Ok(AlgoBOutput {
        hierarchy,
        centrality,
        rank,
        pruned,
    })
}

struct Candidate {
    tag: TagId,
    score: f64,
    weight: u64,
    /// Whether the tag-candidate link passes the one-sided keep test, which
    /// gates contributions from descendants.
    aggregates: bool,
}
