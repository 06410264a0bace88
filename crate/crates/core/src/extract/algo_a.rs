use std::cmp::Ordering;

use crate::stats::in_link_entropy;
use crate::{CooccurrenceNetwork, Error, Hierarchy, Result, TagId};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlgoAParams {
    /// Incoming links weaker than `omega` times the strongest incoming link
    /// of a tag are dropped.
    pub omega: f64,
}

impl Default for AlgoAParams {
    fn default() -> Self {
        Self { omega: 0.4 }
    }
}

/// Runs algorithm A. The result is always a single-rooted tree over every
/// tag of the network.
pub fn extract_a(network: &CooccurrenceNetwork, params: &AlgoAParams) -> Result<Hierarchy> {
    if !(0.0..=1.0).contains(&params.omega) {
        return Err(Error::InvalidParameter(format!("omega {} outside [0, 1]", params.omega)));
    }
    let n = network.tag_count();
    if n == 0 {
        return Err(Error::EmptyNetwork);
    }

    // Incoming links surviving the per-tag threshold, sorted by source id.
    let strong: Vec<Vec<(TagId, u64)>> = (0..n)
        .map(|i| {
            let tag = TagId::from(i);
            let max = network.neighbors(tag).map(|(_, w)| w).max().unwrap_or(0);
            let cut = params.omega * max as f64;
            network.neighbors(tag).filter(|&(_, w)| w as f64 >= cut).collect()
        })
        .collect();
    let survived = |from: TagId, to: TagId| {
        strong[to.index()].binary_search_by_key(&from, |&(t, _)| t).is_ok()
    };

    // Local parents: best z-score among strong in-neighbours, skipping
    // mutual (sibling-like) pairs.
    let mut parent: Vec<Option<TagId>> = vec![None; n];
    let mut ranked: Vec<(TagId, f64)> = Vec::new();
    for (i, slot) in parent.iter_mut().enumerate() {
        let tag = TagId::from(i);
        ranked.clear();
        ranked.extend(strong[i].iter().map(|&(j, w)| (j, network.z_score_with(tag, j, w))));
        ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        *slot = ranked.iter().map(|&(j, _)| j).find(|&j| !survived(tag, j));
    }
    break_parent_cycles(network, &mut parent);

    let component = components(&parent);
    let roots: Vec<TagId> = (0..n).filter(|&i| parent[i].is_none()).map(TagId::from).collect();
    if roots.len() > 1 {
        assemble(network, &strong, &mut parent, &component, &roots)?;
    }
    Hierarchy::from_parents(network.vocab().clone(), &parent)
}

/// Parent pointers can close a loop when parenthood is not transitive. The
/// most frequent tag of each loop (lowest id on ties) becomes a local root.
fn break_parent_cycles(network: &CooccurrenceNetwork, parent: &mut [Option<TagId>]) {
    const UNSEEN: u8 = 0;
    const ACTIVE: u8 = 1;
    const DONE: u8 = 2;
    let n = parent.len();
    let mut state = vec![UNSEEN; n];
    let mut path = Vec::new();
    for start in 0..n {
        if state[start] != UNSEEN {
            continue;
        }
        path.clear();
        let mut cur = Some(TagId::from(start));
        while let Some(t) = cur {
            match state[t.index()] {
                UNSEEN => {
                    state[t.index()] = ACTIVE;
                    path.push(t);
                    cur = parent[t.index()];
                }
                ACTIVE => {
                    let at = path.iter().position(|&x| x == t).expect("active tags are on the path");
                    let head = *path[at..]
                        .iter()
                        .max_by(|&&a, &&b| {
                            network.frequency(a).cmp(&network.frequency(b)).then(b.cmp(&a))
                        })
                        .expect("non-empty loop");
                    parent[head.index()] = None;
                    break;
                }
                _ => break,
            }
        }
        for &t in &path {
            state[t.index()] = DONE;
        }
    }
}

/// Root reached by following parent pointers, per tag.
fn components(parent: &[Option<TagId>]) -> Vec<TagId> {
    let n = parent.len();
    let mut root: Vec<Option<TagId>> = vec![None; n];
    let mut path = Vec::new();
    for start in 0..n {
        let mut t = TagId::from(start);
        path.clear();
        let r = loop {
            if let Some(r) = root[t.index()] {
                break r;
            }
            path.push(t);
            match parent[t.index()] {
                Some(p) => t = p,
                None => break t,
            }
        };
        for &x in &path {
            root[x.index()] = Some(r);
        }
    }
    root.into_iter().map(|r| r.expect("every tag resolved")).collect()
}

struct RootInfo {
    entropy: f64,
    incoming: u64,
}

fn assemble(
    network: &CooccurrenceNetwork,
    strong: &[Vec<(TagId, u64)>],
    parent: &mut [Option<TagId>],
    component: &[TagId],
    roots: &[TagId],
) -> Result<()> {
    let n = parent.len();
    let mut info: Vec<Option<RootInfo>> = (0..n).map(|_| None).collect();
    for &r in roots {
        let weights: Vec<f64> = strong[r.index()].iter().map(|&(_, w)| w as f64).collect();
        info[r.index()] = Some(RootInfo {
            entropy: in_link_entropy(&weights)?,
            incoming: strong[r.index()].iter().map(|&(_, w)| w).sum(),
        });
    }
    // Descending entropy, then descending incoming weight, then ascending id.
    let order_key = |a: &TagId, b: &TagId| -> Ordering {
        let (ia, ib) = (info[a.index()].as_ref().unwrap(), info[b.index()].as_ref().unwrap());
        ib.entropy
            .total_cmp(&ia.entropy)
            .then(ib.incoming.cmp(&ia.incoming))
            .then(a.cmp(b))
    };
    let mut by_entropy = roots.to_vec();
    by_entropy.sort_by(order_key);
    let global = by_entropy[0];

    // Co-occurring partners, strongest first.
    let partners = |tag: TagId| {
        let mut p: Vec<(TagId, u64)> = network.neighbors(tag).collect();
        p.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        p
    };

    let mut suggested: Vec<Option<TagId>> = vec![None; n];
    for &r in &by_entropy[1..] {
        let target = partners(r)
            .into_iter()
            .map(|(t, _)| t)
            .find(|t| component[t.index()] != r)
            .unwrap_or(global);
        suggested[r.index()] = Some(target);
    }

    // Loops among components: follow root -> component of suggested parent.
    let next = |r: TagId, suggested: &[Option<TagId>]| suggested[r.index()].map(|t| component[t.index()]);
    let mut state = vec![0u8; n];
    let mut looped = Vec::new();
    let mut path = Vec::new();
    for &start in roots {
        if state[start.index()] != 0 {
            continue;
        }
        path.clear();
        let mut cur = Some(start);
        while let Some(r) = cur {
            match state[r.index()] {
                0 => {
                    state[r.index()] = 1;
                    path.push(r);
                    cur = next(r, &suggested);
                }
                1 => {
                    let at = path.iter().position(|&x| x == r).expect("on path");
                    looped.extend_from_slice(&path[at..]);
                    break;
                }
                _ => break,
            }
        }
        for &r in &path {
            state[r.index()] = 2;
        }
    }
    for &r in &looped {
        suggested[r.index()] = None;
    }

    // Re-attach loop members, highest entropy first, to the strongest partner
    // that is not currently below them.
    looped.sort_by(order_key);
    for &r in &looped {
        let up = |t: TagId, suggested: &[Option<TagId>]| parent[t.index()].or(suggested[t.index()]);
        let is_below = |mut t: TagId, suggested: &[Option<TagId>]| loop {
            if t == r {
                return true;
            }
            match up(t, suggested) {
                Some(p) => t = p,
                None => return false,
            }
        };
        let target = partners(r)
            .into_iter()
            .map(|(t, _)| t)
            .find(|&t| !is_below(t, &suggested))
            .unwrap_or(global);
        suggested[r.index()] = Some(target);
    }

    for &r in roots {
        if r != global {
            parent[r.index()] = suggested[r.index()];
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::build_cooccurrence;
    use crate::TagCorpus;

    fn corpus(groups: &[(&[&str], usize)]) -> TagCorpus {
        let objects = groups
            .iter()
            .flat_map(|(tags, k)| std::iter::repeat_n(tags.to_vec(), *k));
        TagCorpus::from_named(objects).unwrap()
    }

    fn edges(h: &Hierarchy) -> Vec<(String, String)> {
        let mut e: Vec<_> = h
            .edges()
            .map(|(p, c)| (h.vocab().name(p).to_owned(), h.vocab().name(c).to_owned()))
            .collect();
        e.sort();
        e
    }

    fn pair(p: &str, c: &str) -> (String, String) {
        (p.to_owned(), c.to_owned())
    }

    #[test]
    fn single_tag() {
        let net = build_cooccurrence(&corpus(&[(&["a"], 3)]));
        let h = extract_a(&net, &AlgoAParams::default()).unwrap();
        assert_eq!(h.tag_count(), 1);
        assert_eq!(h.edge_count(), 0);
        assert!(h.is_tree());
    }

    #[test]
    fn rarer_tag_hangs_below() {
        let net = build_cooccurrence(&corpus(&[(&["a"], 10), (&["a", "b"], 20)]));
        let h = extract_a(&net, &AlgoAParams::default()).unwrap();
        assert_eq!(edges(&h), vec![pair("a", "b")]);
    }

    #[test]
    fn three_tag_star() {
        let net = build_cooccurrence(&corpus(&[
            (&["a", "b"], 50),
            (&["a", "c"], 50),
            (&["b", "c"], 2),
            (&["a"], 30),
        ]));
        let h = extract_a(&net, &AlgoAParams::default()).unwrap();
        assert_eq!(edges(&h), vec![pair("a", "b"), pair("a", "c")]);
    }

    #[test]
    fn disconnected_tags_join_the_global_root() {
        let net = build_cooccurrence(&corpus(&[(&["a", "b"], 5), (&["a"], 5), (&["x"], 3)]));
        let h = extract_a(&net, &AlgoAParams::default()).unwrap();
        assert!(h.is_tree());
        assert_eq!(h.tag_count(), 3);
    }

    #[test]
    fn loops_between_components_are_repaired() {
        // Two disjoint pairs bridged weakly; each local root's strongest
        // outside partner lies in the other component.
        let net = build_cooccurrence(&corpus(&[
            (&["a", "b"], 40),
            (&["b"], 40),
            (&["c", "d"], 40),
            (&["d"], 40),
            (&["b", "d"], 3),
            (&["a", "c"], 1),
        ]));
        let h = extract_a(&net, &AlgoAParams::default()).unwrap();
        assert!(h.is_tree());
        assert_eq!(h.edge_count(), 3);
    }

    #[test]
    fn rejects_bad_omega() {
        let net = build_cooccurrence(&corpus(&[(&["a", "b"], 1)]));
        assert!(extract_a(&net, &AlgoAParams { omega: 1.5 }).is_err());
    }

    #[test]
    fn parent_cycles_are_broken_at_most_frequent_tag() {
        let net = build_cooccurrence(&corpus(&[(&["a", "b", "c"], 1), (&["a"], 2), (&["b"], 1)]));
        let mut parent = vec![Some(TagId(1)), Some(TagId(2)), Some(TagId(0))];
        break_parent_cycles(&net, &mut parent);
        assert_eq!(parent, vec![None, Some(TagId(2)), Some(TagId(0))]);
    }
}
