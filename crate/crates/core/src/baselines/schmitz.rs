use crate::{Error, Hierarchy, Result, TagCorpus, TagId};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchmitzParams {
    /// x subsumes y when P(x|y) reaches this value and P(y|x) does not.
    pub t_subsume: f64,
    /// Minimum number of co-occurrences for a candidate edge.
    pub min_cooccurrence: u64,
}

impl Default for SchmitzParams {
    fn default() -> Self {
        Self {
            t_subsume: 0.8,
            min_cooccurrence: 10,
        }
    }
}

/// Subsumption forest. Candidate edges `x -> y` need P(x|y) >= t,
/// P(y|x) < t and Q_xy >= the co-occurrence floor; edges implied by longer
/// paths are pruned and each child keeps only its most probable parent.
pub fn extract_schmitz(corpus: &TagCorpus, params: &SchmitzParams) -> Result<Hierarchy> {
    if !(params.t_subsume > 0.0 && params.t_subsume <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "subsumption threshold {} outside (0, 1]",
            params.t_subsume
        )));
    }
    let network = crate::corpus::build_cooccurrence(corpus);
    let n = network.tag_count();
    let t = params.t_subsume;

    // P(x|y) >= t > P(y|x) implies Q_x > Q_y, so candidates form a DAG.
    let mut children: Vec<Vec<TagId>> = vec![Vec::new(); n];
    for (a, b, w) in network.links() {
        if w < params.min_cooccurrence {
            continue;
        }
        let p_a_given_b = w as f64 / network.frequency(b) as f64;
        let p_b_given_a = w as f64 / network.frequency(a) as f64;
        if p_a_given_b >= t && p_b_given_a < t {
            children[a.index()].push(b);
        } else if p_b_given_a >= t && p_a_given_b < t {
            children[b.index()].push(a);
        }
    }

    // Transitive reduction: drop x -> z when z is reachable through another child.
    let mut mark = vec![usize::MAX; n];
    let mut stack = Vec::new();
    let mut reduced: Vec<Vec<TagId>> = vec![Vec::new(); n];
    for x in 0..n {
        for &y in &children[x] {
            stack.extend_from_slice(&children[y.index()]);
        }
        while let Some(z) = stack.pop() {
            if mark[z.index()] != x {
                mark[z.index()] = x;
                stack.extend_from_slice(&children[z.index()]);
            }
        }
        reduced[x] = children[x].iter().copied().filter(|z| mark[z.index()] != x).collect();
    }

    let mut parent: Vec<Option<(TagId, u64)>> = vec![None; n];
    for (x, kids) in reduced.iter().enumerate() {
        let x = TagId::from(x);
        for &y in kids {
            let w = network.weight(x, y);
            let better = match parent[y.index()] {
                None => true,
                Some((p, pw)) => w > pw || (w == pw && x < p),
            };
            if better {
                parent[y.index()] = Some((x, w));
            }
        }
    }
    let parent: Vec<Option<TagId>> = parent.into_iter().map(|p| p.map(|(x, _)| x)).collect();
    Hierarchy::from_parents(corpus.vocab().clone(), &parent)
}

#[cfg(test)]
mod tests {
    use super::*;

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

    #[test]
    fn nested_corpus_without_transitive_edge() {
        let c = corpus(&[(&["a"], 100), (&["a", "b"], 100), (&["a", "b", "c"], 100)]);
        let h = extract_schmitz(&c, &SchmitzParams::default()).unwrap();
        assert_eq!(edges(&h), vec![("a".into(), "b".into()), ("b".into(), "c".into())]);
    }

    #[test]
    fn independent_tags_stay_isolated() {
        let c = corpus(&[(&["a"], 30), (&["b"], 30), (&["a", "b"], 12), (&["c"], 5)]);
        let h = extract_schmitz(&c, &SchmitzParams::default()).unwrap();
        assert_eq!(h.edge_count(), 0);
        assert_eq!(h.roots().len(), 3);
    }

    #[test]
    fn co_occurrence_floor_applies() {
        let c = corpus(&[(&["a"], 5), (&["a", "b"], 5)]);
        assert_eq!(extract_schmitz(&c, &SchmitzParams::default()).unwrap().edge_count(), 0);
        let loose = SchmitzParams {
            min_cooccurrence: 5,
            ..SchmitzParams::default()
        };
        assert_eq!(extract_schmitz(&c, &loose).unwrap().edge_count(), 1);
    }

    #[test]
    fn multiple_parents_resolved_by_probability() {
        // c is subsumed by both a (P=1) and b (P=0.9); neither a nor b subsumes the other.
        let c = corpus(&[(&["a", "b", "c"], 90), (&["a", "c"], 10), (&["a"], 200), (&["b"], 200)]);
        let h = extract_schmitz(&c, &SchmitzParams::default()).unwrap();
        assert_eq!(edges(&h), vec![("a".into(), "c".into())]);
    }
}
