use crate::{DescendantTable, Error, Hierarchy, Result, TagId};

fn plogp(p: f64) -> f64 {
    if p > 0.0 {
        p * p.ln()
    } else {
        0.0
    }
}

/// Normalized mutual information between the descendant sets of two
/// hierarchies over the same tags.
///
/// With p(i) = |D(i)| / (N - 1) and p_er(i) = |D_e(i) ∩ D_r(i)| / (N - 1),
///
/// ```text
/// I = -2 Σ p_er ln(p_er / (p_e p_r)) / (Σ p_e ln p_e + Σ p_r ln p_r)
/// ```
///
/// Identical descendant tables give exactly 1; negative values clamp to 0.
pub fn nmi(exact: &Hierarchy, recon: &Hierarchy) -> Result<f64> {
    let recon = exact.same_tags(recon)?;
    let n = exact.tag_count();
    if n < 2 {
        return Err(Error::InvalidParameter("NMI needs at least two tags".into()));
    }
    let de = exact.descendant_table();
    let dr = recon.descendant_table();
    if de == dr && de.descendants_total() > 0 {
        return Ok(1.0);
    }
    let scale = (n - 1) as f64;
    let mut num = 0.0;
    let mut den = 0.0;
    for i in 0..n {
        let t = TagId::from(i);
        let pe = de.size(t) as f64 / scale;
        let pr = dr.size(t) as f64 / scale;
        let per = de.intersection_size(&dr, t) as f64 / scale;
        if per > 0.0 {
            num += per * (per / (pe * pr)).ln();
        }
        den += plogp(pe) + plogp(pr);
    }
    if den == 0.0 {
        return Err(Error::UndefinedNmi);
    }
    Ok((-2.0 * num / den).max(0.0))
}

/// The same quantity through the community-comparison form: each tag
/// labels the community of its descendants, communities are matched by
/// label, and the universe is the N - 1 non-self tags.
pub fn partition_nmi(exact: &Hierarchy, recon: &Hierarchy) -> Result<f64> {
    let recon = exact.same_tags(recon)?;
    let n = exact.tag_count();
    if n < 2 {
        return Err(Error::InvalidParameter("NMI needs at least two tags".into()));
    }
    let ca = communities(exact);
    let cb = communities(&recon);
    if ca == cb && ca.iter().any(|c| !c.is_empty()) {
        return Ok(1.0);
    }
    let total = (n - 1) as f64;
    let mut num = 0.0;
    let mut den = 0.0;
    for (a, b) in ca.iter().zip(&cb) {
        let (na, nb) = (a.len() as f64, b.len() as f64);
        let nab = sorted_overlap(a, b) as f64;
        if nab > 0.0 {
            num += nab * (nab * total / (na * nb)).ln();
        }
        if na > 0.0 {
            den += na * (na / total).ln();
        }
        if nb > 0.0 {
            den += nb * (nb / total).ln();
        }
    }
    if den == 0.0 {
        return Err(Error::UndefinedNmi);
    }
    Ok((-2.0 * num / den).max(0.0))
}

/// Sorted member lists, gathered by walking children from each tag.
fn communities(h: &Hierarchy) -> Vec<Vec<u32>> {
    let n = h.tag_count();
    let mut seen = vec![usize::MAX; n];
    let mut stack = Vec::new();
    (0..n)
        .map(|i| {
            let mut members = Vec::new();
            stack.extend_from_slice(h.children(TagId::from(i)));
            while let Some(t) = stack.pop() {
                if seen[t.index()] != i {
                    seen[t.index()] = i;
                    members.push(t.0);
                    stack.extend_from_slice(h.children(t));
                }
            }
            members.sort_unstable();
            members
        })
        .collect()
}

fn sorted_overlap(a: &[u32], b: &[u32]) -> usize {
    let (mut i, mut j, mut k) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                k += 1;
                i += 1;
                j += 1;
            }
        }
    }
    k
}

impl DescendantTable {
    fn descendants_total(&self) -> usize {
        (0..self.tag_count()).map(|i| self.size(TagId::from(i))).sum()
    }
}
