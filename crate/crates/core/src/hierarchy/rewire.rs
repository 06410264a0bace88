use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;

use super::Hierarchy;
use crate::{Error, Result, TagId};

/// Order in which links are picked for rewiring. A link's position is the
/// depth of its child in the original tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RewireOrder {
    /// Deepest links first.
    LeafFirst,
    /// Uniformly random order.
    Random,
    /// Links just below the root first.
    TopFirst,
}

impl RewireOrder {
    pub fn as_str(self) -> &'static str {
        match self {
            RewireOrder::LeafFirst => "leaf-first",
            RewireOrder::Random => "random",
            RewireOrder::TopFirst => "top-first",
        }
    }
}

impl FromStr for RewireOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "leaf-first" => Ok(RewireOrder::LeafFirst),
            "random" => Ok(RewireOrder::Random),
            "top-first" => Ok(RewireOrder::TopFirst),
            other => Err(Error::InvalidParameter(format!(
                "unknown rewiring order {other:?} (leaf-first, random, top-first)"
            ))),
        }
    }
}

/// round(f * links), halves rounded up.
pub fn rewired_link_count(links: usize, fraction: f64) -> usize {
    ((fraction * links as f64) + 0.5).floor() as usize
}

/// Rewires `round(f * M)` links of a single-rooted tree.
///
/// Each picked link `p -> c` keeps its child and gets a new parent drawn
/// uniformly from the tags that are neither `c` nor currently below `c`, so
/// the result stays a single-rooted tree.
pub fn rewire<R: Rng + ?Sized>(
    h: &Hierarchy,
    fraction: f64,
    order: RewireOrder,
    rng: &mut R,
) -> Result<Hierarchy> {
    if !h.is_tree() {
        return Err(Error::NotATree("rewiring needs a single-rooted tree".into()));
    }
    if !(0.0..=1.0).contains(&fraction) {
        return Err(Error::InvalidParameter(format!("rewiring fraction {fraction} outside [0, 1]")));
    }
    let n = h.tag_count();
    let depth = h.depths();
    let mut links: Vec<TagId> = h.vocab().ids().filter(|&t| h.parent(t).is_some()).collect();
    match order {
        RewireOrder::TopFirst => links.sort_by_key(|t| (depth[t.index()], *t)),
        RewireOrder::LeafFirst => links.sort_by_key(|t| (std::cmp::Reverse(depth[t.index()]), *t)),
        RewireOrder::Random => links.shuffle(rng),
    }
    links.truncate(rewired_link_count(links.len(), fraction));

    let mut parent: Vec<Option<TagId>> = h.vocab().ids().map(|t| h.parent(t)).collect();
    let mut children: Vec<Vec<TagId>> = h.vocab().ids().map(|t| h.children(t).to_vec()).collect();
    let mut below = vec![0u32; n];
    let mut stamp = 0u32;
    let mut stack = Vec::new();
    let mut candidates = Vec::new();

    for c in links {
        stamp += 1;
        let mut subtree = 0;
        stack.push(c);
        while let Some(t) = stack.pop() {
            below[t.index()] = stamp;
            subtree += 1;
            stack.extend_from_slice(&children[t.index()]);
        }
        let new_parent = if 2 * subtree <= n {
            loop {
                let t = rng.random_range(0..n);
                if below[t] != stamp {
                    break TagId::from(t);
                }
            }
        } else {
            candidates.clear();
            candidates.extend((0..n).filter(|&t| below[t] != stamp).map(TagId::from));
            candidates[rng.random_range(0..candidates.len())]
        };
        let old = parent[c.index()].expect("rewired links have a parent");
        let siblings = &mut children[old.index()];
        let pos = siblings.iter().position(|&x| x == c).expect("child listed under its parent");
        siblings.remove(pos);
        children[new_parent.index()].push(c);
        parent[c.index()] = Some(new_parent);
    }
    Hierarchy::from_parents(h.vocab().clone(), &parent)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hierarchy::binary_tree;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zero_fraction_is_identity() {
        let t = binary_tree(6);
        for order in [RewireOrder::LeafFirst, RewireOrder::Random, RewireOrder::TopFirst] {
            let r = rewire(&t, 0.0, order, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
            assert_eq!(r, t);
        }
    }

    #[test]
    fn preserves_tree_shape_invariants() {
        let t = binary_tree(7);
        for f in [0.1, 0.5, 1.0] {
            for order in [RewireOrder::LeafFirst, RewireOrder::Random, RewireOrder::TopFirst] {
                let r = rewire(&t, f, order, &mut ChaCha8Rng::seed_from_u64(11)).unwrap();
                assert!(r.is_tree());
                assert_eq!(r.edge_count(), t.edge_count());
                assert_eq!(r.roots(), t.roots());
            }
        }
    }

    #[test]
    fn same_seed_same_result() {
        let t = binary_tree(8);
        let a = rewire(&t, 0.5, RewireOrder::TopFirst, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        let b = rewire(&t, 0.5, RewireOrder::TopFirst, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn leaf_first_touches_only_leaf_links_first() {
        // 3 levels: 6 links, 4 of them into leaves. f = 0.5 rewires 3 leaf links.
        let t = binary_tree(3);
        let r = rewire(&t, 0.5, RewireOrder::LeafFirst, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        assert_eq!(r.parent(TagId(1)), Some(TagId(0)));
        assert_eq!(r.parent(TagId(2)), Some(TagId(0)));
    }

    #[test]
    fn half_up_rounding() {
        assert_eq!(rewired_link_count(3, 0.5), 2);
        assert_eq!(rewired_link_count(1022, 0.2), 204);
        assert_eq!(rewired_link_count(10, 0.0), 0);
        assert_eq!(rewired_link_count(10, 1.0), 10);
    }

    #[test]
    fn rejects_non_trees() {
        let mut v = crate::Vocabulary::new();
        let (a, b, c) = (v.intern("a"), v.intern("b"), v.intern("c"));
        let dag = Hierarchy::from_edges(v, [(a, c), (b, c)]).unwrap();
        assert!(rewire(&dag, 0.5, RewireOrder::Random, &mut ChaCha8Rng::seed_from_u64(0)).is_err());
        assert_eq!("top-first".parse::<RewireOrder>().unwrap(), RewireOrder::TopFirst);
        assert!("sideways".parse::<RewireOrder>().is_err());
    }
}
