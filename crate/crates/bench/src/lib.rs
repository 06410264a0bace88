//! Shared fixtures for the benchmarks.

use hiertag::benchmark::{generate, BenchmarkConfig};
use hiertag::corpus::build_cooccurrence;
use hiertag::hierarchy::binary_tree;
use hiertag::{CooccurrenceNetwork, Hierarchy, TagCorpus};

pub struct Fixture {
    pub exact: Hierarchy,
    pub corpus: TagCorpus,
    pub network: CooccurrenceNetwork,
}

/// A binary tree with `levels` levels and a default-regime corpus of
/// `objects` objects generated from it.
pub fn fixture(levels: u32, objects: usize, seed: u64) -> Fixture {
    let exact = binary_tree(levels);
    let config = BenchmarkConfig {
        object_count: objects,
        seed,
        ..BenchmarkConfig::default()
    };
    let corpus = generate(&exact, &config).expect("valid benchmark config");
    let network = build_cooccurrence(&corpus);
    Fixture { exact, corpus, network }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_covers_the_tree() {
        let f = fixture(4, 2000, 1);
        assert_eq!(f.exact.tag_count(), 15);
        assert_eq!(f.corpus.object_count(), 2000);
        assert!(f.network.link_count() > 0);
    }
}
