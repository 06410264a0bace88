//! The two co-occurrence based extractors.
//!
//! Algorithm A thresholds incoming links per tag, picks parents by z-score
//! and stitches the resulting local trees together under a maximum-entropy
//! root. Algorithm B prunes links by z-score, orders tags by eigenvector
//! centrality and attaches them bottom-up to the candidate with the highest
//! z-score aggregated over the tag's already built branch.

mod algo_a;
mod algo_b;

pub use algo_a::{extract_a, AlgoAParams};
pub use algo_b::{extract_b, extract_b_with_centrality, AlgoBOutput, AlgoBParams};
