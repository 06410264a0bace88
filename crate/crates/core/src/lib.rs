//! Extraction of directed tag hierarchies from tag co-occurrence data.
//!
//! The crate is organised around the pipeline it supports:
//!
//! * [`corpus`] loads tagged objects and counts pairwise co-occurrences,
//! * [`stats`] holds the numerical kernels (hypergeometric z-score, entropy,
//!   eigenvector centrality),
//! * [`extract`] and [`baselines`] turn a co-occurrence network into a
//!   [`Hierarchy`],
//! * [`metrics`] compares a reconstructed hierarchy with a ground truth,
//! * [`benchmark`] generates synthetic corpora from a known hierarchy.
//!
//! ```
//! use hiertag::{benchmark, corpus, extract, hierarchy, metrics};
//!
//! let exact = hierarchy::binary_tree(4);
//! let config = benchmark::BenchmarkConfig {
//!     object_count: 20_000,
//!     ..benchmark::BenchmarkConfig::default()
//! };
//! let corpus = benchmark::generate(&exact, &config).unwrap();
//! let network = corpus::build_cooccurrence(&corpus);
//! let recon = extract::extract_b(&network, &extract::AlgoBParams::default()).unwrap();
//! let recon = recon.aligned_to(exact.vocab()).unwrap();
//! let ratios = metrics::link_ratios(&exact, &recon).unwrap();
//! assert!(ratios.r_a >= ratios.r_e);
//! ```

pub mod baselines;
pub mod benchmark;
pub mod corpus;
mod error;
pub mod extract;
pub mod hierarchy;
pub mod metrics;
pub mod stats;
mod vocab;

pub use corpus::{CooccurrenceNetwork, TagCorpus};
pub use error::{Error, Result};
pub use hierarchy::{DescendantTable, Hierarchy};
pub use metrics::{DecayCurve, LinkRatios, QualityReport};
pub use vocab::{TagId, Vocabulary};
