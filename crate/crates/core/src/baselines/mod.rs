//! Reference implementations of two earlier extraction methods, used as
//! comparison points: greedy centrality-ordered insertion over a cosine
//! similarity graph, and conditional-probability subsumption.

mod heymann;
mod schmitz;

pub use heymann::{extract_heymann, HeymannCentrality, HeymannParams, HeymannTree};
pub use schmitz::{extract_schmitz, SchmitzParams};
