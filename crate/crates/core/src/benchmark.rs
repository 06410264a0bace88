//! Synthetic tagged corpora generated from a known hierarchy.
//!
//! Each object gets a first tag drawn from a frequency profile. Every further
//! tag is, with probability `p_rw`, the end point of an undirected random walk
//! started at the first tag, and otherwise another independent profile draw.

use std::str::FromStr;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Poisson;
use rayon::prelude::*;
use rustc_hash::FxHashMap;

use crate::{Error, Hierarchy, Result, TagCorpus, TagId, Vocabulary};

/// Distribution of the number of tag draws per object.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TagsPerObject {
    Fixed(usize),
    /// Poisson with the given mean, redrawn until at least 1.
    Poisson(f64),
}

impl FromStr for TagsPerObject {
    type Err = Error;

    /// `fixed:K` or `poisson:MEAN`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("tags per object {s:?} (fixed:K or poisson:MEAN)"));
        match s.split_once(':') {
            Some(("fixed", k)) => Ok(TagsPerObject::Fixed(k.parse().map_err(|_| bad())?)),
            Some(("poisson", m)) => Ok(TagsPerObject::Poisson(m.parse().map_err(|_| bad())?)),
            _ => Err(bad()),
        }
    }
}

/// Uniform integer walk length in `[min, max]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WalkLength {
    pub min: usize,
    pub max: usize,
}

impl FromStr for WalkLength {
    type Err = Error;

    /// `uniform:A:B`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("walk length {s:?} (uniform:A:B)"));
        let mut parts = s.split(':');
        if parts.next() != Some("uniform") {
            return Err(bad());
        }
        let min = parts.next().and_then(|x| x.parse().ok()).ok_or_else(bad)?;
        let max = parts.next().and_then(|x| x.parse().ok()).ok_or_else(bad)?;
        if parts.next().is_some() {
            return Err(bad());
        }
        Ok(WalkLength { min, max })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FrequencyProfile {
    /// Weight d_max - depth + 1: the root is the most frequent first tag.
    LinearDepth,
    /// Weights rank^(-exponent) assigned to tags in a random order, independent
    /// of depth.
    PowerLaw(f64),
    /// Per-tag weights by name.
    Explicit(Vec<(String, f64)>),
}

impl FromStr for FrequencyProfile {
    type Err = Error;

    /// `linear-depth` or `power-law:EXPONENT`. Explicit tables are built
    /// by the caller.
    fn from_str(s: &str) -> Result<Self> {
        match s.split_once(':') {
            None if s == "linear-depth" => Ok(FrequencyProfile::LinearDepth),
            Some(("power-law", e)) => e
                .parse()
                .map(FrequencyProfile::PowerLaw)
                .map_err(|_| Error::InvalidParameter(format!("power-law exponent {e:?}"))),
            _ => Err(Error::InvalidParameter(format!(
                "unknown frequency profile {s:?} (linear-depth, power-law:EXPONENT)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkConfig {
    pub object_count: usize,
    pub tags_per_object: TagsPerObject,
    pub p_rw: f64,
    pub walk_length: WalkLength,
    pub frequency_profile: FrequencyProfile,
    pub seed: u64,
}

impl Default for BenchmarkConfig {
    fn default() -> Self {
        Self {
            object_count: 100_000,
            tags_per_object: TagsPerObject::Poisson(3.0),
            p_rw: 0.5,
            walk_length: WalkLength { min: 1, max: 3 },
            frequency_profile: FrequencyProfile::LinearDepth,
            seed: 0,
        }
    }
}

impl BenchmarkConfig {
    fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if self.object_count == 0 {
            return bad("object count must be at least 1".into());
        }
        if !(0.0..=1.0).contains(&self.p_rw) {
            return bad(format!("p_RW {} outside [0, 1]", self.p_rw));
        }
        if self.walk_length.min == 0 || self.walk_length.min > self.walk_length.max {
            return bad(format!(
                "walk length range [{}, {}] must satisfy 1 <= min <= max",
                self.walk_length.min, self.walk_length.max
            ));
        }
        match self.tags_per_object {
            TagsPerObject::Fixed(0) => bad("fixed tags per object must be at least 1".into()),
            TagsPerObject::Poisson(m) if !(m > 0.0 && m.is_finite()) => {
                bad(format!("Poisson mean {m} must be positive"))
            }
            _ => Ok(()),
        }
    }
}

/// Stream reserved for shuffling power-law ranks; objects use streams from 0.
const PROFILE_STREAM: u64 = u64::MAX;

/// Unnormalized first-tag weights, indexed by tag id.
pub fn frequency_profile(h: &Hierarchy, profile: &FrequencyProfile, seed: u64) -> Result<Vec<f64>> {
    let n = h.tag_count();
    match profile {
        FrequencyProfile::LinearDepth => {
            let depth = h.depths();
            let d_max = depth.iter().copied().max().unwrap_or(0);
            Ok(depth.iter().map(|&d| (d_max - d + 1) as f64).collect())
        }
        FrequencyProfile::PowerLaw(exponent) => {
            if !exponent.is_finite() || *exponent < 0.0 {
                return Err(Error::InvalidParameter(format!("power-law exponent {exponent}")));
            }
            let mut rank: Vec<usize> = (1..=n).collect();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(PROFILE_STREAM);
            rank.shuffle(&mut rng);
            Ok(rank.iter().map(|&r| (r as f64).powf(-exponent)).collect())
        }
        FrequencyProfile::Explicit(table) => {
            let mut weights = vec![f64::NAN; n];
            for (name, w) in table {
                let t = h.vocab().get(name).ok_or_else(|| {
                    Error::InvalidParameter(format!("profile tag {name:?} is not in the hierarchy"))
                })?;
                if !(*w > 0.0 && w.is_finite()) {
                    return Err(Error::NonPositiveWeight(*w));
                }
                weights[t.index()] = *w;
            }
            if let Some(i) = weights.iter().position(|w| w.is_nan()) {
                return Err(Error::InvalidParameter(format!(
                    "profile has no weight for tag {:?}",
                    h.vocab().name(TagId::from(i))
                )));
            }
            Ok(weights)
        }
    }
}

/// Generates `config.object_count` objects. Tags are interned in order of
/// first appearance; hierarchy tags never drawn are absent from the corpus.
pub fn generate(h: &Hierarchy, config: &BenchmarkConfig) -> Result<TagCorpus> {
    config.validate()?;
    if h.tag_count() == 0 {
        return Err(Error::InvalidParameter("hierarchy has no tags".into()));
    }
    let weights = frequency_profile(h, &config.frequency_profile, config.seed)?;
    let first = WeightedIndex::new(&weights)
        .map_err(|e| Error::InvalidParameter(format!("frequency profile: {e}")))?;
    let poisson = match config.tags_per_object {
        TagsPerObject::Poisson(m) => Some(Poisson::new(m).expect("validated mean")),
        TagsPerObject::Fixed(_) => None,
    };
    let neighbors = h.undirected_neighbors();

    let objects: Vec<Vec<TagId>> = (0..config.object_count)
        .into_par_iter()
        .map(|index| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(index as u64);
            let n_t = match (config.tags_per_object, &poisson) {
                (TagsPerObject::Fixed(k), _) => k,
                (_, Some(p)) => loop {
                    let k = p.sample(&mut rng) as usize;
                    if k >= 1 {
                        break k;
                    }
                },
                _ => unreachable!(),
            };
            let t1 = TagId::from(first.sample(&mut rng));
            let mut tags = vec![t1];
            for _ in 1..n_t {
                let t = if rng.random_bool(config.p_rw) {
                    let steps = rng.random_range(config.walk_length.min..=config.walk_length.max);
                    let mut at = t1;
                    for _ in 0..steps {
                        let nb = &neighbors[at.index()];
                        if nb.is_empty() {
                            break;
                        }
                        at = nb[rng.random_range(0..nb.len())];
                    }
                    at
                } else {
                    TagId::from(first.sample(&mut rng))
                };
                if !tags.contains(&t) {
                    tags.push(t);
                }
            }
            tags
        })
        .collect();

    let mut vocab = Vocabulary::new();
    let mut fresh: FxHashMap<TagId, TagId> = FxHashMap::default();
    let objects: Vec<Vec<TagId>> = objects
        .into_iter()
        .map(|o| {
            o.into_iter()
                .map(|t| *fresh.entry(t).or_insert_with(|| vocab.intern(h.vocab().name(t))))
                .collect()
        })
        .collect();
    TagCorpus::from_objects(vocab, objects)
}
