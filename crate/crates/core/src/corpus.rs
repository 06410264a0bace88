//! Tagged objects, tag frequencies and the weighted co-occurrence network.

use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use rayon::prelude::*;
use rustc_hash::FxHashMap;

use crate::{Error, Result, TagId, Vocabulary};

/// Objects file layout options.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ObjectsFormat {
    /// The first field of every line is an opaque object id and is skipped.
    pub with_ids: bool,
}

/// A multiset of objects, each a non-empty set of interned tags.
#[derive(Debug, Clone)]
pub struct TagCorpus {
    vocab: Vocabulary,
    offsets: Vec<usize>,
    tags: Vec<TagId>,
    frequency: Vec<u64>,
}

impl TagCorpus {
    /// Builds a corpus from per-object tag lists. Duplicates within an object
    /// are dropped (first occurrence wins) and empty objects are skipped.
    pub fn from_objects<I, O>(vocab: Vocabulary, objects: I) -> Result<Self>
    where
        I: IntoIterator<Item = O>,
        O: IntoIterator<Item = TagId>,
    {
        let mut offsets = vec![0];
        let mut tags = Vec::new();
        let mut frequency = vec![0u64; vocab.len()];
        for object in objects {
            let start = tags.len();
            for tag in object {
                if tag.index() >= vocab.len() {
                    return Err(Error::InvalidParameter(format!(
                        "tag {tag} outside the vocabulary"
                    )));
                }
                if !tags[start..].contains(&tag) {
                    tags.push(tag);
                    frequency[tag.index()] += 1;
                }
            }
            if tags.len() > start {
                offsets.push(tags.len());
            }
        }
        if offsets.len() == 1 {
            return Err(Error::EmptyCorpus);
        }
        if let Some(unused) = vocab.ids().find(|t| frequency[t.index()] == 0) {
            return Err(Error::InvalidParameter(format!(
                "tag {:?} never occurs in the corpus",
                vocab.name(unused)
            )));
        }
        Ok(Self {
            vocab,
            offsets,
            tags,
            frequency,
        })
    }

    /// Builds a corpus from tag names, interning them in first-seen order.
    pub fn from_named<I, O, S>(objects: I) -> Result<Self>
    where
        I: IntoIterator<Item = O>,
        O: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut vocab = Vocabulary::new();
        let objects: Vec<Vec<TagId>> = objects
            .into_iter()
            .map(|o| o.into_iter().map(|s| vocab.intern(s.as_ref())).collect())
            .collect();
        Self::from_objects(vocab, objects)
    }

    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    /// Number of distinct tags, N.
    pub fn tag_count(&self) -> usize {
        self.vocab.len()
    }

    /// Number of objects, Q.
    pub fn object_count(&self) -> u64 {
        (self.offsets.len() - 1) as u64
    }

    /// Number of objects carrying `tag`, Q_i.
    pub fn frequency(&self, tag: TagId) -> u64 {
        self.frequency[tag.index()]
    }

    pub fn frequencies(&self) -> &[u64] {
        &self.frequency
    }

    pub fn object(&self, index: usize) -> &[TagId] {
        &self.tags[self.offsets[index]..self.offsets[index + 1]]
    }

    pub fn objects(&self) -> impl ExactSizeIterator<Item = &[TagId]> + '_ {
        self.offsets.windows(2).map(|w| &self.tags[w[0]..w[1]])
    }

    /// Writes the corpus as an objects file (one TAB-separated object per line).
    pub fn write<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for object in self.objects() {
            let mut first = true;
            for &tag in object {
                if !first {
                    out.write_all(b"\t")?;
                }
                out.write_all(self.vocab.name(tag).as_bytes())?;
                first = false;
            }
            out.write_all(b"\n")?;
        }
        out.flush()
    }
}

/// Loads an objects file: one object per line, tags separated by TAB,
/// `#` comment lines and blank lines skipped.
pub fn load_corpus(path: impl AsRef<Path>, format: ObjectsFormat) -> Result<TagCorpus> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    parse_corpus(BufReader::new(file), format).map_err(|e| match e {
        Error::Io { source, .. } => Error::io(path, source),
        other => other,
    })
}

pub fn parse_corpus<R: BufRead>(reader: R, format: ObjectsFormat) -> Result<TagCorpus> {
    let mut vocab = Vocabulary::new();
    let mut objects: Vec<Vec<TagId>> = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io("<input>", e))?;
        let line = line.strip_suffix('\r').unwrap_or(&line);
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split('\t');
        if format.with_ids {
            fields.next();
        }
        let mut object = Vec::new();
        for field in fields {
            if field.is_empty() {
                return Err(Error::Parse {
                    line: idx + 1,
                    message: "empty tag (consecutive or trailing TAB)".into(),
                });
            }
            object.push(vocab.intern(field));
        }
        if object.is_empty() {
            return Err(Error::Parse {
                line: idx + 1,
                message: "object id without tags".into(),
            });
        }
        objects.push(object);
    }
    TagCorpus::from_objects(vocab, objects)
}

/// Sparse pair counter. Shards counted independently can be merged in any
/// order with the same result.
#[derive(Debug, Clone, Default)]
pub struct PairCounter {
    counts: FxHashMap<(u32, u32), u32>,
}

impl PairCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_object(&mut self, tags: &[TagId]) {
        for (k, &a) in tags.iter().enumerate() {
            for &b in &tags[k + 1..] {
                let key = if a < b { (a.0, b.0) } else { (b.0, a.0) };
                *self.counts.entry(key).or_insert(0) += 1;
            }
        }
    }

    pub fn merge(mut self, other: PairCounter) -> PairCounter {
        let (mut big, small) = if self.counts.len() >= other.counts.len() {
            (std::mem::take(&mut self.counts), other.counts)
        } else {
            (other.counts, std::mem::take(&mut self.counts))
        };
        for (key, n) in small {
            *big.entry(key).or_insert(0) += n;
        }
        PairCounter { counts: big }
    }

    pub fn pair_count(&self) -> usize {
        self.counts.len()
    }

    pub fn into_network(self, corpus: &TagCorpus) -> CooccurrenceNetwork {
        let pairs = self
            .counts
            .into_iter()
            .map(|((a, b), n)| (TagId(a), TagId(b), n as u64));
        CooccurrenceNetwork::from_pairs(
            corpus.vocab().clone(),
            corpus.object_count(),
            corpus.frequencies().to_vec(),
            pairs,
        )
        .expect("counts taken from a valid corpus")
    }
}

/// Counts co-occurrences over all objects, in parallel over object shards.
pub fn build_cooccurrence(corpus: &TagCorpus) -> CooccurrenceNetwork {
    const SHARD: usize = 16_384;
    let q = corpus.offsets.len() - 1;
    let counter = (0..q.div_ceil(SHARD))
        .into_par_iter()
        .map(|s| {
            let mut c = PairCounter::new();
            for i in s * SHARD..((s + 1) * SHARD).min(q) {
                c.add_object(corpus.object(i));
            }
            c
        })
        .reduce(PairCounter::new, PairCounter::merge);
    counter.into_network(corpus)
}

/// Undirected weighted co-occurrence graph plus the corpus marginals.
///
/// Adjacency is stored in CSR form, every row sorted by neighbour id; pairs
/// that never co-occur are absent.
#[derive(Debug, Clone, PartialEq)]
pub struct CooccurrenceNetwork {
    vocab: Vocabulary,
    object_count: u64,
    frequency: Vec<u64>,
    offsets: Vec<usize>,
    neighbors: Vec<TagId>,
    weights: Vec<u64>,
}

impl CooccurrenceNetwork {
    /// Builds a network from marginals and unordered pair counts. Repeated
    /// pairs are summed; zero counts are dropped.
    pub fn from_pairs<I>(
        vocab: Vocabulary,
        object_count: u64,
        frequency: Vec<u64>,
        pairs: I,
    ) -> Result<Self>
    where
        I: IntoIterator<Item = (TagId, TagId, u64)>,
    {
        let n = frequency.len();
        if object_count == 0 || n == 0 {
            return Err(Error::EmptyNetwork);
        }
        if vocab.len() != n {
            return Err(Error::InvalidParameter(format!(
                "{} frequencies for {} tags",
                n,
                vocab.len()
            )));
        }
        if let Some(f) = frequency.iter().find(|&&f| f > object_count) {
            return Err(Error::InvalidParameter(format!(
                "tag frequency {f} exceeds object count {object_count}"
            )));
        }
        let mut rows: Vec<Vec<(TagId, u64)>> = vec![Vec::new(); n];
        for (a, b, w) in pairs {
            if a == b || a.index() >= n || b.index() >= n {
                return Err(Error::InvalidParameter(format!("invalid pair ({a}, {b})")));
            }
            if w == 0 {
                continue;
            }
            rows[a.index()].push((b, w));
            rows[b.index()].push((a, w));
        }
        let mut offsets = Vec::with_capacity(n + 1);
        let mut neighbors = Vec::new();
        let mut weights = Vec::new();
        offsets.push(0);
        for (i, row) in rows.iter_mut().enumerate() {
            row.sort_unstable_by_key(|&(t, _)| t);
            let mut k = 0;
            while k < row.len() {
                let (t, mut w) = row[k];
                k += 1;
                while k < row.len() && row[k].0 == t {
                    w += row[k].1;
                    k += 1;
                }
                let cap = frequency[i].min(frequency[t.index()]);
                if w > cap {
                    return Err(Error::InvalidParameter(format!(
                        "co-occurrence {w} of ({}, {t}) exceeds min(Q_i, Q_j) = {cap}",
                        TagId::from(i)
                    )));
                }
                neighbors.push(t);
                weights.push(w);
            }
            offsets.push(neighbors.len());
        }
        Ok(Self {
            vocab,
            object_count,
            frequency,
            offsets,
            neighbors,
            weights,
        })
    }

    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn tag_count(&self) -> usize {
        self.frequency.len()
    }

    /// Q.
    pub fn object_count(&self) -> u64 {
        self.object_count
    }

    /// Q_i.
    pub fn frequency(&self, tag: TagId) -> u64 {
        self.frequency[tag.index()]
    }

    pub fn frequencies(&self) -> &[u64] {
        &self.frequency
    }

    /// Number of undirected links, M.
    pub fn link_count(&self) -> usize {
        self.neighbors.len() / 2
    }

    pub fn degree(&self, tag: TagId) -> usize {
        self.offsets[tag.index() + 1] - self.offsets[tag.index()]
    }

    /// Neighbours of `tag` with their weights, in ascending id order.
    pub fn neighbors(&self, tag: TagId) -> impl ExactSizeIterator<Item = (TagId, u64)> + '_ {
        let range = self.offsets[tag.index()]..self.offsets[tag.index() + 1];
        self.neighbors[range.clone()]
            .iter()
            .copied()
            .zip(self.weights[range].iter().copied())
    }

    /// Q_ij, zero when the pair never co-occurs.
    pub fn weight(&self, a: TagId, b: TagId) -> u64 {
        let range = self.offsets[a.index()]..self.offsets[a.index() + 1];
        match self.neighbors[range.clone()].binary_search(&b) {
            Ok(k) => self.weights[range.start + k],
            Err(_) => 0,
        }
    }

    /// Sum of incident weights.
    pub fn strength(&self, tag: TagId) -> u64 {
        let range = self.offsets[tag.index()]..self.offsets[tag.index() + 1];
        self.weights[range].iter().sum()
    }

    /// Every undirected link once, as `(a, b, Q_ab)` with `a < b`.
    pub fn links(&self) -> impl Iterator<Item = (TagId, TagId, u64)> + '_ {
        (0..self.tag_count()).flat_map(move |i| {
            let a = TagId::from(i);
            self.neighbors(a)
                .filter(move |&(b, _)| a < b)
                .map(move |(b, w)| (a, b, w))
        })
    }

    /// Copy of the network keeping only the links accepted by `keep(a, b, Q_ab)`.
    /// Marginals are unchanged.
    pub fn filter_links<F>(&self, mut keep: F) -> CooccurrenceNetwork
    where
        F: FnMut(TagId, TagId, u64) -> bool,
    {
        let kept: Vec<(TagId, TagId, u64)> = self.links().filter(|&(a, b, w)| keep(a, b, w)).collect();
        CooccurrenceNetwork::from_pairs(
            self.vocab.clone(),
            self.object_count,
            self.frequency.clone(),
            kept,
        )
        .expect("subset of a valid network")
    }

    /// z-score of the pair's co-occurrence count.
    pub fn z_score(&self, a: TagId, b: TagId) -> f64 {
        self.z_score_with(a, b, self.weight(a, b))
    }

    pub(crate) fn z_score_with(&self, a: TagId, b: TagId, q_ab: u64) -> f64 {
        crate::stats::z_score(&crate::stats::ZScoreInputs {
            q: self.object_count,
            q_i: self.frequency(a),
            q_j: self.frequency(b),
            q_ij: q_ab,
        })
    }
}
