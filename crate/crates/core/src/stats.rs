//! Statistical kernels shared by the extractors.

use crate::{CooccurrenceNetwork, Error, Result, TagId};

/// Marginals and observed count for one tag pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ZScoreInputs {
    /// Total number of objects, Q.
    pub q: u64,
    /// Objects carrying tag i, Q_i.
    pub q_i: u64,
    /// Objects carrying tag j, Q_j.
    pub q_j: u64,
    /// Objects carrying both, Q_ij.
    pub q_ij: u64,
}

/// Expected co-occurrences under random assignment, Q_i Q_j / Q.
pub fn expected_cooccurrence(q: u64, q_i: u64, q_j: u64) -> f64 {
    q_i as f64 * q_j as f64 / q as f64
}

/// Hypergeometric variance of the co-occurrence count.
pub fn cooccurrence_variance(q: u64, q_i: u64, q_j: u64) -> Result<f64> {
    if q < 2 {
        return Err(Error::DegeneratePopulation(q));
    }
    let (q, q_i, q_j) = (q as f64, q_i as f64, q_j as f64);
    Ok((q_i * q_j / q) * ((q - q_i) / q) * ((q - q_j) / (q - 1.0)))
}

/// Observed minus expected co-occurrences in units of the hypergeometric
/// standard deviation. Zero-variance pairs (a tag on no object or on every
/// object, or Q < 2) score 0.
pub fn z_score(inputs: &ZScoreInputs) -> f64 {
    let ZScoreInputs { q, q_i, q_j, q_ij } = *inputs;
    let variance = match cooccurrence_variance(q, q_i, q_j) {
        Ok(v) if v > 0.0 => v,
        _ => return 0.0,
    };
    (q_ij as f64 - expected_cooccurrence(q, q_i, q_j)) / variance.sqrt()
}

/// Shannon entropy (natural log) of a weight distribution. Empty input gives 0.
pub fn in_link_entropy(weights: &[f64]) -> Result<f64> {
    if let Some(&w) = weights.iter().find(|&&w| w.is_nan() || w <= 0.0) {
        return Err(Error::NonPositiveWeight(w));
    }
    let total: f64 = weights.iter().sum();
    Ok(-weights
        .iter()
        .map(|&w| {
            let p = w / total;
            p * p.ln()
        })
        .sum::<f64>())
}

/// Unit-sum eigenvector centrality scores.
#[derive(Debug, Clone, PartialEq)]
pub struct CentralityVector {
    pub scores: Vec<f64>,
    pub iterations: usize,
}

impl CentralityVector {
    pub fn score(&self, tag: TagId) -> f64 {
        self.scores[tag.index()]
    }
}

/// Eigenvector centrality by power iteration on the weighted adjacency matrix.
///
/// The iteration starts from the strength vector and runs exactly
/// `iterations` rounds, renormalising to unit sum after each one. Each round
/// multiplies by `A + sI` where `s` is the mean strength of the non-isolated
/// tags. The shift leaves the eigenvectors untouched and makes the dominant
/// eigenvalue strictly dominant in modulus, so bipartite components (paths,
/// stars) converge instead of oscillating. Isolated tags score 0; a network
/// without links gets the uniform vector.
pub fn eigenvector_centrality(network: &CooccurrenceNetwork, iterations: usize) -> CentralityVector {
    let n = network.tag_count();
    let strength: Vec<f64> = (0..n)
        .map(|i| network.strength(TagId::from(i)) as f64)
        .collect();
    let total: f64 = strength.iter().sum();
    if total == 0.0 {
        return CentralityVector {
            scores: vec![1.0 / n as f64; n],
            iterations: 0,
        };
    }
    let linked = strength.iter().filter(|&&s| s > 0.0).count();
    let shift = total / linked as f64;

    let mut x: Vec<f64> = strength.iter().map(|s| s / total).collect();
    let mut next = vec![0.0; n];
    for _ in 0..iterations {
        for (i, slot) in next.iter_mut().enumerate() {
            let tag = TagId::from(i);
            let mut acc = shift * x[i];
            for (t, w) in network.neighbors(tag) {
                acc += w as f64 * x[t.index()];
            }
            *slot = acc;
        }
        let sum: f64 = next.iter().sum();
        for (xi, &v) in x.iter_mut().zip(&next) {
            *xi = v / sum;
        }
    }
    CentralityVector {
        scores: x,
        iterations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::TagId;

    fn z(q: u64, q_i: u64, q_j: u64, q_ij: u64) -> f64 {
        z_score(&ZScoreInputs { q, q_i, q_j, q_ij })
    }

    #[test]
    fn expected_cooccurrence_examples() {
        assert_eq!(expected_cooccurrence(100, 20, 30), 6.0);
        assert_eq!(expected_cooccurrence(40, 40, 7), 7.0);
        assert_eq!(expected_cooccurrence(10, 0, 5), 0.0);
    }

    #[test]
    fn variance_examples() {
        // 600/100 * 80/100 * 70/99
        let v = cooccurrence_variance(100, 20, 30).unwrap();
        assert!((v - 3.393_939_393_939_394).abs() < 1e-12);
        assert_eq!(cooccurrence_variance(50, 50, 9).unwrap(), 0.0);
        assert_eq!(cooccurrence_variance(50, 9, 50).unwrap(), 0.0);
        assert!(matches!(
            cooccurrence_variance(1, 1, 1),
            Err(Error::DegeneratePopulation(1))
        ));
    }

    #[test]
    fn z_score_examples() {
        assert_eq!(z(100, 20, 30, 6), 0.0);
        assert!((z(100, 20, 30, 10) - 2.171_240_593_367_237).abs() < 1e-9);
        assert_eq!(z(30, 30, 20, 20), 0.0);
        assert_eq!(z(1, 1, 1, 1), 0.0);
    }

    #[test]
    fn entropy_examples() {
        let uniform = in_link_entropy(&[5.0; 4]).unwrap();
        assert!((uniform - 4f64.ln()).abs() < 1e-12);
        assert_eq!(in_link_entropy(&[7.0]).unwrap(), 0.0);
        assert_eq!(in_link_entropy(&[]).unwrap(), 0.0);
        // -(3/4 ln 3/4 + 1/4 ln 1/4)
        assert!((in_link_entropy(&[3.0, 1.0]).unwrap() - 0.562_335_144_618_808_6).abs() < 1e-12);
        assert!(in_link_entropy(&[1.0, 0.0]).is_err());
        assert!(in_link_entropy(&[-1.0]).is_err());
    }

    fn network(n: usize, links: &[(u32, u32, u64)]) -> CooccurrenceNetwork {
        CooccurrenceNetwork::from_pairs(
            crate::Vocabulary::numbered(n),
            1_000,
            vec![1_000; n],
            links.iter().map(|&(a, b, w)| (TagId(a), TagId(b), w)),
        )
        .unwrap()
    }

    #[test]
    fn centrality_two_tags() {
        let c = eigenvector_centrality(&network(2, &[(0, 1, 17)]), 100);
        assert_eq!(c.scores, vec![0.5, 0.5]);
    }

    #[test]
    fn centrality_path_matches_closed_form() {
        let c = eigenvector_centrality(&network(3, &[(0, 1, 1), (1, 2, 1)]), 100);
        let norm = 2.0 + 2f64.sqrt();
        let expected = [1.0 / norm, 2f64.sqrt() / norm, 1.0 / norm];
        for (got, want) in c.scores.iter().zip(expected) {
            assert!((got - want).abs() < 1e-6, "{got} vs {want}");
        }
        assert!((c.scores[0] - 0.292_89).abs() < 1e-5);
        assert!((c.scores[1] - 0.414_21).abs() < 1e-5);
    }

    #[test]
    fn centrality_star_center_dominates() {
        let c = eigenvector_centrality(&network(5, &[(0, 1, 1), (0, 2, 1), (0, 3, 1), (0, 4, 1)]), 100);
        for leaf in 1..5 {
            assert!(c.scores[0] > c.scores[leaf]);
        }
        assert!((c.scores.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn centrality_isolated_and_empty() {
        let c = eigenvector_centrality(&network(3, &[(0, 1, 4)]), 100);
        assert_eq!(c.scores[2], 0.0);
        let empty = eigenvector_centrality(&network(4, &[]), 100);
        assert_eq!(empty.scores, vec![0.25; 4]);
    }
}
