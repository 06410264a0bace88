//! Comparison of a reconstructed hierarchy with an exact one.

mod curve;
mod nmi;

use std::fmt;

use crate::{Hierarchy, Result};

pub use curve::{decay_curve, default_grid, isotonic_non_increasing, lmi, DecayCurve, DEFAULT_RUNS};
pub use nmi::{nmi, partition_nmi};

/// Classification of reconstructed links against the exact hierarchy.
///
/// Every ratio is a count divided by `max(N - 1, M_r)`, so the acceptable,
/// inverted, unrelated and missing ratios sum to one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkRatios {
    pub r_e: f64,
    pub r_a: f64,
    pub r_i: f64,
    pub r_u: f64,
    pub r_m: f64,
    pub exact: usize,
    pub acceptable: usize,
    pub inverted: usize,
    pub unrelated: usize,
    pub missing: usize,
    /// max(N - 1, M_r).
    pub normalizer: usize,
}

pub fn link_ratios(exact: &Hierarchy, recon: &Hierarchy) -> Result<LinkRatios> {
    let recon = exact.same_tags(recon)?;
    let n = exact.tag_count();
    let table = exact.descendant_table();
    let (mut e, mut a, mut i, mut u) = (0, 0, 0, 0);
    for (p, c) in recon.edges() {
        if exact.has_edge(p, c) {
            e += 1;
        }
        if table.is_descendant(p, c) {
            a += 1;
        } else if table.is_descendant(c, p) {
            i += 1;
        } else {
            u += 1;
        }
    }
    let m_r = recon.edge_count();
    let target = n.saturating_sub(1);
    let missing = target.saturating_sub(m_r);
    let normalizer = target.max(m_r).max(1);
    let ratio = |k: usize| k as f64 / normalizer as f64;
    Ok(LinkRatios {
        r_e: ratio(e),
        r_a: ratio(a),
        r_i: ratio(i),
        r_u: ratio(u),
        r_m: ratio(missing),
        exact: e,
        acceptable: a,
        inverted: i,
        unrelated: u,
        missing,
        normalizer,
    })
}

/// Link ratios, NMI and (when a decay curve is supplied) LMI for one pair.
#[derive(Debug, Clone, PartialEq)]
pub struct QualityReport {
    pub ratios: LinkRatios,
    pub nmi: f64,
    pub lmi: Option<f64>,
    pub n: usize,
    pub m_r: usize,
}

impl QualityReport {
    pub fn evaluate(exact: &Hierarchy, recon: &Hierarchy, curve: Option<&DecayCurve>) -> Result<Self> {
        let recon = exact.same_tags(recon)?;
        let ratios = link_ratios(exact, &recon)?;
        let nmi = nmi(exact, &recon)?;
        let lmi = curve.map(|c| lmi(nmi, c)).transpose()?;
        Ok(Self {
            ratios,
            nmi,
            lmi,
            n: exact.tag_count(),
            m_r: recon.edge_count(),
        })
    }
}

impl fmt::Display for QualityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = &self.ratios;
        for (name, value) in [("r_E", r.r_e), ("r_A", r.r_a), ("r_I", r.r_i), ("r_U", r.r_u), ("r_M", r.r_m), ("nmi", self.nmi)] {
            writeln!(f, "{name}\t{value:.6}")?;
        }
        match self.lmi {
            Some(v) => writeln!(f, "lmi\t{v:.6}")?,
            None => writeln!(f, "lmi\tNA")?,
        }
        writeln!(f, "N\t{}", self.n)?;
        writeln!(f, "M_r\t{}", self.m_r)
    }
}
