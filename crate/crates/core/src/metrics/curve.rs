use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::nmi;
use crate::hierarchy::{rewire, RewireOrder};
use crate::{Error, Hierarchy, Result};

pub const DEFAULT_RUNS: usize = 10;

/// 0, 0.05, ..., 1.
pub fn default_grid() -> Vec<f64> {
    (0..=20).map(|k| k as f64 / 20.0).collect()
}

/// Mean NMI between a tree and its randomized copies as a function of the
/// rewired fraction f.
#[derive(Debug, Clone, PartialEq)]
pub struct DecayCurve {
    pub grid: Vec<f64>,
    /// I(f) after monotone regression.
    pub values: Vec<f64>,
    pub runs: usize,
}

impl DecayCurve {
    /// Tab-separated `f TAB I(f)` rows.
    pub fn to_tsv(&self) -> String {
        self.grid
            .iter()
            .zip(&self.values)
            .map(|(f, v)| format!("{f}\t{v:.6}\n"))
            .collect()
    }

    /// Linear interpolation of I at `f`.
    pub fn value_at(&self, f: f64) -> f64 {
        let k = self.grid.partition_point(|&g| g <= f);
        if k == 0 {
            return self.values[0];
        }
        if k == self.grid.len() {
            return self.values[k - 1];
        }
        let (f0, f1) = (self.grid[k - 1], self.grid[k]);
        let (v0, v1) = (self.values[k - 1], self.values[k]);
        v0 + (v1 - v0) * (f - f0) / (f1 - f0)
    }
}

/// Averages `nmi(exact, rewire(exact, f))` over `runs` randomizations for
/// each grid point. Cell `(k, run)` draws from stream `k * runs + run` of a
/// generator seeded with `seed`, so the result does not depend on the
/// number of worker threads.
pub fn decay_curve(
    exact: &Hierarchy,
    order: RewireOrder,
    runs: usize,
    grid: &[f64],
    seed: u64,
) -> Result<DecayCurve> {
    if !exact.is_tree() {
        return Err(Error::NotATree("decay curves need a single-rooted exact tree".into()));
    }
    if runs == 0 {
        return Err(Error::InvalidParameter("runs must be at least 1".into()));
    }
    if grid.is_empty() {
        return Err(Error::EmptyCurve);
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) || grid.iter().any(|f| !(0.0..=1.0).contains(f)) {
        return Err(Error::InvalidParameter("grid must be increasing within [0, 1]".into()));
    }
    let cells: Vec<f64> = (0..grid.len() * runs)
        .into_par_iter()
        .map(|cell| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(cell as u64);
            let randomized = rewire(exact, grid[cell / runs], order, &mut rng)?;
            nmi(exact, &randomized)
        })
        .collect::<Result<_>>()?;
    let means: Vec<f64> = cells.chunks(runs).map(|c| c.iter().sum::<f64>() / runs as f64).collect();
    Ok(DecayCurve {
        grid: grid.to_vec(),
        values: isotonic_non_increasing(&means),
        runs,
    })
}

/// Least-squares non-increasing fit (pool adjacent violators).
pub fn isotonic_non_increasing(values: &[f64]) -> Vec<f64> {
    let mut blocks: Vec<(f64, usize)> = Vec::with_capacity(values.len());
    for &v in values {
        blocks.push((v, 1));
        while blocks.len() > 1 {
            let (b, nb) = blocks[blocks.len() - 1];
            let (a, na) = blocks[blocks.len() - 2];
            if a >= b {
                break;
            }
            blocks.pop();
            let merged = (a * na as f64 + b * nb as f64) / (na + nb) as f64;
            *blocks.last_mut().unwrap() = (merged, na + nb);
        }
    }
    blocks.into_iter().flat_map(|(v, k)| std::iter::repeat_n(v, k)).collect()
}

/// 1 - f*, where f* is the largest f whose interpolated curve value is at
/// least `i_er`. Values at or above the curve start give 1; values below the
/// curve's end give 0.
pub fn lmi(i_er: f64, curve: &DecayCurve) -> Result<f64> {
    if curve.values.is_empty() {
        return Err(Error::EmptyCurve);
    }
    let v = &curve.values;
    let g = &curve.grid;
    if i_er >= 1.0 || i_er > v[0] {
        return Ok(1.0 - g[0]);
    }
    let k = v.iter().rposition(|&x| x >= i_er).expect("i_er <= v[0]");
    if k + 1 == v.len() {
        return Ok(1.0 - g[k]);
    }
    let f_star = g[k] + (v[k] - i_er) / (v[k] - v[k + 1]) * (g[k + 1] - g[k]);
    Ok(1.0 - f_star)
}
