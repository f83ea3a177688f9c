//! Brute-force verifiers used to check the solvers.
//!
//! Both oracles enumerate their whole search space; neither samples.

use crate::error::{FaircutError, Result};
use crate::necklace1d::{BeadString, MAX_DISCRETE_BEADS};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Largest grid the equipartition oracle will scan.
pub const MAX_GRID_CANDIDATES: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub instance: String,
    /// Number of candidates enumerated.
    pub space_size: u64,
    /// Best objective: fewest cuts, or smallest worst residual.
    pub best: f64,
    /// Parameters of an optimal candidate.
    pub witness: Vec<f64>,
    /// Piece labels of the witness (necklace only).
    pub labels: Vec<usize>,
}

/// Fewest cuts (at most `max_cuts`) of a bead string so that each of `k`
/// thieves receives the same number of beads of every type.
///
/// Cut positions count the beads before the cut. `best` is `+inf` when no
/// fair division exists within the cap.
pub fn oracle_necklace(beads: &BeadString, k: usize, max_cuts: usize) -> Result<OracleReport> {
    let n = beads.len();
    if n > MAX_DISCRETE_BEADS {
        return Err(FaircutError::InstanceTooLarge(format!("{n} beads exceed {MAX_DISCRETE_BEADS}")));
    }
    if k == 0 {
        return Err(FaircutError::Input("k must be positive".into()));
    }
    let types = beads.types;
    // prefix[p][t]: beads of type t among the first p
    let mut prefix = vec![vec![0usize; types]; n + 1];
    for (p, &b) in beads.beads.iter().enumerate() {
        prefix[p + 1] = prefix[p].clone();
        prefix[p + 1][b] += 1;
    }
    let totals = &prefix[n];
    let instance = format!("necklace n={n} types={types} k={k}");
    let mut space = 0u64;
    if totals.iter().any(|c| c % k != 0) {
        return Ok(OracleReport { instance, space_size: 0, best: f64::INFINITY, witness: vec![], labels: vec![] });
    }
    let quota: Vec<usize> = totals.iter().map(|c| c / k).collect();
    for cuts in 0..=max_cuts.min(n.saturating_sub(1)) {
        let mut pos: Vec<usize> = (1..=cuts).collect();
        loop {
            let mut edges = vec![0];
            edges.extend(&pos);
            edges.push(n);
            let pieces = cuts + 1;
            let labelings = (k as u64).checked_pow(pieces as u32).ok_or_else(|| FaircutError::InstanceTooLarge("too many labelings".into()))?;
            space += labelings;
            for code in 0..labelings {
                let mut c = code;
                let labels: Vec<usize> = (0..pieces)
                    .map(|_| {
                        let l = (c % k as u64) as usize;
                        c /= k as u64;
                        l
                    })
                    .collect();
                let mut got = vec![vec![0usize; types]; k];
                for i in 0..pieces {
                    for t in 0..types {
                        got[labels[i]][t] += prefix[edges[i + 1]][t] - prefix[edges[i]][t];
                    }
                }
                if got.iter().all(|g| *g == quota) {
                    return Ok(OracleReport {
                        instance,
                        space_size: space,
                        best: cuts as f64,
                        witness: pos.iter().map(|&p| p as f64).collect(),
                        labels,
                    });
                }
            }
            if !next_combination(&mut pos, n - 1) {
                break;
            }
        }
    }
    Ok(OracleReport { instance, space_size: space, best: f64::INFINITY, witness: vec![], labels: vec![] })
}

/// Advances an increasing sequence over `1..=max`; false when exhausted.
fn next_combination(pos: &mut [usize], max: usize) -> bool {
    let c = pos.len();
    for i in (0..c).rev() {
        if pos[i] < max - (c - 1 - i) {
            pos[i] += 1;
            for j in i + 1..c {
                pos[j] = pos[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Points `lo, lo + step, ...` up to the first one at or past `hi`.
pub fn grid_axis(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step).ceil().max(0.0) as usize;
    (0..=n).map(|i| lo + i as f64 * step).collect()
}

/// Smallest `residual` over the product grid of `axes`.
pub fn oracle_grid_equipartition<F>(instance: &str, axes: &[Vec<f64>], residual: F) -> Result<OracleReport>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let size = axes.iter().try_fold(1u64, |acc, a| acc.checked_mul(a.len() as u64)).unwrap_or(u64::MAX);
    if size > MAX_GRID_CANDIDATES {
        return Err(FaircutError::BudgetExceeded(format!("{size} grid candidates exceed {MAX_GRID_CANDIDATES}")));
    }
    let point = |mut idx: u64| -> Vec<f64> {
        let mut x = vec![0.0; axes.len()];
        for k in (0..axes.len()).rev() {
            let len = axes[k].len() as u64;
            x[k] = axes[k][(idx % len) as usize];
            idx /= len;
        }
        x
    };
    let (best, idx) = (0..size as usize)
        .into_par_iter()
        .with_min_len(1024)
        .map(|i| {
            let r = residual(&point(i as u64));
            (if r.is_nan() { f64::INFINITY } else { r }, i as u64)
        })
        .reduce(
            || (f64::INFINITY, u64::MAX),
            |a, b| if b.0 < a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a },
        );
    let witness = if idx == u64::MAX { vec![] } else { point(idx) };
    Ok(OracleReport { instance: instance.to_string(), space_size: size, best, witness, labels: vec![] })
}
