//! Necklace splitting on the line.
//!
//! Continuous splits for a prime number of thieves come from a zero of the
//! share-deficit map on the join of labelled intervals. Composite thief
//! counts are handled by splitting into classes first and then splitting
//! each class. Discrete bead strings are solved exhaustively.

use crate::busolver::{self, JoinPoint, SolverOptions};
use crate::error::{FaircutError, Result};
use crate::measures::{reference_mixture, restrict, BoxMeasure, ConvexRegion, Halfspace, Marginal1d, Measure, DEFAULT_RESTRICT_RTOL};
use serde::{Deserialize, Serialize};

/// Sorted finite cut points and one 0-based label per resulting interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NecklaceSplit {
    pub cuts: Vec<f64>,
    pub labels: Vec<usize>,
}

impl NecklaceSplit {
    /// Label of the interval containing `x`; intervals are closed on the left.
    pub fn label_of(&self, x: f64) -> usize {
        self.labels[self.cuts.partition_point(|c| *c <= x)]
    }

    /// The interval `[lo, hi)` of piece `i`, with infinite outer ends.
    pub fn interval(&self, i: usize) -> (f64, f64) {
        let lo = if i == 0 { f64::NEG_INFINITY } else { self.cuts[i - 1] };
        let hi = if i == self.cuts.len() { f64::INFINITY } else { self.cuts[i] };
        (lo, hi)
    }

    /// `shares[thief][measure]`, evaluated by region masses.
    pub fn shares<M: Measure>(&self, measures: &[M], k: usize) -> Vec<Vec<f64>> {
        let mut out = vec![vec![0.0; measures.len()]; k];
        for i in 0..self.labels.len() {
            let r = interval_region(self.interval(i));
            for (j, m) in measures.iter().enumerate() {
                out[self.labels[i]][j] += m.mass(&r);
            }
        }
        out
    }

    /// Largest `|share - 1/k|`.
    pub fn max_deviation<M: Measure>(&self, measures: &[M], k: usize) -> f64 {
        let target = 1.0 / k as f64;
        self.shares(measures, k)
            .iter()
            .flatten()
            .fold(0.0f64, |m, s| m.max((s - target).abs()))
    }

    /// Builds a split from consecutive `[lo, hi)` pieces, dropping empty
    /// pieces and merging equal neighbours.
    pub fn from_pieces(pieces: &[(f64, f64, usize)]) -> NecklaceSplit {
        let mut cuts = Vec::new();
        let mut labels: Vec<usize> = Vec::new();
        for &(lo, hi, l) in pieces {
            if !(hi > lo) {
                continue;
            }
            match labels.last() {
                None => labels.push(l),
                Some(&prev) if prev == l => {}
                Some(_) => {
                    cuts.push(lo);
                    labels.push(l);
                }
            }
        }
        if labels.is_empty() {
            labels.push(0);
        }
        NecklaceSplit { cuts, labels }
    }
}

fn interval_region((lo, hi): (f64, f64)) -> ConvexRegion {
    let mut r = ConvexRegion::full(1);
    if lo.is_finite() {
        r.push(Halfspace::axis_ge(1, 0, lo));
    }
    if hi.is_finite() {
        r.push(Halfspace::below(&[1.0], hi));
    }
    r
}

/// The share-deficit map on the join of labelled intervals.
///
/// Join coordinate `i` is the reference mass of the `i`-th interval from the
/// left; its label names the thief who takes it.
pub struct NecklaceMap {
    marginals: Vec<Marginal1d>,
    reference: Marginal1d,
    k: usize,
}

impl NecklaceMap {
    pub fn new(measures: &[BoxMeasure], k: usize) -> Result<Self> {
        check_line(measures)?;
        let reference = reference_mixture(measures)?;
        Ok(NecklaceMap {
            marginals: measures.iter().map(|m| Marginal1d::new(m, 0)).collect(),
            reference: Marginal1d::new(&reference, 0),
            k,
        })
    }

    /// Interval boundaries for barycentric weights `w` (length `n + 1`).
    pub fn boundaries(&self, w: &[f64]) -> Vec<f64> {
        let n = w.len();
        let mut b = Vec::with_capacity(n + 1);
        b.push(f64::NEG_INFINITY);
        let mut acc = 0.0;
        for wi in &w[..n - 1] {
            acc += wi;
            b.push(self.reference.quantile(acc));
        }
        b.push(f64::INFINITY);
        // quantiles of rounded partial sums may step backwards by an ulp
        for i in 1..b.len() {
            if b[i] < b[i - 1] {
                b[i] = b[i - 1];
            }
        }
        b
    }

    /// `t` blocks of `k` deficits `share - 1/k`.
    pub fn eval(&self, x: &JoinPoint) -> Vec<f64> {
        let b = self.boundaries(&x.barycentric);
        let t = self.marginals.len();
        let mut out = vec![-1.0 / self.k as f64; t * self.k];
        for i in 0..x.len() {
            if b[i + 1] <= b[i] {
                continue;
            }
            let l = x.labels[i];
            for (j, m) in self.marginals.iter().enumerate() {
                out[j * self.k + l] += m.cdf(b[i + 1]) - m.cdf(b[i]);
            }
        }
        out
    }

    pub fn to_split(&self, x: &JoinPoint) -> NecklaceSplit {
        let b = self.boundaries(&x.barycentric);
        let pieces: Vec<(f64, f64, usize)> = (0..x.len()).map(|i| (b[i], b[i + 1], x.labels[i])).collect();
        NecklaceSplit::from_pieces(&pieces)
    }
}

fn check_line(measures: &[BoxMeasure]) -> Result<()> {
    if measures.is_empty() {
        return Err(FaircutError::Input("at least one measure is required".into()));
    }
    for m in measures {
        if m.dim() != 1 {
            return Err(FaircutError::dim(1, m.dim()));
        }
    }
    Ok(())
}

/// Fair split among a prime number `k` of thieves with at most `t(k-1)` cuts.
pub fn split_prime(measures: &[BoxMeasure], k: usize, opts: &SolverOptions) -> Result<NecklaceSplit> {
    if !busolver::is_prime(k) {
        return Err(FaircutError::Unsupported(format!("{k} is not prime")));
    }
    let map = NecklaceMap::new(measures, k)?;
    let n = measures.len() * (k - 1) + 1;
    let sol = busolver::join_zero_on(n, k, busolver::alternating_sheets(n, k), |x: &JoinPoint| map.eval(x), opts)?;
    Ok(map.to_split(&sol.point))
}

/// Prime factors of `k` in ascending order, with multiplicity.
pub fn prime_factors(mut k: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= k {
        while k % p == 0 {
            out.push(p);
            k /= p;
        }
        p += 1;
    }
    if k > 1 {
        out.push(k);
    }
    out
}

/// Fair split among `k = Π primes` thieves by composition: split into
/// `primes[0]` classes, restrict every measure to each class and split the
/// class among the remaining factors. Uses at most `t(k-1)` cuts.
///
/// The tolerance is shared evenly between the outer split and the inner ones.
pub fn split_composite(measures: &[BoxMeasure], primes: &[usize], opts: &SolverOptions) -> Result<NecklaceSplit> {
    check_line(measures)?;
    match primes {
        [] => Err(FaircutError::Input("empty factorization".into())),
        [p] => split_prime(measures, *p, opts),
        [m, rest @ ..] => {
            let half = SolverOptions { tol: 0.5 * opts.tol, ..opts.clone() };
            let outer = split_prime(measures, *m, &half)?;
            let l: usize = rest.iter().product();
            let mut inner = Vec::with_capacity(*m);
            for class in 0..*m {
                let pieces: Vec<ConvexRegion> = (0..outer.labels.len())
                    .filter(|&i| outer.labels[i] == class)
                    .map(|i| interval_region(outer.interval(i)))
                    .collect();
                let restricted = measures
                    .iter()
                    .map(|mu| restrict_to_union(mu, &pieces))
                    .collect::<Result<Vec<_>>>()?;
                inner.push(split_composite(&restricted, rest, &half)?);
            }
            Ok(compose(&outer, &inner, l))
        }
    }
}

/// Restriction of a 1D measure to a union of disjoint intervals.
fn restrict_to_union(m: &BoxMeasure, pieces: &[ConvexRegion]) -> Result<BoxMeasure> {
    let mut parts = Vec::new();
    for r in pieces {
        if m.mass(r) <= 0.0 {
            continue;
        }
        let res = restrict(m, r, DEFAULT_RESTRICT_RTOL)?;
        parts.push((res.measure, res.mass));
    }
    let refs: Vec<(&BoxMeasure, f64)> = parts.iter().map(|(b, w)| (b, *w)).collect();
    BoxMeasure::mixture(&refs)
}

/// Overlays class splits on the outer split: a point in outer class `c`
/// with inner label `j` goes to thief `c * l + j`.
fn compose(outer: &NecklaceSplit, inner: &[NecklaceSplit], l: usize) -> NecklaceSplit {
    let mut points: Vec<f64> = outer.cuts.clone();
    for s in inner {
        points.extend(s.cuts.iter().copied());
    }
    points.sort_by(f64::total_cmp);
    points.dedup();
    let mut bounds = vec![f64::NEG_INFINITY];
    bounds.extend(points);
    bounds.push(f64::INFINITY);
    let pieces: Vec<(f64, f64, usize)> = bounds
        .windows(2)
        .map(|w| {
            let probe = if w[0].is_finite() { w[0] } else { w[1] - 1.0 };
            let c = outer.label_of(probe);
            (w[0], w[1], c * l + inner[c].label_of(probe))
        })
        .collect();
    NecklaceSplit::from_pieces(&pieces)
}

/// Fair split among any number `k >= 1` of thieves: prime `k` directly,
/// composite `k` by composition over its prime factors.
pub fn split(measures: &[BoxMeasure], k: usize, opts: &SolverOptions) -> Result<NecklaceSplit> {
    check_line(measures)?;
    match k {
        0 => Err(FaircutError::Input("need at least one thief".into())),
        1 => Ok(NecklaceSplit { cuts: Vec::new(), labels: vec![0] }),
        _ => split_composite(measures, &prime_factors(k), opts),
    }
}

/// A string of beads of `types` kinds, stored as 0-based type indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BeadString {
    pub beads: Vec<usize>,
    pub types: usize,
}

impl BeadString {
    /// Parses letters; distinct characters become types in sorted order.
    /// Whitespace is ignored.
    pub fn parse(s: &str) -> Result<Self> {
        let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut alphabet = chars.clone();
        alphabet.sort_unstable();
        alphabet.dedup();
        let beads = chars.iter().map(|c| alphabet.binary_search(c).unwrap()).collect();
        Ok(BeadString { beads, types: alphabet.len() })
    }

    pub fn len(&self) -> usize {
        self.beads.len()
    }

    pub fn is_empty(&self) -> bool {
        self.beads.is_empty()
    }

    pub fn counts(&self) -> Vec<usize> {
        let mut c = vec![0; self.types];
        for &b in &self.beads {
            c[b] += 1;
        }
        c
    }

    pub(crate) fn check_divisible(&self, k: usize) -> Result<()> {
        if k == 0 {
            return Err(FaircutError::Input("need at least one thief".into()));
        }
        if let Some(c) = self.counts().iter().find(|c| *c % k != 0) {
            return Err(FaircutError::Input(format!("a bead type occurs {c} times, not divisible by {k}")));
        }
        Ok(())
    }
}

/// Largest bead count handled by the exhaustive discrete solver.
pub const MAX_DISCRETE_BEADS: usize = 24;

/// Fair discrete split with the fewest cuts. A cut at `p` lies between
/// beads `p` and `p + 1` (1-based), so bead `i` occupies `[i - 1, i]`.
pub fn discrete_split(beads: &BeadString, k: usize) -> Result<NecklaceSplit> {
    beads.check_divisible(k)?;
    let n = beads.len();
    if n > MAX_DISCRETE_BEADS {
        return Err(FaircutError::InstanceTooLarge(format!("{n} beads exceed the exhaustive limit of {MAX_DISCRETE_BEADS}")));
    }
    if n == 0 || k == 1 {
        return Ok(NecklaceSplit { cuts: Vec::new(), labels: vec![0] });
    }
    let t = beads.types;
    let quota: Vec<usize> = beads.counts().iter().map(|c| c / k).collect();
    let mut prefix = vec![vec![0usize; t]; n + 1];
    for i in 0..n {
        prefix[i + 1] = prefix[i].clone();
        prefix[i + 1][beads.beads[i]] += 1;
    }
    for c in 0..n {
        let mut gaps: Vec<usize> = (1..=c).collect();
        loop {
            let mut bounds = vec![0];
            bounds.extend(gaps.iter().copied());
            bounds.push(n);
            let segs: Vec<Vec<usize>> = bounds
                .windows(2)
                .map(|w| (0..t).map(|ty| prefix[w[1]][ty] - prefix[w[0]][ty]).collect())
                .collect();
            let mut load = vec![vec![0usize; t]; k];
            let mut labels = vec![0usize; segs.len()];
            if assign(&segs, 0, &quota, &mut load, &mut labels, k, 0) {
                return Ok(NecklaceSplit { cuts: gaps.iter().map(|g| *g as f64).collect(), labels });
            }
            if !next_combination(&mut gaps, n - 1) {
                break;
            }
        }
    }
    unreachable!("cutting every gap always admits a fair labelling")
}

/// Depth-first labelling of segments under per-thief quotas. Thieves are
/// opened in order (`opened` so far) so that relabelled duplicates are skipped.
fn assign(segs: &[Vec<usize>], i: usize, quota: &[usize], load: &mut [Vec<usize>], labels: &mut [usize], k: usize, opened: usize) -> bool {
    if i == segs.len() {
        return true;
    }
    for l in 0..k.min(opened + 1) {
        if (0..quota.len()).all(|ty| load[l][ty] + segs[i][ty] <= quota[ty]) {
            for ty in 0..quota.len() {
                load[l][ty] += segs[i][ty];
            }
            labels[i] = l;
            if assign(segs, i + 1, quota, load, labels, k, opened.max(l + 1)) {
                return true;
            }
            for ty in 0..quota.len() {
                load[l][ty] -= segs[i][ty];
            }
        }
    }
    false
}

/// Advances `c` (strictly increasing, values in `1..=max`) to the next
/// combination in lexicographic order.
fn next_combination(c: &mut [usize], max: usize) -> bool {
    let r = c.len();
    for i in (0..r).rev() {
        if c[i] < max - (r - 1 - i) {
            c[i] += 1;
            for j in i + 1..r {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::BoxAtom;

    fn u01() -> BoxMeasure {
        BoxMeasure::interval(0.0, 1.0).unwrap()
    }

    #[test]
    fn median_for_two_thieves() {
        let s = split_prime(&[u01()], 2, &SolverOptions::default()).unwrap();
        assert_eq!(s.cuts.len(), 1);
        assert!((s.cuts[0] - 0.5).abs() < 1e-9);
        assert_ne!(s.labels[0], s.labels[1]);
    }

    #[test]
    fn thirds_for_three_thieves() {
        let s = split_prime(&[u01()], 3, &SolverOptions::default()).unwrap();
        assert_eq!(s.cuts.len(), 2);
        assert!((s.cuts[0] - 1.0 / 3.0).abs() < 1e-9 && (s.cuts[1] - 2.0 / 3.0).abs() < 1e-9);
        let mut l = s.labels.clone();
        l.sort_unstable();
        assert_eq!(l, vec![0, 1, 2]);
    }

    #[test]
    fn two_overlapping_intervals() {
        let ms = [u01(), BoxMeasure::interval(0.5, 1.5).unwrap()];
        let s = split_prime(&ms, 2, &SolverOptions::default()).unwrap();
        assert!(s.cuts.len() <= 2);
        assert!(s.max_deviation(&ms, 2) <= 1e-9);
    }

    #[test]
    fn quarters_by_composition() {
        let s = split(&[u01()], 4, &SolverOptions::default()).unwrap();
        assert_eq!(s.cuts.len(), 3);
        for (c, q) in s.cuts.iter().zip([0.25, 0.5, 0.75]) {
            assert!((c - q).abs() < 1e-9, "{:?}", s.cuts);
        }
        let mut l = s.labels.clone();
        l.sort_unstable();
        assert_eq!(l, vec![0, 1, 2, 3]);
    }

    #[test]
    fn six_thieves_one_measure() {
        let m = BoxMeasure::new(1, vec![BoxAtom::new(vec![0.0], vec![1.0], 1.0), BoxAtom::new(vec![2.0], vec![3.0], 2.0)]).unwrap();
        let s = split(std::slice::from_ref(&m), 6, &SolverOptions::default()).unwrap();
        assert!(s.cuts.len() <= 5);
        assert!(s.max_deviation(&[m], 6) <= 1e-9);
    }

    #[test]
    fn cut_bound_for_two_measures_four_thieves() {
        let ms = [u01(), BoxMeasure::interval(0.3, 2.0).unwrap()];
        let s = split(&ms, 4, &SolverOptions::default()).unwrap();
        assert!(s.cuts.len() <= 6);
        assert!(s.max_deviation(&ms, 4) <= 1e-9);
    }

    #[test]
    fn discrete_examples() {
        // one cut in the middle already gives each thief one a and one b
        let s = discrete_split(&BeadString::parse("abab").unwrap(), 2).unwrap();
        assert_eq!(s.cuts, vec![2.0]);
        let s = discrete_split(&BeadString::parse("aabb").unwrap(), 2).unwrap();
        assert_eq!(s.cuts, vec![1.0, 3.0]);
        assert_eq!(s.labels, vec![0, 1, 0]);
        let s = discrete_split(&BeadString::parse("aa").unwrap(), 2).unwrap();
        assert_eq!(s.cuts, vec![1.0]);
    }

    #[test]
    fn discrete_rejects_bad_input() {
        assert!(matches!(discrete_split(&BeadString::parse("aab").unwrap(), 2), Err(FaircutError::Input(_))));
        let long = "ab".repeat(14);
        assert!(matches!(discrete_split(&BeadString::parse(&long).unwrap(), 2), Err(FaircutError::InstanceTooLarge(_))));
    }

    #[test]
    fn factorization() {
        assert_eq!(prime_factors(12), vec![2, 2, 3]);
        assert_eq!(prime_factors(7), vec![7]);
    }
}
