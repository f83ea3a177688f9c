//! Numerical non-existence certificates.
//!
//! A certificate scans a finite family of partitions on a grid, records the
//! smallest achievable worst residual `delta`, and extends it to the
//! continuum with a Lipschitz bound computed from the measures' marginal
//! densities. It is then re-checked at random off-grid points.

use crate::busolver::local_newton;
use crate::error::{FaircutError, Result};
use crate::measures::{BoxMeasure, Measure};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NonExistenceCertificate {
    pub claim: String,
    pub dim: usize,
    pub step: f64,
    pub grid_points: u64,
    /// Smallest worst-case residual over the grid.
    pub delta: f64,
    pub lipschitz: f64,
    /// `lipschitz * step`; must stay below `delta / 2`.
    pub slack: f64,
    /// Grid point attaining `delta`.
    pub witness: Vec<f64>,
    /// Smallest residual seen at the random validation points.
    pub validated_min: f64,
    pub validation_points: usize,
}

/// Parameters of the two-direction, one-cut-each instance.
#[derive(Debug, Clone, PartialEq)]
pub struct OneOneParams {
    /// Side of the squares approximating each segment.
    pub width: f64,
    /// Orthogonal distance between the two segments.
    pub offset: f64,
    pub step: f64,
    pub validation_points: usize,
    pub seed: u64,
}

impl Default for OneOneParams {
    fn default() -> Self {
        OneOneParams { width: 1e-3, offset: 0.05, step: 1e-3, validation_points: 1000, seed: 0 }
    }
}

/// Parameters of the orthant instance: boxes of half-width `radius` centred
/// at `v, 2v, ...`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthantParams {
    pub v: Vec<f64>,
    pub radius: f64,
    pub measures: usize,
    pub step: f64,
    pub validation_points: usize,
    pub seed: u64,
}

impl OrthantParams {
    pub fn new(d: usize) -> Self {
        let v = match d {
            2 => vec![1.0, 0.618],
            _ => (0..d).map(|i| 0.618f64.powi(i as i32)).collect(),
        };
        OrthantParams { v, radius: 0.01, measures: 3, step: 1e-3, validation_points: 1000, seed: 0 }
    }
}

/// A segment of slope 1 and length 1 starting at `start`, approximated by a
/// staircase of squares of side `width`.
pub fn staircase_segment(start: [f64; 2], width: f64) -> Result<BoxMeasure> {
    if !(width > 0.0) {
        return Err(FaircutError::Input("width must be positive".into()));
    }
    let n = (1.0 / (width * std::f64::consts::SQRT_2)).ceil().max(1.0) as usize;
    let atoms = (0..n)
        .map(|i| {
            let lo = vec![start[0] + i as f64 * width, start[1] + i as f64 * width];
            let hi = vec![lo[0] + width, lo[1] + width];
            crate::measures::BoxAtom::new(lo, hi, 1.0)
        })
        .collect();
    BoxMeasure::new(2, atoms)
}

pub fn one_one_measures(p: &OneOneParams) -> Result<[BoxMeasure; 2]> {
    let s = p.offset / std::f64::consts::SQRT_2;
    Ok([staircase_segment([0.0, 0.0], p.width)?, staircase_segment([-s, s], p.width)?])
}

/// `mu({(x - a)(y - b) > 0})` for a planar box measure, by the product of
/// per-axis fractions.
pub fn quadrant_mass(m: &BoxMeasure, a: f64, b: f64) -> f64 {
    let (mut both, mut left, mut below) = (0.0, 0.0, 0.0);
    for i in 0..m.len() {
        let (lo, hi, w) = (m.atom_lo(i), m.atom_hi(i), m.atom_weight(i));
        let fx = ((a - lo[0]) / (hi[0] - lo[0])).clamp(0.0, 1.0);
        let fy = ((b - lo[1]) / (hi[1] - lo[1])).clamp(0.0, 1.0);
        both += w * fx * fy;
        left += w * fx;
        below += w * fy;
    }
    let total = m.total_mass();
    (2.0 * both + total - left - below) / total
}

fn one_one_residual(ms: &[BoxMeasure], a: f64, b: f64) -> f64 {
    ms.iter().map(|m| (quadrant_mass(m, a, b) - 0.5).abs()).fold(0.0, f64::max)
}

fn axis_grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step).ceil() as usize;
    (0..=n).map(|i| lo + i as f64 * step).collect()
}

fn joint_bounds(ms: &[BoxMeasure], pad: f64) -> (Vec<f64>, Vec<f64>) {
    let (mut lo, mut hi) = crate::measures::joint_support_box(ms).expect("nonempty");
    lo.iter_mut().for_each(|v| *v -= pad);
    hi.iter_mut().for_each(|v| *v += pad);
    (lo, hi)
}

/// Lower bound on the worst residual of every quadrant chessboard colouring
/// (one vertical and one horizontal line) for two nearby segments.
pub fn refute_one_one(p: &OneOneParams) -> Result<NonExistenceCertificate> {
    let ms = one_one_measures(p)?;
    certify_quadrants(&ms, p.step, p.validation_points, p.seed)
}

/// Grid scan of [`quadrant_mass`] residuals over all corner positions.
pub fn certify_quadrants(ms: &[BoxMeasure], step: f64, validation_points: usize, seed: u64) -> Result<NonExistenceCertificate> {
    let (lo, hi) = joint_bounds(ms, step);
    let xs = axis_grid(lo[0], hi[0], step);
    let ys = axis_grid(lo[1], hi[1], step);
    let (delta, idx) = xs
        .par_iter()
        .enumerate()
        .map(|(i, &a)| {
            ys.iter()
                .enumerate()
                .map(|(j, &b)| (one_one_residual(ms, a, b), i * ys.len() + j))
                .fold((f64::INFINITY, usize::MAX), min_pair)
        })
        .reduce(|| (f64::INFINITY, usize::MAX), min_pair);
    let lipschitz = ms
        .iter()
        .map(|m| (m.max_marginal_density(0) + m.max_marginal_density(1)) / m.total_mass())
        .fold(0.0, f64::max);
    let witness = vec![xs[idx / ys.len()], ys[idx % ys.len()]];
    let mut cert = NonExistenceCertificate {
        claim: "one-one".into(),
        dim: 2,
        step,
        grid_points: (xs.len() * ys.len()) as u64,
        delta,
        lipschitz,
        slack: lipschitz * step,
        witness,
        validated_min: f64::INFINITY,
        validation_points,
    };
    check_slack(&cert)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..validation_points {
        let a = rng.gen_range(lo[0]..hi[0]);
        let b = rng.gen_range(lo[1]..hi[1]);
        cert.validated_min = cert.validated_min.min(one_one_residual(ms, a, b));
    }
    check_validation(&cert)?;
    Ok(cert)
}

fn min_pair(x: (f64, usize), y: (f64, usize)) -> (f64, usize) {
    if y.0 < x.0 || (y.0 == x.0 && y.1 < x.1) {
        y
    } else {
        x
    }
}

fn check_slack(c: &NonExistenceCertificate) -> Result<()> {
    if !(c.delta > 0.0) || !(c.slack < c.delta / 2.0) {
        return Err(FaircutError::CertificateFailed {
            reason: "grid residual does not exceed the Lipschitz slack".into(),
            delta: c.delta,
            slack: c.slack,
        });
    }
    Ok(())
}

fn check_validation(c: &NonExistenceCertificate) -> Result<()> {
    if c.validated_min < c.delta / 2.0 {
        return Err(FaircutError::CertificateFailed {
            reason: format!("off-grid residual {:.3e} below delta/2", c.validated_min),
            delta: c.delta,
            slack: c.slack,
        });
    }
    Ok(())
}

/// A corner where one measure is exactly halved by a quadrant colouring,
/// refined from the best grid point.
pub fn halve_single_quadrant(m: &BoxMeasure, step: f64) -> (Vec<f64>, f64) {
    let ms = std::slice::from_ref(m);
    let (lo, hi) = joint_bounds(ms, step);
    let xs = axis_grid(lo[0], hi[0], step);
    let ys = axis_grid(lo[1], hi[1], step);
    let mut best = (f64::INFINITY, usize::MAX);
    for (i, &a) in xs.iter().enumerate() {
        for (j, &b) in ys.iter().enumerate() {
            best = min_pair(best, (one_one_residual(ms, a, b), i * ys.len() + j));
        }
    }
    let x0 = [xs[best.1 / ys.len()], ys[best.1 % ys.len()]];
    let r = local_newton(|x: &[f64]| vec![quadrant_mass(m, x[0], x[1]) - 0.5], |_: &mut [f64]| {}, &x0, 1e-12, 60, 1e-7);
    (r.x, r.residual)
}

/// The orthant `{x : s_k (x_k - p_k) >= 0}` mass of a box measure.
pub fn orthant_mass(m: &BoxMeasure, p: &[f64], signs: &[f64]) -> f64 {
    let mut total = 0.0;
    for i in 0..m.len() {
        let (lo, hi) = (m.atom_lo(i), m.atom_hi(i));
        let mut f = m.atom_weight(i);
        for k in 0..p.len() {
            let below = ((p[k] - lo[k]) / (hi[k] - lo[k])).clamp(0.0, 1.0);
            f *= if signs[k] > 0.0 { 1.0 - below } else { below };
        }
        total += f;
    }
    total / m.total_mass()
}

fn sign_patterns(d: usize) -> Vec<Vec<f64>> {
    (0..1usize << d).map(|s| (0..d).map(|k| if s >> k & 1 == 1 { -1.0 } else { 1.0 }).collect()).collect()
}

fn orthant_residual(ms: &[BoxMeasure], p: &[f64], patterns: &[Vec<f64>]) -> f64 {
    patterns
        .iter()
        .map(|s| ms.iter().map(|m| (orthant_mass(m, p, s) - 0.5).abs()).fold(0.0, f64::max))
        .fold(f64::INFINITY, f64::min)
}

pub fn orthant_measures(p: &OrthantParams) -> Result<Vec<BoxMeasure>> {
    (1..=p.measures)
        .map(|j| {
            let c: Vec<f64> = p.v.iter().map(|x| j as f64 * x).collect();
            let lo: Vec<f64> = c.iter().map(|x| x - p.radius).collect();
            let hi: Vec<f64> = c.iter().map(|x| x + p.radius).collect();
            BoxMeasure::uniform(&lo, &hi)
        })
        .collect()
}

/// Corner coordinates along one axis: a `step` grid over each box
/// projection, plus one point in every gap where the masses are constant.
fn orthant_axis(ms: &[BoxMeasure], k: usize, step: f64) -> Vec<f64> {
    let mut spans: Vec<(f64, f64)> = ms
        .iter()
        .flat_map(|m| (0..m.len()).map(move |i| (m.atom_lo(i)[k], m.atom_hi(i)[k])))
        .collect();
    spans.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out = Vec::new();
    let mut last = f64::NEG_INFINITY;
    for (lo, hi) in spans {
        let lo = lo - step;
        if lo > last {
            out.push(lo - step);
        }
        for x in axis_grid(lo.max(last), hi + step, step) {
            if x > last {
                out.push(x);
                last = x;
            }
        }
    }
    out.push(last + step);
    out
}

/// Lower bound on the worst residual of every orthant for measures
/// concentrated near `v, 2v, 3v`.
pub fn refute_orthant(p: &OrthantParams) -> Result<NonExistenceCertificate> {
    let d = p.v.len();
    if !(2..=3).contains(&d) {
        return Err(FaircutError::UnsupportedDimension(d));
    }
    if p.v.iter().any(|x| *x == 0.0) {
        return Err(FaircutError::Input("v must not be parallel to a coordinate hyperplane".into()));
    }
    let ms = orthant_measures(p)?;
    for k in 0..d {
        if p.v[k].abs() <= 2.0 * p.radius {
            return Err(FaircutError::CertificateFailed {
                reason: format!("boxes overlap along axis {k}"),
                delta: 0.0,
                slack: f64::INFINITY,
            });
        }
    }
    let axes: Vec<Vec<f64>> = (0..d).map(|k| orthant_axis(&ms, k, p.step)).collect();
    let total: usize = axes.iter().map(|a| a.len()).product();
    let patterns = sign_patterns(d);
    let point = |idx: usize| -> Vec<f64> {
        let mut r = idx;
        let mut x = vec![0.0; d];
        for k in (0..d).rev() {
            x[k] = axes[k][r % axes[k].len()];
            r /= axes[k].len();
        }
        x
    };
    let (delta, idx) = (0..total)
        .into_par_iter()
        .with_min_len(4096)
        .map(|i| (orthant_residual(&ms, &point(i), &patterns), i))
        .reduce(|| (f64::INFINITY, usize::MAX), min_pair);
    let lipschitz = ms
        .iter()
        .map(|m| (0..d).map(|k| m.max_marginal_density(k)).sum::<f64>() / m.total_mass())
        .fold(0.0, f64::max);
    let mut cert = NonExistenceCertificate {
        claim: "orthant".into(),
        dim: d,
        step: p.step,
        grid_points: total as u64,
        delta,
        lipschitz,
        slack: lipschitz * p.step,
        witness: point(idx),
        validated_min: f64::INFINITY,
        validation_points: p.validation_points,
    };
    check_slack(&cert)?;
    let (lo, hi) = joint_bounds(&ms, p.step);
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    for _ in 0..p.validation_points {
        let x: Vec<f64> = (0..d).map(|k| rng.gen_range(lo[k]..hi[k])).collect();
        cert.validated_min = cert.validated_min.min(orthant_residual(&ms, &x, &patterns));
    }
    check_validation(&cert)?;
    Ok(cert)
}

/// Orthant corner and signs halving every measure, found by scanning and
/// refined by Newton. Used when a certificate must not exist.
pub fn find_halving_orthant(ms: &[BoxMeasure], step: f64) -> Result<(Vec<f64>, Vec<f64>, f64)> {
    let d = ms.first().map(|m| m.dim()).ok_or_else(|| FaircutError::Input("no measures".into()))?;
    let axes: Vec<Vec<f64>> = (0..d).map(|k| orthant_axis(ms, k, step)).collect();
    let total: usize = axes.iter().map(|a| a.len()).product();
    let mut best: Option<(f64, Vec<f64>, Vec<f64>)> = None;
    for s in sign_patterns(d) {
        for i in 0..total {
            let mut r = i;
            let mut x = vec![0.0; d];
            for k in (0..d).rev() {
                x[k] = axes[k][r % axes[k].len()];
                r /= axes[k].len();
            }
            let v = ms.iter().map(|m| (orthant_mass(m, &x, &s) - 0.5).abs()).fold(0.0, f64::max);
            if best.as_ref().map_or(true, |b| v < b.0) {
                best = Some((v, x, s.clone()));
            }
        }
    }
    let (_, x0, s) = best.expect("nonempty grid");
    let r = local_newton(
        |x: &[f64]| ms.iter().map(|m| orthant_mass(m, x, &s) - 0.5).collect(),
        |_: &mut [f64]| {},
        &x0,
        1e-12,
        80,
        1e-7,
    );
    Ok((r.x, s, r.residual))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{ConvexRegion, Halfspace};

    #[test]
    fn quadrant_mass_matches_clipping() {
        let m = BoxMeasure::uniform(&[0.0, 0.0], &[2.0, 1.0]).unwrap();
        let (a, b) = (0.5, 0.25);
        let ne = ConvexRegion::full(2).with(Halfspace::axis_ge(2, 0, a)).with(Halfspace::axis_ge(2, 1, b));
        let sw = ConvexRegion::full(2).with(Halfspace::axis_le(2, 0, a)).with(Halfspace::axis_le(2, 1, b));
        let want = m.mass(&ne) + m.mass(&sw);
        assert!((quadrant_mass(&m, a, b) - want).abs() < 1e-15);
    }

    #[test]
    fn orthant_mass_matches_clipping() {
        let m = BoxMeasure::uniform(&[0.0, 0.0, 0.0], &[1.0, 2.0, 3.0]).unwrap();
        let p = [0.3, 1.1, 0.4];
        let s = [1.0, -1.0, 1.0];
        let r = ConvexRegion::full(3)
            .with(Halfspace::axis_ge(3, 0, p[0]))
            .with(Halfspace::axis_le(3, 1, p[1]))
            .with(Halfspace::axis_ge(3, 2, p[2]));
        assert!((orthant_mass(&m, &p, &s) - m.mass(&r)).abs() < 1e-15);
    }

    #[test]
    fn one_segment_alone_can_be_halved() {
        let ms = one_one_measures(&OneOneParams { width: 1e-2, ..Default::default() }).unwrap();
        let (_, res) = halve_single_quadrant(&ms[0], 1e-2);
        assert!(res <= 1e-9);
    }

    #[test]
    fn identical_segments_do_not_certify() {
        let p = OneOneParams { width: 1e-2, offset: 0.0, step: 1e-2, ..Default::default() };
        assert!(matches!(refute_one_one(&p), Err(FaircutError::CertificateFailed { .. })));
    }

    #[test]
    fn wide_boxes_do_not_certify() {
        let p = OrthantParams { radius: 0.7, ..OrthantParams::new(2) };
        assert!(matches!(refute_orthant(&p), Err(FaircutError::CertificateFailed { .. })));
    }

    #[test]
    fn two_measures_have_a_halving_orthant() {
        let p = OrthantParams { measures: 2, ..OrthantParams::new(2) };
        let ms = orthant_measures(&p).unwrap();
        let (x, s, res) = find_halving_orthant(&ms, 1e-3).unwrap();
        assert!(res <= 1e-6);
        for m in &ms {
            assert!((orthant_mass(m, &x, &s) - 0.5).abs() <= 1e-6);
        }
    }

    #[test]
    fn orthant_certificate_in_three_dimensions() {
        let c = refute_orthant(&OrthantParams::new(3)).unwrap();
        assert!(c.delta > 2.0 * c.slack);
    }
}
