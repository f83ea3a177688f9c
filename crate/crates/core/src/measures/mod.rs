//! Measures given as weighted unions of axis-aligned boxes, and their exact
//! evaluation against convex regions.
//!
//! Box densities make every halving equation in this crate exactly
//! evaluable: a box cut by halfspaces is clipped as a polytope (d <= 3), and
//! the fraction of its volume inside the region is its share of the atom's
//! weight. Dimensions above three fall back to stratified Monte Carlo.

mod clip;
mod marginal;
mod montecarlo;
mod points;
mod region;
mod restrict;

pub use marginal::Marginal1d;
pub use montecarlo::{mass_estimate, monte_carlo_mass, MassEstimate};
pub use points::{PointAtom, PointMeasure};
pub use region::{ConvexRegion, Halfspace};
pub use restrict::{restrict, Restriction, DEFAULT_RESTRICT_RTOL};

pub(crate) use clip::{clip_polygon_all, polygon_area};
pub(crate) use region::dot;

use crate::error::{FaircutError, Result};
use serde::{Deserialize, Serialize};

/// Anything that can report its mass on a convex region.
///
/// Implementations are immutable and safe to evaluate from several threads.
pub trait Measure: Send + Sync {
    fn dim(&self) -> usize;

    /// Mass of `r`. Dimensions are assumed to agree; see [`mass_of_region`]
    /// for the checked entry point.
    fn mass(&self, r: &ConvexRegion) -> f64;

    /// A box outside of which the measure vanishes.
    fn support_box(&self) -> (Vec<f64>, Vec<f64>);
}

/// One weighted box of a [`BoxMeasure`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxAtom {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub weight: f64,
}

impl BoxAtom {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>, weight: f64) -> Self {
        BoxAtom { lo, hi, weight }
    }
}

/// A probability measure with piecewise-constant density: a normalized sum of
/// uniform densities on boxes. Overlapping boxes add.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxMeasure {
    dim: usize,
    lo: Vec<f64>,
    hi: Vec<f64>,
    weights: Vec<f64>,
    normalization: f64,
}

impl BoxMeasure {
    /// Builds and normalizes a measure. Weights must be positive and boxes
    /// must have positive volume.
    pub fn new(dim: usize, atoms: Vec<BoxAtom>) -> Result<Self> {
        if dim == 0 {
            return Err(FaircutError::Input("measure dimension must be >= 1".into()));
        }
        if atoms.is_empty() {
            return Err(FaircutError::Input("measure has no atoms".into()));
        }
        let mut lo = Vec::with_capacity(atoms.len() * dim);
        let mut hi = Vec::with_capacity(atoms.len() * dim);
        let mut weights = Vec::with_capacity(atoms.len());
        for (i, a) in atoms.iter().enumerate() {
            if a.lo.len() != dim || a.hi.len() != dim {
                return Err(FaircutError::dim(dim, a.lo.len().max(a.hi.len())));
            }
            if !(a.weight > 0.0 && a.weight.is_finite()) {
                return Err(FaircutError::Input(format!("atom {i}: weight must be positive")));
            }
            for k in 0..dim {
                if !(a.lo[k].is_finite() && a.hi[k].is_finite() && a.lo[k] < a.hi[k]) {
                    return Err(FaircutError::Input(format!(
                        "atom {i}: box side {k} must satisfy lo < hi with finite ends"
                    )));
                }
            }
            lo.extend_from_slice(&a.lo);
            hi.extend_from_slice(&a.hi);
            weights.push(a.weight);
        }
        let total: f64 = weights.iter().sum();
        for w in &mut weights {
            *w /= total;
        }
        Ok(BoxMeasure { dim, lo, hi, weights, normalization: total })
    }

    /// Uniform probability measure on one box.
    pub fn uniform(lo: &[f64], hi: &[f64]) -> Result<Self> {
        BoxMeasure::new(lo.len(), vec![BoxAtom::new(lo.to_vec(), hi.to_vec(), 1.0)])
    }

    /// Uniform measure on `[lo, hi]` in one dimension.
    pub fn interval(lo: f64, hi: f64) -> Result<Self> {
        BoxMeasure::uniform(&[lo], &[hi])
    }

    /// The sum of input weights before normalization.
    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn atom_lo(&self, i: usize) -> &[f64] {
        &self.lo[i * self.dim..(i + 1) * self.dim]
    }

    pub fn atom_hi(&self, i: usize) -> &[f64] {
        &self.hi[i * self.dim..(i + 1) * self.dim]
    }

    pub fn atom_weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    pub fn atoms(&self) -> Vec<BoxAtom> {
        (0..self.len())
            .map(|i| BoxAtom::new(self.atom_lo(i).to_vec(), self.atom_hi(i).to_vec(), self.weights[i]))
            .collect()
    }

    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn translated(&self, t: &[f64]) -> BoxMeasure {
        let mut out = self.clone();
        for i in 0..self.len() {
            for k in 0..self.dim {
                out.lo[i * self.dim + k] += t[k];
                out.hi[i * self.dim + k] += t[k];
            }
        }
        out
    }

    /// Convex combination of measures of equal dimension.
    pub fn mixture(parts: &[(&BoxMeasure, f64)]) -> Result<BoxMeasure> {
        let dim = parts.first().map(|p| p.0.dim).unwrap_or(0);
        let mut atoms = Vec::new();
        for (m, w) in parts {
            if m.dim != dim {
                return Err(FaircutError::dim(dim, m.dim));
            }
            if *w <= 0.0 {
                continue;
            }
            for mut a in m.atoms() {
                a.weight *= w;
                atoms.push(a);
            }
        }
        BoxMeasure::new(dim, atoms)
    }

    /// Largest density of the marginal along `axis`, used for Lipschitz bounds.
    pub fn max_marginal_density(&self, axis: usize) -> f64 {
        let mut events: Vec<(f64, f64)> = Vec::with_capacity(2 * self.len());
        for i in 0..self.len() {
            let (a, b) = (self.atom_lo(i)[axis], self.atom_hi(i)[axis]);
            let dens = self.weights[i] / (b - a);
            events.push((a, dens));
            events.push((b, -dens));
        }
        // Process closings before openings at equal coordinates.
        events.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1)));
        let mut cur: f64 = 0.0;
        let mut best: f64 = 0.0;
        for (_, d) in events {
            cur += d;
            best = best.max(cur);
        }
        best
    }

    /// Fraction of atom `i` inside `r`, exact for d <= 3.
    fn atom_fraction(&self, i: usize, r: &ConvexRegion) -> f64 {
        let lo = self.atom_lo(i);
        let hi = self.atom_hi(i);
        atom_fraction(lo, hi, r).unwrap_or_else(|planes| {
            montecarlo::unit_cube_fraction_mc(&planes, self.dim, MC_SAMPLES_PER_ATOM, i as u64).value
        })
    }
}

const MC_SAMPLES_PER_ATOM: usize = 40_000;

/// Exact fraction of `[lo, hi]` inside `r`, or the unit-cube planes when the
/// dimension needs the Monte Carlo path.
pub(crate) fn atom_fraction(lo: &[f64], hi: &[f64], r: &ConvexRegion) -> std::result::Result<f64, Vec<clip::Plane>> {
    let dim = lo.len();
    let mut cutting: Vec<&Halfspace> = Vec::new();
    for h in &r.halfspaces {
        if h.is_trivially_full() {
            continue;
        }
        if h.is_trivially_empty() {
            return Ok(0.0);
        }
        let (mut mn, mut mx) = (0.0, 0.0);
        for k in 0..dim {
            let c = h.normal[k];
            if c >= 0.0 {
                mn += c * lo[k];
                mx += c * hi[k];
            } else {
                mn += c * hi[k];
                mx += c * lo[k];
            }
        }
        if mx <= h.offset {
            continue;
        }
        if mn >= h.offset {
            return Ok(0.0);
        }
        cutting.push(h);
    }
    if cutting.is_empty() {
        return Ok(1.0);
    }
    if cutting.iter().all(|h| h.axis().is_some()) {
        let mut frac = 1.0;
        let mut a = lo.to_vec();
        let mut b = hi.to_vec();
        for h in &cutting {
            let k = h.axis().unwrap();
            let c = h.normal[k];
            let t = h.offset / c;
            if c > 0.0 {
                b[k] = b[k].min(t);
            } else {
                a[k] = a[k].max(t);
            }
        }
        for k in 0..dim {
            if b[k] <= a[k] {
                return Ok(0.0);
            }
            frac *= (b[k] - a[k]) / (hi[k] - lo[k]);
        }
        return Ok(frac);
    }
    let planes: Vec<clip::Plane> = cutting
        .iter()
        .map(|h| {
            let a: Vec<f64> = (0..dim).map(|k| h.normal[k] * (hi[k] - lo[k])).collect();
            let b = h.offset - dot(&h.normal, lo);
            (a, b)
        })
        .collect();
    if dim <= 3 {
        Ok(clip::unit_cube_fraction(&planes, dim))
    } else {
        Err(planes)
    }
}

impl Measure for BoxMeasure {
    fn dim(&self) -> usize {
        self.dim
    }

    fn mass(&self, r: &ConvexRegion) -> f64 {
        if r.is_trivially_empty() {
            return 0.0;
        }
        (0..self.len()).map(|i| self.weights[i] * self.atom_fraction(i, r)).sum()
    }

    fn support_box(&self) -> (Vec<f64>, Vec<f64>) {
        let mut lo = vec![f64::INFINITY; self.dim];
        let mut hi = vec![f64::NEG_INFINITY; self.dim];
        for i in 0..self.len() {
            for k in 0..self.dim {
                lo[k] = lo[k].min(self.atom_lo(i)[k]);
                hi[k] = hi[k].max(self.atom_hi(i)[k]);
            }
        }
        (lo, hi)
    }
}

impl<T: Measure + ?Sized> Measure for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn mass(&self, r: &ConvexRegion) -> f64 {
        (**self).mass(r)
    }
    fn support_box(&self) -> (Vec<f64>, Vec<f64>) {
        (**self).support_box()
    }
}

/// Mass of `r` under `m`; exact for d <= 3.
pub fn mass_of_region<M: Measure + ?Sized>(m: &M, r: &ConvexRegion) -> Result<f64> {
    if m.dim() != r.dim {
        return Err(FaircutError::dim(m.dim(), r.dim));
    }
    for h in &r.halfspaces {
        if h.dim() != r.dim {
            return Err(FaircutError::dim(r.dim, h.dim()));
        }
    }
    Ok(m.mass(r))
}

/// Sum of masses over pairwise interior-disjoint regions.
pub fn mass_of_union<M: Measure + ?Sized>(m: &M, rs: &[ConvexRegion]) -> Result<f64> {
    let mut total = 0.0;
    for r in rs {
        total += mass_of_region(m, r)?;
    }
    Ok(total)
}

/// A measure restricted to a union of interior-disjoint convex pieces and
/// renormalized. Masses stay exact: each query is intersected with every piece.
#[derive(Debug, Clone, PartialEq)]
pub struct RestrictedMeasure {
    base: BoxMeasure,
    pieces: Vec<ConvexRegion>,
    mass: f64,
}

impl RestrictedMeasure {
    pub fn whole(base: BoxMeasure) -> Self {
        let dim = base.dim;
        RestrictedMeasure { base, pieces: vec![ConvexRegion::full(dim)], mass: 1.0 }
    }

    /// Restricts further to `pieces`; the result is renormalized and its
    /// unnormalized mass relative to the original base is recorded.
    pub fn restricted_to(&self, pieces: &[ConvexRegion]) -> Result<RestrictedMeasure> {
        let mut out = Vec::new();
        for p in &self.pieces {
            for q in pieces {
                let r = p.intersect(q).simplified();
                if !r.is_trivially_empty() {
                    out.push(r);
                }
            }
        }
        let mass: f64 = out.iter().map(|r| self.base.mass(r)).sum();
        if mass <= 0.0 {
            return Err(FaircutError::Input("restriction to a null set".into()));
        }
        Ok(RestrictedMeasure { base: self.base.clone(), pieces: out, mass })
    }

    /// Mass of the pieces under the original base measure.
    pub fn base_mass(&self) -> f64 {
        self.mass
    }

    pub fn base(&self) -> &BoxMeasure {
        &self.base
    }

    pub fn pieces(&self) -> &[ConvexRegion] {
        &self.pieces
    }
}

impl Measure for RestrictedMeasure {
    fn dim(&self) -> usize {
        self.base.dim
    }

    fn mass(&self, r: &ConvexRegion) -> f64 {
        self.pieces.iter().map(|p| self.base.mass(&p.intersect(r))).sum::<f64>() / self.mass
    }

    fn support_box(&self) -> (Vec<f64>, Vec<f64>) {
        self.base.support_box()
    }
}

/// Reference measure used to parametrize cut positions: a mixture of the
/// input measures' average and a uniform floor on their common bounding box,
/// so that every open set meeting the box has positive mass.
pub struct Reference<'a, M> {
    measures: &'a [M],
    floor: BoxMeasure,
    floor_weight: f64,
}

pub const REFERENCE_FLOOR_WEIGHT: f64 = 0.05;

impl<'a, M: Measure> Reference<'a, M> {
    pub fn new(measures: &'a [M]) -> Result<Self> {
        let (lo, hi) = joint_support_box(measures)?;
        Ok(Reference { measures, floor: BoxMeasure::uniform(&lo, &hi)?, floor_weight: REFERENCE_FLOOR_WEIGHT })
    }

    pub fn bounds(&self) -> (Vec<f64>, Vec<f64>) {
        self.floor.support_box()
    }
}

impl<M: Measure> Measure for Reference<'_, M> {
    fn dim(&self) -> usize {
        self.floor.dim
    }

    fn mass(&self, r: &ConvexRegion) -> f64 {
        let avg = self.measures.iter().map(|m| m.mass(r)).sum::<f64>() / self.measures.len() as f64;
        (1.0 - self.floor_weight) * avg + self.floor_weight * self.floor.mass(r)
    }

    fn support_box(&self) -> (Vec<f64>, Vec<f64>) {
        self.floor.support_box()
    }
}

/// The reference mixture as an explicit box measure: the average of
/// `measures` plus the uniform floor on their joint bounding box.
pub fn reference_mixture(measures: &[BoxMeasure]) -> Result<BoxMeasure> {
    let (lo, hi) = joint_support_box(measures)?;
    let floor = BoxMeasure::uniform(&lo, &hi)?;
    let w = (1.0 - REFERENCE_FLOOR_WEIGHT) / measures.len() as f64;
    let mut parts: Vec<(&BoxMeasure, f64)> = measures.iter().map(|m| (m, w)).collect();
    parts.push((&floor, REFERENCE_FLOOR_WEIGHT));
    BoxMeasure::mixture(&parts)
}

/// Bounding box of the union of supports, widened slightly when degenerate.
pub fn joint_support_box<M: Measure>(measures: &[M]) -> Result<(Vec<f64>, Vec<f64>)> {
    let first = measures.first().ok_or_else(|| FaircutError::Input("no measures given".into()))?;
    let dim = first.dim();
    let mut lo = vec![f64::INFINITY; dim];
    let mut hi = vec![f64::NEG_INFINITY; dim];
    for m in measures {
        if m.dim() != dim {
            return Err(FaircutError::dim(dim, m.dim()));
        }
        let (a, b) = m.support_box();
        for k in 0..dim {
            lo[k] = lo[k].min(a[k]);
            hi[k] = hi[k].max(b[k]);
        }
    }
    for k in 0..dim {
        if hi[k] <= lo[k] {
            hi[k] = lo[k] + 1.0;
        }
    }
    Ok((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_square() -> BoxMeasure {
        BoxMeasure::uniform(&[0.0, 0.0], &[1.0, 1.0]).unwrap()
    }

    #[test]
    fn halfspace_examples() {
        let m = unit_square();
        let r = ConvexRegion::full(2).with(Halfspace::axis_le(2, 0, 0.5));
        assert!((mass_of_region(&m, &r).unwrap() - 0.5).abs() < 1e-15);
        let d = ConvexRegion::full(2).with(Halfspace::new(vec![1.0, 1.0], 1.0));
        assert!((mass_of_region(&m, &d).unwrap() - 0.5).abs() < 1e-15);
        let q = ConvexRegion::full(2)
            .with(Halfspace::axis_le(2, 0, 0.25))
            .with(Halfspace::axis_le(2, 1, 0.5));
        assert!((mass_of_region(&m, &q).unwrap() - 0.125).abs() < 1e-15);
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let m = unit_square();
        let r = ConvexRegion::full(3);
        assert!(matches!(mass_of_region(&m, &r), Err(FaircutError::Dimension { .. })));
    }

    #[test]
    fn union_examples() {
        let m = BoxMeasure::interval(0.0, 1.0).unwrap();
        let rs = vec![
            ConvexRegion::full(1).with(Halfspace::axis_le(1, 0, 0.2)),
            ConvexRegion::full(1).with(Halfspace::axis_ge(1, 0, 0.7)),
        ];
        assert!((mass_of_union(&m, &rs).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(mass_of_union(&m, &[]).unwrap(), 0.0);
        assert!((mass_of_union(&m, &[ConvexRegion::full(1)]).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn overlapping_boxes_add_densities() {
        let m = BoxMeasure::new(
            1,
            vec![BoxAtom::new(vec![0.0], vec![1.0], 1.0), BoxAtom::new(vec![0.0], vec![0.5], 1.0)],
        )
        .unwrap();
        let r = ConvexRegion::full(1).with(Halfspace::axis_le(1, 0, 0.5));
        assert!((m.mass(&r) - 0.75).abs() < 1e-15);
        assert!((m.max_marginal_density(0) - 1.5).abs() < 1e-15);
        assert_eq!(m.normalization(), 2.0);
    }

    #[test]
    fn invalid_boxes_are_rejected() {
        assert!(BoxMeasure::new(1, vec![BoxAtom::new(vec![1.0], vec![1.0], 1.0)]).is_err());
        assert!(BoxMeasure::new(1, vec![BoxAtom::new(vec![0.0], vec![1.0], -1.0)]).is_err());
        assert!(BoxMeasure::new(2, vec![BoxAtom::new(vec![0.0], vec![1.0], 1.0)]).is_err());
    }

    #[test]
    fn three_dimensional_diagonal_cut() {
        let m = BoxMeasure::uniform(&[0.0, 0.0, 0.0], &[2.0, 2.0, 2.0]).unwrap();
        let r = ConvexRegion::full(3).with(Halfspace::new(vec![1.0, 1.0, 1.0], 3.0));
        assert!((m.mass(&r) - 0.5).abs() < 1e-14);
    }

    #[test]
    fn restricted_measure_is_exact() {
        let base = unit_square();
        let whole = RestrictedMeasure::whole(base);
        let tri = ConvexRegion::full(2).with(Halfspace::new(vec![1.0, 1.0], 1.0));
        let r = whole.restricted_to(&[tri]).unwrap();
        assert!((r.base_mass() - 0.5).abs() < 1e-15);
        let left = ConvexRegion::full(2).with(Halfspace::axis_le(2, 0, 0.5));
        // triangle below x+y=1 left of x=0.5 has area 0.375 of the 0.5 total
        assert!((r.mass(&left) - 0.75).abs() < 1e-14);
    }
}
