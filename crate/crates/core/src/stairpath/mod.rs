//! Two-colour plane partitions built from horizontal strips, each either
//! entirely one colour or split by one vertical line, and their conversion
//! to y-monotone stair paths.
//!
//! A (0,1)-vector `M` selects the strip types bottom to top. The space of
//! such partitions is a sphere whose dimension equals the number of strips
//! plus the number of split strips, minus one. Strip `i` owns the next one
//! (whole strip) or two (split strip) octahedral coordinates; the L1 norm of
//! its block is the reference mass of the strip.

mod path;

pub use path::{Segment, StairPath};

use crate::busolver::{self, OctahedralPoint, SolverOptions};
use crate::error::{FaircutError, Result};
use crate::measures::{reference_mixture, BoxMeasure, ConvexRegion, Halfspace, Marginal1d, Measure};
use crate::Side;
use serde::{Deserialize, Serialize};

/// Strip types bottom to top: `false` for a whole strip, `true` for a split one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutVector(pub Vec<bool>);

impl CutVector {
    pub fn from_bits(bits: &[u8]) -> Self {
        CutVector(bits.iter().map(|b| *b != 0).collect())
    }

    /// `s` split strips.
    pub fn ones(s: usize) -> Self {
        CutVector(vec![true; s])
    }

    /// `s` split strips topped by one whole strip.
    pub fn ones_then_zero(s: usize) -> Self {
        let mut v = vec![true; s];
        v.push(false);
        CutVector(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weight(&self) -> usize {
        self.0.iter().filter(|b| **b).count()
    }

    /// Number of sphere coordinates: strips plus split strips.
    pub fn capacity(&self) -> usize {
        self.len() + self.weight()
    }

    /// The vector used to halve `t` measures with at most `t - 1` turns.
    pub fn for_halving(t: usize) -> Self {
        if t % 2 == 1 {
            CutVector::ones(t.div_ceil(2))
        } else {
            CutVector::ones_then_zero(t / 2)
        }
    }
}

/// What happens inside one strip.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Strip {
    Whole { side: Side },
    Split {
        #[serde(with = "crate::io::ext_real")]
        x: f64,
        left: Side,
    },
}

impl Strip {
    fn side_at(&self, x: f64) -> Side {
        match *self {
            Strip::Whole { side } => side,
            Strip::Split { x: c, left } => {
                if x < c {
                    left
                } else {
                    left.flip()
                }
            }
        }
    }

    /// The split with an infinite abscissa is a whole strip in disguise.
    fn normalized(&self) -> Strip {
        match *self {
            Strip::Split { x, left } if x == f64::INFINITY => Strip::Whole { side: left },
            Strip::Split { x, left } if x == f64::NEG_INFINITY => Strip::Whole { side: left.flip() },
            s => s,
        }
    }

    fn swapped(&self) -> Strip {
        match *self {
            Strip::Whole { side } => Strip::Whole { side: side.flip() },
            Strip::Split { x, left } => Strip::Split { x, left: left.flip() },
        }
    }
}

/// Strip boundaries `y_1 <= ... <= y_{n-1}` (extended reals) and one choice
/// per strip. Strip `i` is `y_{i-1} <= y < y_i`, with `y_0 = -inf` and
/// `y_n = +inf`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StairPartition {
    #[serde(with = "crate::io::ext_real::vec")]
    pub y_breaks: Vec<f64>,
    pub strips: Vec<Strip>,
}

impl StairPartition {
    pub fn strip_bounds(&self, i: usize) -> (f64, f64) {
        let lo = if i == 0 { f64::NEG_INFINITY } else { self.y_breaks[i - 1] };
        let hi = if i == self.strips.len() - 1 { f64::INFINITY } else { self.y_breaks[i] };
        (lo, hi)
    }

    pub fn side_of(&self, p: &[f64]) -> Side {
        let i = self.y_breaks.partition_point(|y| *y <= p[1]);
        self.strips[i].side_at(p[0])
    }

    /// Both colour classes exchanged.
    pub fn swapped(&self) -> StairPartition {
        StairPartition { y_breaks: self.y_breaks.clone(), strips: self.strips.iter().map(Strip::swapped).collect() }
    }

    /// Rectangles (as convex regions) making up side `s`.
    pub fn regions(&self, s: Side) -> Vec<ConvexRegion> {
        let mut out = Vec::new();
        for (i, strip) in self.strips.iter().enumerate() {
            let (lo, hi) = self.strip_bounds(i);
            if !(hi > lo) {
                continue;
            }
            let mut band = ConvexRegion::full(2);
            if lo.is_finite() {
                band.push(Halfspace::axis_ge(2, 1, lo));
            }
            if hi.is_finite() {
                band.push(Halfspace::below(&[0.0, 1.0], hi));
            }
            match strip.normalized() {
                Strip::Whole { side } => {
                    if side == s {
                        out.push(band);
                    }
                }
                Strip::Split { x, left } => {
                    if left == s {
                        out.push(band.with(Halfspace::below(&[1.0, 0.0], x)));
                    } else {
                        out.push(band.with(Halfspace::axis_ge(2, 0, x)));
                    }
                }
            }
        }
        out
    }

    pub fn mass<M: Measure>(&self, m: &M, s: Side) -> f64 {
        self.regions(s).iter().map(|r| m.mass(r)).sum()
    }

    /// Number of strips with positive height.
    pub fn nonempty_strips(&self) -> usize {
        (0..self.strips.len()).filter(|&i| {
            let (lo, hi) = self.strip_bounds(i);
            hi > lo
        }).count()
    }
}

/// Quantile functions of a reference measure along both axes.
pub struct StairChart {
    qx: Marginal1d,
    qy: Marginal1d,
    m: CutVector,
}

impl StairChart {
    pub fn new(reference: &BoxMeasure, m: CutVector) -> Result<Self> {
        if reference.dim() != 2 {
            return Err(FaircutError::dim(2, reference.dim()));
        }
        if m.is_empty() {
            return Err(FaircutError::Input("cut vector must be nonempty".into()));
        }
        Ok(StairChart { qx: Marginal1d::new(reference, 0), qy: Marginal1d::new(reference, 1), m })
    }

    pub fn cut_vector(&self) -> &CutVector {
        &self.m
    }

    /// The partition encoded by an octahedral point of the right dimension.
    ///
    /// For a split strip with normalized block `(a, b)`, the left side is A
    /// when `b > 0` (or `b = 0 < a`) and the abscissa is the x-quantile of
    /// `(1 - a)/2` or `(1 + a)/2` respectively. Negating the point swaps
    /// the colours and keeps every abscissa.
    pub fn partition(&self, x: &[f64]) -> Result<StairPartition> {
        if x.len() != self.m.capacity() {
            return Err(FaircutError::dim(self.m.capacity(), x.len()));
        }
        let total: f64 = x.iter().map(|v| v.abs()).sum();
        let mut strips = Vec::with_capacity(self.m.len());
        let mut y_breaks = Vec::with_capacity(self.m.len().saturating_sub(1));
        let mut acc = 0.0;
        let mut pos = 0;
        for (i, &split) in self.m.0.iter().enumerate() {
            let width = if split { 2 } else { 1 };
            let block = &x[pos..pos + width];
            pos += width;
            let h: f64 = block.iter().map(|v| v.abs()).sum::<f64>();
            acc += h / total;
            if i + 1 < self.m.len() {
                y_breaks.push(self.qy.quantile(acc));
            }
            let strip = if !split {
                Strip::Whole { side: if block[0] < 0.0 { Side::B } else { Side::A } }
            } else if h == 0.0 {
                Strip::Split { x: self.qx.quantile(0.5), left: Side::A }
            } else {
                let (a, b) = (block[0] / h, block[1] / h);
                let left_is_a = b > 0.0 || (b == 0.0 && a > 0.0);
                let u = if left_is_a { 0.5 * (1.0 - a) } else { 0.5 * (1.0 + a) };
                Strip::Split { x: self.qx.quantile(u), left: if left_is_a { Side::A } else { Side::B } }
            };
            strips.push(strip);
        }
        for i in 1..y_breaks.len() {
            if y_breaks[i] < y_breaks[i - 1] {
                y_breaks[i] = y_breaks[i - 1];
            }
        }
        Ok(StairPartition { y_breaks, strips })
    }
}

/// The partition attached to a sphere point, with quantiles taken from
/// `reference`.
pub fn sphere_to_partition(x: &OctahedralPoint, m: &CutVector, reference: &BoxMeasure) -> Result<StairPartition> {
    StairChart::new(reference, m.clone())?.partition(&x.coords)
}

/// The halving test map `x -> (μ_i(A) - 1/2)_i`.
pub struct StairMap<'a> {
    chart: StairChart,
    measures: &'a [BoxMeasure],
}

impl<'a> StairMap<'a> {
    pub fn new(measures: &'a [BoxMeasure], m: CutVector) -> Result<Self> {
        if measures.is_empty() {
            return Err(FaircutError::Input("at least one measure is required".into()));
        }
        for mu in measures {
            if mu.dim() != 2 {
                return Err(FaircutError::dim(2, mu.dim()));
            }
        }
        if m.capacity() != measures.len() + 1 {
            return Err(FaircutError::Input(format!(
                "cut vector has {} sphere coordinates, {} measures need {}",
                m.capacity(),
                measures.len(),
                measures.len() + 1
            )));
        }
        let reference = reference_mixture(measures)?;
        Ok(StairMap { chart: StairChart::new(&reference, m)?, measures })
    }

    pub fn dim(&self) -> usize {
        self.chart.m.capacity()
    }

    pub fn eval(&self, x: &[f64]) -> Vec<f64> {
        let p = self.chart.partition(x).expect("dimension checked");
        let regions = p.regions(Side::A);
        self.measures
            .iter()
            .map(|m| regions.iter().map(|r| m.mass(r)).sum::<f64>() - 0.5)
            .collect()
    }

    pub fn partition(&self, x: &[f64]) -> StairPartition {
        self.chart.partition(x).expect("dimension checked")
    }
}

/// A partition of type `m` halving every measure, where `m` has exactly
/// one more sphere coordinate than there are measures.
pub fn solve_equipartition(measures: &[BoxMeasure], m: &CutVector, opts: &SolverOptions) -> Result<StairPartition> {
    let map = StairMap::new(measures, m.clone())?;
    let sol = busolver::antipodal_zero(map.dim(), |x: &[f64]| map.eval(x), opts)?;
    Ok(map.partition(&sol.point.coords))
}

/// A stair path with at most `t - 1` turns halving all `t` measures, with
/// the partition it bounds.
pub fn halve_with_path(measures: &[BoxMeasure], opts: &SolverOptions) -> Result<(StairPartition, StairPath)> {
    let m = CutVector::for_halving(measures.len());
    let p = solve_equipartition(measures, &m, opts)?;
    let path = to_path(&p, &m)?;
    if path.turns + 1 > measures.len().max(1) {
        return Err(FaircutError::Contract(format!("{} turns for {} measures", path.turns, measures.len())));
    }
    Ok((p, path))
}

/// The stair path bounding a partition of type `1_s` or `1_s * 0`.
pub fn to_path(p: &StairPartition, m: &CutVector) -> Result<StairPath> {
    let w = m.weight();
    let shape_ok = m.0[..w].iter().all(|b| *b) && (m.len() == w || m.len() == w + 1) && w >= 1;
    if !shape_ok || p.strips.len() != m.len() {
        return Err(FaircutError::UnsupportedShape(format!("cut vector {:?} is not all ones, optionally followed by one zero", m.0)));
    }
    Ok(StairPath::from_partition(p))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_square() -> BoxMeasure {
        BoxMeasure::uniform(&[0.0, 0.0], &[1.0, 1.0]).unwrap()
    }

    #[test]
    fn single_whole_strip() {
        let p = sphere_to_partition(&OctahedralPoint::new(vec![1.0]).unwrap(), &CutVector::from_bits(&[0]), &unit_square()).unwrap();
        assert_eq!(p.strips, vec![Strip::Whole { side: Side::A }]);
        assert_eq!(p.side_of(&[123.0, -7.0]), Side::A);
    }

    #[test]
    fn four_poles_of_one_split_strip() {
        let m = CutVector::from_bits(&[1]);
        let r = unit_square();
        let at = |a: f64, b: f64| sphere_to_partition(&OctahedralPoint::new(vec![a, b]).unwrap(), &m, &r).unwrap();
        let probe = |p: &StairPartition| (p.side_of(&[0.25, 0.5]), p.side_of(&[0.75, 0.5]));
        assert_eq!(probe(&at(1.0, 0.0)), (Side::B, Side::B));
        assert_eq!(probe(&at(-1.0, 0.0)), (Side::A, Side::A));
        assert_eq!(probe(&at(0.0, 1.0)), (Side::A, Side::B));
        assert_eq!(probe(&at(0.0, -1.0)), (Side::B, Side::A));
        assert_eq!(at(0.0, 1.0).strips[0], Strip::Split { x: 0.5, left: Side::A });
    }

    #[test]
    fn two_split_strips_with_equal_weight() {
        let m = CutVector::from_bits(&[1, 1]);
        let x = OctahedralPoint::new(vec![0.1, 0.4, -0.2, 0.3]).unwrap();
        let p = sphere_to_partition(&x, &m, &unit_square()).unwrap();
        assert!((p.y_breaks[0] - 0.5).abs() < 1e-15);
        // abscissae at (1 - 0.2)/2 and (1 + 0.4)/2 of the uniform square
        assert!(matches!(p.strips[0], Strip::Split { x, left: Side::A } if (x - 0.4).abs() < 1e-15));
        assert!(matches!(p.strips[1], Strip::Split { x, left: Side::A } if (x - 0.7).abs() < 1e-15));
    }

    #[test]
    fn negation_swaps_sides() {
        let m = CutVector::from_bits(&[1, 0, 1]);
        let x = OctahedralPoint::new(vec![0.1, -0.3, 0.2, 0.15, 0.25]).unwrap();
        let r = unit_square();
        let p = sphere_to_partition(&x, &m, &r).unwrap();
        let q = sphere_to_partition(&x.antipode(), &m, &r).unwrap();
        assert_eq!(p.swapped(), q);
    }

    #[test]
    fn median_splits() {
        let ms = [unit_square()];
        let p = solve_equipartition(&ms, &CutVector::from_bits(&[0, 0]), &SolverOptions::with_tol(1e-9)).unwrap();
        assert!((p.y_breaks[0] - 0.5).abs() < 1e-9);
        let p = solve_equipartition(&ms, &CutVector::from_bits(&[1]), &SolverOptions::with_tol(1e-9)).unwrap();
        assert!((p.mass(&ms[0], Side::A) - 0.5).abs() < 1e-9);
    }

    #[test]
    fn offset_squares_closed_form() {
        let ms = [
            BoxMeasure::uniform(&[0.0, 0.0], &[1.0, 1.0]).unwrap(),
            BoxMeasure::uniform(&[2.0, 1.0], &[3.0, 2.0]).unwrap(),
        ];
        let (p, path) = halve_with_path(&ms, &SolverOptions::with_tol(1e-12)).unwrap();
        assert!((p.y_breaks[0] - 1.5).abs() < 1e-9, "{p:?}");
        match p.strips[0] {
            Strip::Split { x, .. } => assert!((x - 0.5).abs() < 1e-9),
            s => panic!("bottom strip should be split, got {s:?}"),
        }
        assert_eq!(path.turns, 1);
    }

    #[test]
    fn bad_shape_is_rejected() {
        let p = StairPartition { y_breaks: vec![0.0], strips: vec![Strip::Whole { side: Side::A }, Strip::Whole { side: Side::B }] };
        assert!(matches!(to_path(&p, &CutVector::from_bits(&[0, 0])), Err(FaircutError::UnsupportedShape(_))));
    }
}
