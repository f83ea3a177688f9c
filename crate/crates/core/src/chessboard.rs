//! Two-colourings of space by hyperplanes in a few fixed directions, with
//! neighbouring cells coloured differently.
//!
//! Direction `i` contributes up to `n_i` parallel hyperplanes. A tuple of
//! counts is admissible when no two counts share a set bit, which is when
//! the multinomial coefficient of the counts is odd; admissible tuples admit
//! a colouring halving `Σ n_i` measures at once.

use crate::busolver::{self, SolverOptions};
use crate::error::{FaircutError, Result};
use crate::measures::{dot, reference_mixture, BoxMeasure, ConvexRegion, Halfspace, Measure};
use crate::nested::directional_quantile;
use crate::Side;
use serde::{Deserialize, Serialize};

/// Largest total count handled by the product-sphere search.
pub const MAX_TOTAL_COUNT: u32 = 6;

/// Whether the counts have pairwise disjoint binary expansions.
pub fn admissible(counts: &[u32]) -> bool {
    let mut seen = 0u64;
    for &c in counts {
        if c == 0 || seen & c as u64 != 0 {
            return false;
        }
        seen |= c as u64;
    }
    true
}

/// Counts and one direction per count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChessboardSpec {
    pub counts: Vec<u32>,
    pub directions: Vec<Vec<f64>>,
}

impl ChessboardSpec {
    pub fn total(&self) -> u32 {
        self.counts.iter().sum()
    }

    /// Counts of the first two directions added together, the rest kept.
    pub fn merged_first_two(&self) -> ChessboardSpec {
        let mut counts = vec![self.counts[0] + self.counts[1]];
        counts.extend_from_slice(&self.counts[2..]);
        let mut directions = vec![self.directions[0].clone()];
        directions.extend_from_slice(&self.directions[2..]);
        ChessboardSpec { counts, directions }
    }
}

/// Offsets per direction (sorted; unused ones at `+inf`) and a parity bit.
///
/// A point's colour is A when `parity` plus the number of offsets strictly
/// below its projections is even.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChessboardColouring {
    pub directions: Vec<Vec<f64>>,
    #[serde(with = "offsets_serde")]
    pub offsets: Vec<Vec<f64>>,
    pub parity: bool,
}

mod offsets_serde {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Row(#[serde(with = "crate::io::ext_real::vec")] Vec<f64>);

    pub fn serialize<S: Serializer>(v: &[Vec<f64>], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(|r| Row(r.clone())).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<f64>>, D::Error> {
        Ok(Vec::<Row>::deserialize(d)?.into_iter().map(|r| r.0).collect())
    }
}

impl ChessboardColouring {
    pub fn colour_of(&self, p: &[f64]) -> Result<Side> {
        let mut crossed = self.parity as usize;
        for (v, offs) in self.directions.iter().zip(&self.offsets) {
            let s = dot(v, p);
            for &o in offs {
                if s == o {
                    return Err(FaircutError::OnBoundary);
                }
                if o < s {
                    crossed += 1;
                }
            }
        }
        Ok(if crossed % 2 == 0 { Side::A } else { Side::B })
    }

    /// Cells of the arrangement with their colours.
    pub fn cells(&self) -> Vec<(ConvexRegion, Side)> {
        let dim = self.directions.first().map(|d| d.len()).unwrap_or(1);
        let mut cells = vec![(ConvexRegion::full(dim), self.parity as usize)];
        for (v, offs) in self.directions.iter().zip(&self.offsets) {
            let mut finite: Vec<f64> = offs.iter().copied().filter(|o| o.is_finite()).collect();
            finite.sort_by(f64::total_cmp);
            let mut next = Vec::with_capacity(cells.len() * (finite.len() + 1));
            for (c, crossed) in &cells {
                for j in 0..=finite.len() {
                    let mut r = c.clone();
                    if j > 0 {
                        r.push(Halfspace::open(v.iter().map(|x| -x).collect(), -finite[j - 1]));
                    }
                    if j < finite.len() {
                        r.push(Halfspace::new(v.clone(), finite[j]));
                    }
                    next.push((r, crossed + j));
                }
            }
            cells = next;
        }
        cells.into_iter().map(|(r, c)| (r, if c % 2 == 0 { Side::A } else { Side::B })).collect()
    }

    pub fn mass<M: Measure>(&self, m: &M, s: Side) -> f64 {
        self.cells().iter().filter(|(_, c)| *c == s).map(|(r, _)| m.mass(r)).sum()
    }

    /// Number of finite hyperplanes per direction.
    pub fn used(&self) -> Vec<usize> {
        self.offsets.iter().map(|o| o.iter().filter(|x| x.is_finite()).count()).collect()
    }
}

/// One direction's two-colouring: consecutive slabs along `v` with
/// reference masses `|x_j|` and colour A where `x_j > 0`.
struct Factor {
    v: Vec<f64>,
    n: usize,
}

/// The halving map on a product of octahedral spheres.
pub struct ChessboardMap<'a> {
    measures: &'a [BoxMeasure],
    reference: BoxMeasure,
    factors: Vec<Factor>,
}

impl<'a> ChessboardMap<'a> {
    pub fn new(measures: &'a [BoxMeasure], spec: &ChessboardSpec) -> Result<Self> {
        if spec.counts.len() != spec.directions.len() || spec.counts.is_empty() {
            return Err(FaircutError::Input("need one direction per count".into()));
        }
        let dim = measures.first().map(|m| m.dim()).ok_or_else(|| FaircutError::Input("no measures".into()))?;
        if dim > 3 {
            return Err(FaircutError::UnsupportedDimension(dim));
        }
        if measures.len() != spec.total() as usize {
            return Err(FaircutError::Input(format!("{} measures given, counts sum to {}", measures.len(), spec.total())));
        }
        let mut factors = Vec::new();
        for (v, &c) in spec.directions.iter().zip(&spec.counts) {
            if v.len() != dim {
                return Err(FaircutError::dim(dim, v.len()));
            }
            let n = dot(v, v).sqrt();
            if !(n > 0.0) {
                return Err(FaircutError::Input("directions must be nonzero".into()));
            }
            factors.push(Factor { v: v.iter().map(|x| x / n).collect(), n: c as usize });
        }
        for m in measures {
            if m.dim() != dim {
                return Err(FaircutError::dim(dim, m.dim()));
            }
        }
        Ok(ChessboardMap { measures, reference: reference_mixture(measures)?, factors })
    }

    /// Coordinates per factor (`n_i + 1`).
    pub fn dims(&self) -> Vec<usize> {
        self.factors.iter().map(|f| f.n + 1).collect()
    }

    pub fn colouring(&self, x: &[f64]) -> Result<ChessboardColouring> {
        let mut offsets = Vec::with_capacity(self.factors.len());
        let mut parity = true;
        let mut start = 0;
        let full = ConvexRegion::full(self.reference.dim());
        for f in &self.factors {
            let block = &x[start..start + f.n + 1];
            start += f.n + 1;
            let total: f64 = block.iter().map(|v| v.abs()).sum();
            let mut bounds = Vec::with_capacity(f.n);
            let mut acc = 0.0;
            for b in &block[..f.n] {
                acc += b.abs() / total;
                let h = if acc <= 0.0 {
                    f64::NEG_INFINITY
                } else if acc >= 1.0 {
                    f64::INFINITY
                } else {
                    directional_quantile(&self.reference, &full, &f.v, acc)?
                };
                bounds.push(h);
            }
            // slabs with their colours, empty ones dropped, equal neighbours merged
            let mut cuts = Vec::new();
            let mut first: Option<bool> = None;
            let mut prev: Option<bool> = None;
            for j in 0..=f.n {
                let lo = if j == 0 { f64::NEG_INFINITY } else { bounds[j - 1] };
                let hi = if j == f.n { f64::INFINITY } else { bounds[j] };
                if !(hi > lo) || block[j] == 0.0 {
                    continue;
                }
                let pos = block[j] > 0.0;
                match prev {
                    None => first = Some(pos),
                    Some(p) if p != pos => cuts.push(lo),
                    _ => {}
                }
                prev = Some(pos);
            }
            if first == Some(true) {
                parity = !parity;
            }
            cuts.resize(f.n, f64::INFINITY);
            offsets.push(cuts);
        }
        Ok(ChessboardColouring { directions: self.factors.iter().map(|f| f.v.clone()).collect(), offsets, parity })
    }

    pub fn eval(&self, x: &[f64]) -> Vec<f64> {
        match self.colouring(x) {
            Ok(c) => {
                let cells: Vec<ConvexRegion> = c.cells().into_iter().filter(|(_, s)| *s == Side::A).map(|(r, _)| r).collect();
                self.measures.iter().map(|m| cells.iter().map(|r| m.mass(r)).sum::<f64>() - 0.5).collect()
            }
            Err(_) => vec![f64::NAN; self.measures.len()],
        }
    }
}

/// A colouring halving all `Σ n_i` measures, for admissible counts.
pub fn solve_chessboard(measures: &[BoxMeasure], spec: &ChessboardSpec, opts: &SolverOptions) -> Result<ChessboardColouring> {
    if !admissible(&spec.counts) {
        return Err(FaircutError::Inadmissible(spec.counts.clone()));
    }
    if spec.total() > MAX_TOTAL_COUNT {
        return Err(FaircutError::InstanceTooLarge(format!("counts sum to {} > {MAX_TOTAL_COUNT}", spec.total())));
    }
    let map = ChessboardMap::new(measures, spec)?;
    let sol = busolver::product_antipodal_zero(&map.dims(), |x: &[f64]| map.eval(x), opts)?;
    let flat: Vec<f64> = sol.point.iter().flat_map(|p| p.coords.iter().copied()).collect();
    map.colouring(&flat)
}

/// Splits where each sphere factor may act equivariantly or trivially are
/// not supported; only the parity case is.
pub fn solve_prescribed(_measures: &[BoxMeasure], _spec: &ChessboardSpec, _split_matrix: &[Vec<u8>]) -> Result<ChessboardColouring> {
    Err(FaircutError::Unsupported("prescribed split matrices are not implemented".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn admissibility_examples() {
        assert!(!admissible(&[1, 1]));
        assert!(admissible(&[1, 2]));
        assert!(admissible(&[1]));
        assert!(admissible(&[1, 2, 4]));
        assert!(!admissible(&[3, 1]));
    }

    #[test]
    fn colour_examples() {
        let c = ChessboardColouring { directions: vec![vec![1.0, 0.0]], offsets: vec![vec![]], parity: false };
        assert_eq!(c.colour_of(&[5.0, 5.0]).unwrap(), Side::A);
        let c = ChessboardColouring { directions: vec![vec![1.0, 0.0]], offsets: vec![vec![0.0]], parity: false };
        assert_eq!(c.colour_of(&[-1.0, 0.0]).unwrap(), Side::A);
        assert_eq!(c.colour_of(&[1.0, 0.0]).unwrap(), Side::B);
        assert_eq!(c.colour_of(&[0.0, 3.0]), Err(FaircutError::OnBoundary));
        let q = ChessboardColouring {
            directions: vec![vec![1.0, 0.0], vec![0.0, 1.0]],
            offsets: vec![vec![0.0], vec![0.0]],
            parity: false,
        };
        let col = |x: f64, y: f64| q.colour_of(&[x, y]).unwrap();
        assert_eq!(col(1.0, 1.0), col(-1.0, -1.0));
        assert_eq!(col(1.0, -1.0), col(-1.0, 1.0));
        assert_ne!(col(1.0, 1.0), col(1.0, -1.0));
    }

    #[test]
    fn single_median_hyperplane() {
        let ms = [BoxMeasure::uniform(&[0.0, 0.0], &[2.0, 1.0]).unwrap()];
        let spec = ChessboardSpec { counts: vec![1], directions: vec![vec![1.0, 0.0]] };
        let c = solve_chessboard(&ms, &spec, &SolverOptions::with_tol(1e-9)).unwrap();
        assert!((c.offsets[0][0] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn inadmissible_counts_are_rejected() {
        let ms = [BoxMeasure::interval(0.0, 1.0).unwrap(), BoxMeasure::interval(1.0, 2.0).unwrap()];
        let spec = ChessboardSpec { counts: vec![1, 1], directions: vec![vec![1.0], vec![1.0]] };
        assert_eq!(solve_chessboard(&ms, &spec, &SolverOptions::default()), Err(FaircutError::Inadmissible(vec![1, 1])));
        assert!(matches!(solve_prescribed(&ms, &spec, &[]), Err(FaircutError::Unsupported(_))));
    }

    #[test]
    fn flipping_a_factor_swaps_colours() {
        let ms: Vec<BoxMeasure> = [[0.0, 0.0], [2.0, 0.5], [0.5, 2.0]]
            .iter()
            .map(|p| BoxMeasure::uniform(p, &[p[0] + 1.0, p[1] + 1.0]).unwrap())
            .collect();
        let spec = ChessboardSpec { counts: vec![1, 2], directions: vec![vec![1.0, 0.0], vec![0.0, 1.0]] };
        let map = ChessboardMap::new(&ms, &spec).unwrap();
        let x = [0.3, -0.7, 0.2, -0.5, 0.3];
        let mut y = x;
        y[0] = -y[0];
        y[1] = -y[1];
        let (a, b) = (map.colouring(&x).unwrap(), map.colouring(&y).unwrap());
        for p in [[0.1, 0.1], [2.5, 0.7], [0.9, 2.9], [-3.0, 4.0]] {
            assert_eq!(a.colour_of(&p).unwrap().flip(), b.colour_of(&p).unwrap());
        }
    }

    #[test]
    fn cells_agree_with_pointwise_colours() {
        let c = ChessboardColouring {
            directions: vec![vec![1.0, 0.0], vec![0.0, 1.0]],
            offsets: vec![vec![0.5], vec![0.2, 0.7]],
            parity: true,
        };
        for (r, s) in c.cells() {
            for p in [[0.1, 0.1], [0.9, 0.1], [0.1, 0.5], [0.9, 0.5], [0.1, 0.9], [0.9, 0.9]] {
                if r.contains(&p) {
                    assert_eq!(c.colour_of(&p).unwrap(), s);
                }
            }
        }
    }

    fn three_squares() -> Vec<BoxMeasure> {
        [[0.0, 0.0], [2.0, 0.5], [0.5, 2.0]]
            .iter()
            .map(|p| BoxMeasure::uniform(p, &[p[0] + 1.0, p[1] + 1.0]).unwrap())
            .collect()
    }

    #[test]
    fn three_squares_are_halved() {
        let ms = three_squares();
        let spec = ChessboardSpec { counts: vec![1, 2], directions: vec![vec![1.0, 0.0], vec![0.0, 1.0]] };
        let c = solve_chessboard(&ms, &spec, &SolverOptions::with_tol(1e-7)).unwrap();
        for m in &ms {
            assert!((c.mass(m, Side::A) - 0.5).abs() <= 1e-6);
        }
        let used = c.used();
        assert!(used[0] <= 1 && used[1] <= 2);
    }

    #[test]
    fn merged_counts_solve_when_admissible() {
        let ms = three_squares();
        let spec = ChessboardSpec { counts: vec![1, 2], directions: vec![vec![1.0, 0.0], vec![1.0, 0.0]] };
        let merged = spec.merged_first_two();
        assert_eq!(merged.counts, vec![3]);
        assert!(admissible(&merged.counts));
        let opts = SolverOptions::with_tol(1e-7);
        for s in [&spec, &merged] {
            let c = solve_chessboard(&ms, s, &opts).unwrap();
            for m in &ms {
                assert!((c.mass(m, Side::A) - 0.5).abs() <= 1e-6);
            }
        }
    }
}
