//! Fair distribution of weighted Voronoi-type cells among `k` thieves.
//!
//! Cells come from `n` functions and a weight vector `c`: cell `i` is where
//! `f_i + c_i` is maximal. Weight vectors are parametrized by the cell
//! capacities under a full-support reference measure, and the fair split is
//! found by a join search over capacities and labels.

use crate::busolver::{self, local_newton, JoinPoint, SolverOptions};
use crate::error::{FaircutError, Result};
use crate::measures::{dot, monte_carlo_mass, BoxMeasure, ConvexRegion, Halfspace, Measure};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

/// The functions defining the cells.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CellFunctions {
    /// `f_i(x) = g_i · x`.
    Linear { gradients: Vec<Vec<f64>> },
    /// `f_i(x) = log dist(x, F_i)` inside a simplex, `F_i` the facet
    /// opposite vertex `i`.
    #[serde(rename = "simplex")]
    SimplexConical { vertices: Vec<Vec<f64>> },
}

/// Affine barycentric coordinates `a_i(x) = lambda_i · x + beta_i` of a
/// simplex, with facet heights.
#[derive(Debug, Clone)]
struct Barycentric {
    lambda: Vec<Vec<f64>>,
    beta: Vec<f64>,
    height: Vec<f64>,
}

impl Barycentric {
    fn new(vertices: &[Vec<f64>]) -> Result<Self> {
        let n = vertices.len();
        let d = n.checked_sub(1).filter(|d| *d >= 1).ok_or_else(|| FaircutError::Input("a simplex needs at least 2 vertices".into()))?;
        let mut m = DMatrix::<f64>::zeros(n, n);
        for (j, v) in vertices.iter().enumerate() {
            if v.len() != d {
                return Err(FaircutError::dim(d, v.len()));
            }
            for r in 0..d {
                m[(r, j)] = v[r];
            }
            m[(d, j)] = 1.0;
        }
        let inv = m.try_inverse().ok_or_else(|| FaircutError::Input("degenerate simplex".into()))?;
        let lambda: Vec<Vec<f64>> = (0..n).map(|i| (0..d).map(|r| inv[(i, r)]).collect()).collect();
        let beta: Vec<f64> = (0..n).map(|i| inv[(i, d)]).collect();
        let height = lambda.iter().map(|l| 1.0 / dot(l, l).sqrt()).collect();
        Ok(Barycentric { lambda, beta, height })
    }

    fn coord(&self, i: usize, x: &[f64]) -> f64 {
        dot(&self.lambda[i], x) + self.beta[i]
    }
}

impl CellFunctions {
    pub fn len(&self) -> usize {
        match self {
            CellFunctions::Linear { gradients } => gradients.len(),
            CellFunctions::SimplexConical { vertices } => vertices.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dim(&self) -> usize {
        match self {
            CellFunctions::Linear { gradients } => gradients.first().map_or(0, |g| g.len()),
            CellFunctions::SimplexConical { vertices } => vertices.len().saturating_sub(1),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            CellFunctions::Linear { gradients } => {
                let d = self.dim();
                if gradients.len() < 2 || d == 0 {
                    return Err(FaircutError::Input("need at least two gradients".into()));
                }
                for (i, g) in gradients.iter().enumerate() {
                    if g.len() != d {
                        return Err(FaircutError::dim(d, g.len()));
                    }
                    if gradients[..i].iter().any(|h| h == g) {
                        return Err(FaircutError::Input("gradients must be pairwise distinct".into()));
                    }
                }
                Ok(())
            }
            CellFunctions::SimplexConical { vertices } => Barycentric::new(vertices).map(|_| ()),
        }
    }

    /// `f_i(x)`; `-inf` on the boundary of the simplex.
    pub fn value(&self, i: usize, x: &[f64]) -> f64 {
        match self {
            CellFunctions::Linear { gradients } => dot(&gradients[i], x),
            CellFunctions::SimplexConical { vertices } => {
                let b = Barycentric::new(vertices).expect("validated simplex");
                (b.coord(i, x) * b.height[i]).ln()
            }
        }
    }
}

/// Cell geometry for fixed functions, with the simplex data cached.
#[derive(Debug, Clone)]
pub struct Cells {
    fns: CellFunctions,
    bary: Option<Barycentric>,
}

impl Cells {
    pub fn new(fns: &CellFunctions) -> Result<Self> {
        fns.validate()?;
        let bary = match fns {
            CellFunctions::SimplexConical { vertices } => Some(Barycentric::new(vertices)?),
            CellFunctions::Linear { .. } => None,
        };
        Ok(Cells { fns: fns.clone(), bary })
    }

    pub fn functions(&self) -> &CellFunctions {
        &self.fns
    }

    pub fn len(&self) -> usize {
        self.fns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fns.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.fns.dim()
    }

    /// The working domain's own constraints (the simplex, or nothing).
    pub fn domain(&self) -> ConvexRegion {
        let d = self.dim();
        match &self.bary {
            None => ConvexRegion::full(d),
            Some(b) => ConvexRegion::from_halfspaces(
                d,
                (0..self.len()).map(|i| Halfspace::new(b.lambda[i].iter().map(|v| -v).collect(), b.beta[i])).collect(),
            ),
        }
    }

    /// `{x : f_i + c_i >= f_j + c_j for all j}`, intersected with the domain.
    pub fn cell(&self, c: &[f64], i: usize) -> ConvexRegion {
        let d = self.dim();
        if c[i] == f64::NEG_INFINITY {
            return ConvexRegion::empty(d);
        }
        let mut r = self.domain();
        for j in 0..self.len() {
            if j == i || c[j] == f64::NEG_INFINITY {
                continue;
            }
            match (&self.fns, &self.bary) {
                (CellFunctions::Linear { gradients }, _) => {
                    let normal = gradients[j].iter().zip(&gradients[i]).map(|(a, b)| a - b).collect();
                    r.push(Halfspace::new(normal, c[i] - c[j]));
                }
                (_, Some(b)) => {
                    // e^{s_j} a_j - e^{s_i} a_i <= 0 with s = c + log height
                    let si = c[i] + b.height[i].ln();
                    let sj = c[j] + b.height[j].ln();
                    let top = si.max(sj);
                    let (ei, ej) = ((si - top).exp(), (sj - top).exp());
                    let normal = b.lambda[j].iter().zip(&b.lambda[i]).map(|(lj, li)| ej * lj - ei * li).collect();
                    r.push(Halfspace::new(normal, ei * b.beta[i] - ej * b.beta[j]));
                }
                _ => unreachable!(),
            }
        }
        r
    }

    pub fn cells(&self, c: &[f64]) -> Vec<ConvexRegion> {
        (0..self.len()).map(|i| self.cell(c, i)).collect()
    }

    /// Index of the cell containing `x` (smallest index on ties), or `None`
    /// outside the domain.
    pub fn cell_of(&self, c: &[f64], x: &[f64]) -> Option<usize> {
        let score = |i: usize| -> f64 {
            match &self.bary {
                None => self.fns.value(i, x) + c[i],
                Some(b) => {
                    let a = b.coord(i, x);
                    if a <= 0.0 {
                        f64::NEG_INFINITY
                    } else {
                        (a * b.height[i]).ln() + c[i]
                    }
                }
            }
        };
        if let Some(b) = &self.bary {
            if (0..self.len()).any(|i| b.coord(i, x) <= 0.0) {
                return None;
            }
        }
        let mut best = None;
        let mut best_v = f64::NEG_INFINITY;
        for i in 0..self.len() {
            if c[i] == f64::NEG_INFINITY {
                continue;
            }
            let v = score(i);
            if best.is_none() || v > best_v {
                best = Some(i);
                best_v = v;
            }
        }
        best
    }

    /// Distance from `x` to the facet opposite vertex `i` (simplex kind only).
    pub fn facet_distance(&self, i: usize, x: &[f64]) -> Option<f64> {
        self.bary.as_ref().map(|b| b.coord(i, x) * b.height[i])
    }

    /// The uniform measure on the working domain: the given box for linear
    /// functions, the simplex otherwise.
    pub fn reference(&self, bounds: Option<(&[f64], &[f64])>) -> Result<DomainMeasure> {
        match &self.fns {
            CellFunctions::Linear { .. } => {
                let (lo, hi) = bounds.ok_or_else(|| FaircutError::Input("linear cells need a working box".into()))?;
                Ok(DomainMeasure { base: BoxMeasure::uniform(lo, hi)?, domain: ConvexRegion::full(lo.len()), total: 1.0 })
            }
            CellFunctions::SimplexConical { vertices } => {
                let d = self.dim();
                let lo: Vec<f64> = (0..d).map(|r| vertices.iter().map(|v| v[r]).fold(f64::INFINITY, f64::min)).collect();
                let hi: Vec<f64> = (0..d).map(|r| vertices.iter().map(|v| v[r]).fold(f64::NEG_INFINITY, f64::max)).collect();
                let base = BoxMeasure::uniform(&lo, &hi)?;
                let domain = self.domain();
                let total = base.mass(&domain);
                Ok(DomainMeasure { base, domain, total })
            }
        }
    }
}

/// A box measure conditioned on a convex domain.
#[derive(Debug, Clone)]
pub struct DomainMeasure {
    base: BoxMeasure,
    domain: ConvexRegion,
    total: f64,
}

impl Measure for DomainMeasure {
    fn dim(&self) -> usize {
        self.base.dim()
    }

    fn mass(&self, r: &ConvexRegion) -> f64 {
        self.base.mass(&r.intersect(&self.domain)) / self.total
    }

    fn support_box(&self) -> (Vec<f64>, Vec<f64>) {
        self.base.support_box()
    }
}

/// `w_i = mu(V_i(c))`.
pub fn capacities<M: Measure>(cells: &Cells, c: &[f64], mu: &M) -> Result<Vec<f64>> {
    if c.len() != cells.len() {
        return Err(FaircutError::dim(cells.len(), c.len()));
    }
    if c.iter().all(|v| *v == f64::NEG_INFINITY) || c.iter().any(|v| v.is_nan() || *v == f64::INFINITY) {
        return Err(FaircutError::Input("weights must be finite or -inf, not all -inf".into()));
    }
    Ok(cells.cells(c).iter().map(|r| mu.mass(r)).collect())
}

/// A weight vector whose capacities match `target` within `tol`.
///
/// Entries with zero target are `-inf`; the largest entry is pinned at 0.
/// Gauss-Seidel bisection sweeps are followed by a Newton polish.
pub fn weights_from_capacities<M: Measure>(cells: &Cells, target: &[f64], mu: &M, tol: f64) -> Result<Vec<f64>> {
    let n = cells.len();
    if target.len() != n {
        return Err(FaircutError::dim(n, target.len()));
    }
    let sum: f64 = target.iter().sum();
    if target.iter().any(|w| !(*w >= 0.0)) || (sum - 1.0).abs() > 1e-9 {
        return Err(FaircutError::Input("capacities must be nonnegative and sum to 1".into()));
    }
    let anchor = (0..n).fold(0, |b, i| if target[i] > target[b] { i } else { b });
    let free: Vec<usize> = (0..n).filter(|&i| i != anchor && target[i] > 0.0).collect();
    let mut c: Vec<f64> = (0..n).map(|i| if target[i] > 0.0 { 0.0 } else { f64::NEG_INFINITY }).collect();
    if free.is_empty() {
        return Ok(c);
    }
    let mass_i = |c: &[f64], i: usize| mu.mass(&cells.cell(c, i));
    let residual = |c: &[f64]| -> f64 { (0..n).map(|i| (mass_i(c, i) - target[i]).abs()).fold(0.0, f64::max) };
    let newton = |c: &mut Vec<f64>, target_res: f64| {
        let base = c.clone();
        let assemble = |y: &[f64]| {
            let mut full = base.clone();
            for (k, &i) in free.iter().enumerate() {
                full[i] = y[k];
            }
            full
        };
        let fun = |y: &[f64]| {
            let full = assemble(y);
            (0..n).map(|i| mass_i(&full, i) - target[i]).collect::<Vec<f64>>()
        };
        let y0: Vec<f64> = free.iter().map(|&i| c[i]).collect();
        let r = local_newton(fun, |_: &mut [f64]| {}, &y0, target_res, 40, 1e-7);
        *c = assemble(&r.x);
        r.residual
    };
    let mut res = newton(&mut c, tol);
    if res <= tol {
        return Ok(c);
    }
    c = (0..n).map(|i| if target[i] > 0.0 { 0.0 } else { f64::NEG_INFINITY }).collect();
    for _sweep in 0..200 {
        for &i in &free {
            let g = |v: f64, c: &mut Vec<f64>| {
                c[i] = v;
                mass_i(c, i) - target[i]
            };
            let mut lo = c[i] - 1.0;
            let mut hi = c[i] + 1.0;
            let mut step = 1.0;
            while g(lo, &mut c) > 0.0 && step < 1e12 {
                step *= 2.0;
                lo -= step;
            }
            step = 1.0;
            while g(hi, &mut c) < 0.0 && step < 1e12 {
                step *= 2.0;
                hi += step;
            }
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if g(mid, &mut c) < 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
                if hi - lo < 1e-15 * (1.0 + mid.abs()) {
                    break;
                }
            }
            c[i] = 0.5 * (lo + hi);
        }
        res = residual(&c);
        if res <= (100.0 * tol).max(1e-6) {
            break;
        }
    }
    if res > tol {
        res = newton(&mut c, tol).min(residual(&c));
    }
    if res <= tol {
        Ok(c)
    } else {
        Err(FaircutError::NonConvergence { residual: res })
    }
}

/// Weight vector, capacities and labels of a fair distribution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FairPartition {
    #[serde(with = "crate::io::ext_real::vec")]
    pub weights: Vec<f64>,
    pub capacities: Vec<f64>,
    pub labels: Vec<usize>,
    pub k: usize,
}

impl FairPartition {
    /// `shares[l][j]`: mass of measure `j` in the cells labelled `l`.
    pub fn shares<M: Measure>(&self, cells: &Cells, measures: &[M]) -> Vec<Vec<f64>> {
        let regions = cells.cells(&self.weights);
        let mut out = vec![vec![0.0; measures.len()]; self.k];
        for (i, r) in regions.iter().enumerate() {
            if self.weights[i] > f64::NEG_INFINITY {
                for (j, m) in measures.iter().enumerate() {
                    out[self.labels[i]][j] += m.mass(r);
                }
            }
        }
        out
    }

    /// Shares estimated by sampling each measure and locating samples with
    /// the cell predicate; same layout as [`FairPartition::shares`].
    pub fn shares_monte_carlo(&self, cells: &Cells, measures: &[BoxMeasure], samples: usize, seed: u64) -> Vec<Vec<f64>> {
        (0..self.k)
            .map(|l| {
                measures
                    .iter()
                    .enumerate()
                    .map(|(j, m)| {
                        let inside = |x: &[f64]| cells.cell_of(&self.weights, x).is_some_and(|i| self.labels[i] == l);
                        monte_carlo_mass(m, inside, samples, seed.wrapping_add((l * measures.len() + j) as u64)).value
                    })
                    .collect()
            })
            .collect()
    }

    pub fn max_deviation<M: Measure>(&self, cells: &Cells, measures: &[M]) -> f64 {
        let target = 1.0 / self.k as f64;
        self.shares(cells, measures).iter().flatten().map(|s| (s - target).abs()).fold(0.0, f64::max)
    }
}

/// The join map: per measure and label, the mass of that label's cells
/// minus `1/k`, with weights recovered from the barycentric capacities.
pub struct FairMap<'a> {
    cells: Cells,
    reference: DomainMeasure,
    measures: &'a [BoxMeasure],
    k: usize,
    inner_tol: f64,
}

impl<'a> FairMap<'a> {
    pub fn new(fns: &CellFunctions, measures: &'a [BoxMeasure], k: usize, tol: f64) -> Result<Self> {
        let cells = Cells::new(fns)?;
        let t = measures.len();
        if t == 0 || cells.len() != t * (k - 1) + 1 {
            return Err(FaircutError::Input(format!("need n = t(k-1)+1 functions, got n={} t={t} k={k}", cells.len())));
        }
        for m in measures {
            if m.dim() != cells.dim() {
                return Err(FaircutError::dim(cells.dim(), m.dim()));
            }
        }
        let (lo, hi) = crate::measures::joint_support_box(measures)?;
        let reference = cells.reference(Some((&lo, &hi)))?;
        Ok(FairMap { cells, reference, measures, k, inner_tol: (0.01 * tol).min(1e-11) })
    }

    pub fn cells(&self) -> &Cells {
        &self.cells
    }

    pub fn weights(&self, w: &[f64]) -> Result<Vec<f64>> {
        weights_from_capacities(&self.cells, w, &self.reference, self.inner_tol)
    }

    pub fn eval(&self, x: &JoinPoint) -> Vec<f64> {
        let Ok(c) = self.weights(&x.barycentric) else {
            return vec![f64::NAN; self.measures.len() * self.k];
        };
        let regions = self.cells.cells(&c);
        let mut out = vec![-1.0 / self.k as f64; self.measures.len() * self.k];
        for (j, m) in self.measures.iter().enumerate() {
            for (i, r) in regions.iter().enumerate() {
                if x.barycentric[i] > 0.0 {
                    out[j * self.k + x.labels[i]] += m.mass(r);
                }
            }
        }
        out
    }
}

/// Weights and labels giving every thief `1/k` of every measure.
pub fn solve_fair(fns: &CellFunctions, measures: &[BoxMeasure], k: usize, opts: &SolverOptions) -> Result<FairPartition> {
    let map = FairMap::new(fns, measures, k, opts.tol)?;
    let n = map.cells.len();
    let sol = busolver::join_zero(n, k, |x: &JoinPoint| map.eval(x), opts)?;
    let weights = map.weights(&sol.point.barycentric)?;
    Ok(FairPartition { weights, capacities: sol.point.barycentric.clone(), labels: sol.point.labels.clone(), k })
}

/// Breakpoints of the upper envelope of lines `s_i x + c_i` on the real line,
/// as `(left cell, right cell, x)` in increasing order.
pub fn linear_envelope_1d(slopes: &[f64], c: &[f64]) -> Vec<(usize, usize, f64)> {
    let mut order: Vec<usize> = (0..slopes.len()).filter(|&i| c[i] > f64::NEG_INFINITY).collect();
    order.sort_by(|&a, &b| slopes[a].total_cmp(&slopes[b]).then(c[b].total_cmp(&c[a])));
    let mut hull: Vec<usize> = Vec::new();
    let cross = |a: usize, b: usize| (c[a] - c[b]) / (slopes[b] - slopes[a]);
    for i in order {
        if hull.last().is_some_and(|&l| slopes[l] == slopes[i]) {
            continue;
        }
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            if cross(a, i) <= cross(a, b) {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(i);
    }
    hull.windows(2).map(|w| (w[0], w[1], cross(w[0], w[1]))).collect()
}
