//! Zero finding for antipodal maps on octahedral spheres and for
//! cyclically equivariant maps on joins `[k] * ... * [k]`.
//!
//! All searches follow the same recipe: evaluate the map on a lattice grid of
//! the configuration space, polish the best grid points with damped
//! Gauss-Newton, and double the grid resolution on failure. Before searching,
//! the symmetry the caller promises is audited on random points.
//!
//! Callbacks may be invoked from several threads at once.

pub mod lattice;
mod newton;

pub use newton::{local_newton, LocalResult};
pub(crate) use newton::inf_norm;

use crate::error::{FaircutError, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Knobs shared by every search.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverOptions {
    /// Target for the sup-norm of the map at the returned point.
    pub tol: f64,
    pub initial_resolution: usize,
    pub max_resolution: usize,
    /// Cap on grid evaluations per resolution level.
    pub max_grid_points: usize,
    /// Number of grid points polished by Newton per level.
    pub starts: usize,
    pub max_newton_iters: usize,
    pub fd_step: f64,
    pub seed: u64,
    pub audit_samples: usize,
    pub audit_tol: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            tol: 1e-9,
            initial_resolution: 4,
            max_resolution: 32,
            max_grid_points: 250_000,
            starts: 16,
            max_newton_iters: 60,
            fd_step: 1e-7,
            seed: 0,
            audit_samples: 100,
            audit_tol: 1e-9,
        }
    }
}

impl SolverOptions {
    pub fn with_tol(tol: f64) -> Self {
        SolverOptions { tol, ..Default::default() }
    }
}

/// A point of the boundary of the cross-polytope: `Σ|x_i| = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OctahedralPoint {
    pub coords: Vec<f64>,
}

impl OctahedralPoint {
    /// Normalizes `coords` to unit L1 norm. The zero vector is rejected.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        let s: f64 = coords.iter().map(|v| v.abs()).sum();
        if !(s > 0.0 && s.is_finite()) {
            return Err(FaircutError::Input("octahedral point needs a nonzero finite vector".into()));
        }
        Ok(OctahedralPoint { coords: coords.into_iter().map(|v| v / s).collect() })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn antipode(&self) -> Self {
        OctahedralPoint { coords: self.coords.iter().map(|v| -v).collect() }
    }
}

/// A point of the join `[k]^{*n}`: barycentric weights plus one label per
/// coordinate. Labels on zero weights carry no information.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JoinPoint {
    pub barycentric: Vec<f64>,
    pub labels: Vec<usize>,
}

impl JoinPoint {
    pub fn new(barycentric: Vec<f64>, labels: Vec<usize>) -> Result<Self> {
        if barycentric.len() != labels.len() {
            return Err(FaircutError::dim(barycentric.len(), labels.len()));
        }
        if barycentric.iter().any(|v| !(*v >= 0.0)) {
            return Err(FaircutError::Input("barycentric coordinates must be >= 0".into()));
        }
        let s: f64 = barycentric.iter().sum();
        if !(s > 0.0 && s.is_finite()) {
            return Err(FaircutError::Input("barycentric coordinates must not all vanish".into()));
        }
        Ok(JoinPoint { barycentric: barycentric.into_iter().map(|v| v / s).collect(), labels })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Applies the cyclic relabeling `l -> l + shift (mod k)`.
    pub fn relabeled(&self, shift: usize, k: usize) -> Self {
        JoinPoint {
            barycentric: self.barycentric.clone(),
            labels: self.labels.iter().map(|l| (l + shift) % k).collect(),
        }
    }
}

impl PartialEq for JoinPoint {
    fn eq(&self, other: &Self) -> bool {
        self.barycentric == other.barycentric
            && self
                .barycentric
                .iter()
                .zip(self.labels.iter().zip(&other.labels))
                .all(|(w, (a, b))| *w == 0.0 || a == b)
    }
}

/// A point returned by a search together with its re-checked residual.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution<P> {
    pub point: P,
    pub residual: f64,
}

/// Best residual found per sheet when a search fails.
struct SearchFailure {
    best: f64,
    per_sheet: Vec<f64>,
}

/// Grid-plus-Newton search over `sheets` copies of one chart.
fn search<G, E, P>(sheets: usize, grid: G, eval: E, project: P, opts: &SolverOptions) -> std::result::Result<(usize, Vec<f64>, f64), SearchFailure>
where
    G: Fn(usize) -> Vec<Vec<f64>>,
    E: Fn(usize, &[f64]) -> Vec<f64> + Sync,
    P: Fn(&mut [f64]) + Sync,
{
    let mut per_sheet = vec![f64::INFINITY; sheets];
    let mut res = opts.initial_resolution.max(1);
    let target = 0.1 * opts.tol;
    loop {
        let pts = grid(res);
        let jobs: Vec<(usize, usize)> = (0..sheets).flat_map(|s| (0..pts.len()).map(move |i| (s, i))).collect();
        let mut scored: Vec<(f64, usize, usize)> = jobs
            .par_iter()
            .map(|&(s, i)| {
                let v = eval(s, &pts[i]);
                let r = inf_norm(&v);
                (if r.is_nan() { f64::INFINITY } else { r }, s, i)
            })
            .collect();
        for (r, s, _) in &scored {
            per_sheet[*s] = per_sheet[*s].min(*r);
        }
        scored.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));

        let next = 2 * res;
        let next_fits = next <= opts.max_resolution;
        // the finest affordable level gets a wider set of starts
        let starts = if next_fits { opts.starts } else { 5 * opts.starts };
        for &(_, s, i) in scored.iter().take(starts) {
            let lr = local_newton(|x| eval(s, x), &project, &pts[i], target, opts.max_newton_iters, opts.fd_step);
            per_sheet[s] = per_sheet[s].min(lr.residual);
            if lr.residual <= opts.tol {
                let mut x = lr.x;
                project(&mut x);
                let check = inf_norm(&eval(s, &x));
                if check <= opts.tol {
                    return Ok((s, x, check));
                }
            }
        }
        if !next_fits {
            let seeds: Vec<(usize, Vec<f64>)> = scored.iter().take(BEAM_WIDTH).map(|&(_, s, i)| (s, pts[i].clone())).collect();
            if let Some(found) = refine(seeds, 1.0 / res as f64, &eval, &project, opts, &mut per_sheet) {
                return Ok(found);
            }
            let best = per_sheet.iter().cloned().fold(f64::INFINITY, f64::min);
            return Err(SearchFailure { best, per_sheet });
        }
        res = next;
    }
}

const BEAM_WIDTH: usize = 32;
const BEAM_LEVELS: usize = 40;
const BEAM_STEPS: usize = 4;

fn sq_norm(v: &[f64]) -> f64 {
    let s: f64 = v.iter().map(|x| x * x).sum();
    if s.is_nan() {
        f64::INFINITY
    } else {
        s
    }
}

/// Beam of compass searches with a halving step, polished by Newton after
/// every level. Moves shift mass `h` between two coordinates or change one.
fn refine<E, P>(
    seeds: Vec<(usize, Vec<f64>)>,
    h0: f64,
    eval: &E,
    project: &P,
    opts: &SolverOptions,
    per_sheet: &mut [f64],
) -> Option<(usize, Vec<f64>, f64)>
where
    E: Fn(usize, &[f64]) -> Vec<f64> + Sync,
    P: Fn(&mut [f64]) + Sync,
{
    let target = 0.1 * opts.tol;
    let mut beam: Vec<(f64, usize, Vec<f64>)> = seeds.into_iter().map(|(s, x)| (sq_norm(&eval(s, &x)), s, x)).collect();
    let mut h = h0;
    for _ in 0..BEAM_LEVELS {
        beam.par_iter_mut().for_each(|(score, s, x)| {
            let n = x.len();
            for _ in 0..BEAM_STEPS {
                let mut best: Option<(f64, Vec<f64>)> = None;
                let mut consider = |mut y: Vec<f64>| {
                    project(&mut y);
                    let v = sq_norm(&eval(*s, &y));
                    if v < best.as_ref().map_or(*score, |b| b.0) {
                        best = Some((v, y));
                    }
                };
                for i in 0..n {
                    for j in 0..n {
                        if i != j {
                            let mut y = x.clone();
                            y[i] += h;
                            y[j] -= h;
                            consider(y);
                        }
                    }
                    for sign in [1.0, -1.0] {
                        let mut y = x.clone();
                        y[i] += sign * h;
                        consider(y);
                    }
                }
                match best {
                    Some((v, y)) => {
                        *score = v;
                        *x = y;
                    }
                    None => break,
                }
            }
        });
        beam.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        beam.dedup_by(|a, b| a.1 == b.1 && a.2 == b.2);
        for (_, s, x) in beam.iter().take(3) {
            let lr = local_newton(|y| eval(*s, y), project, x, target, opts.max_newton_iters, opts.fd_step);
            per_sheet[*s] = per_sheet[*s].min(lr.residual);
            if lr.residual <= opts.tol {
                let mut y = lr.x;
                project(&mut y);
                let check = inf_norm(&eval(*s, &y));
                if check <= opts.tol {
                    return Some((*s, y, check));
                }
            }
        }
        for (score, s, _) in &beam {
            per_sheet[*s] = per_sheet[*s].min(score.sqrt());
        }
        h *= 0.5;
    }
    None
}

fn no_zero(f: SearchFailure) -> FaircutError {
    FaircutError::NoZeroFound { best_residual: f.best, per_labelling: f.per_sheet }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ 0x6a09_e667_f3bc_c908)
}

fn random_octahedral(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let s: f64 = v.iter().map(|x| x.abs()).sum();
        if s > 1e-3 {
            return v.into_iter().map(|x| x / s).collect();
        }
    }
}

fn l1_normalize(x: &mut [f64]) {
    let s: f64 = x.iter().map(|v| v.abs()).sum();
    if s > 0.0 && s.is_finite() {
        for v in x.iter_mut() {
            *v /= s;
        }
    } else {
        x.iter_mut().for_each(|v| *v = 0.0);
        x[0] = 1.0;
    }
}

fn simplex_normalize(x: &mut [f64]) {
    for v in x.iter_mut() {
        if !(*v > 0.0) {
            *v = 0.0;
        }
    }
    let s: f64 = x.iter().sum();
    if s > 0.0 && s.is_finite() {
        for v in x.iter_mut() {
            *v /= s;
        }
    } else {
        let n = x.len() as f64;
        x.iter_mut().for_each(|v| *v = 1.0 / n);
    }
}

/// Checks `f(-x) = -f(x)` on random sphere points.
pub fn audit_antipodal<F>(n: usize, f: F, samples: usize, tol: f64, seed: u64) -> Result<()>
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    let mut r = rng(seed);
    for _ in 0..samples {
        let x = random_octahedral(&mut r, n);
        let neg: Vec<f64> = x.iter().map(|v| -v).collect();
        let (a, b) = (f(&x), f(&neg));
        let err = inf_norm(&a.iter().zip(&b).map(|(p, q)| p + q).collect::<Vec<f64>>());
        if !(err <= tol) {
            return Err(FaircutError::Contract(format!("map is not antipodal: |f(x) + f(-x)| = {err:.3e} at {x:?}")));
        }
    }
    Ok(())
}

/// Checks that flipping any one factor of a product of spheres negates `f`.
pub fn audit_product_antipodal<F>(dims: &[usize], f: F, samples: usize, tol: f64, seed: u64) -> Result<()>
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    let mut r = rng(seed);
    let total: usize = dims.iter().sum();
    for s in 0..samples {
        let mut x = Vec::with_capacity(total);
        for &d in dims {
            x.extend(random_octahedral(&mut r, d));
        }
        let factor = s % dims.len();
        let start: usize = dims[..factor].iter().sum();
        let mut y = x.clone();
        for v in &mut y[start..start + dims[factor]] {
            *v = -*v;
        }
        let (a, b) = (f(&x), f(&y));
        let err = inf_norm(&a.iter().zip(&b).map(|(p, q)| p + q).collect::<Vec<f64>>());
        if !(err <= tol) {
            return Err(FaircutError::Contract(format!(
                "flipping factor {factor} does not negate the map: error {err:.3e}"
            )));
        }
    }
    Ok(())
}

/// Checks `f(σx) = σ f(x)` for the cyclic shift σ on random join points.
///
/// `f` returns blocks of `k` values, one per label; the shift moves the value
/// of label `l` to label `l + 1`.
pub fn audit_cyclic<F>(n: usize, k: usize, f: F, samples: usize, tol: f64, seed: u64) -> Result<()>
where
    F: Fn(&JoinPoint) -> Vec<f64>,
{
    let mut r = rng(seed);
    for _ in 0..samples {
        let mut w: Vec<f64> = (0..n).map(|_| r.gen_range(0.0..1.0)).collect();
        simplex_normalize(&mut w);
        let labels: Vec<usize> = (0..n).map(|_| r.gen_range(0..k)).collect();
        let x = JoinPoint { barycentric: w, labels };
        let a = f(&x);
        let b = f(&x.relabeled(1, k));
        if a.len() != b.len() || a.len() % k != 0 {
            return Err(FaircutError::Contract("equivariant map must return blocks of k values".into()));
        }
        let mut err = 0.0f64;
        for blk in 0..a.len() / k {
            for l in 0..k {
                err = inf_norm(&[err, b[blk * k + (l + 1) % k] - a[blk * k + l]]);
            }
        }
        if !(err <= tol) {
            return Err(FaircutError::Contract(format!("map is not cyclically equivariant: error {err:.3e}")));
        }
    }
    Ok(())
}

/// Finds `x` on the octahedral sphere in `R^n` with `|f(x)|_inf <= tol`.
///
/// `f` must be antipodal and map to `R^{n-1}`; both are checked.
pub fn antipodal_zero<F>(n: usize, f: F, opts: &SolverOptions) -> Result<Solution<OctahedralPoint>>
where
    F: Fn(&[f64]) -> Vec<f64> + Sync,
{
    if n < 2 {
        return Err(FaircutError::Input("sphere needs at least two coordinates".into()));
    }
    let mut e1 = vec![0.0; n];
    e1[0] = 1.0;
    let got = f(&e1).len();
    if got != n - 1 {
        return Err(FaircutError::dim(n - 1, got));
    }
    audit_antipodal(n, &f, opts.audit_samples, opts.audit_tol, opts.seed)?;
    let grid = |r: usize| lattice::octahedral(n, r, true);
    let eval = |_: usize, x: &[f64]| {
        let mut y = x.to_vec();
        l1_normalize(&mut y);
        f(&y)
    };
    let (_, x, residual) = search_bounded(1, grid, eval, l1_normalize, opts, |r| lattice::octahedral_count(n, r) / 2)
        .map_err(no_zero)?;
    Ok(Solution { point: OctahedralPoint { coords: x }, residual })
}

/// Like [`antipodal_zero`] on a product of octahedral spheres with
/// `dims[i]` coordinates each. Flipping any single factor must negate `f`.
pub fn product_antipodal_zero<F>(dims: &[usize], f: F, opts: &SolverOptions) -> Result<Solution<Vec<OctahedralPoint>>>
where
    F: Fn(&[f64]) -> Vec<f64> + Sync,
{
    if dims.is_empty() || dims.iter().any(|d| *d < 1) {
        return Err(FaircutError::Input("every factor needs at least one coordinate".into()));
    }
    let total: usize = dims.iter().sum();
    let want = total - dims.len();
    let mut probe = Vec::with_capacity(total);
    for &d in dims {
        probe.push(1.0);
        probe.extend(std::iter::repeat(0.0).take(d - 1));
    }
    let got = f(&probe).len();
    if got != want {
        return Err(FaircutError::dim(want, got));
    }
    audit_product_antipodal(dims, &f, opts.audit_samples, opts.audit_tol, opts.seed)?;
    let normalize = |x: &mut [f64]| {
        let mut start = 0;
        for &d in dims {
            l1_normalize(&mut x[start..start + d]);
            start += d;
        }
    };
    let count = |r: usize| dims.iter().map(|&d| (lattice::octahedral_count(d, r) / 2).max(1)).product::<usize>();
    let grid = |r: usize| {
        let factors: Vec<Vec<Vec<f64>>> = dims.iter().map(|&d| lattice::octahedral(d, r, true)).collect();
        cartesian(&factors)
    };
    let eval = |_: usize, x: &[f64]| {
        let mut y = x.to_vec();
        normalize(&mut y);
        f(&y)
    };
    let (_, x, residual) = search_bounded(1, grid, eval, normalize, opts, count).map_err(no_zero)?;
    let mut pts = Vec::with_capacity(dims.len());
    let mut start = 0;
    for &d in dims {
        pts.push(OctahedralPoint { coords: x[start..start + d].to_vec() });
        start += d;
    }
    Ok(Solution { point: pts, residual })
}

fn cartesian(factors: &[Vec<Vec<f64>>]) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = vec![Vec::new()];
    for f in factors {
        let mut next = Vec::with_capacity(out.len() * f.len());
        for prefix in &out {
            for p in f {
                let mut v = prefix.clone();
                v.extend_from_slice(p);
                next.push(v);
            }
        }
        out = next;
    }
    out
}

/// Labelings of `n` join coordinates with the first label fixed to 0 (one
/// representative per cyclic orbit) that use all `k` labels.
pub fn join_sheets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut l = vec![0usize; n];
    let total = k.pow((n - 1) as u32);
    for code in 0..total {
        let mut c = code;
        for i in (1..n).rev() {
            l[i] = c % k;
            c /= k;
        }
        let mut used = vec![false; k];
        for &x in &l {
            used[x] = true;
        }
        if used.iter().all(|u| *u) {
            out.push(l.clone());
        }
    }
    out
}

pub fn is_prime(k: usize) -> bool {
    k >= 2 && (2..).take_while(|d| d * d <= k).all(|d| k % d != 0)
}

/// Finds a zero of a cyclically equivariant map on the join `[k]^{*n}`.
///
/// `f` returns `t` blocks of `k` values (one per label) with
/// `n = t(k-1) + 1`. The search runs over labelings, each restricted to its
/// simplex of barycentric weights.
pub fn join_zero<F>(n: usize, k: usize, f: F, opts: &SolverOptions) -> Result<Solution<JoinPoint>>
where
    F: Fn(&JoinPoint) -> Vec<f64> + Sync,
{
    join_zero_on(n, k, join_sheets(n, k), f, opts)
}

/// Labelings with first label 0, no two neighbours equal and all `k`
/// labels used. On the line, merging equal neighbours and padding with
/// empty intervals moves any zero onto one of these sheets.
pub fn alternating_sheets(n: usize, k: usize) -> Vec<Vec<usize>> {
    join_sheets(n, k).into_iter().filter(|l| l.windows(2).all(|w| w[0] != w[1])).collect()
}

/// [`join_zero`] restricted to the given labelings.
pub fn join_zero_on<F>(n: usize, k: usize, sheets: Vec<Vec<usize>>, f: F, opts: &SolverOptions) -> Result<Solution<JoinPoint>>
where
    F: Fn(&JoinPoint) -> Vec<f64> + Sync,
{
    if !is_prime(k) {
        return Err(FaircutError::Unsupported(format!("join search needs a prime number of labels, got {k}")));
    }
    let probe = JoinPoint { barycentric: vec![1.0 / n as f64; n], labels: (0..n).map(|i| i % k).collect() };
    let got = f(&probe).len();
    if got % k != 0 || (got / k) * (k - 1) + 1 != n {
        return Err(FaircutError::dim((n - 1) / (k - 1) * k, got));
    }
    if sheets.is_empty() || sheets.iter().any(|l| l.len() != n || l.iter().any(|&x| x >= k)) {
        return Err(FaircutError::Input(format!("labelings must have {n} entries below {k}")));
    }
    audit_cyclic(n, k, &f, opts.audit_samples, opts.audit_tol, opts.seed)?;
    let count = |r: usize| lattice::simplex_count(n, r) * sheets.len();
    let grid = |r: usize| lattice::simplex(n, r);
    let eval = |s: usize, x: &[f64]| {
        let mut w = x.to_vec();
        simplex_normalize(&mut w);
        f(&JoinPoint { barycentric: w, labels: sheets[s].clone() })
    };
    let (s, x, residual) = search_bounded(sheets.len(), grid, eval, simplex_normalize, opts, count)
        .map_err(no_zero)?;
    Ok(Solution { point: JoinPoint { barycentric: x, labels: sheets[s].clone() }, residual })
}

/// [`search`] with an explicit grid-size function for the budget check.
fn search_bounded<G, E, P, C>(
    sheets: usize,
    grid: G,
    eval: E,
    project: P,
    opts: &SolverOptions,
    count: C,
) -> std::result::Result<(usize, Vec<f64>, f64), SearchFailure>
where
    G: Fn(usize) -> Vec<Vec<f64>>,
    E: Fn(usize, &[f64]) -> Vec<f64> + Sync,
    P: Fn(&mut [f64]) + Sync,
    C: Fn(usize) -> usize,
{
    let fit = |budget: usize| {
        let mut r = opts.initial_resolution.max(1);
        while 2 * r <= opts.max_resolution && count(2 * r) <= budget {
            r *= 2;
        }
        r
    };
    let mut res = fit(opts.max_grid_points);
    let capped = SolverOptions { max_resolution: res, ..opts.clone() };
    let mut outcome = search(sheets, &grid, &eval, &project, &capped);
    // on failure, retry once per finer level that fits an escalated budget
    let mut budget = opts.max_grid_points;
    while let Err(ref failed) = outcome {
        budget = budget.saturating_mul(ESCALATION);
        if budget > ESCALATION_LIMIT * opts.max_grid_points {
            break;
        }
        let next = fit(budget);
        if next == res {
            continue;
        }
        res = next;
        let finer = SolverOptions { initial_resolution: res, max_resolution: res, ..opts.clone() };
        let previous: Vec<f64> = failed.per_sheet.clone();
        outcome = search(sheets, &grid, &eval, &project, &finer).map_err(|mut f| {
            for (a, b) in f.per_sheet.iter_mut().zip(&previous) {
                *a = a.min(*b);
            }
            f.best = f.per_sheet.iter().cloned().fold(f64::INFINITY, f64::min);
            f
        });
    }
    outcome
}

const ESCALATION: usize = 4;
const ESCALATION_LIMIT: usize = 16;

/// Maps a join point with two labels to the octahedral sphere: label 0 is
/// the positive sign.
pub fn join2_to_octahedral(x: &JoinPoint) -> OctahedralPoint {
    OctahedralPoint {
        coords: x
            .barycentric
            .iter()
            .zip(&x.labels)
            .map(|(w, l)| if *l == 0 { *w } else { -*w })
            .collect(),
    }
}

/// Inverse of [`join2_to_octahedral`].
pub fn octahedral_to_join2(x: &OctahedralPoint) -> JoinPoint {
    JoinPoint {
        barycentric: x.coords.iter().map(|v| v.abs()).collect(),
        labels: x.coords.iter().map(|v| if *v < 0.0 { 1 } else { 0 }).collect(),
    }
}
