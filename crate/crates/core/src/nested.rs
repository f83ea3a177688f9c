//! Nested fixed-direction hyperplane partitions.
//!
//! A scheme is a binary tree whose nodes carry directions. Cutting the
//! region of a node by a hyperplane orthogonal to its direction sends the
//! open lower side `{v·x < h}` to the left subtree and the closed upper side
//! `{v·x >= h}` to the right subtree. A scheme with `n` nodes yields `n + 1`
//! convex parts, listed left subtree first.
//!
//! Offsets are parametrized by reference-measure mass, which turns the space
//! of labelled partitions into a join on which the share-deficit map is
//! cyclically equivariant.

use crate::busolver::{self, JoinPoint, SolverOptions};
use crate::error::{FaircutError, Result};
use crate::measures::{dot, ConvexRegion, Halfspace, Measure, Reference, RestrictedMeasure};
use serde::{Deserialize, Serialize};

/// Largest scheme handled by the labelling search.
pub const MAX_SCHEME_SIZE: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub enum SchemeTree {
    Leaf,
    Node { dir: Vec<f64>, left: Box<SchemeTree>, right: Box<SchemeTree> },
}

impl SchemeTree {
    /// A node with `dir` scaled to unit length.
    pub fn node(dir: &[f64], left: SchemeTree, right: SchemeTree) -> Result<SchemeTree> {
        let n = dot(dir, dir).sqrt();
        if !(n > 0.0 && n.is_finite()) {
            return Err(FaircutError::Input("scheme directions must be nonzero".into()));
        }
        Ok(SchemeTree::Node { dir: dir.iter().map(|c| c / n).collect(), left: Box::new(left), right: Box::new(right) })
    }

    /// Nodes with directions `dirs[0], dirs[1], ...`, each the right child
    /// of the previous one. In one dimension this lists slabs left to right.
    pub fn right_chain(dirs: &[Vec<f64>]) -> Result<SchemeTree> {
        let mut t = SchemeTree::Leaf;
        for d in dirs.iter().rev() {
            t = SchemeTree::node(d, SchemeTree::Leaf, t)?;
        }
        Ok(t)
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            SchemeTree::Leaf => 0,
            SchemeTree::Node { left, right, .. } => 1 + left.size() + right.size(),
        }
    }

    pub fn parts(&self) -> usize {
        self.size() + 1
    }

    /// Common dimension of all directions, `None` for a leaf.
    pub fn dim(&self) -> Option<usize> {
        match self {
            SchemeTree::Leaf => None,
            SchemeTree::Node { dir, .. } => Some(dir.len()),
        }
    }

    fn check_dim(&self, d: usize) -> Result<()> {
        if let SchemeTree::Node { dir, left, right } = self {
            if dir.len() != d {
                return Err(FaircutError::dim(d, dir.len()));
            }
            left.check_dim(d)?;
            right.check_dim(d)?;
        }
        Ok(())
    }

    /// Directions in pre-order.
    pub fn directions(&self) -> Vec<Vec<f64>> {
        let mut out = Vec::new();
        fn rec(t: &SchemeTree, out: &mut Vec<Vec<f64>>) {
            if let SchemeTree::Node { dir, left, right } = t {
                out.push(dir.clone());
                rec(left, out);
                rec(right, out);
            }
        }
        rec(self, &mut out);
        out
    }
}

/// A scheme with one offset per node (pre-order) and one label per part.
#[derive(Debug, Clone, PartialEq)]
pub struct NestedPartition {
    pub scheme: SchemeTree,
    pub offsets: Vec<f64>,
    pub labels: Vec<usize>,
}

impl NestedPartition {
    /// The `n + 1` parts, empty ones included.
    pub fn parts(&self, dim: usize) -> Vec<ConvexRegion> {
        let mut out = Vec::with_capacity(self.scheme.parts());
        let mut next = 0;
        parts_rec(&self.scheme, &self.offsets, &mut next, ConvexRegion::full(dim), &mut out);
        out
    }

    /// Index of the part containing `p`.
    pub fn part_of(&self, p: &[f64]) -> usize {
        let mut t = &self.scheme;
        let mut off = 0;
        let mut part = 0;
        while let SchemeTree::Node { dir, left, right } = t {
            let h = self.offsets[off];
            if dot(dir, p) < h {
                off += 1;
                t = left;
            } else {
                off += 1 + left.size();
                part += left.size() + 1;
                t = right;
            }
        }
        part
    }

    /// `shares[label][measure]`.
    pub fn shares<M: Measure>(&self, measures: &[M], k: usize) -> Vec<Vec<f64>> {
        let dim = measures.first().map(|m| m.dim()).unwrap_or(1);
        let parts = self.parts(dim);
        let mut out = vec![vec![0.0; measures.len()]; k];
        for (part, l) in parts.iter().zip(&self.labels) {
            if part.is_trivially_empty() {
                continue;
            }
            for (j, m) in measures.iter().enumerate() {
                out[*l][j] += m.mass(part);
            }
        }
        out
    }

    pub fn max_deviation<M: Measure>(&self, measures: &[M], k: usize) -> f64 {
        let target = 1.0 / k as f64;
        self.shares(measures, k).iter().flatten().fold(0.0f64, |m, s| m.max((s - target).abs()))
    }
}

fn parts_rec(t: &SchemeTree, offsets: &[f64], next: &mut usize, k: ConvexRegion, out: &mut Vec<ConvexRegion>) {
    match t {
        SchemeTree::Leaf => out.push(k.simplified()),
        SchemeTree::Node { dir, left, right } => {
            let h = offsets[*next];
            *next += 1;
            parts_rec(left, offsets, next, k.clone().with(Halfspace::below(dir, h)), out);
            parts_rec(right, offsets, next, k.with(Halfspace::at_least(dir, h)), out);
        }
    }
}

/// Whether two labelled partitions agree up to reference-null sets: every
/// label class of one has the same reference mass as its overlap with the
/// same class of the other.
pub fn geometric_duplicate<M: Measure>(a: &NestedPartition, b: &NestedPartition, reference: &M, k: usize, tol: f64) -> bool {
    let dim = reference.dim();
    let (pa, pb) = (a.parts(dim), b.parts(dim));
    for label in 0..k {
        let ca: Vec<&ConvexRegion> = pa.iter().zip(&a.labels).filter(|(_, l)| **l == label).map(|(p, _)| p).collect();
        let cb: Vec<&ConvexRegion> = pb.iter().zip(&b.labels).filter(|(_, l)| **l == label).map(|(p, _)| p).collect();
        let ma: f64 = ca.iter().map(|p| reference.mass(p)).sum();
        let mb: f64 = cb.iter().map(|p| reference.mass(p)).sum();
        let both: f64 = ca.iter().flat_map(|p| cb.iter().map(move |q| reference.mass(&p.intersect(q)))).sum();
        if (ma - both).abs() > tol || (mb - both).abs() > tol {
            return false;
        }
    }
    true
}

/// Offsets realizing prescribed reference masses of the parts, and the
/// labels of the join point.
pub fn join_to_partition<M: Measure>(x: &JoinPoint, scheme: &SchemeTree, reference: &M) -> Result<NestedPartition> {
    if x.len() != scheme.parts() {
        return Err(FaircutError::dim(scheme.parts(), x.len()));
    }
    let dim = reference.dim();
    scheme.check_dim(dim)?;
    let mut offsets = Vec::with_capacity(scheme.size());
    offsets_rec(scheme, &x.barycentric, ConvexRegion::full(dim), reference, &mut offsets)?;
    Ok(NestedPartition { scheme: scheme.clone(), offsets, labels: x.labels.clone() })
}

fn offsets_rec<M: Measure>(t: &SchemeTree, w: &[f64], k: ConvexRegion, reference: &M, out: &mut Vec<f64>) -> Result<()> {
    if let SchemeTree::Node { dir, left, right } = t {
        let nl = left.parts();
        let (wl, wr): (f64, f64) = (w[..nl].iter().sum(), w[nl..].iter().sum());
        let h = if wl <= 0.0 && wr <= 0.0 {
            f64::INFINITY
        } else if wl <= 0.0 {
            f64::NEG_INFINITY
        } else if wr <= 0.0 {
            f64::INFINITY
        } else {
            let total = reference.mass(&k);
            directional_quantile(reference, &k, dir, total * wl / (wl + wr))?
        };
        out.push(h);
        offsets_rec(left, &w[..nl], k.clone().with(Halfspace::below(dir, h)), reference, out)?;
        offsets_rec(right, &w[nl..], k.with(Halfspace::at_least(dir, h)), reference, out)?;
    }
    Ok(())
}

/// Solves `ref(K ∩ {v·x < h}) = target` for `h` by safeguarded regula falsi.
pub fn directional_quantile<M: Measure>(reference: &M, k: &ConvexRegion, v: &[f64], target: f64) -> Result<f64> {
    let (lo, hi) = reference.support_box();
    let (mut a, mut b) = (0.0, 0.0);
    for i in 0..v.len() {
        a += v[i] * if v[i] >= 0.0 { lo[i] } else { hi[i] };
        b += v[i] * if v[i] >= 0.0 { hi[i] } else { lo[i] };
    }
    let g = |h: f64| reference.mass(&k.clone().with(Halfspace::below(v, h))) - target;
    let (mut ga, mut gb) = (g(a), g(b));
    if ga > 1e-12 || gb < -1e-12 {
        return Err(FaircutError::Quantile(format!("cannot bracket mass {target:.3e} along {v:?}")));
    }
    if gb <= 0.0 {
        return Ok(b);
    }
    if ga >= 0.0 {
        return Ok(a);
    }
    let mut side = 0i8;
    for _ in 0..200 {
        let mut h = (a * gb - b * ga) / (gb - ga);
        if !(h > a && h < b) {
            h = 0.5 * (a + b);
        }
        let gh = g(h);
        if gh.abs() <= 1e-15 || (b - a) <= 1e-15 * (1.0 + h.abs()) {
            return Ok(h);
        }
        if gh < 0.0 {
            a = h;
            ga = gh;
            if side == -1 {
                gb *= 0.5;
            }
            side = -1;
        } else {
            b = h;
            gb = gh;
            if side == 1 {
                ga *= 0.5;
            }
            side = 1;
        }
    }
    Ok(0.5 * (a + b))
}

/// The share-deficit map of labelled nested partitions.
pub struct NestedMap<'a, M: Measure> {
    measures: &'a [M],
    reference: Reference<'a, M>,
    scheme: SchemeTree,
    k: usize,
}

impl<'a, M: Measure> NestedMap<'a, M> {
    pub fn new(measures: &'a [M], scheme: SchemeTree, k: usize) -> Result<Self> {
        let first = measures.first().ok_or_else(|| FaircutError::Input("at least one measure is required".into()))?;
        let dim = first.dim();
        if dim > 3 {
            return Err(FaircutError::UnsupportedDimension(dim));
        }
        for m in measures {
            if m.dim() != dim {
                return Err(FaircutError::dim(dim, m.dim()));
            }
        }
        scheme.check_dim(dim)?;
        Ok(NestedMap { measures, reference: Reference::new(measures)?, scheme, k })
    }

    pub fn reference(&self) -> &Reference<'a, M> {
        &self.reference
    }

    pub fn partition(&self, x: &JoinPoint) -> Result<NestedPartition> {
        join_to_partition(x, &self.scheme, &self.reference)
    }

    /// `t` blocks of `k` deficits; NaN when the quantile inversion fails.
    pub fn eval(&self, x: &JoinPoint) -> Vec<f64> {
        let t = self.measures.len();
        match self.partition(x) {
            Ok(p) => {
                let s = p.shares(self.measures, self.k);
                let mut out = Vec::with_capacity(t * self.k);
                for j in 0..t {
                    for row in s.iter().take(self.k) {
                        out.push(row[j] - 1.0 / self.k as f64);
                    }
                }
                out
            }
            Err(_) => vec![f64::NAN; t * self.k],
        }
    }
}

/// A labelled nested partition of `scheme` giving each of `k` (prime)
/// thieves `1/k` of every measure. The scheme must have `t(k-1)` nodes.
pub fn solve_nested<M: Measure>(measures: &[M], scheme: &SchemeTree, k: usize, opts: &SolverOptions) -> Result<NestedPartition> {
    if !busolver::is_prime(k) {
        return Err(FaircutError::Unsupported(format!("{k} is not prime")));
    }
    let n = measures.len() * (k - 1);
    if scheme.size() != n {
        return Err(FaircutError::Input(format!("scheme has {} nodes, {} measures and {k} thieves need {n}", scheme.size(), measures.len())));
    }
    if n > MAX_SCHEME_SIZE {
        return Err(FaircutError::InstanceTooLarge(format!("scheme size {n} exceeds {MAX_SCHEME_SIZE}")));
    }
    let map = NestedMap::new(measures, scheme.clone(), k)?;
    let sol = busolver::join_zero(n + 1, k, |x: &JoinPoint| map.eval(x), opts)?;
    map.partition(&sol.point)
}

/// The result of a composed split: an outer partition into classes, and
/// for each class a further split of the class among the remaining factors.
#[derive(Debug, Clone, PartialEq)]
pub enum CompositeSplit {
    Prime(NestedPartition),
    Composed { outer: NestedPartition, classes: Vec<CompositeSplit>, inner_k: usize },
}

impl CompositeSplit {
    /// Total number of hyperplanes used.
    pub fn cuts(&self) -> usize {
        match self {
            CompositeSplit::Prime(p) => p.scheme.size(),
            CompositeSplit::Composed { outer, classes, .. } => outer.scheme.size() + classes.iter().map(|c| c.cuts()).sum::<usize>(),
        }
    }

    /// Final label of the point `p`.
    pub fn label_of(&self, p: &[f64]) -> usize {
        match self {
            CompositeSplit::Prime(q) => q.labels[q.part_of(p)],
            CompositeSplit::Composed { outer, classes, inner_k } => {
                let c = outer.labels[outer.part_of(p)];
                c * inner_k + classes[c].label_of(p)
            }
        }
    }

    /// Convex pieces with their final labels.
    pub fn labelled_regions(&self, dim: usize) -> Vec<(ConvexRegion, usize)> {
        match self {
            CompositeSplit::Prime(q) => q.parts(dim).into_iter().zip(q.labels.iter().copied()).collect(),
            CompositeSplit::Composed { outer, classes, inner_k } => {
                let mut out = Vec::new();
                for (part, &c) in outer.parts(dim).iter().zip(&outer.labels) {
                    if part.is_trivially_empty() {
                        continue;
                    }
                    for (r, l) in classes[c].labelled_regions(dim) {
                        let both = part.intersect(&r).simplified();
                        if !both.is_trivially_empty() {
                            out.push((both, c * inner_k + l));
                        }
                    }
                }
                out
            }
        }
    }

    pub fn shares<M: Measure>(&self, measures: &[M], k: usize) -> Vec<Vec<f64>> {
        let dim = measures.first().map(|m| m.dim()).unwrap_or(1);
        let mut out = vec![vec![0.0; measures.len()]; k];
        for (r, l) in self.labelled_regions(dim) {
            for (j, m) in measures.iter().enumerate() {
                out[l][j] += m.mass(&r);
            }
        }
        out
    }

    pub fn max_deviation<M: Measure>(&self, measures: &[M], k: usize) -> f64 {
        let target = 1.0 / k as f64;
        self.shares(measures, k).iter().flatten().fold(0.0f64, |m, s| m.max((s - target).abs()))
    }
}

/// Fair split among `k = Π primes` thieves using `t(k-1)` hyperplanes with
/// the given directions, consumed in order: the outer split into
/// `primes[0]` classes takes the first `t(primes[0]-1)` and every class
/// then takes its share of the rest. Each split uses a chain scheme.
pub fn solve_nested_composite(measures: &[crate::measures::BoxMeasure], directions: &[Vec<f64>], primes: &[usize], opts: &SolverOptions) -> Result<CompositeSplit> {
    let k: usize = primes.iter().product();
    let t = measures.len();
    if directions.len() != t * (k - 1) {
        return Err(FaircutError::Input(format!("{} directions given, {t} measures and {k} thieves need {}", directions.len(), t * (k - 1))));
    }
    let wrapped: Vec<RestrictedMeasure> = measures.iter().map(|m| RestrictedMeasure::whole(m.clone())).collect();
    composite_rec(&wrapped, directions, primes, opts)
}

fn composite_rec(measures: &[RestrictedMeasure], dirs: &[Vec<f64>], primes: &[usize], opts: &SolverOptions) -> Result<CompositeSplit> {
    let t = measures.len();
    match primes {
        [] => Err(FaircutError::Input("empty factorization".into())),
        [p] => Ok(CompositeSplit::Prime(solve_nested(measures, &SchemeTree::right_chain(dirs)?, *p, opts)?)),
        [m, rest @ ..] => {
            let half = SolverOptions { tol: 0.5 * opts.tol, ..opts.clone() };
            let n_outer = t * (m - 1);
            let outer = solve_nested(measures, &SchemeTree::right_chain(&dirs[..n_outer])?, *m, &half)?;
            let dim = measures[0].dim();
            let parts = outer.parts(dim);
            let l: usize = rest.iter().product();
            let per_class = t * (l - 1);
            let mut classes = Vec::with_capacity(*m);
            for c in 0..*m {
                let pieces: Vec<ConvexRegion> = parts
                    .iter()
                    .zip(&outer.labels)
                    .filter(|(p, lab)| **lab == c && !p.is_trivially_empty())
                    .map(|(p, _)| p.clone())
                    .collect();
                let restricted = measures.iter().map(|mu| mu.restricted_to(&pieces)).collect::<Result<Vec<_>>>()?;
                let d = &dirs[n_outer + c * per_class..n_outer + (c + 1) * per_class];
                classes.push(composite_rec(&restricted, d, rest, &half)?);
            }
            Ok(CompositeSplit::Composed { outer, classes, inner_k: l })
        }
    }
}

/// JSON shape of a scheme node: `{"dir": [...], "left": node|null, "right": node|null}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SchemeJson {
    pub dir: Vec<f64>,
    #[serde(default)]
    pub left: Option<Box<SchemeJson>>,
    #[serde(default)]
    pub right: Option<Box<SchemeJson>>,
}

impl SchemeJson {
    pub fn to_tree(opt: Option<&SchemeJson>) -> Result<SchemeTree> {
        match opt {
            None => Ok(SchemeTree::Leaf),
            Some(s) => SchemeTree::node(&s.dir, Self::to_tree(s.left.as_deref())?, Self::to_tree(s.right.as_deref())?),
        }
    }

    pub fn from_tree(t: &SchemeTree) -> Option<SchemeJson> {
        match t {
            SchemeTree::Leaf => None,
            SchemeTree::Node { dir, left, right } => Some(SchemeJson {
                dir: dir.clone(),
                left: Self::from_tree(left).map(Box::new),
                right: Self::from_tree(right).map(Box::new),
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::BoxMeasure;

    fn e(d: usize, i: usize) -> Vec<f64> {
        let mut v = vec![0.0; d];
        v[i] = 1.0;
        v
    }

    #[test]
    fn leaf_is_the_whole_space() {
        let p = NestedPartition { scheme: SchemeTree::Leaf, offsets: vec![], labels: vec![0] };
        let parts = p.parts(2);
        assert_eq!(parts.len(), 1);
        assert!(parts[0].contains(&[1e9, -1e9]));
    }

    #[test]
    fn one_node_gives_two_halfspaces() {
        let s = SchemeTree::node(&e(2, 0), SchemeTree::Leaf, SchemeTree::Leaf).unwrap();
        let p = NestedPartition { scheme: s, offsets: vec![0.0], labels: vec![0, 1] };
        let parts = p.parts(2);
        assert!(parts[0].contains(&[-0.1, 5.0]) && !parts[0].contains(&[0.0, 5.0]));
        assert!(parts[1].contains(&[0.0, 5.0]) && !parts[1].contains(&[-0.1, 5.0]));
    }

    #[test]
    fn right_chain_gives_three_slabs() {
        let s = SchemeTree::right_chain(&[e(1, 0), e(1, 0)]).unwrap();
        let p = NestedPartition { scheme: s, offsets: vec![0.0, 1.0], labels: vec![0, 1, 0] };
        let m = BoxMeasure::interval(-1.0, 2.0).unwrap();
        let masses: Vec<f64> = p.parts(1).iter().map(|r| m.mass(r)).collect();
        for (a, b) in masses.iter().zip([1.0 / 3.0; 3]) {
            assert!((a - b).abs() < 1e-15);
        }
        assert_eq!(p.part_of(&[-0.5]), 0);
        assert_eq!(p.part_of(&[0.0]), 1);
        assert_eq!(p.part_of(&[1.5]), 2);
    }

    #[test]
    fn quantile_inversion_examples() {
        let u = [BoxMeasure::interval(0.0, 1.0).unwrap()];
        let reference = Reference::new(&u).unwrap();
        let one = SchemeTree::right_chain(&[e(1, 0)]).unwrap();
        let p = join_to_partition(&JoinPoint::new(vec![0.5, 0.5], vec![0, 1]).unwrap(), &one, &reference).unwrap();
        assert!((p.offsets[0] - 0.5).abs() < 1e-14);
        let p = join_to_partition(&JoinPoint::new(vec![1.0, 0.0], vec![0, 1]).unwrap(), &one, &reference).unwrap();
        assert_eq!(p.offsets, vec![f64::INFINITY]);
        assert!(p.parts(1)[1].is_trivially_empty());
        let two = SchemeTree::right_chain(&[e(1, 0), e(1, 0)]).unwrap();
        let p = join_to_partition(&JoinPoint::new(vec![1.0, 1.0, 1.0], vec![0, 1, 2]).unwrap(), &two, &reference).unwrap();
        assert!((p.offsets[0] - 1.0 / 3.0).abs() < 1e-14 && (p.offsets[1] - 2.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn vertical_median_for_one_measure() {
        let ms = [BoxMeasure::uniform(&[0.0, 0.0], &[1.0, 1.0]).unwrap()];
        let s = SchemeTree::right_chain(&[e(2, 0)]).unwrap();
        let p = solve_nested(&ms, &s, 2, &SolverOptions::with_tol(1e-9)).unwrap();
        assert!((p.offsets[0] - 0.5).abs() < 1e-9);
        assert_ne!(p.labels[0], p.labels[1]);
    }

    #[test]
    fn two_squares_with_two_directions() {
        let ms = [
            BoxMeasure::uniform(&[0.0, 0.0], &[1.0, 1.0]).unwrap(),
            BoxMeasure::uniform(&[0.5, 0.5], &[1.5, 1.5]).unwrap(),
        ];
        let s = SchemeTree::right_chain(&[e(2, 0), e(2, 1)]).unwrap();
        let p = solve_nested(&ms, &s, 2, &SolverOptions::with_tol(1e-9)).unwrap();
        assert_eq!(p.parts(2).len(), 3);
        assert!(p.max_deviation(&ms, 2) <= 1e-9);
    }

    #[test]
    fn composite_quarters() {
        let ms = [BoxMeasure::uniform(&[0.0, 0.0], &[1.0, 1.0]).unwrap()];
        let dirs = vec![e(2, 0); 3];
        let c = solve_nested_composite(&ms, &dirs, &[2, 2], &SolverOptions::with_tol(1e-9)).unwrap();
        assert_eq!(c.cuts(), 3);
        assert!(c.max_deviation(&ms, 4) <= 1e-9);
        let mut xs: Vec<f64> = match &c {
            CompositeSplit::Composed { outer, classes, .. } => {
                let mut v = outer.offsets.clone();
                for cl in classes {
                    if let CompositeSplit::Prime(p) = cl {
                        v.extend(p.offsets.iter().copied());
                    }
                }
                v
            }
            _ => unreachable!(),
        };
        xs.sort_by(f64::total_cmp);
        for (x, q) in xs.iter().zip([0.25, 0.5, 0.75]) {
            assert!((x - q).abs() < 1e-9, "{xs:?}");
        }
    }

    #[test]
    fn scheme_json_round_trip() {
        let s = SchemeTree::node(&[1.0, 0.0], SchemeTree::right_chain(&[e(2, 1)]).unwrap(), SchemeTree::Leaf).unwrap();
        let j = SchemeJson::from_tree(&s);
        let txt = serde_json::to_string(&j).unwrap();
        let back: Option<SchemeJson> = serde_json::from_str(&txt).unwrap();
        assert_eq!(SchemeJson::to_tree(back.as_ref()).unwrap(), s);
    }

    #[test]
    fn duplicates_are_detected() {
        let u = [BoxMeasure::interval(0.0, 1.0).unwrap()];
        let reference = Reference::new(&u).unwrap();
        let a = NestedPartition { scheme: SchemeTree::right_chain(&[e(1, 0), e(1, 0)]).unwrap(), offsets: vec![0.5, f64::INFINITY], labels: vec![0, 1, 0] };
        let b = NestedPartition { scheme: a.scheme.clone(), offsets: vec![0.5, f64::INFINITY], labels: vec![0, 1, 1] };
        let c = NestedPartition { scheme: a.scheme.clone(), offsets: vec![0.4, f64::INFINITY], labels: vec![0, 1, 0] };
        assert!(geometric_duplicate(&a, &b, &reference, 2, 1e-12));
        assert!(!geometric_duplicate(&a, &c, &reference, 2, 1e-12));
    }
}
