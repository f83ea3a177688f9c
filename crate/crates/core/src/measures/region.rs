use serde::{Deserialize, Serialize};

/// The halfspace `normal · x <= offset` (or `<` when open).
///
/// Offsets may be infinite: `+inf` is the whole space, `-inf` is empty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Halfspace {
    pub normal: Vec<f64>,
    #[serde(with = "crate::io::ext_real")]
    pub offset: f64,
    pub closed: bool,
}

impl Halfspace {
    pub fn new(normal: Vec<f64>, offset: f64) -> Self {
        Halfspace { normal, offset, closed: true }
    }

    pub fn open(normal: Vec<f64>, offset: f64) -> Self {
        Halfspace { normal, offset, closed: false }
    }

    /// `{ v·x >= h }`, closed.
    pub fn at_least(v: &[f64], h: f64) -> Self {
        Halfspace::new(v.iter().map(|c| -c).collect(), -h)
    }

    /// `{ v·x < h }`, open.
    pub fn below(v: &[f64], h: f64) -> Self {
        Halfspace::open(v.to_vec(), h)
    }

    /// Axis-aligned `{ x_axis <= h }` in dimension `dim`.
    pub fn axis_le(dim: usize, axis: usize, h: f64) -> Self {
        let mut n = vec![0.0; dim];
        n[axis] = 1.0;
        Halfspace::new(n, h)
    }

    /// Axis-aligned `{ x_axis >= h }` in dimension `dim`.
    pub fn axis_ge(dim: usize, axis: usize, h: f64) -> Self {
        let mut n = vec![0.0; dim];
        n[axis] = -1.0;
        Halfspace::new(n, -h)
    }

    pub fn dim(&self) -> usize {
        self.normal.len()
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        dot(&self.normal, x)
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        if self.offset == f64::INFINITY {
            return true;
        }
        if self.offset == f64::NEG_INFINITY {
            return false;
        }
        let v = self.eval(x);
        if self.closed {
            v <= self.offset
        } else {
            v < self.offset
        }
    }

    /// True when every point satisfies the halfspace.
    pub fn is_trivially_full(&self) -> bool {
        self.offset == f64::INFINITY || (self.is_degenerate() && self.offset >= 0.0)
    }

    /// True when no point satisfies the halfspace.
    pub fn is_trivially_empty(&self) -> bool {
        self.offset == f64::NEG_INFINITY || (self.is_degenerate() && self.offset < 0.0)
    }

    fn is_degenerate(&self) -> bool {
        self.normal.iter().all(|c| *c == 0.0)
    }

    /// Index of the single nonzero normal coordinate, if the halfspace is axis-aligned.
    pub fn axis(&self) -> Option<usize> {
        let mut found = None;
        for (i, c) in self.normal.iter().enumerate() {
            if *c != 0.0 {
                if found.is_some() {
                    return None;
                }
                found = Some(i);
            }
        }
        found
    }

    pub fn complement(&self) -> Halfspace {
        Halfspace {
            normal: self.normal.iter().map(|c| -c).collect(),
            offset: -self.offset,
            closed: !self.closed,
        }
    }

    pub fn translated(&self, t: &[f64]) -> Halfspace {
        Halfspace {
            normal: self.normal.clone(),
            offset: self.offset + dot(&self.normal, t),
            closed: self.closed,
        }
    }
}

/// An intersection of halfspaces. No halfspaces means the whole space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvexRegion {
    pub dim: usize,
    pub halfspaces: Vec<Halfspace>,
}

impl ConvexRegion {
    pub fn full(dim: usize) -> Self {
        ConvexRegion { dim, halfspaces: Vec::new() }
    }

    pub fn empty(dim: usize) -> Self {
        ConvexRegion { dim, halfspaces: vec![Halfspace::new(vec![0.0; dim], -1.0)] }
    }

    pub fn from_halfspaces(dim: usize, halfspaces: Vec<Halfspace>) -> Self {
        ConvexRegion { dim, halfspaces }
    }

    /// The axis-aligned box `lo <= x <= hi`.
    pub fn from_box(lo: &[f64], hi: &[f64]) -> Self {
        let dim = lo.len();
        let mut hs = Vec::with_capacity(2 * dim);
        for k in 0..dim {
            hs.push(Halfspace::axis_ge(dim, k, lo[k]));
            hs.push(Halfspace::axis_le(dim, k, hi[k]));
        }
        ConvexRegion { dim, halfspaces: hs }
    }

    pub fn with(mut self, h: Halfspace) -> Self {
        self.halfspaces.push(h);
        self
    }

    pub fn push(&mut self, h: Halfspace) {
        self.halfspaces.push(h);
    }

    pub fn intersect(&self, other: &ConvexRegion) -> ConvexRegion {
        let mut hs = self.halfspaces.clone();
        hs.extend(other.halfspaces.iter().cloned());
        ConvexRegion { dim: self.dim, halfspaces: hs }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        self.halfspaces.iter().all(|h| h.contains(x))
    }

    /// Syntactic emptiness: some halfspace excludes everything.
    pub fn is_trivially_empty(&self) -> bool {
        self.halfspaces.iter().any(Halfspace::is_trivially_empty)
    }

    pub fn translated(&self, t: &[f64]) -> ConvexRegion {
        ConvexRegion {
            dim: self.dim,
            halfspaces: self.halfspaces.iter().map(|h| h.translated(t)).collect(),
        }
    }

    /// Drops halfspaces that constrain nothing.
    pub fn simplified(&self) -> ConvexRegion {
        if self.is_trivially_empty() {
            return ConvexRegion::empty(self.dim);
        }
        ConvexRegion {
            dim: self.dim,
            halfspaces: self
                .halfspaces
                .iter()
                .filter(|h| !h.is_trivially_full())
                .cloned()
                .collect(),
        }
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
