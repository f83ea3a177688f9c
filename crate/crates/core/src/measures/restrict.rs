use super::{atom_fraction, BoxAtom, BoxMeasure, ConvexRegion, Measure};
use crate::error::{FaircutError, Result};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

pub const DEFAULT_RESTRICT_RTOL: f64 = 1e-9;
const MAX_BOXES: usize = 3_000_000;
const MAX_DEPTH: u32 = 40;

/// A box-decomposed approximation of `m` restricted to a region.
#[derive(Debug, Clone)]
pub struct Restriction {
    /// The restricted measure, renormalized to total mass one.
    pub measure: BoxMeasure,
    /// `m(r)` before renormalization.
    pub mass: f64,
    /// Bound on the total-variation distance between the box pile and the
    /// exact restriction (unnormalized units).
    pub error: f64,
}

struct Cell {
    lo: [f64; 3],
    hi: [f64; 3],
    depth: u32,
    mass: f64,
    frac: f64,
}

impl Cell {
    // replacing the cut cell by a uniform box of the same mass moves at most this much
    fn err(&self) -> f64 {
        2.0 * self.mass * self.frac * (1.0 - self.frac)
    }
}

impl PartialEq for Cell {
    fn eq(&self, other: &Self) -> bool {
        self.err() == other.err()
    }
}
impl Eq for Cell {}
impl PartialOrd for Cell {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Cell {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err().total_cmp(&other.err())
    }
}

/// Restricts `m` to `r`, re-boxing cut atoms by axis-aligned subdivision
/// until the approximation error drops below `rtol`.
///
/// Atoms cut only by axis-aligned halfspaces are clipped exactly. The pile
/// always carries the exact mass of every cell; only its placement inside
/// partially covered cells is approximate.
pub fn restrict(m: &BoxMeasure, r: &ConvexRegion, rtol: f64) -> Result<Restriction> {
    let dim = m.dim();
    if dim > 3 {
        return Err(FaircutError::UnsupportedDimension(dim));
    }
    if r.dim != dim {
        return Err(FaircutError::dim(dim, r.dim));
    }
    let mut out: Vec<BoxAtom> = Vec::new();
    let mut heap: BinaryHeap<Cell> = BinaryHeap::new();
    let mut error = 0.0;
    for i in 0..m.len() {
        let (lo, hi, w) = (m.atom_lo(i), m.atom_hi(i), m.atom_weight(i));
        let frac = atom_fraction(lo, hi, r).expect("d <= 3");
        if frac <= 0.0 {
            continue;
        }
        if frac >= 1.0 {
            out.push(BoxAtom::new(lo.to_vec(), hi.to_vec(), w));
            continue;
        }
        if let Some((a, b)) = axis_clip(lo, hi, r) {
            out.push(BoxAtom::new(a, b, w * frac));
            continue;
        }
        let mut c = Cell { lo: [0.0; 3], hi: [0.0; 3], depth: 0, mass: w, frac };
        c.lo[..dim].copy_from_slice(lo);
        c.hi[..dim].copy_from_slice(hi);
        error += c.err();
        heap.push(c);
    }
    while error > rtol {
        let Some(cell) = heap.pop() else { break };
        if cell.depth >= MAX_DEPTH || out.len() + heap.len() + (1 << dim) > MAX_BOXES {
            heap.push(cell);
            break;
        }
        error -= cell.err();
        let density = cell.mass / volume(&cell.lo, &cell.hi, dim);
        for corner in 0..(1usize << dim) {
            let mut lo = cell.lo;
            let mut hi = cell.hi;
            for k in 0..dim {
                let mid = 0.5 * (cell.lo[k] + cell.hi[k]);
                if corner >> k & 1 == 0 {
                    hi[k] = mid;
                } else {
                    lo[k] = mid;
                }
            }
            let frac = atom_fraction(&lo[..dim], &hi[..dim], r).expect("d <= 3");
            if frac <= 0.0 {
                continue;
            }
            let mass = density * volume(&lo, &hi, dim);
            if frac >= 1.0 {
                out.push(BoxAtom::new(lo[..dim].to_vec(), hi[..dim].to_vec(), mass));
                continue;
            }
            let child = Cell { lo, hi, depth: cell.depth + 1, mass, frac };
            error += child.err();
            heap.push(child);
        }
    }
    error = error.max(0.0);
    if error > rtol {
        return Err(FaircutError::Precision { achieved: error });
    }
    for c in heap {
        out.push(BoxAtom::new(c.lo[..dim].to_vec(), c.hi[..dim].to_vec(), c.mass * c.frac));
    }
    if out.is_empty() {
        return Err(FaircutError::Input("restriction to a null set".into()));
    }
    let mass = m.mass(r);
    let measure = BoxMeasure::new(dim, out)?;
    Ok(Restriction { measure, mass, error })
}

fn volume(lo: &[f64; 3], hi: &[f64; 3], dim: usize) -> f64 {
    (0..dim).map(|k| hi[k] - lo[k]).product()
}

/// The clipped box when every halfspace cutting `[lo, hi]` is axis-aligned.
fn axis_clip(lo: &[f64], hi: &[f64], r: &ConvexRegion) -> Option<(Vec<f64>, Vec<f64>)> {
    let mut a = lo.to_vec();
    let mut b = hi.to_vec();
    for h in &r.halfspaces {
        if h.is_trivially_full() {
            continue;
        }
        let k = h.axis()?;
        let t = h.offset / h.normal[k];
        if h.normal[k] > 0.0 {
            b[k] = b[k].min(t);
        } else {
            a[k] = a[k].max(t);
        }
    }
    if (0..lo.len()).all(|k| a[k] < b[k]) {
        Some((a, b))
    } else {
        None
    }
}
