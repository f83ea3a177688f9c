use super::{StairPartition, Strip};
use crate::Side;
use serde::{Deserialize, Serialize};

/// One axis-parallel piece of a stair path. Horizontal runs are stored in
/// the direction of travel and may end at infinity; `through_infinity`
/// marks a run after which the path re-enters from the opposite end.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Segment {
    Vertical {
        #[serde(with = "crate::io::ext_real")]
        x: f64,
        #[serde(with = "crate::io::ext_real")]
        y0: f64,
        #[serde(with = "crate::io::ext_real")]
        y1: f64,
    },
    Horizontal {
        #[serde(with = "crate::io::ext_real")]
        y: f64,
        #[serde(with = "crate::io::ext_real")]
        x0: f64,
        #[serde(with = "crate::io::ext_real")]
        x1: f64,
        through_infinity: bool,
    },
}

/// A y-monotone axis-parallel path separating the two sides of a partition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StairPath {
    pub segments: Vec<Segment>,
    /// Corners at finite points.
    pub turns: usize,
    /// Colour of the region far down and to the left.
    pub bottom_left: Side,
}

impl StairPath {
    pub(super) fn from_partition(p: &StairPartition) -> StairPath {
        let strips: Vec<(f64, f64, Strip)> = (0..p.strips.len())
            .filter_map(|i| {
                let (lo, hi) = p.strip_bounds(i);
                (hi > lo).then(|| (lo, hi, p.strips[i].normalized()))
            })
            .collect();
        let mut segs = Vec::new();
        for (idx, &(lo, hi, s)) in strips.iter().enumerate() {
            if let Strip::Split { x, .. } = s {
                segs.push(Segment::Vertical { x, y0: lo, y1: hi });
            }
            if let Some(&(_, _, above)) = strips.get(idx + 1) {
                junction(hi, s, above, &mut segs);
            }
        }
        // a run ending at infinity wraps when anything follows it
        let n = segs.len();
        for i in 0..n {
            if let Segment::Horizontal { x1, ref mut through_infinity, .. } = segs[i] {
                *through_infinity = x1.is_infinite() && i + 1 < n;
            }
        }
        let turns = segs
            .iter()
            .map(|s| match *s {
                Segment::Horizontal { x0, x1, .. } => x0.is_finite() as usize + x1.is_finite() as usize,
                Segment::Vertical { .. } => 0,
            })
            .sum();
        let bottom_left = match strips.first() {
            Some(&(_, _, Strip::Whole { side })) => side,
            Some(&(_, _, Strip::Split { left, .. })) => left,
            None => Side::A,
        };
        StairPath { segments: segs, turns, bottom_left }
    }

    /// Colour of `p` recovered from the path alone, by counting crossings
    /// along an L-shaped route from the far lower left. `None` on the path.
    pub fn side_by_crossings(&self, p: &[f64]) -> Option<Side> {
        let mut y_low = p[1];
        for s in &self.segments {
            match *s {
                Segment::Vertical { y0, y1, .. } => {
                    for y in [y0, y1] {
                        if y.is_finite() {
                            y_low = y_low.min(y);
                        }
                    }
                }
                Segment::Horizontal { y, .. } => y_low = y_low.min(y),
            }
        }
        y_low -= 1.0;
        let mut crossings = 0;
        for s in &self.segments {
            match *s {
                Segment::Vertical { x, y0, y1 } => {
                    if x == p[0] && y0 <= p[1] && p[1] <= y1 {
                        return None;
                    }
                    if x < p[0] && y0 <= y_low && y_low < y1 {
                        crossings += 1;
                    }
                }
                Segment::Horizontal { y, x0, x1, .. } => {
                    let (a, b) = (x0.min(x1), x0.max(x1));
                    if y == p[1] && a <= p[0] && p[0] <= b {
                        return None;
                    }
                    if y_low < y && y < p[1] && a <= p[0] && p[0] < b {
                        crossings += 1;
                    }
                }
            }
        }
        Some(if crossings % 2 == 0 { self.bottom_left } else { self.bottom_left.flip() })
    }

    /// Whether the pieces, in order, never move downwards.
    pub fn is_y_monotone(&self) -> bool {
        let mut y = f64::NEG_INFINITY;
        for s in &self.segments {
            match *s {
                Segment::Vertical { y0, y1, .. } => {
                    if y0 < y || y1 < y0 {
                        return false;
                    }
                    y = y1;
                }
                Segment::Horizontal { y: h, .. } => {
                    if h < y {
                        return false;
                    }
                    y = h;
                }
            }
        }
        true
    }
}

/// Horizontal runs along the line `y` between strip `below` and strip `above`.
fn junction(y: f64, below: Strip, above: Strip, segs: &mut Vec<Segment>) {
    let run = |x0: f64, x1: f64| Segment::Horizontal { y, x0, x1, through_infinity: false };
    match (below, above) {
        (Strip::Split { x: a, left: la }, Strip::Split { x: b, left: lb }) => {
            if la == lb {
                if a != b {
                    segs.push(run(a, b));
                }
            } else if a <= b {
                segs.push(run(a, f64::NEG_INFINITY));
                segs.push(run(f64::INFINITY, b));
            } else {
                segs.push(run(a, f64::INFINITY));
                segs.push(run(f64::NEG_INFINITY, b));
            }
        }
        (Strip::Split { x, left }, Strip::Whole { side }) => {
            // the boundary is where the lower strip has the other colour
            if left == side {
                segs.push(run(x, f64::INFINITY));
            } else {
                segs.push(run(x, f64::NEG_INFINITY));
            }
        }
        (Strip::Whole { side }, Strip::Split { x, left }) => {
            if left == side {
                segs.push(run(f64::INFINITY, x));
            } else {
                segs.push(run(f64::NEG_INFINITY, x));
            }
        }
        (Strip::Whole { side: s }, Strip::Whole { side: t }) => {
            if s != t {
                segs.push(run(f64::NEG_INFINITY, f64::INFINITY));
            }
        }
    }
}
