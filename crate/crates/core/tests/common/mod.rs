//! Test-side oracles written without the library's mass code, plus random
//! instance generators.

#![allow(dead_code)]

use faircut::measures::{BoxAtom, BoxMeasure, ConvexRegion};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::io::Write;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Prints one verdict line straight to stdout, past the harness capture.
pub fn report(criterion: u32, ok: bool, detail: &str) {
    let verdict = if ok { "PASS" } else { "FAIL" };
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{verdict} criterion {criterion}: {detail}");
    let _ = out.flush();
}

fn atom(m: &BoxMeasure, i: usize) -> (Vec<f64>, Vec<f64>, f64) {
    (m.atom_lo(i).to_vec(), m.atom_hi(i).to_vec(), m.atom_weight(i) / m.total_mass())
}

/// Normalized mass of `[a, b)` under a measure on the line.
pub fn interval_mass(m: &BoxMeasure, a: f64, b: f64) -> f64 {
    (0..m.len())
        .map(|i| {
            let (lo, hi, w) = atom(m, i);
            let len = (b.min(hi[0]) - a.max(lo[0])).max(0.0);
            w * len / (hi[0] - lo[0])
        })
        .sum()
}

fn clip(poly: Vec<[f64; 2]>, n: &[f64], c: f64) -> Vec<[f64; 2]> {
    let mut out = Vec::new();
    for i in 0..poly.len() {
        let p = poly[i];
        let q = poly[(i + 1) % poly.len()];
        let fp = n[0] * p[0] + n[1] * p[1] - c;
        let fq = n[0] * q[0] + n[1] * q[1] - c;
        if fp <= 0.0 {
            out.push(p);
        }
        if (fp < 0.0 && fq > 0.0) || (fp > 0.0 && fq < 0.0) {
            let t = fp / (fp - fq);
            out.push([p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])]);
        }
    }
    out
}

fn area(poly: &[[f64; 2]]) -> f64 {
    let mut s = 0.0;
    for i in 0..poly.len() {
        let (p, q) = (poly[i], poly[(i + 1) % poly.len()]);
        s += p[0] * q[1] - q[0] * p[1];
    }
    0.5 * s.abs()
}

/// Normalized mass of a convex region under a measure in one or two dimensions.
pub fn region_mass(m: &BoxMeasure, r: &ConvexRegion) -> f64 {
    let mut total = 0.0;
    for i in 0..m.len() {
        let (lo, hi, w) = atom(m, i);
        match lo.len() {
            1 => {
                let (mut a, mut b) = (lo[0], hi[0]);
                for h in &r.halfspaces {
                    let n = h.normal[0];
                    if h.offset == f64::INFINITY {
                        continue;
                    }
                    if n > 0.0 {
                        b = b.min(h.offset / n);
                    } else if n < 0.0 {
                        a = a.max(h.offset / n);
                    } else if h.offset < 0.0 {
                        b = a;
                    }
                }
                total += w * (b - a).max(0.0) / (hi[0] - lo[0]);
            }
            2 => {
                let mut poly = vec![[lo[0], lo[1]], [hi[0], lo[1]], [hi[0], hi[1]], [lo[0], hi[1]]];
                for h in &r.halfspaces {
                    if h.offset == f64::INFINITY {
                        continue;
                    }
                    if h.offset == f64::NEG_INFINITY {
                        poly.clear();
                        break;
                    }
                    poly = clip(poly, &h.normal, h.offset);
                    if poly.len() < 3 {
                        poly.clear();
                        break;
                    }
                }
                if poly.len() >= 3 {
                    total += w * area(&poly) / ((hi[0] - lo[0]) * (hi[1] - lo[1]));
                }
            }
            d => panic!("region oracle covers d <= 2, got {d}"),
        }
    }
    total
}

/// Uniform sample from a box measure.
pub fn sample(m: &BoxMeasure, r: &mut ChaCha8Rng) -> Vec<f64> {
    let mut u = r.gen_range(0.0..m.total_mass());
    let mut i = 0;
    while i + 1 < m.len() && u >= m.atom_weight(i) {
        u -= m.atom_weight(i);
        i += 1;
    }
    m.atom_lo(i).iter().zip(m.atom_hi(i)).map(|(a, b)| r.gen_range(*a..*b)).collect()
}

/// A measure of one to three random boxes inside `[0, 1]^dim`.
pub fn random_measure(r: &mut ChaCha8Rng, dim: usize) -> BoxMeasure {
    let atoms = (0..r.gen_range(1..=3))
        .map(|_| {
            let mut lo = Vec::with_capacity(dim);
            let mut hi = Vec::with_capacity(dim);
            for _ in 0..dim {
                let a = r.gen_range(0.0..0.8);
                lo.push(a);
                hi.push(a + r.gen_range(0.05..0.2f64).min(1.0 - a));
            }
            BoxAtom::new(lo, hi, r.gen_range(0.5..2.0))
        })
        .collect();
    BoxMeasure::new(dim, atoms).unwrap()
}

/// Worst `|share - 1/k|` over a `[label][measure]` table.
pub fn deviation(shares: &[Vec<f64>], k: usize) -> f64 {
    shares.iter().flatten().map(|s| (s - 1.0 / k as f64).abs()).fold(0.0, f64::max)
}
