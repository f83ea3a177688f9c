//! Acceptance suite. Each test prints one `PASS`/`FAIL criterion N` line.

mod common;

use common::*;
use faircut::busolver::{self, JoinPoint, SolverOptions};
use faircut::chessboard::{self, ChessboardMap, ChessboardSpec};
use faircut::counterexamples::{self, OneOneParams, OrthantParams};
use faircut::measures::BoxMeasure;
use faircut::necklace1d::{self, BeadString, NecklaceMap};
use faircut::nested::{self, NestedMap, SchemeTree};
use faircut::oracle;
use faircut::stairpath::{self, CutVector, Segment, StairMap};
use faircut::voronoifair::{self, CellFunctions, Cells, FairMap};
use faircut::Side;
use rand::Rng;
use std::time::{Duration, Instant};

fn necklace_shares(split: &necklace1d::NecklaceSplit, ms: &[BoxMeasure], k: usize) -> Vec<Vec<f64>> {
    let mut edges = vec![f64::NEG_INFINITY];
    edges.extend(split.cuts.iter().copied());
    edges.push(f64::INFINITY);
    let mut out = vec![vec![0.0; ms.len()]; k];
    for (i, w) in edges.windows(2).enumerate() {
        for (j, m) in ms.iter().enumerate() {
            out[split.labels[i]][j] += interval_mass(m, w[0], w[1]);
        }
    }
    out
}

#[test]
fn criterion_1_necklace_cut_bound() {
    let mut r = rng(1);
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut failures = Vec::new();
    for case in 0..50 {
        let t = [1, 2, 3][case % 3];
        let k = [2, 3, 4, 6][(case / 3) % 4];
        let ms: Vec<BoxMeasure> = (0..t).map(|_| random_measure(&mut r, 1)).collect();
        match necklace1d::split(&ms, k, &SolverOptions::with_tol(1e-9)) {
            Ok(s) => {
                let dev = deviation(&necklace_shares(&s, &ms, k), k);
                worst = worst.max(dev);
                if s.cuts.len() > t * (k - 1) || dev > 1e-6 {
                    failures.push(format!("case {case} t={t} k={k}: {} cuts, deviation {dev:.2e}", s.cuts.len()));
                }
            }
            Err(e) => failures.push(format!("case {case} t={t} k={k}: {e}")),
        }
    }
    let elapsed = start.elapsed();
    let ok = failures.is_empty() && elapsed <= Duration::from_secs(60);
    report(1, ok, &format!("50 instances, worst deviation {worst:.2e}, {elapsed:.2?}"));
    assert!(ok, "{failures:?} in {elapsed:?}");
}

#[test]
fn criterion_2_discrete_oracle_equivalence() {
    let mut checked = 0usize;
    let mut failures = Vec::new();
    for len in 0..=12u32 {
        for code in 0..3usize.pow(len) {
            let mut c = code;
            let s: String = (0..len)
                .map(|_| {
                    let ch = (b'a' + (c % 3) as u8) as char;
                    c /= 3;
                    ch
                })
                .collect();
            let beads = BeadString::parse(&s).unwrap();
            if beads.counts().iter().any(|n| n % 2 == 1) {
                if necklace1d::discrete_split(&beads, 2).is_ok() {
                    failures.push(format!("{s}: solver accepted odd counts"));
                }
                continue;
            }
            let bound = beads.types;
            let o = oracle::oracle_necklace(&beads, 2, bound).unwrap();
            let sol = necklace1d::discrete_split(&beads, 2).unwrap();
            if !(o.best <= bound as f64) || sol.cuts.len() as f64 != o.best {
                failures.push(format!("{s}: oracle {} solver {}", o.best, sol.cuts.len()));
            }
            checked += 1;
        }
    }
    let ok = failures.is_empty();
    report(2, ok, &format!("{checked} feasible bead strings, oracle and solver agree"));
    assert!(ok, "{:?}", &failures[..failures.len().min(10)]);
}

#[test]
fn criterion_3_stair_paths() {
    let mut r = rng(3);
    let mut failures = Vec::new();
    let mut worst = 0.0f64;
    for case in 0..25 {
        let t = 1 + case % 4;
        let ms: Vec<BoxMeasure> = (0..t).map(|_| random_measure(&mut r, 2)).collect();
        let (p, path) = match stairpath::halve_with_path(&ms, &SolverOptions::with_tol(1e-9)) {
            Ok(x) => x,
            Err(e) => {
                failures.push(format!("case {case} t={t}: {e}"));
                continue;
            }
        };
        for m in &ms {
            let a: f64 = p.regions(Side::A).iter().map(|reg| region_mass(m, reg)).sum();
            worst = worst.max((a - 0.5).abs());
        }
        let axis_parallel = path.segments.iter().all(|s| match *s {
            Segment::Vertical { y0, y1, .. } => y0 <= y1,
            Segment::Horizontal { y, .. } => y.is_finite(),
        });
        let mut agree = true;
        for _ in 0..200 {
            let q = [r.gen_range(-0.2..1.2), r.gen_range(-0.2..1.2)];
            if let Some(side) = path.side_by_crossings(&q) {
                agree &= side == p.side_of(&q);
            }
        }
        if !path.is_y_monotone() || !axis_parallel || path.turns + 1 > t || !agree {
            failures.push(format!("case {case} t={t}: path {path:?}"));
        }
    }
    let squares = [BoxMeasure::uniform(&[0.0, 0.0], &[1.0, 1.0]).unwrap(), BoxMeasure::uniform(&[2.0, 1.0], &[3.0, 2.0]).unwrap()];
    let (p, _) = stairpath::halve_with_path(&squares, &SolverOptions::with_tol(1e-12)).unwrap();
    let x_cut = match p.strips[0] {
        stairpath::Strip::Split { x, .. } => x,
        _ => f64::NAN,
    };
    let closed = (p.y_breaks[0] - 1.5).abs() <= 1e-9 && (x_cut - 0.5).abs() <= 1e-9;
    let ok = failures.is_empty() && worst <= 1e-6 && closed;
    report(3, ok, &format!("25 paths, worst residual {worst:.2e}, offset squares y={} x={x_cut}", p.y_breaks[0]));
    assert!(ok, "{failures:?} worst {worst:e} closed form {closed}");
}

fn random_scheme(r: &mut impl Rng, n: usize, dim: usize) -> SchemeTree {
    if n == 0 {
        return SchemeTree::Leaf;
    }
    let left = r.gen_range(0..n);
    let dir: Vec<f64> = if dim == 1 {
        vec![if r.gen_bool(0.5) { 1.0 } else { -1.0 }]
    } else {
        let a = r.gen_range(0.0..std::f64::consts::TAU);
        vec![a.cos(), a.sin()]
    };
    let l = random_scheme(r, left, dim);
    let rt = random_scheme(r, n - 1 - left, dim);
    SchemeTree::node(&dir, l, rt).unwrap()
}

#[test]
fn criterion_4_nested_partitions() {
    let mut r = rng(4);
    let mut failures = Vec::new();
    let mut worst = 0.0f64;
    let opts = SolverOptions::with_tol(1e-9);
    for t in 1..=2 {
        for k in [2, 3] {
            for d in 1..=2 {
                let ms: Vec<BoxMeasure> = (0..t).map(|_| random_measure(&mut r, d)).collect();
                let n = t * (k - 1);
                let scheme = random_scheme(&mut r, n, d);
                match nested::solve_nested(&ms, &scheme, k, &opts) {
                    Ok(p) => {
                        let parts = p.parts(d);
                        let mut shares = vec![vec![0.0; t]; k];
                        for (part, &l) in parts.iter().zip(&p.labels) {
                            for (j, m) in ms.iter().enumerate() {
                                shares[l][j] += region_mass(m, part);
                            }
                        }
                        let dev = deviation(&shares, k);
                        worst = worst.max(dev);
                        let mut tiles = true;
                        for _ in 0..200 {
                            let x: Vec<f64> = (0..d).map(|_| r.gen_range(-0.5..1.5)).collect();
                            let inside: Vec<usize> = (0..parts.len()).filter(|&i| parts[i].contains(&x)).collect();
                            tiles &= inside == vec![p.part_of(&x)];
                        }
                        if dev > 1e-6 || parts.len() != n + 1 || !tiles {
                            failures.push(format!("t={t} k={k} d={d}: deviation {dev:.2e}, {} parts, tiles {tiles}", parts.len()));
                        }
                    }
                    Err(e) => failures.push(format!("t={t} k={k} d={d}: {e}")),
                }
            }
        }
    }
    // chains on the line against the necklace solver
    let mut chain_gap = 0.0f64;
    for t in 1..=2 {
        for k in [2, 3] {
            let ms: Vec<BoxMeasure> = (0..t).map(|_| random_measure(&mut r, 1)).collect();
            let chain = SchemeTree::right_chain(&vec![vec![1.0]; t * (k - 1)]).unwrap();
            let p = nested::solve_nested(&ms, &chain, k, &opts);
            let s = necklace1d::split(&ms, k, &opts);
            match (p, s) {
                (Ok(p), Ok(s)) => {
                    let mut a = vec![vec![0.0; t]; k];
                    for (part, &l) in p.parts(1).iter().zip(&p.labels) {
                        for (j, m) in ms.iter().enumerate() {
                            a[l][j] += region_mass(m, part);
                        }
                    }
                    let b = necklace_shares(&s, &ms, k);
                    for j in 0..t {
                        let mut x: Vec<f64> = a.iter().map(|row| row[j]).collect();
                        let mut y: Vec<f64> = b.iter().map(|row| row[j]).collect();
                        x.sort_by(f64::total_cmp);
                        y.sort_by(f64::total_cmp);
                        for (u, v) in x.iter().zip(&y) {
                            chain_gap = chain_gap.max((u - v).abs());
                        }
                    }
                }
                (p, s) => failures.push(format!("chain t={t} k={k}: {:?} {:?}", p.err(), s.err())),
            }
        }
    }
    let one = [random_measure(&mut r, 2)];
    let dirs = vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![0.0, 1.0]];
    let composite = nested::solve_nested_composite(&one, &dirs, &[2, 2], &opts);
    let composite_ok = match &composite {
        Ok(c) => {
            let mut shares = vec![vec![0.0]; 4];
            for (reg, l) in c.labelled_regions(2) {
                shares[l][0] += region_mass(&one[0], &reg);
            }
            c.cuts() == 3 && deviation(&shares, 4) <= 1e-6
        }
        Err(_) => false,
    };
    let ok = failures.is_empty() && worst <= 1e-6 && chain_gap <= 2e-6 && composite_ok;
    report(4, ok, &format!("worst deviation {worst:.2e}, chain gap {chain_gap:.2e}, composite cuts {:?}", composite.as_ref().map(|c| c.cuts())));
    assert!(ok, "{failures:?} {composite:?}");
}

/// Parity of the multinomial coefficient, computed from the coefficient itself.
fn multinomial_is_odd(counts: &[u32]) -> bool {
    let mut value: u128 = 1;
    let mut total: u128 = 0;
    for &c in counts {
        for i in 1..=c as u128 {
            total += 1;
            value = value * total / i;
        }
    }
    value % 2 == 1
}

fn compositions(left: u32, prefix: &mut Vec<u32>, visit: &mut dyn FnMut(&[u32])) {
    if !prefix.is_empty() {
        visit(prefix);
    }
    for c in 1..=left {
        prefix.push(c);
        compositions(left - c, prefix, visit);
        prefix.pop();
    }
}

#[test]
fn criterion_5_chessboard() {
    let start = Instant::now();
    let mut tuples = 0usize;
    let mut mismatches = Vec::new();
    compositions(20, &mut Vec::new(), &mut |c| {
        tuples += 1;
        if chessboard::admissible(c) != multinomial_is_odd(c) {
            mismatches.push(c.to_vec());
        }
    });
    let elapsed = start.elapsed();
    let examples = !chessboard::admissible(&[1, 1]) && chessboard::admissible(&[1, 2]);
    let ms = [
        BoxMeasure::uniform(&[0.0, 0.0], &[1.0, 1.0]).unwrap(),
        BoxMeasure::uniform(&[2.0, 0.5], &[3.0, 1.5]).unwrap(),
        BoxMeasure::uniform(&[0.5, 2.0], &[1.5, 3.0]).unwrap(),
    ];
    let spec = ChessboardSpec { counts: vec![1, 2], directions: vec![vec![1.0, 0.0], vec![0.0, 1.0]] };
    let residual = match chessboard::solve_chessboard(&ms, &spec, &SolverOptions::with_tol(1e-9)) {
        Ok(c) => ms
            .iter()
            .map(|m| {
                let a: f64 = c.cells().iter().filter(|(_, s)| *s == Side::A).map(|(reg, _)| region_mass(m, reg)).sum();
                (a - 0.5).abs()
            })
            .fold(0.0, f64::max),
        Err(_) => f64::INFINITY,
    };
    let ok = mismatches.is_empty() && elapsed < Duration::from_secs(5) && examples && residual <= 1e-6;
    report(5, ok, &format!("{tuples} tuples in {elapsed:.2?}, three squares residual {residual:.2e}"));
    assert!(ok, "mismatches {:?}", &mismatches[..mismatches.len().min(10)]);
}

fn box_fraction_below(m: &BoxMeasure, i: usize, axis: usize, x: f64) -> f64 {
    ((x - m.atom_lo(i)[axis]) / (m.atom_hi(i)[axis] - m.atom_lo(i)[axis])).clamp(0.0, 1.0)
}

/// Mass of `{x >= a, y >= b} ∪ {x < a, y < b}`.
fn quadrant_oracle(m: &BoxMeasure, a: f64, b: f64) -> f64 {
    (0..m.len())
        .map(|i| {
            let (fx, fy) = (box_fraction_below(m, i, 0, a), box_fraction_below(m, i, 1, b));
            m.atom_weight(i) * ((1.0 - fx) * (1.0 - fy) + fx * fy)
        })
        .sum::<f64>()
        / m.total_mass()
}

fn orthant_oracle(m: &BoxMeasure, p: &[f64], signs: &[f64]) -> f64 {
    (0..m.len())
        .map(|i| {
            let mut f = m.atom_weight(i);
            for k in 0..p.len() {
                let below = box_fraction_below(m, i, k, p[k]);
                f *= if signs[k] > 0.0 { 1.0 - below } else { below };
            }
            f
        })
        .sum::<f64>()
        / m.total_mass()
}

#[test]
fn criterion_6_certificates() {
    let mut r = rng(6);
    let start = Instant::now();
    let one = counterexamples::refute_one_one(&OneOneParams::default());
    let one_time = start.elapsed();
    let one_ok = match &one {
        Ok(c) => {
            let ms = counterexamples::one_one_measures(&OneOneParams::default()).unwrap();
            let mut min = f64::INFINITY;
            for _ in 0..2000 {
                let (a, b) = (r.gen_range(-0.5..1.5), r.gen_range(-0.5..1.5));
                min = min.min(ms.iter().map(|m| (quadrant_oracle(m, a, b) - 0.5).abs()).fold(0.0, f64::max));
            }
            c.delta > 0.0 && c.step == 1e-3 && c.slack < c.delta && min >= c.delta - c.slack
        }
        Err(_) => false,
    };
    let start = Instant::now();
    let params = OrthantParams::new(2);
    let orth = counterexamples::refute_orthant(&params);
    let orth_time = start.elapsed();
    let orth_ok = match &orth {
        Ok(c) => {
            let ms = counterexamples::orthant_measures(&params).unwrap();
            let mut min = f64::INFINITY;
            for _ in 0..2000 {
                let p = [r.gen_range(-0.5..4.0), r.gen_range(-0.5..3.0)];
                for signs in [[1.0, 1.0], [1.0, -1.0], [-1.0, 1.0], [-1.0, -1.0]] {
                    min = min.min(ms.iter().map(|m| (orthant_oracle(m, &p, &signs) - 0.5).abs()).fold(0.0, f64::max));
                }
            }
            c.delta > 0.0 && c.step == 1e-3 && c.slack < c.delta && min >= c.delta - c.slack
        }
        Err(_) => false,
    };
    let two = counterexamples::orthant_measures(&OrthantParams { measures: 2, ..OrthantParams::new(2) }).unwrap();
    let sanity = match counterexamples::find_halving_orthant(&two, 1e-3) {
        Ok((x, s, _)) => two.iter().map(|m| (orthant_oracle(m, &x, &s) - 0.5).abs()).fold(0.0, f64::max),
        Err(_) => f64::INFINITY,
    };
    let limit = Duration::from_secs(120);
    let ok = one_ok && orth_ok && sanity <= 1e-6 && one_time <= limit && orth_time <= limit;
    report(
        6,
        ok,
        &format!(
            "one-one delta {:?} in {one_time:.2?}, orthant delta {:?} in {orth_time:.2?}, two-measure residual {sanity:.2e}",
            one.as_ref().map(|c| c.delta),
            orth.as_ref().map(|c| c.delta)
        ),
    );
    assert!(ok, "{one:?} {orth:?}");
}

#[test]
fn criterion_7_voronoi() {
    let mut r = rng(7);
    let opts = SolverOptions::with_tol(1e-9);
    // the line: three linear functions against the necklace solver
    let line = [BoxMeasure::interval(0.0, 1.0).unwrap(), BoxMeasure::interval(0.2, 0.7).unwrap()];
    let fns = CellFunctions::Linear { gradients: vec![vec![-1.0], vec![0.0], vec![1.0]] };
    let mut line_gap = f64::INFINITY;
    if let (Ok(p), Ok(s)) = (voronoifair::solve_fair(&fns, &line, 2, &opts), necklace1d::split(&line, 2, &opts)) {
        let cells = Cells::new(&fns).unwrap();
        let mut a = vec![vec![0.0; 2]; 2];
        for (i, reg) in cells.cells(&p.weights).iter().enumerate() {
            for (j, m) in line.iter().enumerate() {
                a[p.labels[i]][j] += region_mass(m, reg);
            }
        }
        let b = necklace_shares(&s, &line, 2);
        line_gap = 0.0;
        for j in 0..2 {
            let mut x: Vec<f64> = a.iter().map(|row| row[j]).collect();
            let mut y: Vec<f64> = b.iter().map(|row| row[j]).collect();
            x.sort_by(f64::total_cmp);
            y.sort_by(f64::total_cmp);
            for (u, v) in x.iter().zip(&y) {
                line_gap = line_gap.max((u - v).abs());
            }
        }
    }
    // the triangle with conical functions, checked by sampling
    let tri = CellFunctions::SimplexConical { vertices: vec![vec![0.0, 0.0], vec![4.0, 0.0], vec![1.0, 3.0]] };
    let ms = [BoxMeasure::uniform(&[1.0, 0.5], &[2.0, 1.5]).unwrap(), BoxMeasure::uniform(&[1.5, 0.2], &[2.5, 1.0]).unwrap()];
    let mut mc_dev = f64::INFINITY;
    let mut cover = false;
    if let Ok(p) = voronoifair::solve_fair(&tri, &ms, 2, &SolverOptions::with_tol(1e-6)) {
        let cells = Cells::new(&tri).unwrap();
        let regions = cells.cells(&p.weights);
        // one jittered sample per cell of a 1000 x 1000 grid on each box
        let side = 1000;
        mc_dev = 0.0;
        for m in &ms {
            let (lo, hi) = (m.atom_lo(0), m.atom_hi(0));
            let mut hits = [0usize; 2];
            for a in 0..side {
                for b in 0..side {
                    let u = (a as f64 + r.gen_range(0.0..1.0)) / side as f64;
                    let v = (b as f64 + r.gen_range(0.0..1.0)) / side as f64;
                    let x = [lo[0] + u * (hi[0] - lo[0]), lo[1] + v * (hi[1] - lo[1])];
                    if let Some(i) = cells.cell_of(&p.weights, &x) {
                        hits[p.labels[i]] += 1;
                    }
                }
            }
            for h in hits {
                mc_dev = mc_dev.max((h as f64 / (side * side) as f64 - 0.5).abs());
            }
        }
        // every sampled point of the triangle lies in exactly one closed cell,
        // away from the boundaries
        cover = true;
        for _ in 0..20_000 {
            let (mut a, mut b) = (r.gen_range(0.0..1.0), r.gen_range(0.0..1.0));
            if a + b > 1.0 {
                (a, b) = (1.0 - a, 1.0 - b);
            }
            let x = [4.0 * a + b, 3.0 * b];
            let inside = regions.iter().filter(|reg| reg.contains(&x)).count();
            let owner = cells.cell_of(&p.weights, &x);
            let near = regions.iter().any(|reg| reg.halfspaces.iter().any(|h| h.offset.is_finite() && (h.eval(&x) - h.offset).abs() < 1e-9));
            if !near {
                cover &= inside == 1 && owner.is_some_and(|i| regions[i].contains(&x));
            }
        }
    }
    // capacity round trip
    let mut trip = 0.0f64;
    for _ in 0..10 {
        let n = r.gen_range(2..=5);
        let gradients: Vec<Vec<f64>> = (0..n).map(|_| vec![r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)]).collect();
        let cells = Cells::new(&CellFunctions::Linear { gradients }).unwrap();
        let mu = cells.reference(Some((&[0.0, 0.0], &[1.0, 1.0]))).unwrap();
        let c: Vec<f64> = (0..n).map(|_| r.gen_range(-0.05..0.05)).collect();
        let w = voronoifair::capacities(&cells, &c, &mu).unwrap();
        match voronoifair::weights_from_capacities(&cells, &w, &mu, 1e-12) {
            Ok(back) => {
                let again = voronoifair::capacities(&cells, &back, &mu).unwrap();
                for (a, b) in w.iter().zip(&again) {
                    trip = trip.max((a - b).abs());
                }
            }
            Err(_) => trip = f64::INFINITY,
        }
    }
    let ok = line_gap <= 2e-6 && mc_dev <= 1e-3 && cover && trip <= 1e-6;
    report(7, ok, &format!("line gap {line_gap:.2e}, sampled deviation {mc_dev:.2e}, cover {cover}, round trip {trip:.2e}"));
    assert!(ok);
}

fn run_cli(args: &[&str]) -> (Vec<u8>, bool) {
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_faircut")).args(args).output().unwrap();
    (out.stdout, out.status.success())
}

#[test]
fn criterion_8_engine_contracts() {
    let mut r = rng(8);
    let mut failures = Vec::new();
    let tol = 1e-9;
    let line: Vec<BoxMeasure> = (0..2).map(|_| random_measure(&mut r, 1)).collect();
    let plane: Vec<BoxMeasure> = (0..2).map(|_| random_measure(&mut r, 2)).collect();
    for k in [2, 3] {
        let map = NecklaceMap::new(&line, k).unwrap();
        if let Err(e) = busolver::audit_cyclic(2 * (k - 1) + 1, k, |x: &JoinPoint| map.eval(x), 200, tol, 1) {
            failures.push(format!("necklace k={k}: {e}"));
        }
        let scheme = random_scheme(&mut r, 2 * (k - 1), 2);
        let map = NestedMap::new(&plane, scheme, k).unwrap();
        if let Err(e) = busolver::audit_cyclic(2 * (k - 1) + 1, k, |x: &JoinPoint| map.eval(x), 100, 1e-8, 2) {
            failures.push(format!("nested k={k}: {e}"));
        }
    }
    let three: Vec<BoxMeasure> = (0..3).map(|_| random_measure(&mut r, 2)).collect();
    for t in 1..=3 {
        let map = StairMap::new(&three[..t], CutVector::for_halving(t)).unwrap();
        if let Err(e) = busolver::audit_antipodal(map.dim(), |x| map.eval(x), 200, tol, 3) {
            failures.push(format!("stair t={t}: {e}"));
        }
    }
    let spec = ChessboardSpec { counts: vec![1, 2], directions: vec![vec![1.0, 0.0], vec![0.0, 1.0]] };
    let map = ChessboardMap::new(&three, &spec).unwrap();
    if let Err(e) = busolver::audit_product_antipodal(&map.dims(), |x| map.eval(x), 200, tol, 4) {
        failures.push(format!("chessboard: {e}"));
    }
    let fns = CellFunctions::Linear { gradients: vec![vec![-1.0, 0.2], vec![0.0, 1.0], vec![1.0, -0.3]] };
    let map = FairMap::new(&fns, &plane[..1], 3, 1e-9).unwrap();
    if let Err(e) = busolver::audit_cyclic(3, 3, |x: &JoinPoint| map.eval(x), 50, 1e-8, 5) {
        failures.push(format!("voronoi: {e}"));
    }
    // determinism through the binary
    let dir = tempfile::tempdir().unwrap();
    let measures = dir.path().join("m.json");
    std::fs::write(
        &measures,
        r#"[{"dim":2,"kind":"boxes","atoms":[{"box":[[0,1],[0,1]],"weight":1}]},
            {"dim":2,"kind":"boxes","atoms":[{"box":[[2,3],[1,2]],"weight":2}]}]"#,
    )
    .unwrap();
    let svg_a = dir.path().join("a.svg");
    let svg_b = dir.path().join("b.svg");
    let m = measures.to_str().unwrap();
    let (json_a, ok_a) = run_cli(&["stairpath", "--measures", m, "--seed", "42", "--svg", svg_a.to_str().unwrap()]);
    let (json_b, ok_b) = run_cli(&["stairpath", "--measures", m, "--seed", "42", "--svg", svg_b.to_str().unwrap()]);
    let same_svg = std::fs::read(&svg_a).ok() == std::fs::read(&svg_b).ok();
    if !(ok_a && ok_b && json_a == json_b && same_svg && !json_a.is_empty()) {
        failures.push("stairpath output differs between runs".into());
    }
    let ok = failures.is_empty();
    report(8, ok, "antipodality audits on necklace, nested, stair, chessboard and voronoi maps; repeated runs byte-identical");
    assert!(ok, "{failures:?}");
}
