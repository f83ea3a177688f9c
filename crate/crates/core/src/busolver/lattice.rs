//! Deterministic lattice grids on the octahedral sphere and the simplex.

/// Points `z / r` with `z` integral and `Σ|z_i| = r`, in a fixed order.
///
/// With `half`, only one point of each antipodal pair is kept (first nonzero
/// coordinate positive).
pub fn octahedral(n: usize, r: usize, half: bool) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    let mut z = vec![0i64; n];
    octa_rec(&mut z, 0, r as i64, half, false, &mut out, r as f64);
    out
}

fn octa_rec(z: &mut [i64], i: usize, left: i64, half: bool, seen_nonzero: bool, out: &mut Vec<Vec<f64>>, r: f64) {
    let n = z.len();
    if i == n - 1 {
        for s in signs(left, half && !seen_nonzero) {
            z[i] = s;
            out.push(z.iter().map(|v| *v as f64 / r).collect());
        }
        return;
    }
    for a in 0..=left {
        for s in signs(a, half && !seen_nonzero) {
            z[i] = s;
            octa_rec(z, i + 1, left - a, half, seen_nonzero || a != 0, out, r);
        }
    }
}

fn signs(a: i64, positive_only: bool) -> Vec<i64> {
    if a == 0 || positive_only {
        vec![a]
    } else {
        vec![a, -a]
    }
}

/// Barycentric points `z / r` with `z >= 0` integral and `Σ z_i = r`.
pub fn simplex(n: usize, r: usize) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    let mut z = vec![0usize; n];
    simplex_rec(&mut z, 0, r, &mut out, r as f64);
    out
}

fn simplex_rec(z: &mut [usize], i: usize, left: usize, out: &mut Vec<Vec<f64>>, r: f64) {
    if i == z.len() - 1 {
        z[i] = left;
        out.push(z.iter().map(|v| *v as f64 / r).collect());
        return;
    }
    for a in 0..=left {
        z[i] = a;
        simplex_rec(z, i + 1, left - a, out, r);
    }
}

/// Number of points [`simplex`] would produce.
pub fn simplex_count(n: usize, r: usize) -> usize {
    binomial(r + n - 1, n - 1)
}

/// Number of points [`octahedral`] would produce (without halving).
pub fn octahedral_count(n: usize, r: usize) -> usize {
    if r == 0 {
        return 1;
    }
    // choose the support size j, its signs, and a composition of r into j positive parts
    (1..=n.min(r)).map(|j| binomial(n, j) * (1usize << j) * binomial(r - 1, j - 1)).sum()
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc.min(usize::MAX as u128) as usize
}
