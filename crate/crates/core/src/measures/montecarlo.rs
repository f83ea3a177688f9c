use super::clip::Plane;
use super::{dot, BoxMeasure, ConvexRegion, Measure};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A Monte Carlo mass with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MassEstimate {
    pub value: f64,
    pub std_error: f64,
}

/// Jittered-stratified estimate of the unit-cube fraction inside `planes`.
pub(crate) fn unit_cube_fraction_mc(planes: &[Plane], dim: usize, samples: usize, seed: u64) -> MassEstimate {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    // strata along the first axis only; enough to tame variance at fixed budget
    let strata = samples.max(1);
    let mut hits = 0usize;
    let mut u = vec![0.0; dim];
    for s in 0..strata {
        u[0] = (s as f64 + rng.gen::<f64>()) / strata as f64;
        for c in u.iter_mut().skip(1) {
            *c = rng.gen::<f64>();
        }
        if planes.iter().all(|(a, b)| dot(a, &u) <= *b) {
            hits += 1;
        }
    }
    let p = hits as f64 / strata as f64;
    MassEstimate { value: p, std_error: (p * (1.0 - p) / strata as f64).sqrt() }
}

/// Estimate of `m(r)` by sampling every atom. Used for d > 3 and as an
/// independent check of the exact path.
pub fn mass_estimate(m: &BoxMeasure, r: &ConvexRegion, samples_per_atom: usize, seed: u64) -> MassEstimate {
    monte_carlo_mass(m, |x| r.contains(x), samples_per_atom, seed)
}

/// Mass of the set `{x : inside(x)}` estimated by stratified sampling of each
/// atom of `m` (strata on a regular grid, one jittered point per stratum).
pub fn monte_carlo_mass<F: Fn(&[f64]) -> bool>(m: &BoxMeasure, inside: F, samples_per_atom: usize, seed: u64) -> MassEstimate {
    let dim = m.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let per_axis = ((samples_per_atom as f64).powf(1.0 / dim as f64).floor() as usize).max(1);
    let strata = per_axis.pow(dim as u32);
    let mut value = 0.0;
    let mut var = 0.0;
    let mut x = vec![0.0; dim];
    let mut idx = vec![0usize; dim];
    for i in 0..m.len() {
        let lo = m.atom_lo(i);
        let hi = m.atom_hi(i);
        let mut hits = 0usize;
        idx.iter_mut().for_each(|v| *v = 0);
        for _ in 0..strata {
            for k in 0..dim {
                let t = (idx[k] as f64 + rng.gen::<f64>()) / per_axis as f64;
                x[k] = lo[k] + t * (hi[k] - lo[k]);
            }
            if inside(&x) {
                hits += 1;
            }
            for k in 0..dim {
                idx[k] += 1;
                if idx[k] < per_axis {
                    break;
                }
                idx[k] = 0;
            }
        }
        let p = hits as f64 / strata as f64;
        let w = m.atom_weight(i);
        value += w * p;
        var += w * w * p * (1.0 - p) / strata as f64;
    }
    MassEstimate { value, std_error: var.sqrt() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::Halfspace;

    #[test]
    fn four_dimensional_halfspace_uses_monte_carlo() {
        let m = BoxMeasure::uniform(&[0.0; 4], &[1.0; 4]).unwrap();
        let r = ConvexRegion::full(4).with(Halfspace::new(vec![1.0, 1.0, 1.0, 1.0], 2.0));
        let v = m.mass(&r);
        assert!((v - 0.5).abs() < 0.01, "{v}");
        let e = mass_estimate(&m, &r, 20_000, 3);
        assert!((e.value - 0.5).abs() <= 4.0 * e.std_error + 1e-3);
    }
}
