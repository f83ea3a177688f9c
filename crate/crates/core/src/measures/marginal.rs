use super::BoxMeasure;

/// Piecewise-linear CDF of one coordinate of a [`BoxMeasure`], with exact
/// inversion.
#[derive(Debug, Clone)]
pub struct Marginal1d {
    xs: Vec<f64>,
    cdf: Vec<f64>,
}

impl Marginal1d {
    pub fn new(m: &BoxMeasure, axis: usize) -> Self {
        let mut events: Vec<(f64, f64)> = Vec::with_capacity(2 * m.len());
        for i in 0..m.len() {
            let (a, b) = (m.atom_lo(i)[axis], m.atom_hi(i)[axis]);
            let d = m.atom_weight(i) / (b - a);
            events.push((a, d));
            events.push((b, -d));
        }
        events.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut xs: Vec<f64> = Vec::new();
        let mut dens_after: Vec<f64> = Vec::new();
        let mut cur = 0.0;
        for (x, d) in events {
            cur += d;
            if xs.last() == Some(&x) {
                *dens_after.last_mut().unwrap() = cur;
            } else {
                xs.push(x);
                dens_after.push(cur);
            }
        }
        let mut cdf = Vec::with_capacity(xs.len());
        cdf.push(0.0);
        for j in 1..xs.len() {
            let c = cdf[j - 1] + dens_after[j - 1].max(0.0) * (xs[j] - xs[j - 1]);
            cdf.push(c);
        }
        let total = *cdf.last().unwrap();
        for c in &mut cdf {
            *c /= total;
        }
        Marginal1d { xs, cdf }
    }

    pub fn support(&self) -> (f64, f64) {
        (self.xs[0], *self.xs.last().unwrap())
    }

    pub fn cdf(&self, x: f64) -> f64 {
        if x <= self.xs[0] {
            return 0.0;
        }
        let n = self.xs.len();
        if x >= self.xs[n - 1] {
            return 1.0;
        }
        let j = self.xs.partition_point(|v| *v <= x) - 1;
        let t = (x - self.xs[j]) / (self.xs[j + 1] - self.xs[j]);
        self.cdf[j] + t * (self.cdf[j + 1] - self.cdf[j])
    }

    /// Smallest `x` with `cdf(x) >= u`; `u <= 0` maps to `-inf` and `u >= 1`
    /// to `+inf`, the compactified ends of the line.
    pub fn quantile(&self, u: f64) -> f64 {
        if u <= 0.0 {
            return f64::NEG_INFINITY;
        }
        if u >= 1.0 {
            return f64::INFINITY;
        }
        let j = self.cdf.partition_point(|c| *c < u);
        // cdf[j-1] < u <= cdf[j]
        let (c0, c1) = (self.cdf[j - 1], self.cdf[j]);
        let (x0, x1) = (self.xs[j - 1], self.xs[j]);
        if c1 <= c0 {
            return x1;
        }
        x0 + (u - c0) / (c1 - c0) * (x1 - x0)
    }
}
