use nalgebra::{DMatrix, DVector};

/// Max-norm; any NaN entry gives `+inf`.
pub(crate) fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| if x.is_nan() { f64::INFINITY } else { m.max(x.abs()) })
}

fn two_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Outcome of a local solve.
#[derive(Debug, Clone)]
pub struct LocalResult {
    pub x: Vec<f64>,
    pub residual: f64,
    pub iterations: usize,
}

/// Damped Gauss-Newton with a Levenberg-Marquardt fallback.
///
/// `fun` maps the variables to a residual vector of any length; the step is
/// the minimum-norm least-squares step, so underdetermined charts (sphere
/// coordinates before normalization) and consistent overdetermined systems
/// both work. `project` pulls an iterate back onto the chart after every step.
pub fn local_newton<F, P>(fun: F, project: P, x0: &[f64], target: f64, max_iter: usize, fd_step: f64) -> LocalResult
where
    F: Fn(&[f64]) -> Vec<f64>,
    P: Fn(&mut [f64]),
{
    let mut x = x0.to_vec();
    project(&mut x);
    let mut fx = fun(&x);
    let mut res = inf_norm(&fx);
    let mut it = 0;
    if !res.is_finite() {
        return LocalResult { x, residual: res, iterations: 0 };
    }
    let n = x.len();
    while it < max_iter && res > target {
        it += 1;
        let m = fx.len();
        let mut jac = DMatrix::<f64>::zeros(m, n);
        let mut xp = x.clone();
        for j in 0..n {
            let h = fd_step * (1.0 + x[j].abs());
            xp[j] = x[j] + h;
            let fp = fun(&xp);
            xp[j] = x[j] - h;
            let fm = fun(&xp);
            xp[j] = x[j];
            for i in 0..m {
                jac[(i, j)] = (fp[i] - fm[i]) / (2.0 * h);
            }
        }
        if jac.iter().any(|v| !v.is_finite()) {
            break;
        }
        let fv = DVector::from_column_slice(&fx);
        let norm0 = two_norm(&fx);
        let mut accepted = false;

        if let Ok(pinv) = jac.clone().pseudo_inverse(1e-12) {
            let step = -(pinv * &fv);
            let mut alpha = 1.0;
            for _ in 0..30 {
                let mut cand: Vec<f64> = (0..n).map(|j| x[j] + alpha * step[j]).collect();
                project(&mut cand);
                let fc = fun(&cand);
                if two_norm(&fc) < (1.0 - 1e-4 * alpha) * norm0 {
                    x = cand;
                    fx = fc;
                    accepted = true;
                    break;
                }
                alpha *= 0.5;
            }
        }
        if !accepted {
            let jt = jac.transpose();
            let jtj = &jt * &jac;
            let g = &jt * &fv;
            let scale = jtj.diagonal().max().max(1e-300);
            let mut mu = 1e-8 * scale;
            while mu < 1e4 * scale {
                let a = &jtj + DMatrix::<f64>::identity(n, n) * mu;
                if let Some(chol) = a.cholesky() {
                    let step = -chol.solve(&g);
                    let mut cand: Vec<f64> = (0..n).map(|j| x[j] + step[j]).collect();
                    project(&mut cand);
                    let fc = fun(&cand);
                    if two_norm(&fc) < norm0 {
                        x = cand;
                        fx = fc;
                        accepted = true;
                        break;
                    }
                }
                mu *= 10.0;
            }
        }
        if !accepted {
            break;
        }
        res = inf_norm(&fx);
    }
    LocalResult { x, residual: res, iterations: it }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_a_linear_system() {
        let f = |x: &[f64]| vec![x[0] + 2.0 * x[1] - 3.0, x[0] - x[1]];
        let r = local_newton(f, |_: &mut [f64]| {}, &[0.0, 0.0], 1e-13, 20, 1e-7);
        assert!(r.residual <= 1e-13);
        assert!((r.x[0] - 1.0).abs() < 1e-12 && (r.x[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn handles_underdetermined_systems() {
        let f = |x: &[f64]| vec![x[0] * x[0] + x[1] * x[1] - 1.0];
        let r = local_newton(f, |_: &mut [f64]| {}, &[2.0, 0.5], 1e-12, 50, 1e-7);
        assert!(r.residual <= 1e-12);
    }
}
