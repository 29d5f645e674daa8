//! Bounded Nelder-Mead simplex minimization.
//!
//! Small deterministic local optimizer for low-dimensional smooth objectives.
//! Trial points are clamped to the box constraints, which is adequate for the
//! well-conditioned 2-D problems this crate solves.

#[derive(Debug, Clone)]
pub struct NelderMeadResult {
    pub x: Vec<f64>,
    pub f: f64,
    pub converged: bool,
}

pub struct NelderMead {
    pub max_iters: usize,
    pub f_tol: f64,
    pub x_tol: f64,
}

impl Default for NelderMead {
    fn default() -> Self {
        NelderMead {
            max_iters: 500,
            f_tol: 1e-14,
            x_tol: 1e-12,
        }
    }
}

fn clamp(x: &mut [f64], lo: &[f64], hi: &[f64]) {
    for i in 0..x.len() {
        x[i] = x[i].clamp(lo[i], hi[i]);
    }
}

impl NelderMead {
    pub fn minimize<F>(
        &self,
        f: &mut F,
        x0: &[f64],
        step: &[f64],
        lo: &[f64],
        hi: &[f64],
    ) -> NelderMeadResult
    where
        F: FnMut(&[f64]) -> f64,
    {
        let n = x0.len();
        let (alpha, gamma, rho, sigma) = (1.0, 2.0, 0.5, 0.5);

        let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
        let mut start = x0.to_vec();
        clamp(&mut start, lo, hi);
        simplex.push(start.clone());
        for i in 0..n {
            let mut p = start.clone();
            p[i] += step[i];
            if p[i] > hi[i] {
                p[i] = start[i] - step[i];
            }
            clamp(&mut p, lo, hi);
            if (p[i] - start[i]).abs() < 1e-300 {
                p[i] = 0.5 * (lo[i] + hi[i]);
            }
            simplex.push(p);
        }
        let mut fv: Vec<f64> = simplex.iter().map(|p| f(p)).collect();

        let mut iterations = 0;
        let mut converged = false;
        while iterations < self.max_iters {
            iterations += 1;
            let mut order: Vec<usize> = (0..=n).collect();
            order.sort_by(|&a, &b| fv[a].partial_cmp(&fv[b]).unwrap_or(std::cmp::Ordering::Equal));
            let best = order[0];
            let worst = order[n];
            let second_worst = order[n - 1];

            let f_spread = (fv[worst] - fv[best]).abs();
            let x_spread: f64 = (0..n)
                .map(|i| (simplex[worst][i] - simplex[best][i]).abs())
                .fold(0.0, f64::max);
            if f_spread <= self.f_tol * (1.0 + fv[best].abs()) && x_spread <= self.x_tol {
                converged = true;
                break;
            }

            // centroid of all but the worst
            let mut centroid = vec![0.0; n];
            for &idx in order.iter().take(n) {
                for i in 0..n {
                    centroid[i] += simplex[idx][i] / n as f64;
                }
            }

            let mut reflected: Vec<f64> = (0..n)
                .map(|i| centroid[i] + alpha * (centroid[i] - simplex[worst][i]))
                .collect();
            clamp(&mut reflected, lo, hi);
            let fr = f(&reflected);

            if fr < fv[best] {
                let mut expanded: Vec<f64> = (0..n)
                    .map(|i| centroid[i] + gamma * (reflected[i] - centroid[i]))
                    .collect();
                clamp(&mut expanded, lo, hi);
                let fe = f(&expanded);
                if fe < fr {
                    simplex[worst] = expanded;
                    fv[worst] = fe;
                } else {
                    simplex[worst] = reflected;
                    fv[worst] = fr;
                }
            } else if fr < fv[second_worst] {
                simplex[worst] = reflected;
                fv[worst] = fr;
            } else {
                let mut contracted: Vec<f64> = (0..n)
                    .map(|i| centroid[i] + rho * (simplex[worst][i] - centroid[i]))
                    .collect();
                clamp(&mut contracted, lo, hi);
                let fc = f(&contracted);
                if fc < fv[worst] {
                    simplex[worst] = contracted;
                    fv[worst] = fc;
                } else {
                    // shrink toward the best vertex
                    let best_point = simplex[best].clone();
                    for idx in 0..=n {
                        if idx == best {
                            continue;
                        }
                        for i in 0..n {
                            simplex[idx][i] =
                                best_point[i] + sigma * (simplex[idx][i] - best_point[i]);
                        }
                        clamp(&mut simplex[idx], lo, hi);
                        fv[idx] = f(&simplex[idx]);
                    }
                }
            }
        }

        let mut best = 0;
        for i in 1..=n {
            if fv[i] < fv[best] {
                best = i;
            }
        }
        NelderMeadResult {
            x: simplex[best].clone(),
            f: fv[best],
            converged,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimizes_quadratic() {
        let nm = NelderMead::default();
        let mut f = |x: &[f64]| (x[0] - 1.5).powi(2) + 2.0 * (x[1] + 0.5).powi(2);
        let r = nm.minimize(&mut f, &[0.0, 0.0], &[0.5, 0.5], &[-10.0, -10.0], &[10.0, 10.0]);
        assert!(r.converged);
        assert!((r.x[0] - 1.5).abs() < 1e-6);
        assert!((r.x[1] + 0.5).abs() < 1e-6);
    }

    #[test]
    fn respects_bounds() {
        let nm = NelderMead::default();
        let mut f = |x: &[f64]| (x[0] - 5.0).powi(2);
        let r = nm.minimize(&mut f, &[0.0], &[0.5], &[-1.0], &[2.0]);
        assert!((r.x[0] - 2.0).abs() < 1e-6);
    }
}
