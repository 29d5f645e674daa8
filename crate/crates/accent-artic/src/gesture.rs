//! Critically damped gesture model: forward simulation and inverse fitting.
//!
//! A gesture drives a feature channel from its initial value toward an
//! equilibrium target with stiffness k and onset t_s:
//!
//! ```text
//! r(t) = max(t - t_s, 0)
//! x(t) = x0 + (T - x0) * (1 - (1 + sqrt(k) r(t)) * exp(-sqrt(k) r(t)))
//! ```
//!
//! Fitting minimizes a Gaussian-weighted MSE over a window centered on the
//! phoneme. T and x0 enter the model linearly, so each evaluation of the
//! nonlinear (sqrt(k), t_s) search solves a weighted 2x2 least-squares problem
//! for them in closed form; the outer search is a deterministic multi-start
//! bounded simplex.

use crate::error::GestureError;
use crate::optim::NelderMead;

/// Oscillator parameters for one phoneme segment x channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GestureParams {
    /// Equilibrium target (feature units).
    pub target: f64,
    /// Stiffness in 1/s^2, strictly positive.
    pub stiffness: f64,
    /// Initial value, assuming zero initial derivative.
    pub initial: f64,
    /// Gesture onset in seconds.
    pub onset: f64,
}

/// Gaussian-weighted rectangular fit window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitWindow {
    pub center: f64,
    pub half_width: f64,
    pub sigma: f64,
}

impl FitWindow {
    /// Weight of a sample, or None when outside the rectangular support.
    pub fn weight(&self, t: f64) -> Option<f64> {
        let d = t - self.center;
        if d.abs() > self.half_width {
            return None;
        }
        Some((-d * d / (2.0 * self.sigma * self.sigma)).exp())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GestureFit {
    pub params: GestureParams,
    pub weighted_mse: f64,
    pub converged: bool,
    pub n_frames: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct FitConfig {
    pub k_min: f64,
    pub k_max: f64,
    /// Window half-width as a multiple of segment duration.
    pub half_width_scale: f64,
    /// Gaussian sigma as a multiple of segment duration.
    pub sigma_scale: f64,
    /// T and x0 bounds extend this many data-range widths past the data.
    pub range_pad: f64,
}

impl Default for FitConfig {
    fn default() -> Self {
        FitConfig {
            k_min: 1.0,
            k_max: 1e6,
            half_width_scale: 1.0,
            sigma_scale: 0.5,
            range_pad: 1.0,
        }
    }
}

/// Unit step response of the critically damped oscillator, in [0, 1).
#[inline]
fn step_response(sqrt_k: f64, r: f64) -> f64 {
    let q = sqrt_k * r;
    1.0 - (1.0 + q) * (-q).exp()
}

/// Evaluate the gesture trajectory at the given times.
pub fn simulate(p: &GestureParams, times: &[f64]) -> Vec<f64> {
    let q = p.stiffness.sqrt();
    times
        .iter()
        .map(|&t| {
            let r = (t - p.onset).max(0.0);
            p.initial + (p.target - p.initial) * step_response(q, r)
        })
        .collect()
}

/// Gaussian-weighted mean squared error of the model against a trajectory.
pub fn objective(
    p: &GestureParams,
    times: &[f64],
    values: &[f64],
    w: &FitWindow,
) -> Result<f64, GestureError> {
    let model = simulate(p, times);
    let mut num = 0.0;
    let mut den = 0.0;
    for ((&t, &v), &m) in times.iter().zip(values).zip(&model) {
        if let Some(g) = w.weight(t) {
            num += g * (m - v) * (m - v);
            den += g;
        }
    }
    if den == 0.0 {
        return Err(GestureError::EmptyWindow);
    }
    Ok(num / den)
}

/// Analytic gradient of [`objective`] with respect to (target, initial).
/// Both enter the model linearly: x = x0 (1 - s) + T s.
pub fn objective_grad_linear(
    p: &GestureParams,
    times: &[f64],
    values: &[f64],
    w: &FitWindow,
) -> Result<(f64, f64), GestureError> {
    let q = p.stiffness.sqrt();
    let mut dt = 0.0;
    let mut dx0 = 0.0;
    let mut den = 0.0;
    for (&t, &v) in times.iter().zip(values) {
        if let Some(g) = w.weight(t) {
            let s = step_response(q, (t - p.onset).max(0.0));
            let m = p.initial * (1.0 - s) + p.target * s;
            dt += g * 2.0 * (m - v) * s;
            dx0 += g * 2.0 * (m - v) * (1.0 - s);
            den += g;
        }
    }
    if den == 0.0 {
        return Err(GestureError::EmptyWindow);
    }
    Ok((dt / den, dx0 / den))
}

struct WindowedSamples {
    times: Vec<f64>,
    values: Vec<f64>,
    weights: Vec<f64>,
}

/// Closed-form weighted least squares for (x0, T) at fixed (sqrt_k, t_s),
/// clamped to `[lo, hi]`. Returns ((x0, T), weighted mse).
fn solve_linear(
    samples: &WindowedSamples,
    sqrt_k: f64,
    t_s: f64,
    lo: f64,
    hi: f64,
) -> ((f64, f64), f64) {
    let n = samples.times.len();
    let mut a00 = 0.0; // sum g (1-s)^2
    let mut a01 = 0.0; // sum g (1-s) s
    let mut a11 = 0.0; // sum g s^2
    let mut b0 = 0.0;
    let mut b1 = 0.0;
    let mut gsum = 0.0;
    let mut s_all = Vec::with_capacity(n);
    for i in 0..n {
        let s = step_response(sqrt_k, (samples.times[i] - t_s).max(0.0));
        let g = samples.weights[i];
        let c = 1.0 - s;
        a00 += g * c * c;
        a01 += g * c * s;
        a11 += g * s * s;
        b0 += g * c * samples.values[i];
        b1 += g * s * samples.values[i];
        gsum += g;
        s_all.push(s);
    }

    let det = a00 * a11 - a01 * a01;
    let scale = a00.max(a11).max(1e-300);
    let (mut x0, mut target) = if det > 1e-12 * scale * scale {
        ((a11 * b0 - a01 * b1) / det, (a00 * b1 - a01 * b0) / det)
    } else if a11 <= a00 {
        // gesture barely activates inside the window; only x0 identifiable
        let m = b0 / a00.max(1e-300);
        (m, m)
    } else {
        let m = b1 / a11.max(1e-300);
        (m, m)
    };

    // clamp to bounds, re-solving the free coordinate if one side saturates
    if x0 < lo || x0 > hi {
        x0 = x0.clamp(lo, hi);
        if a11 > 1e-300 {
            target = ((b1 - x0 * a01) / a11).clamp(lo, hi);
        }
    }
    if target < lo || target > hi {
        target = target.clamp(lo, hi);
        if a00 > 1e-300 {
            x0 = ((b0 - target * a01) / a00).clamp(lo, hi);
        }
    }

    let mut mse = 0.0;
    for i in 0..n {
        let m = x0 * (1.0 - s_all[i]) + target * s_all[i];
        mse += samples.weights[i] * (m - samples.values[i]).powi(2);
    }
    ((x0, target), mse / gsum)
}

/// Fit one gesture to a trajectory over a phoneme segment.
///
/// The window follows the segment: centered on the midpoint, half-width and
/// sigma scaled from the segment duration per `cfg`.
pub fn fit_gesture(
    times: &[f64],
    values: &[f64],
    t_start: f64,
    t_end: f64,
    cfg: &FitConfig,
) -> Result<GestureFit, GestureError> {
    let duration = t_end - t_start;
    let window = FitWindow {
        center: 0.5 * (t_start + t_end),
        half_width: cfg.half_width_scale * duration,
        sigma: cfg.sigma_scale * duration,
    };

    let mut samples = WindowedSamples {
        times: Vec::new(),
        values: Vec::new(),
        weights: Vec::new(),
    };
    for (&t, &v) in times.iter().zip(values) {
        if let Some(g) = window.weight(t) {
            if !t.is_finite() || !v.is_finite() {
                return Err(GestureError::NonFinite);
            }
            samples.times.push(t);
            samples.values.push(v);
            samples.weights.push(g);
        }
    }
    let n_frames = samples.times.len();
    if n_frames < 4 {
        return Err(GestureError::TooFewSamples {
            got: n_frames,
            need: 4,
        });
    }

    let vmin = samples.values.iter().cloned().fold(f64::INFINITY, f64::min);
    let vmax = samples
        .values
        .iter()
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max);
    let range = (vmax - vmin).max(1e-12);
    let lo_v = vmin - cfg.range_pad * range;
    let hi_v = vmax + cfg.range_pad * range;

    let q_lo = cfg.k_min.sqrt();
    let q_hi = cfg.k_max.sqrt();
    let ts_lo = t_start - window.half_width;
    let ts_hi = t_end;

    let starts = [
        (4.0 / duration, t_start),
        (4.0 / duration, window.center),
        (8.0 / duration, t_start),
        (8.0 / duration, window.center),
    ];

    let nm = NelderMead {
        max_iters: 300,
        f_tol: 1e-15,
        x_tol: 1e-10,
    };
    let mut best: Option<(f64, f64, f64, bool)> = None; // (mse, q, ts, converged)
    for &(q0, ts0) in &starts {
        let q0 = q0.clamp(q_lo, q_hi);
        let mut eval = |x: &[f64]| solve_linear(&samples, x[0], x[1], lo_v, hi_v).1;
        let r = nm.minimize(
            &mut eval,
            &[q0, ts0],
            &[q0 * 0.5, 0.25 * duration],
            &[q_lo, ts_lo],
            &[q_hi, ts_hi],
        );
        if best.as_ref().map_or(true, |b| r.f < b.0) {
            best = Some((r.f, r.x[0], r.x[1], r.converged));
        }
    }
    let (mse, q, t_s, converged) = best.expect("at least one start");
    let ((x0, target), mse) = {
        let ((x0, target), _) = solve_linear(&samples, q, t_s, lo_v, hi_v);
        ((x0, target), mse)
    };

    Ok(GestureFit {
        params: GestureParams {
            target,
            stiffness: q * q,
            initial: x0,
            onset: t_s,
        },
        weighted_mse: mse,
        converged,
        n_frames,
    })
}
