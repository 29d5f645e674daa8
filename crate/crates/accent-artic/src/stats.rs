//! Simple linear regression with significance testing and summary gating.

use crate::error::StatsError;

#[derive(Debug, Clone, PartialEq)]
pub struct RegressionResult {
    pub slope: f64,
    pub intercept: f64,
    pub r: f64,
    pub r2: f64,
    pub p: f64,
    pub n: usize,
}

/// Ordinary least squares of y on x with a Pearson-correlation significance
/// test: t = R sqrt((n-2)/(1-R^2)) against Student-t with n-2 df, two-sided.
pub fn linreg(x: &[f64], y: &[f64]) -> Result<RegressionResult, StatsError> {
    if x.len() != y.len() {
        return Err(StatsError::LengthMismatch(x.len(), y.len()));
    }
    let n = x.len();
    if n < 3 {
        return Err(StatsError::DegenerateN(n));
    }
    let nf = n as f64;
    let mx = x.iter().sum::<f64>() / nf;
    let my = y.iter().sum::<f64>() / nf;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    let mut sxy = 0.0;
    for (&xi, &yi) in x.iter().zip(y) {
        let dx = xi - mx;
        let dy = yi - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if sxx == 0.0 {
        return Err(StatsError::ConstantPredictor);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r = if syy == 0.0 {
        0.0
    } else {
        (sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0)
    };
    let r2 = r * r;
    let p = if syy == 0.0 {
        1.0 // constant response carries no evidence
    } else if r2 >= 1.0 {
        0.0
    } else {
        let t = r * ((nf - 2.0) / (1.0 - r2)).sqrt();
        t_sf(t, n - 2)
    };
    Ok(RegressionResult {
        slope,
        intercept,
        r,
        r2,
        p,
        n,
    })
}

/// Two-sided survival probability of Student's t: P(|T| >= |t|) with `df`
/// degrees of freedom, via the regularized incomplete beta function.
pub fn t_sf(t: f64, df: usize) -> f64 {
    assert!(df >= 1, "need at least one degree of freedom");
    let dff = df as f64;
    let x = dff / (dff + t * t);
    betai(0.5 * dff, 0.5, x)
}

// Lanczos approximation of ln Gamma.
fn ln_gamma(x: f64) -> f64 {
    const COEFFS: [f64; 6] = [
        76.18009172947146,
        -86.50532032941677,
        24.01409824083091,
        -1.231739572450155,
        0.1208650973866179e-2,
        -0.5395239384953e-5,
    ];
    let mut y = x;
    let tmp = x + 5.5;
    let tmp = tmp - (x + 0.5) * tmp.ln();
    let mut ser = 1.000000000190015;
    for c in COEFFS {
        y += 1.0;
        ser += c / y;
    }
    -tmp + (2.5066282746310005 * ser / x).ln()
}

// Continued fraction for the incomplete beta function (Lentz's method).
fn betacf(a: f64, b: f64, x: f64) -> f64 {
    const MAX_ITER: usize = 200;
    const EPS: f64 = 3e-16;
    const FPMIN: f64 = 1e-300;
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < FPMIN {
        d = FPMIN;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=MAX_ITER {
        let mf = m as f64;
        let m2 = 2.0 * mf;
        let aa = mf * (b - mf) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = 1.0 + aa / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + mf) * (qab + mf) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = 1.0 + aa / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    h
}

/// Regularized incomplete beta function I_x(a, b).
pub fn betai(a: f64, b: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let bt = (ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b) + a * x.ln() + b * (1.0 - x).ln()).exp();
    if x < (a + 1.0) / (a + b + 2.0) {
        bt * betacf(a, b, x) / a
    } else {
        1.0 - bt * betacf(b, a, 1.0 - x) / b
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Statistic {
    Mean,
    /// Equilibrium target of the fitted gesture.
    T,
}

impl Statistic {
    pub fn as_str(&self) -> &'static str {
        match self {
            Statistic::Mean => "mean",
            Statistic::T => "T",
        }
    }
}

/// Correlation sign for significant cells: up leans British, down American.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Up,
    Down,
    None,
}

impl Direction {
    pub fn as_str(&self) -> &'static str {
        match self {
            Direction::Up => "up",
            Direction::Down => "down",
            Direction::None => "none",
        }
    }
}

#[derive(Debug, Clone)]
pub struct SummaryCell {
    pub vowel: String,
    pub feature: String,
    pub statistic: Statistic,
    pub direction: Direction,
    /// |R| > 0.3 among significant cells.
    pub strong: bool,
    /// p < 0.05.
    pub significant: bool,
}

/// Apply the significance gate (p < 0.05) and strength flag (|R| > 0.3).
/// Non-significant cells get no direction and cannot be strong.
pub fn summarize(
    cells: &[(String, String, Statistic, RegressionResult)],
) -> Vec<SummaryCell> {
    cells
        .iter()
        .map(|(vowel, feature, statistic, res)| {
            let significant = res.p < 0.05;
            let direction = if !significant {
                Direction::None
            } else if res.r > 0.0 {
                Direction::Up
            } else {
                Direction::Down
            };
            SummaryCell {
                vowel: vowel.clone(),
                feature: feature.clone(),
                statistic: *statistic,
                direction,
                strong: significant && res.r.abs() > 0.3,
                significant,
            }
        })
        .collect()
}
