//! Truncated Poincaré series, orbit counting and critical exponent estimates.

use serde::Serialize;

use crate::error::{Error, Result};

/// Values below this are treated as exactly zero.
pub const ZERO_CLAMP: f64 = 1e-12;

/// Minimum number of distinct values inside an estimation window.
pub const MIN_WINDOW_VALUES: usize = 20;

/// Grid points used by the slope regression.
pub const SLOPE_GRID: usize = 64;

/// Tail level defining the bisection estimate.
pub const BISECTION_THRESHOLD: f64 = 1.0;

/// Sorted sample of functional values with a completeness certificate.
#[derive(Clone, Debug, PartialEq)]
pub struct ValueSample {
    values: Vec<f64>,
    complete_to: f64,
}

impl ValueSample {
    pub fn new(mut values: Vec<f64>, complete_to: f64) -> Result<Self> {
        for v in values.iter_mut() {
            if !v.is_finite() || *v < -1e-9 {
                return Err(Error::InvalidInput(format!("sample value {v} is negative or not finite")));
            }
            if *v < ZERO_CLAMP {
                *v = 0.0;
            }
        }
        values.sort_by(f64::total_cmp);
        let max = values.last().copied().unwrap_or(0.0);
        let complete_to = if complete_to.is_nan() { 0.0 } else { complete_to.clamp(0.0, max) };
        Ok(ValueSample { values, complete_to })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn complete_to(&self) -> f64 {
        self.complete_to
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Every value and the certificate multiplied by `c > 0`.
    pub fn scaled(&self, c: f64) -> ValueSample {
        ValueSample { values: self.values.iter().map(|v| v * c).collect(), complete_to: self.complete_to * c }
    }

    pub fn default_window(&self) -> (f64, f64) {
        (self.complete_to / 2.0, self.complete_to)
    }
}

/// Neumaier-compensated sum.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(it: I) -> f64 {
    let mut sum = 0.0f64;
    let mut c = 0.0f64;
    for x in it {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            c += (sum - t) + x;
        } else {
            c += (x - t) + sum;
        }
        sum = t;
    }
    sum + c
}

/// `Σ e^{−s v}` over the sample, summed in ascending order of `v`.
pub fn poincare_series(vs: &ValueSample, s: f64) -> f64 {
    compensated_sum(vs.values.iter().map(|v| (-s * v).exp()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Count {
    pub n: usize,
    /// True when `T` exceeds the completeness certificate.
    pub partial: bool,
}

/// `#{v ≤ T}`.
pub fn counting_function(vs: &ValueSample, t: f64) -> Count {
    Count { n: vs.values.partition_point(|&v| v <= t), partial: t > vs.complete_to }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Slope,
    Bisection,
}

impl std::str::FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "slope" => Ok(Method::Slope),
            "bisection" => Ok(Method::Bisection),
            _ => Err(Error::Parse(format!("unknown method '{s}'"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExponentEstimate {
    pub value: f64,
    pub stderr: f64,
    pub method: Method,
    pub window: (f64, f64),
    pub complete_to: f64,
    pub n_values: usize,
}

fn check_window(vs: &ValueSample, w: (f64, f64)) -> Result<usize> {
    let (t0, t1) = w;
    if !(t0 >= 0.0 && t0 < t1) {
        return Err(Error::InvalidInput(format!("window ({t0}, {t1}) is empty or negative")));
    }
    if t1 > vs.complete_to * (1.0 + 1e-12) {
        return Err(Error::InvalidInput(format!(
            "window end {t1} exceeds the completeness certificate {}",
            vs.complete_to
        )));
    }
    let lo = vs.values.partition_point(|&v| v <= t0);
    let hi = vs.values.partition_point(|&v| v <= t1);
    let inside = &vs.values[lo..hi];
    let mut distinct = 0;
    let mut last = f64::NAN;
    for &v in inside {
        if v != last {
            distinct += 1;
            last = v;
        }
    }
    if distinct < MIN_WINDOW_VALUES {
        return Err(Error::InsufficientData(format!(
            "{distinct} distinct values in ({t0}, {t1}], need {MIN_WINDOW_VALUES}"
        )));
    }
    Ok(hi - lo)
}

pub fn estimate_exponent(vs: &ValueSample, window: (f64, f64), method: Method) -> Result<ExponentEstimate> {
    let n_values = check_window(vs, window)?;
    let (value, stderr) = match method {
        Method::Slope => slope(vs, window)?,
        Method::Bisection => {
            let v = bisection(vs, window, BISECTION_THRESHOLD);
            let lo = bisection(vs, window, 2.0 * BISECTION_THRESHOLD);
            let hi = bisection(vs, window, 0.5 * BISECTION_THRESHOLD);
            (v, 0.5 * (hi - lo).abs())
        }
    };
    Ok(ExponentEstimate { value, stderr, method, window, complete_to: vs.complete_to, n_values })
}

/// Least-squares slope of `log N(T)` on a uniform grid over the window.
fn slope(vs: &ValueSample, (t0, t1): (f64, f64)) -> Result<(f64, f64)> {
    let m = SLOPE_GRID;
    let mut xs = Vec::with_capacity(m);
    let mut ys = Vec::with_capacity(m);
    for i in 0..m {
        let t = t0 + (t1 - t0) * i as f64 / (m - 1) as f64;
        let n = counting_function(vs, t).n;
        if n == 0 {
            return Err(Error::InsufficientData(format!("N({t}) = 0")));
        }
        xs.push(t);
        ys.push((n as f64).ln());
    }
    let xm = xs.iter().sum::<f64>() / m as f64;
    let ym = ys.iter().sum::<f64>() / m as f64;
    let sxx: f64 = xs.iter().map(|x| (x - xm) * (x - xm)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - xm) * (y - ym)).sum();
    let b = sxy / sxx;
    let a = ym - b * xm;
    let rss: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - a - b * x).powi(2)).sum();
    let stderr = (rss / (m - 2) as f64 / sxx).sqrt();
    Ok((b, stderr))
}

/// Smallest `s ≥ 0` with `Σ_{v ∈ (T0, T1]} e^{−s v} ≤ threshold`.
fn bisection(vs: &ValueSample, (t0, t1): (f64, f64), threshold: f64) -> f64 {
    let lo_i = vs.values.partition_point(|&v| v <= t0);
    let hi_i = vs.values.partition_point(|&v| v <= t1);
    let window = &vs.values[lo_i..hi_i];
    let tail = |s: f64| compensated_sum(window.iter().map(|v| (-s * v).exp()));
    if tail(0.0) <= threshold {
        return 0.0;
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while tail(hi) > threshold {
        hi *= 2.0;
        if hi > 1e6 {
            return hi;
        }
    }
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if tail(mid) > threshold {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-13 * hi.max(1.0) {
            break;
        }
    }
    hi
}
