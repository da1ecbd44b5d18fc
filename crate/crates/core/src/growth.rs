//! Growth series and exponential-versus-linear least-squares fits.
//!
//! Both candidate fits are scored by the same relative RMS residual in value
//! space, `rms(y − ŷ) / rms(y)`. For the exponential candidate, `ŷ = exp(α + βk)`
//! comes from a least-squares line through `ln y`. Using one measure for
//! both makes the residuals directly comparable.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitKind {
    Exponential,
    Linear,
}

/// Least-squares line `value ≈ intercept + rate · period`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineFit<T> {
    pub rate: T,
    pub intercept: T,
    pub residual: T,
}

/// Both candidate fits over an inclusive window of period indices.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrowthFit<T> {
    pub window: (usize, usize),
    pub kind: FitKind,
    /// Slope of `ln value`; `None` when some value in the window is not positive.
    pub exponential: Option<LineFit<T>>,
    pub linear: LineFit<T>,
}

impl<T: Real> GrowthFit<T> {
    /// Rate of the selected kind.
    pub fn rate(&self) -> T {
        self.selected().rate
    }

    pub fn residual(&self) -> T {
        self.selected().residual
    }

    pub fn selected(&self) -> &LineFit<T> {
        match (self.kind, &self.exponential) {
            (FitKind::Exponential, Some(e)) => e,
            _ => &self.linear,
        }
    }

    /// Exponential rate if available, otherwise zero.
    pub fn exponential_rate(&self) -> T {
        self.exponential.map(|e| e.rate).unwrap_or_else(T::zero)
    }
}

/// Per-period measurements with a fit over a declared window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthSeries<T> {
    pub values: Vec<T>,
    pub fit: Option<GrowthFit<T>>,
    /// Set when a resource cap stopped the measurement early.
    pub truncated: bool,
}

impl<T: Real> GrowthSeries<T> {
    /// Fits over `window` (inclusive) when given, else over the whole series.
    /// Series with fewer than three points are stored without a fit.
    pub fn new(values: Vec<T>, window: Option<(usize, usize)>, truncated: bool) -> Result<Self> {
        let fit = match window {
            Some((first, last)) => Some(metric_growth_fit(&values, first, last)?),
            None if values.len() >= 3 => Some(metric_growth_fit(&values, 0, values.len() - 1)?),
            None => None,
        };
        Ok(GrowthSeries {
            values,
            fit,
            truncated,
        })
    }

    /// Fit over the last half of the series (at least three points).
    pub fn with_tail_fit(values: Vec<T>, truncated: bool) -> Result<Self> {
        let len = values.len();
        let window = (len >= 3).then(|| (len.saturating_sub(len.div_ceil(2).max(3)), len - 1));
        GrowthSeries::new(values, window, truncated)
    }

    pub fn rate(&self) -> T {
        self.fit.map(|f| f.rate()).unwrap_or_else(T::zero)
    }

    /// Exponential growth rate: the fitted `ln`-slope when the exponential
    /// model wins, zero otherwise.
    pub fn log_rate(&self) -> T {
        match self.fit {
            Some(f) if f.kind == FitKind::Exponential => f.rate(),
            _ => T::zero(),
        }
    }

    pub fn fit_kind(&self) -> Option<FitKind> {
        self.fit.map(|f| f.kind)
    }

    pub fn residual(&self) -> Option<T> {
        self.fit.map(|f| f.residual())
    }
}

fn check_window(len: usize, first: usize, last: usize) -> Result<()> {
    if first > last || last >= len || last - first + 1 < 3 {
        return Err(Error::FitWindow { first, last, len });
    }
    Ok(())
}

fn lsq<T: Real>(xs: impl Iterator<Item = (T, T)> + Clone) -> (T, T) {
    let mut count = T::zero();
    let (mut sx, mut sy) = (T::zero(), T::zero());
    for (x, y) in xs.clone() {
        count = count + T::one();
        sx = sx + x;
        sy = sy + y;
    }
    let (mx, my) = (sx / count, sy / count);
    let (mut sxx, mut sxy) = (T::zero(), T::zero());
    for (x, y) in xs {
        sxx = sxx + (x - mx) * (x - mx);
        sxy = sxy + (x - mx) * (y - my);
    }
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

fn relative_rms<T: Real>(pairs: impl Iterator<Item = (T, T)>) -> T {
    let (mut err, mut mag, mut count) = (T::zero(), T::zero(), T::zero());
    for (y, pred) in pairs {
        err = err + (y - pred) * (y - pred);
        mag = mag + y * y;
        count = count + T::one();
    }
    if mag > T::zero() {
        (err / mag).sqrt()
    } else {
        (err / count).sqrt()
    }
}

fn select<T: Real>(exponential: &Option<LineFit<T>>, linear: &LineFit<T>) -> FitKind {
    match exponential {
        Some(e) if e.residual < linear.residual => FitKind::Exponential,
        _ => FitKind::Linear,
    }
}

/// Fits `values[first..=last]` against the period index with both models and
/// keeps the one with the smaller residual (ties go to linear).
pub fn metric_growth_fit<T: Real>(values: &[T], first: usize, last: usize) -> Result<GrowthFit<T>> {
    check_window(values.len(), first, last)?;
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite(i));
    }
    let k = |i: usize| T::from_usize(i).unwrap();
    let window = first..=last;
    let pts = window.clone().map(|i| (k(i), values[i]));

    let (rate, intercept) = lsq(pts.clone());
    let residual = relative_rms(pts.map(|(x, y)| (y, intercept + rate * x)));
    let linear = LineFit {
        rate,
        intercept,
        residual,
    };

    let exponential = values[window.clone()].iter().all(|&v| v > T::zero()).then(|| {
        let logs = window.clone().map(|i| (k(i), values[i].ln()));
        let (rate, intercept) = lsq(logs);
        let residual = relative_rms(window.clone().map(|i| (values[i], (intercept + rate * k(i)).exp())));
        LineFit {
            rate,
            intercept,
            residual,
        }
    });

    Ok(GrowthFit {
        window: (first, last),
        kind: select(&exponential, &linear),
        exponential,
        linear,
    })
}

/// Same as [`metric_growth_fit`] but for series given as natural logs, which
/// may be far outside the floating-point range. Values are rescaled by the
/// series maximum, so the linear fit's `rate` and `intercept` are in those
/// scaled units; residuals are scale-free.
pub fn log_growth_fit<T: Real>(logs: &[T], first: usize, last: usize) -> Result<GrowthFit<T>> {
    check_window(logs.len(), first, last)?;
    if let Some(i) = logs.iter().position(|v| v.is_nan() || *v == T::infinity()) {
        return Err(Error::NonFinite(i));
    }
    let k = |i: usize| T::from_usize(i).unwrap();
    let window = first..=last;
    let top = logs.iter().copied().fold(T::neg_infinity(), T::max);
    let top = if top.is_finite() { top } else { T::zero() };
    let scaled: Vec<T> = logs.iter().map(|&l| (l - top).exp()).collect();

    let mut fit = metric_growth_fit(&scaled, first, last)?;
    if logs[window.clone()].iter().all(|l| l.is_finite()) {
        let (rate, intercept) = lsq(window.clone().map(|i| (k(i), logs[i])));
        let residual =
            relative_rms(window.clone().map(|i| (scaled[i], (intercept + rate * k(i) - top).exp())));
        fit.exponential = Some(LineFit {
            rate,
            intercept,
            residual,
        });
        fit.kind = select(&fit.exponential, &fit.linear);
    }
    Ok(fit)
}
