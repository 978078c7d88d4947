//! Least-squares estimates of the asymptotic rate of a weight sequence.

use serde::Serialize;

use super::sequence::WeightSequence;
use crate::asymptotics::AsymptoticClass;
use crate::error::{Error, Result};

/// Which transform of `(r, p_r)` is expected to be affine. The power model
/// `p_r^c ≈ s·r` is fitted as `p_r ≈ (s·r)^(1/c) + a`, which leaves a constant
/// shift of the weights out of the slope.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "model", rename_all = "lowercase")]
pub enum FitModel {
    /// `p_r ≈ s·r`
    Linear,
    /// `p_r^c ≈ s·r`, for `c >= 2`
    Power { c: u32 },
    /// `p_r ≈ s·ln r`
    Log,
}

impl FitModel {
    /// The model matching a class; finite sequences have nothing to fit.
    pub fn for_class(class: &AsymptoticClass) -> Result<Self> {
        match *class {
            AsymptoticClass::Finite { .. } => Err(Error::InvalidArgument(
                "a finite sequence has no asymptotic rate to fit".into(),
            )),
            AsymptoticClass::Polynomial { c: 1, .. } => Ok(FitModel::Linear),
            AsymptoticClass::Polynomial { c, .. } => Ok(FitModel::Power { c }),
            AsymptoticClass::Logarithmic { .. } => Ok(FitModel::Log),
        }
    }

    fn point(self, rank: usize, weight: f64) -> (f64, f64) {
        let r = rank as f64;
        match self {
            FitModel::Linear => (r, weight),
            FitModel::Power { c } => (r.powf(1.0 / c as f64), weight),
            FitModel::Log => (r.ln(), weight),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FitReport {
    #[serde(flatten)]
    pub model: FitModel,
    /// Fitted rate.
    pub s: f64,
    /// Fitted offset of the weights (of `p_r`, also for the power model).
    pub intercept: f64,
    /// 1-based inclusive rank window.
    pub window: (usize, usize),
    /// Largest relative gap between `p_r` and the fitted curve over the window.
    pub max_residual: f64,
}

/// The top decade `[max(1, n / 10), n]` of `n` available ranks.
pub fn default_window(n: usize) -> (usize, usize) {
    ((n / 10).max(1), n)
}

/// Fits `y = k·x + a` by least squares over the window, with `(x, y)` the
/// model transform of `(r, p_r)`, and reports `s = k` (`s = k^c` for the
/// power model). `weights[i]` is `p_{i+1}`.
pub fn fit_asymptotics(
    weights: &[f64],
    model: FitModel,
    window: (usize, usize),
) -> Result<FitReport> {
    let (lo, hi) = window;
    if lo == 0 || lo >= hi {
        return Err(Error::InvalidArgument(format!(
            "rank window [{lo}, {hi}] must satisfy 1 <= lo < hi"
        )));
    }
    if weights.len() < hi {
        return Err(Error::ShortStream {
            needed: hi,
            got: weights.len(),
        });
    }
    let points: Vec<(f64, f64)> = (lo..=hi).map(|r| model.point(r, weights[r - 1])).collect();
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for &(x, y) in &points {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    let k = sxy / sxx;
    let intercept = my - k * mx;
    let s = match model {
        FitModel::Power { c } => k.powi(c as i32),
        _ => k,
    };
    let max_residual = points
        .iter()
        .map(|&(x, y)| {
            let e = (y - (k * x + intercept)).abs();
            if y == 0.0 {
                e
            } else {
                e / y.abs()
            }
        })
        .fold(0.0, f64::max);
    Ok(FitReport {
        model,
        s,
        intercept,
        window,
        max_residual,
    })
}

/// Materializes the stream up to the window's upper rank and fits it.
pub fn fit_sequence(
    seq: WeightSequence<'_>,
    model: FitModel,
    window: (usize, usize),
) -> Result<FitReport> {
    let weights = seq.take_weights(window.1);
    fit_asymptotics(&weights, model, window)
}
