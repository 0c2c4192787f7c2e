//! Timing side channel on the scrambling round count.
//!
//! A round-by-round implementation costs about `c · n · (T + 1)` for an image
//! of `n` pixels: `T` scrambling passes plus one masking pass. Fitting
//! duration against `n` gives a slope of `c · (T + 1)`; dividing by a per-pixel
//! cost `c` calibrated on a run with known `T` leaves `T`.

use std::time::Instant;

use super::oracle::TimingOracle;
use super::report::{AttackKind, AttackReport};
use super::AttackError;
use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimingSample {
    pub pixels: u64,
    pub duration: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual.
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimingModel {
    /// Per-pixel, per-round reference cost the estimate was scaled by.
    pub pixel_cost: f64,
    pub slope: f64,
    pub overhead: f64,
    pub estimated_rounds: u64,
    pub residual: f64,
    /// The fit implied a negative round count and was clamped to 0.
    pub clamped: bool,
}

pub fn collect_samples(oracle: &mut dyn TimingOracle, sizes: &[usize]) -> Vec<TimingSample> {
    sizes
        .iter()
        .map(|&n| TimingSample {
            pixels: (n * n) as u64,
            duration: oracle.time_encryption(n),
        })
        .collect()
}

/// Least squares of duration on pixel count, each sample weighted by `1 / n²`
/// (noise is proportional to the work done).
pub fn fit_line(samples: &[TimingSample]) -> Result<LinearFit, Error> {
    let mut distinct: Vec<u64> = samples.iter().map(|s| s.pixels).collect();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() < 2 || distinct[0] == 0 {
        return Err(Error::TooFewTimingSamples(distinct.len()));
    }
    let weight = |s: &TimingSample| (s.pixels as f64).powi(-2);
    let total: f64 = samples.iter().map(weight).sum();
    let mean_x = samples
        .iter()
        .map(|s| weight(s) * s.pixels as f64)
        .sum::<f64>()
        / total;
    let mean_y = samples.iter().map(|s| weight(s) * s.duration).sum::<f64>() / total;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for s in samples {
        let dx = s.pixels as f64 - mean_x;
        sxy += weight(s) * dx * (s.duration - mean_y);
        sxx += weight(s) * dx * dx;
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let sse: f64 = samples
        .iter()
        .map(|s| (s.duration - (slope * s.pixels as f64 + intercept)).powi(2))
        .sum();
    Ok(LinearFit {
        slope,
        intercept,
        residual: (sse / samples.len() as f64).sqrt(),
    })
}

/// Per-pixel, per-round cost from samples taken with a known round count.
pub fn calibrate_pixel_cost(samples: &[TimingSample], known_rounds: u64) -> Result<f64, Error> {
    Ok(fit_line(samples)?.slope / (known_rounds as f64 + 1.0))
}

pub fn timing_estimate(
    samples: &[TimingSample],
    pixel_cost_reference: f64,
) -> Result<TimingModel, Error> {
    let fit = fit_line(samples)?;
    let raw = (fit.slope / pixel_cost_reference - 1.0).round();
    let clamped = raw < 0.0 || !raw.is_finite();
    Ok(TimingModel {
        pixel_cost: pixel_cost_reference,
        slope: fit.slope,
        overhead: fit.intercept,
        estimated_rounds: if clamped { 0 } else { raw as u64 },
        residual: fit.residual,
        clamped,
    })
}

/// Calibrates on `reference` (an instance the attacker controls, running with
/// `known_rounds`), then estimates the round count behind `target`.
pub fn timing_attack(
    target: &mut dyn TimingOracle,
    reference: &mut dyn TimingOracle,
    known_rounds: u64,
    sizes: &[usize],
) -> Result<(AttackReport, TimingModel), AttackError> {
    let start = Instant::now();
    let cost = calibrate_pixel_cost(&collect_samples(reference, sizes), known_rounds)?;
    let model = timing_estimate(&collect_samples(target, sizes), cost)?;
    let mut report = AttackReport::new(AttackKind::Timing);
    report.evidence.estimated_rounds = Some(model.estimated_rounds);
    report.evidence.queries = Some(2 * sizes.len() as u64);
    report.evidence.notes.push(format!(
        "slope={:.6e} pixel_cost={:.6e} overhead={:.6e} residual={:.6e}",
        model.slope, model.pixel_cost, model.overhead, model.residual
    ));
    if model.clamped {
        report
            .evidence
            .notes
            .push("negative round estimate clamped to 0".into());
    }
    report.evidence.elapsed = start.elapsed();
    Ok((report, model))
}
