//! Threshold selection: mean split, Otsu's between-class variance criterion
//! for one and two thresholds, and the exhaustive minimum-brightness-error
//! search.
//!
//! Every search scans all candidates and keeps the first optimum it meets,
//! so ties always resolve to the smallest threshold (lexicographically
//! smallest pair for two thresholds).

use crate::error::{Error, Result};
use crate::histogram::Histogram;
use crate::image::LEVELS;

/// Largest admissible threshold; `t` splits `[0, t]` from `[t + 1, 255]`.
pub const MAX_THRESHOLD: u8 = 254;

/// Selected threshold(s) together with the criterion value at the optimum.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdResult {
    pub thresholds: Vec<u8>,
    pub objective: f64,
}

impl ThresholdResult {
    fn single(t: u8, objective: f64) -> Self {
        Self {
            thresholds: vec![t],
            objective,
        }
    }
}

/// Floor of the mean gray level, clamped to [`MAX_THRESHOLD`]. The objective is the mean itself.
pub fn mean_threshold(h: &Histogram) -> Result<ThresholdResult> {
    let mean = h.mean_brightness()?;
    let t = (mean.floor() as u8).min(MAX_THRESHOLD);
    Ok(ThresholdResult::single(t, mean))
}

fn require_levels(h: &Histogram, required: usize) -> Result<()> {
    let occupied = h.occupied_levels();
    if occupied < required {
        Err(Error::DegenerateHistogram { occupied, required })
    } else {
        Ok(())
    }
}

/// Weighted squared deviation of one class mean from the global mean,
/// `W (E_class - E)^2`; empty classes contribute nothing.
#[inline]
fn class_term(count: u64, level_sum: u64, total: f64, mean: f64) -> f64 {
    if count == 0 {
        return 0.0;
    }
    let weight = count as f64 / total;
    let class_mean = level_sum as f64 / count as f64;
    weight * (class_mean - mean) * (class_mean - mean)
}

/// Prefix sums of counts and of level × count, indexed by the last level included.
fn prefix_sums(h: &Histogram) -> ([u64; LEVELS], [u64; LEVELS]) {
    let mut counts = [0u64; LEVELS];
    let mut sums = [0u64; LEVELS];
    let (mut n, mut s) = (0u64, 0u64);
    for (k, &c) in h.counts().iter().enumerate() {
        n += c;
        s += k as u64 * c;
        counts[k] = n;
        sums[k] = s;
    }
    (counts, sums)
}

/// Otsu's threshold: maximizes `W_L (E_L - E)^2 + W_U (E_U - E)^2` over `t ∈ [0, 254]`.
///
/// Needs at least two occupied gray levels.
pub fn otsu_threshold(h: &Histogram) -> Result<ThresholdResult> {
    require_levels(h, 2)?;
    let (counts, sums) = prefix_sums(h);
    let total_n = counts[LEVELS - 1];
    let total_s = sums[LEVELS - 1];
    let total = total_n as f64;
    let mean = total_s as f64 / total;

    let mut best = ThresholdResult::single(0, f64::NEG_INFINITY);
    for t in 0..=MAX_THRESHOLD {
        let (n_lo, s_lo) = (counts[t as usize], sums[t as usize]);
        let variance = class_term(n_lo, s_lo, total, mean)
            + class_term(total_n - n_lo, total_s - s_lo, total, mean);
        if variance > best.objective {
            best = ThresholdResult::single(t, variance);
        }
    }
    Ok(best)
}

/// Two-threshold Otsu: maximizes the three-class between-class variance over
/// all pairs `0 <= t1 < t2 <= 254`, giving classes `[0, t1]`, `[t1 + 1, t2]`
/// and `[t2 + 1, 255]`.
///
/// Needs at least three occupied gray levels.
pub fn otsu_two_thresholds(h: &Histogram) -> Result<ThresholdResult> {
    require_levels(h, 3)?;
    let (counts, sums) = prefix_sums(h);
    let total_n = counts[LEVELS - 1];
    let total_s = sums[LEVELS - 1];
    let total = total_n as f64;
    let mean = total_s as f64 / total;

    let mut best = ThresholdResult {
        thresholds: vec![0, 1],
        objective: f64::NEG_INFINITY,
    };
    for t1 in 0..MAX_THRESHOLD {
        let (n0, s0) = (counts[t1 as usize], sums[t1 as usize]);
        let low = class_term(n0, s0, total, mean);
        for t2 in t1 + 1..=MAX_THRESHOLD {
            let (n01, s01) = (counts[t2 as usize], sums[t2 as usize]);
            let variance = low
                + class_term(n01 - n0, s01 - s0, total, mean)
                + class_term(total_n - n01, total_s - s01, total, mean);
            if variance > best.objective {
                best = ThresholdResult {
                    thresholds: vec![t1, t2],
                    objective: variance,
                };
            }
        }
    }
    Ok(best)
}

/// Scans every threshold in `[0, 254]` and returns the one minimizing
/// `evaluator`, which is expected to report the brightness error of some
/// pipeline run at that threshold.
///
/// The first failing evaluation aborts the scan, tagged with its threshold.
pub fn search_min_ambe_threshold<F>(h: &Histogram, mut evaluator: F) -> Result<ThresholdResult>
where
    F: FnMut(u8) -> Result<f64>,
{
    if h.total() == 0 {
        return Err(Error::EmptyInput);
    }
    let mut best = ThresholdResult::single(0, f64::INFINITY);
    for t in 0..=MAX_THRESHOLD {
        let err = evaluator(t).map_err(|source| Error::Evaluator {
            threshold: t,
            source: Box::new(source),
        })?;
        // NaN never wins; the first finite value always replaces the sentinel.
        if err < best.objective {
            best = ThresholdResult::single(t, err);
        }
    }
    Ok(best)
}
