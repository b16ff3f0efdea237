//! Histogram primitives shared by every method: counting, means, and
//! partitioning of the gray-level axis into contiguous ranges.

use std::ops::RangeInclusive;

use crate::error::{Error, Result};
use crate::image::{GrayImage, LEVELS};

/// Pixel counts per gray level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Histogram {
    counts: [u64; LEVELS],
}

impl Default for Histogram {
    fn default() -> Self {
        Self {
            counts: [0; LEVELS],
        }
    }
}

impl Histogram {
    pub fn from_counts(counts: [u64; LEVELS]) -> Self {
        Self { counts }
    }

    /// Builds a histogram from sparse `(level, count)` pairs. Repeated levels accumulate.
    pub fn from_pairs(pairs: &[(u8, u64)]) -> Self {
        let mut counts = [0; LEVELS];
        for &(level, n) in pairs {
            counts[level as usize] += n;
        }
        Self { counts }
    }

    pub fn counts(&self) -> &[u64; LEVELS] {
        &self.counts
    }

    pub fn count(&self, level: u8) -> u64 {
        self.counts[level as usize]
    }

    /// Total number of samples (the pixel count of the source image).
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Σ level × count, exact.
    pub fn level_sum(&self) -> u64 {
        self.counts
            .iter()
            .enumerate()
            .map(|(k, &n)| k as u64 * n)
            .sum()
    }

    /// Number of gray levels with a non-zero count.
    pub fn occupied_levels(&self) -> usize {
        self.counts.iter().filter(|&&n| n > 0).count()
    }

    /// Mean gray level Σ k·n_k / N.
    pub fn mean_brightness(&self) -> Result<f64> {
        let total = self.total();
        if total == 0 {
            return Err(Error::EmptyInput);
        }
        Ok(self.level_sum() as f64 / total as f64)
    }

    /// Mean of the image obtained by pushing this histogram through `map`,
    /// computed without materializing the image.
    pub fn mapped_mean(&self, map: &[u8; LEVELS]) -> Result<f64> {
        let total = self.total();
        if total == 0 {
            return Err(Error::EmptyInput);
        }
        let sum: u64 = self
            .counts
            .iter()
            .zip(map)
            .map(|(&n, &v)| n * v as u64)
            .sum();
        Ok(sum as f64 / total as f64)
    }

    /// Probability of each level; all zeros for an empty histogram.
    pub fn pdf(&self) -> [f64; LEVELS] {
        let total = self.total();
        let mut pdf = [0.0; LEVELS];
        if total > 0 {
            for (p, &n) in pdf.iter_mut().zip(&self.counts) {
                *p = n as f64 / total as f64;
            }
        }
        pdf
    }
}

/// Counts every pixel of `img` into its gray level bin.
pub fn compute_histogram(img: &GrayImage) -> Histogram {
    let mut counts = [0u64; LEVELS];
    for &p in img.pixels() {
        counts[p as usize] += 1;
    }
    Histogram { counts }
}

/// Mean gray level of a histogram; fails on an empty one.
pub fn mean_brightness(h: &Histogram) -> Result<f64> {
    h.mean_brightness()
}

/// An ordered set of disjoint, contiguous, inclusive gray-level ranges whose
/// union is exactly `[0, 255]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    ranges: Vec<(u8, u8)>,
}

impl Partition {
    /// Validates that `ranges` tile `[0, 255]` in order.
    pub fn new(ranges: Vec<(u8, u8)>) -> Result<Self> {
        if ranges.is_empty() {
            return Err(Error::InvalidPartition("no ranges".into()));
        }
        let mut next: u16 = 0;
        for &(lo, hi) in &ranges {
            if lo as u16 != next || lo > hi {
                return Err(Error::InvalidPartition(format!(
                    "range ({lo}, {hi}) does not continue at {next}"
                )));
            }
            next = hi as u16 + 1;
        }
        if next != LEVELS as u16 {
            return Err(Error::InvalidPartition(format!(
                "ranges end at {} instead of 255",
                next - 1
            )));
        }
        Ok(Self { ranges })
    }

    /// The single range `[0, 255]`.
    pub fn full() -> Self {
        Self {
            ranges: vec![(0, 255)],
        }
    }

    /// Threshold `t` closes a range at `t`; the next one opens at `t + 1`.
    /// Thresholds must be strictly increasing and at most 254.
    pub fn from_thresholds(thresholds: &[u8]) -> Result<Self> {
        let mut ranges = Vec::with_capacity(thresholds.len() + 1);
        let mut lo = 0u8;
        for (i, &t) in thresholds.iter().enumerate() {
            if t == 255 || (i > 0 && t < lo) {
                return Err(Error::InvalidPartition(format!(
                    "thresholds {thresholds:?} are not strictly increasing within [0, 254]"
                )));
            }
            ranges.push((lo, t));
            lo = t + 1;
        }
        ranges.push((lo, 255));
        Self::new(ranges)
    }

    pub fn ranges(&self) -> &[(u8, u8)] {
        &self.ranges
    }

    pub fn len(&self) -> usize {
        self.ranges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranges.is_empty()
    }

    /// Index of the range containing `level`.
    pub fn range_index(&self, level: u8) -> usize {
        self.ranges
            .iter()
            .position(|&(lo, hi)| (lo..=hi).contains(&level))
            .expect("partition covers every level")
    }

    /// The inclusive range containing `level`.
    pub fn range_of(&self, level: u8) -> RangeInclusive<u8> {
        let (lo, hi) = self.ranges[self.range_index(level)];
        lo..=hi
    }
}

/// Counts and within-range pdf of one partition range.
#[derive(Debug, Clone, PartialEq)]
pub struct SubHistogram {
    lo: u8,
    hi: u8,
    counts: Vec<u64>,
    pdf: Vec<f64>,
}

impl SubHistogram {
    /// Builds a sub-histogram over `[lo, hi]`; `counts.len()` must equal `hi - lo + 1`.
    pub fn new(lo: u8, hi: u8, counts: Vec<u64>) -> Result<Self> {
        if lo > hi || counts.len() != (hi - lo) as usize + 1 {
            return Err(Error::InvalidPartition(format!(
                "{} counts for range ({lo}, {hi})",
                counts.len()
            )));
        }
        let total: u64 = counts.iter().sum();
        let pdf = if total == 0 {
            vec![0.0; counts.len()]
        } else {
            counts.iter().map(|&n| n as f64 / total as f64).collect()
        };
        Ok(Self {
            lo,
            hi,
            counts,
            pdf,
        })
    }

    pub fn lo(&self) -> u8 {
        self.lo
    }

    pub fn hi(&self) -> u8 {
        self.hi
    }

    /// Number of bins, `hi - lo + 1`.
    pub fn bins(&self) -> usize {
        self.pdf.len()
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn pdf(&self) -> &[f64] {
        &self.pdf
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// True when the range holds no pixels (the pdf is all zeros).
    pub fn is_degenerate(&self) -> bool {
        self.pdf.iter().all(|&p| p == 0.0)
    }
}

/// Restricts `h` to each range of `p`, normalizing each piece on its own mass.
pub fn split(h: &Histogram, p: &Partition) -> Vec<SubHistogram> {
    p.ranges()
        .iter()
        .map(|&(lo, hi)| {
            let counts = h.counts[lo as usize..=hi as usize].to_vec();
            SubHistogram::new(lo, hi, counts).expect("partition ranges are valid")
        })
        .collect()
}
