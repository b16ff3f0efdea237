//! Plateau-limit clipping and range-preserving equalization.
//!
//! Each partition range is equalized on its own: its pdf is (optionally)
//! clipped at the plateau limit, the clipped pdf is accumulated into a CDF
//! normalized by the clipped mass, and the CDF is mapped affinely back onto
//! the range itself. Clipped mass is discarded, never redistributed.
//!
//! Output levels never leave the range of their input level, which is what
//! holds the mean brightness near the input's.

use crate::error::{Error, Result};
use crate::histogram::{split, Histogram, Partition, SubHistogram};
use crate::image::{GrayImage, LEVELS};

/// Ceiling applied to sub-histogram pdf bins.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct PlateauLimit(pub f64);

impl PlateauLimit {
    pub fn value(self) -> f64 {
        self.0
    }
}

/// Average of the sub-range pdf, which for a normalized pdf over `m` bins is `1 / m`.
pub fn plateau_limit(s: &SubHistogram) -> Result<PlateauLimit> {
    if s.is_degenerate() {
        return Err(Error::DegenerateSubHistogram {
            lo: s.lo(),
            hi: s.hi(),
        });
    }
    let sum: f64 = s.pdf().iter().sum();
    Ok(PlateauLimit(sum / s.bins() as f64))
}

/// A sub-range pdf after clipping, with its remaining mass.
#[derive(Debug, Clone, PartialEq)]
pub struct ClippedSubHistogram {
    lo: u8,
    hi: u8,
    bins: Vec<f64>,
    mass: f64,
}

impl ClippedSubHistogram {
    fn from_bins(lo: u8, hi: u8, bins: Vec<f64>) -> Self {
        let mass = bins.iter().sum();
        Self { lo, hi, bins, mass }
    }

    /// The pdf as is, for the unclipped baselines.
    pub fn unclipped(s: &SubHistogram) -> Result<Self> {
        if s.is_degenerate() {
            return Err(Error::DegenerateSubHistogram {
                lo: s.lo(),
                hi: s.hi(),
            });
        }
        Ok(Self::from_bins(s.lo(), s.hi(), s.pdf().to_vec()))
    }

    pub fn lo(&self) -> u8 {
        self.lo
    }

    pub fn hi(&self) -> u8 {
        self.hi
    }

    pub fn bins(&self) -> &[f64] {
        &self.bins
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }
}

/// Replaces every pdf bin above the plateau with the plateau value.
pub fn clip(s: &SubHistogram, t: PlateauLimit) -> Result<ClippedSubHistogram> {
    if s.is_degenerate() {
        return Err(Error::DegenerateSubHistogram {
            lo: s.lo(),
            hi: s.hi(),
        });
    }
    let bins = s.pdf().iter().map(|&p| p.min(t.0)).collect();
    Ok(ClippedSubHistogram::from_bins(s.lo(), s.hi(), bins))
}

/// Cumulative distribution of a clipped sub-histogram over its own range.
#[derive(Debug, Clone, PartialEq)]
pub struct ClippedCdf {
    lo: u8,
    hi: u8,
    values: Vec<f64>,
}

impl ClippedCdf {
    pub fn lo(&self) -> u8 {
        self.lo
    }

    pub fn hi(&self) -> u8 {
        self.hi
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// `values[k] = Σ_{j <= k} bins[j] / mass`; ends at 1.
pub fn clipped_cdf(c: &ClippedSubHistogram) -> Result<ClippedCdf> {
    if c.mass <= 0.0 || !c.mass.is_finite() {
        return Err(Error::DegenerateClippedHistogram { lo: c.lo, hi: c.hi });
    }
    let mut acc = 0.0;
    let values = c
        .bins
        .iter()
        .map(|&b| {
            acc += b;
            acc / c.mass
        })
        .collect();
    Ok(ClippedCdf {
        lo: c.lo,
        hi: c.hi,
        values,
    })
}

/// Output gray level for every input gray level.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TransformLut {
    map: [u8; LEVELS],
}

impl Default for TransformLut {
    fn default() -> Self {
        Self::identity()
    }
}

impl TransformLut {
    pub fn identity() -> Self {
        let mut map = [0u8; LEVELS];
        for (i, v) in map.iter_mut().enumerate() {
            *v = i as u8;
        }
        Self { map }
    }

    pub fn from_map(map: [u8; LEVELS]) -> Self {
        Self { map }
    }

    pub fn map(&self) -> &[u8; LEVELS] {
        &self.map
    }

    #[inline]
    pub fn get(&self, level: u8) -> u8 {
        self.map[level as usize]
    }
}

/// Maps each range through its CDF onto itself:
/// `map(i) = round(lo + (hi - lo) * C(i))`, rounded half away from zero and
/// clamped into `[lo, hi]`. A `None` entry marks an empty range, which maps
/// to the identity.
pub fn build_lut(cdfs: &[Option<ClippedCdf>], p: &Partition) -> Result<TransformLut> {
    if cdfs.len() != p.len() {
        return Err(Error::PartitionMismatch(format!(
            "{} cdfs for {} ranges",
            cdfs.len(),
            p.len()
        )));
    }
    let mut lut = TransformLut::identity();
    for (cdf, &(lo, hi)) in cdfs.iter().zip(p.ranges()) {
        let Some(cdf) = cdf else { continue };
        if (cdf.lo, cdf.hi) != (lo, hi) || cdf.values.len() != (hi - lo) as usize + 1 {
            return Err(Error::PartitionMismatch(format!(
                "cdf over ({}, {}) for range ({lo}, {hi})",
                cdf.lo, cdf.hi
            )));
        }
        let span = (hi - lo) as f64;
        for (k, &c) in cdf.values.iter().enumerate() {
            let level = (lo as f64 + span * c).round();
            lut.map[lo as usize + k] = level.clamp(lo as f64, hi as f64) as u8;
        }
    }
    Ok(lut)
}

/// Per-pixel table lookup.
pub fn apply_lut(img: &GrayImage, lut: &TransformLut) -> GrayImage {
    let pixels = img.pixels().iter().map(|&p| lut.map[p as usize]).collect();
    GrayImage::new(img.width(), img.height(), pixels).expect("dimensions unchanged")
}

/// Whether each range is clipped at its plateau limit before equalizing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Clipping {
    /// Plain per-range histogram equalization.
    None,
    /// Clip each range's pdf at its average bin value.
    PlateauLimit,
}

/// Runs split → (clip) → CDF → LUT for every range of `p`.
pub fn equalize_partition(h: &Histogram, p: &Partition, clipping: Clipping) -> Result<TransformLut> {
    let cdfs = split(h, p)
        .iter()
        .map(|sub| {
            if sub.is_degenerate() {
                return Ok(None);
            }
            let clipped = match clipping {
                Clipping::None => ClippedSubHistogram::unclipped(sub)?,
                Clipping::PlateauLimit => clip(sub, plateau_limit(sub)?)?,
            };
            clipped_cdf(&clipped).map(Some)
        })
        .collect::<Result<Vec<_>>>()?;
    build_lut(&cdfs, p)
}
