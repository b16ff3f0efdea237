//! The nine enhancement pipelines behind one dispatch point.
//!
//! Every method reduces to choosing a partition of the gray-level axis and
//! equalizing each range onto itself, with or without plateau clipping:
//!
//! | method  | split                          | clipping |
//! |---------|--------------------------------|----------|
//! | HE      | none                           | no       |
//! | BBHE    | mean                           | no       |
//! | DSIHE   | median                         | no       |
//! | MMBEBHE | min brightness error (scan)    | no       |
//! | BHEPL   | mean                           | yes      |
//! | RLBHE   | Otsu                           | no       |
//! | ITSBPL  | min brightness error (scan)    | yes      |
//! | MSBPL   | mean                           | yes      |
//! | MVSBPL  | two-threshold Otsu             | yes      |

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use crate::equalize::{apply_lut, equalize_partition, Clipping, TransformLut};
use crate::error::{Error, Result};
use crate::histogram::{compute_histogram, Histogram, Partition};
use crate::image::GrayImage;
use crate::segmentation::{
    mean_threshold, otsu_threshold, otsu_two_thresholds, search_min_ambe_threshold,
    MAX_THRESHOLD,
};

/// Enhancement method identifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MethodId {
    Itsbpl,
    Msbpl,
    Mvsbpl,
    He,
    Bbhe,
    Dsihe,
    Mmbebhe,
    Bhepl,
    Rlbhe,
}

impl MethodId {
    /// All methods, proposed variants first, in report column order.
    pub const ALL: [MethodId; 9] = [
        MethodId::Itsbpl,
        MethodId::Msbpl,
        MethodId::Mvsbpl,
        MethodId::He,
        MethodId::Bbhe,
        MethodId::Dsihe,
        MethodId::Mmbebhe,
        MethodId::Bhepl,
        MethodId::Rlbhe,
    ];

    /// The thresholded plateau-limited variants.
    pub const PROPOSED: [MethodId; 3] = [MethodId::Itsbpl, MethodId::Msbpl, MethodId::Mvsbpl];

    /// Stable lowercase name used on the command line and in reports.
    pub fn name(self) -> &'static str {
        match self {
            MethodId::Itsbpl => "itsbpl",
            MethodId::Msbpl => "msbpl",
            MethodId::Mvsbpl => "mvsbpl",
            MethodId::He => "he",
            MethodId::Bbhe => "bbhe",
            MethodId::Dsihe => "dsihe",
            MethodId::Mmbebhe => "mmbebhe",
            MethodId::Bhepl => "bhepl",
            MethodId::Rlbhe => "rlbhe",
        }
    }

    /// Comma-separated list of every valid name.
    pub fn valid_names() -> String {
        Self::ALL.map(MethodId::name).join(", ")
    }
}

impl fmt::Display for MethodId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MethodId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        Self::ALL
            .into_iter()
            .find(|m| m.name() == lower)
            .ok_or_else(|| Error::UnknownMethod {
                name: s.to_string(),
                valid: Self::valid_names(),
            })
    }
}

/// Output of one enhancement run.
#[derive(Debug, Clone)]
pub struct EnhanceResult {
    pub method: MethodId,
    pub output: GrayImage,
    /// Split thresholds; empty for HE and for degenerate input.
    pub thresholds: Vec<u8>,
    pub lut: TransformLut,
    pub runtime: Duration,
    /// Set when the input had a single gray level and was passed through unchanged.
    pub degenerate: bool,
}

impl EnhanceResult {
    /// Ranges within which every pixel was equalized.
    pub fn partition(&self) -> Partition {
        Partition::from_thresholds(&self.thresholds).expect("thresholds produced by a method")
    }
}

/// Enhances `img` with method `m`.
///
/// A single-level image cannot be equalized; it comes back unchanged with
/// [`EnhanceResult::degenerate`] set.
pub fn enhance(img: &GrayImage, m: MethodId) -> EnhanceResult {
    let start = Instant::now();
    let h = compute_histogram(img);
    let (thresholds, lut, degenerate) = if h.occupied_levels() < 2 {
        (Vec::new(), TransformLut::identity(), true)
    } else {
        let (thresholds, lut) =
            plan(&h, m).expect("histograms with two or more levels are always equalizable");
        (thresholds, lut, false)
    };
    let output = apply_lut(img, &lut);
    EnhanceResult {
        method: m,
        output,
        thresholds,
        lut,
        runtime: start.elapsed(),
        degenerate,
    }
}

/// Thresholds and LUT of method `m` for a histogram with at least two occupied levels.
pub fn plan(h: &Histogram, m: MethodId) -> Result<(Vec<u8>, TransformLut)> {
    let thresholds = match m {
        MethodId::He => Vec::new(),
        MethodId::Bbhe | MethodId::Bhepl | MethodId::Msbpl => mean_threshold(h)?.thresholds,
        MethodId::Dsihe => vec![median_threshold(h)?],
        MethodId::Rlbhe => otsu_threshold(h)?.thresholds,
        MethodId::Mmbebhe => min_error_threshold(h, Clipping::None)?,
        MethodId::Itsbpl => min_error_threshold(h, Clipping::PlateauLimit)?,
        MethodId::Mvsbpl => match otsu_two_thresholds(h) {
            Ok(r) => r.thresholds,
            Err(Error::DegenerateHistogram { .. }) => mean_threshold(h)?.thresholds,
            Err(e) => return Err(e),
        },
    };
    let lut = equalize_partition(h, &Partition::from_thresholds(&thresholds)?, clipping(m))?;
    Ok((thresholds, lut))
}

fn clipping(m: MethodId) -> Clipping {
    match m {
        MethodId::Bhepl | MethodId::Itsbpl | MethodId::Msbpl | MethodId::Mvsbpl => {
            Clipping::PlateauLimit
        }
        _ => Clipping::None,
    }
}

/// Smallest `t` whose cumulative mass reaches half the pixels, clamped to 254.
pub fn median_threshold(h: &Histogram) -> Result<u8> {
    let total = h.total();
    if total == 0 {
        return Err(Error::EmptyInput);
    }
    let mut acc = 0u64;
    for (t, &n) in h.counts().iter().enumerate() {
        acc += n;
        if 2 * acc >= total {
            return Ok((t as u8).min(MAX_THRESHOLD));
        }
    }
    unreachable!("cumulative mass reaches the total")
}

/// Absolute mean brightness error of the single-threshold pipeline at `t`,
/// computed from the histogram and LUT alone.
pub fn threshold_error(h: &Histogram, t: u8, clipping: Clipping) -> Result<f64> {
    let lut = equalize_partition(h, &Partition::from_thresholds(&[t])?, clipping)?;
    Ok((h.mapped_mean(lut.map())? - h.mean_brightness()?).abs())
}

fn min_error_threshold(h: &Histogram, clipping: Clipping) -> Result<Vec<u8>> {
    search_min_ambe_threshold(h, |t| threshold_error(h, t, clipping)).map(|r| r.thresholds)
}

/// Global histogram equalization, `map(i) = round(255 CDF(i))`.
pub fn he(img: &GrayImage) -> EnhanceResult {
    enhance(img, MethodId::He)
}

/// Mean split, each half equalized onto its own range.
pub fn bbhe(img: &GrayImage) -> EnhanceResult {
    enhance(img, MethodId::Bbhe)
}

/// Median (equal-area) split, each half equalized onto its own range.
pub fn dsihe(img: &GrayImage) -> EnhanceResult {
    enhance(img, MethodId::Dsihe)
}

/// Split at the threshold whose unclipped bi-equalization best preserves the mean.
pub fn mmbebhe(img: &GrayImage) -> EnhanceResult {
    enhance(img, MethodId::Mmbebhe)
}

/// Mean split with plateau-limit clipping; shares its engine with [`msbpl`].
pub fn bhepl(img: &GrayImage) -> EnhanceResult {
    enhance(img, MethodId::Bhepl)
}

/// Otsu split, each half equalized onto its own range.
pub fn rlbhe(img: &GrayImage) -> EnhanceResult {
    enhance(img, MethodId::Rlbhe)
}

/// Split at the threshold whose clipped bi-equalization best preserves the mean.
pub fn itsbpl(img: &GrayImage) -> EnhanceResult {
    enhance(img, MethodId::Itsbpl)
}

/// Mean split with plateau-limit clipping.
pub fn msbpl(img: &GrayImage) -> EnhanceResult {
    enhance(img, MethodId::Msbpl)
}

/// Two-threshold Otsu split into three ranges, each clipped and equalized.
/// Falls back to [`msbpl`] when fewer than three levels are occupied.
pub fn mvsbpl(img: &GrayImage) -> EnhanceResult {
    enhance(img, MethodId::Mvsbpl)
}
