//! Brightness-preserving contrast enhancement for 8-bit grayscale images.
//!
//! The crate implements bi- and tri-histogram equalization with plateau-limit
//! clipping, selected by three threshold strategies (exhaustive
//! minimum-brightness-error search, mean split, and two-threshold Otsu),
//! alongside six classical baselines and a suite of quality metrics.
//!
//! ```
//! use bihisteq::{enhance, metrics, GrayImage, MethodId};
//!
//! let img = GrayImage::from_fn(64, 64, |x, y| (40 + (x + y) / 4) as u8).unwrap();
//! let result = enhance(&img, MethodId::Itsbpl);
//!
//! // Every pixel stays on its side of the split threshold.
//! let partition = result.partition();
//! for (&before, &after) in img.pixels().iter().zip(result.output.pixels()) {
//!     assert!(partition.range_of(before).contains(&after));
//! }
//! assert!(metrics::ambe(&img, &result.output).unwrap() < 1.0);
//! ```
//!
//! The guide in `book/` walks through each stage; its code listings are
//! compiled and run as doc-tests of this crate.

pub mod bench;
pub mod corpus;
pub mod equalize;
mod error;
pub mod histogram;
mod image;
pub mod imageio;
pub mod methods;
pub mod metrics;
pub mod report;
pub mod segmentation;

pub use crate::equalize::TransformLut;
pub use crate::error::{Error, Result};
pub use crate::histogram::{compute_histogram, Histogram, Partition, SubHistogram};
pub use crate::image::{GrayImage, LEVELS};
pub use crate::methods::{enhance, EnhanceResult, MethodId};
pub use crate::metrics::MetricsReport;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/histograms.md")]
    mod histograms {}
    #[doc = include_str!("../../../book/src/thresholds.md")]
    mod thresholds {}
    #[doc = include_str!("../../../book/src/clipping.md")]
    mod clipping {}
    #[doc = include_str!("../../../book/src/methods.md")]
    mod methods {}
    #[doc = include_str!("../../../book/src/metrics.md")]
    mod metrics {}
    #[doc = include_str!("../../../book/src/benchmarking.md")]
    mod benchmarking {}
}
