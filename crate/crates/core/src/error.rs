use std::io;

use thiserror::Error;

/// Errors raised anywhere in the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid image: {0}")]
    InvalidImage(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("empty input")]
    EmptyInput,

    /// Fewer occupied gray levels than the operation needs.
    #[error("degenerate histogram: {occupied} occupied level(s), need at least {required}")]
    DegenerateHistogram { occupied: usize, required: usize },

    #[error("degenerate sub-histogram [{lo}, {hi}]")]
    DegenerateSubHistogram { lo: u8, hi: u8 },

    #[error("degenerate clipped histogram [{lo}, {hi}]")]
    DegenerateClippedHistogram { lo: u8, hi: u8 },

    #[error("partition mismatch: {0}")]
    PartitionMismatch(String),

    #[error("threshold evaluator failed at t = {threshold}: {source}")]
    Evaluator {
        threshold: u8,
        #[source]
        source: Box<Error>,
    },

    #[error("dimension mismatch: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(u32, u32, u32, u32),

    #[error("undefined UIQI: constant image has zero variance")]
    UndefinedUiqi,

    #[error("image too small for {metric}: need at least {need}x{need}, got {width}x{height}")]
    ImageTooSmall {
        metric: &'static str,
        need: u32,
        width: u32,
        height: u32,
    },

    #[error("invalid block size {0}")]
    InvalidBlock(u32),

    #[error("unsupported format: {0}")]
    UnsupportedFormat(String),

    #[error("corrupt header: {0}")]
    CorruptHeader(String),

    #[error("maxval not 255 (found {0})")]
    MaxvalNot255(u32),

    #[error("unknown method {name:?}; valid methods: {valid}")]
    UnknownMethod { name: String, valid: String },

    #[error("invalid corpus: {0}")]
    InvalidCorpus(String),

    #[error("no images found")]
    NoImages,

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
