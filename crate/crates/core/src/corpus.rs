//! Image corpora for batch runs: a directory of PGM/PNG files, or a
//! seed-deterministic synthetic set of 256x256 medical-style images.

use std::fs;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::histogram::compute_histogram;
use crate::image::GrayImage;
use crate::imageio::{read_image, write_image};

/// Side length of generated images.
pub const SYNTHETIC_SIDE: u32 = 256;

/// Where corpus images come from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CorpusSource {
    /// Every `.pgm` / `.png` file directly inside the directory.
    Directory(PathBuf),
    Synthetic { seed: u64, count: usize },
}

/// A corpus source plus optional size constraints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusSpec {
    pub source: CorpusSource,
    /// Images whose shorter side is below this are skipped.
    pub min_side: Option<u32>,
    /// Images whose longer side exceeds this are skipped.
    pub max_side: Option<u32>,
}

impl CorpusSpec {
    pub fn new(source: CorpusSource) -> Self {
        Self {
            source,
            min_side: None,
            max_side: None,
        }
    }

    /// Parses `synthetic:<seed>,<count>` or a directory path.
    pub fn parse(s: &str) -> Result<Self> {
        let Some(rest) = s.strip_prefix("synthetic:") else {
            return Ok(Self::new(CorpusSource::Directory(PathBuf::from(s))));
        };
        let bad = || Error::InvalidCorpus(format!("expected synthetic:<seed>,<count>, got {s:?}"));
        let (seed, count) = rest.split_once(',').ok_or_else(bad)?;
        Ok(Self::new(CorpusSource::Synthetic {
            seed: seed.trim().parse().map_err(|_| bad())?,
            count: count.trim().parse().map_err(|_| bad())?,
        }))
    }

    fn admits(&self, img: &GrayImage) -> bool {
        let (w, h) = img.dimensions();
        self.min_side.is_none_or(|m| w.min(h) >= m) && self.max_side.is_none_or(|m| w.max(h) <= m)
    }

    /// Enumerates the corpus in deterministic order: lexicographic by file
    /// name, or generation order. Unreadable files are kept as failed entries.
    pub fn load(&self) -> Result<Vec<CorpusEntry>> {
        let entries: Vec<CorpusEntry> = match &self.source {
            CorpusSource::Synthetic { seed, count } => generate_synthetic_corpus(*seed, *count)
                .into_iter()
                .map(|(id, img)| CorpusEntry {
                    id,
                    image: Ok(img),
                })
                .collect(),
            CorpusSource::Directory(dir) => list_images(dir)?
                .into_iter()
                .map(|path| CorpusEntry {
                    id: path
                        .file_name()
                        .map(|n| n.to_string_lossy().into_owned())
                        .unwrap_or_default(),
                    image: read_image(&path).map_err(|e| e.to_string()),
                })
                .collect(),
        };
        Ok(entries
            .into_iter()
            .filter(|e| e.image.as_ref().map_or(true, |img| self.admits(img)))
            .collect())
    }
}

/// One corpus image, or the reason it could not be read.
#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub id: String,
    pub image: Result<GrayImage, String>,
}

fn list_images(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut paths = Vec::new();
    for entry in fs::read_dir(dir)? {
        let path = entry?.path();
        let is_image = path
            .extension()
            .and_then(|e| e.to_str())
            .is_some_and(|e| e.eq_ignore_ascii_case("pgm") || e.eq_ignore_ascii_case("png"));
        if is_image && path.is_file() {
            paths.push(path);
        }
    }
    paths.sort_by(|a, b| a.file_name().cmp(&b.file_name()));
    Ok(paths)
}

/// The image families the generator cycles through.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SyntheticKind {
    Unimodal,
    /// Dark background with a mid-gray elliptical "organ".
    Bimodal,
    /// Bimodal plus small bright lesions.
    Trimodal,
    LowDynamicRange,
    Ramp,
}

impl SyntheticKind {
    pub const ALL: [SyntheticKind; 5] = [
        SyntheticKind::Unimodal,
        SyntheticKind::Bimodal,
        SyntheticKind::Trimodal,
        SyntheticKind::LowDynamicRange,
        SyntheticKind::Ramp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SyntheticKind::Unimodal => "unimodal",
            SyntheticKind::Bimodal => "bimodal",
            SyntheticKind::Trimodal => "trimodal",
            SyntheticKind::LowDynamicRange => "lowdr",
            SyntheticKind::Ramp => "ramp",
        }
    }
}

struct Ellipse {
    cx: f64,
    cy: f64,
    rx: f64,
    ry: f64,
}

impl Ellipse {
    fn random(rng: &mut ChaCha8Rng, center: (f64, f64), radius: (f64, f64)) -> Self {
        Self {
            cx: rng.random_range(center.0..center.1),
            cy: rng.random_range(center.0..center.1),
            rx: rng.random_range(radius.0..radius.1),
            ry: rng.random_range(radius.0..radius.1),
        }
    }

    fn contains(&self, x: f64, y: f64) -> bool {
        let dx = (x - self.cx) / self.rx;
        let dy = (y - self.cy) / self.ry;
        dx * dx + dy * dy <= 1.0
    }
}

fn draw(kind: SyntheticKind, rng: &mut ChaCha8Rng) -> GrayImage {
    let side = SYNTHETIC_SIDE as f64;
    let noise_sd = match kind {
        SyntheticKind::LowDynamicRange => rng.random_range(1.5..3.0),
        _ => rng.random_range(3.0..8.0),
    };
    let noise = Normal::new(0.0, noise_sd).expect("positive deviation");

    let base: Box<dyn Fn(f64, f64) -> f64> = match kind {
        SyntheticKind::Unimodal => {
            let level = rng.random_range(70.0..180.0);
            let amp = rng.random_range(10.0..30.0);
            let freq = rng.random_range(1.0..4.0) * std::f64::consts::TAU / side;
            Box::new(move |x, y| level + amp * (freq * x).sin() * (freq * y).cos())
        }
        SyntheticKind::Bimodal | SyntheticKind::Trimodal => {
            let background = rng.random_range(5.0..30.0);
            let tissue = rng.random_range(80.0..150.0);
            let shading = rng.random_range(0.0..30.0);
            let head = Ellipse::random(rng, (side * 0.4, side * 0.6), (side * 0.25, side * 0.42));
            let lesions: Vec<(Ellipse, f64)> = if kind == SyntheticKind::Trimodal {
                (0..rng.random_range(1..4))
                    .map(|_| {
                        (
                            Ellipse::random(rng, (side * 0.35, side * 0.65), (6.0, side * 0.1)),
                            rng.random_range(185.0..235.0),
                        )
                    })
                    .collect()
            } else {
                Vec::new()
            };
            Box::new(move |x, y| {
                if !head.contains(x, y) {
                    return background;
                }
                if let Some((_, level)) = lesions.iter().find(|(e, _)| e.contains(x, y)) {
                    return *level;
                }
                tissue + shading * (y / side - 0.5)
            })
        }
        SyntheticKind::LowDynamicRange => {
            let center = rng.random_range(60.0..180.0);
            let amp = rng.random_range(5.0..15.0);
            Box::new(move |x, y| center + amp * ((x + y) / (2.0 * side) - 0.5))
        }
        SyntheticKind::Ramp => {
            let lo = rng.random_range(0.0..60.0);
            let hi = rng.random_range(190.0..255.0);
            let diagonal = rng.random_bool(0.5);
            Box::new(move |x, y| {
                let t = if diagonal { (x + y) / (2.0 * side) } else { x / side };
                lo + (hi - lo) * t
            })
        }
    };

    GrayImage::from_fn(SYNTHETIC_SIDE, SYNTHETIC_SIDE, |x, y| {
        let v = base(x as f64, y as f64) + noise.sample(rng);
        v.round().clamp(0.0, 255.0) as u8
    })
    .expect("fixed dimensions")
}

/// Generates image `index` of the synthetic corpus for `seed`.
///
/// Each index draws from its own ChaCha stream, so image `i` does not depend
/// on how many images are generated. Every image has at least three occupied
/// gray levels.
pub fn synthetic_image(seed: u64, index: usize) -> (String, GrayImage) {
    let kind = SyntheticKind::ALL[index % SyntheticKind::ALL.len()];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    let img = loop {
        let img = draw(kind, &mut rng);
        if compute_histogram(&img).occupied_levels() >= 3 {
            break img;
        }
    };
    (format!("synth_{index:04}_{}", kind.name()), img)
}

/// The first `count` synthetic images for `seed`, in index order.
pub fn generate_synthetic_corpus(seed: u64, count: usize) -> Vec<(String, GrayImage)> {
    (0..count).map(|i| synthetic_image(seed, i)).collect()
}

/// Writes the synthetic corpus into `dir` as `<id>.pgm`, returning the paths.
pub fn write_synthetic_corpus(seed: u64, count: usize, dir: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir)?;
    generate_synthetic_corpus(seed, count)
        .into_iter()
        .map(|(id, img)| {
            let path = dir.join(format!("{id}.pgm"));
            write_image(&img, &path)?;
            Ok(path)
        })
        .collect()
}
