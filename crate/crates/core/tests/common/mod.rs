//! Brute-force oracles and random fixtures shared by the integration tests.
//!
//! Every oracle recomputes its quantity from scratch for each candidate,
//! without the prefix sums or histogram shortcuts used by the library.

#![allow(dead_code)]

use bihisteq::{GrayImage, Histogram, LEVELS};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Between-class variance of the classes delimited by `bounds`
/// (inclusive upper ends, the last one 255), summed bin by bin.
pub fn between_class_variance(counts: &[u64; LEVELS], bounds: &[usize]) -> f64 {
    let total: u64 = counts.iter().sum();
    let level_sum: u64 = counts.iter().enumerate().map(|(k, &n)| k as u64 * n).sum();
    let mean = level_sum as f64 / total as f64;
    let mut lo = 0;
    let mut variance = 0.0;
    for &hi in bounds {
        let mut n = 0u64;
        let mut s = 0u64;
        for (k, &c) in counts.iter().enumerate().take(hi + 1).skip(lo) {
            n += c;
            s += k as u64 * c;
        }
        if n > 0 {
            let w = n as f64 / total as f64;
            let m = s as f64 / n as f64;
            variance += w * (m - mean) * (m - mean);
        }
        lo = hi + 1;
    }
    variance
}

/// Exhaustive single-threshold Otsu scan; first maximizer wins.
pub fn otsu_oracle(h: &Histogram) -> (u8, f64) {
    let mut best = (0u8, f64::NEG_INFINITY);
    for t in 0..=254usize {
        let v = between_class_variance(h.counts(), &[t, 255]);
        if v > best.1 {
            best = (t as u8, v);
        }
    }
    best
}

/// Exhaustive two-threshold Otsu scan; lexicographically first maximizer wins.
pub fn otsu_pair_oracle(h: &Histogram) -> ((u8, u8), f64) {
    let mut best = ((0u8, 1u8), f64::NEG_INFINITY);
    for t1 in 0..254usize {
        for t2 in t1 + 1..=254usize {
            let v = between_class_variance(h.counts(), &[t1, t2, 255]);
            if v > best.1 {
                best = ((t1 as u8, t2 as u8), v);
            }
        }
    }
    best
}

/// A random histogram with between `min_levels` and 256 occupied levels.
pub fn random_histogram(rng: &mut ChaCha8Rng, min_levels: usize) -> Histogram {
    let mut counts = [0u64; LEVELS];
    let occupied = rng.random_range(min_levels..=LEVELS);
    let mut placed = 0;
    while placed < occupied {
        let k = rng.random_range(0..LEVELS);
        if counts[k] == 0 {
            counts[k] = rng.random_range(1..2000);
            placed += 1;
        }
    }
    Histogram::from_counts(counts)
}

/// A random image of random size with independently drawn pixels.
pub fn random_image(rng: &mut ChaCha8Rng, max_side: u32) -> GrayImage {
    let w = rng.random_range(1..=max_side);
    let h = rng.random_range(1..=max_side);
    let pixels = (0..w * h).map(|_| rng.random()).collect();
    GrayImage::new(w, h, pixels).unwrap()
}

/// A random sub-range and counts with at least one non-zero bin.
pub fn random_sub_counts(rng: &mut ChaCha8Rng) -> (u8, u8, Vec<u64>) {
    let lo: u8 = rng.random();
    let hi: u8 = rng.random_range(lo..=255);
    let bins = (hi - lo) as usize + 1;
    let sparse = rng.random_bool(0.5);
    let mut counts: Vec<u64> = (0..bins)
        .map(|_| {
            if sparse && rng.random_bool(0.8) {
                0
            } else {
                rng.random_range(0..5000)
            }
        })
        .collect();
    let k = rng.random_range(0..bins);
    counts[k] += 1;
    (lo, hi, counts)
}

pub fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        (values[n / 2 - 1] + values[n / 2]) / 2.0
    }
}
