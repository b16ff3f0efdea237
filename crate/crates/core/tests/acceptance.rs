//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits non-zero if any criterion fails.

mod common;

use std::fs;
use std::time::{Duration, Instant};

use bihisteq::bench::{run_bench, BenchConfig};
use bihisteq::corpus::{generate_synthetic_corpus, CorpusSpec};
use bihisteq::equalize::{build_lut, clip, clipped_cdf, plateau_limit};
use bihisteq::histogram::split;
use bihisteq::imageio::{read_image, write_image};
use bihisteq::metrics::{self, DEFAULT_EME_BLOCK};
use bihisteq::report::{write_reports, REPORT_HEADER};
use bihisteq::segmentation::{otsu_threshold, otsu_two_thresholds};
use bihisteq::{enhance, EnhanceResult, GrayImage, MethodId, Partition, SubHistogram};
use rand::Rng;

use common::*;

const CORPUS_SEED: u64 = 1;
const CORPUS_SIZE: usize = 50;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

struct Corpus {
    images: Vec<(String, GrayImage)>,
    /// `results[i][j]`: image `i` under `MethodId::ALL[j]`.
    results: Vec<Vec<EnhanceResult>>,
}

impl Corpus {
    fn load() -> Self {
        let images = generate_synthetic_corpus(CORPUS_SEED, CORPUS_SIZE);
        let results = images
            .iter()
            .map(|(_, img)| MethodId::ALL.iter().map(|&m| enhance(img, m)).collect())
            .collect();
        Self { images, results }
    }

    fn result(&self, image: usize, m: MethodId) -> &EnhanceResult {
        let j = MethodId::ALL.iter().position(|&x| x == m).unwrap();
        &self.results[image][j]
    }
}

fn ac1_otsu_oracle() -> Outcome {
    let start = Instant::now();
    let mut rng = rng(0xA1);
    let mut single_mismatch = 0;
    for _ in 0..200 {
        let h = random_histogram(&mut rng, 2);
        let (t, _) = otsu_oracle(&h);
        if otsu_threshold(&h).unwrap().thresholds != [t] {
            single_mismatch += 1;
        }
    }
    let mut pair_mismatch = 0;
    for _ in 0..50 {
        let h = random_histogram(&mut rng, 3);
        let ((t1, t2), _) = otsu_pair_oracle(&h);
        if otsu_two_thresholds(&h).unwrap().thresholds != [t1, t2] {
            pair_mismatch += 1;
        }
    }
    let elapsed = start.elapsed();
    outcome(
        single_mismatch == 0 && pair_mismatch == 0 && elapsed < Duration::from_secs(10),
        format!(
            "single mismatches {single_mismatch}/200, pair mismatches {pair_mismatch}/50, {:.2} s (< 10 s)",
            elapsed.as_secs_f64()
        ),
    )
}

fn ac2_search_dominance(c: &Corpus) -> Outcome {
    let mut violations = 0;
    let mut worst_gap = f64::NEG_INFINITY;
    for (i, (_, img)) in c.images.iter().enumerate() {
        let a = |m| metrics::ambe(img, &c.result(i, m).output).unwrap();
        for (searched, fixed) in [
            (MethodId::Itsbpl, MethodId::Msbpl),
            (MethodId::Mmbebhe, MethodId::Bbhe),
        ] {
            let gap = a(searched) - a(fixed);
            worst_gap = worst_gap.max(gap);
            if gap > 1e-9 {
                violations += 1;
            }
        }
    }
    outcome(
        violations == 0,
        format!("{violations} violations; max AMBE(searched) - AMBE(fixed) = {worst_gap:.3e}"),
    )
}

fn ac3_range_containment(c: &Corpus) -> Outcome {
    let mut violations = 0usize;
    let mut pixels = 0usize;
    for (i, (_, img)) in c.images.iter().enumerate() {
        for &m in &MethodId::ALL {
            let r = c.result(i, m);
            let p = r.partition();
            if m == MethodId::He {
                assert_eq!(p, Partition::full());
            }
            for (&a, &b) in img.pixels().iter().zip(r.output.pixels()) {
                pixels += 1;
                if !p.range_of(a).contains(&b) {
                    violations += 1;
                }
            }
        }
    }
    outcome(violations == 0, format!("{violations} violations over {pixels} pixels"))
}

fn ac4_plateau_identity() -> Outcome {
    let mut rng = rng(0xA4);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let (lo, hi, counts) = random_sub_counts(&mut rng);
        let s = SubHistogram::new(lo, hi, counts).unwrap();
        let t = plateau_limit(&s).unwrap();
        worst = worst.max((t.value() * s.bins() as f64 - 1.0).abs());
    }
    outcome(worst <= 1e-12, format!("max |T * bins - 1| = {worst:.3e} (<= 1e-12)"))
}

fn ac5_metric_identities(c: &Corpus) -> Outcome {
    let a = &c.images[0].1;
    let mut failures = Vec::new();
    let mut check = |name: &str, ok: bool| {
        if !ok {
            failures.push(name.to_string());
        }
    };
    check("ambe(a,a)=0", metrics::ambe(a, a).unwrap() == 0.0);
    check("ssim(a,a)=1", (metrics::ssim(a, a).unwrap() - 1.0).abs() <= 1e-9);
    check("uiqi(a,a)=1", (metrics::uiqi(a, a).unwrap() - 1.0).abs() <= 1e-9);
    check("psnr(a,a)=inf", metrics::psnr(a, a).unwrap() == f64::INFINITY);
    let uniform = GrayImage::from_fn(256, 256, |x, _| x as u8).unwrap();
    check("entropy(uniform)=8", (metrics::entropy(&uniform) - 8.0).abs() <= 1e-9);
    check("sd(constant)=0", metrics::sd(&GrayImage::constant(64, 64, 90).unwrap()) == 0.0);
    check(
        "eme_error(a,a)=0",
        metrics::eme_error(a, a, DEFAULT_EME_BLOCK).unwrap() == 0.0,
    );
    outcome(
        failures.is_empty(),
        if failures.is_empty() {
            "all 7 identities hold".to_string()
        } else {
            format!("failed: {}", failures.join(", "))
        },
    )
}

fn ac6_cdf_contract() -> Outcome {
    let mut rng = rng(0xA6);
    let mut cdf_failures = 0;
    let mut lut_failures = 0;
    let mut worst_end: f64 = 0.0;
    for _ in 0..1000 {
        let (lo, hi, counts) = random_sub_counts(&mut rng);
        let s = SubHistogram::new(lo, hi, counts).unwrap();
        let cdf = clipped_cdf(&clip(&s, plateau_limit(&s).unwrap()).unwrap()).unwrap();
        let v = cdf.values();
        let end = (v[v.len() - 1] - 1.0).abs();
        worst_end = worst_end.max(end);
        if v.windows(2).any(|w| w[1] < w[0]) || end > 1e-9 {
            cdf_failures += 1;
        }

        // A full LUT over a random one- or two-threshold partition.
        let mut thresholds: Vec<u8> = (0..rng.random_range(1..=2))
            .map(|_| rng.random_range(0..=254))
            .collect();
        thresholds.sort_unstable();
        thresholds.dedup();
        let p = Partition::from_thresholds(&thresholds).unwrap();
        let counts: [u64; 256] = std::array::from_fn(|_| {
            if rng.random_bool(0.3) {
                0
            } else {
                rng.random_range(0..1000)
            }
        });
        let cdfs: Vec<_> = split(&bihisteq::Histogram::from_counts(counts), &p)
            .iter()
            .map(|sub| {
                (!sub.is_degenerate())
                    .then(|| clipped_cdf(&clip(sub, plateau_limit(sub).unwrap()).unwrap()).unwrap())
            })
            .collect();
        let lut = build_lut(&cdfs, &p).unwrap();
        for &(lo, hi) in p.ranges() {
            let map = &lut.map()[lo as usize..=hi as usize];
            if map.windows(2).any(|w| w[1] < w[0]) || map.iter().any(|&v| v < lo || v > hi) {
                lut_failures += 1;
            }
        }
    }
    outcome(
        cdf_failures == 0 && lut_failures == 0,
        format!(
            "cdf failures {cdf_failures}/1000 (max |end - 1| = {worst_end:.3e}), lut failures {lut_failures}"
        ),
    )
}

fn ac7_directional(c: &Corpus) -> Outcome {
    let median_of = |f: &dyn Fn(usize) -> f64| {
        let mut v: Vec<f64> = (0..c.images.len()).map(f).collect();
        median(&mut v)
    };
    let ambe = |m: MethodId| {
        median_of(&|i| metrics::ambe(&c.images[i].1, &c.result(i, m).output).unwrap())
    };
    let entropy_drop = |m: MethodId| {
        median_of(&|i| {
            metrics::entropy(&c.images[i].1) - metrics::entropy(&c.result(i, m).output)
        })
    };
    let he_ambe = ambe(MethodId::He);
    let mut pass = true;
    let mut parts = vec![format!(
        "HE median AMBE {he_ambe:.3}, entropy drop {:.3}",
        entropy_drop(MethodId::He)
    )];
    for m in MethodId::PROPOSED {
        let a = ambe(m);
        let drop = entropy_drop(m);
        pass &= a < he_ambe;
        parts.push(format!(
            "{m} AMBE {a:.3}, entropy drop {drop:.3} ({})",
            if drop.abs() <= 0.5 { "within 0.5 bits" } else { "beyond 0.5 bits, reported only" }
        ));
    }
    outcome(pass, parts.join("; "))
}

fn ac8_psnr_band(c: &Corpus) -> Outcome {
    let mut rows = 0;
    let mut in_band = 0;
    for (i, (_, img)) in c.images.iter().enumerate() {
        for m in MethodId::PROPOSED {
            rows += 1;
            let p = metrics::psnr(img, &c.result(i, m).output).unwrap();
            if p.is_finite() && p >= 20.0 {
                in_band += 1;
            }
        }
    }
    let share = in_band as f64 / rows as f64;
    outcome(
        share >= 0.5,
        format!(
            "{in_band}/{rows} = {:.1}% rows with finite PSNR >= 20 dB (target 60%: {}; hard floor 50%)",
            share * 100.0,
            if share >= 0.6 { "met" } else { "missed" }
        ),
    )
}

fn ac9_performance(c: &Corpus) -> Outcome {
    let scans = [MethodId::Itsbpl, MethodId::Mmbebhe];
    let mut slowest_fast = (Duration::ZERO, MethodId::He);
    let mut slowest_scan = (Duration::ZERO, MethodId::Itsbpl);
    for (_, img) in &c.images {
        for &m in &MethodId::ALL {
            let start = Instant::now();
            let _ = enhance(img, m);
            let t = start.elapsed();
            let slot = if scans.contains(&m) {
                &mut slowest_scan
            } else {
                &mut slowest_fast
            };
            if t > slot.0 {
                *slot = (t, m);
            }
        }
    }
    let entries = CorpusSpec::parse(&format!("synthetic:{CORPUS_SEED},{CORPUS_SIZE}"))
        .unwrap()
        .load()
        .unwrap();
    let start = Instant::now();
    let rows = run_bench(&entries, &BenchConfig::default()).unwrap();
    let bench = start.elapsed();
    assert_eq!(rows.len(), CORPUS_SIZE * 9);
    outcome(
        slowest_fast.0 < Duration::from_millis(50)
            && slowest_scan.0 < Duration::from_secs(2)
            && bench < Duration::from_secs(120),
        format!(
            "slowest single-threshold {:.2} ms ({}, < 50 ms); slowest scan {:.2} ms ({}, < 2 s); bench 50x9 {:.2} s (< 120 s)",
            slowest_fast.0.as_secs_f64() * 1e3,
            slowest_fast.1,
            slowest_scan.0.as_secs_f64() * 1e3,
            slowest_scan.1,
            bench.as_secs_f64()
        ),
    )
}

/// Report text with the runtime column blanked.
fn without_runtime(text: &str) -> String {
    let col = REPORT_HEADER.iter().position(|&h| h == "runtime_ms").unwrap();
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .from_reader(text.as_bytes());
    reader
        .records()
        .map(|r| {
            let r = r.unwrap();
            r.iter()
                .enumerate()
                .map(|(i, cell)| if i == col { "" } else { cell })
                .collect::<Vec<_>>()
                .join("\u{1f}")
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn ac10_io_exactness() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = rng(0xA10);
    let mut mismatches = 0;
    for i in 0..100 {
        let img = random_image(&mut rng, 96);
        let path = dir.path().join(format!("{i}.pgm"));
        write_image(&img, &path).unwrap();
        if read_image(&path).unwrap() != img {
            mismatches += 1;
        }
    }

    let spec = CorpusSpec::parse("synthetic:1,12").unwrap();
    let entries = spec.load().unwrap();
    let run = |name: &str| {
        let rows = run_bench(&entries, &BenchConfig::default()).unwrap();
        let out = dir.path().join(name);
        fs::create_dir_all(&out).unwrap();
        write_reports(&rows, &MethodId::ALL, &out.join("report.csv"))
            .unwrap()
            .into_iter()
            .map(|p| fs::read_to_string(p).unwrap())
            .collect::<Vec<_>>()
    };
    let (first, second) = (run("a"), run("b"));
    let report_same = without_runtime(&first[0]) == without_runtime(&second[0]);
    let pivots_same = first[1..] == second[1..];
    outcome(
        mismatches == 0 && report_same && pivots_same,
        format!(
            "PGM round-trip mismatches {mismatches}/100; report identical modulo runtime: {report_same}; pivots byte-identical: {pivots_same}"
        ),
    )
}

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn main() {
    let corpus = Corpus::load();
    let criteria: Vec<Criterion<'_>> = vec![
        ("AC1 Otsu oracle equivalence", Box::new(ac1_otsu_oracle)),
        ("AC2 search-set dominance", Box::new(|| ac2_search_dominance(&corpus))),
        ("AC3 range containment", Box::new(|| ac3_range_containment(&corpus))),
        ("AC4 plateau identity", Box::new(ac4_plateau_identity)),
        ("AC5 metric identities", Box::new(|| ac5_metric_identities(&corpus))),
        ("AC6 clipped-CDF contract", Box::new(ac6_cdf_contract)),
        ("AC7 directional enhancement", Box::new(|| ac7_directional(&corpus))),
        ("AC8 PSNR band", Box::new(|| ac8_psnr_band(&corpus))),
        ("AC9 performance", Box::new(|| ac9_performance(&corpus))),
        ("AC10 I/O bit-exactness", Box::new(ac10_io_exactness)),
    ];
    let mut failed = 0;
    for (name, run) in &criteria {
        let o = run();
        if !o.pass {
            failed += 1;
        }
        println!("[{}] {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
