use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use bihisteq::bench::{parse_methods, run_bench, BenchConfig};
use bihisteq::corpus::{write_synthetic_corpus, CorpusSpec};
use bihisteq::imageio::{read_image, write_image};
use bihisteq::metrics::{evaluate, DEFAULT_EME_BLOCK};
use bihisteq::report::{write_metrics_csv, write_reports};
use bihisteq::{enhance, MethodId};
use clap::{Parser, Subcommand};

/// Brightness-preserving histogram equalization toolkit.
#[derive(Debug, Parser)]
#[command(name = "bihisteq", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Enhance one image.
    Enhance {
        /// Method name (itsbpl, msbpl, mvsbpl, he, bbhe, dsihe, mmbebhe, bhepl, rlbhe).
        #[arg(long)]
        method: MethodId,
        /// Input PGM (P2/P5) or 8-bit grayscale PNG.
        #[arg(long)]
        input: PathBuf,
        /// Output path; always written as binary PGM.
        #[arg(long)]
        output: PathBuf,
        /// Write the 256-entry transform as CSV (`input,output`).
        #[arg(long)]
        dump_lut: Option<PathBuf>,
        /// Print quality metrics for (input, output) as CSV.
        #[arg(long)]
        metrics: bool,
        #[arg(long, default_value_t = DEFAULT_EME_BLOCK)]
        eme_block: u32,
    },
    /// Run methods over a corpus and write CSV reports.
    Bench {
        /// Directory of images, or `synthetic:<seed>,<count>`.
        #[arg(long)]
        corpus: String,
        /// Comma-separated method names, or `all`.
        #[arg(long, default_value = "all")]
        methods: String,
        /// Long-form report path; per-metric pivots are written beside it.
        #[arg(long)]
        report: PathBuf,
        #[arg(long, default_value_t = DEFAULT_EME_BLOCK)]
        eme_block: u32,
        /// Worker threads (defaults to one per core).
        #[arg(long)]
        jobs: Option<usize>,
        /// Skip images whose shorter side is below this.
        #[arg(long)]
        min_side: Option<u32>,
        /// Skip images whose longer side exceeds this.
        #[arg(long)]
        max_side: Option<u32>,
    },
    /// Score an enhanced image against its original.
    Metrics {
        /// The enhanced image.
        #[arg(long)]
        input: PathBuf,
        /// The original image.
        #[arg(long)]
        reference: PathBuf,
        #[arg(long, default_value_t = DEFAULT_EME_BLOCK)]
        eme_block: u32,
    },
    /// Write a synthetic test corpus as PGM files.
    GenCorpus {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        count: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Enhance {
            method,
            input,
            output,
            dump_lut,
            metrics,
            eme_block,
        } => {
            let img = read_image(&input).with_context(|| format!("reading {}", input.display()))?;
            let result = enhance(&img, method);
            write_image(&result.output, &output)
                .with_context(|| format!("writing {}", output.display()))?;
            if let Some(path) = dump_lut {
                let mut text = String::from("input,output\n");
                for (i, v) in result.lut.map().iter().enumerate() {
                    text.push_str(&format!("{i},{v}\n"));
                }
                fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
            }
            if metrics {
                let report = evaluate(&img, &result.output, eme_block)?;
                write_metrics_csv(&report, io::stdout().lock())?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Bench {
            corpus,
            methods,
            report,
            eme_block,
            jobs,
            min_side,
            max_side,
        } => {
            let methods = match parse_methods(&methods) {
                Ok(m) => m,
                Err(e) => {
                    eprintln!("error: {e}");
                    return Ok(ExitCode::from(2));
                }
            };
            let mut spec = CorpusSpec::parse(&corpus)?;
            spec.min_side = min_side;
            spec.max_side = max_side;
            let entries = spec
                .load()
                .with_context(|| format!("loading corpus {corpus}"))?;
            if entries.is_empty() {
                bail!("no images found");
            }
            let config = BenchConfig {
                methods: methods.clone(),
                eme_block,
                jobs,
            };
            let rows = run_bench(&entries, &config)?;
            if let Some(dir) = report.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir)?;
            }
            let written = write_reports(&rows, &methods, &report)?;
            let failed = rows.iter().filter(|r| r.error.is_some()).count();
            eprintln!(
                "{} rows ({} images x {} methods), {failed} failed; wrote {} files",
                rows.len(),
                entries.len(),
                methods.len(),
                written.len()
            );
            for row in rows.iter().filter(|r| r.error.is_some()) {
                eprintln!(
                    "  {} / {}: {}",
                    row.image_id,
                    row.method,
                    row.error.as_deref().unwrap_or_default()
                );
            }
            Ok(if failed > 0 {
                ExitCode::FAILURE
            } else {
                ExitCode::SUCCESS
            })
        }
        Command::Metrics {
            input,
            reference,
            eme_block,
        } => {
            let enhanced =
                read_image(&input).with_context(|| format!("reading {}", input.display()))?;
            let original = read_image(&reference)
                .with_context(|| format!("reading {}", reference.display()))?;
            let report = evaluate(&original, &enhanced, eme_block)?;
            write_metrics_csv(&report, io::stdout().lock())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::GenCorpus { seed, count, out } => {
            let paths = write_synthetic_corpus(seed, count, &out)
                .with_context(|| format!("writing corpus to {}", out.display()))?;
            let mut stdout = io::stdout().lock();
            for p in paths {
                writeln!(stdout, "{}", p.display())?;
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    // Unknown methods and other usage errors exit with clap's status 2.
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
