//! Batch evaluation: every selected method on every corpus image.

use rayon::prelude::*;

use crate::corpus::CorpusEntry;
use crate::error::{Error, Result};
use crate::methods::{enhance, MethodId};
use crate::metrics::{evaluate, DEFAULT_EME_BLOCK};
use crate::report::{sort_rows, ReportRow};

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub methods: Vec<MethodId>,
    pub eme_block: u32,
    /// Worker threads; `None` uses the global rayon pool.
    pub jobs: Option<usize>,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            methods: MethodId::ALL.to_vec(),
            eme_block: DEFAULT_EME_BLOCK,
            jobs: None,
        }
    }
}

/// Parses `all` or a comma-separated list of method names.
pub fn parse_methods(list: &str) -> Result<Vec<MethodId>> {
    if list.trim().eq_ignore_ascii_case("all") {
        return Ok(MethodId::ALL.to_vec());
    }
    let mut methods = Vec::new();
    for name in list.split(',').filter(|s| !s.trim().is_empty()) {
        let m: MethodId = name.parse()?;
        if !methods.contains(&m) {
            methods.push(m);
        }
    }
    if methods.is_empty() {
        return Err(Error::UnknownMethod {
            name: list.to_string(),
            valid: MethodId::valid_names(),
        });
    }
    Ok(methods)
}

fn run_one(entry: &CorpusEntry, method: MethodId, eme_block: u32) -> ReportRow {
    let mut row = ReportRow {
        image_id: entry.id.clone(),
        method,
        metrics: None,
        thresholds: Vec::new(),
        runtime_ms: 0.0,
        error: None,
    };
    match &entry.image {
        Err(e) => row.error = Some(e.clone()),
        Ok(img) => {
            let result = enhance(img, method);
            row.thresholds = result.thresholds;
            row.runtime_ms = result.runtime.as_secs_f64() * 1e3;
            match evaluate(img, &result.output, eme_block) {
                Ok(m) => row.metrics = Some(m),
                Err(e) => row.error = Some(e.to_string()),
            }
        }
    }
    row
}

/// Runs every configured method on every entry. Rows come back in canonical
/// (image id, method name) order regardless of scheduling. Failed images
/// yield rows with `error` set instead of aborting the run.
pub fn run_bench(entries: &[CorpusEntry], config: &BenchConfig) -> Result<Vec<ReportRow>> {
    if config.eme_block == 0 {
        return Err(Error::InvalidBlock(0));
    }
    let work = || -> Vec<ReportRow> {
        entries
            .par_iter()
            .flat_map_iter(|entry| {
                config
                    .methods
                    .iter()
                    .map(move |&m| run_one(entry, m, config.eme_block))
            })
            .collect()
    };
    let mut rows = match config.jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::Io(std::io::Error::other(e)))?
            .install(work),
        None => work(),
    };
    sort_rows(&mut rows);
    Ok(rows)
}
