//! Parallel batch alignment.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::aligner::{align_any, AlignerConfig, AlignmentResult};
use crate::dc::{Counters, Workspace};
use crate::error::{Error, Result};
use crate::harness::io::SeqPairRecord;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairResult {
    pub id: String,
    /// `None` when single-window mode found no alignment within `k`.
    pub alignment: Option<AlignmentResult>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct BatchStats {
    pub pairs: usize,
    pub not_found: usize,
    pub windows: u64,
    pub counters: Counters,
    /// Wall-clock seconds of the alignment phase only.
    pub seconds: f64,
    pub pairs_per_s: f64,
}

#[derive(Clone, Debug)]
pub struct BatchReport {
    pub results: Vec<PairResult>,
    pub stats: BatchStats,
}

fn tag(id: &str, e: Error) -> Error {
    match e {
        Error::Internal(msg) => Error::Internal(format!("pair {id}: {msg}")),
        Error::OutOfStoredRegion(msg) => Error::OutOfStoredRegion(format!("pair {id}: {msg}")),
        Error::Input(msg) => Error::Input(format!("pair {id}: {msg}")),
        Error::Config(msg) => Error::Config(format!("pair {id}: {msg}")),
        other => other,
    }
}

/// Aligns every pair on a pool of `threads` workers, one workspace each.
/// Results keep input order; the first failing pair aborts the batch.
pub fn run_batch(
    pairs: &[SeqPairRecord],
    config: &AlignerConfig,
    threads: usize,
) -> Result<BatchReport> {
    if threads == 0 {
        return Err(Error::Config("threads must be at least 1".into()));
    }
    config.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;

    let start = Instant::now();
    let results: Vec<PairResult> = pool.install(|| {
        pairs
            .par_iter()
            .map_init(Workspace::new, |ws, p| {
                align_any(&p.text, &p.pattern, config, ws)
                    .map(|alignment| PairResult {
                        id: p.id.clone(),
                        alignment,
                    })
                    .map_err(|e| tag(&p.id, e))
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let seconds = start.elapsed().as_secs_f64();

    let mut stats = BatchStats {
        pairs: results.len(),
        seconds,
        pairs_per_s: if seconds > 0.0 {
            results.len() as f64 / seconds
        } else {
            0.0
        },
        ..Default::default()
    };
    for r in &results {
        match &r.alignment {
            Some(a) => {
                stats.windows += a.windows as u64;
                stats.counters += a.counters;
            }
            None => stats.not_found += 1,
        }
    }
    Ok(BatchReport { results, stats })
}
