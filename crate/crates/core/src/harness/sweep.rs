//! Window size / overlap accuracy sweeps.
//!
//! For every `(W, O, improvements)` combination the dataset is aligned and
//! the per-pair affine scores are summarized by nearest-rank quantiles
//! (worst scores first), next to the same quantiles of the exact oracle.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::aligner::AlignerConfig;
use crate::cigar::Cigar;
use crate::error::{Error, Result};
use crate::harness::batch::run_batch;
use crate::harness::io::SeqPairRecord;
use crate::oracle::{correctly_aligned_bases, global_align, score_cigar, ScoringParams};

pub const CSV_HEADER: &str =
    "W,O,sene,dent,et,q500,q100,q010,q001,frac_optimal,mean_rows_frac,stored_bits_ratio,pairs_per_s";

/// How the overlap is derived from the window size.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OverlapRule {
    /// `O = W / 2 + 1`
    HalfPlusOne,
    Fixed(usize),
}

impl OverlapRule {
    pub fn overlap(&self, window: usize) -> usize {
        match *self {
            OverlapRule::HalfPlusOne => window / 2 + 1,
            OverlapRule::Fixed(o) => o,
        }
    }
}

impl std::str::FromStr for OverlapRule {
    type Err = Error;

    /// `half-plus-one` or `fixed:<O>`.
    fn from_str(s: &str) -> Result<Self> {
        if s == "half-plus-one" {
            return Ok(OverlapRule::HalfPlusOne);
        }
        s.strip_prefix("fixed:")
            .and_then(|o| o.parse().ok())
            .map(OverlapRule::Fixed)
            .ok_or_else(|| Error::Config(format!("unknown overlap rule {s:?}")))
    }
}

/// A setting of the three improvement flags.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Combo {
    pub sene: bool,
    pub dent: bool,
    pub et: bool,
}

impl Combo {
    pub const BASELINE: Combo = Combo {
        sene: false,
        dent: false,
        et: false,
    };

    pub fn all() -> Vec<Combo> {
        (0..8u8)
            .map(|b| Combo {
                sene: b & 4 != 0,
                dent: b & 2 != 0,
                et: b & 1 != 0,
            })
            .collect()
    }

    /// `all`, or a comma list of three-digit flags in `sene dent et` order, e.g. `000,111`.
    pub fn parse_list(s: &str) -> Result<Vec<Combo>> {
        if s == "all" {
            return Ok(Self::all());
        }
        s.split(',')
            .map(|c| {
                let b = c.trim().as_bytes();
                let flag = |x: u8| match x {
                    b'0' => Ok(false),
                    b'1' => Ok(true),
                    _ => Err(Error::Config(format!("bad combo {c:?}"))),
                };
                if b.len() != 3 {
                    return Err(Error::Config(format!("combo {c:?} needs three 0/1 digits")));
                }
                Ok(Combo {
                    sene: flag(b[0])?,
                    dent: flag(b[1])?,
                    et: flag(b[2])?,
                })
            })
            .collect()
    }

    pub fn apply(&self, config: AlignerConfig) -> AlignerConfig {
        config.with_improvements(self.sene, self.dent, self.et)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct QuantileScores {
    pub q500: i64,
    pub q100: i64,
    pub q010: i64,
    pub q001: i64,
}

/// Nearest-rank quantile of ascending `sorted`: the `ceil(q * N)`-th smallest.
pub fn nearest_rank(sorted: &[i64], q: f64) -> i64 {
    assert!(!sorted.is_empty(), "quantile of empty list");
    let rank = ((q * sorted.len() as f64).ceil() as usize).clamp(1, sorted.len());
    sorted[rank - 1]
}

impl QuantileScores {
    pub fn from_scores(scores: &[i64]) -> Self {
        if scores.is_empty() {
            return Self::default();
        }
        let mut sorted = scores.to_vec();
        sorted.sort_unstable();
        QuantileScores {
            q500: nearest_rank(&sorted, 0.5),
            q100: nearest_rank(&sorted, 0.1),
            q010: nearest_rank(&sorted, 0.01),
            q001: nearest_rank(&sorted, 0.001),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub window: usize,
    pub overlap: usize,
    pub combo: Combo,
    pub quantiles: QuantileScores,
    /// Pairs whose distance equals the exact edit distance.
    pub frac_optimal: f64,
    /// Computed DP rows over the `W + 1` available, averaged over windows.
    pub mean_rows_frac: f64,
    /// Baseline stored bits divided by this combination's stored bits.
    pub stored_bits_ratio: f64,
    pub pairs_per_s: f64,
    /// Fraction of pattern bases placed as in the ground truth, if every pair has one.
    pub frac_correct_bases: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleSummary {
    pub quantiles: QuantileScores,
    pub frac_correct_bases: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
    pub oracle: OracleSummary,
}

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub windows: Vec<usize>,
    pub overlap_rule: OverlapRule,
    pub combos: Vec<Combo>,
    pub scoring: ScoringParams,
    pub threads: usize,
}

struct OracleAlignment {
    distance: usize,
    score: i64,
    correct: Option<usize>,
}

fn correct_fraction(
    correct: impl Iterator<Item = Option<usize>>,
    pairs: &[SeqPairRecord],
) -> Result<Option<f64>> {
    let total: usize = pairs.iter().map(|p| p.pattern.len()).sum();
    let hits: Option<usize> = correct.sum();
    Ok(hits.map(|h| h as f64 / total.max(1) as f64))
}

fn truth_hits(cigar: &Cigar, pair: &SeqPairRecord) -> Result<Option<usize>> {
    pair.truth
        .as_ref()
        .map(|t| correctly_aligned_bases(cigar, t))
        .transpose()
}

pub fn sweep(pairs: &[SeqPairRecord], config: &SweepConfig) -> Result<SweepReport> {
    config.scoring.validate()?;
    if pairs.is_empty() {
        return Err(Error::Input("sweep needs at least one pair".into()));
    }
    let grid: Vec<AlignerConfig> = config
        .windows
        .iter()
        .map(|&w| AlignerConfig::windowed(w, config.overlap_rule.overlap(w)))
        .collect();
    for g in &grid {
        g.validate()?;
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads.max(1))
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    let oracle: Vec<OracleAlignment> = pool.install(|| {
        pairs
            .par_iter()
            .map(|p| {
                let (distance, cigar) = global_align(&p.text, &p.pattern)?;
                Ok(OracleAlignment {
                    distance,
                    score: score_cigar(&cigar, &config.scoring),
                    correct: truth_hits(&cigar, p)?,
                })
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let oracle_scores: Vec<i64> = oracle.iter().map(|o| o.score).collect();
    let oracle_summary = OracleSummary {
        quantiles: QuantileScores::from_scores(&oracle_scores),
        frac_correct_bases: correct_fraction(oracle.iter().map(|o| o.correct), pairs)?,
    };

    let mut rows = Vec::new();
    for base_cfg in grid {
        let baseline_bits = if config.combos.contains(&Combo::BASELINE) {
            None
        } else {
            let rep = run_batch(pairs, &Combo::BASELINE.apply(base_cfg), config.threads)?;
            Some(rep.stats.counters.stored_bits)
        };
        let mut pending = Vec::new();
        for combo in &config.combos {
            let rep = run_batch(pairs, &combo.apply(base_cfg), config.threads)?;
            let mut scores = Vec::with_capacity(pairs.len());
            let mut optimal = 0;
            let mut hits = Vec::with_capacity(pairs.len());
            for ((r, o), p) in rep.results.iter().zip(&oracle).zip(pairs) {
                let a = r.alignment.as_ref().ok_or_else(|| {
                    Error::Internal(format!("pair {}: windowed alignment missing", r.id))
                })?;
                scores.push(score_cigar(&a.cigar, &config.scoring));
                optimal += usize::from(a.distance == o.distance);
                hits.push(truth_hits(&a.cigar, p)?);
            }
            let s = &rep.stats;
            let rows_frac = if s.windows == 0 {
                0.0
            } else {
                s.counters.rows_computed as f64 / (s.windows as f64 * (base_cfg.window + 1) as f64)
            };
            pending.push((
                *combo,
                s.counters.stored_bits,
                SweepRow {
                    window: base_cfg.window,
                    overlap: base_cfg.overlap,
                    combo: *combo,
                    quantiles: QuantileScores::from_scores(&scores),
                    frac_optimal: optimal as f64 / pairs.len() as f64,
                    mean_rows_frac: rows_frac,
                    stored_bits_ratio: 0.0,
                    pairs_per_s: s.pairs_per_s,
                    frac_correct_bases: correct_fraction(hits.into_iter(), pairs)?,
                },
            ));
        }
        let baseline_bits = baseline_bits.unwrap_or_else(|| {
            pending
                .iter()
                .find(|(c, _, _)| *c == Combo::BASELINE)
                .map(|(_, bits, _)| *bits)
                .unwrap_or(0)
        });
        for (_, bits, mut row) in pending {
            row.stored_bits_ratio = if bits == 0 {
                0.0
            } else {
                baseline_bits as f64 / bits as f64
            };
            rows.push(row);
        }
    }
    Ok(SweepReport {
        rows,
        oracle: oracle_summary,
    })
}

/// Writes the CSV report. With `timing` unset the wall-clock dependent
/// `pairs_per_s` column prints `NA`, making the file reproducible byte for byte.
/// The last row carries the oracle quantiles with `W = oracle`.
pub fn write_csv<W: Write>(out: &mut W, report: &SweepReport, timing: bool) -> Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in &report.rows {
        let q = &r.quantiles;
        let pps = if timing {
            format!("{:.1}", r.pairs_per_s)
        } else {
            "NA".to_string()
        };
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{:.6},{:.6},{:.6},{}",
            r.window,
            r.overlap,
            u8::from(r.combo.sene),
            u8::from(r.combo.dent),
            u8::from(r.combo.et),
            q.q500,
            q.q100,
            q.q010,
            q.q001,
            r.frac_optimal,
            r.mean_rows_frac,
            r.stored_bits_ratio,
            pps
        )?;
    }
    let q = &report.oracle.quantiles;
    writeln!(
        out,
        "oracle,,,,,{},{},{},{},{:.6},,,",
        q.q500, q.q100, q.q010, q.q001, 1.0
    )?;
    Ok(())
}
