//! Whole-sequence alignment by greedy windowing.
//!
//! Each window aligns prefixes of up to `W` characters of both remainders,
//! commits the first `W - O` traceback steps and restarts from the consumed
//! offsets. Once both remainders fit in one window the last window is traced
//! back completely.

use serde::Serialize;

use crate::bitvec::MAX_W;
use crate::cigar::Cigar;
use crate::dc::{compute_dc, Counters, StoragePolicy, WindowTask, Workspace};
use crate::error::{Error, Result};
use crate::traceback::{traceback, Op};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Mode {
    Windowed,
    SingleWindow,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct AlignerConfig {
    /// Window size `W`.
    pub window: usize,
    /// Window overlap `O`.
    pub overlap: usize,
    pub sene: bool,
    pub dent: bool,
    pub early_termination: bool,
    pub mode: Mode,
    /// Edit budget in single-window mode.
    pub k_single: usize,
}

impl Default for AlignerConfig {
    fn default() -> Self {
        Self::long_reads()
    }
}

impl AlignerConfig {
    /// Windowed aligner with every improvement enabled.
    pub fn windowed(window: usize, overlap: usize) -> Self {
        AlignerConfig {
            window,
            overlap,
            sene: true,
            dent: true,
            early_termination: true,
            mode: Mode::Windowed,
            k_single: window,
        }
    }

    /// W = 64, O = 33.
    pub fn long_reads() -> Self {
        Self::windowed(64, 33)
    }

    /// W = 32, O = 17.
    pub fn short_reads() -> Self {
        Self::windowed(32, 17)
    }

    /// Single window with edit budget `k` (no DENT).
    pub fn single_window(k: usize) -> Self {
        AlignerConfig {
            dent: false,
            mode: Mode::SingleWindow,
            k_single: k,
            ..Self::windowed(MAX_W, 0)
        }
    }

    pub fn with_improvements(mut self, sene: bool, dent: bool, early_termination: bool) -> Self {
        self.sene = sene;
        self.dent = dent;
        self.early_termination = early_termination;
        self
    }

    /// Traceback steps committed per window, `W - O`.
    pub fn step(&self) -> usize {
        self.window - self.overlap
    }

    pub fn validate(&self) -> Result<()> {
        if self.window == 0 || self.window > MAX_W {
            return Err(Error::Config(format!(
                "window size {} outside 1..={MAX_W}",
                self.window
            )));
        }
        if self.overlap >= self.window {
            return Err(Error::Config(format!(
                "overlap {} must be smaller than window {}",
                self.overlap, self.window
            )));
        }
        if self.dent && self.mode == Mode::SingleWindow {
            return Err(Error::Config(
                "DENT needs truncated traceback and is only valid in windowed mode".into(),
            ));
        }
        Ok(())
    }

    fn window_policy(&self, final_window: bool) -> StoragePolicy {
        if self.dent && !final_window {
            StoragePolicy::DentTrimmed {
                sene: self.sene,
                keep: self.step() + 1,
            }
        } else if self.sene {
            StoragePolicy::SeneEntries
        } else {
            StoragePolicy::BaselineEdges
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlignmentResult {
    pub distance: usize,
    #[serde(serialize_with = "serialize_display")]
    pub cigar: Cigar,
    pub windows: usize,
    pub counters: Counters,
}

fn serialize_display<S: serde::Serializer>(
    c: &Cigar,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(c)
}

fn check_inputs(text: &[u8], pattern: &[u8]) -> Result<()> {
    if text.is_empty() || pattern.is_empty() {
        return Err(Error::Input("sequences must be non-empty".into()));
    }
    Ok(())
}

/// Aligns `text` (reference) against `pattern` (read) with the windowing
/// heuristic. The distance is an upper bound on the edit distance.
pub fn align(
    text: &[u8],
    pattern: &[u8],
    config: &AlignerConfig,
    ws: &mut Workspace,
) -> Result<AlignmentResult> {
    config.validate()?;
    if config.mode != Mode::Windowed {
        return Err(Error::Config(
            "align runs windowed mode; use align_single_window".into(),
        ));
    }
    check_inputs(text, pattern)?;

    let (n, m) = (text.len(), pattern.len());
    let w = config.window;
    let step = config.step();
    let max_windows = 4 * (n + m) / step + 1;

    let mut cigar = Cigar::new();
    let mut counters = Counters::default();
    let mut windows = 0;
    let (mut ti, mut pi) = (0, 0);

    loop {
        let (rest_t, rest_p) = (n - ti, m - pi);
        if rest_t == 0 {
            cigar.push_run(Op::Insertion, rest_p);
            break;
        }
        if rest_p == 0 {
            cigar.push_run(Op::Deletion, rest_t);
            break;
        }
        if windows == max_windows {
            return Err(Error::Internal(format!(
                "no convergence after {windows} windows at text {ti}/{n}, pattern {pi}/{m}"
            )));
        }

        let final_window = rest_t <= w && rest_p <= w;
        let text_w = &text[ti..ti + rest_t.min(w)];
        let pattern_w = &pattern[pi..pi + rest_p.min(w)];
        let task = WindowTask::new(text_w, pattern_w, w);
        let dc = compute_dc(
            &task,
            config.window_policy(final_window),
            config.early_termination,
            ws,
        )?;
        let d = dc.edit_distance.ok_or_else(|| {
            Error::Internal(format!(
                "window at text {ti}, pattern {pi} found no distance"
            ))
        })?;
        let max_steps = if final_window { None } else { Some(step) };
        let tr = traceback(dc.table, d, dc.masks, text_w, max_steps)?;
        counters += dc.table.counters();
        windows += 1;

        if tr.ops.is_empty() {
            return Err(Error::Internal(format!(
                "window at text {ti}, pattern {pi} made no progress"
            )));
        }
        cigar.extend(tr.ops.iter().copied());
        ti += tr.text_consumed;
        pi += tr.pattern_consumed;

        if final_window {
            if ti != n || pi != m {
                return Err(Error::Internal(format!(
                    "final window stopped at text {ti}/{n}, pattern {pi}/{m}"
                )));
            }
            break;
        }
    }

    Ok(AlignmentResult {
        distance: cigar.edits(),
        cigar,
        windows,
        counters,
    })
}

/// Exact alignment in one window of up to `MAX_W` characters. Returns
/// `None` when the edit distance exceeds `k`.
pub fn align_single_window(
    text: &[u8],
    pattern: &[u8],
    k: usize,
    config: &AlignerConfig,
    ws: &mut Workspace,
) -> Result<Option<AlignmentResult>> {
    if config.dent {
        return Err(Error::Config(
            "DENT is not available for full single-window traceback".into(),
        ));
    }
    check_inputs(text, pattern)?;
    if text.len() > MAX_W || pattern.len() > MAX_W {
        return Err(Error::Input(format!(
            "single-window mode needs both lengths <= {MAX_W}, got {} and {}",
            text.len(),
            pattern.len()
        )));
    }
    let policy = if config.sene {
        StoragePolicy::SeneEntries
    } else {
        StoragePolicy::BaselineEdges
    };
    let dc = compute_dc(
        &WindowTask::new(text, pattern, k),
        policy,
        config.early_termination,
        ws,
    )?;
    let Some(d) = dc.edit_distance else {
        return Ok(None);
    };
    let tr = traceback(dc.table, d, dc.masks, text, None)?;
    let cigar: Cigar = tr.ops.iter().copied().collect();
    Ok(Some(AlignmentResult {
        distance: cigar.edits(),
        cigar,
        windows: 1,
        counters: dc.table.counters(),
    }))
}

/// Runs whichever mode `config` selects. `None` only in single-window mode.
pub fn align_any(
    text: &[u8],
    pattern: &[u8],
    config: &AlignerConfig,
    ws: &mut Workspace,
) -> Result<Option<AlignmentResult>> {
    match config.mode {
        Mode::Windowed => align(text, pattern, config, ws).map(Some),
        Mode::SingleWindow => align_single_window(text, pattern, config.k_single, config, ws),
    }
}
