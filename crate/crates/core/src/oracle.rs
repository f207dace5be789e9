//! Exact quadratic reference implementations used to check the aligner.
//!
//! Characters outside `ACGT` never match anything, including themselves, so
//! these agree with the aligner's mask convention.

use serde::Serialize;

use crate::cigar::Cigar;
use crate::error::{Error, Result};
use crate::traceback::Op;

/// Longest sequence accepted by [`global_align`].
pub const GLOBAL_ALIGN_MAX_LEN: usize = 100_000;
/// Largest direction matrix [`global_align`] will allocate (one byte per cell).
pub const GLOBAL_ALIGN_MAX_CELLS: usize = 1 << 30;

#[inline]
fn same(a: u8, b: u8) -> bool {
    a == b && matches!(a, b'A' | b'C' | b'G' | b'T')
}

/// Unit-cost edit distance (Wagner-Fischer, two rows).
pub fn levenshtein(text: &[u8], pattern: &[u8]) -> usize {
    let mut prev: Vec<usize> = (0..=pattern.len()).collect();
    let mut cur = vec![0; pattern.len() + 1];
    for (i, &t) in text.iter().enumerate() {
        cur[0] = i + 1;
        for (j, &p) in pattern.iter().enumerate() {
            let sub = prev[j] + usize::from(!same(t, p));
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[pattern.len()]
}

/// `t[i][j]` = edit distance of `text[i..]` and `pattern[j..]`.
pub fn suffix_distance_table(text: &[u8], pattern: &[u8]) -> Vec<Vec<usize>> {
    let (n, m) = (text.len(), pattern.len());
    let mut t = vec![vec![0; m + 1]; n + 1];
    for (j, cell) in t[n].iter_mut().enumerate() {
        *cell = m - j;
    }
    for i in (0..n).rev() {
        t[i][m] = n - i;
        for j in (0..m).rev() {
            let sub = t[i + 1][j + 1] + usize::from(!same(text[i], pattern[j]));
            t[i][j] = sub.min(t[i + 1][j] + 1).min(t[i][j + 1] + 1);
        }
    }
    t
}

/// Optimal unit-cost global alignment with a replay-valid CIGAR.
pub fn global_align(text: &[u8], pattern: &[u8]) -> Result<(usize, Cigar)> {
    let (n, m) = (text.len(), pattern.len());
    if n > GLOBAL_ALIGN_MAX_LEN || m > GLOBAL_ALIGN_MAX_LEN {
        return Err(Error::Input(format!(
            "oracle alignment limited to {GLOBAL_ALIGN_MAX_LEN} characters, got {n} and {m}"
        )));
    }
    let cols = m + 1;
    if (n + 1).saturating_mul(cols) > GLOBAL_ALIGN_MAX_CELLS {
        return Err(Error::Input(format!(
            "oracle alignment of {n}x{m} exceeds {GLOBAL_ALIGN_MAX_CELLS} cells"
        )));
    }

    // 0 = diagonal, 1 = up (text char deleted), 2 = left (pattern char inserted)
    let mut dir = vec![0u8; (n + 1) * cols];
    let mut prev: Vec<usize> = (0..=m).collect();
    let mut cur = vec![0; cols];
    dir[1..cols].fill(2);
    for i in 1..=n {
        cur[0] = i;
        dir[i * cols] = 1;
        for j in 1..=m {
            let diag = prev[j - 1] + usize::from(!same(text[i - 1], pattern[j - 1]));
            let up = prev[j] + 1;
            let left = cur[j - 1] + 1;
            let (best, d) = if diag <= up && diag <= left {
                (diag, 0)
            } else if up <= left {
                (up, 1)
            } else {
                (left, 2)
            };
            cur[j] = best;
            dir[i * cols + j] = d;
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    let distance = prev[m];

    let mut ops = Vec::with_capacity(n + m);
    let (mut i, mut j) = (n, m);
    while i > 0 || j > 0 {
        match dir[i * cols + j] {
            0 => {
                ops.push(if same(text[i - 1], pattern[j - 1]) {
                    Op::Match
                } else {
                    Op::Substitution
                });
                i -= 1;
                j -= 1;
            }
            1 => {
                ops.push(Op::Deletion);
                i -= 1;
            }
            _ => {
                ops.push(Op::Insertion);
                j -= 1;
            }
        }
    }
    ops.reverse();
    Ok((distance, ops.into_iter().collect()))
}

/// Single-affine scoring: `+match_bonus` per `=`, `-mismatch_penalty` per `X`,
/// `-(gap_open + gap_extend * len)` per maximal `I` or `D` run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ScoringParams {
    pub match_bonus: i64,
    pub mismatch_penalty: i64,
    pub gap_open: i64,
    pub gap_extend: i64,
}

impl Default for ScoringParams {
    fn default() -> Self {
        ScoringParams {
            match_bonus: 2,
            mismatch_penalty: 4,
            gap_open: 4,
            gap_extend: 2,
        }
    }
}

impl ScoringParams {
    pub fn validate(&self) -> Result<()> {
        if self.mismatch_penalty < 0 || self.gap_open < 0 || self.gap_extend < 0 {
            return Err(Error::Config(format!(
                "penalties must be non-negative: {self:?}"
            )));
        }
        Ok(())
    }
}

pub fn score_cigar(cigar: &Cigar, params: &ScoringParams) -> i64 {
    cigar
        .runs()
        .iter()
        .map(|&(len, op)| {
            let len = len as i64;
            match op {
                Op::Match => params.match_bonus * len,
                Op::Substitution => -params.mismatch_penalty * len,
                Op::Insertion | Op::Deletion => -(params.gap_open + params.gap_extend * len),
            }
        })
        .sum()
}

pub fn score_cigar_str(cigar: &str, params: &ScoringParams) -> Result<i64> {
    Ok(score_cigar(&cigar.parse()?, params))
}

/// Text position each pattern base is aligned to (`None` for insertions).
fn pattern_to_text(cigar: &Cigar) -> Vec<Option<usize>> {
    let mut out = Vec::with_capacity(cigar.pattern_len());
    let mut t = 0;
    for op in cigar.ops() {
        match op {
            Op::Match | Op::Substitution => {
                out.push(Some(t));
                t += 1;
            }
            Op::Insertion => out.push(None),
            Op::Deletion => t += 1,
        }
    }
    out
}

/// Pattern bases aligned to the same text position as in `truth`.
/// Inserted bases never count.
pub fn correctly_aligned_bases(cigar: &Cigar, truth: &Cigar) -> Result<usize> {
    if cigar.pattern_len() != truth.pattern_len() {
        return Err(Error::Input(format!(
            "cigars cover {} and {} pattern bases",
            cigar.pattern_len(),
            truth.pattern_len()
        )));
    }
    Ok(pattern_to_text(cigar)
        .into_iter()
        .zip(pattern_to_text(truth))
        .filter(|(a, b)| a.is_some() && a == b)
        .count())
}
