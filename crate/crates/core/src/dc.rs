//! Bitvector DP table construction for a single window.
//!
//! `R[i][d]` is an `m`-bit vector (m = pattern length) whose bit `j` is zero
//! exactly when `text[i..]` and `pattern[j..]` are within `d` edits. Rows are
//! built in increasing `d`; each row is swept from `i = n - 1` down to `0`.
//!
//! Left shifts pull in a virtual bit `j = m` (the empty pattern suffix), which
//! is zero iff the remaining text `n - i` fits in the source cell's budget.
//! This keeps the interpretation exact at the low end of the vector, so the
//! reported distance is the global edit distance of the two windows.

use std::cell::Cell;
use std::ops::AddAssign;

use serde::Serialize;

use crate::bitvec::{self, last_word_mask, shl1_tail_into, words_for, BitVector, MAX_W, MAX_WORDS};
use crate::error::{Error, Result};

/// Mask slot used for characters outside `ACGT`; it matches nothing.
const NO_MATCH: usize = 4;

#[inline]
pub(crate) fn base_code(c: u8) -> usize {
    match c {
        b'A' => 0,
        b'C' => 1,
        b'G' => 2,
        b'T' => 3,
        _ => NO_MATCH,
    }
}

/// Per-character match masks: bit `j` of the mask for `X` is 0 iff `pattern[j] == X`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternMasks {
    masks: [BitVector; 5],
    len: usize,
}

impl PatternMasks {
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Mask for text character `c`. Non-ACGT characters get the all-ones mask.
    #[inline]
    pub fn get(&self, c: u8) -> &BitVector {
        &self.masks[base_code(c)]
    }
}

pub fn build_pattern_masks(pattern: &[u8]) -> Result<PatternMasks> {
    if pattern.is_empty() {
        return Err(Error::Input("empty pattern".into()));
    }
    if pattern.len() > MAX_W {
        return Err(Error::Input(format!(
            "pattern window of {} exceeds {MAX_W}",
            pattern.len()
        )));
    }
    let ones = BitVector::ones(pattern.len())?;
    let mut masks = [ones; 5];
    for (j, &c) in pattern.iter().enumerate() {
        let code = base_code(c);
        if code != NO_MATCH {
            masks[code].set(j, false);
        }
    }
    Ok(PatternMasks {
        masks,
        len: pattern.len(),
    })
}

/// One window of work: align `text` against `pattern` allowing up to `k` edits.
#[derive(Clone, Copy, Debug)]
pub struct WindowTask<'a> {
    pub text: &'a [u8],
    pub pattern: &'a [u8],
    pub k: usize,
}

impl<'a> WindowTask<'a> {
    pub fn new(text: &'a [u8], pattern: &'a [u8], k: usize) -> Self {
        WindowTask { text, pattern, k }
    }
}

/// What the table retains for traceback.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StoragePolicy {
    /// I, D and M vectors per cell (S is D shifted).
    BaselineEdges,
    /// Only the entry `R[i][d]` per cell; edges are regenerated on demand.
    SeneEntries,
    /// Keep columns `i < keep` and the leading `keep` bits of every stored
    /// vector. `keep` is `W - O + 1` in windowed mode. With `sene` unset the
    /// trimmed vectors are edges, otherwise entries.
    DentTrimmed { sene: bool, keep: usize },
}

impl StoragePolicy {
    pub fn stores_entries(&self) -> bool {
        matches!(
            self,
            StoragePolicy::SeneEntries | StoragePolicy::DentTrimmed { sene: true, .. }
        )
    }

    pub fn keep(&self) -> Option<usize> {
        match *self {
            StoragePolicy::DentTrimmed { keep, .. } => Some(keep),
            _ => None,
        }
    }

    fn vectors_per_cell(&self) -> usize {
        if self.stores_entries() {
            1
        } else {
            3
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Counters {
    /// Logical bits written to table storage.
    pub stored_bits: u64,
    pub table_writes: u64,
    pub table_reads: u64,
    pub rows_computed: u64,
    pub cells_computed: u64,
}

impl AddAssign for Counters {
    fn add_assign(&mut self, o: Self) {
        self.stored_bits += o.stored_bits;
        self.table_writes += o.table_writes;
        self.table_reads += o.table_reads;
        self.rows_computed += o.rows_computed;
        self.cells_computed += o.cells_computed;
    }
}

/// Edge slot order inside a BaselineEdges cell.
pub(crate) const SLOT_I: usize = 0;
pub(crate) const SLOT_D: usize = 1;
pub(crate) const SLOT_M: usize = 2;

/// The retained part of `R` (or its edges) for one window.
#[derive(Debug)]
pub struct DpTable {
    policy: StoragePolicy,
    n: usize,
    m: usize,
    rows: usize,
    cols: usize,
    bits: usize,
    slot_words: usize,
    data: Vec<u64>,
    counters: Counters,
    reads: Cell<u64>,
}

impl Default for DpTable {
    fn default() -> Self {
        DpTable {
            policy: StoragePolicy::SeneEntries,
            n: 0,
            m: 0,
            rows: 0,
            cols: 0,
            bits: 0,
            slot_words: 0,
            data: Vec::new(),
            counters: Counters::default(),
            reads: Cell::new(0),
        }
    }
}

impl DpTable {
    fn reset(&mut self, policy: StoragePolicy, n: usize, m: usize, k: usize) {
        let keep = policy.keep().unwrap_or(usize::MAX);
        let full_cols = if policy.stores_entries() { n + 1 } else { n };
        self.policy = policy;
        self.n = n;
        self.m = m;
        self.rows = 0;
        self.cols = full_cols.min(keep);
        self.bits = m.min(keep);
        self.slot_words = words_for(self.bits);
        let needed = (k + 1) * self.cols * policy.vectors_per_cell() * self.slot_words;
        if self.data.len() < needed {
            self.data.resize(needed, 0);
        }
        self.counters = Counters::default();
        self.reads.set(0);
    }

    pub fn policy(&self) -> StoragePolicy {
        self.policy
    }

    /// Text length of the window.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Pattern length of the window.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Number of rows (d = 0..rows) that were computed and stored.
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn stored_columns(&self) -> usize {
        self.cols
    }

    pub fn stored_bits_per_vector(&self) -> usize {
        self.bits
    }

    pub fn counters(&self) -> Counters {
        let mut c = self.counters;
        c.table_reads += self.reads.get();
        c
    }

    #[inline]
    fn offset(&self, i: usize, d: usize, slot: usize) -> usize {
        ((d * self.cols + i) * self.policy.vectors_per_cell() + slot) * self.slot_words
    }

    #[inline]
    fn write(&mut self, i: usize, d: usize, slot: usize, src: &[u64]) {
        if i >= self.cols {
            return;
        }
        let off = self.offset(i, d, slot);
        let sw = self.slot_words;
        let dst = &mut self.data[off..off + sw];
        dst.copy_from_slice(&src[..sw]);
        dst[sw - 1] &= last_word_mask(self.bits);
        self.counters.table_writes += 1;
        self.counters.stored_bits += self.bits as u64;
    }

    fn region_error(&self, what: &str, i: usize, d: usize) -> Error {
        Error::OutOfStoredRegion(format!(
            "{what} at i={i}, d={d} (stored columns {}, rows {}, policy {:?})",
            self.cols, self.rows, self.policy
        ))
    }

    /// Loads one stored vector; counts as a table read.
    pub(crate) fn load(&self, i: usize, d: usize, slot: usize) -> Result<BitVector> {
        if i >= self.cols || d >= self.rows {
            return Err(self.region_error("load", i, d));
        }
        self.reads.set(self.reads.get() + 1);
        let off = self.offset(i, d, slot);
        Ok(BitVector::from_words(
            &self.data[off..off + self.slot_words],
            self.bits,
        ))
    }

    /// `R[n][d] = ones << d`, trimmed to the stored width.
    pub(crate) fn init_column(&self, d: usize) -> Result<BitVector> {
        if d >= self.rows {
            return Err(self.region_error("init column", self.n, d));
        }
        Ok(BitVector::ones(self.m)?
            .shl(d.min(self.m))
            .slice_high(self.bits))
    }

    /// The entry `R[i][d]` as far as it can be recovered from storage.
    ///
    /// Under edge storage the entry is rebuilt from I, D and M; when trimmed,
    /// the lowest kept bit depends on a discarded D bit and is dropped.
    pub fn entry(&self, i: usize, d: usize) -> Result<BitVector> {
        if i > self.n {
            return Err(self.region_error("entry", i, d));
        }
        if self.policy.stores_entries() {
            return self.load(i, d, 0);
        }
        if i == self.n {
            return self.init_column(d);
        }
        let m_edge = self.load(i, d, SLOT_M)?;
        if d == 0 {
            return Ok(m_edge);
        }
        let i_edge = self.load(i, d, SLOT_I)?;
        let d_edge = self.load(i, d, SLOT_D)?;
        let s_edge = d_edge.shl1_tail(self.tail_bit(i + 1, d - 1));
        let r = i_edge.and(&d_edge).and(&s_edge).and(&m_edge);
        if self.bits < self.m {
            Ok(r.slice_high(self.bits - 1))
        } else {
            Ok(r)
        }
    }

    /// Virtual bit `j = m` of `R[i][d]`: zero iff the text suffix from `i`
    /// can be deleted within `d` edits. Only meaningful at full width.
    #[inline]
    pub(crate) fn tail_bit(&self, i: usize, d: usize) -> bool {
        self.bits == self.m && self.n - i > d
    }
}

/// Result of building the table for one window.
#[derive(Debug)]
pub struct DcResult<'a> {
    /// Smallest `d <= k` with `msb(R[0][d]) == 0`; `None` if no such row.
    pub edit_distance: Option<usize>,
    pub rows_computed: usize,
    pub table: &'a DpTable,
    pub masks: &'a PatternMasks,
}

/// Reusable scratch and table storage. One per concurrent alignment.
#[derive(Debug, Default)]
pub struct Workspace {
    prev: Vec<u64>,
    cur: Vec<u64>,
    codes: Vec<u8>,
    table: DpTable,
    masks: Option<PatternMasks>,
}

impl Workspace {
    pub fn new() -> Self {
        Self::default()
    }
}

/// Builds `R` for one window under `policy`.
///
/// With `early_termination`, construction stops after the first row whose
/// leftmost entry has a zero most significant bit.
pub fn compute_dc<'w>(
    task: &WindowTask<'_>,
    policy: StoragePolicy,
    early_termination: bool,
    ws: &'w mut Workspace,
) -> Result<DcResult<'w>> {
    let n = task.text.len();
    let m = task.pattern.len();
    if n == 0 {
        return Err(Error::Input("empty text window".into()));
    }
    if n > MAX_W {
        return Err(Error::Input(format!("text window of {n} exceeds {MAX_W}")));
    }
    if let Some(keep) = policy.keep() {
        if keep < 2 {
            return Err(Error::Config(format!(
                "trim width {keep} must be at least 2"
            )));
        }
    }
    let masks = build_pattern_masks(task.pattern)?;
    // distance never exceeds max(n, m), so larger budgets only add dead rows
    let k = task.k.min(n.max(m));
    let nw = words_for(m);

    ws.table.reset(policy, n, m, k);
    ws.prev.clear();
    ws.prev.resize((n + 1) * nw, 0);
    ws.cur.clear();
    ws.cur.resize((n + 1) * nw, 0);
    ws.codes.clear();
    ws.codes
        .extend(task.text.iter().map(|&c| base_code(c) as u8));

    let mask_words: [&[u64]; 5] = [
        masks.masks[0].words(),
        masks.masks[1].words(),
        masks.masks[2].words(),
        masks.masks[3].words(),
        masks.masks[4].words(),
    ];
    let ones = BitVector::ones(m)?;
    let entries = policy.stores_entries();
    let table = &mut ws.table;
    let codes = &ws.codes;

    let mut scratch_i = [0u64; MAX_WORDS];
    let mut scratch_s = [0u64; MAX_WORDS];
    let mut scratch_m = [0u64; MAX_WORDS];
    let (si, ss, sm) = (
        &mut scratch_i[..nw],
        &mut scratch_s[..nw],
        &mut scratch_m[..nw],
    );

    let mut found = None;
    let mut rows = 0;
    for d in 0..=k {
        std::mem::swap(&mut ws.prev, &mut ws.cur);
        let prev = &ws.prev;
        let cur = &mut ws.cur;
        table.rows = d + 1;

        // R[n][d] = ones << d
        if d == 0 {
            cur[n * nw..].copy_from_slice(ones.words());
        } else {
            let (_, tail) = cur.split_at_mut(n * nw);
            shl1_tail_into(tail, &prev[n * nw..], m, false);
        }
        if entries {
            table.write(n, d, 0, &cur[n * nw..]);
        }

        for i in (0..n).rev() {
            let pm = mask_words[codes[i] as usize];
            let (head, rest) = cur.split_at_mut((i + 1) * nw);
            let east = &rest[..nw];
            let out = &mut head[i * nw..];
            let remaining = n - i - 1;

            shl1_tail_into(sm, east, m, remaining > d);
            for w in 0..nw {
                sm[w] |= pm[w];
            }
            if d == 0 {
                out.copy_from_slice(sm);
                if entries {
                    table.write(i, d, 0, out);
                } else {
                    table.write(i, d, SLOT_I, ones.words());
                    table.write(i, d, SLOT_D, ones.words());
                    table.write(i, d, SLOT_M, sm);
                }
                continue;
            }

            let north = &prev[i * nw..(i + 1) * nw];
            let north_east = &prev[(i + 1) * nw..(i + 2) * nw];
            shl1_tail_into(si, north, m, remaining + 1 > d - 1);
            shl1_tail_into(ss, north_east, m, remaining > d - 1);
            for w in 0..nw {
                out[w] = si[w] & north_east[w] & ss[w] & sm[w];
            }
            if entries {
                table.write(i, d, 0, out);
            } else {
                table.write(i, d, SLOT_I, si);
                table.write(i, d, SLOT_D, north_east);
                table.write(i, d, SLOT_M, sm);
            }
        }

        rows = d + 1;
        table.counters.cells_computed += n as u64;
        if found.is_none() && cur[0] & bitvec::bit_mask(0) == 0 {
            found = Some(d);
            if early_termination {
                break;
            }
        }
    }
    table.counters.rows_computed = rows as u64;
    ws.masks = Some(masks);

    Ok(DcResult {
        edit_distance: found,
        rows_computed: rows,
        table: &ws.table,
        masks: ws.masks.as_ref().expect("masks set above"),
    })
}

/// Bit `j` of `R[i][d]`, read back through the table's storage policy.
pub fn theorem1_bit(table: &DpTable, i: usize, d: usize, j: usize) -> Result<bool> {
    let e = table.entry(i, d)?;
    if j >= e.len() {
        return Err(Error::OutOfStoredRegion(format!(
            "bit {j} of R[{i}][{d}] not stored ({} bits kept)",
            e.len()
        )));
    }
    Ok(e.bit_at(j))
}
