//! Edit transcript recovery from a window's DP table.
//!
//! The path starts at `(i = 0, j = 0, d = d_opt)` and walks toward
//! `(n, m)`: both `i` (text) and `j` (pattern) only increase. A step is taken
//! through an edge vector whose bit `j` is zero:
//!
//! | op           | next cell            |
//! |--------------|----------------------|
//! | Match        | `(i + 1, j + 1, d)`  |
//! | Substitution | `(i + 1, j + 1, d-1)`|
//! | Deletion     | `(i + 1, j, d - 1)`  |
//! | Insertion    | `(i, j + 1, d - 1)`  |
//!
//! Ties are broken in that order.

use serde::Serialize;

use crate::bitvec::BitVector;
use crate::dc::{DpTable, PatternMasks, SLOT_D, SLOT_I, SLOT_M};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Op {
    Match,
    Substitution,
    /// Consumes one pattern character.
    Insertion,
    /// Consumes one text character.
    Deletion,
}

impl Op {
    pub fn symbol(self) -> char {
        match self {
            Op::Match => '=',
            Op::Substitution => 'X',
            Op::Insertion => 'I',
            Op::Deletion => 'D',
        }
    }

    pub fn from_symbol(c: char) -> Option<Op> {
        match c {
            '=' => Some(Op::Match),
            'X' => Some(Op::Substitution),
            'I' => Some(Op::Insertion),
            'D' => Some(Op::Deletion),
            _ => None,
        }
    }

    pub fn consumes_text(self) -> bool {
        !matches!(self, Op::Insertion)
    }

    pub fn consumes_pattern(self) -> bool {
        !matches!(self, Op::Deletion)
    }

    pub fn is_edit(self) -> bool {
        !matches!(self, Op::Match)
    }
}

/// Insertion, deletion, substitution and match vectors of one cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeSet {
    pub ins: BitVector,
    pub del: BitVector,
    pub sub: BitVector,
    pub mat: BitVector,
    valid: usize,
}

impl EdgeSet {
    /// Number of leading bits that carry real values. Under trimmed storage
    /// the lowest stored bit of a shifted edge depends on a discarded bit.
    pub fn valid_bits(&self) -> usize {
        self.valid
    }

    /// `I & D & S & M`, i.e. the entry this cell produced.
    pub fn combined(&self) -> BitVector {
        self.ins.and(&self.del).and(&self.sub).and(&self.mat)
    }

    fn bit(&self, v: &BitVector, j: usize) -> Result<bool> {
        if j >= self.valid {
            return Err(Error::OutOfStoredRegion(format!(
                "edge bit {j} outside the {} valid bits",
                self.valid
            )));
        }
        Ok(v.bit_at(j))
    }
}

fn valid_edge_bits(table: &DpTable) -> usize {
    let bits = table.stored_bits_per_vector();
    if bits < table.m() {
        bits - 1
    } else {
        bits
    }
}

fn check_cell(table: &DpTable, i: usize) -> Result<()> {
    if i >= table.n() {
        return Err(Error::Internal(format!(
            "no edges for column {i} of a {}-column window",
            table.n()
        )));
    }
    Ok(())
}

/// Rebuilds the edges of cell `(i, d)` from the stored neighbor entries.
pub fn regen_edges(
    table: &DpTable,
    i: usize,
    d: usize,
    masks: &PatternMasks,
    text_char: u8,
) -> Result<EdgeSet> {
    if !table.policy().stores_entries() {
        return Err(Error::Config(format!(
            "edge regeneration needs an entry table, got {:?}",
            table.policy()
        )));
    }
    check_cell(table, i)?;
    let bits = table.stored_bits_per_vector();
    let pm = masks.get(text_char).slice_high(bits);
    let east = table.entry(i + 1, d)?;
    let mat = east.shl1_tail(table.tail_bit(i + 1, d)).or(&pm);
    let (ins, del, sub) = if d == 0 {
        let ones = BitVector::ones(bits)?;
        (ones, ones, ones)
    } else {
        let north = table.entry(i, d - 1)?;
        let north_east = table.entry(i + 1, d - 1)?;
        (
            north.shl1_tail(table.tail_bit(i, d - 1)),
            north_east,
            north_east.shl1_tail(table.tail_bit(i + 1, d - 1)),
        )
    };
    Ok(EdgeSet {
        ins,
        del,
        sub,
        mat,
        valid: valid_edge_bits(table),
    })
}

/// Reads the recorded edges of cell `(i, d)` from an edge table.
pub fn stored_edges(table: &DpTable, i: usize, d: usize) -> Result<EdgeSet> {
    if table.policy().stores_entries() {
        return Err(Error::Config(format!(
            "stored edges requested from an entry table {:?}",
            table.policy()
        )));
    }
    check_cell(table, i)?;
    let mat = table.load(i, d, SLOT_M)?;
    let (ins, del, sub) = if d == 0 {
        let ones = BitVector::ones(mat.len())?;
        (ones, ones, ones)
    } else {
        let del = table.load(i, d, SLOT_D)?;
        (
            table.load(i, d, SLOT_I)?,
            del,
            del.shl1_tail(table.tail_bit(i + 1, d - 1)),
        )
    };
    Ok(EdgeSet {
        ins,
        del,
        sub,
        mat,
        valid: valid_edge_bits(table),
    })
}

/// Edges of `(i, d)` under whatever the table stores.
pub fn cell_edges(
    table: &DpTable,
    i: usize,
    d: usize,
    masks: &PatternMasks,
    text_char: u8,
) -> Result<EdgeSet> {
    if table.policy().stores_entries() {
        regen_edges(table, i, d, masks, text_char)
    } else {
        stored_edges(table, i, d)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Transcript {
    pub ops: Vec<Op>,
    pub text_consumed: usize,
    pub pattern_consumed: usize,
}

impl Transcript {
    pub fn edits(&self) -> usize {
        self.ops.iter().filter(|op| op.is_edit()).count()
    }

    fn push(&mut self, op: Op) {
        self.ops.push(op);
        self.text_consumed += usize::from(op.consumes_text());
        self.pattern_consumed += usize::from(op.consumes_pattern());
    }
}

/// Follows zeros from `R[0][d_opt]` toward the far corner.
///
/// `max_steps = Some(s)` stops after `s` ops (windowed mode); `None` walks
/// until both window sequences are consumed.
pub fn traceback(
    table: &DpTable,
    d_opt: usize,
    masks: &PatternMasks,
    text: &[u8],
    max_steps: Option<usize>,
) -> Result<Transcript> {
    let (n, m) = (table.n(), table.m());
    if text.len() != n || masks.len() != m {
        return Err(Error::Input(format!(
            "traceback inputs ({} text, {} mask bits) do not match a {n}x{m} table",
            text.len(),
            masks.len()
        )));
    }
    if d_opt >= table.rows() {
        return Err(Error::Internal(format!(
            "distance {d_opt} beyond the {} computed rows",
            table.rows()
        )));
    }
    let limit = max_steps.unwrap_or(usize::MAX);
    let mut out = Transcript::default();
    let (mut i, mut j, mut d) = (0, 0, d_opt);
    let stuck =
        |i, j, d| Error::Internal(format!("no legal traceback step at i={i}, j={j}, d={d}"));

    while out.ops.len() < limit && (i < n || j < m) {
        if i == n || j == m {
            // one side exhausted: only insertions (text done) or deletions remain
            if d == 0 {
                return Err(stuck(i, j, d));
            }
            let op = if i == n { Op::Insertion } else { Op::Deletion };
            out.push(op);
            if op == Op::Insertion {
                j += 1;
            } else {
                i += 1;
            }
            d -= 1;
            continue;
        }

        let e = cell_edges(table, i, d, masks, text[i])?;
        let op = if !e.bit(&e.mat, j)? {
            Op::Match
        } else if d == 0 {
            return Err(stuck(i, j, d));
        } else if !e.bit(&e.sub, j)? {
            Op::Substitution
        } else if !e.bit(&e.del, j)? {
            Op::Deletion
        } else if !e.bit(&e.ins, j)? {
            Op::Insertion
        } else {
            return Err(stuck(i, j, d));
        };
        out.push(op);
        i += usize::from(op.consumes_text());
        j += usize::from(op.consumes_pattern());
        d -= usize::from(op.is_edit());
    }

    if max_steps.is_none() && d != 0 {
        return Err(Error::Internal(format!(
            "full traceback ended with {d} unspent edits of {d_opt}"
        )));
    }
    Ok(out)
}
