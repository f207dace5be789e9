//! Run-length encoded alignment transcripts over `=`, `X`, `I`, `D`.
//!
//! The text is the reference and the pattern is the read: `I` consumes the
//! pattern only, `D` consumes the text only.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::traceback::Op;

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Cigar {
    runs: Vec<(usize, Op)>,
}

impl Cigar {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, op: Op) {
        self.push_run(op, 1);
    }

    pub fn push_run(&mut self, op: Op, len: usize) {
        if len == 0 {
            return;
        }
        match self.runs.last_mut() {
            Some((n, last)) if *last == op => *n += len,
            _ => self.runs.push((len, op)),
        }
    }

    pub fn runs(&self) -> &[(usize, Op)] {
        &self.runs
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    pub fn ops(&self) -> impl Iterator<Item = Op> + '_ {
        self.runs
            .iter()
            .flat_map(|&(n, op)| std::iter::repeat_n(op, n))
    }

    pub fn count(&self, op: Op) -> usize {
        self.runs.iter().filter(|r| r.1 == op).map(|r| r.0).sum()
    }

    pub fn edits(&self) -> usize {
        self.runs
            .iter()
            .filter(|r| r.1.is_edit())
            .map(|r| r.0)
            .sum()
    }

    pub fn text_len(&self) -> usize {
        self.runs
            .iter()
            .filter(|r| r.1.consumes_text())
            .map(|r| r.0)
            .sum()
    }

    pub fn pattern_len(&self) -> usize {
        self.runs
            .iter()
            .filter(|r| r.1.consumes_pattern())
            .map(|r| r.0)
            .sum()
    }

    /// Checks that applying the ops to `text` yields `pattern`: both are
    /// consumed exactly and every `=` pairs identical characters.
    pub fn replay(&self, text: &[u8], pattern: &[u8]) -> Result<()> {
        if self.text_len() != text.len() || self.pattern_len() != pattern.len() {
            return Err(Error::Input(format!(
                "cigar consumes {}/{} characters, sequences have {}/{}",
                self.text_len(),
                self.pattern_len(),
                text.len(),
                pattern.len()
            )));
        }
        let (mut t, mut p) = (0, 0);
        for op in self.ops() {
            if op == Op::Match && text[t] != pattern[p] {
                return Err(Error::Input(format!(
                    "'=' at text {t} / pattern {p} pairs {} with {}",
                    text[t] as char, pattern[p] as char
                )));
            }
            t += usize::from(op.consumes_text());
            p += usize::from(op.consumes_pattern());
        }
        Ok(())
    }
}

impl FromIterator<Op> for Cigar {
    fn from_iter<I: IntoIterator<Item = Op>>(iter: I) -> Self {
        let mut c = Cigar::new();
        c.extend(iter);
        c
    }
}

impl Extend<Op> for Cigar {
    fn extend<I: IntoIterator<Item = Op>>(&mut self, iter: I) {
        for op in iter {
            self.push(op);
        }
    }
}

impl fmt::Display for Cigar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &(n, op) in &self.runs {
            write!(f, "{n}{}", op.symbol())?;
        }
        Ok(())
    }
}

impl FromStr for Cigar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut cigar = Cigar::new();
        let mut len: Option<usize> = None;
        for c in s.chars() {
            if let Some(digit) = c.to_digit(10) {
                let cur = len.unwrap_or(0);
                len = Some(
                    cur.checked_mul(10)
                        .and_then(|v| v.checked_add(digit as usize))
                        .ok_or_else(|| Error::Input(format!("run length overflow in {s:?}")))?,
                );
                continue;
            }
            let op = Op::from_symbol(c)
                .ok_or_else(|| Error::Input(format!("unknown cigar op {c:?} in {s:?}")))?;
            match len.take() {
                Some(n) if n > 0 => cigar.push_run(op, n),
                _ => {
                    return Err(Error::Input(format!(
                        "missing run length before {c:?} in {s:?}"
                    )))
                }
            }
        }
        if len.is_some() {
            return Err(Error::Input(format!("trailing run length in {s:?}")));
        }
        Ok(cigar)
    }
}
