//! Pair datasets on disk and per-pair result output.

use std::collections::HashSet;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::cigar::Cigar;
use crate::error::{Error, Result};
use crate::harness::batch::PairResult;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeqPairRecord {
    pub id: String,
    /// Reference side.
    pub text: Vec<u8>,
    /// Read side.
    pub pattern: Vec<u8>,
    /// Ground-truth alignment, when the dataset carries one (fourth TSV column).
    pub truth: Option<Cigar>,
}

impl SeqPairRecord {
    pub fn new(id: impl Into<String>, text: &[u8], pattern: &[u8]) -> Self {
        SeqPairRecord {
            id: id.into(),
            text: text.to_ascii_uppercase(),
            pattern: pattern.to_ascii_uppercase(),
            truth: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairFormat {
    /// `id<TAB>text<TAB>pattern[<TAB>truth_cigar]`, one pair per line.
    Tsv,
    /// Two FASTA files, text records first, paired by order.
    FastaPair,
}

impl std::str::FromStr for PairFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tsv" => Ok(PairFormat::Tsv),
            "fasta-pair" => Ok(PairFormat::FastaPair),
            _ => Err(Error::Config(format!(
                "unknown format {s:?} (expected tsv or fasta-pair)"
            ))),
        }
    }
}

/// Streams records from a TSV reader. Blank lines are skipped.
pub struct TsvPairs<R> {
    lines: std::io::Lines<R>,
    line_no: usize,
}

impl<R: BufRead> TsvPairs<R> {
    pub fn new(reader: R) -> Self {
        TsvPairs {
            lines: reader.lines(),
            line_no: 0,
        }
    }

    fn parse(&self, line: &str) -> Result<SeqPairRecord> {
        let err = |msg: String| Error::Parse {
            line: self.line_no,
            msg,
        };
        let fields: Vec<&str> = line.split('\t').collect();
        if !(3..=4).contains(&fields.len()) {
            return Err(err(format!(
                "expected 3 or 4 tab-separated fields, found {}",
                fields.len()
            )));
        }
        if fields[0].is_empty() {
            return Err(err("empty id".into()));
        }
        if fields[1].is_empty() || fields[2].is_empty() {
            return Err(err("empty sequence".into()));
        }
        let mut rec = SeqPairRecord::new(fields[0], fields[1].as_bytes(), fields[2].as_bytes());
        if let Some(truth) = fields.get(3) {
            rec.truth = Some(truth.parse().map_err(|e: Error| err(e.to_string()))?);
        }
        Ok(rec)
    }
}

impl<R: BufRead> Iterator for TsvPairs<R> {
    type Item = Result<SeqPairRecord>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            let line = match self.lines.next()? {
                Ok(l) => l,
                Err(e) => return Some(Err(e.into())),
            };
            self.line_no += 1;
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() {
                continue;
            }
            return Some(self.parse(line));
        }
    }
}

/// One FASTA record: header id and concatenated sequence lines.
#[derive(Debug)]
struct FastaRecord {
    id: String,
    seq: Vec<u8>,
}

struct FastaReader<R> {
    lines: std::io::Lines<R>,
    line_no: usize,
    pending: Option<(String, usize)>,
    done: bool,
}

impl<R: BufRead> FastaReader<R> {
    fn new(reader: R) -> Self {
        FastaReader {
            lines: reader.lines(),
            line_no: 0,
            pending: None,
            done: false,
        }
    }
}

impl<R: BufRead> Iterator for FastaReader<R> {
    type Item = Result<FastaRecord>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let mut current = self.pending.take();
        let mut seq = Vec::new();
        loop {
            let line = match self.lines.next() {
                None => {
                    self.done = true;
                    break;
                }
                Some(Err(e)) => return Some(Err(e.into())),
                Some(Ok(l)) => l,
            };
            self.line_no += 1;
            let line = line.trim_end();
            if let Some(header) = line.strip_prefix('>') {
                let id = header.split_whitespace().next().unwrap_or("").to_string();
                if id.is_empty() {
                    return Some(Err(Error::Parse {
                        line: self.line_no,
                        msg: "FASTA header without id".into(),
                    }));
                }
                if current.is_some() {
                    self.pending = Some((id, self.line_no));
                    break;
                }
                current = Some((id, self.line_no));
            } else if !line.is_empty() {
                if current.is_none() {
                    return Some(Err(Error::Parse {
                        line: self.line_no,
                        msg: "sequence data before first FASTA header".into(),
                    }));
                }
                seq.extend(line.bytes().map(|b| b.to_ascii_uppercase()));
            }
        }
        let (id, line) = current?;
        if seq.is_empty() {
            return Some(Err(Error::Parse {
                line,
                msg: format!("FASTA record {id:?} has no sequence"),
            }));
        }
        Some(Ok(FastaRecord { id, seq }))
    }
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Error::Input(format!("cannot open {}: {e}", path.display())))
}

/// Streams pairs from `paths` (one TSV file, or text and pattern FASTA files).
pub fn read_pairs(
    paths: &[PathBuf],
    format: PairFormat,
) -> Result<Box<dyn Iterator<Item = Result<SeqPairRecord>>>> {
    match (format, paths) {
        (PairFormat::Tsv, [path]) => Ok(Box::new(TsvPairs::new(open(path)?))),
        (PairFormat::FastaPair, [texts, patterns]) => {
            let mut a = FastaReader::new(open(texts)?);
            let mut b = FastaReader::new(open(patterns)?);
            let mut index = 0;
            Ok(Box::new(std::iter::from_fn(move || {
                index += 1;
                match (a.next(), b.next()) {
                    (None, None) => None,
                    (Some(Err(e)), _) | (_, Some(Err(e))) => Some(Err(e)),
                    (Some(Ok(t)), Some(Ok(p))) => Some(Ok(SeqPairRecord {
                        id: if t.id == p.id {
                            t.id
                        } else {
                            format!("{}|{}", t.id, p.id)
                        },
                        text: t.seq,
                        pattern: p.seq,
                        truth: None,
                    })),
                    _ => Some(Err(Error::Input(format!(
                        "FASTA files have different record counts (mismatch at record {index})"
                    )))),
                }
            })))
        }
        (PairFormat::Tsv, _) => Err(Error::Config("tsv format takes exactly one input".into())),
        (PairFormat::FastaPair, _) => Err(Error::Config(
            "fasta-pair format takes two inputs (texts, patterns)".into(),
        )),
    }
}

/// Collects a record stream, stopping at the first error and rejecting duplicate ids.
pub fn collect_pairs(
    records: impl IntoIterator<Item = Result<SeqPairRecord>>,
) -> Result<Vec<SeqPairRecord>> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for rec in records {
        let rec = rec?;
        if !seen.insert(rec.id.clone()) {
            return Err(Error::Input(format!("duplicate pair id {:?}", rec.id)));
        }
        out.push(rec);
    }
    Ok(out)
}

pub fn write_pairs_tsv<W: Write>(out: &mut W, pairs: &[SeqPairRecord]) -> Result<()> {
    for p in pairs {
        out.write_all(p.id.as_bytes())?;
        out.write_all(b"\t")?;
        out.write_all(&p.text)?;
        out.write_all(b"\t")?;
        out.write_all(&p.pattern)?;
        if let Some(truth) = &p.truth {
            write!(out, "\t{truth}")?;
        }
        out.write_all(b"\n")?;
    }
    Ok(())
}

/// `id<TAB>distance<TAB>cigar`; pairs without an alignment within `k` print `*`.
pub fn write_results_tsv<W: Write>(out: &mut W, results: &[PairResult]) -> Result<()> {
    for r in results {
        match &r.alignment {
            Some(a) => writeln!(out, "{}\t{}\t{}", r.id, a.distance, a.cigar)?,
            None => writeln!(out, "{}\t*\t*", r.id)?,
        }
    }
    Ok(())
}

#[derive(Serialize)]
pub struct ResultRow<'a> {
    pub id: &'a str,
    pub distance: Option<usize>,
    pub cigar: Option<String>,
}

pub fn result_rows(results: &[PairResult]) -> Vec<ResultRow<'_>> {
    results
        .iter()
        .map(|r| ResultRow {
            id: &r.id,
            distance: r.alignment.as_ref().map(|a| a.distance),
            cigar: r.alignment.as_ref().map(|a| a.cigar.to_string()),
        })
        .collect()
}
