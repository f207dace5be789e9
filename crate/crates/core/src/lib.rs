//! Pairwise DNA alignment with bit-parallel windowed dynamic programming.
//!
//! Each window builds a table of bitvectors `R[i][d]` (bit `j` is zero iff
//! `text[i..]` and `pattern[j..]` are within `d` edits), reads the edit
//! distance off `R[0][*]`, and traces back an edit transcript. Three options
//! shrink the work without changing any result:
//!
//! * `sene`: store one entry per cell instead of three edge vectors and
//!   regenerate edges during traceback,
//! * `dent`: drop the columns and low bits a truncated traceback never reads,
//! * `early_termination`: stop building rows once the distance is known.
//!
//! ```
//! use genasm::{align, AlignerConfig, Workspace};
//!
//! let mut ws = Workspace::new();
//! let r = align(b"ACGT", b"ACGA", &AlignerConfig::long_reads(), &mut ws).unwrap();
//! assert_eq!(r.distance, 1);
//! assert_eq!(r.cigar.to_string(), "3=1X");
//! ```

pub mod aligner;
pub mod bitvec;
pub mod cigar;
pub mod dc;
pub mod error;
pub mod harness;
pub mod oracle;
pub mod traceback;

pub use aligner::{align, align_any, align_single_window, AlignerConfig, AlignmentResult, Mode};
pub use bitvec::{BitVector, MAX_W};
pub use cigar::Cigar;
pub use dc::{
    build_pattern_masks, compute_dc, theorem1_bit, Counters, DcResult, DpTable, PatternMasks,
    StoragePolicy, WindowTask, Workspace,
};
pub use error::{Error, Result};
pub use traceback::{regen_edges, traceback, EdgeSet, Op, Transcript};
