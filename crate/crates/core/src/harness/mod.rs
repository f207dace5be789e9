//! Dataset I/O, simulation, batch execution and accuracy sweeps.

pub mod batch;
pub mod io;
pub mod simulate;
pub mod sweep;

pub use batch::{run_batch, BatchReport, BatchStats, PairResult};
pub use io::{collect_pairs, read_pairs, PairFormat, SeqPairRecord};
pub use simulate::{simulate_pairs, ErrorMix, SimConfig};
pub use sweep::{sweep, Combo, OverlapRule, QuantileScores, SweepConfig, SweepReport, SweepRow};
