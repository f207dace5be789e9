//! `genasm` command line: align, simulate, sweep and bench.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};

use genasm::harness::io::{result_rows, write_pairs_tsv, write_results_tsv};
use genasm::harness::sweep::write_csv;
use genasm::harness::{
    collect_pairs, read_pairs, run_batch, simulate_pairs, sweep, Combo, ErrorMix, OverlapRule,
    PairFormat, SeqPairRecord, SimConfig, SweepConfig,
};
use genasm::oracle::ScoringParams;
use genasm::{AlignerConfig, Error, Mode};

#[derive(Parser)]
#[command(
    name = "genasm",
    version,
    about = "Bit-parallel windowed DNA pair alignment"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Align every pair and write `id<TAB>distance<TAB>cigar`.
    Align(AlignArgs),
    /// Write a simulated TSV dataset with ground-truth CIGARs.
    Simulate(SimulateArgs),
    /// Accuracy sweep over window sizes and improvement settings (CSV).
    Sweep(SweepArgs),
    /// Align and report throughput and instrumentation counters.
    Bench(AlignArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Windowed,
    Single,
}

#[derive(Args)]
struct InputArgs {
    /// One TSV file, or text and pattern FASTA files.
    #[arg(long, num_args = 1..=2, required = true)]
    input: Vec<PathBuf>,
    /// `tsv` or `fasta-pair`.
    #[arg(long, default_value = "tsv")]
    format: PairFormat,
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

#[derive(Args)]
struct AlignArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long = "W", default_value_t = 64)]
    window: usize,
    #[arg(long = "O", default_value_t = 33)]
    overlap: usize,
    /// Store one entry per cell and regenerate edges (default on).
    #[arg(long, overrides_with = "no_sene")]
    sene: bool,
    #[arg(long, overrides_with = "sene")]
    no_sene: bool,
    /// Drop table regions a truncated traceback never reads (default on, windowed only).
    #[arg(long, overrides_with = "no_dent")]
    dent: bool,
    #[arg(long, overrides_with = "dent")]
    no_dent: bool,
    /// Stop building rows once the distance is known (default on).
    #[arg(long, overrides_with = "no_et")]
    et: bool,
    #[arg(long, overrides_with = "et")]
    no_et: bool,
    #[arg(long, value_enum, default_value = "windowed")]
    mode: ModeArg,
    /// Edit budget in single mode (defaults to the longer sequence).
    #[arg(long)]
    k: Option<usize>,
    /// Output file (stdout if absent).
    #[arg(long)]
    output: Option<PathBuf>,
    /// JSON instead of TSV.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    count: usize,
    #[arg(long)]
    length: usize,
    #[arg(long)]
    error_rate: f64,
    /// Substitution, insertion and deletion fractions.
    #[arg(
        long,
        default_value = "0.3333333333333333,0.3333333333333333,0.3333333333333334"
    )]
    mix: ErrorMix,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long = "W-list", value_delimiter = ',', default_value = "16,32,64,96")]
    windows: Vec<usize>,
    /// `half-plus-one` or `fixed:<O>`.
    #[arg(long = "O-rule", default_value = "half-plus-one")]
    overlap_rule: OverlapRule,
    /// `all` or a comma list of sene/dent/et bits such as `000,111`.
    #[arg(long, default_value = "all")]
    combos: String,
    /// Report file (stdout if absent).
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long)]
    json: bool,
    /// Fill the pairs_per_s column (otherwise NA, keeping the report reproducible).
    #[arg(long)]
    timing: bool,
    #[arg(long, default_value_t = 2)]
    match_bonus: i64,
    #[arg(long, default_value_t = 4)]
    mismatch_penalty: i64,
    #[arg(long, default_value_t = 4)]
    gap_open: i64,
    #[arg(long, default_value_t = 2)]
    gap_extend: i64,
}

fn flag(on: bool, off: bool) -> bool {
    on || !off
}

impl AlignArgs {
    fn config(&self) -> AlignerConfig {
        match self.mode {
            ModeArg::Windowed => AlignerConfig::windowed(self.window, self.overlap)
                .with_improvements(
                    flag(self.sene, self.no_sene),
                    flag(self.dent, self.no_dent),
                    flag(self.et, self.no_et),
                ),
            ModeArg::Single => {
                let mut c = AlignerConfig::single_window(self.k.unwrap_or(usize::MAX));
                c.sene = flag(self.sene, self.no_sene);
                // DENT is off by default here; asking for it is rejected by validate
                c.dent = self.dent;
                c.early_termination = flag(self.et, self.no_et);
                c
            }
        }
    }
}

fn load(args: &InputArgs) -> anyhow::Result<Vec<SeqPairRecord>> {
    Ok(collect_pairs(read_pairs(&args.input, args.format)?)?)
}

fn writer(path: &Option<PathBuf>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => {
            Box::new(BufWriter::new(File::create(p).map_err(|e| {
                Error::Input(format!("cannot create {}: {e}", p.display()))
            })?))
        }
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run_align(args: &AlignArgs, bench: bool) -> anyhow::Result<()> {
    let config = args.config();
    if args.k.is_some() && config.mode != Mode::SingleWindow {
        return Err(Error::Config("--k only applies to --mode single".into()).into());
    }
    let pairs = load(&args.input)?;
    let report = run_batch(&pairs, &config, args.input.threads)?;
    let mut out = writer(&args.output)?;
    if bench {
        let s = &report.stats;
        if args.json {
            serde_json::to_writer_pretty(
                &mut out,
                &serde_json::json!({ "config": config, "stats": s }),
            )?;
            writeln!(out)?;
        } else {
            writeln!(out, "pairs\t{}", s.pairs)?;
            writeln!(out, "not_found\t{}", s.not_found)?;
            writeln!(out, "windows\t{}", s.windows)?;
            writeln!(out, "seconds\t{:.6}", s.seconds)?;
            writeln!(out, "pairs_per_s\t{:.1}", s.pairs_per_s)?;
            writeln!(out, "stored_bits\t{}", s.counters.stored_bits)?;
            writeln!(out, "table_writes\t{}", s.counters.table_writes)?;
            writeln!(out, "table_reads\t{}", s.counters.table_reads)?;
            writeln!(out, "rows_computed\t{}", s.counters.rows_computed)?;
            writeln!(out, "cells_computed\t{}", s.counters.cells_computed)?;
        }
    } else if args.json {
        serde_json::to_writer(&mut out, &result_rows(&report.results))?;
        writeln!(out)?;
    } else {
        write_results_tsv(&mut out, &report.results)?;
    }
    out.flush().context("writing output")?;
    Ok(())
}

fn run_simulate(args: &SimulateArgs) -> anyhow::Result<()> {
    let pairs = simulate_pairs(&SimConfig {
        count: args.count,
        length: args.length,
        error_rate: args.error_rate,
        mix: args.mix,
        seed: args.seed,
    })?;
    let mut out = writer(&args.output)?;
    write_pairs_tsv(&mut out, &pairs)?;
    out.flush().context("writing output")?;
    Ok(())
}

fn run_sweep(args: &SweepArgs) -> anyhow::Result<()> {
    let config = SweepConfig {
        windows: args.windows.clone(),
        overlap_rule: args.overlap_rule,
        combos: Combo::parse_list(&args.combos)?,
        scoring: ScoringParams {
            match_bonus: args.match_bonus,
            mismatch_penalty: args.mismatch_penalty,
            gap_open: args.gap_open,
            gap_extend: args.gap_extend,
        },
        threads: args.input.threads,
    };
    let pairs = load(&args.input)?;
    let mut report = sweep(&pairs, &config)?;
    let mut out = writer(&args.report)?;
    if args.json {
        if !args.timing {
            for r in &mut report.rows {
                r.pairs_per_s = 0.0;
            }
        }
        serde_json::to_writer_pretty(&mut out, &report)?;
        writeln!(out)?;
    } else {
        write_csv(&mut out, &report, args.timing)?;
    }
    out.flush().context("writing report")?;
    Ok(())
}

fn exit_code(e: &anyhow::Error) -> u8 {
    e.chain()
        .find_map(|c| c.downcast_ref::<Error>())
        .map_or(1, |e| e.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match &cli.command {
        Command::Align(a) => run_align(a, false),
        Command::Bench(a) => run_align(a, true),
        Command::Simulate(a) => run_simulate(a),
        Command::Sweep(a) => run_sweep(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
