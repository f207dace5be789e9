//! Acceptance suite. Prints one `[PASS]`/`[FAIL]` line per criterion and
//! exits non-zero if any criterion fails. Run with
//! `cargo test -p genasm --test acceptance`.

mod common;

use std::time::{Duration, Instant};

use genasm::harness::io::write_results_tsv;
use genasm::harness::simulate::mutate as sim_mutate;
use genasm::harness::{run_batch, simulate_pairs, ErrorMix, SeqPairRecord, SimConfig};
use genasm::oracle::global_align;
use genasm::{
    align, align_single_window, compute_dc, theorem1_bit, AlignerConfig, StoragePolicy, WindowTask,
    Workspace,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{edit_distance, random_seq, replay, suffix_distances};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

/// Pairs with lengths in `lens` and a per-pair error rate in `[0, max_rate]`.
fn error_corpus(
    seed: u64,
    count: usize,
    lens: std::ops::RangeInclusive<usize>,
    max_rate: f64,
) -> Vec<(Vec<u8>, Vec<u8>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(lens.clone());
            let rate = rng.gen_range(0.0..=max_rate);
            let text = random_seq(&mut rng, n);
            let pattern = common::mutate(&mut rng, &text, rate);
            (text, pattern)
        })
        .collect()
}

fn theorem1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut ws = Workspace::new();
    let (mut checked, mut violations) = (0u64, 0u64);
    let mut first = None;
    for _ in 0..500 {
        let (n, m) = (rng.gen_range(1..=12), rng.gen_range(1..=12));
        let (text, pattern) = (random_seq(&mut rng, n), random_seq(&mut rng, m));
        let oracle = suffix_distances(&text, &pattern);
        let task = WindowTask::new(&text, &pattern, n);
        for policy in [StoragePolicy::SeneEntries, StoragePolicy::BaselineEdges] {
            let dc = compute_dc(&task, policy, false, &mut ws).unwrap();
            for d in 0..=n {
                for i in 0..=n {
                    for j in 0..m {
                        let bit = theorem1_bit(dc.table, i, d, j).unwrap();
                        checked += 1;
                        if bit != (oracle[i][j] > d) {
                            violations += 1;
                            first.get_or_insert_with(|| format!("{policy:?} R[{i}][{d}] bit {j}"));
                        }
                    }
                }
            }
        }
    }
    outcome(
        violations == 0,
        format!(
            "{checked} bits checked, {violations} violations{}",
            first.map(|f| format!(" (first {f})")).unwrap_or_default()
        ),
    )
}

fn single_window_exact(max_len: usize) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(202 + max_len as u64);
    let mut ws = Workspace::new();
    let config = AlignerConfig::single_window(max_len);
    let mut bad = Vec::new();
    for idx in 0..10_000 {
        let (n, m) = (rng.gen_range(1..=max_len), rng.gen_range(1..=max_len));
        let text = random_seq(&mut rng, n);
        // half the pairs related, half unrelated
        let pattern = if idx % 2 == 0 {
            let rate = rng.gen_range(0.0..0.3);
            let mut p = common::mutate(&mut rng, &text, rate);
            p.truncate(max_len);
            p
        } else {
            random_seq(&mut rng, m)
        };
        let expected = edit_distance(&text, &pattern);
        match align_single_window(&text, &pattern, max_len, &config, &mut ws) {
            Ok(Some(r)) => {
                let cigar = r.cigar.to_string();
                match replay(&cigar, &text, &pattern) {
                    Ok(e) if r.distance == expected && e == expected => {}
                    Ok(e) => bad.push(format!(
                        "pair {idx}: distance {} / cigar edits {e}, oracle {expected}",
                        r.distance
                    )),
                    Err(msg) => bad.push(format!("pair {idx}: cigar {cigar} invalid: {msg}")),
                }
            }
            Ok(None) => bad.push(format!("pair {idx}: not found, oracle {expected}")),
            Err(e) => bad.push(format!("pair {idx}: error {e}")),
        }
    }
    outcome(
        bad.is_empty(),
        format!(
            "10000 pairs up to {max_len}, {} violations {}",
            bad.len(),
            bad.first().cloned().unwrap_or_default()
        ),
    )
}

fn improvement_invariance(window: usize, overlap: usize) -> Outcome {
    let pairs = error_corpus(303, 1000, 100..=2000, 0.20);
    let combos: Vec<(bool, bool, bool)> = (0..8)
        .map(|b| (b & 4 != 0, b & 2 != 0, b & 1 != 0))
        .collect();
    let mut ws = Workspace::new();
    let mut bad = Vec::new();
    for (idx, (text, pattern)) in pairs.iter().enumerate() {
        let mut reference: Option<(usize, String)> = None;
        for &(sene, dent, et) in &combos {
            let config = AlignerConfig::windowed(window, overlap).with_improvements(sene, dent, et);
            match align(text, pattern, &config, &mut ws) {
                Ok(r) => {
                    let got = (r.distance, r.cigar.to_string());
                    if let Err(msg) = replay(&got.1, text, pattern) {
                        bad.push(format!(
                            "pair {idx} {sene}/{dent}/{et}: cigar invalid: {msg}"
                        ));
                    }
                    match &reference {
                        None => reference = Some(got),
                        Some(r0) if *r0 != got => bad.push(format!(
                            "pair {idx} {sene}/{dent}/{et}: {} differs from baseline {}",
                            got.0, r0.0
                        )),
                        _ => {}
                    }
                }
                Err(e) => bad.push(format!("pair {idx} {sene}/{dent}/{et}: error {e}")),
            }
        }
    }
    outcome(
        bad.is_empty(),
        format!(
            "1000 pairs x 8 combinations at W={window} O={overlap}, {} violations {}",
            bad.len(),
            bad.first().cloned().unwrap_or_default()
        ),
    )
}

fn footprint() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let text = random_seq(&mut rng, 64);
    let pattern = random_seq(&mut rng, 64);
    let task = WindowTask::new(&text, &pattern, 64);
    let mut ws = Workspace::new();
    let mut bits = |p| {
        compute_dc(&task, p, false, &mut ws)
            .unwrap()
            .table
            .counters()
            .stored_bits
    };
    let base = bits(StoragePolicy::BaselineEdges);
    let sene = bits(StoragePolicy::SeneEntries);
    let both = bits(StoragePolicy::DentTrimmed {
        sene: true,
        keep: 64 - 33 + 1,
    });
    // integer forms of base/sene >= 2.9 and base/both >= 12
    let pass = base * 10 >= sene * 29 && base >= both * 12;
    outcome(
        pass,
        format!(
            "baseline {base}, sene {sene}, sene+dent {both} bits; ratios {:.4} and {:.4}",
            base as f64 / sene as f64,
            base as f64 / both as f64
        ),
    )
}

fn early_termination() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    let config = AlignerConfig::single_window(64);
    let mut ws = Workspace::new();
    let mut mean_rows = |pairs: &[(Vec<u8>, Vec<u8>)]| {
        let total: u64 = pairs
            .iter()
            .map(|(t, p)| {
                align_single_window(t, p, 64, &config, &mut ws)
                    .unwrap()
                    .expect("k = 64 always finds an alignment")
                    .counters
                    .rows_computed
            })
            .sum();
        total as f64 / pairs.len() as f64 / 65.0
    };
    let random: Vec<_> = (0..2000)
        .map(|_| (random_seq(&mut rng, 64), random_seq(&mut rng, 64)))
        .collect();
    let similar: Vec<_> = simulate_pairs(&SimConfig {
        count: 2000,
        length: 64,
        error_rate: 0.05,
        mix: ErrorMix::default(),
        seed: 506,
    })
    .unwrap()
    .into_iter()
    .map(|p| (p.text, p.pattern))
    .collect();
    let (r, s) = (mean_rows(&random), mean_rows(&similar));
    outcome(
        r <= 0.80 && s <= 0.25,
        format!("random {r:.4} (<= 0.80), 5% error {s:.4} (<= 0.25)"),
    )
}

fn upper_bound_and_convergence() -> Outcome {
    let pairs = error_corpus(606, 1000, 100..=2000, 0.20);
    let exact: Vec<usize> = pairs.iter().map(|(t, p)| edit_distance(t, p)).collect();
    let mut ws = Workspace::new();
    let mut below = 0;
    let mut fracs = Vec::new();
    for w in [16, 32, 64, 96] {
        let config = AlignerConfig::windowed(w, w / 2 + 1);
        let mut optimal = 0;
        for ((t, p), &e) in pairs.iter().zip(&exact) {
            let d = align(t, p, &config, &mut ws).unwrap().distance;
            below += usize::from(d < e);
            optimal += usize::from(d == e);
        }
        fracs.push(optimal as f64 / pairs.len() as f64);
    }
    let monotone = fracs.windows(2).all(|f| f[0] <= f[1]);
    outcome(
        below == 0 && monotone,
        format!(
            "{below} pairs below the exact distance; frac_optimal at W=16,32,64,96: {fracs:.3?}"
        ),
    )
}

fn results_bytes(pairs: &[SeqPairRecord], threads: usize) -> Vec<u8> {
    let report = run_batch(pairs, &AlignerConfig::long_reads(), threads).unwrap();
    let mut out = Vec::new();
    write_results_tsv(&mut out, &report.results).unwrap();
    for r in &report.results {
        out.extend(
            format!(
                "{:?}\n",
                r.alignment.as_ref().map(|a| (a.windows, a.counters))
            )
            .bytes(),
        );
    }
    out
}

fn determinism() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(808);
    let pairs: Vec<SeqPairRecord> = (0..1000)
        .map(|i| {
            let n = rng.gen_range(100..=2000);
            let rate = rng.gen_range(0.0..0.2);
            let text = random_seq(&mut rng, n);
            let (pattern, _) = sim_mutate(&mut rng, &text, rate, &ErrorMix::default());
            SeqPairRecord::new(format!("p{i}"), &text, &pattern)
        })
        .collect();
    let one = results_bytes(&pairs, 1);
    let diffs: Vec<usize> = [4, 8]
        .into_iter()
        .filter(|&t| results_bytes(&pairs, t) != one)
        .collect();
    outcome(
        diffs.is_empty(),
        format!(
            "{} bytes of output at 1 thread; differing thread counts: {diffs:?}",
            one.len()
        ),
    )
}

fn min_time<T>(reps: usize, mut f: impl FnMut() -> T) -> Duration {
    (0..reps)
        .map(|_| {
            let start = Instant::now();
            std::hint::black_box(f());
            start.elapsed()
        })
        .min()
        .unwrap()
}

fn speed_sanity() -> Outcome {
    let pair = simulate_pairs(&SimConfig {
        count: 1,
        length: 10_000,
        error_rate: 0.05,
        mix: ErrorMix::default(),
        seed: 909,
    })
    .unwrap()
    .remove(0);
    let config = AlignerConfig::long_reads();
    let mut ws = Workspace::new();
    let windowed = min_time(5, || {
        align(&pair.text, &pair.pattern, &config, &mut ws).unwrap()
    });
    let oracle = min_time(2, || global_align(&pair.text, &pair.pattern).unwrap());
    let ratio = oracle.as_secs_f64() / windowed.as_secs_f64();
    outcome(
        ratio >= 10.0,
        format!("windowed {windowed:.2?}, oracle {oracle:.2?}, speedup {ratio:.1}x (>= 10x)"),
    )
}

type Criterion = (&'static str, f64, fn() -> Outcome);

fn word_boundaries() -> Outcome {
    let parts = [
        single_window_exact(65),
        single_window_exact(128),
        improvement_invariance(65, 33),
        improvement_invariance(128, 65),
    ];
    outcome(
        parts.iter().all(|p| p.pass),
        parts
            .iter()
            .map(|p| p.detail.as_str())
            .collect::<Vec<_>>()
            .join(" | "),
    )
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("suffix-distance bit equivalence", 10.0, theorem1),
        ("single-window exactness", 60.0, || single_window_exact(64)),
        ("improvement invariance", 120.0, || {
            improvement_invariance(64, 33)
        }),
        ("footprint arithmetic", 5.0, footprint),
        ("early-termination work reduction", 30.0, early_termination),
        (
            "upper bound and convergence",
            300.0,
            upper_bound_and_convergence,
        ),
        ("word-boundary correctness", 180.0, word_boundaries),
        ("determinism under concurrency", 60.0, determinism),
        ("windowed vs quadratic speed", f64::INFINITY, speed_sanity),
    ];
    let filter: Vec<String> = std::env::args()
        .skip(1)
        .filter(|a| !a.starts_with('-'))
        .collect();
    let mut failed = 0;
    for (idx, (name, budget, run)) in criteria.iter().enumerate() {
        let number = idx + 1;
        if !filter.is_empty() && !filter.iter().any(|f| f == &number.to_string()) {
            continue;
        }
        let start = Instant::now();
        let o = run();
        let secs = start.elapsed().as_secs_f64();
        let pass = o.pass && secs < *budget;
        failed += usize::from(!pass);
        let budget_note = if budget.is_finite() {
            format!(", budget {budget:.0}s")
        } else {
            String::new()
        };
        println!(
            "[{}] criterion {number}: {name}: {} ({secs:.1}s{budget_note})",
            if pass { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
