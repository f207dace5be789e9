//! Deterministic pair simulator with ground-truth alignments.
//!
//! Randomness comes from ChaCha8 seeded through `seed_from_u64`, so a seed
//! reproduces the same dataset on every platform. Each pair draws a uniform
//! random text; the pattern walks the text and, at every text position with
//! probability `error_rate`, applies one error:
//!
//! * substitution: a different base replaces the text base (`X`)
//! * insertion: a random base is added before the text base, which is then
//!   copied (`I` followed by `=`)
//! * deletion: the text base is skipped (`D`)

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cigar::Cigar;
use crate::error::{Error, Result};
use crate::harness::io::SeqPairRecord;
use crate::traceback::Op;

const BASES: &[u8; 4] = b"ACGT";

/// Relative frequencies of substitutions, insertions and deletions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErrorMix {
    pub sub: f64,
    pub ins: f64,
    pub del: f64,
}

impl Default for ErrorMix {
    fn default() -> Self {
        ErrorMix {
            sub: 1.0 / 3.0,
            ins: 1.0 / 3.0,
            del: 1.0 / 3.0,
        }
    }
}

impl ErrorMix {
    pub fn substitutions_only() -> Self {
        ErrorMix {
            sub: 1.0,
            ins: 0.0,
            del: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let parts = [self.sub, self.ins, self.del];
        if parts.iter().any(|p| !(0.0..=1.0).contains(p))
            || ((parts.iter().sum::<f64>()) - 1.0).abs() > 1e-9
        {
            return Err(Error::Config(format!(
                "error mix {self:?} must be three fractions summing to 1"
            )));
        }
        Ok(())
    }
}

impl std::str::FromStr for ErrorMix {
    type Err = Error;

    /// `sub,ins,del`, e.g. `0.6,0.2,0.2`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<f64> = s
            .split(',')
            .map(|p| p.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Config(format!("bad error mix {s:?}: {e}")))?;
        let [sub, ins, del] = parts[..] else {
            return Err(Error::Config(format!("error mix {s:?} needs three values")));
        };
        let mix = ErrorMix { sub, ins, del };
        mix.validate()?;
        Ok(mix)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimConfig {
    pub count: usize,
    pub length: usize,
    pub error_rate: f64,
    pub mix: ErrorMix,
    pub seed: u64,
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        self.mix.validate()?;
        if !(0.0..1.0).contains(&self.error_rate) {
            return Err(Error::Config(format!(
                "error rate {} outside [0, 1)",
                self.error_rate
            )));
        }
        if self.length == 0 {
            return Err(Error::Config("simulated length must be positive".into()));
        }
        Ok(())
    }
}

fn random_base(rng: &mut ChaCha8Rng) -> u8 {
    BASES[rng.gen_range(0..4)]
}

pub fn random_sequence(rng: &mut ChaCha8Rng, len: usize) -> Vec<u8> {
    (0..len).map(|_| random_base(rng)).collect()
}

/// Mutates `text` into a pattern, returning it and the true alignment.
/// Patterns that would come out empty keep their last text base.
pub fn mutate(
    rng: &mut ChaCha8Rng,
    text: &[u8],
    error_rate: f64,
    mix: &ErrorMix,
) -> (Vec<u8>, Cigar) {
    let mut pattern = Vec::with_capacity(text.len() + text.len() / 8);
    let mut truth = Cigar::new();
    for (idx, &c) in text.iter().enumerate() {
        if rng.gen::<f64>() >= error_rate {
            pattern.push(c);
            truth.push(Op::Match);
            continue;
        }
        let pick = rng.gen::<f64>();
        if pick < mix.sub {
            let shift = rng.gen_range(1..4);
            let code = BASES.iter().position(|&b| b == c).unwrap_or(0);
            pattern.push(BASES[(code + shift) % 4]);
            truth.push(Op::Substitution);
        } else if pick < mix.sub + mix.ins {
            pattern.push(random_base(rng));
            truth.push(Op::Insertion);
            pattern.push(c);
            truth.push(Op::Match);
        } else if pattern.is_empty() && idx + 1 == text.len() {
            pattern.push(c);
            truth.push(Op::Match);
        } else {
            truth.push(Op::Deletion);
        }
    }
    (pattern, truth)
}

/// Simulates `count` pairs; record ids are `sim<index>` and `truth` is set.
pub fn simulate_pairs(config: &SimConfig) -> Result<Vec<SeqPairRecord>> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    Ok((0..config.count)
        .map(|i| {
            let text = random_sequence(&mut rng, config.length);
            let (pattern, truth) = mutate(&mut rng, &text, config.error_rate, &config.mix);
            SeqPairRecord {
                id: format!("sim{i}"),
                text,
                pattern,
                truth: Some(truth),
            }
        })
        .collect())
}
