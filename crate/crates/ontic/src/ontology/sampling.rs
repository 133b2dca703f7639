//! Seeded Monte Carlo experiments: draw λ ~ μ, then k ~ ξ(·|λ).
//!
//! Sampling is by inverse CDF over the canonical point order. Each uniform
//! draw is a 64-bit integer `r` read as the dyadic rational `r / 2^64`; the
//! cumulative thresholds are converted once into exact integer cut points
//! `⌈c · 2^64⌉`, so the comparison `r / 2^64 < c` is decided without any
//! floating point.
//!
//! Samples are split into fixed blocks of [`SAMPLING_BLOCK`] draws. Block
//! `b` reads ChaCha20 stream `b` of the generator seeded with `seed`, so the
//! counts depend only on `(seed, samples)` and not on how many worker threads
//! processed the blocks.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{QSqrt2, Rational};
use crate::ontology::{EpistemicState, OntologicalModel, ResponseFunctions};

pub const SAMPLING_BLOCK: u64 = 8192;

const TWO_POW_64: u128 = 1 << 64;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OutcomeCounts {
    pub samples: u64,
    pub seed: u64,
    /// Indexed by zero-based outcome.
    pub counts: Vec<u64>,
}

impl OutcomeCounts {
    pub fn frequency(&self, outcome: usize) -> f64 {
        self.counts[outcome] as f64 / self.samples as f64
    }
}

/// Inverse-CDF table over a finite list of items.
struct CutTable {
    items: Vec<usize>,
    cuts: Vec<u128>,
}

impl CutTable {
    fn new(weighted: impl IntoIterator<Item = (usize, QSqrt2)>) -> Self {
        let mut items = Vec::new();
        let mut cuts = Vec::new();
        let mut cumulative = QSqrt2::zero();
        for (item, w) in weighted {
            cumulative += &w;
            items.push(item);
            cuts.push(scaled_ceil(&cumulative));
        }
        // The last threshold is exactly 1 for normalized input; pin it so a
        // draw can never fall past the end.
        if let Some(last) = cuts.last_mut() {
            *last = TWO_POW_64;
        }
        CutTable { items, cuts }
    }

    fn position(&self, r: u64) -> usize {
        let r = r as u128;
        self.cuts.partition_point(|&cut| cut <= r)
    }

    fn draw(&self, r: u64) -> usize {
        self.items[self.position(r)]
    }
}

/// `⌈c · 2^64⌉` clamped to `[0, 2^64]`, by exact bisection.
fn scaled_ceil(c: &QSqrt2) -> u128 {
    let scaled = c * &QSqrt2::from_rational(Rational::from_integer(BigInt::from(TWO_POW_64)));
    let as_q = |m: u128| QSqrt2::from_rational(Rational::from_integer(BigInt::from(m)));
    if scaled <= QSqrt2::zero() {
        return 0;
    }
    if scaled >= as_q(TWO_POW_64) {
        return TWO_POW_64;
    }
    // Smallest m with m >= scaled.
    let (mut lo, mut hi) = (0u128, TWO_POW_64);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if as_q(mid) >= scaled {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    lo
}

struct Sampler {
    points: CutTable,
    /// One outcome table per support point, aligned with `points.items`.
    outcomes: Vec<CutTable>,
}

impl Sampler {
    fn new(mu: &EpistemicState, xi: &ResponseFunctions) -> Result<Self> {
        if mu.space() != xi.space() {
            return Err(Error::SpaceMismatch);
        }
        if mu.total() != QSqrt2::one() || mu.support().any(|(_, w)| w.sign() < 0) {
            return Err(Error::NotNormalizedTable("epistemic state".into()));
        }
        let points = CutTable::new(mu.support().map(|(i, w)| (i, w.clone())));
        let outcomes = points
            .items
            .iter()
            .map(|&index| {
                let column = xi.column(index);
                let sum: QSqrt2 = column.iter().sum();
                if !sum.is_one() || column.iter().any(|v| v.sign() < 0) {
                    return Err(Error::NotNormalizedTable(format!(
                        "response functions at ({})",
                        xi.space().point_label(index)
                    )));
                }
                Ok(CutTable::new(column.into_iter().enumerate()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Sampler { points, outcomes })
    }

    fn run_block(&self, seed: u64, block: u64, len: u64, counts: &mut [u64]) {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        rng.set_stream(block);
        for _ in 0..len {
            let point = self.points.position(rng.next_u64());
            let k = self.outcomes[point].draw(rng.next_u64());
            counts[k] += 1;
        }
    }
}

fn blocks(samples: u64) -> impl Iterator<Item = (u64, u64)> + Clone {
    let full = samples / SAMPLING_BLOCK;
    let rest = samples % SAMPLING_BLOCK;
    (0..full)
        .map(|b| (b, SAMPLING_BLOCK))
        .chain((rest > 0).then_some((full, rest)))
}

/// Single-threaded sampling.
pub fn simulate(model: &OntologicalModel, prep: &str, meas: &str, samples: u64, seed: u64) -> Result<OutcomeCounts> {
    simulate_parallel(model, prep, meas, samples, seed, 1)
}

/// Splits the blocks across `jobs` threads. Output is identical for every
/// value of `jobs`.
pub fn simulate_parallel(
    model: &OntologicalModel,
    prep: &str,
    meas: &str,
    samples: u64,
    seed: u64,
    jobs: usize,
) -> Result<OutcomeCounts> {
    if samples == 0 {
        return Err(Error::NoSamples);
    }
    let mu = model.preparation(prep)?;
    let xi = model.measurement(meas)?;
    let sampler = Sampler::new(mu, xi)?;
    let k = xi.outcome_count();

    let counts = if jobs <= 1 {
        let mut counts = vec![0u64; k];
        for (b, len) in blocks(samples) {
            sampler.run_block(seed, b, len, &mut counts);
        }
        counts
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .expect("thread pool");
        let work: Vec<(u64, u64)> = blocks(samples).collect();
        pool.install(|| {
            work.par_iter()
                .map(|&(b, len)| {
                    let mut counts = vec![0u64; k];
                    sampler.run_block(seed, b, len, &mut counts);
                    counts
                })
                .reduce(
                    || vec![0u64; k],
                    |mut a, b| {
                        a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                        a
                    },
                )
        })
    };
    Ok(OutcomeCounts { samples, seed, counts })
}
