//! Monte Carlo estimation of the number of reachable positions.
//!
//! Sample `i` belongs to block `i / block_size`; each block draws from its own
//! ChaCha8 stream keyed by `(seed, block)`, so the drawn ranks do not depend on
//! how blocks are spread over workers.

use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codec::{is_canonical, Codec};
use crate::error::{Error, Result};
use crate::movegen::{has_dead_piece, has_two_pawns, in_check};
use crate::search::{search_to_kk, HeuristicParams, ResourceLimits, Verdict};
use crate::types::Color;
use crate::variant::Variant;

pub const DEFAULT_BLOCK_SIZE: u64 = 1000;

/// Furthest point a sample got through the filter cascade.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Stage {
    Generated,
    CanonicalPass,
    PlacementPass,
    CheckPass,
    Reachable,
    Unreachable,
    ResourceLimit,
}

impl Stage {
    pub const ALL: [Stage; 7] = [
        Stage::Generated,
        Stage::CanonicalPass,
        Stage::PlacementPass,
        Stage::CheckPass,
        Stage::Reachable,
        Stage::Unreachable,
        Stage::ResourceLimit,
    ];

    /// Whether a sample ending here passed every filter up to `level`
    /// (0 generated, 1 mirror, 2 placement, 3 check, 4 reachable).
    pub fn passed(self, level: usize) -> bool {
        let depth = match self {
            Stage::Generated => 0,
            Stage::CanonicalPass => 1,
            Stage::PlacementPass => 2,
            Stage::CheckPass | Stage::Unreachable | Stage::ResourceLimit => 3,
            Stage::Reachable => 4,
        };
        depth >= level
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SampleRecord {
    /// Decimal rank.
    pub rank: String,
    pub stage_reached: Stage,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub traceback_depth: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expanded_nodes: Option<usize>,
    pub elapsed_micros: u64,
}

/// Unranks `rank` and runs it through the filters and the search.
pub fn classify(
    variant: Variant,
    rank: &BigUint,
    params: &HeuristicParams,
    limits: &ResourceLimits,
) -> Result<SampleRecord> {
    let t0 = Instant::now();
    let pos = Codec::get(variant).unrank(rank)?;
    let mut rec = SampleRecord {
        rank: rank.to_str_radix(10),
        stage_reached: Stage::Generated,
        traceback_depth: None,
        expanded_nodes: None,
        elapsed_micros: 0,
    };
    let stage = if !is_canonical(&pos) {
        Stage::Generated
    } else if has_two_pawns(&pos) || has_dead_piece(&pos) {
        Stage::CanonicalPass
    } else if in_check(&pos, Color::White) {
        Stage::PlacementPass
    } else {
        let out = search_to_kk(&pos, params, limits)?;
        rec.expanded_nodes = Some(out.expanded_nodes);
        rec.traceback_depth = out.max_traceback;
        match out.verdict {
            Verdict::Reachable => Stage::Reachable,
            Verdict::UnreachableProven => Stage::Unreachable,
            Verdict::ResourceLimit => Stage::ResourceLimit,
        }
    };
    rec.stage_reached = stage;
    rec.elapsed_micros = t0.elapsed().as_micros() as u64;
    Ok(rec)
}

/// Everything that determines the drawn samples and their verdicts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct EstimateConfig {
    pub variant: Variant,
    pub sample_size: u64,
    pub seed: u64,
    pub workers: usize,
    pub block_size: u64,
    pub params: HeuristicParams,
    pub limits: ResourceLimits,
    pub z: f64,
}

impl EstimateConfig {
    pub fn new(variant: Variant, sample_size: u64, seed: u64) -> EstimateConfig {
        EstimateConfig {
            variant,
            sample_size,
            seed,
            workers: 1,
            block_size: DEFAULT_BLOCK_SIZE,
            params: HeuristicParams::default(),
            limits: ResourceLimits::default(),
            z: 3.0,
        }
    }

    pub fn block_count(&self) -> u64 {
        self.sample_size.div_ceil(self.block_size)
    }
}

/// Counts over a set of samples. Merging is addition, so any grouping of
/// blocks gives the same total.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Tally {
    /// Samples ending at each [`Stage`], in `Stage::ALL` order.
    pub outcomes: [u64; 7],
    /// Unreachable samples by traceback depth.
    pub traceback: BTreeMap<usize, u64>,
    pub expanded_nodes: u64,
}

impl Tally {
    pub fn add(&mut self, rec: &SampleRecord) {
        self.outcomes[rec.stage_reached as usize] += 1;
        if rec.stage_reached == Stage::Unreachable {
            *self.traceback.entry(rec.traceback_depth.unwrap_or(0)).or_default() += 1;
        }
        self.expanded_nodes += rec.expanded_nodes.unwrap_or(0) as u64;
    }

    pub fn merge(&mut self, other: &Tally) {
        for (a, b) in self.outcomes.iter_mut().zip(other.outcomes) {
            *a += b;
        }
        for (&d, &c) in &other.traceback {
            *self.traceback.entry(d).or_default() += c;
        }
        self.expanded_nodes += other.expanded_nodes;
    }

    pub fn samples(&self) -> u64 {
        self.outcomes.iter().sum()
    }

    /// Samples passing the filter at `level`, as in [`Stage::passed`].
    pub fn passing(&self, level: usize) -> u64 {
        Stage::ALL.iter().zip(self.outcomes).filter(|(s, _)| s.passed(level)).map(|(_, c)| c).sum()
    }
}

/// Result of one block, also the checkpoint record.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BlockResult {
    pub block: u64,
    pub tally: Tally,
    /// ChaCha8 word position at the end of the block.
    pub stream_position: String,
    #[serde(skip)]
    pub records: Vec<SampleRecord>,
}

/// Classifies the samples of one block.
pub fn run_block(cfg: &EstimateConfig, block: u64, keep_records: bool) -> Result<BlockResult> {
    let codec = Codec::get(cfg.variant);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(block);
    let lo = block * cfg.block_size;
    let hi = (lo + cfg.block_size).min(cfg.sample_size);
    let mut tally = Tally::default();
    let mut records = Vec::new();
    for _ in lo..hi {
        let r = codec.random_rank(&mut rng);
        let rec = classify(cfg.variant, &r, &cfg.params, &cfg.limits)?;
        tally.add(&rec);
        if keep_records {
            records.push(rec);
        }
    }
    Ok(BlockResult { block, tally, stream_position: rng.get_word_pos().to_string(), records })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct StageCount {
    pub stage: String,
    pub count: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct EstimateReport {
    pub config: EstimateConfig,
    pub candidate_count: String,
    pub sample_size: u64,
    pub reachable_count: u64,
    pub p_hat: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub count_low: String,
    pub count_high: String,
    /// Samples passing each filter in cascade order.
    pub per_stage_counts: Vec<StageCount>,
    /// Unreachable samples by traceback depth, index = depth.
    pub traceback_histogram: Vec<u64>,
    pub unreachable_count: u64,
    pub resource_limited: u64,
    /// `pHat` is 0 or 1 and the interval has zero width.
    pub degenerate: bool,
    pub expanded_nodes: u64,
}

/// `p ∓ z·sqrt(p(1-p)/n)`, clamped to `[0, 1]`.
pub fn ci(p_hat: f64, n: u64, z: f64) -> (f64, f64) {
    let half = z * (p_hat * (1.0 - p_hat) / n as f64).sqrt();
    ((p_hat - half).max(0.0), (p_hat + half).min(1.0))
}

/// `floor(x * total)` or `ceil(x * total)` with `x` taken as the exact
/// binary value of the double.
pub fn scale_exact(total: &BigUint, x: f64, ceil: bool) -> BigUint {
    assert!(x.is_finite() && x >= 0.0);
    if x == 0.0 {
        return BigUint::zero();
    }
    let bits = x.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    let (mant, e) = if exp == 0 { (frac, -1074) } else { (frac | 1 << 52, exp - 1075) };
    let prod = total * BigUint::from(mant);
    if e >= 0 {
        return prod << e as usize;
    }
    let d = BigUint::from(1u8) << (-e) as usize;
    let (q, r) = prod.div_rem(&d);
    if ceil && !r.is_zero() {
        q + 1u8
    } else {
        q
    }
}

/// Builds the report from merged counts.
pub fn report(cfg: &EstimateConfig, tally: &Tally) -> EstimateReport {
    let total = Codec::get(cfg.variant).total();
    let n = tally.samples();
    let reach = tally.outcomes[Stage::Reachable as usize];
    let p_hat = if n == 0 { 0.0 } else { reach as f64 / n as f64 };
    let (lo, hi) = if n == 0 { (0.0, 0.0) } else { ci(p_hat, n, cfg.z) };
    let names = ["generated", "canonicalPass", "placementPass", "checkPass", "reachable"];
    let per_stage_counts =
        names.iter().enumerate().map(|(i, s)| StageCount { stage: s.to_string(), count: tally.passing(i) }).collect();
    let max_depth = tally.traceback.keys().next_back().copied();
    let mut hist = vec![0u64; max_depth.map_or(0, |d| d + 1)];
    for (&d, &c) in &tally.traceback {
        hist[d] = c;
    }
    EstimateReport {
        config: cfg.clone(),
        candidate_count: total.to_string(),
        sample_size: n,
        reachable_count: reach,
        p_hat,
        ci_low: lo,
        ci_high: hi,
        count_low: scale_exact(total, lo, false).to_string(),
        count_high: scale_exact(total, hi, true).to_string(),
        per_stage_counts,
        traceback_histogram: hist,
        unreachable_count: tally.outcomes[Stage::Unreachable as usize],
        resource_limited: tally.outcomes[Stage::ResourceLimit as usize],
        degenerate: lo == hi,
        expanded_nodes: tally.expanded_nodes,
    }
}

/// Runs every block not in `done`, calling `on_block` as each finishes, and
/// reports on the union. Blocks run on a pool of `cfg.workers` threads.
pub fn estimate_with<F>(
    cfg: &EstimateConfig,
    done: &BTreeMap<u64, Tally>,
    keep_records: bool,
    on_block: F,
) -> Result<EstimateReport>
where
    F: Fn(&BlockResult) + Sync,
{
    if cfg.sample_size == 0 || cfg.block_size == 0 || cfg.workers == 0 {
        return Err(Error::Parse("sample size, block size and workers must be positive".into()));
    }
    let todo: Vec<u64> = (0..cfg.block_count()).filter(|b| !done.contains_key(b)).collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::Internal(e.to_string()))?;
    let fresh: Vec<(u64, Tally)> = pool.install(|| {
        todo.par_iter()
            .map(|&b| {
                let res = run_block(cfg, b, keep_records)?;
                on_block(&res);
                Ok((b, res.tally))
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let mut all: BTreeMap<u64, &Tally> = done.iter().map(|(&b, t)| (b, t)).collect();
    for (b, t) in &fresh {
        all.insert(*b, t);
    }
    let mut total = Tally::default();
    for t in all.values() {
        total.merge(t);
    }
    Ok(report(cfg, &total))
}

pub fn estimate(cfg: &EstimateConfig) -> Result<EstimateReport> {
    estimate_with(cfg, &BTreeMap::new(), false, |_| {})
}

/// `count * 10^-exp` rounded to `digits` significant digits, as text like
/// `6.5500e68`.
pub fn scientific(count: &str, digits: usize) -> String {
    let n: BigInt = count.parse().unwrap_or_default();
    let s = n.magnitude().to_string();
    let sign = if n.sign() == Sign::Minus { "-" } else { "" };
    if s.len() <= digits {
        return format!("{sign}{s}");
    }
    let head: u128 = s[..digits + 1].parse().unwrap();
    let rounded = (head + 5) / 10;
    let r = rounded.to_string();
    let exp = s.len() - 1 + (r.len() - digits);
    format!("{sign}{}.{}e{}", &r[..1], &r[1..digits], exp)
}
