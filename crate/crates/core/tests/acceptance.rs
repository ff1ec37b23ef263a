//! End-to-end acceptance checks. Each test prints one PASS/FAIL line.

mod common;

use std::sync::{Mutex, OnceLock};
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxHashSet;

use shogi_reach::codec::{self, Codec};
use shogi_reach::estimator::{ci, estimate_with, scale_exact, EstimateConfig, EstimateReport, Stage};
use shogi_reach::movegen::replay;
use shogi_reach::reverse::prev1;
use shogi_reach::search::{is_kk, search_to_kk, HeuristicParams, ResourceLimits, Verdict};
use shogi_reach::theory::{init_to_kk, kk_before_init, kk_path, kk_to_init, random_kk};
use shogi_reach::{Position, Variant};

use common::{brute_prev, playout};

const SHOGI_TOTAL: &str = "80880932079767835177773204009328769812438521503800714936366945233084532";
const MINISHOGI_TOTAL: &str = "16014219505238849250";

const ROUNDTRIP_SAMPLES: usize = 100_000;
const DUALITY_SAMPLES: usize = 10_000;
const MINI_ESTIMATE_SAMPLES: u64 = 1_000_000;
const SHOGI_ESTIMATE_SAMPLES: u64 = 100_000;
const KK_PAIRS: usize = 100;
const WITNESSES_PER_VARIANT: usize = 500;

/// Binomial band width in standard deviations.
const SIGMAS: f64 = 5.0;
/// Passing fractions per filter: mirror, placement, check, reachable.
const MINI_FRACTIONS: [f64; 4] = [0.96774076, 0.77795825, 0.21506911, 0.14849198];
const MINI_COUNT_TARGET: u128 = 2_380_000_000_000_000_000;
const SHOGI_P_HAT: f64 = 0.0081;
const SHOGI_P_TOL: f64 = 0.0015;
/// Unreachable Mini Shogi samples by traceback depth 0..=8.
const MINI_TRACEBACK_TABLE: [u64; 9] = [6_650_818, 4175, 2494, 114, 104, 2, 4, 1, 1];
const MAX_TRACEBACK: usize = 10;
/// Allowed factor between the observed and reference deep-traceback ratio.
const RATIO_FACTOR: f64 = 10.0;

fn verdict(id: u32, name: &str, pass: bool, detail: String, elapsed: Duration, budget: Duration) {
    let in_time = elapsed <= budget;
    let ok = pass && in_time;
    println!(
        "[{}] criterion {id}: {name}: {detail} ({:.1}s of {:.0}s)",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        budget.as_secs_f64()
    );
    assert!(pass, "criterion {id} failed: {detail}");
    assert!(in_time, "criterion {id} over its time budget");
}

struct EstimateRun {
    report: EstimateReport,
    reachable: Vec<BigUint>,
    max_depth: Option<usize>,
    elapsed: Duration,
}

fn run_estimate(variant: Variant, samples: u64) -> EstimateRun {
    let t0 = Instant::now();
    let cfg = EstimateConfig::new(variant, samples, 1);
    let reachable = Mutex::new(Vec::new());
    let max_depth = Mutex::new(None::<usize>);
    let report = estimate_with(&cfg, &Default::default(), true, |b| {
        let mut r = reachable.lock().unwrap();
        let mut d = max_depth.lock().unwrap();
        for rec in &b.records {
            match rec.stage_reached {
                Stage::Reachable => r.push((b.block, rec.rank.parse::<BigUint>().unwrap())),
                Stage::Unreachable => *d = (*d).max(rec.traceback_depth),
                _ => {}
            }
        }
    })
    .unwrap();
    let mut reachable: Vec<(u64, BigUint)> = reachable.into_inner().unwrap();
    reachable.sort();
    EstimateRun {
        report,
        reachable: reachable.into_iter().map(|(_, r)| r).collect(),
        max_depth: max_depth.into_inner().unwrap(),
        elapsed: t0.elapsed(),
    }
}

fn mini_run() -> &'static EstimateRun {
    static RUN: OnceLock<EstimateRun> = OnceLock::new();
    RUN.get_or_init(|| run_estimate(Variant::Minishogi, MINI_ESTIMATE_SAMPLES))
}

fn shogi_run() -> &'static EstimateRun {
    static RUN: OnceLock<EstimateRun> = OnceLock::new();
    RUN.get_or_init(|| run_estimate(Variant::Shogi, SHOGI_ESTIMATE_SAMPLES))
}

#[test]
fn criterion_01_exact_counts() {
    let t0 = Instant::now();
    let mini = codec::total_count(Variant::Minishogi).to_string();
    let shogi = codec::total_count(Variant::Shogi).to_string();
    let pass = mini == MINISHOGI_TOTAL && shogi == SHOGI_TOTAL;
    verdict(1, "exact candidate counts", pass, format!("minishogi {mini}, shogi {shogi}"), t0.elapsed(), Duration::from_secs(10));
}

/// Ordered pairs of distinct King squares no greater than their mirror.
fn brute_king_pairs(v: Variant) -> u64 {
    let n = v.size() as usize;
    let idx = |x: usize, y: usize| n * x + y;
    let mut count = 0;
    for bx in 0..n {
        for by in 0..n {
            for wx in 0..n {
                for wy in 0..n {
                    if (bx, by) == (wx, wy) {
                        continue;
                    }
                    let here = (idx(bx, by), idx(wx, wy));
                    let mirror = (idx(n - 1 - bx, by), idx(n - 1 - wx, wy));
                    if here <= mirror {
                        count += 1;
                    }
                }
            }
        }
    }
    count
}

#[test]
fn criterion_02_king_placements() {
    let t0 = Instant::now();
    let shogi = codec::count_king_placements(Variant::Shogi);
    let mini = codec::count_king_placements(Variant::Minishogi);
    let (bs, bm) = (brute_king_pairs(Variant::Shogi), brute_king_pairs(Variant::Minishogi));
    let pass = shogi == 3276 && shogi == bs && mini == bm;
    verdict(
        2,
        "King placement counts",
        pass,
        format!("shogi {shogi} (brute {bs}), minishogi {mini} (brute {bm})"),
        t0.elapsed(),
        Duration::from_secs(60),
    );
}

#[test]
fn criterion_03_codec_bijection() {
    let t0 = Instant::now();
    let mut failures = 0usize;
    for (i, v) in Variant::ALL.into_iter().enumerate() {
        let c = Codec::get(v);
        let mut rng = ChaCha8Rng::seed_from_u64(300 + i as u64);
        for _ in 0..ROUNDTRIP_SAMPLES {
            let r = c.random_rank(&mut rng);
            let p = c.unrank(&r).unwrap();
            let back = c.rank(&p).unwrap();
            if back != r || c.unrank(&back).unwrap() != p {
                failures += 1;
            }
        }
    }
    verdict(
        3,
        "rank/unrank bijection",
        failures == 0,
        format!("{ROUNDTRIP_SAMPLES} ranks per variant, {failures} mismatches"),
        t0.elapsed(),
        Duration::from_secs(300),
    );
}

fn prev_set(p: &Position) -> FxHashSet<(Position, shogi_reach::Move)> {
    prev1(p).unwrap().into_iter().map(|(q, rm)| (q, rm.forward)).collect()
}

#[test]
fn criterion_04_reverse_forward_duality() {
    let t0 = Instant::now();
    let mut mismatches = 0usize;
    let mut missing_pairs = 0usize;
    let mut checked = 0usize;
    for (i, v) in Variant::ALL.into_iter().enumerate() {
        let c = Codec::get(v);
        let mut rng = ChaCha8Rng::seed_from_u64(400 + i as u64);
        for _ in 0..DUALITY_SAMPLES {
            let p = c.unrank(&c.random_rank(&mut rng)).unwrap();
            if prev_set(&p) != brute_prev(&p) {
                mismatches += 1;
            }
            checked += 1;
        }
        for _ in 0..DUALITY_SAMPLES {
            let plies = rng.random_range(1..=160);
            let Some((before, m, after)) = playout(v, plies, &mut rng).pop() else { continue };
            let got = prev_set(&after);
            if !got.contains(&(before, m)) {
                missing_pairs += 1;
            }
            if got != brute_prev(&after) {
                mismatches += 1;
            }
            checked += 1;
        }
    }
    verdict(
        4,
        "reverse/forward duality",
        mismatches == 0 && missing_pairs == 0,
        format!("{checked} positions, {mismatches} set mismatches, {missing_pairs} forward pairs missing"),
        t0.elapsed(),
        Duration::from_secs(1800),
    );
}

/// Truncation to six significant digits, as the reference intervals print.
fn six_digits(x: f64) -> u64 {
    let e = x.log10().floor() as i32;
    (x * 10f64.powi(5 - e)).floor() as u64
}

#[test]
fn criterion_05_interval_arithmetic() {
    let t0 = Instant::now();
    let (lo, hi) = ci(0.0080983226, 5_000_000_000, 3.0);
    let shogi_ok = six_digits(lo) == 809452 && six_digits(hi) == 810212;
    let (mlo, mhi) = ci(14_849_198.0 / 1e8, 100_000_000, 3.0);
    let mini_ok = six_digits(mlo) / 10 == 14838 && six_digits(mhi) / 10 == 14859;
    let total = codec::total_count(Variant::Minishogi);
    let clo = scale_exact(total, mlo, false);
    let chi = scale_exact(total, mhi, true);
    let count_ok = clo.to_string().starts_with("2376") && chi.to_string().starts_with("2379") && clo.bits() == chi.bits();
    verdict(
        5,
        "confidence interval arithmetic",
        shogi_ok && mini_ok && count_ok,
        format!("shogi ({lo:.6e}, {hi:.6e}), minishogi ({mlo:.6}, {mhi:.6}), count {clo}..{chi}"),
        t0.elapsed(),
        Duration::from_secs(10),
    );
}

#[test]
fn criterion_06_minishogi_estimate() {
    let run = mini_run();
    let r = &run.report;
    let n = r.sample_size as f64;
    let mut worst: f64 = 0.0;
    let mut ok = true;
    for (level, &p) in MINI_FRACTIONS.iter().enumerate() {
        let observed = r.per_stage_counts[level + 1].count as f64 / n;
        let sigma = (p * (1.0 - p) / n).sqrt();
        let z = (observed - p).abs() / sigma;
        worst = worst.max(z);
        ok &= z <= SIGMAS;
    }
    let lo: u128 = r.count_low.parse().unwrap();
    let hi: u128 = r.count_high.parse().unwrap();
    let contains = lo <= MINI_COUNT_TARGET && MINI_COUNT_TARGET <= hi;
    verdict(
        6,
        "Mini Shogi estimate",
        ok && contains && r.sample_size == MINI_ESTIMATE_SAMPLES,
        format!(
            "n={} stages {:?}, worst deviation {worst:.2} sigma, count {lo}..{hi}",
            r.sample_size,
            r.per_stage_counts.iter().map(|s| s.count).collect::<Vec<_>>()
        ),
        run.elapsed,
        Duration::from_secs(7200),
    );
}

#[test]
fn criterion_07_shogi_estimate() {
    let run = shogi_run();
    let r = &run.report;
    let pass = (r.p_hat - SHOGI_P_HAT).abs() <= SHOGI_P_TOL && r.sample_size == SHOGI_ESTIMATE_SAMPLES;
    verdict(
        7,
        "Shogi estimate",
        pass,
        format!("n={} reachable={} pHat={:.5} count {}..{}", r.sample_size, r.reachable_count, r.p_hat, r.count_low, r.count_high),
        run.elapsed,
        Duration::from_secs(12 * 3600),
    );
}

#[test]
fn criterion_08_unreachable_traceback() {
    let t0 = Instant::now();
    let run = mini_run();
    let hist = &run.report.traceback_histogram;
    let unreachable: u64 = hist.iter().sum();
    let deep: u64 = hist.iter().skip(1).sum();
    let observed = deep as f64 / unreachable as f64;
    let ref_total: u64 = MINI_TRACEBACK_TABLE.iter().sum();
    let reference = (ref_total - MINI_TRACEBACK_TABLE[0]) as f64 / ref_total as f64;
    let within = observed >= reference / RATIO_FACTOR && observed <= reference * RATIO_FACTOR;
    let bounded = run.max_depth.unwrap_or(0) <= MAX_TRACEBACK && hist.len() <= MAX_TRACEBACK + 1;
    verdict(
        8,
        "unreachable traceback depth",
        within && bounded,
        format!("histogram {hist:?}, ratio {observed:.3e} vs {reference:.3e}"),
        t0.elapsed() + run.elapsed,
        Duration::from_secs(7200),
    );
}

#[test]
fn criterion_09_kk_machinery() {
    let t0 = Instant::now();
    let mut notes = Vec::new();
    let seq = init_to_kk(Variant::Shogi).unwrap();
    let end = replay(&Position::initial(Variant::Shogi), &seq).unwrap();
    let table_ok = seq.len() == 44 && is_kk(&end);
    notes.push(format!("44-ply line ends in KK: {table_ok}"));

    let mut failures = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for v in Variant::ALL {
        for _ in 0..KK_PAIRS {
            let p = random_kk(v, &mut rng);
            let q = random_kk(v, &mut rng);
            let ok = kk_path(&p, &q).and_then(|s| replay(&p, &s)).is_ok_and(|e| e == q);
            failures += usize::from(!ok);
        }
    }
    notes.push(format!("{failures} of {} KK pairs failed", 2 * KK_PAIRS));

    let mut init_ok = true;
    for v in Variant::ALL {
        let s = kk_to_init(v).unwrap();
        init_ok &= replay(&kk_before_init(v), &s).is_ok_and(|e| e == Position::initial(v));
    }
    notes.push(format!("drops rebuild the start: {init_ok}"));
    verdict(
        9,
        "KK construction machinery",
        table_ok && failures == 0 && init_ok,
        notes.join(", "),
        t0.elapsed(),
        Duration::from_secs(600),
    );
}

#[test]
fn criterion_10_witness_soundness() {
    let mut replayed = 0usize;
    let mut failures = Vec::new();
    let mut elapsed = Duration::ZERO;
    for (v, run) in [(Variant::Minishogi, mini_run()), (Variant::Shogi, shogi_run())] {
        let t0 = Instant::now();
        let init = Position::initial(v);
        let opening = init_to_kk(v).unwrap();
        let kk = replay(&init, &opening).unwrap();
        for r in run.reachable.iter().take(WITNESSES_PER_VARIANT) {
            let query = Codec::get(v).unrank(r).unwrap();
            let out = search_to_kk(&query, &HeuristicParams::default(), &ResourceLimits::default()).unwrap();
            let ok = out.verdict == Verdict::Reachable
                && out.witness.as_ref().is_some_and(|w| {
                    let bridge = kk_path(&kk, &w.start).unwrap();
                    let all: Vec<_> = opening.iter().chain(&bridge).copied().chain(w.moves()).collect();
                    replay(&init, &all).is_ok_and(|e| e == query)
                });
            if ok {
                replayed += 1;
            } else {
                failures.push(format!("{v} rank {r}"));
            }
        }
        elapsed += t0.elapsed();
    }
    verdict(
        10,
        "witness soundness from the start position",
        failures.is_empty() && replayed == 2 * WITNESSES_PER_VARIANT,
        format!("{replayed} full games replayed, failures {failures:?}"),
        elapsed,
        Duration::from_secs(1800),
    );
}
