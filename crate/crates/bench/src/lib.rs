//! Fixtures for the pipeline benchmarks.

use num_bigint::BigUint;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use shogi_reach::codec::{is_canonical, Codec};
use shogi_reach::movegen::{has_dead_piece, has_two_pawns};
use shogi_reach::search::{search_to_kk, HeuristicParams, ResourceLimits, Verdict};
use shogi_reach::{in_check, Color, Position, Variant};

/// Uniform ranks drawn from a fixed seed.
pub fn ranks(variant: Variant, count: usize, seed: u64) -> Vec<BigUint> {
    let c = Codec::get(variant);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| c.random_rank(&mut rng)).collect()
}

/// Samples that pass every static filter and so reach the search.
pub fn searchable(variant: Variant, count: usize, seed: u64) -> Vec<Position> {
    let c = Codec::get(variant);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let p = c.unrank(&c.random_rank(&mut rng)).unwrap();
        if is_canonical(&p) && !has_two_pawns(&p) && !has_dead_piece(&p) && !in_check(&p, Color::White) {
            out.push(p);
        }
    }
    out
}

/// Median of expanded nodes divided by witness length over reachable
/// positions, or `None` if none is reachable.
pub fn median_nodes_per_ply(positions: &[Position]) -> Option<f64> {
    let mut ratios: Vec<f64> = positions
        .iter()
        .filter_map(|p| {
            let out = search_to_kk(p, &HeuristicParams::default(), &ResourceLimits::default()).ok()?;
            let w = out.witness.filter(|_| out.verdict == Verdict::Reachable)?;
            Some(out.expanded_nodes as f64 / w.steps.len().max(1) as f64)
        })
        .collect();
    if ratios.is_empty() {
        return None;
    }
    ratios.sort_by(f64::total_cmp);
    Some(ratios[ratios.len() / 2])
}
