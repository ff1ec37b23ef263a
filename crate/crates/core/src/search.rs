//! Greedy best-first reverse search toward King-King positions.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};

use indexmap::IndexSet;
use rustc_hash::FxBuildHasher;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::movegen::in_zone;
use crate::position::Position;
use crate::reverse::for_each_prev;
use crate::types::{Color, Move};

/// Weights of `H = a*N + b*P + c*D`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeuristicParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl Default for HeuristicParams {
    fn default() -> Self {
        HeuristicParams { a: 10.0, b: 10.0, c: 1.0 }
    }
}

/// Caps on a single search. `None` means unbounded.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ResourceLimits {
    pub max_nodes: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Verdict {
    Reachable,
    UnreachableProven,
    ResourceLimit,
}

/// A forward path from a KK position to the query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub start: Position,
    /// `(position before the move, move)`, in forward order.
    pub steps: Vec<(Position, Move)>,
}

impl Witness {
    pub fn moves(&self) -> Vec<Move> {
        self.steps.iter().map(|(_, m)| *m).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    pub max_traceback: Option<usize>,
    pub expanded_nodes: usize,
}

/// Only the two Kings on the board, at least two files or two ranks apart.
pub fn is_kk(pos: &Position) -> bool {
    if pos.non_king_count() != 0 {
        return false;
    }
    kings_separated(pos)
}

fn kings_separated(pos: &Position) -> bool {
    match (pos.king_square(Color::Black), pos.king_square(Color::White)) {
        (Some(b), Some(w)) => b.x.abs_diff(w.x) >= 2 || b.y.abs_diff(w.y) >= 2,
        _ => false,
    }
}

/// `a*N + b*P + c*D`: non-King pieces on the board, promoted pieces, and the
/// summed rank distance of promoted pieces from their owner's zone.
pub fn heuristic(pos: &Position, params: &HeuristicParams) -> f64 {
    let v = pos.variant();
    let depth = v.promotion_zone_depth();
    let n = v.size();
    let (mut pieces, mut promoted, mut dist) = (0u32, 0u32, 0u32);
    for (sq, p) in pos.pieces() {
        if p.kind() == crate::types::Kind::King {
            continue;
        }
        pieces += 1;
        if p.is_promoted() {
            promoted += 1;
            if !in_zone(v, p.owner(), sq.y) {
                dist += match p.owner() {
                    Color::Black => (sq.y + 1 - depth) as u32,
                    Color::White => (n - depth - sq.y) as u32,
                };
            }
        }
    }
    params.a * pieces as f64 + params.b * promoted as f64 + params.c * dist as f64
}

struct Entry {
    h: f64,
    seq: usize,
}

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Entry {}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Entry {
    // BinaryHeap is a max-heap: smallest H first, then oldest.
    fn cmp(&self, other: &Self) -> Ordering {
        other.h.total_cmp(&self.h).then(other.seq.cmp(&self.seq))
    }
}

/// Searches predecessors of `pos` for a KK position.
pub fn search_to_kk(pos: &Position, params: &HeuristicParams, limits: &ResourceLimits) -> Result<SearchOutcome> {
    pos.validate()?;
    let mut nodes: IndexSet<Position, FxBuildHasher> = IndexSet::default();
    let mut parent: Vec<Option<(usize, Move)>> = Vec::new();
    let mut heap = BinaryHeap::new();

    nodes.insert(pos.clone());
    parent.push(None);
    heap.push(Entry { h: heuristic(pos, params), seq: 0 });
    let mut expanded = 0usize;
    let mut found: Vec<(Position, Move)> = Vec::new();

    while let Some(Entry { h, seq }) = heap.pop() {
        let cur = nodes[seq].clone();
        expanded += 1;
        if h == 0.0 && cur.non_king_count() == 0 {
            if !kings_separated(&cur) {
                return Err(Error::Internal(format!("adjacent Kings reached in search: {cur}")));
            }
            // parent links point from predecessor to successor, i.e. forward
            let mut i = seq;
            let start = cur;
            while let Some((succ, m)) = parent[i] {
                found.push((nodes[i].clone(), m));
                i = succ;
            }
            return Ok(SearchOutcome {
                verdict: Verdict::Reachable,
                witness: Some(Witness { start, steps: found }),
                max_traceback: None,
                expanded_nodes: expanded,
            });
        }
        if limits.max_nodes.is_some_and(|cap| expanded >= cap) {
            return Ok(SearchOutcome {
                verdict: Verdict::ResourceLimit,
                witness: None,
                max_traceback: None,
                expanded_nodes: expanded,
            });
        }
        for_each_prev(&cur, |p, rm| {
            let h = heuristic(&p, params);
            let (idx, fresh) = nodes.insert_full(p);
            if fresh {
                parent.push(Some((seq, rm.forward)));
                heap.push(Entry { h, seq: idx });
            }
        });
    }

    let depth = traceback_depth(&nodes);
    Ok(SearchOutcome {
        verdict: Verdict::UnreachableProven,
        witness: None,
        max_traceback: Some(depth),
        expanded_nodes: expanded,
    })
}

/// Deepest layer of the breadth-first predecessor expansion from node 0
/// inside the closed set `nodes`, each position counted at its first layer.
fn traceback_depth(nodes: &IndexSet<Position, FxBuildHasher>) -> usize {
    let mut dist = vec![usize::MAX; nodes.len()];
    dist[0] = 0;
    let mut queue = VecDeque::from([0usize]);
    let mut deepest = 0;
    while let Some(i) = queue.pop_front() {
        deepest = dist[i];
        for_each_prev(&nodes[i], |q, _| {
            if let Some(j) = nodes.get_index_of(&q) {
                if dist[j] == usize::MAX {
                    dist[j] = dist[i] + 1;
                    queue.push_back(j);
                }
            }
        });
    }
    deepest
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::movegen;
    use crate::sfen;
    use crate::variant::Variant;

    fn shogi(s: &str) -> Position {
        sfen::parse_completing(Variant::Shogi, s, Color::Black).unwrap()
    }

    #[test]
    fn kk_membership() {
        assert!(is_kk(&shogi("4k4/9/9/9/9/9/9/9/4K4 b -")));
        assert!(!is_kk(&shogi("9/9/9/9/4k4/3K5/9/9/9 b -")));
        assert!(!is_kk(&shogi("4k4/9/9/9/4S4/9/9/9/4K4 b -")));
    }

    #[test]
    fn heuristic_examples() {
        let p = HeuristicParams::default();
        assert_eq!(heuristic(&shogi("4k4/9/9/9/9/9/9/9/4K4 b -"), &p), 0.0);
        assert_eq!(heuristic(&shogi("4k4/9/9/9/4S4/9/9/9/4K4 b -"), &p), 10.0);
        assert_eq!(heuristic(&shogi("4k4/9/9/9/9/4+P4/9/9/4K4 b -"), &p), 23.0);
        assert_eq!(heuristic(&shogi("4k4/9/9/9/9/9/4+p4/9/4K4 b -"), &p), 20.0);
        assert_eq!(heuristic(&shogi("4k4/9/4+p4/9/9/9/9/9/4K4 b -"), &p), 24.0);
    }

    #[test]
    fn kk_query_is_reachable_with_empty_path() {
        let p = shogi("4k4/9/9/9/9/9/9/9/4K4 b -");
        let out = search_to_kk(&p, &HeuristicParams::default(), &ResourceLimits::default()).unwrap();
        assert_eq!(out.verdict, Verdict::Reachable);
        assert!(out.witness.unwrap().steps.is_empty());
    }

    #[test]
    fn double_check_is_unreachable_at_depth_zero() {
        let p = shogi("4k4/9/9/9/9/9/9/3g1g3/4K4 b -");
        let out = search_to_kk(&p, &HeuristicParams::default(), &ResourceLimits::default()).unwrap();
        assert_eq!(out.verdict, Verdict::UnreachableProven);
        assert_eq!(out.max_traceback, Some(0));
        assert_eq!(out.expanded_nodes, 1);
    }

    #[test]
    fn start_position_witness_replays() {
        for v in Variant::ALL {
            let p = Position::initial(v);
            let out = search_to_kk(&p, &HeuristicParams::default(), &ResourceLimits::default()).unwrap();
            assert_eq!(out.verdict, Verdict::Reachable, "{v}");
            let w = out.witness.unwrap();
            assert!(is_kk(&w.start));
            assert_eq!(movegen::replay(&w.start, &w.moves()).unwrap(), p);
        }
    }

    #[test]
    fn node_cap_reports_resource_limit() {
        let p = Position::initial(Variant::Shogi);
        let out = search_to_kk(&p, &HeuristicParams::default(), &ResourceLimits { max_nodes: Some(3) }).unwrap();
        assert_eq!(out.verdict, Verdict::ResourceLimit);
    }
}
