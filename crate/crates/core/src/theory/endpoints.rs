//! Connecting the start position with the King-King positions.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use indexmap::IndexSet;
use rustc_hash::FxBuildHasher;

use crate::error::{Error, Result};
use crate::movegen::{is_legal, legal_moves_unchecked};
use crate::position::Position;
use crate::search::is_kk;
use crate::sfen;
use crate::types::{Color, Kind, Move, Piece};
use crate::variant::Variant;

const SHOGI_INIT: &str = include_str!("../../data/shogi_init_to_kk.txt");
const MINISHOGI_INIT: &str = include_str!("../../data/minishogi_init_to_kk.txt");

fn strip_comments(text: &str) -> impl Iterator<Item = &str> {
    text.lines().map(|l| l.split('#').next().unwrap_or("")).flat_map(str::split_whitespace)
}

/// Moves from the start position to a KK position.
pub fn init_to_kk(variant: Variant) -> Result<Vec<Move>> {
    match variant {
        Variant::Shogi => {
            let mut pos = Position::initial(variant);
            let mut out = Vec::new();
            for tok in strip_comments(SHOGI_INIT) {
                let m = sfen::resolve_traditional(&pos, tok)?;
                pos = pos.play_unchecked(m).0;
                out.push(m);
            }
            Ok(out)
        }
        Variant::Minishogi => strip_comments(MINISHOGI_INIT).map(|t| sfen::parse_usi(variant, t)).collect(),
    }
}

/// Best-first forward search from the start position, drops excluded, for a
/// capture sequence ending with Kings only. Ordered by pieces left, then
/// plies played.
pub fn derive_init_to_kk(variant: Variant, max_nodes: usize) -> Option<Vec<Move>> {
    let start = Position::initial(variant);
    let mut nodes: IndexSet<Position, FxBuildHasher> = IndexSet::default();
    let mut parent: Vec<Option<(usize, Move)>> = vec![None];
    nodes.insert(start.clone());
    let mut heap = BinaryHeap::new();
    heap.push(Reverse((start.non_king_count(), 0usize, 0usize)));
    while let Some(Reverse((_, g, i))) = heap.pop() {
        if nodes.len() > max_nodes {
            return None;
        }
        let cur = nodes[i].clone();
        if is_kk(&cur) {
            let mut out = Vec::new();
            let mut at = i;
            while let Some((p, m)) = parent[at] {
                out.push(m);
                at = p;
            }
            out.reverse();
            return Some(out);
        }
        for m in legal_moves_unchecked(&cur) {
            if m.is_drop() {
                continue;
            }
            let nx = cur.play_unchecked(m).0;
            let n = nx.non_king_count();
            let (j, fresh) = nodes.insert_full(nx);
            if fresh {
                parent.push(Some((i, m)));
                heap.push(Reverse((n, g + 1, j)));
            }
        }
    }
    None
}

/// Kings on their starting squares, every other piece split evenly between
/// the hands, Black to move.
pub fn kk_before_init(variant: Variant) -> Position {
    let init = Position::initial(variant);
    let mut p = Position::empty(variant, Color::Black);
    for c in Color::BOTH {
        p.set(init.king_square(c).unwrap(), Some(Piece::unpromoted(Kind::King, c)));
        for &k in &variant.kinds()[1..] {
            p.set_hand(c, k, variant.total_of(k) / 2);
        }
    }
    p
}

/// Drops from [`kk_before_init`] rebuilding the start position, the sides
/// alternating. The order is found by depth-first search over which piece
/// each side drops next; Pawns are tried first.
pub fn kk_to_init(variant: Variant) -> Result<Vec<Move>> {
    let init = Position::initial(variant);
    let mut todo: [Vec<Move>; 2] = [Vec::new(), Vec::new()];
    let mut squares: Vec<_> = init.pieces().filter(|(_, p)| p.kind() != Kind::King).collect();
    squares.sort_by_key(|&(s, p)| (p.kind() != Kind::Pawn, s.x, s.y));
    for (s, p) in squares {
        todo[p.owner().index()].push(Move::Drop { kind: p.kind(), to: s });
    }
    let mut used = [vec![false; todo[0].len()], vec![false; todo[1].len()]];
    let mut out = Vec::new();
    let start = kk_before_init(variant);
    if drop_dfs(&start, &todo, &mut used, &mut out) {
        Ok(out)
    } else {
        Err(Error::Internal("no drop order rebuilds the start position".into()))
    }
}

fn drop_dfs(pos: &Position, todo: &[Vec<Move>; 2], used: &mut [Vec<bool>; 2], out: &mut Vec<Move>) -> bool {
    let side = pos.side_to_move().index();
    if out.len() == todo[0].len() + todo[1].len() {
        return true;
    }
    for i in 0..todo[side].len() {
        if used[side][i] || !is_legal(pos, todo[side][i]) {
            continue;
        }
        used[side][i] = true;
        out.push(todo[side][i]);
        if drop_dfs(&pos.play_unchecked(todo[side][i]).0, todo, used, out) {
            return true;
        }
        out.pop();
        used[side][i] = false;
    }
    false
}
