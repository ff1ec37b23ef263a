//! Predecessor generation.
//!
//! Candidates are produced by undoing every move the last mover could have
//! made (un-move, un-promotion, un-capture, un-drop) and then kept only if the
//! candidate passes the static filters and the forward move is legal in it.

use rustc_hash::FxHashSet;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::movegen::{self, is_statically_valid, patterns};
use crate::position::Position;
use crate::types::{Kind, Move, Piece};
use crate::variant::{dir, OFF};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum ReverseKind {
    UnMove,
    UnPromoteMove,
    UnCapture,
    UnPromoteUnCapture,
    UnDrop,
}

/// How a predecessor leads to the current position.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ReverseMove {
    pub kind: ReverseKind,
    /// The forward move played in the predecessor.
    pub forward: Move,
    /// Piece put back on the destination square by an un-capture.
    pub restored: Option<Piece>,
}

/// All `(p', m)` with `m` legal in `p'` and `next(p', m) == pos`.
pub fn prev1(pos: &Position) -> Result<Vec<(Position, ReverseMove)>> {
    pos.validate()?;
    let mut out = Vec::new();
    for_each_prev(pos, |p, rm| out.push((p, rm)));
    Ok(out)
}

/// Same as [`prev1`] without structural validation; `pos` must be well formed.
pub(crate) fn for_each_prev(pos: &Position, mut f: impl FnMut(Position, ReverseMove)) {
    let v = pos.variant();
    let g = v.geometry();
    let mover = !pos.side_to_move();
    let victim = pos.side_to_move();

    // Pieces the un-capture may put back: any kind in the mover's hand, in
    // every promotion state.
    let mut restorable: Vec<Piece> = Vec::new();
    for &k in &v.kinds()[1..] {
        if pos.hand(mover, k) > 0 {
            restorable.push(Piece::new(k, victim, false));
            if k.can_promote() {
                restorable.push(Piece::new(k, victim, true));
            }
        }
    }

    let mut try_emit = |cand: Position, m: Move, kind: ReverseKind, restored: Option<Piece>| {
        if is_statically_valid(&cand).is_valid() && movegen::is_legal(&cand, m) {
            f(cand, ReverseMove { kind, forward: m, restored });
        }
    };

    for (to, piece) in pos.occupied_indices() {
        if piece.owner() != mover {
            continue;
        }
        let to_sq = v.square(to);

        // un-drop
        if !piece.is_promoted() && piece.kind() != Kind::King {
            let mut cand = pos.clone();
            cand.set_index(to, None);
            cand.add_hand(mover, piece.kind(), 1);
            cand.set_side_to_move(mover);
            try_emit(cand, Move::Drop { kind: piece.kind(), to: to_sq }, ReverseKind::UnDrop, None);
        }

        // board moves: the piece as it was before the move
        let mut before = vec![(piece, false)];
        if piece.is_promoted() {
            before.push((piece.demote(), true));
        }
        for (orig, promoted_now) in before {
            let (steps, slides) = patterns(orig);
            let mut origins: Vec<usize> = Vec::new();
            for d in 0..dir::COUNT {
                if steps >> d & 1 == 1 {
                    let from = g.step[to][dir::opposite(d)];
                    if from != OFF && pos.at_index(from as usize).is_none() {
                        origins.push(from as usize);
                    }
                }
                if d < 8 && slides >> d & 1 == 1 {
                    let back = dir::opposite(d);
                    let mut cur = to;
                    loop {
                        let nx = g.step[cur][back];
                        if nx == OFF || pos.at_index(nx as usize).is_some() {
                            break;
                        }
                        cur = nx as usize;
                        origins.push(cur);
                    }
                }
            }
            for from in origins {
                let m = Move::Board { from: v.square(from), to: to_sq, promote: promoted_now };
                let mut base = pos.clone();
                base.set_index(from, Some(orig));
                base.set_index(to, None);
                base.set_side_to_move(mover);
                let plain = if promoted_now { ReverseKind::UnPromoteMove } else { ReverseKind::UnMove };
                let capture = if promoted_now {
                    ReverseKind::UnPromoteUnCapture
                } else {
                    ReverseKind::UnCapture
                };
                for &r in &restorable {
                    let mut cand = base.clone();
                    cand.set_index(to, Some(r));
                    cand.add_hand(mover, r.kind(), -1);
                    try_emit(cand, m, capture, Some(r));
                }
                try_emit(base, m, plain, None);
            }
        }
    }
}

/// Largest `n <= max_n` with a non-empty layer `n` in the predecessor
/// expansion, where a position only counts in the first layer it appears in.
pub fn prev_n_empty_depth(pos: &Position, max_n: usize) -> Result<usize> {
    pos.validate()?;
    let mut seen: FxHashSet<Position> = FxHashSet::default();
    seen.insert(pos.clone());
    let mut layer = vec![pos.clone()];
    for n in 1..=max_n {
        let mut next = Vec::new();
        for p in &layer {
            for_each_prev(p, |q, _| {
                if seen.insert(q.clone()) {
                    next.push(q);
                }
            });
        }
        if next.is_empty() {
            return Ok(n - 1);
        }
        layer = next;
    }
    Ok(max_n)
}
