//! Test oracles built only on forward move generation.
#![allow(dead_code)]

use rand::Rng;
use rustc_hash::FxHashSet;
use shogi_reach::movegen::{is_statically_valid, legal_moves_unchecked, pseudo_moves};
use shogi_reach::{Color, Kind, Move, Piece, Position, Variant};

/// Every `(p', m)` with `m` legal in a statically valid `p'` and
/// `p' + m == pos`, found by placing a piece on each empty square and asking
/// the forward generator whether it reaches.
pub fn brute_prev(pos: &Position) -> FxHashSet<(Position, Move)> {
    let v = pos.variant();
    let mover = !pos.side_to_move();
    let victim = pos.side_to_move();
    let mut out = FxHashSet::default();
    let accept = |cand: Position, m: Move, out: &mut FxHashSet<(Position, Move)>| {
        if cand.validate().is_ok()
            && is_statically_valid(&cand).is_valid()
            && legal_moves_unchecked(&cand).contains(&m)
            && cand.play_unchecked(m).0 == *pos
        {
            out.insert((cand, m));
        }
    };
    let squares: Vec<_> = v.squares().collect();
    let empty: Vec<_> = squares.iter().copied().filter(|&s| pos.at(s).is_none()).collect();
    for &to in &squares {
        let Some(q) = pos.at(to) else { continue };
        if q.owner() != mover {
            continue;
        }
        if !q.is_promoted() && q.kind() != Kind::King {
            let mut cand = pos.clone();
            cand.set(to, None);
            cand.set_hand(mover, q.kind(), pos.hand(mover, q.kind()) + 1);
            cand.set_side_to_move(mover);
            accept(cand, Move::Drop { kind: q.kind(), to }, &mut out);
        }
        let mut origins = vec![q];
        if q.is_promoted() {
            origins.push(Piece::new(q.kind(), q.owner(), false));
        }
        for orig in origins {
            for &from in &empty {
                let mut base = pos.clone();
                base.set(from, Some(orig));
                base.set(to, None);
                base.set_side_to_move(mover);
                let m = Move::Board { from, to, promote: orig != q };
                if !pseudo_moves(&base).contains(&m) {
                    continue;
                }
                accept(base.clone(), m, &mut out);
                for &k in &v.kinds()[1..] {
                    if pos.hand(mover, k) == 0 {
                        continue;
                    }
                    for promoted in [false, true] {
                        if promoted && !k.can_promote() {
                            continue;
                        }
                        let mut cand = base.clone();
                        cand.set(to, Some(Piece::new(k, victim, promoted)));
                        cand.set_hand(mover, k, pos.hand(mover, k) - 1);
                        accept(cand, m, &mut out);
                    }
                }
            }
        }
    }
    out
}

/// Whether some piece of `by` could move onto `side`'s King, ignoring the
/// safety of `by`'s own King.
pub fn attacked_oracle(pos: &Position, side: Color) -> bool {
    let Some(k) = pos.king_square(side) else { return false };
    let p = pos.with_side(!side);
    pseudo_moves(&p).iter().any(|m| !m.is_drop() && m.to() == k)
}

/// Legal random playout from the start position: `(p', m, p)` for each ply.
pub fn playout<R: Rng>(variant: Variant, plies: usize, rng: &mut R) -> Vec<(Position, Move, Position)> {
    let mut pos = Position::initial(variant);
    let mut out = Vec::new();
    for _ in 0..plies {
        let ms = legal_moves_unchecked(&pos);
        if ms.is_empty() {
            break;
        }
        let m = ms[rng.random_range(0..ms.len())];
        let nx = pos.play_unchecked(m).0;
        out.push((pos, m, nx.clone()));
        pos = nx;
    }
    out
}

/// Sum of board and hand counts of `kind` over both players.
pub fn piece_total(pos: &Position, kind: Kind) -> u32 {
    let board = pos.pieces().filter(|(_, p)| p.kind() == kind).count() as u32;
    board + Color::BOTH.iter().map(|&c| pos.hand(c, kind) as u32).sum::<u32>()
}
