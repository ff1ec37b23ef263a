//! Mirror canonicity.
//!
//! Positions are ordered by their placement lists: for each type in codec
//! order and each attribute `(B,+) (W,+) (B,-) (W,-)`, the ascending list of
//! square indices. Hands do not change under mirroring and never decide.

use std::cmp::Ordering;

use crate::position::Position;
use crate::types::Color;

use super::attribute;

fn placement_key(pos: &Position, mirrored: bool) -> Vec<Vec<u8>> {
    let v = pos.variant();
    let kinds = v.kinds();
    let g = v.geometry();
    let mut lists = vec![Vec::new(); kinds.len() * 4];
    for (sq, p) in pos.occupied_indices() {
        let ci = kinds.iter().position(|&k| k == p.kind()).unwrap();
        let s = if mirrored { g.mirror[sq] } else { sq as u8 };
        lists[ci * 4 + attribute(p)].push(s);
    }
    for l in &mut lists {
        l.sort_unstable();
    }
    lists
}

/// Black to move and the King placement is no greater than its mirror's.
pub fn is_k_canonical(pos: &Position) -> bool {
    if pos.side_to_move() != Color::Black {
        return false;
    }
    let g = pos.variant().geometry();
    let (Some(b), Some(w)) = (pos.king_index(Color::Black), pos.king_index(Color::White)) else {
        return false;
    };
    (b as u8, w as u8) <= (g.mirror[b], g.mirror[w])
}

/// Black to move and no greater than its horizontal mirror.
pub fn is_canonical(pos: &Position) -> bool {
    pos.side_to_move() == Color::Black
        && placement_key(pos, false).cmp(&placement_key(pos, true)) != Ordering::Greater
}
