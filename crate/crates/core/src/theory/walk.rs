//! King-only manoeuvres inside and between regions.

use crate::error::{Error, Result};
use crate::position::Position;
use crate::search::is_kk;
use crate::types::{Color, Move, Square};
use crate::variant::Variant;

use super::region::{pivot, regions_of, Rect, Region, RegionKind};

fn step(from: Square, to: Square) -> Move {
    Move::Board { from, to, promote: false }
}

fn neighbours(s: Square, rect: Rect) -> impl Iterator<Item = Square> {
    (-1i8..=1)
        .flat_map(|dy| (-1i8..=1).map(move |dx| (dx, dy)))
        .filter(|&d| d != (0, 0))
        .filter_map(move |(dx, dy)| {
            let x = s.x as i8 + dx;
            let y = s.y as i8 + dy;
            if x < 0 || y < 0 {
                return None;
            }
            let t = Square::new(x as u8, y as u8);
            rect.contains(t).then_some(t)
        })
}

/// There and back: two moves ending where it began.
pub(crate) fn c2(at: Square, rect: Rect) -> Vec<Move> {
    let b = neighbours(at, rect).next().expect("region has a neighbouring square");
    vec![step(at, b), step(b, at)]
}

/// Triangle through a 2x2 block: three moves ending where it began.
pub(crate) fn c3(at: Square, rect: Rect) -> Option<Vec<Move>> {
    let dx = [1i8, -1].into_iter().find(|&d| {
        let x = at.x as i8 + d;
        x >= 0 && rect.contains(Square::new(x as u8, at.y))
    })?;
    let dy = [1i8, -1].into_iter().find(|&d| {
        let y = at.y as i8 + d;
        y >= 0 && rect.contains(Square::new(at.x, y as u8))
    })?;
    let b = Square::new((at.x as i8 + dx) as u8, at.y);
    let c = Square::new(at.x, (at.y as i8 + dy) as u8);
    Some(vec![step(at, b), step(b, c), step(c, at)])
}

fn interleave(first: Vec<Move>, second: Vec<Move>) -> Vec<Move> {
    debug_assert!(first.len() == second.len() || first.len() == second.len() + 1);
    let mut out = Vec::with_capacity(first.len() + second.len());
    let mut b = second.into_iter();
    for m in first {
        out.push(m);
        out.extend(b.next());
    }
    out
}

fn kings(pos: &Position) -> Result<(Square, Square)> {
    if !is_kk(pos) {
        return Err(Error::InvalidPosition(format!("not a KK position: {pos}")));
    }
    Ok((pos.king_square(Color::Black).unwrap(), pos.king_square(Color::White).unwrap()))
}

fn same_hands(p: &Position, q: &Position) -> bool {
    p.variant() == q.variant()
        && Color::BOTH
            .iter()
            .all(|&c| p.variant().kinds().iter().all(|&k| p.hand(c, k) == q.hand(c, k)))
}

/// Five or seven plies returning both Kings home with the other side to move.
pub fn turn_swap_sequence(pos: &Position) -> Result<Vec<Move>> {
    let (b, w) = kings(pos)?;
    let region = *regions_of(pos).first().ok_or_else(|| Error::Internal("KK position without region".into()))?;
    Ok(swap_in(pos.variant(), region, pos.side_to_move(), b, w))
}

fn swap_in(v: Variant, region: Region, mover: Color, b: Square, w: Square) -> Vec<Move> {
    let at = |c: Color| if c == Color::Black { b } else { w };
    let other = !mover;
    let mr = region.movable(v, mover);
    let or = region.movable(v, other);
    if region.depth(v, mover) >= 2 {
        let tri = c3(at(mover), mr).expect("depth two admits a triangle");
        interleave(tri, c2(at(other), or))
    } else {
        let tri = c3(at(other), or).expect("the deeper side admits a triangle");
        let mut mine = c2(at(mover), mr);
        mine.extend(c2(at(mover), mr));
        interleave(mine, tri)
    }
}

fn chebyshev_path(from: Square, to: Square) -> Vec<Move> {
    let mut out = Vec::new();
    let mut cur = from;
    while cur != to {
        let nx = Square::new(
            (cur.x as i8 + (to.x as i8 - cur.x as i8).signum()) as u8,
            (cur.y as i8 + (to.y as i8 - cur.y as i8).signum()) as u8,
        );
        out.push(step(cur, nx));
        cur = nx;
    }
    out
}

/// A path of exactly `len` moves; `len` must have the parity of the distance.
fn padded_path(from: Square, to: Square, len: usize, rect: Rect) -> Vec<Move> {
    let mut out = Vec::new();
    let d = from.king_distance(to) as usize;
    debug_assert!(len >= d && (len - d) % 2 == 0);
    for _ in 0..(len - d) / 2 {
        out.extend(c2(from, rect));
    }
    out.extend(chebyshev_path(from, to));
    out
}

pub(crate) fn walk_in(v: Variant, region: Region, from: (Square, Square, Color), to: (Square, Square, Color)) -> Vec<Move> {
    let (b0, w0, side) = from;
    let (b1, w1, goal_side) = to;
    let d = |c: Color| {
        if c == Color::Black {
            b0.king_distance(b1) as usize
        } else {
            w0.king_distance(w1) as usize
        }
    };
    let (d1, d2) = (d(side), d(!side));
    let (l1, l2) = if d1 % 2 == d2 % 2 {
        (d1.max(d2), d1.max(d2))
    } else {
        let mut l2 = d2.max(d1.saturating_sub(1));
        if l2 % 2 != d2 % 2 {
            l2 += 1;
        }
        (l2 + 1, l2)
    };
    let path = |c: Color, len: usize| {
        let (s, t) = if c == Color::Black { (b0, b1) } else { (w0, w1) };
        padded_path(s, t, len, region.movable(v, c))
    };
    let mut out = interleave(path(side, l1), path(!side, l2));
    let end_side = if l1 == l2 { side } else { !side };
    if end_side != goal_side {
        out.extend(swap_in(v, region, end_side, b1, w1));
    }
    out
}

/// Moves between two KK positions sharing a region and hands, Kings only.
pub fn king_walk_sequence(p: &Position, q: &Position) -> Result<Vec<Move>> {
    let (b0, w0) = kings(p)?;
    let (b1, w1) = kings(q)?;
    if !same_hands(p, q) {
        return Err(Error::RegionMismatch);
    }
    let v = p.variant();
    let region = regions_of(p)
        .into_iter()
        .find(|r| r.contains(q))
        .ok_or(Error::RegionMismatch)?;
    Ok(walk_in(v, region, (b0, w0, p.side_to_move()), (b1, w1, q.side_to_move())))
}

fn intermediate(v: Variant, a: Region) -> Region {
    let k = v.size() / 2;
    if a.kind.is_horizontal() {
        Region { kind: RegionKind::LR, k }
    } else {
        Region { kind: RegionKind::BT, k }
    }
}

/// Moves from `p` to the pivot position shared with `target`, Black to move.
/// Regions of the same orientation are joined through a third one.
pub fn region_bridge_sequence(p: &Position, target: Region) -> Result<Vec<Move>> {
    let v = p.variant();
    Region::new(v, target.kind, target.k)?;
    let (b, w) = kings(p)?;
    let regions = regions_of(p);
    let cross = regions.iter().find(|r| r.kind.is_horizontal() != target.kind.is_horizontal());
    let start = (b, w, p.side_to_move());
    if let Some(&src) = cross {
        let (pb, pw) = pivot(v, src, target)?;
        return Ok(walk_in(v, src, start, (pb, pw, Color::Black)));
    }
    let src = regions[0];
    let mid = intermediate(v, src);
    let (b1, w1) = pivot(v, src, mid)?;
    let (b2, w2) = pivot(v, mid, target)?;
    let mut out = walk_in(v, src, start, (b1, w1, Color::Black));
    out.extend(walk_in(v, mid, (b1, w1, Color::Black), (b2, w2, Color::Black)));
    Ok(out)
}

/// Moves between any two KK positions with equal hands.
pub fn same_hands_path(p: &Position, q: &Position) -> Result<Vec<Move>> {
    let (b1, w1) = kings(q)?;
    kings(p)?;
    if !same_hands(p, q) {
        return Err(Error::RegionMismatch);
    }
    if let Ok(seq) = king_walk_sequence(p, q) {
        return Ok(seq);
    }
    let v = p.variant();
    let target = regions_of(q)[0];
    let mut seq = region_bridge_sequence(p, target)?;
    // every bridge ends on a pivot inside `target`
    let (pb, pw) = last_kings(p, &seq);
    seq.extend(walk_in(v, target, (pb, pw, Color::Black), (b1, w1, q.side_to_move())));
    Ok(seq)
}

fn last_kings(p: &Position, seq: &[Move]) -> (Square, Square) {
    let mut b = p.king_square(Color::Black).unwrap();
    let mut w = p.king_square(Color::White).unwrap();
    let mut side = p.side_to_move();
    for m in seq {
        if let Move::Board { to, .. } = *m {
            if side == Color::Black {
                b = to;
            } else {
                w = to;
            }
        }
        side = !side;
    }
    (b, w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::movegen::replay;

    fn kk(v: Variant, b: (u8, u8), w: (u8, u8), side: Color) -> Position {
        let mut p = Position::empty(v, side);
        p.set(Square::new(b.0, b.1), Some(crate::types::Piece::unpromoted(crate::types::Kind::King, Color::Black)));
        p.set(Square::new(w.0, w.1), Some(crate::types::Piece::unpromoted(crate::types::Kind::King, Color::White)));
        p
    }

    #[test]
    fn turn_swap_lengths() {
        let v = Variant::Shogi;
        // Black deep, Black to move: mover triangle
        let p = kk(v, (4, 8), (4, 0), Color::Black);
        let s = turn_swap_sequence(&p).unwrap();
        let end = replay(&p, &s).unwrap();
        assert_eq!(end, p.with_side(Color::White));
        assert!(s.len() == 5 || s.len() == 7);
        // mover confined to a single rank or file in every region
        let p = kk(Variant::Minishogi, (0, 4), (4, 0), Color::Black);
        let s = turn_swap_sequence(&p).unwrap();
        assert_eq!(replay(&p, &s).unwrap(), p.with_side(Color::White));
    }

    #[test]
    fn walk_across_board() {
        let v = Variant::Shogi;
        let p = kk(v, (0, 8), (8, 0), Color::Black);
        let q = kk(v, (8, 6), (0, 2), Color::White);
        let s = same_hands_path(&p, &q).unwrap();
        assert_eq!(replay(&p, &s).unwrap(), q);
    }
}
