//! Constructive paths between King-King positions.
//!
//! Any two KK positions are joined by King moves inside a region, bridges
//! between regions through shared pivot positions, and hand transfers made
//! with the Kings on fixed squares. Together with [`init_to_kk`] and
//! [`kk_to_init`] this links every KK position with the start position.

mod endpoints;
mod region;
mod transfer;
mod walk;

pub use endpoints::{derive_init_to_kk, init_to_kk, kk_before_init, kk_to_init};
pub use region::{pivot, regions_of, Region, RegionKind};
pub use transfer::{derive_transfer, hand_transfer_sequence, render_transfer_table, transfer_squares};
pub use walk::{king_walk_sequence, region_bridge_sequence, same_hands_path, turn_swap_sequence};

use rand::Rng;

use crate::error::{Error, Result};
use crate::position::Position;
use crate::search::is_kk;
use crate::types::{Color, Kind, Move, Piece};
use crate::variant::Variant;

/// Moves from KK position `p` to KK position `q`.
pub fn kk_path(p: &Position, q: &Position) -> Result<Vec<Move>> {
    for x in [p, q] {
        x.validate()?;
        if !is_kk(x) {
            return Err(Error::InvalidPosition(format!("not a KK position: {x}")));
        }
    }
    if p.variant() != q.variant() {
        return Err(Error::InvalidPosition("variants differ".into()));
    }
    let v = p.variant();
    let differs = v.kinds()[1..].iter().any(|&k| p.hand(Color::Black, k) != q.hand(Color::Black, k));
    if !differs {
        return same_hands_path(p, q);
    }

    let (tb, tw) = transfer_squares(v);
    let mut hub = Position::empty(v, Color::Black);
    hub.set(tb, Some(Piece::unpromoted(Kind::King, Color::Black)));
    hub.set(tw, Some(Piece::unpromoted(Kind::King, Color::White)));
    for c in Color::BOTH {
        for &k in &v.kinds()[1..] {
            hub.set_hand(c, k, p.hand(c, k));
        }
    }
    let mut out = same_hands_path(p, &hub)?;
    for &k in &v.kinds()[1..] {
        let (have, want) = (hub.hand(Color::Black, k), q.hand(Color::Black, k));
        let giver = if have > want { Color::Black } else { Color::White };
        for _ in 0..have.abs_diff(want) {
            let seq = hand_transfer_sequence(&hub, k, giver)?;
            hub.add_hand(giver, k, -1);
            hub.add_hand(!giver, k, 1);
            out.extend(seq);
        }
    }
    out.extend(same_hands_path(&hub, q)?);
    Ok(out)
}

/// A KK position with uniformly placed separated Kings, every other piece
/// in a uniformly chosen hand, and a random side to move.
pub fn random_kk<R: Rng + ?Sized>(variant: Variant, rng: &mut R) -> Position {
    let squares: Vec<_> = variant.squares().collect();
    let (b, w) = loop {
        let b = squares[rng.random_range(0..squares.len())];
        let w = squares[rng.random_range(0..squares.len())];
        if b.king_distance(w) >= 2 {
            break (b, w);
        }
    };
    let side = if rng.random_bool(0.5) { Color::Black } else { Color::White };
    let mut p = Position::empty(variant, side);
    p.set(b, Some(Piece::unpromoted(Kind::King, Color::Black)));
    p.set(w, Some(Piece::unpromoted(Kind::King, Color::White)));
    for &k in &variant.kinds()[1..] {
        let black = (0..variant.total_of(k)).filter(|_| rng.random_bool(0.5)).count() as u8;
        p.set_hand(Color::Black, k, black);
        p.set_hand(Color::White, k, variant.total_of(k) - black);
    }
    p
}
