//! Moving one piece between hands with only the Kings on the board.
//!
//! The sequences are found once by a bounded breadth-first search around the
//! transfer squares and kept as data; [`derive_transfer`] reproduces them.

use std::collections::VecDeque;
use std::sync::OnceLock;

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::movegen::legal_moves_unchecked;
use crate::position::Position;
use crate::sfen;
use crate::types::{Color, Kind, Move, Piece, Square};
use crate::variant::Variant;

const SHOGI_DATA: &str = include_str!("../../data/shogi_transfer.txt");
const MINISHOGI_DATA: &str = include_str!("../../data/minishogi_transfer.txt");

/// How far either King may stray from its transfer square during the search.
const RADIUS: u8 = 2;
const MAX_PLIES: usize = 12;

/// King squares used for transfers: Black one rank in from its back rank on
/// the centre file, White mirrored.
pub fn transfer_squares(variant: Variant) -> (Square, Square) {
    let n = variant.size();
    let c = variant.center_file();
    (Square::new(c, n - 2), Square::new(c, 1))
}

fn kings_only(variant: Variant) -> Position {
    let (b, w) = transfer_squares(variant);
    let mut p = Position::empty(variant, Color::Black);
    p.set(b, Some(Piece::unpromoted(Kind::King, Color::Black)));
    p.set(w, Some(Piece::unpromoted(Kind::King, Color::White)));
    p
}

/// Breadth-first search for a sequence moving one `kind` from `giver`'s hand
/// to the other hand, from and to the transfer position with Black to move.
pub fn derive_transfer(variant: Variant, kind: Kind, giver: Color) -> Option<Vec<Move>> {
    let mut start = kings_only(variant);
    start.set_hand(giver, kind, 1);
    let mut goal = kings_only(variant);
    goal.set_hand(!giver, kind, 1);
    let (tb, tw) = transfer_squares(variant);

    let mut parent: FxHashMap<Position, Option<(Position, Move)>> = FxHashMap::default();
    parent.insert(start.clone(), None);
    let mut queue = VecDeque::from([(start, 0usize)]);
    while let Some((cur, depth)) = queue.pop_front() {
        if cur == goal {
            let mut out = Vec::new();
            let mut at = cur;
            while let Some(Some((prev, m))) = parent.get(&at).cloned() {
                out.push(m);
                at = prev;
            }
            out.reverse();
            return Some(out);
        }
        if depth == MAX_PLIES {
            continue;
        }
        for m in legal_moves_unchecked(&cur) {
            let nx = cur.play_unchecked(m).0;
            let near = |c: Color, home: Square| nx.king_square(c).is_some_and(|s| s.king_distance(home) <= RADIUS);
            if !near(Color::Black, tb) || !near(Color::White, tw) {
                continue;
            }
            if !parent.contains_key(&nx) {
                parent.insert(nx.clone(), Some((cur.clone(), m)));
                queue.push_back((nx, depth + 1));
            }
        }
    }
    None
}

type Table = FxHashMap<(Kind, Color), Vec<Move>>;

fn parse_table(variant: Variant, text: &str) -> Table {
    let mut out = FxHashMap::default();
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
        let mut it = line.split_whitespace();
        let kind = Kind::from_letter(it.next().unwrap().chars().next().unwrap()).unwrap();
        let giver = match it.next().unwrap() {
            "b" => Color::Black,
            _ => Color::White,
        };
        let moves = it.map(|t| sfen::parse_usi(variant, t).unwrap()).collect();
        out.insert((kind, giver), moves);
    }
    out
}

fn table(variant: Variant) -> &'static Table {
    static SHOGI: OnceLock<Table> = OnceLock::new();
    static MINI: OnceLock<Table> = OnceLock::new();
    match variant {
        Variant::Shogi => SHOGI.get_or_init(|| parse_table(variant, SHOGI_DATA)),
        Variant::Minishogi => MINI.get_or_init(|| parse_table(variant, MINISHOGI_DATA)),
    }
}

/// Renders derived sequences in the data-file format.
pub fn render_transfer_table(variant: Variant) -> String {
    let mut out = String::new();
    for &k in &variant.kinds()[1..] {
        for giver in Color::BOTH {
            let seq = derive_transfer(variant, k, giver).expect("transfer exists");
            let moves: Vec<String> = seq.iter().map(|&m| sfen::move_to_usi(variant, m)).collect();
            let g = if giver == Color::Black { "b" } else { "w" };
            out.push_str(&format!("{} {} {}\n", k.letter(), g, moves.join(" ")));
        }
    }
    out
}

/// Moves one `kind` from `giver`'s hand to the other's. `pos` must have only
/// the Kings on their transfer squares and Black to move; it is restored
/// with the hands changed.
pub fn hand_transfer_sequence(pos: &Position, kind: Kind, giver: Color) -> Result<Vec<Move>> {
    let v = pos.variant();
    let (tb, tw) = transfer_squares(v);
    if pos.non_king_count() != 0
        || pos.king_square(Color::Black) != Some(tb)
        || pos.king_square(Color::White) != Some(tw)
        || pos.side_to_move() != Color::Black
    {
        return Err(Error::InvalidPosition(format!("not at the transfer squares: {pos}")));
    }
    if kind == Kind::King || !v.has_kind(kind) {
        return Err(Error::InvalidPosition(format!("{kind:?} cannot be held")));
    }
    if pos.hand(giver, kind) == 0 {
        return Err(Error::EmptyHand(format!("{giver:?} holds no {kind:?}")));
    }
    Ok(table(v)[&(kind, giver)].clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::movegen::replay;

    #[test]
    fn frozen_tables_match_derivation() {
        for v in Variant::ALL {
            let derived = render_transfer_table(v);
            let frozen = parse_table(v, &derived);
            assert_eq!(&frozen, table(v), "{v}:\n{derived}");
        }
    }

    #[test]
    fn transfers_replay_with_full_hands() {
        for v in Variant::ALL {
            let mut p = kings_only(v);
            for &k in &v.kinds()[1..] {
                p.set_hand(Color::Black, k, v.total_of(k));
            }
            for &k in &v.kinds()[1..] {
                let s = hand_transfer_sequence(&p, k, Color::Black).unwrap();
                let q = replay(&p, &s).unwrap();
                assert_eq!(q.hand(Color::White, k), 1);
                assert_eq!(q.hand(Color::Black, k), v.total_of(k) - 1);
                let back = hand_transfer_sequence(&q, k, Color::White).unwrap();
                assert_eq!(replay(&q, &back).unwrap(), p);
            }
        }
    }

    #[test]
    fn preconditions() {
        let p = kings_only(Variant::Shogi);
        assert!(matches!(hand_transfer_sequence(&p, Kind::Gold, Color::Black), Err(Error::EmptyHand(_))));
        let q = p.with_side(Color::White);
        assert!(hand_transfer_sequence(&q, Kind::Gold, Color::Black).is_err());
        let r = kings_only(Variant::Minishogi);
        assert!(hand_transfer_sequence(&r, Kind::Knight, Color::Black).is_err());
    }
}
