//! Forward move generation, legality and static validity.
//!
//! The board is a plain mailbox; neighbour lookups go through the variant's
//! precomputed geometry tables. A move is legal when it is pseudo-legal,
//! respects mandatory promotion and drop restrictions, does not leave the
//! mover's King capturable, and (for Pawn drops) leaves the opponent at least
//! one legal reply. The last rule covers both Drop Pawn Mate and Drop Pawn
//! Stalemate.

use std::sync::LazyLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::position::Position;
use crate::types::{Color, Kind, Move, Piece};
use crate::variant::{dir, Variant, OFF};

struct MoveTable {
    step: [u16; 32],
    slide: [u8; 32],
}

fn black_pattern(kind: Kind, promoted: bool) -> (Vec<usize>, Vec<usize>) {
    use dir::*;
    const GOLD: [usize; 6] = [N, NE, NW, E, W, S];
    const DIAG: [usize; 4] = [NE, SE, SW, NW];
    const ORTHO: [usize; 4] = [N, E, S, W];
    match (kind, promoted) {
        (Kind::King, _) => ((0..8).collect(), vec![]),
        (Kind::Gold, _) | (Kind::Silver | Kind::Knight | Kind::Lance | Kind::Pawn, true) => {
            (GOLD.to_vec(), vec![])
        }
        (Kind::Silver, false) => (vec![N, NE, NW, SE, SW], vec![]),
        (Kind::Knight, false) => (vec![KNIGHT_NW, KNIGHT_NE], vec![]),
        (Kind::Lance, false) => (vec![], vec![N]),
        (Kind::Pawn, false) => (vec![N], vec![]),
        (Kind::Rook, false) => (vec![], ORTHO.to_vec()),
        (Kind::Rook, true) => (DIAG.to_vec(), ORTHO.to_vec()),
        (Kind::Bishop, false) => (vec![], DIAG.to_vec()),
        (Kind::Bishop, true) => (ORTHO.to_vec(), DIAG.to_vec()),
    }
}

static TABLE: LazyLock<MoveTable> = LazyLock::new(|| {
    let mut t = MoveTable { step: [0; 32], slide: [0; 32] };
    for kind in Kind::ALL {
        for owner in Color::BOTH {
            for promoted in [false, true] {
                if promoted && !kind.can_promote() {
                    continue;
                }
                let code = Piece::new(kind, owner, promoted).code();
                let (steps, slides) = black_pattern(kind, promoted);
                let orient = |d: usize| match owner {
                    Color::Black => d,
                    Color::White => dir::flip_vertical(d),
                };
                for d in steps {
                    t.step[code] |= 1 << orient(d);
                }
                for d in slides {
                    t.slide[code] |= 1 << orient(d);
                }
            }
        }
    }
    t
});

/// Step and slide direction masks of `piece`, already oriented for its owner.
#[inline]
pub(crate) fn patterns(piece: Piece) -> (u16, u8) {
    let c = piece.code();
    (TABLE.step[c], TABLE.slide[c])
}

/// True if a piece of `kind` owned by `owner` could never move again from rank `y`.
#[inline]
pub(crate) fn is_dead_square(variant: Variant, kind: Kind, owner: Color, y: u8) -> bool {
    let n = variant.size();
    // distance to the far edge, counted in ranks still ahead of the piece
    let ahead = match owner {
        Color::Black => y,
        Color::White => n - 1 - y,
    };
    match kind {
        Kind::Pawn | Kind::Lance => ahead == 0,
        Kind::Knight => ahead <= 1,
        _ => false,
    }
}

/// True if rank `y` lies in `owner`'s promotion zone (the far ranks).
#[inline]
pub(crate) fn in_zone(variant: Variant, owner: Color, y: u8) -> bool {
    let depth = variant.promotion_zone_depth();
    match owner {
        Color::Black => y < depth,
        Color::White => y >= variant.size() - depth,
    }
}

/// Is square index `sq` attacked by any piece of `by`?
pub(crate) fn is_attacked(pos: &Position, sq: usize, by: Color) -> bool {
    let g = pos.variant().geometry();
    let table = &*TABLE;
    for d in 0..8 {
        let back = dir::opposite(d);
        let mut cur = sq;
        let mut dist = 0;
        loop {
            let nx = g.step[cur][d];
            if nx == OFF {
                break;
            }
            cur = nx as usize;
            dist += 1;
            if let Some(p) = pos.at_index(cur) {
                if p.owner() == by {
                    let c = p.code();
                    if table.slide[c] >> back & 1 == 1 || (dist == 1 && table.step[c] >> back & 1 == 1) {
                        return true;
                    }
                }
                break;
            }
        }
    }
    for d in dir::KNIGHT_NW..dir::COUNT {
        let t = g.step[sq][d];
        if t == OFF {
            continue;
        }
        if let Some(p) = pos.at_index(t as usize) {
            if p.owner() == by && table.step[p.code()] >> dir::opposite(d) & 1 == 1 {
                return true;
            }
        }
    }
    false
}

/// Is `side`'s King attacked by the opponent?
pub fn in_check(pos: &Position, side: Color) -> bool {
    match pos.king_index(side) {
        Some(k) => is_attacked(pos, k, !side),
        None => false,
    }
}

/// Outcome of the static rule-violation filters, in filter order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Validity {
    Valid,
    TwoPawns,
    DeadPiece,
    CheckViolation,
}

impl Validity {
    pub fn is_valid(self) -> bool {
        self == Validity::Valid
    }
}

/// Two Pawns: some player has two unpromoted Pawns on one file.
pub fn has_two_pawns(pos: &Position) -> bool {
    let mut seen = [[false; 9]; 2];
    for (i, p) in pos.occupied_indices() {
        if p.kind() == Kind::Pawn && !p.is_promoted() {
            let file = pos.variant().geometry().file[i] as usize;
            let slot = &mut seen[p.owner().index()][file];
            if *slot {
                return true;
            }
            *slot = true;
        }
    }
    false
}

/// Some unpromoted piece stands where it can never move again.
pub fn has_dead_piece(pos: &Position) -> bool {
    let v = pos.variant();
    let g = v.geometry();
    pos.occupied_indices()
        .any(|(i, p)| !p.is_promoted() && is_dead_square(v, p.kind(), p.owner(), g.rank[i]))
}

/// Returns the first failed static check: Two Pawns, dead piece, then the
/// non-mover's King standing in check.
pub fn is_statically_valid(pos: &Position) -> Validity {
    if has_two_pawns(pos) {
        Validity::TwoPawns
    } else if has_dead_piece(pos) {
        Validity::DeadPiece
    } else if in_check(pos, !pos.side_to_move()) {
        Validity::CheckViolation
    } else {
        Validity::Valid
    }
}

/// Calls `f` for each pseudo-legal move (movement rules, promotion options
/// and drop restrictions applied; King safety not checked). Stops early when
/// `f` returns `false`. Returns `false` if stopped.
fn for_each_pseudo(pos: &Position, mut f: impl FnMut(Move) -> bool) -> bool {
    let v = pos.variant();
    let g = v.geometry();
    let table = &*TABLE;
    let me = pos.side_to_move();
    let n_sq = v.square_count();

    let emit_board = |from: usize, to: usize, piece: Piece, f: &mut dyn FnMut(Move) -> bool| -> bool {
        let (fy, ty) = (g.rank[from], g.rank[to]);
        let (from_sq, to_sq) = (v.square(from), v.square(to));
        if !piece.is_promoted() && piece.kind().can_promote() && (in_zone(v, me, fy) || in_zone(v, me, ty)) {
            if !f(Move::Board { from: from_sq, to: to_sq, promote: true }) {
                return false;
            }
        }
        if piece.is_promoted() || !is_dead_square(v, piece.kind(), me, ty) {
            if !f(Move::Board { from: from_sq, to: to_sq, promote: false }) {
                return false;
            }
        }
        true
    };

    for from in 0..n_sq {
        let Some(piece) = pos.at_index(from) else { continue };
        if piece.owner() != me {
            continue;
        }
        let c = piece.code();
        let mut steps = table.step[c];
        while steps != 0 {
            let d = steps.trailing_zeros() as usize;
            steps &= steps - 1;
            let to = g.step[from][d];
            if to == OFF {
                continue;
            }
            let to = to as usize;
            if pos.at_index(to).is_some_and(|q| q.owner() == me) {
                continue;
            }
            if !emit_board(from, to, piece, &mut f) {
                return false;
            }
        }
        let mut slides = table.slide[c];
        while slides != 0 {
            let d = slides.trailing_zeros() as usize;
            slides &= slides - 1;
            let mut cur = from;
            loop {
                let nx = g.step[cur][d];
                if nx == OFF {
                    break;
                }
                cur = nx as usize;
                match pos.at_index(cur) {
                    Some(q) if q.owner() == me => break,
                    Some(_) => {
                        if !emit_board(from, cur, piece, &mut f) {
                            return false;
                        }
                        break;
                    }
                    None => {
                        if !emit_board(from, cur, piece, &mut f) {
                            return false;
                        }
                    }
                }
            }
        }
    }

    let mut pawn_files = [false; 9];
    for (i, p) in pos.occupied_indices() {
        if p.owner() == me && p.kind() == Kind::Pawn && !p.is_promoted() {
            pawn_files[g.file[i] as usize] = true;
        }
    }
    // Pawn drops last: their legality test is the expensive one.
    let mut kinds: Vec<Kind> = v.kinds()[1..].iter().copied().filter(|&k| k != Kind::Pawn).collect();
    if v.has_kind(Kind::Pawn) {
        kinds.push(Kind::Pawn);
    }
    for kind in kinds {
        if pos.hand(me, kind) == 0 {
            continue;
        }
        for to in 0..n_sq {
            if pos.at_index(to).is_some() || is_dead_square(v, kind, me, g.rank[to]) {
                continue;
            }
            if kind == Kind::Pawn && pawn_files[g.file[to] as usize] {
                continue;
            }
            if !f(Move::Drop { kind, to: v.square(to) }) {
                return false;
            }
        }
    }
    true
}

/// Legality of a pseudo-legal move: King safety plus the Pawn-drop rule.
fn pseudo_is_legal(pos: &Position, m: Move) -> bool {
    let me = pos.side_to_move();
    let (after, _) = pos.play_unchecked(m);
    if in_check(&after, me) {
        return false;
    }
    if let Move::Drop { kind: Kind::Pawn, .. } = m {
        return has_legal_move(&after);
    }
    true
}

/// Does the side to move have at least one legal move?
pub fn has_legal_move(pos: &Position) -> bool {
    let me = pos.side_to_move();
    // King moves first: the cheapest way to find a witness.
    if let Some(k) = pos.king_index(me) {
        let v = pos.variant();
        let g = v.geometry();
        for d in 0..8 {
            let to = g.step[k][d];
            if to == OFF || pos.at_index(to as usize).is_some_and(|q| q.owner() == me) {
                continue;
            }
            let m = Move::Board { from: v.square(k), to: v.square(to as usize), promote: false };
            if pseudo_is_legal(pos, m) {
                return true;
            }
        }
    }
    !for_each_pseudo(pos, |m| !pseudo_is_legal(pos, m))
}

/// All legal moves without validating the position first.
pub fn legal_moves_unchecked(pos: &Position) -> Vec<Move> {
    let mut out = Vec::with_capacity(128);
    for_each_pseudo(pos, |m| {
        if pseudo_is_legal(pos, m) {
            out.push(m);
        }
        true
    });
    out
}

/// All pseudo-legal moves (King safety ignored).
pub fn pseudo_moves(pos: &Position) -> Vec<Move> {
    let mut out = Vec::with_capacity(128);
    for_each_pseudo(pos, |m| {
        out.push(m);
        true
    });
    out
}

/// The legal moves of `pos`.
///
/// Fails with [`Error::InvalidPosition`] if `pos` breaks the structural
/// invariants or the side not to move is in check.
pub fn moves(pos: &Position) -> Result<Vec<Move>> {
    pos.validate()?;
    if in_check(pos, !pos.side_to_move()) {
        return Err(Error::InvalidPosition("the side not to move is in check".into()));
    }
    Ok(legal_moves_unchecked(pos))
}

/// Does `m` belong to the legal move set of `pos`?
///
/// Equivalent to `legal_moves_unchecked(pos).contains(&m)` without
/// generating the whole list.
pub fn is_legal(pos: &Position, m: Move) -> bool {
    let v = pos.variant();
    let me = pos.side_to_move();
    let n = v.size();
    match m {
        Move::Board { from, to, promote } => {
            if from.x >= n || from.y >= n || to.x >= n || to.y >= n || from == to {
                return false;
            }
            let Some(piece) = pos.at(from) else { return false };
            if piece.owner() != me || pos.at(to).is_some_and(|q| q.owner() == me) {
                return false;
            }
            if !reaches(pos, v.index(from), v.index(to), piece) {
                return false;
            }
            if promote {
                if piece.is_promoted()
                    || !piece.kind().can_promote()
                    || !(in_zone(v, me, from.y) || in_zone(v, me, to.y))
                {
                    return false;
                }
            } else if !piece.is_promoted() && is_dead_square(v, piece.kind(), me, to.y) {
                return false;
            }
        }
        Move::Drop { kind, to } => {
            if kind == Kind::King || to.x >= n || to.y >= n || pos.hand(me, kind) == 0 {
                return false;
            }
            if pos.at(to).is_some() || is_dead_square(v, kind, me, to.y) {
                return false;
            }
            if kind == Kind::Pawn {
                let pawn = Piece::unpromoted(Kind::Pawn, me);
                if (0..n).any(|y| pos.at(crate::types::Square::new(to.x, y)) == Some(pawn)) {
                    return false;
                }
            }
        }
    }
    pseudo_is_legal(pos, m)
}

/// Can `piece` standing on `from` move to `to` under its movement rule?
fn reaches(pos: &Position, from: usize, to: usize, piece: Piece) -> bool {
    let g = pos.variant().geometry();
    let table = &*TABLE;
    let c = piece.code();
    let mut steps = table.step[c];
    while steps != 0 {
        let d = steps.trailing_zeros() as usize;
        steps &= steps - 1;
        if g.step[from][d] as usize == to {
            return true;
        }
    }
    let mut slides = table.slide[c];
    while slides != 0 {
        let d = slides.trailing_zeros() as usize;
        slides &= slides - 1;
        let mut cur = from;
        loop {
            let nx = g.step[cur][d];
            if nx == OFF {
                break;
            }
            cur = nx as usize;
            if cur == to {
                return true;
            }
            if pos.at_index(cur).is_some() {
                break;
            }
        }
    }
    false
}

/// Plays a legal move; fails with [`Error::IllegalMove`] otherwise.
pub fn next(pos: &Position, m: Move) -> Result<Position> {
    if !is_legal(pos, m) {
        return Err(Error::IllegalMove(crate::sfen::move_to_usi(pos.variant(), m)));
    }
    Ok(pos.play_unchecked(m).0)
}

/// Replays `moves` from `start`, checking each one. Returns the final position.
pub fn replay(start: &Position, moves: &[Move]) -> Result<Position> {
    let mut pos = start.clone();
    for (i, &m) in moves.iter().enumerate() {
        if !is_legal(&pos, m) {
            return Err(Error::IllegalMove(format!(
                "ply {} `{}` in {}",
                i + 1,
                crate::sfen::move_to_usi(pos.variant(), m),
                pos
            )));
        }
        pos.apply_in_place(m);
    }
    Ok(pos)
}

/// Leaf count of the legal move tree to `depth` plies.
pub fn perft(pos: &Position, depth: u32) -> u64 {
    if depth == 0 {
        return 1;
    }
    let moves = legal_moves_unchecked(pos);
    if depth == 1 {
        return moves.len() as u64;
    }
    moves.iter().map(|&m| perft(&pos.play_unchecked(m).0, depth - 1)).sum()
}
