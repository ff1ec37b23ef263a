//! The history-free position `(side to move, board, hands)`.

use std::fmt;

use crate::error::{Error, Result};
use crate::types::{Color, Kind, Move, Piece, Square};
use crate::variant::{Variant, MAX_SQUARES};

/// A game position. Equality and hashing cover exactly the side to move,
/// the board and both hands (plus the variant tag).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Position {
    variant: Variant,
    side: Color,
    board: [Option<Piece>; MAX_SQUARES],
    hands: [[u8; 8]; 2],
}

impl Position {
    /// An empty board with empty hands. Not a valid position until Kings are placed.
    pub fn empty(variant: Variant, side: Color) -> Position {
        Position {
            variant,
            side,
            board: [None; MAX_SQUARES],
            hands: [[0; 8]; 2],
        }
    }

    /// The standard starting position, Black to move.
    pub fn initial(variant: Variant) -> Position {
        let sfen = match variant {
            Variant::Shogi => {
                "lnsgkgsnl/1r5b1/ppppppppp/9/9/9/PPPPPPPPP/1B5R1/LNSGKGSNL b - 1"
            }
            Variant::Minishogi => "rbsgk/4p/5/P4/KGSBR b - 1",
        };
        crate::sfen::parse(variant, sfen).expect("built-in start position parses")
    }

    #[inline]
    pub fn variant(&self) -> Variant {
        self.variant
    }

    #[inline]
    pub fn side_to_move(&self) -> Color {
        self.side
    }

    #[inline]
    pub fn set_side_to_move(&mut self, side: Color) {
        self.side = side;
    }

    #[inline]
    pub fn at(&self, sq: Square) -> Option<Piece> {
        self.board[self.variant.index(sq)]
    }

    #[inline]
    pub fn set(&mut self, sq: Square, piece: Option<Piece>) {
        let i = self.variant.index(sq);
        self.board[i] = piece;
    }

    #[inline]
    pub(crate) fn at_index(&self, i: usize) -> Option<Piece> {
        self.board[i]
    }

    #[inline]
    pub(crate) fn set_index(&mut self, i: usize, piece: Option<Piece>) {
        self.board[i] = piece;
    }

    #[inline]
    pub fn hand(&self, owner: Color, kind: Kind) -> u8 {
        self.hands[owner.index()][kind.index()]
    }

    #[inline]
    pub fn set_hand(&mut self, owner: Color, kind: Kind, count: u8) {
        self.hands[owner.index()][kind.index()] = count;
    }

    #[inline]
    pub(crate) fn add_hand(&mut self, owner: Color, kind: Kind, delta: i8) {
        let slot = &mut self.hands[owner.index()][kind.index()];
        *slot = (*slot as i8 + delta) as u8;
    }

    /// Occupied squares in linear-index order.
    pub fn pieces(&self) -> impl Iterator<Item = (Square, Piece)> + '_ {
        let v = self.variant;
        (0..v.square_count()).filter_map(move |i| self.board[i].map(|p| (v.square(i), p)))
    }

    pub(crate) fn occupied_indices(&self) -> impl Iterator<Item = (usize, Piece)> + '_ {
        (0..self.variant.square_count()).filter_map(move |i| self.board[i].map(|p| (i, p)))
    }

    pub(crate) fn king_index(&self, owner: Color) -> Option<usize> {
        let king = Piece::unpromoted(Kind::King, owner);
        (0..self.variant.square_count()).find(|&i| self.board[i] == Some(king))
    }

    pub fn king_square(&self, owner: Color) -> Option<Square> {
        self.king_index(owner).map(|i| self.variant.square(i))
    }

    /// Number of non-King pieces on the board.
    pub fn non_king_count(&self) -> usize {
        self.occupied_indices().filter(|(_, p)| p.kind() != Kind::King).count()
    }

    /// Board mirrored left-right; hands and side to move unchanged.
    pub fn hflip(&self) -> Position {
        let g = self.variant.geometry();
        let mut out = self.clone();
        for i in 0..self.variant.square_count() {
            out.board[g.mirror[i] as usize] = self.board[i];
        }
        out
    }

    /// Same board and hands with the other side to move.
    pub fn with_side(&self, side: Color) -> Position {
        let mut out = self.clone();
        out.side = side;
        out
    }

    /// Checks the structural invariants: one unpromoted King per side on the
    /// board, piece conservation per basic type, no Kings in hand, and
    /// promotion only on promotable types present in the variant.
    pub fn validate(&self) -> Result<()> {
        let v = self.variant;
        let mut on_board = [0u32; 8];
        let mut kings = [0u32; 2];
        for i in v.square_count()..MAX_SQUARES {
            if self.board[i].is_some() {
                return Err(Error::InvalidPosition("piece outside the board".into()));
            }
        }
        for (_, p) in self.occupied_indices() {
            let k = p.kind();
            if !v.has_kind(k) {
                return Err(Error::InvalidPosition(format!("{k:?} is not used in {v}")));
            }
            if p.is_promoted() && !k.can_promote() {
                return Err(Error::InvalidPosition(format!("promoted {k:?}")));
            }
            if k == Kind::King {
                kings[p.owner().index()] += 1;
            }
            on_board[k.index()] += 1;
        }
        if kings != [1, 1] {
            return Err(Error::InvalidPosition(format!(
                "expected one King per side, found {} Black and {} White",
                kings[0], kings[1]
            )));
        }
        for kind in Kind::ALL {
            let total = v.total_of(kind) as u32;
            let held = self.hand(Color::Black, kind) as u32 + self.hand(Color::White, kind) as u32;
            if kind == Kind::King && held > 0 {
                return Err(Error::InvalidPosition("King in hand".into()));
            }
            if on_board[kind.index()] + held != total {
                return Err(Error::InvalidPosition(format!(
                    "{kind:?}: {} on board + {held} in hand != {total}",
                    on_board[kind.index()]
                )));
            }
        }
        Ok(())
    }

    /// Plays `m` without any legality check and returns the new position with
    /// the captured piece, if any.
    ///
    /// The move must at least be structurally applicable (a piece of the
    /// mover on `from`, or the dropped kind in hand).
    pub fn play_unchecked(&self, m: Move) -> (Position, Option<Piece>) {
        let mut next = self.clone();
        let captured = next.apply_in_place(m);
        (next, captured)
    }

    pub(crate) fn apply_in_place(&mut self, m: Move) -> Option<Piece> {
        let v = self.variant;
        let mover = self.side;
        let captured = match m {
            Move::Board { from, to, promote } => {
                let fi = v.index(from);
                let ti = v.index(to);
                let piece = self.board[fi].take().expect("no piece on origin square");
                let captured = self.board[ti];
                if let Some(c) = captured {
                    self.add_hand(mover, c.kind(), 1);
                }
                self.board[ti] = Some(if promote { piece.promote() } else { piece });
                captured
            }
            Move::Drop { kind, to } => {
                self.add_hand(mover, kind, -1);
                self.board[v.index(to)] = Some(Piece::unpromoted(kind, mover));
                None
            }
        };
        self.side = !mover;
        captured
    }
}

impl fmt::Debug for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Position({})", crate::sfen::render(self))
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::sfen::render(self))
    }
}
