use std::fmt;
use std::num::NonZeroU8;

use serde::{Deserialize, Serialize};

/// Side to move / piece owner. Black moves first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Color {
    #[serde(rename = "B")]
    Black = 0,
    #[serde(rename = "W")]
    White = 1,
}

impl Color {
    pub const BOTH: [Color; 2] = [Color::Black, Color::White];

    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }

    #[inline]
    pub fn flip(self) -> Color {
        match self {
            Color::Black => Color::White,
            Color::White => Color::Black,
        }
    }
}

impl std::ops::Not for Color {
    type Output = Color;

    fn not(self) -> Color {
        self.flip()
    }
}

/// Basic (unpromoted) piece type.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[repr(u8)]
pub enum Kind {
    King = 0,
    Gold = 1,
    Silver = 2,
    Knight = 3,
    Lance = 4,
    Pawn = 5,
    Rook = 6,
    Bishop = 7,
}

impl Kind {
    pub const ALL: [Kind; 8] = [
        Kind::King,
        Kind::Gold,
        Kind::Silver,
        Kind::Knight,
        Kind::Lance,
        Kind::Pawn,
        Kind::Rook,
        Kind::Bishop,
    ];

    /// Kinds that may sit in a hand, in SFEN hand order.
    pub const HAND: [Kind; 7] = [
        Kind::Rook,
        Kind::Bishop,
        Kind::Gold,
        Kind::Silver,
        Kind::Knight,
        Kind::Lance,
        Kind::Pawn,
    ];

    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }

    #[inline]
    pub fn from_index(i: usize) -> Kind {
        Kind::ALL[i]
    }

    #[inline]
    pub fn can_promote(self) -> bool {
        !matches!(self, Kind::King | Kind::Gold)
    }

    /// Upper-case SFEN letter.
    pub fn letter(self) -> char {
        match self {
            Kind::King => 'K',
            Kind::Gold => 'G',
            Kind::Silver => 'S',
            Kind::Knight => 'N',
            Kind::Lance => 'L',
            Kind::Pawn => 'P',
            Kind::Rook => 'R',
            Kind::Bishop => 'B',
        }
    }

    pub fn from_letter(c: char) -> Option<Kind> {
        Some(match c.to_ascii_uppercase() {
            'K' => Kind::King,
            'G' => Kind::Gold,
            'S' => Kind::Silver,
            'N' => Kind::Knight,
            'L' => Kind::Lance,
            'P' => Kind::Pawn,
            'R' => Kind::Rook,
            'B' => Kind::Bishop,
            _ => return None,
        })
    }
}

/// A piece on the board: basic type, owner and promotion flag packed into one byte.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Piece(NonZeroU8);

impl Piece {
    /// Panics in debug builds if `promoted` is set on a King or Gold.
    #[inline]
    pub fn new(kind: Kind, owner: Color, promoted: bool) -> Piece {
        debug_assert!(!promoted || kind.can_promote());
        let code = 1 + ((owner as u8) << 4 | (promoted as u8) << 3 | kind as u8);
        Piece(NonZeroU8::new(code).unwrap())
    }

    #[inline]
    pub fn unpromoted(kind: Kind, owner: Color) -> Piece {
        Piece::new(kind, owner, false)
    }

    #[inline]
    fn raw(self) -> u8 {
        self.0.get() - 1
    }

    /// Dense code in `0..32`, used for table lookups.
    #[inline]
    pub(crate) fn code(self) -> usize {
        self.raw() as usize
    }

    #[inline]
    pub fn kind(self) -> Kind {
        Kind::from_index((self.raw() & 7) as usize)
    }

    #[inline]
    pub fn owner(self) -> Color {
        if self.raw() & 16 == 0 {
            Color::Black
        } else {
            Color::White
        }
    }

    #[inline]
    pub fn is_promoted(self) -> bool {
        self.raw() & 8 != 0
    }

    #[inline]
    pub fn promote(self) -> Piece {
        Piece::new(self.kind(), self.owner(), true)
    }

    #[inline]
    pub fn demote(self) -> Piece {
        Piece::new(self.kind(), self.owner(), false)
    }

    #[inline]
    pub fn with_owner(self, owner: Color) -> Piece {
        Piece::new(self.kind(), owner, self.is_promoted())
    }

    /// SFEN token, e.g. `P`, `+r`.
    pub fn sfen(self) -> String {
        let mut s = String::with_capacity(2);
        if self.is_promoted() {
            s.push('+');
        }
        let c = self.kind().letter();
        s.push(match self.owner() {
            Color::Black => c,
            Color::White => c.to_ascii_lowercase(),
        });
        s
    }
}

impl fmt::Debug for Piece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.sfen())
    }
}

/// Board coordinate seen from Black: `x` is the column index from the left
/// (file 9 in traditional notation is `x = 0`), `y` the row index from the top.
///
/// The derived order is `(x, y)` lexicographic, which matches the linear
/// index `size * x + y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Square {
    pub x: u8,
    pub y: u8,
}

impl Square {
    #[inline]
    pub const fn new(x: u8, y: u8) -> Square {
        Square { x, y }
    }

    /// Chebyshev (king-move) distance.
    pub fn king_distance(self, other: Square) -> u8 {
        self.x.abs_diff(other.x).max(self.y.abs_diff(other.y))
    }
}

/// A forward move.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Move {
    Board { from: Square, to: Square, promote: bool },
    Drop { kind: Kind, to: Square },
}

impl Move {
    #[inline]
    pub fn to(self) -> Square {
        match self {
            Move::Board { to, .. } | Move::Drop { to, .. } => to,
        }
    }

    #[inline]
    pub fn from(self) -> Option<Square> {
        match self {
            Move::Board { from, .. } => Some(from),
            Move::Drop { .. } => None,
        }
    }

    #[inline]
    pub fn is_drop(self) -> bool {
        matches!(self, Move::Drop { .. })
    }

    #[inline]
    pub fn promotes(self) -> bool {
        matches!(self, Move::Board { promote: true, .. })
    }
}
