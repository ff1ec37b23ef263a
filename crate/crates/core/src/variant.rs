//! Static game descriptions and board geometry.

use std::sync::LazyLock;

use serde::{Deserialize, Serialize};

use crate::types::{Kind, Square};

/// Largest supported board side.
pub const MAX_SIZE: usize = 9;
/// Largest supported square count.
pub const MAX_SQUARES: usize = MAX_SIZE * MAX_SIZE;

/// Sentinel in the neighbour tables for "off the board".
pub(crate) const OFF: u8 = u8::MAX;

/// Direction indices used throughout move generation.
///
/// Directions are expressed from Black's point of view, where "forward" is
/// toward rank `y = 0`.
pub mod dir {
    pub const N: usize = 0;
    pub const NE: usize = 1;
    pub const E: usize = 2;
    pub const SE: usize = 3;
    pub const S: usize = 4;
    pub const SW: usize = 5;
    pub const W: usize = 6;
    pub const NW: usize = 7;
    pub const KNIGHT_NW: usize = 8;
    pub const KNIGHT_NE: usize = 9;
    pub const KNIGHT_SW: usize = 10;
    pub const KNIGHT_SE: usize = 11;
    pub const COUNT: usize = 12;

    pub const DELTAS: [(i8, i8); COUNT] = [
        (0, -1),
        (1, -1),
        (1, 0),
        (1, 1),
        (0, 1),
        (-1, 1),
        (-1, 0),
        (-1, -1),
        (-1, -2),
        (1, -2),
        (-1, 2),
        (1, 2),
    ];

    /// Direction pointing the other way.
    pub const fn opposite(d: usize) -> usize {
        match d {
            0..=7 => (d + 4) % 8,
            KNIGHT_NW => KNIGHT_SE,
            KNIGHT_NE => KNIGHT_SW,
            KNIGHT_SW => KNIGHT_NE,
            _ => KNIGHT_NW,
        }
    }

    /// Direction mirrored vertically (Black's forward becomes White's forward).
    pub const fn flip_vertical(d: usize) -> usize {
        match d {
            N => S,
            S => N,
            NE => SE,
            SE => NE,
            NW => SW,
            SW => NW,
            KNIGHT_NW => KNIGHT_SW,
            KNIGHT_SW => KNIGHT_NW,
            KNIGHT_NE => KNIGHT_SE,
            KNIGHT_SE => KNIGHT_NE,
            other => other,
        }
    }
}

/// The two supported games.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Shogi,
    Minishogi,
}

const SHOGI_KINDS: [Kind; 8] = [
    Kind::King,
    Kind::Gold,
    Kind::Knight,
    Kind::Lance,
    Kind::Pawn,
    Kind::Silver,
    Kind::Rook,
    Kind::Bishop,
];
const SHOGI_TOTALS: [u8; 8] = [2, 4, 4, 4, 18, 4, 2, 2];

const MINI_KINDS: [Kind; 6] = [
    Kind::King,
    Kind::Gold,
    Kind::Pawn,
    Kind::Silver,
    Kind::Rook,
    Kind::Bishop,
];
const MINI_TOTALS: [u8; 6] = [2, 2, 2, 2, 2, 2];

impl Variant {
    pub const ALL: [Variant; 2] = [Variant::Shogi, Variant::Minishogi];

    pub fn name(self) -> &'static str {
        match self {
            Variant::Shogi => "shogi",
            Variant::Minishogi => "minishogi",
        }
    }

    /// Board side length (the board is square).
    #[inline]
    pub fn size(self) -> u8 {
        match self {
            Variant::Shogi => 9,
            Variant::Minishogi => 5,
        }
    }

    #[inline]
    pub fn board_width(self) -> u8 {
        self.size()
    }

    #[inline]
    pub fn board_height(self) -> u8 {
        self.size()
    }

    #[inline]
    pub fn square_count(self) -> usize {
        let n = self.size() as usize;
        n * n
    }

    /// Number of ranks in each side's promotion zone.
    #[inline]
    pub fn promotion_zone_depth(self) -> u8 {
        match self {
            Variant::Shogi => 3,
            Variant::Minishogi => 1,
        }
    }

    /// Basic piece types in codec order; index 0 is always the King.
    pub fn kinds(self) -> &'static [Kind] {
        match self {
            Variant::Shogi => &SHOGI_KINDS,
            Variant::Minishogi => &MINI_KINDS,
        }
    }

    /// Total piece count per basic type, aligned with [`Variant::kinds`].
    pub fn totals(self) -> &'static [u8] {
        match self {
            Variant::Shogi => &SHOGI_TOTALS,
            Variant::Minishogi => &MINI_TOTALS,
        }
    }

    #[inline]
    pub fn piece_type_count(self) -> usize {
        self.kinds().len()
    }

    /// Total number of pieces of `kind` in the game (0 if the variant lacks it).
    pub fn total_of(self, kind: Kind) -> u8 {
        self.kinds()
            .iter()
            .position(|&k| k == kind)
            .map_or(0, |i| self.totals()[i])
    }

    pub fn has_kind(self, kind: Kind) -> bool {
        self.kinds().contains(&kind)
    }

    /// Basic types that can promote in this variant.
    pub fn promotable_kinds(self) -> impl Iterator<Item = Kind> {
        self.kinds().iter().copied().filter(|k| k.can_promote())
    }

    /// Centre file index (the fixed file under horizontal mirroring).
    #[inline]
    pub fn center_file(self) -> u8 {
        (self.size() - 1) / 2
    }

    pub(crate) fn geometry(self) -> &'static Geometry {
        match self {
            Variant::Shogi => &SHOGI_GEOMETRY,
            Variant::Minishogi => &MINI_GEOMETRY,
        }
    }

    /// Linear square index `size * x + y`.
    #[inline]
    pub fn index(self, sq: Square) -> usize {
        sq.x as usize * self.size() as usize + sq.y as usize
    }

    #[inline]
    pub fn square(self, index: usize) -> Square {
        let n = self.size() as usize;
        Square::new((index / n) as u8, (index % n) as u8)
    }

    /// All squares in linear-index order.
    pub fn squares(self) -> impl Iterator<Item = Square> {
        let n = self.size();
        (0..n).flat_map(move |x| (0..n).map(move |y| Square::new(x, y)))
    }

    pub fn contains(self, x: i32, y: i32) -> bool {
        let n = self.size() as i32;
        (0..n).contains(&x) && (0..n).contains(&y)
    }
}

impl std::fmt::Display for Variant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Variant {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "shogi" => Ok(Variant::Shogi),
            "minishogi" | "mini" | "mini-shogi" => Ok(Variant::Minishogi),
            other => Err(crate::Error::Parse(format!("unknown variant `{other}`"))),
        }
    }
}

/// Precomputed neighbour tables for one board size.
pub(crate) struct Geometry {
    /// `step[sq][d]` is the square one step from `sq` in direction `d`, or [`OFF`].
    pub step: [[u8; dir::COUNT]; MAX_SQUARES],
    /// File (x) of each square index.
    pub file: [u8; MAX_SQUARES],
    /// Rank (y) of each square index.
    pub rank: [u8; MAX_SQUARES],
    /// Index of the horizontally mirrored square.
    pub mirror: [u8; MAX_SQUARES],
}

impl Geometry {
    fn build(n: usize) -> Geometry {
        let mut g = Geometry {
            step: [[OFF; dir::COUNT]; MAX_SQUARES],
            file: [0; MAX_SQUARES],
            rank: [0; MAX_SQUARES],
            mirror: [OFF; MAX_SQUARES],
        };
        for x in 0..n {
            for y in 0..n {
                let i = x * n + y;
                g.file[i] = x as u8;
                g.rank[i] = y as u8;
                g.mirror[i] = ((n - 1 - x) * n + y) as u8;
                for (d, &(dx, dy)) in dir::DELTAS.iter().enumerate() {
                    let (tx, ty) = (x as i32 + dx as i32, y as i32 + dy as i32);
                    if (0..n as i32).contains(&tx) && (0..n as i32).contains(&ty) {
                        g.step[i][d] = (tx as usize * n + ty as usize) as u8;
                    }
                }
            }
        }
        g
    }
}

static SHOGI_GEOMETRY: LazyLock<Geometry> = LazyLock::new(|| Geometry::build(9));
static MINI_GEOMETRY: LazyLock<Geometry> = LazyLock::new(|| Geometry::build(5));
