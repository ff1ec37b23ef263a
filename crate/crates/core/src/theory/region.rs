//! Separated-King regions `BT_k`, `TB_k`, `LR_k`, `RL_k`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::position::Position;
use crate::types::{Color, Square};
use crate::variant::Variant;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RegionKind {
    /// White above the line `y = k`, Black below.
    BT,
    /// Black above, White below.
    TB,
    /// Black left of the line `x = k`, White right.
    LR,
    /// White left, Black right.
    RL,
}

impl RegionKind {
    pub const ALL: [RegionKind; 4] = [RegionKind::BT, RegionKind::TB, RegionKind::LR, RegionKind::RL];

    /// True for the two kinds split by a rank line.
    pub fn is_horizontal(self) -> bool {
        matches!(self, RegionKind::BT | RegionKind::TB)
    }
}

/// A region of KK positions, split by line `k` in `1..=size-2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Region {
    pub kind: RegionKind,
    pub k: u8,
}

/// Inclusive rectangle of squares.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Rect {
    pub x0: u8,
    pub x1: u8,
    pub y0: u8,
    pub y1: u8,
}

impl Rect {
    pub fn contains(&self, s: Square) -> bool {
        (self.x0..=self.x1).contains(&s.x) && (self.y0..=self.y1).contains(&s.y)
    }
}

impl Region {
    pub fn new(variant: Variant, kind: RegionKind, k: u8) -> Result<Region> {
        if k < 1 || k > variant.size() - 2 {
            return Err(Error::InvalidRegion(format!("k = {k} outside 1..={}", variant.size() - 2)));
        }
        Ok(Region { kind, k })
    }

    /// Square set each King may move in without leaving the region.
    pub(crate) fn movable(&self, variant: Variant, side: Color) -> Rect {
        let last = variant.size() - 1;
        let k = self.k;
        let low = (0, k - 1);
        let high = (k + 1, last);
        let full = (0, last);
        let black_low = match self.kind {
            RegionKind::BT | RegionKind::RL => false,
            RegionKind::TB | RegionKind::LR => true,
        };
        let span = if black_low == (side == Color::Black) { low } else { high };
        if self.kind.is_horizontal() {
            Rect { x0: full.0, x1: full.1, y0: span.0, y1: span.1 }
        } else {
            Rect { x0: span.0, x1: span.1, y0: full.0, y1: full.1 }
        }
    }

    /// Extent of `side`'s movable region across the split line.
    pub fn depth(&self, variant: Variant, side: Color) -> u8 {
        let r = self.movable(variant, side);
        if self.kind.is_horizontal() {
            r.y1 - r.y0 + 1
        } else {
            r.x1 - r.x0 + 1
        }
    }

    pub fn contains_kings(&self, variant: Variant, black: Square, white: Square) -> bool {
        self.movable(variant, Color::Black).contains(black) && self.movable(variant, Color::White).contains(white)
    }

    /// Membership of a KK position (hands and side are unconstrained).
    pub fn contains(&self, pos: &Position) -> bool {
        match (pos.king_square(Color::Black), pos.king_square(Color::White)) {
            (Some(b), Some(w)) => pos.non_king_count() == 0 && self.contains_kings(pos.variant(), b, w),
            _ => false,
        }
    }
}

/// Every region containing the King pair, in kind order then by `k`.
pub fn regions_of(pos: &Position) -> Vec<Region> {
    let v = pos.variant();
    let mut out = Vec::new();
    for kind in RegionKind::ALL {
        for k in 1..=v.size() - 2 {
            let r = Region { kind, k };
            if r.contains(pos) {
                out.push(r);
            }
        }
    }
    out
}

/// King squares of the KK position shared by a rank-split and a file-split region.
pub fn pivot(variant: Variant, a: Region, b: Region) -> Result<(Square, Square)> {
    let (h, v) = match (a.kind.is_horizontal(), b.kind.is_horizontal()) {
        (true, false) => (a, b),
        (false, true) => (b, a),
        _ => return Err(Error::InvalidRegion(format!("{a:?} and {b:?} have the same orientation"))),
    };
    Region::new(variant, h.kind, h.k)?;
    Region::new(variant, v.kind, v.k)?;
    let (k, kp) = (h.k, v.k);
    let (black, white) = match (h.kind, v.kind) {
        (RegionKind::BT, RegionKind::LR) => ((kp - 1, k + 1), (kp + 1, k - 1)),
        (RegionKind::BT, RegionKind::RL) => ((kp + 1, k + 1), (kp - 1, k - 1)),
        (RegionKind::TB, RegionKind::LR) => ((kp - 1, k - 1), (kp + 1, k + 1)),
        (RegionKind::TB, RegionKind::RL) => ((kp + 1, k - 1), (kp - 1, k + 1)),
        _ => unreachable!(),
    };
    Ok((Square::new(black.0, black.1), Square::new(white.0, white.1)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pivots_lie_in_both_regions() {
        for v in Variant::ALL {
            for hk in [RegionKind::BT, RegionKind::TB] {
                for vk in [RegionKind::LR, RegionKind::RL] {
                    for k in 1..=v.size() - 2 {
                        for kp in 1..=v.size() - 2 {
                            let a = Region { kind: hk, k };
                            let b = Region { kind: vk, k: kp };
                            let (bs, ws) = pivot(v, a, b).unwrap();
                            assert!(a.contains_kings(v, bs, ws));
                            assert!(b.contains_kings(v, bs, ws));
                            assert!(bs.king_distance(ws) >= 2);
                        }
                    }
                }
            }
        }
        let (b, w) = pivot(
            Variant::Shogi,
            Region { kind: RegionKind::BT, k: 1 },
            Region { kind: RegionKind::LR, k: 1 },
        )
        .unwrap();
        assert_eq!((b, w), (Square::new(0, 2), Square::new(2, 0)));
    }

    #[test]
    fn every_separated_pair_has_a_region() {
        for v in Variant::ALL {
            for b in v.squares() {
                for w in v.squares() {
                    if b.king_distance(w) < 2 {
                        continue;
                    }
                    let any = RegionKind::ALL.iter().any(|&kind| {
                        (1..=v.size() - 2).any(|k| Region { kind, k }.contains_kings(v, b, w))
                    });
                    assert!(any, "{b:?} {w:?}");
                }
            }
        }
    }

    #[test]
    fn depths_add_up() {
        let v = Variant::Shogi;
        for kind in RegionKind::ALL {
            for k in 1..=7 {
                let r = Region { kind, k };
                assert_eq!(r.depth(v, Color::Black) + r.depth(v, Color::White), 8);
            }
        }
        assert!(Region::new(v, RegionKind::BT, 8).is_err());
        assert!(Region::new(v, RegionKind::BT, 0).is_err());
    }
}
