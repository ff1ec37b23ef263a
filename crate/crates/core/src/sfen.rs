//! SFEN positions and USI / traditional move notation.
//!
//! Files are numbered right-to-left from Black's side (`x = size - file`),
//! ranks are letters top-down (`y = letter - 'a'`). The 5x5 game uses the
//! same conventions restricted to files 1-5 and ranks a-e.

use crate::error::{Error, Result};
use crate::movegen;
use crate::position::Position;
use crate::types::{Color, Kind, Move, Piece, Square};
use crate::variant::Variant;

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

/// Parses an SFEN string (with or without the leading `sfen` keyword and
/// the trailing move number) and checks the structural invariants.
pub fn parse(variant: Variant, text: &str) -> Result<Position> {
    let pos = parse_raw(variant, text)?;
    pos.validate()?;
    Ok(pos)
}

/// Like [`parse`], but every piece missing from the board and the listed
/// hands is added to `owner`'s hand first. Handy for writing diagrams.
pub fn parse_completing(variant: Variant, text: &str, owner: Color) -> Result<Position> {
    let mut pos = parse_raw(variant, text)?;
    let mut seen = [0u32; 8];
    for (_, p) in pos.pieces() {
        seen[p.kind().index()] += 1;
    }
    for &kind in &variant.kinds()[1..] {
        let have = seen[kind.index()]
            + pos.hand(Color::Black, kind) as u32
            + pos.hand(Color::White, kind) as u32;
        let total = variant.total_of(kind) as u32;
        if have > total {
            return Err(Error::InvalidPosition(format!("too many {kind:?}")));
        }
        let cur = pos.hand(owner, kind);
        pos.set_hand(owner, kind, cur + (total - have) as u8);
    }
    pos.validate()?;
    Ok(pos)
}

fn parse_raw(variant: Variant, text: &str) -> Result<Position> {
    let mut fields = text.split_whitespace().peekable();
    if fields.peek() == Some(&"sfen") {
        fields.next();
    }
    let board = fields.next().ok_or_else(|| parse_err("missing board field"))?;
    let side = fields.next().ok_or_else(|| parse_err("missing side field"))?;
    let hands = fields.next().unwrap_or("-");
    if let Some(ply) = fields.next() {
        ply.parse::<u32>()
            .map_err(|_| parse_err(format!("bad move number `{ply}`")))?;
    }
    if fields.next().is_some() {
        return Err(parse_err("trailing fields"));
    }

    let side = match side {
        "b" => Color::Black,
        "w" => Color::White,
        other => return Err(parse_err(format!("bad side `{other}`"))),
    };
    let mut pos = Position::empty(variant, side);
    let n = variant.size();

    let rows: Vec<&str> = board.split('/').collect();
    if rows.len() != n as usize {
        return Err(parse_err(format!("expected {n} ranks, found {}", rows.len())));
    }
    for (y, row) in rows.iter().enumerate() {
        let mut x: u8 = 0;
        let mut promoted = false;
        for c in row.chars() {
            if let Some(d) = c.to_digit(10) {
                if promoted || d == 0 {
                    return Err(parse_err(format!("bad rank `{row}`")));
                }
                x += d as u8;
            } else if c == '+' {
                if promoted {
                    return Err(parse_err(format!("bad rank `{row}`")));
                }
                promoted = true;
            } else {
                let kind = Kind::from_letter(c).ok_or_else(|| parse_err(format!("bad piece `{c}`")))?;
                if x >= n {
                    return Err(parse_err(format!("rank `{row}` too long")));
                }
                if promoted && !kind.can_promote() {
                    return Err(parse_err(format!("`+{c}` cannot be promoted")));
                }
                let owner = if c.is_ascii_uppercase() { Color::Black } else { Color::White };
                pos.set(Square::new(x, y as u8), Some(Piece::new(kind, owner, promoted)));
                promoted = false;
                x += 1;
            }
        }
        if x != n || promoted {
            return Err(parse_err(format!("rank `{row}` has wrong width")));
        }
    }

    if hands != "-" {
        let mut count: u32 = 0;
        for c in hands.chars() {
            if let Some(d) = c.to_digit(10) {
                count = count * 10 + d;
                continue;
            }
            let kind = Kind::from_letter(c).ok_or_else(|| parse_err(format!("bad hand piece `{c}`")))?;
            if kind == Kind::King {
                return Err(parse_err("King in hand"));
            }
            let owner = if c.is_ascii_uppercase() { Color::Black } else { Color::White };
            let add = if count == 0 { 1 } else { count };
            let total = pos.hand(owner, kind) as u32 + add;
            if total > 40 {
                return Err(parse_err("hand count too large"));
            }
            pos.set_hand(owner, kind, total as u8);
            count = 0;
        }
        if count != 0 {
            return Err(parse_err("dangling hand count"));
        }
    }
    Ok(pos)
}

/// Renders `pos` as `board side hands 1`.
pub fn render(pos: &Position) -> String {
    let n = pos.variant().size();
    let mut out = String::new();
    for y in 0..n {
        if y > 0 {
            out.push('/');
        }
        let mut gap = 0;
        for x in 0..n {
            match pos.at(Square::new(x, y)) {
                None => gap += 1,
                Some(p) => {
                    if gap > 0 {
                        out.push_str(&gap.to_string());
                        gap = 0;
                    }
                    out.push_str(&p.sfen());
                }
            }
        }
        if gap > 0 {
            out.push_str(&gap.to_string());
        }
    }
    out.push(' ');
    out.push(match pos.side_to_move() {
        Color::Black => 'b',
        Color::White => 'w',
    });
    out.push(' ');
    let mut hand = String::new();
    for owner in Color::BOTH {
        for kind in Kind::HAND {
            let c = pos.hand(owner, kind);
            if c == 0 {
                continue;
            }
            if c > 1 {
                hand.push_str(&c.to_string());
            }
            let l = kind.letter();
            hand.push(if owner == Color::Black { l } else { l.to_ascii_lowercase() });
        }
    }
    if hand.is_empty() {
        hand.push('-');
    }
    out.push_str(&hand);
    out.push_str(" 1");
    out
}

/// Traditional square name such as `7f`.
pub fn square_name(variant: Variant, sq: Square) -> String {
    let file = variant.size() - sq.x;
    let rank = (b'a' + sq.y) as char;
    format!("{file}{rank}")
}

pub fn parse_square(variant: Variant, text: &str) -> Result<Square> {
    let b = text.as_bytes();
    if b.len() != 2 {
        return Err(parse_err(format!("bad square `{text}`")));
    }
    let n = variant.size();
    let file = (b[0] as char)
        .to_digit(10)
        .filter(|&f| f >= 1 && f <= n as u32)
        .ok_or_else(|| parse_err(format!("bad file in `{text}`")))? as u8;
    let rank = b[1].wrapping_sub(b'a');
    if rank >= n {
        return Err(parse_err(format!("bad rank in `{text}`")));
    }
    Ok(Square::new(n - file, rank))
}

/// USI move text: `7g7f`, `8h2b+`, `P*5e`.
pub fn move_to_usi(variant: Variant, m: Move) -> String {
    match m {
        Move::Board { from, to, promote } => format!(
            "{}{}{}",
            square_name(variant, from),
            square_name(variant, to),
            if promote { "+" } else { "" }
        ),
        Move::Drop { kind, to } => format!("{}*{}", kind.letter(), square_name(variant, to)),
    }
}

pub fn parse_usi(variant: Variant, text: &str) -> Result<Move> {
    let text = text.trim();
    if let Some((k, sq)) = text.split_once('*') {
        let mut chars = k.chars();
        let kind = match (chars.next(), chars.next()) {
            (Some(c), None) => Kind::from_letter(c),
            _ => None,
        }
        .filter(|&k| k != Kind::King)
        .ok_or_else(|| parse_err(format!("bad drop `{text}`")))?;
        return Ok(Move::Drop { kind, to: parse_square(variant, sq)? });
    }
    let (body, promote) = match text.strip_suffix('+') {
        Some(b) => (b, true),
        None => (text, false),
    };
    if body.len() != 4 || !body.is_ascii() {
        return Err(parse_err(format!("bad move `{text}`")));
    }
    Ok(Move::Board {
        from: parse_square(variant, &body[..2])?,
        to: parse_square(variant, &body[2..])?,
        promote,
    })
}

/// Parses a whitespace/newline separated USI move list; `#` starts a comment.
pub fn parse_usi_list(variant: Variant, text: &str) -> Result<Vec<Move>> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .flat_map(str::split_whitespace)
        .map(|tok| parse_usi(variant, tok))
        .collect()
}

/// Resolves a traditional (Western) move such as `P-7f`, `Bx3c=`, `+Bx9i`
/// or `G*5e` against the legal moves of `pos`.
///
/// The origin square is not written, so the move is identified by piece,
/// destination, capture marker and the promotion suffix (`+` promote, `=`
/// decline, none = either). A leading `+` names a promoted piece; it also
/// matches a promoting move of the corresponding unpromoted piece.
pub fn resolve_traditional(pos: &Position, text: &str) -> Result<Move> {
    let v = pos.variant();
    let t = text.trim();
    let (promoted_piece, rest) = match t.strip_prefix('+') {
        Some(r) => (true, r),
        None => (false, t),
    };
    let mut chars = rest.chars();
    let kind = chars
        .next()
        .and_then(Kind::from_letter)
        .ok_or_else(|| parse_err(format!("bad piece in `{text}`")))?;
    let rest: String = chars.collect();
    let (sep, rest) = rest.split_at(1.min(rest.len()));
    let (dest, suffix) = rest.split_at(2.min(rest.len()));
    let to = parse_square(v, dest)?;
    let want_promo = match suffix {
        "" => None,
        "+" => Some(true),
        "=" => Some(false),
        _ => return Err(parse_err(format!("bad suffix in `{text}`"))),
    };
    let is_capture = match sep {
        "-" => false,
        "x" => true,
        "*" => {
            let m = Move::Drop { kind, to };
            return if movegen::is_legal(pos, m) {
                Ok(m)
            } else {
                Err(Error::IllegalMove(text.to_string()))
            };
        }
        _ => return Err(parse_err(format!("bad separator in `{text}`"))),
    };

    let candidates: Vec<Move> = movegen::legal_moves_unchecked(pos)
        .into_iter()
        .filter(|&m| {
            let Move::Board { from, to: mt, promote } = m else {
                return false;
            };
            if mt != to || pos.at(to).is_some() != is_capture {
                return false;
            }
            if want_promo.is_some_and(|w| w != promote) {
                return false;
            }
            let p = pos.at(from).expect("legal move has a piece");
            if p.kind() != kind {
                return false;
            }
            if promoted_piece {
                p.is_promoted() || promote
            } else {
                !p.is_promoted()
            }
        })
        .collect();
    match candidates.as_slice() {
        [m] => Ok(*m),
        [] => Err(Error::IllegalMove(text.to_string())),
        _ => {
            // `+Bx9i` style: prefer the promoting move when both the plain and
            // promoting versions survive the filters.
            let promoting: Vec<Move> = candidates.iter().copied().filter(|m| m.promotes()).collect();
            if promoted_piece && promoting.len() == 1 {
                Ok(promoting[0])
            } else {
                Err(parse_err(format!("ambiguous move `{text}`")))
            }
        }
    }
}
