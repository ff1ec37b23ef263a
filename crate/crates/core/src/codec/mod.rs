//! Exact enumeration of K-canonical positions and the rank/unrank bijection.
//!
//! A rank is laid out as
//!
//! ```text
//! rank = cum[u] + hand_digit + n_hand(u) * board_digit
//! ```
//!
//! where `u` is the vector of per-type hand totals (ordered lexicographically,
//! first non-King type most significant), `hand_digit` is the mixed-radix
//! split of each total between the players, and `board_digit` is a mixed
//! radix over the per-type placement counts, King first. Inside a type the
//! digit is the offset of its attribute-count vector plus the combination
//! ranks of each attribute, `(B,+) (W,+) (B,-) (W,-)`, over the squares still
//! empty at that point.

mod canonical;
pub(crate) mod tables;

use std::sync::OnceLock;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::RngCore;

pub use canonical::{is_canonical, is_k_canonical};
pub use tables::n_comb;

use crate::error::{Error, Result};
use crate::position::Position;
use crate::types::{Color, Kind, Piece};
use crate::variant::Variant;
use tables::{binom, colex_rank, colex_unrank, VectorTable};

/// Per-type hand totals `u_i = h_{i,B} + h_{i,W}`, indexed in codec order
/// (entry 0 is the King and always 0).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HandTotals {
    variant: Variant,
    counts: [u8; 8],
}

impl HandTotals {
    pub fn new(variant: Variant, counts: &[u8]) -> Result<HandTotals> {
        let totals = variant.totals();
        if counts.len() != totals.len() {
            return Err(Error::InvalidPosition(format!(
                "expected {} hand totals, got {}",
                totals.len(),
                counts.len()
            )));
        }
        if counts[0] != 0 || counts.iter().zip(totals).any(|(c, s)| c > s) {
            return Err(Error::InvalidPosition(format!("hand totals {counts:?} out of range")));
        }
        let mut c = [0u8; 8];
        c[..counts.len()].copy_from_slice(counts);
        Ok(HandTotals { variant, counts: c })
    }

    /// Every non-King piece in hand.
    pub fn all_in_hand(variant: Variant) -> HandTotals {
        let mut c = [0u8; 8];
        let t = variant.totals();
        c[1..t.len()].copy_from_slice(&t[1..]);
        HandTotals { variant, counts: c }
    }

    pub fn of(pos: &Position) -> HandTotals {
        let v = pos.variant();
        let mut c = [0u8; 8];
        for (i, &k) in v.kinds().iter().enumerate().skip(1) {
            c[i] = pos.hand(Color::Black, k) + pos.hand(Color::White, k);
        }
        HandTotals { variant: v, counts: c }
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn counts(&self) -> &[u8] {
        &self.counts[..self.variant.piece_type_count()]
    }
}

/// `N_hand(u)`: number of ways to split the totals between the players.
pub fn count_hand_distributions(u: &HandTotals) -> u64 {
    u.counts().iter().skip(1).map(|&c| c as u64 + 1).product()
}

/// Number of K-canonical King pairs.
pub fn count_king_placements(variant: Variant) -> u64 {
    let n = variant.size() as u64;
    let c = variant.center_file() as u64;
    let sq = n * n;
    // Black King left of centre: White anywhere else; on the centre file:
    // White on the left half including the centre file
    c * n * (sq - 1) + n * ((c + 1) * n - 1)
}

/// `N_board(u)`: number of board configurations with hand totals `u`.
pub fn count_board_configs(u: &HandTotals) -> BigUint {
    let codec = Codec::get(u.variant);
    codec
        .type_radices(&u.counts)
        .into_iter()
        .fold(BigUint::from(1u8), |acc, r| acc * r)
}

/// `|P_K|` as an exact integer.
pub fn total_count(variant: Variant) -> &'static BigUint {
    Codec::get(variant).total()
}

/// Rank of a K-canonical position.
pub fn rank(pos: &Position) -> Result<BigUint> {
    Codec::get(pos.variant()).rank(pos)
}

/// Position with rank `r`.
pub fn unrank(variant: Variant, r: &BigUint) -> Result<Position> {
    Codec::get(variant).unrank(r)
}

/// Counting tables and the rank bijection for one variant.
pub struct Codec {
    variant: Variant,
    kinds: &'static [Kind],
    totals: &'static [u8],
    /// `cum[j]` is the number of positions in hand blocks before block `j`.
    cum: Vec<BigUint>,
    kings: u128,
    /// `[promotable][e * (max_m + 1) + m]`
    vectors: [Vec<Option<VectorTable>>; 2],
    max_m: usize,
}

static SHOGI: OnceLock<Codec> = OnceLock::new();
static MINI: OnceLock<Codec> = OnceLock::new();

impl Codec {
    /// Tables for `variant`, built on first use.
    pub fn get(variant: Variant) -> &'static Codec {
        let cell = match variant {
            Variant::Shogi => &SHOGI,
            Variant::Minishogi => &MINI,
        };
        cell.get_or_init(|| Codec::build(variant))
    }

    fn build(variant: Variant) -> Codec {
        let kinds = variant.kinds();
        let totals = variant.totals();
        let sq = variant.square_count();
        let max_m = *totals[1..].iter().max().unwrap() as usize;
        let mut vectors: [Vec<Option<VectorTable>>; 2] = [Vec::new(), Vec::new()];
        for (p, slot) in vectors.iter_mut().enumerate() {
            let promotable = p == 1;
            let needed = |m: usize| {
                kinds[1..]
                    .iter()
                    .zip(&totals[1..])
                    .any(|(k, &s)| k.can_promote() == promotable && m <= s as usize)
            };
            for e in 0..=sq {
                for m in 0..=max_m {
                    slot.push((m <= e && needed(m)).then(|| VectorTable::build(e, m as u8, promotable)));
                }
            }
        }
        let mut codec = Codec {
            variant,
            kinds,
            totals,
            cum: Vec::new(),
            kings: count_king_placements(variant) as u128,
            vectors,
            max_m,
        };
        codec.cum = codec.build_cumulative();
        codec
    }

    fn build_cumulative(&self) -> Vec<BigUint> {
        let t = self.totals.len();
        let blocks: usize = self.totals[1..].iter().map(|&s| s as usize + 1).product();
        let mut cum = Vec::with_capacity(blocks + 1);
        let mut acc = BigUint::zero();
        cum.push(acc.clone());
        let mut u = [0u8; 8];
        for _ in 0..blocks {
            acc += self.block_size(&u);
            cum.push(acc.clone());
            // odometer, last type least significant
            for i in (1..t).rev() {
                if u[i] < self.totals[i] {
                    u[i] += 1;
                    break;
                }
                u[i] = 0;
            }
        }
        cum
    }

    fn block_size(&self, u: &[u8; 8]) -> BigUint {
        let n_hand: u128 = u[1..self.totals.len()].iter().map(|&c| c as u128 + 1).product();
        self.type_radices(u)
            .into_iter()
            .fold(BigUint::from(n_hand), |acc, r| acc * r)
    }

    /// `N_btype(u, i)` for every type, King first.
    fn type_radices(&self, u: &[u8; 8]) -> Vec<u128> {
        let mut out = Vec::with_capacity(self.totals.len());
        out.push(self.kings);
        let mut e = self.variant.square_count() - 2;
        for i in 1..self.totals.len() {
            let m = (self.totals[i] - u[i]) as usize;
            out.push(self.vector_table(i, e, m).total());
            e -= m;
        }
        out
    }

    fn vector_table(&self, i: usize, e: usize, m: usize) -> &VectorTable {
        let p = self.kinds[i].can_promote() as usize;
        self.vectors[p][e * (self.max_m + 1) + m]
            .as_ref()
            .expect("vector table present for every reachable (e, m)")
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    /// `|P_K|`.
    pub fn total(&self) -> &BigUint {
        self.cum.last().unwrap()
    }

    /// Number of hand-total blocks `|U|`.
    pub fn block_count(&self) -> usize {
        self.cum.len() - 1
    }

    /// First rank of the block with hand totals `u`.
    pub fn block_start(&self, u: &HandTotals) -> &BigUint {
        &self.cum[self.block_index(&u.counts)]
    }

    /// `N(u) = N_hand(u) * N_board(u)`.
    pub fn block_len(&self, u: &HandTotals) -> BigUint {
        self.block_size(&u.counts)
    }

    fn block_index(&self, u: &[u8; 8]) -> usize {
        let mut idx = 0usize;
        for i in 1..self.totals.len() {
            idx = idx * (self.totals[i] as usize + 1) + u[i] as usize;
        }
        idx
    }

    fn block_totals(&self, mut idx: usize) -> [u8; 8] {
        let mut u = [0u8; 8];
        for i in (1..self.totals.len()).rev() {
            let radix = self.totals[i] as usize + 1;
            u[i] = (idx % radix) as u8;
            idx /= radix;
        }
        u
    }

    /// King digit for Black King square index `kb` and White King square index `kw`.
    fn king_digit(&self, kb: usize, kw: usize) -> u128 {
        let n = self.variant.size() as usize;
        let left = n * self.variant.center_file() as usize;
        let sq = n * n;
        // White's index among the squares left after Black's King
        let kw_rel = if kw > kb { kw - 1 } else { kw };
        if kb < left {
            (kb + left * kw_rel) as u128
        } else {
            (left * (sq - 1) + (kb - left) + n * kw_rel) as u128
        }
    }

    fn king_squares(&self, d: u128) -> (usize, usize) {
        let n = self.variant.size() as usize;
        let left = n * self.variant.center_file() as usize;
        let sq = n * n;
        let d = d as usize;
        let (kb, kw_rel) = if d < left * (sq - 1) {
            (d % left, d / left)
        } else {
            let d = d - left * (sq - 1);
            (left + d % n, d / n)
        };
        let kw = if kw_rel >= kb { kw_rel + 1 } else { kw_rel };
        (kb, kw)
    }

    /// Rank of `pos`, which must be K-canonical.
    pub fn rank(&self, pos: &Position) -> Result<BigUint> {
        if pos.variant() != self.variant {
            return Err(Error::InvalidPosition(format!(
                "{} position given to the {} codec",
                pos.variant(),
                self.variant
            )));
        }
        pos.validate()?;
        if !is_k_canonical(pos) {
            return Err(Error::NotKCanonical);
        }
        let t = self.totals.len();
        let mut u = [0u8; 8];
        let mut hand_digit = 0u128;
        let mut n_hand = 1u128;
        for i in 1..t {
            let k = self.kinds[i];
            let b = pos.hand(Color::Black, k);
            u[i] = b + pos.hand(Color::White, k);
            hand_digit += b as u128 * n_hand;
            n_hand *= u[i] as u128 + 1;
        }

        // squares per (type, attribute), ascending
        let mut lists: [[Vec<u8>; 4]; 8] = Default::default();
        let mut kings = [0usize; 2];
        for (sq, p) in pos.occupied_indices() {
            let ci = self.codec_index(p.kind());
            if ci == 0 {
                kings[p.owner().index()] = sq;
            } else {
                lists[ci][attribute(p)].push(sq as u8);
            }
        }

        let mut digits = Vec::with_capacity(t);
        digits.push((self.king_digit(kings[0], kings[1]), self.kings));
        let mut occ: u128 = 1 << kings[0] | 1 << kings[1];
        let mut e = self.variant.square_count() - 2;
        let mut idx = Vec::with_capacity(18);
        for i in 1..t {
            let m = (self.totals[i] - u[i]) as usize;
            let table = self.vector_table(i, e, m);
            let nvec = [0, 1, 2, 3].map(|a| lists[i][a].len() as u8);
            let j = table
                .vecs
                .binary_search(&nvec)
                .map_err(|_| Error::Internal(format!("count vector {nvec:?} not in table")))?;
            let mut inner = 0u128;
            let mut mult = 1u128;
            let mut ee = e;
            for list in &lists[i] {
                idx.clear();
                idx.extend(list.iter().map(|&s| s - (occ & ((1u128 << s) - 1)).count_ones() as u8));
                inner += colex_rank(&idx) * mult;
                mult *= binom(ee, list.len());
                for &s in list {
                    occ |= 1 << s;
                }
                ee -= list.len();
            }
            digits.push((table.cum[j] + inner, table.total()));
            e -= m;
        }

        let mut board = BigUint::zero();
        for &(d, radix) in digits.iter().rev() {
            board = board * radix + d;
        }
        Ok(&self.cum[self.block_index(&u)] + hand_digit + board * n_hand)
    }

    /// The K-canonical position with rank `r`.
    pub fn unrank(&self, r: &BigUint) -> Result<Position> {
        if r >= self.total() {
            return Err(Error::RankOutOfRange(format!("{r} >= {}", self.total())));
        }
        let block = self.cum.partition_point(|c| c <= r) - 1;
        let u = self.block_totals(block);
        let t = self.totals.len();
        let n_hand: u128 = u[1..t].iter().map(|&c| c as u128 + 1).product();
        let (mut board, hand_digit) = (r - &self.cum[block]).div_rem(&BigUint::from(n_hand));
        let mut hand_digit = hand_digit.to_u128().unwrap();

        let mut pos = Position::empty(self.variant, Color::Black);
        for i in 1..t {
            let k = self.kinds[i];
            let radix = u[i] as u128 + 1;
            let b = (hand_digit % radix) as u8;
            hand_digit /= radix;
            pos.set_hand(Color::Black, k, b);
            pos.set_hand(Color::White, k, u[i] - b);
        }

        let radices = self.type_radices(&u);
        let mut digits = Vec::with_capacity(t);
        for &radix in &radices {
            let (q, d) = board.div_rem(&BigUint::from(radix));
            digits.push(d.to_u128().unwrap());
            board = q;
        }

        let (kb, kw) = self.king_squares(digits[0]);
        pos.set_index(kb, Some(Piece::unpromoted(Kind::King, Color::Black)));
        pos.set_index(kw, Some(Piece::unpromoted(Kind::King, Color::White)));
        let mut occ: u128 = 1 << kb | 1 << kw;
        let mut e = self.variant.square_count() - 2;
        let mut idx = Vec::with_capacity(18);
        for i in 1..t {
            let m = (self.totals[i] - u[i]) as usize;
            let table = self.vector_table(i, e, m);
            let d = digits[i];
            let j = table.cum.partition_point(|&c| c <= d) - 1;
            let nvec = table.vecs[j];
            let mut inner = d - table.cum[j];
            let mut ee = e;
            for (a, &na) in nvec.iter().enumerate() {
                let na = na as usize;
                let radix = binom(ee, na);
                colex_unrank(inner % radix, na, ee, &mut idx);
                inner /= radix;
                if na == 0 {
                    continue;
                }
                let piece = piece_for(self.kinds[i], a);
                let placed = select_empty(occ, self.variant.square_count(), &idx);
                for s in placed {
                    pos.set_index(s, Some(piece));
                    occ |= 1 << s;
                }
                ee -= na;
            }
            e -= m;
        }
        Ok(pos)
    }

    /// A rank drawn uniformly from `[0, |P_K|)` by rejection sampling on
    /// `bits(|P_K|)`-bit strings.
    pub fn random_rank<R: RngCore + ?Sized>(&self, rng: &mut R) -> BigUint {
        let total = self.total();
        let bits = total.bits() as usize;
        let words = bits.div_ceil(64);
        let top_bits = bits - 64 * (words - 1);
        let mask = if top_bits == 64 { u64::MAX } else { (1u64 << top_bits) - 1 };
        let mut buf = vec![0u32; 2 * words];
        loop {
            for w in 0..words {
                let mut x = rng.next_u64();
                if w == words - 1 {
                    x &= mask;
                }
                buf[2 * w] = x as u32;
                buf[2 * w + 1] = (x >> 32) as u32;
            }
            let r = BigUint::from_slice(&buf);
            if &r < total {
                return r;
            }
        }
    }

    fn codec_index(&self, kind: Kind) -> usize {
        self.kinds.iter().position(|&k| k == kind).unwrap()
    }
}

/// Attribute slot: 0 `(B,+)`, 1 `(W,+)`, 2 `(B,-)`, 3 `(W,-)`.
#[inline]
pub(crate) fn attribute(p: Piece) -> usize {
    (!p.is_promoted() as usize) << 1 | p.owner().index()
}

fn piece_for(kind: Kind, attr: usize) -> Piece {
    let owner = if attr & 1 == 0 { Color::Black } else { Color::White };
    Piece::new(kind, owner, attr < 2)
}

/// Squares holding the given (ascending) indices into the empty-square list.
fn select_empty(occ: u128, squares: usize, idx: &[u8]) -> Vec<usize> {
    let mut out = Vec::with_capacity(idx.len());
    let mut want = idx.iter().peekable();
    let mut seen = 0u8;
    for s in 0..squares {
        let Some(&&next) = want.peek() else { break };
        if occ >> s & 1 == 1 {
            continue;
        }
        if seen == next {
            out.push(s);
            want.next();
        }
        seen += 1;
    }
    out
}
