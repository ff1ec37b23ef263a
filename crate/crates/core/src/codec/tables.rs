//! Binomials, combination ranks and per-type count-vector tables.

use std::sync::LazyLock;

/// Largest `n` in the binomial table (one more than the biggest board).
const BINOM_N: usize = 82;

static BINOM: LazyLock<Vec<[u128; BINOM_N]>> = LazyLock::new(|| {
    let mut t = vec![[0u128; BINOM_N]; BINOM_N];
    for n in 0..BINOM_N {
        t[n][0] = 1;
        for k in 1..=n {
            t[n][k] = t[n - 1][k - 1] + if k < n { t[n - 1][k] } else { 0 };
        }
    }
    t
});

/// `C(n, k)`, zero when `k > n`.
#[inline]
pub fn binom(n: usize, k: usize) -> u128 {
    if k > n {
        0
    } else {
        BINOM[n][k]
    }
}

/// Number of ways to place a type with per-attribute counts `n` on `e`
/// empty squares: `C(e,n0) C(e-n0,n1) C(e-n0-n1,n2) C(e-n0-n1-n2,n3)`.
pub fn n_comb(e: usize, n: [u8; 4]) -> u128 {
    let mut left = e;
    let mut out = 1u128;
    for &k in &n {
        let k = k as usize;
        if k > left {
            return 0;
        }
        out = out.checked_mul(binom(left, k)).expect("multinomial fits in u128");
        left -= k;
    }
    out
}

/// Colexicographic rank of a strictly increasing index list.
pub fn colex_rank(idx: &[u8]) -> u128 {
    idx.iter()
        .enumerate()
        .map(|(k, &c)| binom(c as usize, k + 1))
        .sum()
}

/// Inverse of [`colex_rank`] for `m` elements; writes ascending indices into `out`.
pub fn colex_unrank(mut r: u128, m: usize, e: usize, out: &mut Vec<u8>) {
    out.clear();
    out.resize(m, 0);
    let mut hi = e;
    for k in (0..m).rev() {
        // largest c < hi with C(c, k+1) <= r
        let mut c = hi - 1;
        while binom(c, k + 1) > r {
            c -= 1;
        }
        r -= binom(c, k + 1);
        out[k] = c as u8;
        hi = c;
    }
    debug_assert_eq!(r, 0);
}

/// All count vectors for `m` pieces of one type, in lexicographic order,
/// with cumulative placement counts on `e` empty squares.
pub struct VectorTable {
    pub vecs: Vec<[u8; 4]>,
    /// `cum[j]` is the number of placements of all vectors before `vecs[j]`;
    /// `cum[len]` is the type's total.
    pub cum: Vec<u128>,
}

impl VectorTable {
    pub fn build(e: usize, m: u8, promotable: bool) -> VectorTable {
        let mut vecs = Vec::new();
        let top = if promotable { m } else { 0 };
        for n0 in 0..=top {
            for n1 in 0..=top - n0 {
                for n2 in 0..=m - n0 - n1 {
                    vecs.push([n0, n1, n2, m - n0 - n1 - n2]);
                }
            }
        }
        let mut cum = Vec::with_capacity(vecs.len() + 1);
        let mut acc = 0u128;
        cum.push(0);
        for v in &vecs {
            acc += n_comb(e, *v);
            cum.push(acc);
        }
        VectorTable { vecs, cum }
    }

    #[inline]
    pub fn total(&self) -> u128 {
        *self.cum.last().unwrap()
    }
}
