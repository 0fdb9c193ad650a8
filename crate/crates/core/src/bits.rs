//! Packed bit rows over `u64` words.
//!
//! Rows are plain `&[u64]` slices so that a dense `n × words` matrix can be
//! stored flat and sliced per vertex.

#[inline]
pub(crate) fn words_for(bits: usize) -> usize {
    bits.div_ceil(64)
}

#[inline]
pub(crate) fn get(row: &[u64], i: usize) -> bool {
    (row[i >> 6] >> (i & 63)) & 1 == 1
}

#[inline]
pub(crate) fn set(row: &mut [u64], i: usize) {
    row[i >> 6] |= 1u64 << (i & 63);
}

#[inline]
pub(crate) fn clear(row: &mut [u64], i: usize) {
    row[i >> 6] &= !(1u64 << (i & 63));
}

#[inline]
pub(crate) fn count(row: &[u64]) -> u64 {
    row.iter().map(|w| u64::from(w.count_ones())).sum()
}

#[inline]
pub(crate) fn and_count(a: &[u64], b: &[u64]) -> u64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| u64::from((x & y).count_ones()))
        .sum()
}

/// Popcount of `a & b` restricted to bit positions strictly greater than `above`.
#[inline]
pub(crate) fn and_count_above(a: &[u64], b: &[u64], above: usize) -> u64 {
    let first = above + 1;
    let w0 = first >> 6;
    if w0 >= a.len() {
        return 0;
    }
    let head = (a[w0] & b[w0]) & (u64::MAX << (first & 63));
    let mut total = u64::from(head.count_ones());
    for w in (w0 + 1)..a.len() {
        total += u64::from((a[w] & b[w]).count_ones());
    }
    total
}

/// Iterates the set bit positions of a row in increasing order.
pub(crate) fn ones(row: &[u64]) -> impl Iterator<Item = usize> + '_ {
    row.iter().enumerate().flat_map(|(wi, &w)| {
        let mut word = w;
        std::iter::from_fn(move || {
            if word == 0 {
                None
            } else {
                let tz = word.trailing_zeros() as usize;
                word &= word - 1;
                Some(wi * 64 + tz)
            }
        })
    })
}

/// Position of the `rank`-th (0-based) set bit of `a & b` above `above`.
pub(crate) fn nth_common_above(a: &[u64], b: &[u64], above: usize, mut rank: u64) -> Option<usize> {
    let first = above + 1;
    let w0 = first >> 6;
    for w in w0..a.len() {
        let mut word = a[w] & b[w];
        if w == w0 {
            word &= u64::MAX << (first & 63);
        }
        let c = u64::from(word.count_ones());
        if rank < c {
            for _ in 0..rank {
                word &= word - 1;
            }
            return Some(w * 64 + word.trailing_zeros() as usize);
        }
        rank -= c;
    }
    None
}
