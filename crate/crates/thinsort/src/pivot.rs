//! Pivot selection strategies.
//!
//! Two families live here. The classical sample rules (`pivot_med3`,
//! `pivot_pmed9`, random index) probe a handful of fixed positions. The
//! stride-sampled selectors thin the range by a factor `s` and run a real
//! selection pass over the sample: `pivot_t_bfprt` takes the median of
//! medians of every `s`-th element, `pivot_t_pmed3l` recursively reduces
//! thirds of the range to a pseudo-median without touching the data.
//!
//! All comparisons go through [`Counters::less`] and are billed to the
//! selection phase by the sort driver.

use crate::counters::Counters;

/// Strided window into a slice: logical slot `i` is `base[offset + i*stride]`.
/// The selection kernel runs entirely on views, so the same code serves a
/// contiguous scratch buffer and an in-place sample of the subject array.
pub struct SampledView<'a, K> {
    base: &'a mut [K],
    offset: usize,
    stride: usize,
    len: usize,
}

impl<'a, K: Ord + Clone> SampledView<'a, K> {
    pub fn contiguous(base: &'a mut [K]) -> Self {
        let len = base.len();
        SampledView { base, offset: 0, stride: 1, len }
    }

    pub fn strided(base: &'a mut [K], offset: usize, stride: usize, len: usize) -> Self {
        assert!(stride >= 1, "stride must be at least 1");
        if len > 0 {
            assert!(
                offset + (len - 1) * stride < base.len(),
                "strided view out of bounds"
            );
        }
        SampledView { base, offset, stride, len }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    fn idx(&self, i: usize) -> usize {
        debug_assert!(i < self.len);
        self.offset + i * self.stride
    }

    #[inline]
    pub fn key(&self, i: usize) -> &K {
        &self.base[self.idx(i)]
    }

    #[inline]
    fn less(&self, i: usize, j: usize, c: &mut Counters) -> bool {
        c.less(&self.base[self.idx(i)], &self.base[self.idx(j)])
    }

    #[inline]
    fn swap(&mut self, i: usize, j: usize, c: &mut Counters) {
        let (x, y) = (self.idx(i), self.idx(j));
        c.swap(self.base, x, y);
    }
}

/// Median of three values in two or three comparisons: the third comparison
/// is skipped when the first two already decide. Ties resolve to a value of
/// middle rank.
pub fn median_of_three<K: Ord + Clone>(x: &K, y: &K, z: &K, c: &mut Counters) -> K {
    if c.less(x, y) {
        if c.less(y, z) {
            y.clone()
        } else if c.less(x, z) {
            z.clone()
        } else {
            x.clone()
        }
    } else if c.less(x, z) {
        x.clone()
    } else if c.less(y, z) {
        z.clone()
    } else {
        y.clone()
    }
}

/// Insertion sort of the logical range `[lo, hi)` with counted comparisons
/// and adjacent swaps.
fn insertion_sort_range<K: Ord + Clone>(
    v: &mut SampledView<'_, K>,
    lo: usize,
    hi: usize,
    c: &mut Counters,
) {
    for i in lo + 1..hi {
        let mut j = i;
        while j > lo && v.less(j, j - 1, c) {
            v.swap(j, j - 1, c);
            j -= 1;
        }
    }
}

/// Slot of the median of the five slots starting at `g` in exactly six
/// comparisons. Only local indices move; the data stays put.
fn median5_slot<K: Ord + Clone>(v: &SampledView<'_, K>, g: usize, c: &mut Counters) -> usize {
    let mut s = [g, g + 1, g + 2, g + 3, g + 4];
    if v.less(s[1], s[0], c) {
        s.swap(0, 1);
    }
    if v.less(s[4], s[3], c) {
        s.swap(3, 4);
    }
    if v.less(s[3], s[0], c) {
        s.swap(0, 3);
        s.swap(1, 4);
    }
    // s[0] is sole loser of {0,1,3,4}; the median is the second smallest of
    // the remaining four, with s[3] <= s[4] known.
    if v.less(s[2], s[1], c) {
        if v.less(s[3], s[2], c) {
            if v.less(s[4], s[2], c) {
                s[4]
            } else {
                s[2]
            }
        } else if v.less(s[3], s[1], c) {
            s[3]
        } else {
            s[1]
        }
    } else if v.less(s[1], s[3], c) {
        if v.less(s[3], s[2], c) {
            s[3]
        } else {
            s[2]
        }
    } else if v.less(s[4], s[1], c) {
        s[4]
    } else {
        s[1]
    }
}

/// Swap the median of each group of five (remainder group: lower median of
/// its sorted order) to the front of the range. Returns the group count.
fn group_medians<K: Ord + Clone>(
    v: &mut SampledView<'_, K>,
    lo: usize,
    hi: usize,
    c: &mut Counters,
) -> usize {
    let mut t = 0;
    while lo + 5 * t + 5 <= hi {
        let m = median5_slot(v, lo + 5 * t, c);
        v.swap(lo + t, m, c);
        t += 1;
    }
    let rem_lo = lo + 5 * t;
    if rem_lo < hi {
        insertion_sort_range(v, rem_lo, hi, c);
        v.swap(lo + t, rem_lo + (hi - rem_lo) / 2, c);
        t += 1;
    }
    t
}

/// Two-pointer partition of the logical range `[lo, hi)` around the value
/// `p`, which must occur in the range. Returns `j` with both sides
/// `[lo, j]` / `(j, hi)` non-empty, everything left of the split `<= p` and
/// everything right of it `>= p`.
fn partition_range<K: Ord + Clone>(
    v: &mut SampledView<'_, K>,
    lo: usize,
    hi: usize,
    p: &K,
    c: &mut Counters,
) -> usize {
    debug_assert!(hi - lo >= 2);
    let mut i = lo as isize - 1;
    let mut j = hi as isize;
    loop {
        loop {
            i += 1;
            debug_assert!((i as usize) < hi, "pivot above every key in range");
            if !c.less(v.key(i as usize), p) {
                break;
            }
        }
        loop {
            j -= 1;
            debug_assert!(j >= lo as isize, "pivot below every key in range");
            if !c.less(p, v.key(j as usize)) {
                break;
            }
        }
        if i >= j {
            let j = j as usize;
            // j == hi-1 only when everything before it is < p; stepping back
            // one slot keeps the right side non-empty.
            return if j == hi - 1 { j - 1 } else { j };
        }
        v.swap(i as usize, j as usize, c);
    }
}

/// Rank-`k` element (0-based) of the logical range `[lo, hi)`, by repeated
/// partitioning around a median-of-medians pivot. Worst-case linear.
fn select_rank<K: Ord + Clone>(
    v: &mut SampledView<'_, K>,
    mut lo: usize,
    mut hi: usize,
    mut k: usize,
    c: &mut Counters,
) -> K {
    loop {
        debug_assert!(k < hi - lo);
        if hi - lo <= 5 {
            insertion_sort_range(v, lo, hi, c);
            return v.key(lo + k).clone();
        }
        let g = group_medians(v, lo, hi, c);
        let mm = select_rank(v, lo, lo + g, g / 2, c);
        let j = partition_range(v, lo, hi, &mm, c);
        let left = j + 1 - lo;
        if k < left {
            hi = j + 1;
        } else {
            k -= left;
            lo = j + 1;
        }
    }
}

/// Deterministic selection: the rank-`k` smallest element of `b` (0-based).
/// Reorders `b`.
pub fn select_bfprt<K: Ord + Clone>(b: &mut [K], k: usize, c: &mut Counters) -> K {
    assert!(k < b.len(), "rank {} out of range for {} keys", k, b.len());
    let len = b.len();
    let mut v = SampledView::contiguous(b);
    select_rank(&mut v, 0, len, k, c)
}

/// Median-of-medians pivot step: groups of five, then a full select over the
/// group medians. The result lands within the central (0.3, 0.7) rank band
/// up to a small additive term; it is not the exact median. Reorders `b`.
pub fn median_of_medians<K: Ord + Clone>(b: &mut [K], c: &mut Counters) -> K {
    assert!(!b.is_empty(), "median of an empty sample");
    let len = b.len();
    let mut v = SampledView::contiguous(b);
    let g = group_medians(&mut v, 0, len, c);
    select_rank(&mut v, 0, g, g / 2, c)
}

/// Uniformly random index in `[lo, hi)`.
pub fn pivot_random<R: rand::Rng>(lo: usize, hi: usize, rng: &mut R) -> usize {
    debug_assert!(lo < hi);
    rng.random_range(lo..hi)
}

/// Median of the first, middle and last key. Ranges of length 1 or 2 fall
/// back to the first key.
pub fn pivot_med3<K: Ord + Clone>(data: &[K], lo: usize, hi: usize, c: &mut Counters) -> K {
    let n = hi - lo;
    if n <= 2 {
        return data[lo].clone();
    }
    median_of_three(&data[lo], &data[lo + (n - 1) / 2], &data[hi - 1], c)
}

/// Ninther: median of the medians of three probe triples spread evenly over
/// the range. Ranges shorter than nine delegate to [`pivot_med3`].
pub fn pivot_pmed9<K: Ord + Clone>(data: &[K], lo: usize, hi: usize, c: &mut Counters) -> K {
    let n = hi - lo;
    if n < 9 {
        return pivot_med3(data, lo, hi, c);
    }
    let probe = |k: usize| &data[lo + k * (n - 1) / 8];
    let m0 = median_of_three(probe(0), probe(1), probe(2), c);
    let m1 = median_of_three(probe(3), probe(4), probe(5), c);
    let m2 = median_of_three(probe(6), probe(7), probe(8), c);
    median_of_three(&m0, &m1, &m2, c)
}

/// How `pivot_t_bfprt` runs its selection pass.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TBfprtMode {
    /// Select the exact median of the sample instead of the median of
    /// medians. Slower, perfectly centered.
    pub full_median: bool,
    /// Run the selection directly on the strided sample positions of the
    /// subject array instead of a scratch copy, reordering them.
    pub in_place: bool,
}

/// Thinned median-of-medians pivot: every `s`-th key of the range forms a
/// sample of `m = floor(len/s)` keys whose median of medians becomes the
/// pivot. With `m <= 1` there is nothing to select from and the middle key
/// is returned. By default the sample is copied to `scratch` and the subject
/// array is left untouched.
pub fn pivot_t_bfprt<K: Ord + Clone>(
    data: &mut [K],
    lo: usize,
    hi: usize,
    s: usize,
    mode: TBfprtMode,
    scratch: &mut Vec<K>,
    c: &mut Counters,
) -> K {
    assert!(s >= 1, "thinning parameter must be at least 1");
    let n = hi - lo;
    let m = n / s;
    if m <= 1 {
        return data[lo + n / 2].clone();
    }
    if mode.in_place {
        let mut v = SampledView::strided(data, lo, s, m);
        if mode.full_median {
            select_rank(&mut v, 0, m, m / 2, c)
        } else {
            let g = group_medians(&mut v, 0, m, c);
            select_rank(&mut v, 0, g, g / 2, c)
        }
    } else {
        scratch.clear();
        scratch.extend((0..m).map(|i| data[lo + i * s].clone()));
        if mode.full_median {
            select_bfprt(scratch, m / 2, c)
        } else {
            median_of_medians(scratch, c)
        }
    }
}

/// Recursive pseudo-median: ranges of at most `s` keys answer with their
/// middle key, longer ranges take the median of three recursive answers on
/// thirds (the last third absorbs the remainder). Never moves data. Ranges
/// of two keys answer with the middle key as well, since thirds degenerate.
pub fn pivot_t_pmed3l<K: Ord + Clone>(
    data: &[K],
    lo: usize,
    hi: usize,
    s: usize,
    c: &mut Counters,
) -> K {
    assert!(s >= 1, "thinning parameter must be at least 1");
    let n = hi - lo;
    if n <= s || n < 3 {
        return data[lo + n / 2].clone();
    }
    let t = n / 3;
    let a = pivot_t_pmed3l(data, lo, lo + t, s, c);
    let b = pivot_t_pmed3l(data, lo + t, lo + 2 * t, s, c);
    let z = pivot_t_pmed3l(data, lo + 2 * t, hi, s, c);
    median_of_three(&a, &b, &z, c)
}

pub(crate) fn partition_slice<K: Ord + Clone>(
    data: &mut [K],
    lo: usize,
    hi: usize,
    p: &K,
    c: &mut Counters,
) -> usize {
    let mut v = SampledView::contiguous(data);
    partition_range(&mut v, lo, hi, p, c)
}
