//! Query engine over a packed text: longest common extensions in both
//! directions, internal pattern matching, 2-period queries, run extension
//! gamma(i, p), and suffix-order comparison.
//!
//! Backed by suffix arrays (forward and reversed text) with LCP + RMQ, built
//! in linear-ish time; all queries after construction are O(1) or output
//! sensitive.

use crate::error::{Error, Result};
use crate::packed::PackedText;
use crate::runs::Run;
use crate::sais::{lcp_array, suffix_array, Rmq};
use crate::util::{prefix_function, smallest_period, z_function};
use std::cmp::Ordering;
use std::ops::Range;

/// Occurrence positions `{first + k*difference : 0 <= k < count}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ArithmeticProgression {
    pub first: usize,
    pub count: usize,
    pub difference: usize,
}

impl ArithmeticProgression {
    pub fn last(&self) -> usize {
        debug_assert!(self.count > 0);
        self.first + (self.count - 1) * self.difference
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.count).map(move |k| self.first + k * self.difference)
    }
}

#[derive(Debug)]
struct SuffixSide {
    rank: Vec<u32>,
    sa: Vec<u32>,
    rmq: Rmq, // over the LCP array
}

impl SuffixSide {
    fn build(text: &[u32]) -> SuffixSide {
        let sa = suffix_array(text);
        let mut rank = vec![0u32; text.len()];
        for (r, &i) in sa.iter().enumerate() {
            rank[i as usize] = r as u32;
        }
        let lcp = lcp_array(text, &sa, &rank);
        SuffixSide {
            rank,
            sa,
            rmq: Rmq::new(lcp),
        }
    }

    #[inline]
    fn lce(&self, n: usize, i: usize, j: usize) -> usize {
        if i == j {
            return n - i.min(n);
        }
        if i >= n || j >= n {
            return 0;
        }
        let (mut a, mut b) = (self.rank[i] as usize, self.rank[j] as usize);
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        self.rmq.min(a + 1, b) as usize
    }
}

/// Immutable query structure; safe for concurrent reads.
#[derive(Debug)]
pub struct QueryIndex {
    text: Vec<u32>,
    sigma: u32,
    fwd: SuffixSide,
    rev: SuffixSide,
}

impl QueryIndex {
    pub fn build(p: &PackedText) -> QueryIndex {
        let text = p.decode();
        let mut rtext = text.clone();
        rtext.reverse();
        #[cfg(feature = "parallel")]
        let (fwd, rev) = rayon::join(|| SuffixSide::build(&text), || SuffixSide::build(&rtext));
        #[cfg(not(feature = "parallel"))]
        let (fwd, rev) = (SuffixSide::build(&text), SuffixSide::build(&rtext));
        QueryIndex {
            text,
            sigma: p.sigma(),
            fwd,
            rev,
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.text.len()
    }

    #[inline]
    pub fn text(&self) -> &[u32] {
        &self.text
    }

    pub fn sigma(&self) -> u32 {
        self.sigma
    }

    /// Sentinel-aware character: `-1 -> sigma`, `n -> sigma + 1`.
    #[inline]
    pub fn at_signed(&self, i: i64) -> u32 {
        if i == -1 {
            self.sigma
        } else if i == self.n() as i64 {
            self.sigma + 1
        } else {
            self.text[i as usize]
        }
    }

    /// Longest common prefix length of the suffixes at `i` and `j`.
    #[inline]
    pub fn lce(&self, i: usize, j: usize) -> usize {
        self.fwd.lce(self.n(), i, j)
    }

    /// Longest common suffix length of the prefixes ending at `i` and `j`
    /// (inclusive); 0 if either index is negative.
    #[inline]
    pub fn lce_rev(&self, i: i64, j: i64) -> usize {
        if i < 0 || j < 0 {
            return 0;
        }
        let n = self.n();
        self.rev.lce(n, n - 1 - i as usize, n - 1 - j as usize)
    }

    /// Lexicographic order of the suffixes starting at `i` and `j` (`<= n`).
    pub fn suffix_compare(&self, i: usize, j: usize) -> Ordering {
        let n = self.n();
        debug_assert!(i <= n && j <= n);
        if i == j {
            return Ordering::Equal;
        }
        if i == n {
            return Ordering::Less;
        }
        if j == n {
            return Ordering::Greater;
        }
        self.fwd.rank[i].cmp(&self.fwd.rank[j])
    }

    /// Rank of suffix `i` in lexicographic suffix order, `i < n`.
    #[inline]
    pub fn suffix_rank(&self, i: usize) -> u32 {
        self.fwd.rank[i]
    }

    /// Suffix array entry access (rank -> position).
    #[inline]
    pub fn suffix_at_rank(&self, r: usize) -> usize {
        self.fwd.sa[r] as usize
    }

    /// LCP between the suffixes of rank `r-1` and `r` (`lcp_at(0) = 0`).
    #[inline]
    pub fn lcp_at(&self, r: usize) -> u32 {
        self.fwd.rmq.values()[r]
    }

    /// Whether `p` is a period of `T[start..start+len)`.
    #[inline]
    pub fn has_period(&self, start: usize, len: usize, p: usize) -> bool {
        p >= len || self.lce(start, start + p) >= len - p
    }

    /// Whether the smallest period of `T[start..start+len)` is exactly `p`,
    /// given that `p` is a period and `2p <= len`. Any smaller period would
    /// divide `p`, so only periods `p/q` for prime `q` need ruling out.
    pub fn period_exact(&self, start: usize, len: usize, p: usize) -> bool {
        debug_assert!(2 * p <= len && self.has_period(start, len, p));
        let mut rest = p;
        let mut d = 2usize;
        while d * d <= rest {
            if rest % d == 0 {
                if self.has_period(start, len, p / d) {
                    return false;
                }
                while rest % d == 0 {
                    rest /= d;
                }
            }
            d += 1;
        }
        if rest > 1 && self.has_period(start, len, p / rest) {
            return false;
        }
        true
    }

    /// `Some(per(frag))` if `per(frag) <= |frag|/2`, else `None`.
    /// `frag` is `[start..end)` in text positions.
    pub fn two_period(&self, frag: Range<usize>) -> Option<usize> {
        let s = &self.text[frag];
        if s.is_empty() {
            return None;
        }
        let p = smallest_period(s);
        (2 * p <= s.len()).then_some(p)
    }

    /// The unique run with smallest period exactly `p` containing
    /// `T[i..i+p)`, if it exists.
    pub fn gamma(&self, i: usize, p: usize) -> Option<Run> {
        if p == 0 || i + p > self.n() {
            return None;
        }
        let r = self.lce(i, i + p);
        let l = self.lce_rev(i as i64 - 1, (i + p) as i64 - 1);
        let len = l + p + r;
        if len < 2 * p {
            return None;
        }
        let start = i - l;
        if !self.period_exact(start, len, p) {
            return None;
        }
        Some(Run {
            start,
            end: start + len - 1,
            period: p,
        })
    }

    /// Occurrences of `T[pat]` inside `T[win]` as merged arithmetic
    /// progressions with difference `per(pattern)`. Accepts windows of any
    /// length (wide windows are scanned whole; the progression merge keeps
    /// the output at O(|win|/|pat|) entries).
    pub fn ipm(&self, pat: Range<usize>, win: Range<usize>) -> Result<Vec<ArithmeticProgression>> {
        let mut scratch = IpmScratch::default();
        self.ipm_with(pat, win, &mut scratch)
    }

    pub fn ipm_with(
        &self,
        pat: Range<usize>,
        win: Range<usize>,
        scratch: &mut IpmScratch,
    ) -> Result<Vec<ArithmeticProgression>> {
        let m = pat.len();
        if m == 0 {
            return Err(Error::EmptyPattern);
        }
        debug_assert!(pat.end <= self.n() && win.end <= self.n());
        let l = win.len();
        if l < m {
            return Ok(Vec::new());
        }
        let buf = &mut scratch.buf;
        buf.clear();
        buf.extend_from_slice(&self.text[pat.clone()]);
        buf.push(u32::MAX); // separator; never occurs in the text
        buf.extend_from_slice(&self.text[win.clone()]);
        let z = z_function(buf);
        let per = {
            let pi = prefix_function(&self.text[pat]);
            m - pi[m - 1]
        };
        let mut out: Vec<ArithmeticProgression> = Vec::new();
        for c in 0..=l - m {
            if z[m + 1 + c] >= m {
                let pos = win.start + c;
                match out.last_mut() {
                    Some(ap) if pos == ap.last() + per => ap.count += 1,
                    _ => out.push(ArithmeticProgression {
                        first: pos,
                        count: 1,
                        difference: per,
                    }),
                }
            }
        }
        Ok(out)
    }
}

/// Reusable decode buffer for `ipm_with`.
#[derive(Default)]
pub struct IpmScratch {
    buf: Vec<u32>,
}
