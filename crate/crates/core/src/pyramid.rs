//! Pyramids of layer-runs: canonical representations, the regular-layer
//! membership filter, and pyramid types.
//!
//! Two neighboring runs `F`, `F'` with equal period `p` and equal Lyndon
//! roots induce a pyramid of subperiodic layer-runs. The regular layers form
//! arithmetic progressions (starts step `-p`, ends and periods step `+p`);
//! at most one layer sticks out of `F ∪ F'` and is the max-layer, otherwise
//! the longest contained layer is promoted.

use crate::error::{Error, Result};
use crate::index::QueryIndex;
use crate::runs::Run;

/// Canonical representation of a non-empty pyramid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pyramid {
    /// Left generator run.
    pub f: Run,
    /// Right generator run (starts after `f`).
    pub fp: Run,
    /// Root alignment offset, in `[1..p)`.
    pub delta: usize,
    /// Regular layers are `T[a'-k*p-delta ..= b+k*p+delta]` for
    /// `k in [k_min..=k_max]`; `k_min > k_max` means no regular layers.
    pub k_min: usize,
    pub k_max: usize,
    /// The unique layer of maximal period.
    pub max_layer: Run,
}

impl Pyramid {
    pub fn period(&self) -> usize {
        self.f.period
    }

    /// Overlap length `|F ∩ F'|` (0 when the runs are adjacent).
    pub fn ov(&self) -> usize {
        (self.f.end + 1).saturating_sub(self.fp.start)
    }

    pub fn reg_count(&self) -> usize {
        (self.k_max + 1).saturating_sub(self.k_min)
    }

    pub fn reg_layer(&self, k: usize) -> Run {
        debug_assert!((self.k_min..=self.k_max).contains(&k));
        let p = self.period();
        Run {
            start: self.fp.start - k * p - self.delta,
            end: self.f.end + k * p + self.delta,
            period: k * p + self.delta,
        }
    }

    pub fn reg_layers(&self) -> impl Iterator<Item = Run> + '_ {
        (self.k_min..=self.k_max.min(usize::MAX)).map(move |k| self.reg_layer(k))
    }

    /// Whether some regular layer has period in `[lo..hi)`.
    pub fn has_reg_period_in(&self, lo: usize, hi: usize) -> bool {
        if self.reg_count() == 0 {
            return false;
        }
        let p = self.period();
        let first = self.k_min * p + self.delta;
        let last = self.k_max * p + self.delta;
        if last < lo || first >= hi {
            return false;
        }
        // smallest layer period >= lo
        let k = if first >= lo {
            self.k_min
        } else {
            self.k_min + (lo - self.delta - self.k_min * p).div_ceil(p)
        };
        k <= self.k_max && k * p + self.delta < hi
    }

    /// Raises `k_min` until every regular layer has period above `bound`.
    pub fn trim_reg_periods_below(&mut self, bound: usize) {
        let p = self.period();
        while self.k_min <= self.k_max && self.k_min * p + self.delta < bound {
            self.k_min += 1;
        }
    }
}

/// Computes the canonical representation of the pyramid of two neighboring
/// equal-period runs, or `None` when the pyramid is empty.
pub fn pyramid_canonical(ix: &QueryIndex, f: Run, fp: Run) -> Result<Option<Pyramid>> {
    let (f, fp) = if f.start <= fp.start { (f, fp) } else { (fp, f) };
    if f.period != fp.period {
        return Err(Error::PeriodMismatch);
    }
    if f.start == fp.start || fp.start > f.end + 1 {
        return Err(Error::NotNeighboring);
    }
    let p = f.period;
    let (a, b, a2, b2) = (f.start, f.end, fp.start, fp.end);

    // Root alignment: one occurrence of F's last period block inside the
    // first 2p characters of F' fixes delta; no occurrence means the Lyndon
    // roots differ.
    let occ = ix.ipm(b + 1 - p..b + 1, a2..a2 + 2 * p)?;
    let Some(first) = occ.first() else {
        return Err(Error::RootMismatch);
    };
    let delta =
        ((first.first as i64 - (b + 1 - p) as i64).rem_euclid(p as i64)) as usize;
    if delta == 0 {
        // aligned roots would merge F and F' into one run
        return Ok(None);
    }

    let k_cap = |gap: i64| -> i64 {
        // largest k with k*p + delta < gap
        (gap - delta as i64 - 1).div_euclid(p as i64)
    };
    let k_max_contained = k_cap((a2 - a) as i64).min(k_cap((b2 - b) as i64));
    let k_min = 4usize;

    let boundary = boundary_layer(ix, f, fp, delta);
    let (k_max, max_layer) = match boundary {
        Some(run) => {
            let k_max = if k_max_contained >= k_min as i64 {
                k_max_contained as usize
            } else {
                k_min - 1
            };
            (k_max, run)
        }
        None => {
            if k_max_contained < k_min as i64 {
                return Ok(None);
            }
            // promote the longest contained layer
            let k_top = k_max_contained as usize;
            let promoted = Run {
                start: a2 - k_top * p - delta,
                end: b + k_top * p + delta,
                period: k_top * p + delta,
            };
            (k_top - 1, promoted)
        }
    };

    Ok(Some(Pyramid {
        f,
        fp,
        delta,
        k_min,
        k_max,
        max_layer,
    }))
}

/// Searches for the unique layer that may stick out of `F ∪ F'`: first a run
/// covering `F`'s start, then one covering `F'`'s end. The candidate period
/// is forced by `delta` within an interval of at most `p` integers.
fn boundary_layer(ix: &QueryIndex, f: Run, fp: Run, delta: usize) -> Option<Run> {
    let p = f.period;
    let (a, b, a2, b2) = (f.start, f.end, fp.start, fp.end);

    let aligned = |base: usize| -> usize {
        base + ((delta as i64 - base as i64).rem_euclid(p as i64)) as usize
    };

    // left: a layer containing position a has period in [a2-a ..= b-a+1]
    let y = aligned(a2 - a);
    if y <= b - a + 1 && y >= 4 * p {
        if let Some(r) = ix.gamma(a, y) {
            if validate_boundary(ix, f, fp, r) {
                return Some(r);
            }
        }
    }
    // right: a layer containing position b' has period in [b2-b ..= b2-a2+1]
    let y = aligned(b2 - b);
    if y <= b2 - a2 + 1 && y >= 4 * p && b2 + 1 >= y {
        if let Some(r) = ix.gamma(b2 + 1 - y, y) {
            if validate_boundary(ix, f, fp, r) {
                return Some(r);
            }
        }
    }
    None
}

/// Layer membership for a boundary candidate `r`: the intersection with
/// `F ∪ F'` must be periodic with `per(r)`, and the extremal generated
/// square must have one half in `F` and the other in `F'`.
fn validate_boundary(ix: &QueryIndex, f: Run, fp: Run, r: Run) -> bool {
    let _ = ix;
    let y = r.period;
    let lo = r.start.max(f.start);
    let hi = r.end.min(fp.end);
    if hi < lo || hi - lo + 1 < 2 * y {
        return false;
    }
    // halves of the leftmost square of the intersection
    let s = lo;
    s >= f.start && s + y - 1 <= f.end && s + y >= fp.start && s + 2 * y - 1 <= fp.end
}

/// If `r` is a regular layer of some pyramid, returns that pyramid.
pub fn regular_layer_filter(ix: &QueryIndex, r: Run) -> Option<Pyramid> {
    let y = r.period;
    let prefix_per = ix.two_period(r.start..r.start + y)?;
    let suffix_per = ix.two_period(r.end + 1 - y..r.end + 1)?;
    if prefix_per != suffix_per || y < 4 * prefix_per {
        return None;
    }
    let p = prefix_per;
    let f = ix.gamma(r.start, p)?;
    let fp = ix.gamma(r.end + 1 - y, p)?;
    if f == fp {
        return None;
    }
    let py = pyramid_canonical(ix, f, fp).ok()??;
    let d = r.period as i64 - py.delta as i64;
    if d <= 0 || d % p as i64 != 0 {
        return None;
    }
    let k = (d / p as i64) as usize;
    if (py.k_min..=py.k_max).contains(&k) && py.reg_layer(k) == r {
        Some(py)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::packed::PackedText;

    fn ix_of(raw: &[u8], sigma: u32) -> QueryIndex {
        QueryIndex::build(&PackedText::encode(raw, sigma).unwrap())
    }

    fn b(s: &str) -> Vec<u8> {
        s.bytes().map(|c| c - b'a').collect()
    }

    #[test]
    fn fig_two_pyramid() {
        // (aab)^6 aaab (aab)^6: F = [0..19], F' = [19..39], period 3.
        // Three layers (aab)^i a (aab)^i aa for i in {4,5,6}; the i = 6
        // layer [0..38] sticks out and is the max-layer.
        let raw = b(&("aab".repeat(6) + "aaab" + &"aab".repeat(6)));
        let ix = ix_of(&raw, 2);
        let f = Run { start: 0, end: 19, period: 3 };
        let fp = Run { start: 19, end: 39, period: 3 };
        assert_eq!(ix.gamma(0, 3), Some(f));
        assert_eq!(ix.gamma(19, 3), Some(fp));
        let py = pyramid_canonical(&ix, f, fp).unwrap().unwrap();
        assert_eq!(py.delta, 1);
        assert_eq!((py.k_min, py.k_max), (4, 5));
        assert_eq!(py.max_layer, Run { start: 0, end: 38, period: 19 });
        assert_eq!(py.reg_layer(4), Run { start: 6, end: 32, period: 13 });
        assert_eq!(py.reg_layer(5), Run { start: 3, end: 35, period: 16 });
        assert_eq!(py.ov(), 1);
    }

    #[test]
    fn fig_three_shared_max_layer() {
        // ((ab)^7 a)^3: three period-2 runs; both pyramids share the
        // whole-string max-layer ((ab)^7a)^3.
        let u = "abababababababa"; // (ab)^7 a, 15 chars
        let raw = b(&u.repeat(3));
        let ix = ix_of(&raw, 2);
        let r0 = ix.gamma(0, 2).unwrap();
        let r1 = ix.gamma(15, 2).unwrap();
        let r2 = ix.gamma(30, 2).unwrap();
        assert_eq!(r0, Run { start: 0, end: 14, period: 2 });
        assert_eq!(r1, Run { start: 15, end: 29, period: 2 });
        assert_eq!(r2, Run { start: 30, end: 44, period: 2 });
        let p01 = pyramid_canonical(&ix, r0, r1).unwrap().unwrap();
        let p12 = pyramid_canonical(&ix, r1, r2).unwrap().unwrap();
        let whole = Run { start: 0, end: 44, period: 15 };
        assert_eq!(p01.max_layer, whole);
        assert_eq!(p12.max_layer, whole);
        assert_eq!((p01.k_min, p01.k_max), (4, 6)); // periods 9, 11, 13
        assert_eq!((p12.k_min, p12.k_max), (4, 6));
    }

    #[test]
    fn promoted_max_layer() {
        // (ab)^8 (ba)^8: no boundary layer exists (candidate periods are
        // even but delta = 1), so the k = 7 layer is promoted.
        let raw = b(&("ab".repeat(8) + &"ba".repeat(8)));
        let ix = ix_of(&raw, 2);
        let f = ix.gamma(0, 2).unwrap();
        let fp = ix.gamma(16, 2).unwrap();
        assert_eq!(f, Run { start: 0, end: 15, period: 2 });
        assert_eq!(fp, Run { start: 16, end: 31, period: 2 });
        let py = pyramid_canonical(&ix, f, fp).unwrap().unwrap();
        assert_eq!(py.delta, 1);
        assert_eq!((py.k_min, py.k_max), (4, 6));
        assert_eq!(py.max_layer, Run { start: 1, end: 30, period: 15 });
        assert_eq!(py.ov(), 0);
    }

    #[test]
    fn root_mismatch_and_errors() {
        let raw = b("aaaabbbb");
        let ix = ix_of(&raw, 2);
        let f = ix.gamma(0, 1).unwrap();
        let fp = ix.gamma(4, 1).unwrap();
        assert_eq!(pyramid_canonical(&ix, f, fp), Err(Error::RootMismatch));
        let far = Run { start: 6, end: 7, period: 1 };
        let near = Run { start: 0, end: 3, period: 1 };
        assert_eq!(pyramid_canonical(&ix, near, far), Err(Error::NotNeighboring));
        let p2 = Run { start: 0, end: 3, period: 2 };
        assert_eq!(pyramid_canonical(&ix, p2, far), Err(Error::PeriodMismatch));
    }

    #[test]
    fn filter_examples() {
        // layer inside (ab)^8(ba)^8 is a regular layer
        let raw = b(&("ab".repeat(8) + &"ba".repeat(8)));
        let ix = ix_of(&raw, 2);
        let layer = Run { start: 7, end: 24, period: 9 };
        assert_eq!(ix.gamma(7, 9), Some(layer));
        let py = regular_layer_filter(&ix, layer).expect("is a regular layer");
        assert_eq!(py.f, Run { start: 0, end: 15, period: 2 });
        // the (ab)^8 run itself is not a layer
        let f = ix.gamma(0, 2).unwrap();
        assert!(regular_layer_filter(&ix, f).is_none());
        // the promoted max-layer is not a *regular* layer
        let m = Run { start: 1, end: 30, period: 15 };
        assert!(regular_layer_filter(&ix, m).is_none());
        // run with non-periodic period-length prefix
        let raw = b("abcabcabc");
        let ix = ix_of(&raw, 3);
        let r = ix.gamma(0, 3).unwrap();
        assert!(regular_layer_filter(&ix, r).is_none());
    }
}
