//! Independent reference implementations used by tests and the `verify`
//! command. Everything here works on plain byte arrays and deliberately
//! shares no machinery with the main pipeline (its own rank-doubling index
//! backs the medium-scale oracle).

use crate::error::{Error, Result};
use crate::runs::Run;
use std::collections::HashSet;

pub const NAIVE_SQUARES_CAP: usize = 3000;
pub const NAIVE_RUNS_CAP: usize = 20_000;
pub const RUNS_BASED_CAP: usize = 1_000_000;

fn naive_period(s: &[u8]) -> usize {
    'outer: for p in 1..=s.len() {
        for i in 0..s.len() - p {
            if s[i] != s[i + p] {
                continue 'outer;
            }
        }
        return p;
    }
    s.len()
}

/// All distinct square substrings, as strings.
pub fn naive_distinct_squares(raw: &[u8]) -> Result<HashSet<Vec<u8>>> {
    if raw.len() > NAIVE_SQUARES_CAP {
        return Err(Error::InputTooLarge {
            n: raw.len(),
            cap: NAIVE_SQUARES_CAP,
        });
    }
    let n = raw.len();
    let mut out = HashSet::new();
    for half in 1..=n / 2 {
        // streak[x] = consecutive positions from x with raw[t] == raw[t+half]
        let mut streak = 0usize;
        for x in (0..n - half).rev() {
            if raw[x] == raw[x + half] {
                streak += 1;
            } else {
                streak = 0;
            }
            if streak >= half {
                out.insert(raw[x..x + 2 * half].to_vec());
            }
        }
    }
    Ok(out)
}

/// All distinct t-th powers, as strings.
pub fn naive_distinct_powers(raw: &[u8], t: usize) -> Result<HashSet<Vec<u8>>> {
    if raw.len() > NAIVE_SQUARES_CAP {
        return Err(Error::InputTooLarge {
            n: raw.len(),
            cap: NAIVE_SQUARES_CAP,
        });
    }
    let n = raw.len();
    let mut out = HashSet::new();
    for root in 1..=n / t {
        let mut streak = 0usize;
        for x in (0..n - root).rev() {
            if raw[x] == raw[x + root] {
                streak += 1;
            } else {
                streak = 0;
            }
            if streak >= (t - 1) * root {
                out.insert(raw[x..x + t * root].to_vec());
            }
        }
    }
    Ok(out)
}

/// The exact run set by maximal extension of every periodicity.
pub fn naive_runs(raw: &[u8]) -> Result<Vec<Run>> {
    if raw.len() > NAIVE_RUNS_CAP {
        return Err(Error::InputTooLarge {
            n: raw.len(),
            cap: NAIVE_RUNS_CAP,
        });
    }
    let n = raw.len();
    let mut stretches: Vec<Run> = Vec::new();
    for p in 1..=n / 2 {
        let mut i = 0usize;
        while i + p < n {
            if raw[i] != raw[i + p] {
                i += 1;
                continue;
            }
            let mut j = i;
            while j + p < n && raw[j] == raw[j + p] {
                j += 1;
            }
            if j - i >= p {
                stretches.push(Run {
                    start: i,
                    end: j + p - 1,
                    period: p,
                });
            }
            i = j + 1;
        }
    }
    Ok(normalize_stretches(stretches))
}

/// Keeps, per extent, the smallest period: a maximal `p`-periodic stretch is
/// a run exactly when `p` is the smallest period recorded for its extent.
fn normalize_stretches(mut stretches: Vec<Run>) -> Vec<Run> {
    stretches.sort();
    stretches.dedup_by(|b, a| a.start == b.start && a.end == b.end);
    stretches
}

/// Squares classified the way the counter reports them: non-primitively
/// rooted, plain primitively rooted, and special.
#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct ClassifiedSquares {
    pub np: HashSet<Vec<u8>>,
    pub plain_p: HashSet<Vec<u8>>,
    pub special: HashSet<Vec<u8>>,
}

impl ClassifiedSquares {
    pub fn total(&self) -> u64 {
        (self.np.len() + self.plain_p.len() + self.special.len()) as u64
    }
}

pub fn classify_squares(raw: &[u8]) -> Result<ClassifiedSquares> {
    let mut out = ClassifiedSquares::default();
    for sq in naive_distinct_squares(raw)? {
        let half = sq.len() / 2;
        let root_per = naive_period(&sq[..half]);
        let primitive = !(root_per < half && half % root_per == 0);
        if !primitive {
            out.np.insert(sq);
        } else if 4 * root_per <= half {
            out.special.insert(sq);
        } else {
            out.plain_p.insert(sq);
        }
    }
    Ok(out)
}

/// Direct membership test of Definition-style pyramid layers: subperiodic
/// runs whose subperiod equals `per(f)` and whose intersection with
/// `F ∪ F'` is periodic with the run's own period.
pub fn naive_pyramid(raw: &[u8], f: Run, fp: Run) -> Vec<Run> {
    let mut out = Vec::new();
    if f.period != fp.period {
        return out;
    }
    let (f, fp) = if f.start <= fp.start { (f, fp) } else { (fp, f) };
    if fp.start > f.end + 1 {
        return out; // not neighboring
    }
    let lo = f.start;
    let hi = fp.end;
    for r in naive_runs(raw).unwrap_or_default() {
        let per = r.period;
        // subper: the minimum period over the occurring square halves
        if r.len() < 2 * per {
            continue;
        }
        let mut subper = usize::MAX;
        for s in r.start..=r.end + 1 - 2 * per {
            subper = subper.min(naive_period(&raw[s..s + per]));
        }
        if 4 * subper > per || subper != f.period {
            continue;
        }
        let (a, b) = (r.start.max(lo), r.end.min(hi));
        if b < a {
            continue;
        }
        let frag = &raw[a..=b];
        if frag.len() >= 2 * per && frag.iter().zip(frag[per..].iter()).all(|(x, y)| x == y) {
            out.push(r);
        }
    }
    out.sort();
    out
}

/// Checks both synchronizing-set conditions verbatim and returns violation
/// descriptions (empty when the set is valid).
pub fn validate_sync(raw: &[u8], tau: usize, positions: &[u32]) -> Vec<String> {
    let n = raw.len();
    let mut viol = Vec::new();
    let set: HashSet<usize> = positions.iter().map(|&p| p as usize).collect();
    if positions.windows(2).any(|w| w[0] >= w[1]) {
        viol.push("positions not strictly increasing".into());
    }
    if n < 2 * tau {
        if !set.is_empty() {
            viol.push("nonempty set for n < 2 tau".into());
        }
        return viol;
    }
    for &p in &set {
        if p > n - 2 * tau {
            viol.push(format!("position {p} outside [0..n-2tau]"));
        }
    }
    // consistency
    for i in 0..=n - 2 * tau {
        for j in i + 1..=n - 2 * tau {
            if raw[i..i + 2 * tau] == raw[j..j + 2 * tau]
                && set.contains(&i) != set.contains(&j)
            {
                viol.push(format!("consistency violated at ({i},{j})"));
            }
        }
    }
    // density
    if n >= 3 * tau - 1 {
        for i in 0..=n - (3 * tau - 1) {
            let empty = (i..i + tau).all(|x| !set.contains(&x));
            let periodic = 3 * naive_period(&raw[i..i + 3 * tau - 1]) <= tau;
            if empty != periodic {
                viol.push(format!(
                    "density violated at {i}: empty={empty} periodic={periodic}"
                ));
            }
        }
    }
    viol
}

// ---- medium-scale machinery: rank doubling, independent of the pipeline --

/// Suffix comparison and LCE via rank doubling over the text and its
/// reverse; O(n log n) construction, O(log n) queries.
pub struct OracleIndex {
    n: usize,
    fwd: Vec<Vec<u32>>,
    rev: Vec<Vec<u32>>,
}

fn doubling_levels(s: &[u8]) -> Vec<Vec<u32>> {
    let n = s.len();
    let mut levels = Vec::new();
    let mut rank: Vec<u32> = s.iter().map(|&c| c as u32).collect();
    levels.push(rank.clone());
    let mut len = 1usize;
    let mut order: Vec<u32> = (0..n as u32).collect();
    let mut tmp = vec![0u32; n];
    while len < n {
        let key = |i: u32| -> (u32, u32) {
            let i = i as usize;
            (
                rank[i],
                if i + len < n { rank[i + len] + 1 } else { 0 },
            )
        };
        order.sort_unstable_by_key(|&i| key(i));
        let mut r = 0u32;
        for t in 0..n {
            if t > 0 && key(order[t]) != key(order[t - 1]) {
                r += 1;
            }
            tmp[order[t] as usize] = r;
        }
        std::mem::swap(&mut rank, &mut tmp);
        levels.push(rank.clone());
        len *= 2;
    }
    levels
}

impl OracleIndex {
    pub fn new(raw: &[u8]) -> OracleIndex {
        let mut rev = raw.to_vec();
        rev.reverse();
        OracleIndex {
            n: raw.len(),
            fwd: doubling_levels(raw),
            rev: doubling_levels(&rev),
        }
    }

    fn lce_in(levels: &[Vec<u32>], n: usize, mut i: usize, mut j: usize) -> usize {
        if i == j {
            return n - i.min(n);
        }
        if i >= n || j >= n {
            return 0;
        }
        let mut out = 0usize;
        for (k, level) in levels.iter().enumerate().rev() {
            let step = 1usize << k;
            if i + step <= n && j + step <= n && level[i] == level[j] {
                i += step;
                j += step;
                out += step;
            }
            if i >= n || j >= n {
                break;
            }
        }
        out
    }

    pub fn lce(&self, i: usize, j: usize) -> usize {
        Self::lce_in(&self.fwd, self.n, i, j)
    }

    /// Longest common suffix of the prefixes ending at `i` and `j`.
    pub fn lce_rev(&self, i: usize, j: usize) -> usize {
        Self::lce_in(&self.rev, self.n, self.n - 1 - i, self.n - 1 - j)
    }

    /// Rank of suffix `i` in lexicographic order.
    pub fn rank(&self, i: usize) -> u32 {
        self.fwd.last().map_or(0, |l| l.get(i).copied().unwrap_or(0))
    }
}

/// All runs in O(n log n): for every period, anchor pairs at multiples of
/// the period are extended with LCEs; extents are then normalized to their
/// smallest recorded period.
pub fn fast_runs(raw: &[u8], ix: &OracleIndex) -> Vec<Run> {
    let n = raw.len();
    let mut stretches: Vec<Run> = Vec::new();
    for p in 1..=n / 2 {
        let mut j = 0usize;
        while j + p < n {
            let r = ix.lce(j, j + p);
            let l = if j == 0 { 0 } else { ix.lce_rev(j - 1, j + p - 1) };
            if l + r >= p {
                stretches.push(Run {
                    start: j - l,
                    end: j + p + r - 1,
                    period: p,
                });
            }
            j += p;
        }
    }
    normalize_stretches(stretches)
}

/// Distinct-square count from runs: enumerate the distinct squares each run
/// generates, identify each square by a canonical occurrence via suffix
/// ranks, and count.
pub fn runs_based_distinct_squares(raw: &[u8]) -> Result<u64> {
    if raw.len() > RUNS_BASED_CAP {
        return Err(Error::InputTooLarge {
            n: raw.len(),
            cap: RUNS_BASED_CAP,
        });
    }
    let ix = OracleIndex::new(raw);
    let runs = fast_runs(raw, &ix);
    // candidate occurrences: per run and exponent, one start per distinct
    // rotation
    let mut cands: Vec<(usize, usize)> = Vec::new(); // (start, total length)
    for r in &runs {
        let p = r.period;
        let len = r.len();
        for m in 1..=len / (2 * p) {
            let distinct = p.min(len - 2 * m * p + 1);
            for s in r.start..r.start + distinct {
                cands.push((s, 2 * m * p));
            }
        }
    }
    // dedup by string equality: sort by (length, suffix rank), then adjacent
    // candidates are equal iff their LCE covers the whole length
    cands.sort_unstable_by_key(|&(s, l)| (l, ix.rank(s)));
    let mut count = 0u64;
    let mut prev: Option<(usize, usize)> = None;
    for &(s, l) in &cands {
        let dup = match prev {
            Some((ps, pl)) => pl == l && ix.lce(ps, s) >= l,
            None => false,
        };
        if !dup {
            count += 1;
        }
        prev = Some((s, l));
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(s: &str) -> Vec<u8> {
        s.bytes().collect()
    }

    #[test]
    fn naive_squares_basics() {
        let got = naive_distinct_squares(&b("aa")).unwrap();
        assert_eq!(got.len(), 1);
        assert!(got.contains(&b("aa")));
        let got = naive_distinct_squares(&b("abab")).unwrap();
        assert_eq!(got.len(), 1);
        assert!(got.contains(&b("abab")));
        assert_eq!(naive_distinct_squares(&b("aaaa")).unwrap().len(), 2);
    }

    #[test]
    fn naive_runs_basics() {
        assert_eq!(
            naive_runs(&b("aaa")).unwrap(),
            vec![Run { start: 0, end: 2, period: 1 }]
        );
        assert_eq!(
            naive_runs(&b("abab")).unwrap(),
            vec![Run { start: 0, end: 3, period: 2 }]
        );
    }

    #[test]
    fn fast_runs_matches_naive() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(71);
        for _ in 0..40 {
            let n = rng.gen_range(1..600usize);
            let sigma = [2u8, 3][rng.gen_range(0..2)];
            let raw: Vec<u8> = (0..n).map(|_| rng.gen_range(0..sigma)).collect();
            let ix = OracleIndex::new(&raw);
            assert_eq!(fast_runs(&raw, &ix), naive_runs(&raw).unwrap(), "{raw:?}");
        }
    }

    #[test]
    fn dual_oracle_square_counts_agree() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(72);
        for _ in 0..30 {
            let n = rng.gen_range(1..400usize);
            let raw: Vec<u8> = (0..n).map(|_| rng.gen_range(0..2)).collect();
            let naive = naive_distinct_squares(&raw).unwrap().len() as u64;
            assert_eq!(runs_based_distinct_squares(&raw).unwrap(), naive);
        }
        // (ab)^m (ba)^m at m = 1000 has exactly 2000 distinct squares
        let mut raw = Vec::new();
        for _ in 0..1000 {
            raw.extend_from_slice(b"ab");
        }
        for _ in 0..1000 {
            raw.extend_from_slice(b"ba");
        }
        assert_eq!(runs_based_distinct_squares(&raw).unwrap(), 2000);
    }

    #[test]
    fn pyramid_oracle_fig2() {
        let raw = b(&("aab".repeat(6) + "aaab" + &"aab".repeat(6)));
        let f = Run { start: 0, end: 19, period: 3 };
        let fp = Run { start: 19, end: 39, period: 3 };
        let layers = naive_pyramid(&raw, f, fp);
        assert_eq!(
            layers,
            vec![
                Run { start: 0, end: 38, period: 19 },
                Run { start: 3, end: 35, period: 16 },
                Run { start: 6, end: 32, period: 13 },
            ]
        );
        // disjoint runs with different roots give the empty pyramid
        let raw = b("aaaabbbb");
        let f = Run { start: 0, end: 3, period: 1 };
        let fp = Run { start: 4, end: 7, period: 1 };
        assert!(naive_pyramid(&raw, f, fp).is_empty());
    }

    #[test]
    fn validator_flags_bad_sets() {
        let raw = b("abaababaab");
        assert!(!validate_sync(&raw, 2, &[]).is_empty(), "empty set violates density");
    }

    #[test]
    fn caps_enforced() {
        let raw = vec![0u8; NAIVE_SQUARES_CAP + 1];
        assert!(matches!(
            naive_distinct_squares(&raw),
            Err(Error::InputTooLarge { .. })
        ));
    }
}
