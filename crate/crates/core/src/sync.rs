//! tau-synchronizing sets: construction, and rank queries over the suffixes
//! starting at synchronizing positions.
//!
//! A set `S ⊆ [0..n-2tau]` is tau-synchronizing when it is consistent
//! (positions inside equal `2tau`-length contexts agree) and dense (a
//! `tau`-wide window `[i..i+tau)` misses `S` exactly when
//! `per(T[i..i+3tau-2]) <= tau/3`). Correctness is defined by that validator;
//! the construction below picks window minimizers of scrambled tau-gram
//! ranks, with highly periodic tau-grams excluded.

use crate::error::{Error, Result};
use crate::index::QueryIndex;
use crate::packed::PackedText;
use crate::rsort;
use crate::sais::Rmq;

/// Sorted synchronizing positions with the lexicographic rank of the suffix
/// starting at each, plus a range-minimum structure over the ranks.
#[derive(Debug)]
pub struct SyncSet {
    pub tau: usize,
    pub positions: Vec<u32>,
    /// `rank[i]` = 1-based rank of `T[positions[i]..n)` among the suffixes
    /// starting at synchronizing positions.
    pub rank: Vec<u32>,
    rmq: Rmq,
}

const EXCLUDED: u64 = u64::MAX;

/// Builds a tau-synchronizing set. Requires `1 <= tau <= n/2`.
pub fn build_sync(p: &PackedText, ix: &QueryIndex, tau: usize) -> Result<SyncSet> {
    let n = p.len();
    if tau < 1 || 2 * tau > n {
        return Err(Error::TauTooLarge { tau, n });
    }
    let text = ix.text();
    let grams = n - tau + 1; // tau-grams start in [0..n-tau]

    // Scrambled identifier per tau-gram: equal grams get equal values
    // (consistency), the multiplier spreads rank order pseudo-randomly so
    // window minima land at endpoints ~2/(tau+1) of the time.
    let mut id = vec![0u64; grams];
    {
        let mut cur: u64 = 0;
        let mut prev_kept: Option<usize> = None;
        let mut min_lcp = u32::MAX;
        for r in 0..n {
            if r > 0 {
                min_lcp = min_lcp.min(ix.lcp_at(r));
            }
            let pos = ix.suffix_at_rank(r);
            if pos < grams {
                if prev_kept.is_some() && (min_lcp as usize) < tau {
                    cur += 1;
                } else if prev_kept.is_none() {
                    cur = 0;
                }
                id[pos] = cur.wrapping_mul(0x9E37_79B9_7F4A_7C15).rotate_left(17) | 1;
                prev_kept = Some(r);
                min_lcp = u32::MAX;
            }
        }
    }

    // Exclude grams with period <= tau/3.
    let thresh = tau / 3;
    for q in 1..=thresh {
        // run[j] = length of the match streak text[j] == text[j+q] from j
        let mut streak = 0usize;
        for j in (0..n.saturating_sub(q)).rev() {
            if text[j] == text[j + q] {
                streak += 1;
            } else {
                streak = 0;
            }
            if j < grams && streak >= tau - q {
                id[j] = EXCLUDED;
            }
        }
    }

    // Window minima over [i..i+tau], kept when attained at an endpoint.
    let mut positions: Vec<u32> = Vec::new();
    if n >= 2 * tau {
        let mut deque: std::collections::VecDeque<usize> = std::collections::VecDeque::new();
        for j in 0..=n - tau {
            while let Some(&b) = deque.back() {
                if id[b] >= id[j] {
                    deque.pop_back();
                } else {
                    break;
                }
            }
            deque.push_back(j);
            if j >= tau {
                let i = j - tau;
                while *deque.front().unwrap() < i {
                    deque.pop_front();
                }
                let m = id[*deque.front().unwrap()];
                if m != EXCLUDED && (id[i] == m || id[j] == m) {
                    positions.push(i as u32);
                }
            }
        }
    }

    // SparseRANK: 1-based rank of each sync suffix among sync suffixes.
    let m = positions.len();
    let mut by_rank: Vec<(u32, u32)> = positions
        .iter()
        .enumerate()
        .map(|(i, &pos)| (ix.suffix_rank(pos as usize), i as u32))
        .collect();
    rsort::sort_by_key_u64(&mut by_rank, n.max(1) as u64, |t| t.0 as u64);
    let mut rank = vec![0u32; m];
    for (r, &(_, i)) in by_rank.iter().enumerate() {
        rank[i as usize] = r as u32 + 1;
    }
    let rmq = Rmq::new(rank.clone());
    Ok(SyncSet {
        tau,
        positions,
        rank,
        rmq,
    })
}

impl SyncSet {
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// Rank-minimal position among sync indices `[u..=v]`.
    pub fn rank_argmin(&self, u: usize, v: usize) -> (usize, u32) {
        let arg = self.rmq.argmin(u, v);
        (self.positions[arg] as usize, self.rank[arg])
    }

    /// Among synchronizing positions in `[lo..hi]` (inclusive), the one whose
    /// suffix is lexicographically minimal, with its rank.
    pub fn sparse_rank_min(&self, lo: usize, hi: usize) -> Option<(usize, u32)> {
        if lo > hi {
            return None;
        }
        let a = self.positions.partition_point(|&p| (p as usize) < lo);
        let b = self.positions.partition_point(|&p| (p as usize) <= hi);
        if a >= b {
            return None;
        }
        let arg = self.rmq.argmin(a, b - 1);
        Some((self.positions[arg] as usize, self.rank[arg]))
    }
}
