//! The three-part representation of all runs of a text: tabulated short-run
//! clusters, tau-runs, and long-period runs sampled level by level, with
//! subperiodic layer-runs folded into pyramids.

use crate::index::{IpmScratch, QueryIndex};
use crate::packed::{PackedText, TauConfig};
use crate::pyramid::{pyramid_canonical, regular_layer_filter, Pyramid};
use crate::rsort;
use crate::util;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// A maximal periodic fragment `T[start..=end]` with its smallest period.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Run {
    pub start: usize,
    pub end: usize,
    pub period: usize,
}

impl Run {
    pub fn len(&self) -> usize {
        self.end - self.start + 1
    }
}

/// Base runs plus translation shifts; denotes every base run translated by
/// every shift (all copies are genuine runs by construction).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunCluster {
    pub base_runs: Vec<Run>,
    pub shifts: Vec<usize>,
}

impl RunCluster {
    /// The accounting unit `|X| + |D|`.
    pub fn size(&self) -> usize {
        self.base_runs.len() + self.shifts.len()
    }

    pub fn denoted(&self) -> impl Iterator<Item = Run> + '_ {
        self.shifts.iter().flat_map(move |&d| {
            self.base_runs.iter().map(move |r| Run {
                start: r.start + d,
                end: r.end + d,
                period: r.period,
            })
        })
    }
}

/// Disjoint three-part representation of `Runs(T)`.
#[derive(Debug)]
pub struct RunsRepr {
    /// tau-runs and long-period runs that are not regular layers.
    pub explicit_runs: Vec<Run>,
    /// Short small-period runs.
    pub clusters: Vec<RunCluster>,
    /// Regular layers of these pyramids supply the remaining runs.
    pub pyramids: Vec<Pyramid>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunsStats {
    pub explicit: usize,
    pub clusters: usize,
    pub cluster_size: usize,
    pub pyramids: usize,
    pub denoted_regular_layers: u64,
}

impl RunsRepr {
    pub fn stats(&self) -> RunsStats {
        RunsStats {
            explicit: self.explicit_runs.len(),
            clusters: self.clusters.len(),
            cluster_size: self.clusters.iter().map(|c| c.size()).sum(),
            pyramids: self.pyramids.len(),
            denoted_regular_layers: self
                .pyramids
                .iter()
                .map(|p| p.reg_count() as u64)
                .sum(),
        }
    }

    /// Every denoted run, materialized. Test/verify helper; the counting
    /// paths never expand regular layers.
    pub fn denoted_runs(&self) -> Vec<Run> {
        let mut out: Vec<Run> = self.explicit_runs.clone();
        for c in &self.clusters {
            out.extend(c.denoted());
        }
        for py in &self.pyramids {
            out.extend(py.reg_layers());
        }
        out
    }
}

/// All runs of length `< 3 tau - 1` and period `<= tau/3`, as clusters keyed
/// by the packed content of `floor(3.5 tau)`-length blocks sampled every
/// `floor(tau/2)` positions. Blocks touching the virtual sentinels are
/// handled by a direct scan.
pub fn short_runs_tabulated(p: &PackedText, cfg: &TauConfig) -> Vec<RunCluster> {
    let tau = cfg.tau_runs;
    let pmax = tau / 3;
    if pmax == 0 || p.is_empty() {
        return Vec::new();
    }
    let n = p.len();
    let h = (tau / 2).max(1);
    let bl = 7 * tau / 2;
    let len_cap = 3 * tau - 1; // runs strictly shorter than this

    let mut clusters = Vec::new();
    let mut interior: Vec<(u64, u32)> = Vec::new();
    let mut scratch: Vec<u32> = Vec::new();

    let mut o = 0usize;
    while o < n + 2 {
        if o >= 1 && o + bl <= n + 1 {
            let key = p
                .extract_block(o - 1, bl)
                .expect("table clamp keeps blocks within one word");
            interior.push((key, o as u32));
        } else {
            // sentinel-adjacent block, scanned directly
            let end = (o + bl).min(n + 2);
            scratch.clear();
            scratch.extend((o..end).map(|t| p.at_signed(t as i64 - 1)));
            let base = local_short_runs(&scratch, h, pmax, len_cap, o);
            if !base.is_empty() {
                clusters.push(RunCluster {
                    base_runs: base,
                    shifts: vec![0],
                });
            }
        }
        o += h;
    }

    // group equal blocks; one run computation per distinct key
    rsort::sort_by_key_u64(&mut interior, 1u64 << (p.bits_per_char() as u64 * bl as u64).min(63), |t| t.0);
    let mut ranges: Vec<(usize, usize)> = Vec::new();
    let mut s = 0usize;
    for i in 1..=interior.len() {
        if i == interior.len() || interior[i].0 != interior[s].0 {
            ranges.push((s, i));
            s = i;
        }
    }

    let build = |&(lo, hi): &(usize, usize)| -> Option<RunCluster> {
        let o0 = interior[lo].1 as usize;
        let mut chars = Vec::with_capacity(bl);
        for t in o0..o0 + bl {
            chars.push(p.get(t - 1));
        }
        let base = local_short_runs(&chars, h, pmax, len_cap, o0);
        if base.is_empty() {
            return None;
        }
        Some(RunCluster {
            base_runs: base,
            shifts: interior[lo..hi].iter().map(|&(_, o)| o as usize - o0).collect(),
        })
    };

    #[cfg(feature = "parallel")]
    let built: Vec<Option<RunCluster>> = ranges.par_iter().map(build).collect();
    #[cfg(not(feature = "parallel"))]
    let built: Vec<Option<RunCluster>> = ranges.iter().map(build).collect();

    clusters.extend(built.into_iter().flatten());
    clusters
}

/// Runs of the block starting within block offset `[1..h]`, ending before
/// the block's last position, with the short-run length/period bounds;
/// returned at absolute text coordinates for block offset `o` (the block
/// covers sentineled positions `[o..o+|chars|)`, text position `o-1+i`).
fn local_short_runs(
    chars: &[u32],
    h: usize,
    pmax: usize,
    len_cap: usize,
    o: usize,
) -> Vec<Run> {
    if chars.len() < 3 {
        return Vec::new();
    }
    util::runs_in_window(chars)
        .into_iter()
        .filter(|r| {
            r.start >= 1
                && r.start <= h
                && r.end + 2 <= chars.len()
                && r.period <= pmax
                && r.end - r.start + 1 < len_cap
        })
        .map(|r| Run {
            start: o + r.start - 1,
            end: o + r.end - 1,
            period: r.period,
        })
        .collect()
}

/// All tau-runs (length `>= 3 tau - 1`, period `<= tau/3`) with the Lyndon
/// position of each.
pub fn tau_runs(p: &PackedText, ix: &QueryIndex, cfg: &TauConfig) -> Vec<(Run, usize)> {
    let tau = cfg.tau_runs;
    let pmax = tau / 3;
    let n = p.len();
    if pmax == 0 || n < 3 * tau - 1 {
        return Vec::new();
    }
    let w = 2 * pmax + 2;
    let h = (tau / 2).max(1);
    let text = ix.text();

    let scan = |range: std::ops::Range<usize>| -> Vec<Run> {
        let mut out = Vec::new();
        let mut o = range.start.div_ceil(h) * h;
        while o < range.end {
            if o + w <= n {
                let per = util::smallest_period(&text[o..o + w]);
                if per <= pmax && 2 * per <= w {
                    if let Some(r) = ix.gamma(o, per) {
                        if r.len() >= 3 * tau - 1 && r.period <= pmax {
                            out.push(r);
                        }
                    }
                }
            }
            o += h;
        }
        out
    };

    const CHUNK: usize = 1 << 16;
    let chunks: Vec<std::ops::Range<usize>> = (0..n)
        .step_by(CHUNK)
        .map(|s| s..(s + CHUNK).min(n))
        .collect();
    #[cfg(feature = "parallel")]
    let mut found: Vec<Run> = chunks.into_par_iter().flat_map_iter(scan).collect();
    #[cfg(not(feature = "parallel"))]
    let mut found: Vec<Run> = chunks.into_iter().flat_map(scan).collect();

    rsort::sort_by_tuple(&mut found, (n + 1) as u64, |r| [r.start as u64, r.end as u64]);
    found.dedup();
    found
        .into_iter()
        .map(|r| {
            let rot = util::minimal_rotation(&text[r.start..r.start + r.period]);
            (r, r.start + rot)
        })
        .collect()
}

/// One level of the long-run sampler: a representation of all runs with
/// period in `[2^x .. 2^{x+1})` as explicit runs (none a regular layer) and
/// pyramids, both possibly with duplicates.
pub fn long_runs_level(ix: &QueryIndex, x: u32) -> (Vec<Run>, Vec<Pyramid>) {
    let n = ix.n();
    let k = level_sample(x);
    let mut runs = Vec::new();
    let mut pyrs = Vec::new();
    let mut scratch = IpmScratch::default();
    let mut i = 0usize;
    while i + k <= n {
        sample_anchor(ix, i, k, x, &mut scratch, &mut runs, &mut pyrs);
        i += k;
    }
    (runs, pyrs)
}

fn level_sample(x: u32) -> usize {
    if x == 0 {
        1
    } else {
        1usize << (x - 1)
    }
}

fn sample_anchor(
    ix: &QueryIndex,
    i: usize,
    k: usize,
    x: u32,
    scratch: &mut IpmScratch,
    runs: &mut Vec<Run>,
    pyrs: &mut Vec<Pyramid>,
) {
    let n = ix.n();
    let lo = 1usize << x;
    let hi = 2usize << x;
    let wend = (i + 5 * k).min(n);

    let occ = ix
        .ipm_with(i..i + k, i..wend, scratch)
        .expect("nonempty pattern");
    debug_assert!(!occ.is_empty(), "the trivial occurrence is always present");
    let per = occ[0].difference;
    let periodic = 2 * per <= k;

    let singleton = |j: usize, runs: &mut Vec<Run>, pyrs: &mut Vec<Pyramid>| {
        let d = j - i;
        if (lo..hi).contains(&d) {
            if let Some(r) = ix.gamma(i, d) {
                push_filtered(ix, r, lo, hi, runs, pyrs);
            }
        }
    };

    for ap in &occ {
        if !periodic || ap.count == 1 {
            for j in ap.iter() {
                singleton(j, runs, pyrs);
            }
            continue;
        }
        let j0 = ap.first;
        let Some(fp) = ix.gamma(j0, per) else {
            for j in ap.iter() {
                singleton(j, runs, pyrs);
            }
            continue;
        };
        if (fp.start..=fp.end).contains(&i) {
            // the whole progression lies inside fp and generates only fp
            continue;
        }
        singleton(j0, runs, pyrs);
        let Some(f) = ix.gamma(i, per) else { continue };
        debug_assert!(f.start < fp.start);
        let (a, b, a2, b2) = (f.start, f.end, fp.start, fp.end);
        // runs sharing both start alignments or both end alignments
        if a2 > a {
            if let Some(r) = ix.gamma(a, a2 - a) {
                if (lo..hi).contains(&r.period) {
                    push_filtered(ix, r, lo, hi, runs, pyrs);
                }
            }
        }
        if b2 > b {
            if let Some(r) = ix.gamma(b, b2 - b) {
                if (lo..hi).contains(&r.period) {
                    push_filtered(ix, r, lo, hi, runs, pyrs);
                }
            }
        }
        if a2 <= b + 1 {
            if let Ok(Some(py)) = pyramid_canonical(ix, f, fp) {
                if (lo..hi).contains(&py.max_layer.period) {
                    runs.push(py.max_layer);
                }
                if py.has_reg_period_in(lo, hi)
                    || (lo..hi).contains(&py.max_layer.period)
                {
                    pyrs.push(py);
                }
            }
        }
    }
}

fn push_filtered(
    ix: &QueryIndex,
    r: Run,
    lo: usize,
    hi: usize,
    runs: &mut Vec<Run>,
    pyrs: &mut Vec<Pyramid>,
) {
    debug_assert!((lo..hi).contains(&r.period));
    let _ = (lo, hi);
    match regular_layer_filter(ix, r) {
        Some(py) => pyrs.push(py),
        None => runs.push(r),
    }
}

/// The disjoint three-part representation of all runs.
pub fn compute_all_runs(p: &PackedText, ix: &QueryIndex, cfg: &TauConfig) -> RunsRepr {
    let n = p.len();
    let clusters = short_runs_tabulated(p, cfg);
    let taus = tau_runs(p, ix, cfg);
    let pmax_short = cfg.short_period_max();

    let mut explicit: Vec<Run> = Vec::new();
    let mut pyramids: Vec<Pyramid> = Vec::new();
    if n >= 2 {
        let q = cfg.q_cover();
        let x_min = q.ilog2();
        let x_max = n.ilog2();
        // tasks: (level, anchor range) chunks for balanced parallelism
        let mut tasks: Vec<(u32, usize, usize)> = Vec::new();
        for x in x_min..=x_max {
            let k = level_sample(x);
            let anchors = n / k;
            let per_task = (1usize << 14).max(1);
            let mut a = 0usize;
            while a < anchors {
                tasks.push((x, a, (a + per_task).min(anchors)));
                a += per_task;
            }
        }
        let run_task = |&(x, a0, a1): &(u32, usize, usize)| {
            let k = level_sample(x);
            let mut runs = Vec::new();
            let mut pyrs = Vec::new();
            let mut scratch = IpmScratch::default();
            for a in a0..a1 {
                let i = a * k;
                if i + k <= n {
                    sample_anchor(ix, i, k, x, &mut scratch, &mut runs, &mut pyrs);
                }
            }
            (runs, pyrs)
        };
        #[cfg(feature = "parallel")]
        let parts: Vec<(Vec<Run>, Vec<Pyramid>)> = tasks.par_iter().map(run_task).collect();
        #[cfg(not(feature = "parallel"))]
        let parts: Vec<(Vec<Run>, Vec<Pyramid>)> = tasks.iter().map(run_task).collect();
        for (r, py) in parts {
            explicit.extend(r);
            pyramids.extend(py);
        }
    }

    // trim periods already covered by the short-run and tau-run parts
    explicit.retain(|r| r.period > pmax_short);
    for py in &mut pyramids {
        py.trim_reg_periods_below(pmax_short + 1);
    }
    debug_assert!(pyramids.iter().all(|py| py.max_layer.period > pmax_short));

    explicit.extend(taus.into_iter().map(|(r, _)| r));
    rsort::sort_by_tuple(&mut explicit, (n + 1) as u64, |r| {
        [r.start as u64, r.end as u64]
    });
    explicit.dedup();

    rsort::sort_by_tuple(&mut pyramids, (n + 1) as u64, |py| {
        [
            py.f.start as u64,
            py.f.end as u64,
            py.fp.start as u64,
            py.fp.end as u64,
        ]
    });
    pyramids.dedup();

    RunsRepr {
        explicit_runs: explicit,
        clusters,
        pyramids,
    }
}
