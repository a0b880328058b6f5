//! Counting distinct squares: non-primitively-rooted squares, plain
//! primitively-rooted squares, and special squares, plus k-reporting and
//! distinct t-th powers.
//!
//! Per root group with root length `p`, exponent-`e` squares are rotations
//! of the root raised to `2e`; intermediate exponents contribute all `p`
//! rotations, the top exponent a union of rotation intervals. Special
//! squares are counted per pyramid type from the tallest pyramids, their
//! max-layers cut into windows around the subperiod breaks.

use crate::error::{Error, Result};
use crate::grouping::{
    group_large_period, group_small_period, pyramid_types, GroupingContext, PyramidType,
    RunGroup,
};
use crate::index::QueryIndex;
use crate::packed::{PackedText, TauConfig};
use crate::runs::{compute_all_runs, Run, RunsRepr};
use crate::sync::{build_sync, SyncSet};
use std::collections::HashMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SquareCounts {
    pub np: u64,
    pub plain_p: u64,
    pub special: u64,
}

impl SquareCounts {
    pub fn total(&self) -> u64 {
        self.np + self.plain_p + self.special
    }
}

/// A periodic fragment viewed against its group's root occurrence.
#[derive(Debug, Clone, Copy)]
struct FragView {
    start: usize,
    len: usize,
    root_pos: usize,
}

impl FragView {
    /// Rotation interval of exponent-`e` `t`-th powers this fragment
    /// generates: `(first rotation, count)`, count possibly >= p (all).
    fn interval(&self, p: usize, e: usize, t: usize) -> Option<(usize, usize)> {
        let total = t * e * p;
        if self.len < total {
            return None;
        }
        let cnt = self.len - total + 1;
        let c0 = ((self.start as i64 - self.root_pos as i64).rem_euclid(p as i64)) as usize;
        Some((c0, cnt))
    }
}

/// Disjoint covered rotation segment `[lo..hi)` owned by the view that
/// first covers it.
#[derive(Debug, Clone, Copy)]
struct Seg {
    lo: usize,
    hi: usize,
    owner: usize,
}

fn union_segments(p: usize, items: &[(usize, usize, usize)]) -> Vec<Seg> {
    // split cyclic intervals into linear ones
    let mut lin: Vec<Seg> = Vec::with_capacity(items.len() * 2);
    for &(c0, cnt, owner) in items {
        if cnt >= p {
            lin.clear();
            lin.push(Seg { lo: 0, hi: p, owner });
            break;
        }
        let hi = c0 + cnt;
        if hi <= p {
            lin.push(Seg { lo: c0, hi, owner });
        } else {
            lin.push(Seg { lo: c0, hi: p, owner });
            lin.push(Seg { lo: 0, hi: hi - p, owner });
        }
    }
    lin.sort_unstable_by_key(|s| s.lo);
    let mut out: Vec<Seg> = Vec::with_capacity(lin.len());
    let mut cur = 0usize;
    for s in lin {
        let lo = s.lo.max(cur);
        if lo < s.hi {
            out.push(Seg { lo, hi: s.hi, owner: s.owner });
            cur = s.hi;
        }
    }
    out
}

fn union_count(p: usize, items: &[(usize, usize, usize)]) -> u64 {
    union_segments(p, items)
        .iter()
        .map(|s| (s.hi - s.lo) as u64)
        .sum()
}

fn top_exponent(views: &[FragView], p: usize, t: usize) -> usize {
    views.iter().map(|v| v.len / (t * p)).max().unwrap_or(0)
}

/// Smallest `s >= start` with `(s - root_pos) mod p == c`.
fn rotation_start(start: usize, root_pos: usize, p: usize, c: usize) -> usize {
    start + (root_pos % p + c + p - start % p) % p
}

fn top_items(views: &[FragView], p: usize, e: usize, t: usize) -> Vec<(usize, usize, usize)> {
    views
        .iter()
        .enumerate()
        .filter(|(_, v)| v.len / (t * p) == e)
        .filter_map(|(i, v)| v.interval(p, e, t).map(|(c0, cnt)| (c0, cnt, i)))
        .collect()
}

/// Distinct non-primitively-rooted squares generated by one group.
fn np_part(views: &[FragView], p: usize) -> u64 {
    let beta = top_exponent(views, p, 2);
    if beta < 2 {
        return 0;
    }
    p as u64 * (beta as u64 - 2) + union_count(p, &top_items(views, p, beta, 2))
}

/// Distinct primitively-rooted squares (rotations of the squared root).
fn p_part(views: &[FragView], p: usize) -> u64 {
    let beta = top_exponent(views, p, 2);
    if beta >= 2 {
        p as u64
    } else if beta == 1 {
        union_count(p, &top_items(views, p, 1, 2))
    } else {
        0
    }
}

/// Distinct t-th powers generated by one group.
fn power_part(views: &[FragView], p: usize, t: usize) -> u64 {
    let beta = top_exponent(views, p, t);
    if beta == 0 {
        return 0;
    }
    p as u64 * (beta as u64 - 1) + union_count(p, &top_items(views, p, beta, t))
}

/// Numbers of distinct p-squares and np-squares generated by the periodic
/// fragments of one root group.
pub fn count_group(group: &RunGroup) -> (u64, u64) {
    let views = original_views(group);
    let p = group.members[0].period();
    (p_part(&views, p), np_part(&views, p))
}

fn original_views(group: &RunGroup) -> Vec<FragView> {
    group
        .members
        .iter()
        .map(|m| FragView {
            start: m.start,
            len: m.len(),
            root_pos: m.repr.root_pos,
        })
        .collect()
}

// ---- max-layer geometry ---------------------------------------------------

/// Break structure of a max-layer: the subperiod-`p` stretches tile the
/// layer with junctions of consecutive mismatch positions repeating with
/// the layer period.
struct MaxLayerGeo {
    q: usize,
    p: usize,
    ms: usize,
    me: usize,
    t0: usize,
    t_last: usize,
    g: usize, // number of junctions; stretches are indexed [0..=g]
    x0: usize,
    yg: usize,
}

impl MaxLayerGeo {
    fn compute(ix: &QueryIndex, m: Run, p: usize) -> Option<MaxLayerGeo> {
        let (ms, me, q) = (m.start, m.end, m.period);
        if q <= p || m.len() < 2 * q {
            return None;
        }
        let t0 = ms + ix.lce(ms, ms + p);
        if t0 + p > me {
            return None;
        }
        let l = ix.lce_rev(me as i64, (me - p) as i64);
        let t_last = me - p - l;
        if t_last < t0 {
            return None;
        }
        let g = (t_last - t0) / q + 1;
        let x0 = if t0 >= p {
            ix.gamma(t0 - p, p).map(|r| r.start).unwrap_or(ms)
        } else {
            ms
        };
        let yg = ix.gamma(t_last + 1, p).map(|r| r.end).unwrap_or(me);
        Some(MaxLayerGeo {
            q,
            p,
            ms,
            me,
            t0,
            t_last,
            g,
            x0,
            yg,
        })
    }

    /// Extent of stretch `j` for `j` in `[0..=g]`.
    fn stretch(&self, j: usize) -> (usize, usize) {
        if j == 0 {
            (self.x0, self.t0 + self.p - 1)
        } else if j == self.g {
            (self.t_last + 1, self.yg)
        } else {
            (
                self.t_last - (self.g - j) * self.q + 1,
                self.t0 + j * self.q + self.p - 1,
            )
        }
    }

    /// Windows whose exponent-1 squares are exactly the special squares of
    /// the max-layer (halves inside one stretch), deduplicated.
    fn special_windows(&self) -> Vec<(usize, usize)> {
        let mut js = vec![0usize, 1, self.g.saturating_sub(1), self.g];
        js.sort_unstable();
        js.dedup();
        let mut out = Vec::new();
        for j in js {
            if j > self.g {
                continue;
            }
            let (x, y) = self.stretch(j);
            let lo = x.max(self.ms);
            let hi = (y + self.q).min(self.me);
            if hi >= lo && hi - lo + 1 >= 2 * self.q {
                out.push((lo, hi));
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Windows whose exponent-1 squares are exactly the plain squares of
    /// the max-layer (halves spanning a junction), deduplicated.
    fn plain_windows(&self) -> Vec<(usize, usize)> {
        let mut is = vec![0usize, 1, self.g.saturating_sub(2), self.g.saturating_sub(1)];
        is.sort_unstable();
        is.dedup();
        let mut out = Vec::new();
        for i in is {
            if i + 1 > self.g {
                continue; // junction i sits between stretches i and i+1
            }
            let y_i = self.stretch(i).1;
            let lo = (y_i + 2).saturating_sub(self.q).max(self.ms);
            let hi = if i + 2 <= self.g {
                (self.stretch(i + 2).0 + self.q - 2).min(self.me)
            } else {
                self.me
            };
            if hi >= lo && hi - lo + 1 >= 2 * self.q {
                out.push((lo, hi));
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }
}

// ---- the pipeline ----------------------------------------------------------

/// Everything derived from one text: index, synchronizing set, run
/// representation, and root groups.
pub struct Analysis {
    pub cfg: TauConfig,
    pub ix: QueryIndex,
    pub sync: Option<SyncSet>,
    pub repr: RunsRepr,
    pub groups: Vec<RunGroup>,
    /// max-layer extent -> subperiod
    max_layers: HashMap<(usize, usize), usize>,
    /// run extent -> (group index, root position)
    member_of: HashMap<(usize, usize), (usize, usize)>,
}

pub fn analyze(p: &PackedText, cfg: TauConfig) -> Result<Analysis> {
    let n = p.len();
    let ix = QueryIndex::build(p);
    let sync = if n >= 2 * cfg.tau_sync {
        Some(build_sync(p, &ix, cfg.tau_sync)?)
    } else {
        None
    };
    let repr = compute_all_runs(p, &ix, &cfg);

    let cutoff = 2 * cfg.tau_sync;
    let mut small: Vec<Run> = Vec::new();
    let mut large: Vec<Run> = Vec::new();
    for &r in repr
        .explicit_runs
        .iter()
        .chain(repr.clusters.iter().flat_map(|c| c.base_runs.iter()))
    {
        if r.period <= cutoff {
            small.push(r);
        } else {
            large.push(r);
        }
    }
    let mut groups = group_small_period(&small, &ix);
    if !large.is_empty() {
        let sync_ref = sync.as_ref().ok_or(Error::MissingRepresentation)?;
        groups.extend(group_large_period(&large, sync_ref, &ix)?);
    }

    let mut max_layers = HashMap::new();
    for py in &repr.pyramids {
        max_layers.insert((py.max_layer.start, py.max_layer.end), py.period());
    }
    let mut member_of = HashMap::new();
    for (gi, g) in groups.iter().enumerate() {
        for m in &g.members {
            member_of.insert((m.start, m.end), (gi, m.repr.root_pos));
        }
    }

    Ok(Analysis {
        cfg,
        ix,
        sync,
        repr,
        groups,
        max_layers,
        member_of,
    })
}

impl Analysis {
    fn plainified_views(&self, group: &RunGroup) -> Vec<FragView> {
        let mut out = Vec::with_capacity(group.members.len());
        for m in &group.members {
            let q = m.period();
            if let Some(&p) = self.max_layers.get(&(m.start, m.end)) {
                let run = Run { start: m.start, end: m.end, period: q };
                if let Some(geo) = MaxLayerGeo::compute(&self.ix, run, p) {
                    for (lo, hi) in geo.plain_windows() {
                        out.push(FragView {
                            start: lo,
                            len: hi - lo + 1,
                            root_pos: m.repr.root_pos,
                        });
                    }
                    continue;
                }
                debug_assert!(false, "max-layer geometry must exist");
            }
            out.push(FragView {
                start: m.start,
                len: m.len(),
                root_pos: m.repr.root_pos,
            });
        }
        out
    }

    /// Pyramid type classes as (class member indices) with the tallest
    /// regular-layer count per class.
    fn type_classes(&self) -> Result<Vec<Vec<usize>>> {
        if self.repr.pyramids.is_empty() {
            return Ok(Vec::new());
        }
        let ctx = GroupingContext {
            ix: &self.ix,
            sync: self.sync.as_ref(),
            small_period_max: 2 * self.cfg.tau_sync,
        };
        let types: Vec<PyramidType> = pyramid_types(&self.repr.pyramids, &ctx)?;
        let mut order: Vec<usize> = (0..types.len()).collect();
        order.sort_unstable_by_key(|&i| types[i]);
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for (t, &i) in order.iter().enumerate() {
            if t == 0 || types[i] != types[order[t - 1]] {
                classes.push(Vec::new());
            }
            classes.last_mut().unwrap().push(i);
        }
        Ok(classes)
    }

    /// Kept max-layers after the per-type tallest filter: extent -> subper.
    fn kept_max_layers(&self, classes: &[Vec<usize>]) -> Vec<(Run, usize)> {
        let mut kept: Vec<(Run, usize)> = Vec::new();
        for class in classes {
            let rmax = class
                .iter()
                .map(|&i| self.repr.pyramids[i].reg_count())
                .max()
                .unwrap();
            for &i in class {
                let py = &self.repr.pyramids[i];
                if py.reg_count() == rmax {
                    kept.push((py.max_layer, py.period()));
                }
            }
        }
        kept.sort_unstable_by_key(|(r, _)| (r.start, r.end));
        kept.dedup_by_key(|(r, _)| (r.start, r.end));
        kept
    }

    /// Special-square window items grouped by the max-layer's root group.
    fn special_window_items(
        &self,
        kept: &[(Run, usize)],
    ) -> HashMap<usize, Vec<(FragView, usize)>> {
        let mut by_group: HashMap<usize, Vec<(FragView, usize)>> = HashMap::new();
        for &(m, p) in kept {
            let Some(&(gi, root_pos)) = self.member_of.get(&(m.start, m.end)) else {
                debug_assert!(false, "max-layer {m:?} missing from groups");
                continue;
            };
            let Some(geo) = MaxLayerGeo::compute(&self.ix, m, p) else {
                debug_assert!(false, "max-layer geometry must exist");
                continue;
            };
            for (lo, hi) in geo.special_windows() {
                by_group.entry(gi).or_default().push((
                    FragView {
                        start: lo,
                        len: hi - lo + 1,
                        root_pos,
                    },
                    m.period,
                ));
            }
        }
        by_group
    }

    pub fn counts(&self) -> Result<SquareCounts> {
        let mut np = 0u64;
        let mut plain = 0u64;
        for g in &self.groups {
            let p = g.members[0].period();
            np += np_part(&original_views(g), p);
            plain += p_part(&self.plainified_views(g), p);
        }

        let classes = self.type_classes()?;
        let mut special = 0u64;
        for class in &classes {
            let py = &self.repr.pyramids[class[0]];
            let rmax = class
                .iter()
                .map(|&i| self.repr.pyramids[i].reg_count())
                .max()
                .unwrap();
            special += rmax as u64 * (py.ov() as u64 + 1);
        }
        let kept = self.kept_max_layers(&classes);
        for (_, items) in self.special_window_items(&kept) {
            let q = items[0].1;
            let views: Vec<FragView> = items.iter().map(|(v, _)| *v).collect();
            debug_assert!(views.iter().all(|v| v.len < 4 * q));
            special += union_count(
                q,
                &views
                    .iter()
                    .enumerate()
                    .filter_map(|(i, v)| v.interval(q, 1, 2).map(|(c0, cnt)| (c0, cnt, i)))
                    .collect::<Vec<_>>(),
            );
        }

        Ok(SquareCounts {
            np,
            plain_p: plain,
            special,
        })
    }

    /// Distinct t-th powers for `t >= 3`: regular layers generate none, so
    /// the group machinery over explicit runs and clusters suffices.
    pub fn count_powers(&self, t: u64) -> Result<u64> {
        if t < 3 {
            return Err(Error::InvalidExponent(t));
        }
        let t = t as usize;
        let mut total = 0u64;
        for g in &self.groups {
            let p = g.members[0].period();
            total += power_part(&original_views(g), p, t);
        }
        Ok(total)
    }

    /// Reports `k` distinct squares as `(start, half_length)` occurrences.
    pub fn report(&self, k: u64) -> Result<Vec<(usize, usize)>> {
        let total = self.counts()?.total();
        if k < 1 || k > total {
            return Err(Error::KTooLarge { k, total });
        }
        let k = k as usize;
        let mut out: Vec<(usize, usize)> = Vec::with_capacity(k);

        let emit_union = |views: &[FragView], p: usize, e: usize, out: &mut Vec<(usize, usize)>| {
            let items: Vec<(usize, usize, usize)> = views
                .iter()
                .enumerate()
                .filter(|(_, v)| v.len / (2 * p) == e)
                .filter_map(|(i, v)| v.interval(p, e, 2).map(|(c0, cnt)| (c0, cnt, i)))
                .collect();
            for seg in union_segments(p, &items) {
                for c in seg.lo..seg.hi {
                    if out.len() == k {
                        return;
                    }
                    let v = views[seg.owner];
                    let s = rotation_start(v.start, v.root_pos, p, c);
                    debug_assert!(s + 2 * e * p <= v.start + v.len);
                    out.push((s, e * p));
                }
            }
        };

        // np squares: full families then the top exponent
        for g in &self.groups {
            let p = g.members[0].period();
            let views = original_views(g);
            let beta = top_exponent(&views, p, 2);
            if beta < 2 {
                continue;
            }
            let attainer = views.iter().find(|v| v.len / (2 * p) == beta).unwrap();
            for e in 2..beta {
                for c in 0..p {
                    if out.len() == k {
                        return Ok(out);
                    }
                    out.push((rotation_start(attainer.start, attainer.root_pos, p, c), e * p));
                }
            }
            emit_union(&views, p, beta, &mut out);
            if out.len() == k {
                return Ok(out);
            }
        }

        // plain p-squares
        for g in &self.groups {
            let p = g.members[0].period();
            let views = self.plainified_views(g);
            let beta = top_exponent(&views, p, 2);
            if beta >= 2 {
                let attainer = views.iter().find(|v| v.len / (2 * p) == beta).unwrap();
                for c in 0..p {
                    if out.len() == k {
                        return Ok(out);
                    }
                    out.push((rotation_start(attainer.start, attainer.root_pos, p, c), p));
                }
            } else if beta == 1 {
                emit_union(&views, p, 1, &mut out);
                if out.len() == k {
                    return Ok(out);
                }
            }
        }

        // special squares: regular layers of the tallest pyramid per type,
        // then max-layer windows
        let classes = self.type_classes()?;
        for class in &classes {
            let &rep = class
                .iter()
                .max_by_key(|&&i| self.repr.pyramids[i].reg_count())
                .unwrap();
            let py = &self.repr.pyramids[rep];
            for layer in py.reg_layers() {
                for x in 0..=py.ov() {
                    if out.len() == k {
                        return Ok(out);
                    }
                    out.push((layer.start + x, layer.period));
                }
            }
        }
        let kept = self.kept_max_layers(&classes);
        for (_, items) in self.special_window_items(&kept) {
            let q = items[0].1;
            let views: Vec<FragView> = items.iter().map(|(v, _)| *v).collect();
            emit_union(&views, q, 1, &mut out);
            if out.len() == k {
                return Ok(out);
            }
        }

        debug_assert_eq!(out.len(), k);
        Ok(out)
    }
}

/// Full pipeline: index, synchronizing set, runs, grouping, counting.
pub fn count_distinct_squares(p: &PackedText, cfg: Option<TauConfig>) -> Result<SquareCounts> {
    let cfg = cfg.unwrap_or_else(|| TauConfig::for_text(p.len(), p.sigma()));
    analyze(p, cfg)?.counts()
}

/// `k` pairwise-distinct squares, each as one `(start, half_length)`
/// occurrence.
pub fn report_squares(p: &PackedText, k: u64) -> Result<Vec<(usize, usize)>> {
    let cfg = TauConfig::for_text(p.len(), p.sigma());
    analyze(p, cfg)?.report(k)
}

/// Number of distinct t-th powers, `t >= 3`.
pub fn count_powers(p: &PackedText, t: u64) -> Result<u64> {
    let cfg = TauConfig::for_text(p.len(), p.sigma());
    analyze(p, cfg)?.count_powers(t)
}
