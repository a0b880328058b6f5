//! Grouping runs by equal Lyndon roots. Small-period runs get true Lyndon
//! roots by minimal rotation; large-period runs get sparse-Lyndon roots,
//! anchored at the rank-minimal synchronizing position inside the first
//! period, which groups identically (equal sparse roots iff equal Lyndon
//! roots once the period is at least twice the synchronizing parameter).
//!
//! Pyramid types live here too: a pyramid is typed by its root group, the
//! generator overlap, and the rotation offsets of the boundary period
//! blocks, all derived from the representations in constant time.

use crate::error::{Error, Result};
use crate::index::QueryIndex;
use crate::pyramid::Pyramid;
use crate::rsort;
use crate::runs::Run;
use crate::sync::SyncSet;
use crate::util::minimal_rotation;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootKind {
    Lyndon,
    SparseLyndon,
}

/// `(lambda, e, alpha, beta)` of a periodic fragment: the fragment equals
/// `P lambda^e S` with `|P| = alpha < |lambda|`, `|S| = beta < |lambda|`,
/// and `lambda` referenced by a canonical occurrence, never copied.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RootRepr {
    pub root_pos: usize,
    pub root_len: usize,
    pub e: usize,
    pub alpha: usize,
    pub beta: usize,
    pub kind: RootKind,
}

impl RootRepr {
    pub fn new(start: usize, end: usize, period: usize, root_pos: usize, kind: RootKind) -> RootRepr {
        debug_assert!((start..start + period).contains(&root_pos));
        let len = end - start + 1;
        let alpha = root_pos - start;
        let e = (len - alpha) / period;
        let beta = len - alpha - e * period;
        RootRepr {
            root_pos,
            root_len: period,
            e,
            alpha,
            beta,
            kind,
        }
    }
}

/// A periodic fragment carrying its root representation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GroupMember {
    pub start: usize,
    pub end: usize,
    pub repr: RootRepr,
}

impl GroupMember {
    pub fn len(&self) -> usize {
        self.end - self.start + 1
    }

    pub fn period(&self) -> usize {
        self.repr.root_len
    }
}

/// Runs sharing one (sparse-)Lyndon root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunGroup {
    pub members: Vec<GroupMember>,
    pub kind: RootKind,
}

fn lyndon_member(ix: &QueryIndex, r: Run) -> GroupMember {
    let rot = minimal_rotation(&ix.text()[r.start..r.start + r.period]);
    GroupMember {
        start: r.start,
        end: r.end,
        repr: RootRepr::new(r.start, r.end, r.period, r.start + rot, RootKind::Lyndon),
    }
}

/// Groups runs with small periods by their true Lyndon roots (computed by
/// minimal rotation of the first period block).
pub fn group_small_period(runs: &[Run], ix: &QueryIndex) -> Vec<RunGroup> {
    let text = ix.text();
    let mut members: Vec<GroupMember> = runs.iter().map(|&r| lyndon_member(ix, r)).collect();
    members.sort_unstable_by(|x, y| {
        let (xp, yp) = (x.period(), y.period());
        xp.cmp(&yp).then_with(|| {
            text[x.repr.root_pos..x.repr.root_pos + xp]
                .cmp(&text[y.repr.root_pos..y.repr.root_pos + yp])
        })
    });
    let mut out: Vec<RunGroup> = Vec::new();
    for m in members {
        let same = out.last().map_or(false, |g: &RunGroup| {
            let prev = g.members[0];
            prev.period() == m.period()
                && text[prev.repr.root_pos..prev.repr.root_pos + prev.period()]
                    == text[m.repr.root_pos..m.repr.root_pos + m.period()]
        });
        if same {
            out.last_mut().unwrap().members.push(m);
        } else {
            out.push(RunGroup {
                members: vec![m],
                kind: RootKind::Lyndon,
            });
        }
    }
    out
}

/// Sparse-Lyndon position of a periodic fragment starting at `start` with
/// period `period`: the synchronizing position with rank-minimal suffix in
/// the first period window.
pub fn sparse_lyndon_position(
    sync: &SyncSet,
    start: usize,
    period: usize,
) -> Result<(usize, u32)> {
    sync.sparse_rank_min(start, start + period - 1)
        .ok_or(Error::EmptyWindow {
            lo: start,
            hi: start + period - 1,
        })
}

/// Groups runs with large periods by sparse-Lyndon roots: window endpoints
/// are matched against the synchronizing positions by sorted merges, the
/// rank-minimal position is a range-minimum per run, and a radix sort by
/// (period, rank) makes equal-root runs adjacent.
pub fn group_large_period(
    runs: &[Run],
    sync: &SyncSet,
    ix: &QueryIndex,
) -> Result<Vec<RunGroup>> {
    let n = ix.n();
    let m = sync.positions.len();
    // lo_idx[r]: first sync index with position >= run start, via one merge
    let mut by_start: Vec<(usize, usize)> =
        runs.iter().enumerate().map(|(i, r)| (r.start, i)).collect();
    rsort::sort_by_key_u64(&mut by_start, (n + 1) as u64, |t| t.0 as u64);
    let mut lo_idx = vec![0usize; runs.len()];
    {
        let mut si = 0usize;
        for &(s, i) in &by_start {
            while si < m && (sync.positions[si] as usize) < s {
                si += 1;
            }
            lo_idx[i] = si;
        }
    }
    let mut by_end: Vec<(usize, usize)> = runs
        .iter()
        .enumerate()
        .map(|(i, r)| (r.start + r.period - 1, i))
        .collect();
    rsort::sort_by_key_u64(&mut by_end, (n + 1) as u64, |t| t.0 as u64);
    let mut hi_idx = vec![0usize; runs.len()]; // one past the last valid index
    {
        let mut si = 0usize;
        for &(e, i) in &by_end {
            while si < m && sync.positions[si] as usize <= e {
                si += 1;
            }
            hi_idx[i] = si;
        }
    }

    let mut keyed: Vec<(Run, usize, u32)> = Vec::with_capacity(runs.len());
    for (i, &r) in runs.iter().enumerate() {
        if lo_idx[i] >= hi_idx[i] {
            return Err(Error::EmptyWindow {
                lo: r.start,
                hi: r.start + r.period - 1,
            });
        }
        let (pos, rank) = sync.rank_argmin(lo_idx[i], hi_idx[i] - 1);
        keyed.push((r, pos, rank));
    }
    rsort::sort_by_tuple(&mut keyed, (n + 1) as u64, |t| {
        [t.0.period as u64, t.2 as u64]
    });

    let mut out: Vec<RunGroup> = Vec::new();
    let mut prev: Option<(usize, usize)> = None; // (period, root position)
    for (r, pos, _) in keyed {
        let member = GroupMember {
            start: r.start,
            end: r.end,
            repr: RootRepr::new(r.start, r.end, r.period, pos, RootKind::SparseLyndon),
        };
        let same = matches!(prev, Some((pp, ppos)) if pp == r.period && ix.lce(ppos, pos) >= r.period);
        if same {
            out.last_mut().unwrap().members.push(member);
        } else {
            out.push(RunGroup {
                members: vec![member],
                kind: RootKind::SparseLyndon,
            });
        }
        prev = Some((r.period, pos));
    }
    Ok(out)
}

/// Type of a pyramid: two pyramids generate intersecting square sets only
/// when their types are equal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PyramidType {
    pub root_group: u64,
    pub ov: usize,
    pub c_x: usize,
    pub c_y: usize,
}

/// Everything pyramid typing needs.
pub struct GroupingContext<'a> {
    pub ix: &'a QueryIndex,
    pub sync: Option<&'a SyncSet>,
    pub small_period_max: usize,
}

/// Assigns every pyramid its type; root groups are canonicalized across the
/// whole batch so equal-root pyramids (small or large period) share an id.
pub fn pyramid_types(pyramids: &[Pyramid], ctx: &GroupingContext) -> Result<Vec<PyramidType>> {
    let ix = ctx.ix;
    let text = ix.text();
    let mut types = vec![
        PyramidType {
            root_group: 0,
            ov: 0,
            c_x: 0,
            c_y: 0
        };
        pyramids.len()
    ];
    let mut small: Vec<usize> = Vec::new();
    let mut large: Vec<(usize, usize, u32)> = Vec::new(); // (idx, root pos of f, rank)

    for (i, py) in pyramids.iter().enumerate() {
        let p = py.period();
        types[i].ov = py.ov();
        if p <= ctx.small_period_max {
            let rot_f = minimal_rotation(&text[py.f.start..py.f.start + p]);
            let rot_fp = minimal_rotation(&text[py.fp.start..py.fp.start + p]);
            types[i].c_x = (py.f.len() - rot_f) % p;
            types[i].c_y = (p - rot_fp) % p;
            small.push(i);
        } else {
            let sync = ctx.sync.ok_or(Error::MissingRepresentation)?;
            let (pos_f, rank_f) = sparse_lyndon_position(sync, py.f.start, p)
                .map_err(|_| Error::MissingRepresentation)?;
            let (pos_fp, _) = sparse_lyndon_position(sync, py.fp.start, p)
                .map_err(|_| Error::MissingRepresentation)?;
            let alpha_f = pos_f - py.f.start;
            let alpha_fp = pos_fp - py.fp.start;
            types[i].c_x = (py.f.len() - alpha_f) % p;
            types[i].c_y = (p - alpha_fp) % p;
            large.push((i, pos_f, rank_f));
        }
    }

    // canonical root ids: small roots by string, large roots by adjacency in
    // (period, rank) order with an LCE equality check
    small.sort_unstable_by(|&a, &b| {
        let (pa, pb) = (pyramids[a].period(), pyramids[b].period());
        let (ra, rb) = (
            pyramids[a].f.start + (pyramids[a].f.len() - types[a].c_x) % pa,
            pyramids[b].f.start + (pyramids[b].f.len() - types[b].c_x) % pb,
        );
        pa.cmp(&pb).then_with(|| text[ra..ra + pa].cmp(&text[rb..rb + pb]))
    });
    let mut next_id = 0u64;
    let mut prev_root: Option<(usize, usize)> = None;
    for &i in &small {
        let p = pyramids[i].period();
        let pos = pyramids[i].f.start + (pyramids[i].f.len() - types[i].c_x) % p;
        let same = matches!(prev_root, Some((pp, ppos)) if pp == p
            && text[ppos..ppos + pp] == text[pos..pos + p]);
        if !same {
            next_id += 1;
        }
        types[i].root_group = next_id;
        prev_root = Some((p, pos));
    }
    rsort::sort_by_tuple(&mut large, (ix.n() + 1) as u64, |t| {
        [pyramids[t.0].period() as u64, t.2 as u64]
    });
    let mut prev_root: Option<(usize, usize)> = None;
    for &(i, pos, _) in &large {
        let p = pyramids[i].period();
        let same =
            matches!(prev_root, Some((pp, ppos)) if pp == p && ix.lce(ppos, pos) >= p);
        if !same {
            next_id += 1;
        }
        types[i].root_group = next_id;
        prev_root = Some((p, pos));
    }
    Ok(types)
}
