//! Acceptance suite: one test per criterion, each printing a PASS line with
//! the measured evidence (run with `--nocapture` to see them).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use squares_core::{
    analyze, build_sync, oracle, pyramid_canonical, PackedText, QueryIndex, Run, TauConfig,
};
use std::collections::HashSet;
use std::time::Instant;

fn packed(raw: &[u8], sigma: u32) -> PackedText {
    PackedText::encode(raw, sigma).unwrap()
}

fn pipeline_counts(raw: &[u8], sigma: u32) -> squares_core::SquareCounts {
    squares_core::count_distinct_squares(&packed(raw, sigma), None).unwrap()
}

fn ab_ba(m: usize) -> Vec<u8> {
    let mut raw = Vec::with_capacity(4 * m);
    for _ in 0..m {
        raw.extend_from_slice(&[0, 1]);
    }
    for _ in 0..m {
        raw.extend_from_slice(&[1, 0]);
    }
    raw
}

/// Every string over `[0..sigma)` of length in `[0..=max_n]`, in parallel.
fn for_each_string(sigma: u64, max_n: usize, f: impl Fn(&[u8]) + Sync) {
    for n in 0..=max_n {
        let total: u64 = sigma.pow(n as u32);
        (0..total).into_par_iter().for_each(|code| {
            let mut c = code;
            let raw: Vec<u8> = (0..n)
                .map(|_| {
                    let d = (c % sigma) as u8;
                    c /= sigma;
                    d
                })
                .collect();
            f(&raw);
        });
    }
}

#[test]
fn criterion_1_paper_example() {
    // (ab)^1000 (ba)^1000 has exactly 2000 distinct squares, in under 1 s.
    let raw = ab_ba(1000);
    let t = Instant::now();
    let counts = pipeline_counts(&raw, 2);
    let secs = t.elapsed().as_secs_f64();
    assert_eq!(counts.total(), 2000);
    assert!(secs < 1.0, "took {secs:.3}s");

    // at m = 8 the reported square set matches the brute-force oracle
    let raw = ab_ba(8);
    let p = packed(&raw, 2);
    let a = analyze(&p, TauConfig::for_text(raw.len(), 2)).unwrap();
    let total = a.counts().unwrap().total();
    let mut got: HashSet<Vec<u8>> = HashSet::new();
    for (s, h) in a.report(total).unwrap() {
        assert!(got.insert(raw[s..s + 2 * h].to_vec()), "duplicate reported");
    }
    assert_eq!(got, oracle::naive_distinct_squares(&raw).unwrap());
    println!("ACCEPTANCE 1: PASS (2000 squares in {secs:.3}s; m=8 report set exact)");
}

#[test]
fn criterion_2_and_7_exhaustive_oracle_equivalence() {
    // every binary string of length <= 16 and ternary string of length
    // <= 11: counts, breakdown, t = 3,4 power counts, and the reported
    // square set all equal the brute-force oracle exactly
    let t = Instant::now();
    let check = |raw: &[u8], sigma: u32| {
        let p = packed(raw, sigma);
        let a = analyze(&p, TauConfig::for_text(raw.len(), sigma)).unwrap();
        let got = a.counts().unwrap();
        let want = oracle::classify_squares(raw).unwrap();
        assert_eq!(
            (got.np, got.plain_p, got.special),
            (
                want.np.len() as u64,
                want.plain_p.len() as u64,
                want.special.len() as u64
            ),
            "breakdown mismatch on {raw:?}"
        );
        for t in [3u64, 4] {
            let want = oracle::naive_distinct_powers(raw, t as usize).unwrap().len() as u64;
            assert_eq!(a.count_powers(t).unwrap(), want, "powers t={t} on {raw:?}");
            assert!(want <= raw.len() as u64 / (t - 1), "power bound on {raw:?}");
        }
        // criterion 7, small-scale part: full report equals the oracle set
        let total = got.total();
        assert!(total <= raw.len() as u64, "square count bound on {raw:?}");
        if total > 0 {
            let mut set: HashSet<Vec<u8>> = HashSet::new();
            for (s, h) in a.report(total).unwrap() {
                assert!(
                    set.insert(raw[s..s + 2 * h].to_vec()),
                    "duplicate report on {raw:?}"
                );
            }
            let want: HashSet<Vec<u8>> = want
                .np
                .into_iter()
                .chain(want.plain_p)
                .chain(want.special)
                .collect();
            assert_eq!(set, want, "report set mismatch on {raw:?}");
        }
    };
    for_each_string(2, 16, |raw| check(raw, 2));
    for_each_string(3, 11, |raw| check(raw, 3));
    println!(
        "ACCEPTANCE 2: PASS (exhaustive binary <= 16 and ternary <= 11 in {:.1}s)",
        t.elapsed().as_secs_f64()
    );
    println!("ACCEPTANCE 7: PASS (reported sets equal oracle sets on all of the above)");
}

#[test]
fn criterion_3_randomized_oracle_equivalence() {
    let t = Instant::now();
    let mut cases: Vec<(Vec<u8>, u32)> = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for &sigma in &[2u32, 4, 26] {
        for _ in 0..67 {
            let n = 100_000;
            let raw: Vec<u8> = (0..n).map(|_| rng.gen_range(0..sigma) as u8).collect();
            cases.push((raw, sigma));
        }
    }
    // adversarial constructions
    for m in [500usize, 1000, 2000, 5000, 10000] {
        cases.push((ab_ba(m), 2));
    }
    for reps in [100usize, 400, 1600] {
        // Fig. 2 shape: (aab)^r aaab (aab)^r
        let mut raw: Vec<u8> = Vec::new();
        for _ in 0..reps {
            raw.extend_from_slice(&[0, 0, 1]);
        }
        raw.extend_from_slice(&[0, 0, 0, 1]);
        for _ in 0..reps {
            raw.extend_from_slice(&[0, 0, 1]);
        }
        cases.push((raw, 2));
        // Fig. 3 shape: ((ab)^7 a)^r
        let mut raw: Vec<u8> = Vec::new();
        for _ in 0..reps {
            for _ in 0..7 {
                raw.extend_from_slice(&[0, 1]);
            }
            raw.push(0);
        }
        cases.push((raw, 2));
    }
    for n in [1000usize, 10_000, 100_000] {
        cases.push((vec![0u8; n], 1)); // a^n
    }
    // Thue-Morse prefixes
    for n in [1024usize, 65_536, 100_000] {
        let raw: Vec<u8> = (0..n).map(|i| (i.count_ones() % 2) as u8).collect();
        cases.push((raw, 2));
    }
    for extra in 0..6usize {
        // pyramid-rich strings with small parameters
        let mut raw = Vec::new();
        let p = extra + 2;
        let unit: Vec<u8> = (0..p).map(|i| if i == 0 { 1 } else { (i % 2) as u8 }).collect();
        while raw.len() < 50_000 {
            raw.extend_from_slice(&unit);
        }
        cases.push((raw, 2));
    }
    assert!(cases.len() >= 220);
    cases.par_iter().for_each(|(raw, sigma)| {
        let got = pipeline_counts(raw, *sigma).total();
        let want = oracle::runs_based_distinct_squares(raw).unwrap();
        assert_eq!(got, want, "n={} sigma={sigma}", raw.len());
        assert!(got <= raw.len() as u64);
    });
    println!(
        "ACCEPTANCE 3: PASS ({} strings, totals equal the runs-based oracle, {:.1}s)",
        cases.len(),
        t.elapsed().as_secs_f64()
    );
}

/// All pyramids of `raw` by direct definition: every neighboring pair of
/// equal-period, equal-Lyndon-root runs with its layer set.
fn all_pyramids_naive(raw: &[u8], runs: &[Run]) -> Vec<(Run, Run, Vec<Run>)> {
    let lroot = |r: &Run| -> Vec<u8> {
        let root = &raw[r.start..r.start + r.period];
        (0..r.period)
            .map(|c| root[c..].iter().chain(root[..c].iter()).copied().collect::<Vec<u8>>())
            .min()
            .unwrap()
    };
    let mut out = Vec::new();
    for (i, &f) in runs.iter().enumerate() {
        for &fp in runs.iter().skip(i + 1) {
            let (f, fp) = if f.start <= fp.start { (f, fp) } else { (fp, f) };
            if f.period != fp.period || fp.start > f.end + 1 || lroot(&f) != lroot(&fp) {
                continue;
            }
            let layers = oracle::naive_pyramid(raw, f, fp);
            if !layers.is_empty() {
                out.push((f, fp, layers));
            }
        }
    }
    out
}

fn frag_squares_of_layer(raw: &[u8], layer: Run, f: Run, fp: Run) -> HashSet<Vec<u8>> {
    // squares generated by layer ∩ (F ∪ F')
    let lo = layer.start.max(f.start.min(fp.start));
    let hi = layer.end.min(f.end.max(fp.end));
    let mut out = HashSet::new();
    let per = layer.period;
    let mut m = 1;
    while lo + 2 * m * per <= hi + 1 {
        for s in lo..=hi + 1 - 2 * m * per {
            let sq = &raw[s..s + 2 * m * per];
            if sq[..m * per] == sq[m * per..] && naive_per(sq) == per {
                out.insert(sq.to_vec());
            }
        }
        m += 1;
    }
    out
}

fn naive_per(s: &[u8]) -> usize {
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

fn pyramid_type_naive(raw: &[u8], f: Run, fp: Run) -> (usize, Vec<u8>, Vec<u8>) {
    let p = f.period;
    let ov = (f.end + 1).saturating_sub(fp.start);
    let x = raw[f.end + 1 - p..f.end + 1].to_vec();
    let y = raw[fp.start..fp.start + p].to_vec();
    (ov, x, y)
}

#[test]
fn criterion_4_lemma_suites() {
    let t = Instant::now();

    // synchronizing sets: both defining conditions, exhaustively
    for_each_string(2, 14, |raw| {
        for tau in 1..=3usize {
            if 2 * tau > raw.len() {
                continue;
            }
            let p = packed(raw, 2);
            let ix = QueryIndex::build(&p);
            let s = build_sync(&p, &ix, tau).unwrap();
            let viol = oracle::validate_sync(raw, tau, &s.positions);
            assert!(viol.is_empty(), "raw={raw:?} tau={tau}: {viol:?}");
        }
    });

    // sparse-root equivalence: for period >= 2 tau, equal Lyndon roots iff
    // equal sparse-Lyndon roots
    for_each_string(2, 14, |raw| {
        for tau in 1..=2usize {
            if 2 * tau > raw.len() {
                continue;
            }
            let p = packed(raw, 2);
            let ix = QueryIndex::build(&p);
            let s = build_sync(&p, &ix, tau).unwrap();
            let runs: Vec<Run> = oracle::naive_runs(raw)
                .unwrap()
                .into_iter()
                .filter(|r| r.period >= 2 * tau)
                .collect();
            let sparse_root = |r: &Run| -> Vec<u8> {
                let (pos, _) = s
                    .sparse_rank_min(r.start, r.start + r.period - 1)
                    .expect("sparse position must exist for period >= 2 tau - 1");
                raw[pos..pos + r.period].to_vec()
            };
            let lroot = |r: &Run| -> Vec<u8> {
                let root = &raw[r.start..r.start + r.period];
                (0..r.period)
                    .map(|c| root[c..].iter().chain(root[..c].iter()).copied().collect())
                    .min()
                    .unwrap()
            };
            for i in 0..runs.len() {
                for j in i + 1..runs.len() {
                    if runs[i].period != runs[j].period {
                        continue;
                    }
                    assert_eq!(
                        lroot(&runs[i]) == lroot(&runs[j]),
                        sparse_root(&runs[i]) == sparse_root(&runs[j]),
                        "raw={raw:?} tau={tau} {:?} {:?}",
                        runs[i],
                        runs[j]
                    );
                }
            }
        }
    });

    // pyramid lemmas on all binary strings of length <= 18:
    // - canonical layer periods are k p + delta (their exact periods)
    // - squares of different pyramid types are disjoint
    // - |frag-squares(RegP)| = |RegP| (ov + 1)
    // - same type and fewer regular layers implies square-set containment
    // - a square is special iff some pyramid layer generates it
    for_each_string(2, 18, |raw| {
        let runs = oracle::naive_runs(raw).unwrap();
        let p = packed(raw, 2);
        let ix = QueryIndex::build(&p);
        let pyramids = all_pyramids_naive(raw, &runs);

        let mut fs_and_type: Vec<(HashSet<Vec<u8>>, (usize, Vec<u8>, Vec<u8>), usize, usize)> =
            Vec::new();
        for (f, fp, layers) in &pyramids {
            // canonical representation agrees with the layer enumeration
            let py = pyramid_canonical(&ix, *f, *fp)
                .expect("generators are neighboring equal-period runs")
                .expect("nonempty pyramid");
            let mut canon: Vec<Run> = py.reg_layers().collect();
            canon.push(py.max_layer);
            canon.sort_unstable();
            let mut want = layers.clone();
            want.sort_unstable();
            assert_eq!(canon, want, "canonical layers raw={raw:?} f={f:?} fp={fp:?}");
            for layer in py.reg_layers() {
                let k = (layer.period - py.delta) / py.period();
                assert_eq!(layer.period, k * py.period() + py.delta);
                assert_eq!(
                    ix.two_period(layer.start..layer.end + 1),
                    Some(layer.period),
                    "layer period raw={raw:?}"
                );
            }
            // max-layer is the unique layer of maximal period
            let maxper = layers.iter().map(|l| l.period).max().unwrap();
            assert_eq!(py.max_layer.period, maxper);
            assert_eq!(layers.iter().filter(|l| l.period == maxper).count(), 1);

            let mut fs = HashSet::new();
            let mut fs_reg = HashSet::new();
            for layer in layers {
                let sqs = frag_squares_of_layer(raw, *layer, *f, *fp);
                if layer.period != maxper {
                    fs_reg.extend(sqs.iter().cloned());
                }
                fs.extend(sqs);
            }
            let ov = (f.end + 1).saturating_sub(fp.start);
            assert_eq!(
                fs_reg.len(),
                (layers.len() - 1) * (ov + 1),
                "RegP formula raw={raw:?}"
            );
            fs_and_type.push((
                fs,
                pyramid_type_naive(raw, *f, *fp),
                layers.len() - 1,
                ov,
            ));
        }
        for i in 0..fs_and_type.len() {
            for j in i + 1..fs_and_type.len() {
                let (fi, ti, ri, _) = &fs_and_type[i];
                let (fj, tj, rj, _) = &fs_and_type[j];
                if ti != tj {
                    assert!(fi.is_disjoint(fj), "type disjointness raw={raw:?}");
                } else if ri < rj {
                    assert!(fi.is_subset(fj), "containment raw={raw:?}");
                } else if rj < ri {
                    assert!(fj.is_subset(fi), "containment raw={raw:?}");
                }
            }
        }
        // special squares are exactly the pyramid-generated ones
        let classified = oracle::classify_squares(raw).unwrap();
        let mut generated: HashSet<Vec<u8>> = HashSet::new();
        for (fs, _, _, _) in &fs_and_type {
            generated.extend(fs.iter().cloned());
        }
        assert_eq!(generated, classified.special, "special iff layer raw={raw:?}");
    });

    // squares(T) = frag-squares(Runs(T)), and the three-part representation
    // is exhaustively exact and disjoint (length <= 16)
    for_each_string(2, 16, |raw| {
        let runs = oracle::naive_runs(raw).unwrap();
        assert!(runs.len() <= raw.len());
        let mut from_runs: HashSet<Vec<u8>> = HashSet::new();
        for r in &runs {
            let mut m = 1;
            while r.start + 2 * m * r.period <= r.end + 1 {
                for s in r.start..=r.end + 1 - 2 * m * r.period {
                    let sq = &raw[s..s + 2 * m * r.period];
                    if naive_per(sq) == r.period {
                        from_runs.insert(sq.to_vec());
                    }
                }
                m += 1;
            }
        }
        assert_eq!(
            from_runs,
            oracle::naive_distinct_squares(raw).unwrap(),
            "squares from runs raw={raw:?}"
        );
        let p = packed(raw, 2);
        let ix = QueryIndex::build(&p);
        let cfg = TauConfig::for_text(raw.len(), 2);
        let repr = squares_core::compute_all_runs(&p, &ix, &cfg);
        let mut denoted = repr.denoted_runs();
        denoted.sort_unstable();
        let mut expect = runs.clone();
        expect.sort_unstable();
        assert!(denoted.windows(2).all(|w| w[0] != w[1]), "disjoint raw={raw:?}");
        assert_eq!(denoted, expect, "completeness raw={raw:?}");
    });

    println!(
        "ACCEPTANCE 4: PASS (sync validity, sparse-root equivalence, pyramid \
         lemmas <= 18, run-set exactness <= 16; {:.1}s, zero violations)",
        t.elapsed().as_secs_f64()
    );
}

#[test]
fn criterion_5_bounds() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut checked = 0usize;
    for &sigma in &[1u32, 2, 4, 26] {
        for _ in 0..25 {
            let n = rng.gen_range(1..3000usize);
            let raw: Vec<u8> = (0..n).map(|_| rng.gen_range(0..sigma) as u8).collect();
            let p = packed(&raw, sigma);
            let a = analyze(&p, TauConfig::for_text(n, sigma)).unwrap();
            let total = a.counts().unwrap().total();
            assert!(total <= n as u64, "squares bound n={n}");
            for t in [3u64, 4, 5] {
                assert!(
                    a.count_powers(t).unwrap() <= n as u64 / (t - 1),
                    "power bound n={n} t={t}"
                );
            }
            assert!(oracle::naive_runs(&raw).unwrap().len() <= n, "runs bound");
            checked += 1;
        }
    }
    // monotonicity: appending a character never decreases the total
    for _ in 0..20 {
        let n = rng.gen_range(2..400usize);
        let mut raw: Vec<u8> = (0..n).map(|_| rng.gen_range(0..2)).collect();
        let before = pipeline_counts(&raw, 2).total();
        raw.push(rng.gen_range(0..2));
        let after = pipeline_counts(&raw, 2).total();
        assert!(after >= before, "monotonicity");
    }
    println!("ACCEPTANCE 5: PASS (bounds hold on {checked} random strings + monotonicity)");
}

#[test]
fn criterion_6_performance_evidence() {
    // soft evidence, printed: full pipeline at n = 10^7 over sigma = 2, and
    // the packed tabulation scan against a byte-at-a-time scan of the same
    // blocks. Correctness is cross-checked at a smaller size.
    let n = 10_000_000usize;
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let raw: Vec<u8> = (0..n).map(|_| rng.gen_range(0..2)).collect();
    let p = packed(&raw, 2);

    let t = Instant::now();
    let a = analyze(&p, TauConfig::for_text(n, 2)).unwrap();
    let counts = a.counts().unwrap();
    let pipeline_secs = t.elapsed().as_secs_f64();
    assert!(counts.total() > 0 && counts.total() <= n as u64);

    // the tabulation comparison needs a tau that gives the table work
    let cfg = TauConfig::with(n, 2, 6, 1);
    let t = Instant::now();
    let clusters = squares_core::short_runs_tabulated(&p, &cfg);
    let tab_secs = t.elapsed().as_secs_f64();
    let denoted: u64 = clusters.iter().map(|c| (c.base_runs.len() * c.shifts.len()) as u64).sum();

    let t = Instant::now();
    let bytewise = bytewise_short_runs(&p, &cfg);
    let byte_secs = t.elapsed().as_secs_f64();
    assert_eq!(denoted, bytewise, "both scans must find the same runs");

    let ratio = byte_secs / tab_secs.max(1e-9);
    println!(
        "ACCEPTANCE 6: PASS (n=10^7: pipeline {pipeline_secs:.2}s, {} squares; \
         tabulation scan {tab_secs:.3}s vs bytewise {byte_secs:.3}s = {ratio:.1}x; \
         index construction is linear by design, so the total is not the \
         sublinear bound)",
        counts.total()
    );
    assert!(
        pipeline_secs < 30.0,
        "pipeline should finish in seconds, took {pipeline_secs:.1}s"
    );
    assert!(ratio >= 2.0, "tabulation speedup {ratio:.2}x below evidence floor");
}

fn bytewise_short_runs(p: &PackedText, cfg: &TauConfig) -> u64 {
    let tau = cfg.tau_runs;
    let pmax = tau / 3;
    if pmax == 0 || p.is_empty() {
        return 0;
    }
    let n = p.len();
    let h = (tau / 2).max(1);
    let bl = 7 * tau / 2;
    let mut chars: Vec<u32> = Vec::with_capacity(bl);
    let mut found = 0u64;
    let mut o = 0usize;
    while o < n + 2 {
        let end = (o + bl).min(n + 2);
        chars.clear();
        chars.extend((o..end).map(|t| p.at_signed(t as i64 - 1)));
        for r in squares_core::util::runs_in_window(&chars) {
            if r.start >= 1
                && r.start <= h
                && r.end + 2 <= chars.len()
                && r.period <= pmax
                && r.end - r.start + 1 < 3 * tau - 1
            {
                found += 1;
            }
        }
        o += h;
    }
    found
}

#[test]
fn criterion_7_report_soundness_large() {
    // the small-scale set equality is folded into criterion 2; here 10^4
    // sampled reported squares on a large random input are pairwise
    // distinct and verified via LCE
    let n = 100_000usize;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let raw: Vec<u8> = (0..n).map(|_| rng.gen_range(0..2)).collect();
    let p = packed(&raw, 2);
    let a = analyze(&p, TauConfig::for_text(n, 2)).unwrap();
    let total = a.counts().unwrap().total();
    let k = total.min(10_000);
    let rep = a.report(k).unwrap();
    assert_eq!(rep.len() as u64, k);
    for &(s, h) in &rep {
        assert!(a.ix.lce(s, s + h) >= h, "reported non-square at {s}");
    }
    let mut by_len: Vec<(usize, usize)> = rep.iter().map(|&(s, h)| (h, s)).collect();
    by_len.sort_unstable_by_key(|&(h, s)| (h, a.ix.suffix_rank(s)));
    for w in by_len.windows(2) {
        let ((h1, s1), (h2, s2)) = (w[0], w[1]);
        assert!(
            h1 != h2 || a.ix.lce(s1, s2) < 2 * h1,
            "duplicate reported square"
        );
    }
    println!("ACCEPTANCE 7 (large): PASS ({k} sampled reports distinct and verified)");
}
