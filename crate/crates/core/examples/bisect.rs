use rand::{Rng, SeedableRng};
use squares_core::*;

fn counts(raw: &[u8]) -> u64 {
    let p = PackedText::encode(raw, 2).unwrap();
    count_distinct_squares(&p, None).unwrap().total()
}

fn main() {
    let mut bad: Option<Vec<u8>> = None;
    'search: for seed in 0..50u64 {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        for n in [500usize, 2000, 8000, 30000, 100000] {
            let raw: Vec<u8> = (0..n).map(|_| rng.gen_range(0..2)).collect();
            let got = counts(&raw);
            let want = oracle::runs_based_distinct_squares(&raw).unwrap();
            if got != want {
                eprintln!("MISMATCH seed={seed} n={n}: got {got} want {want}");
                bad = Some(raw);
                break 'search;
            }
        }
    }
    let Some(mut raw) = bad else { eprintln!("no mismatch found"); return; };
    // shrink: try halves, then chunk removal, then single deletions
    let check = |r: &[u8]| -> bool {
        if r.len() < 2 { return false; }
        let naive_ok = r.len() <= 3000;
        let want = if naive_ok {
            oracle::naive_distinct_squares(r).unwrap().len() as u64
        } else {
            oracle::runs_based_distinct_squares(r).unwrap()
        };
        counts(r) != want
    };
    let mut chunk = raw.len() / 2;
    while chunk >= 1 {
        let mut i = 0;
        while i < raw.len() {
            let mut cand = raw.clone();
            let end = (i + chunk).min(cand.len());
            cand.drain(i..end);
            if check(&cand) {
                raw = cand;
            } else {
                i += chunk;
            }
        }
        chunk /= 2;
    }
    eprintln!("shrunk to n={}: {:?}", raw.len(), raw);
    let p = PackedText::encode(&raw, 2).unwrap();
    let a = analyze(&p, TauConfig::for_text(raw.len(), 2)).unwrap();
    let c = a.counts().unwrap();
    eprintln!("pipeline: np={} plain={} special={} total={}", c.np, c.plain_p, c.special, c.total());
    if raw.len() <= 3000 {
        let want = oracle::classify_squares(&raw).unwrap();
        eprintln!("oracle:   np={} plain={} special={}", want.np.len(), want.plain_p.len(), want.special.len());
    }
    eprintln!("repr stats: {:?}", a.repr.stats());
}
