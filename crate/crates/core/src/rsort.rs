//! Stable radix sort of integer keys in `[0..n)` via two bucket-sort passes
//! in base `ceil(sqrt(n))`, extended componentwise to tuples.

/// Stable sort of `items` by `key(item)`, all keys `< bound`.
pub fn sort_by_key_u64<T, F: Fn(&T) -> u64>(items: &mut Vec<T>, bound: u64, key: F) {
    if items.len() <= 1 {
        return;
    }
    let base = (bound.max(1) as f64).sqrt().ceil() as u64;
    let base = base.max(2);
    // low digit, then high digit; counting sort keeps each pass stable
    bucket_pass(items, base as usize, |t| (key(t) % base) as usize);
    bucket_pass(items, ((bound / base) + 1) as usize, |t| {
        (key(t) / base) as usize
    });
}

/// Stable lexicographic sort by a fixed-width tuple of keys, each `< bound`,
/// least-significant component last in `keys(item)`.
pub fn sort_by_tuple<T, const K: usize, F: Fn(&T) -> [u64; K]>(
    items: &mut Vec<T>,
    bound: u64,
    keys: F,
) {
    for c in (0..K).rev() {
        sort_by_key_u64(items, bound, |t| keys(t)[c]);
    }
}

fn bucket_pass<T, F: Fn(&T) -> usize>(items: &mut Vec<T>, buckets: usize, digit: F) {
    let mut counts = vec![0usize; buckets + 1];
    for it in items.iter() {
        counts[digit(it) + 1] += 1;
    }
    for b in 1..counts.len() {
        counts[b] += counts[b - 1];
    }
    let mut out: Vec<std::mem::MaybeUninit<T>> = Vec::with_capacity(items.len());
    // SAFETY: every slot is written exactly once below.
    #[allow(clippy::uninit_vec)]
    unsafe {
        out.set_len(items.len());
    }
    for it in items.drain(..) {
        let b = digit(&it);
        out[counts[b]].write(it);
        counts[b] += 1;
    }
    // SAFETY: all slots initialized; MaybeUninit<T> and T have the same layout.
    let mut out = std::mem::ManuallyDrop::new(out);
    let sorted = unsafe { Vec::from_raw_parts(out.as_mut_ptr() as *mut T, out.len(), out.capacity()) };
    *items = sorted;
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn sorts_and_stable() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let n = rng.gen_range(0..500usize);
            let bound = rng.gen_range(1..1000u64);
            let mut v: Vec<(u64, usize)> = (0..n)
                .map(|i| (rng.gen_range(0..bound), i))
                .collect();
            let mut expect = v.clone();
            expect.sort_by_key(|&(k, i)| (k, i)); // stable order == by (key, original index)
            sort_by_key_u64(&mut v, bound, |t| t.0);
            assert_eq!(v, expect);
        }
    }

    #[test]
    fn sorts_tuples() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(12);
        let mut v: Vec<[u64; 3]> = (0..1000)
            .map(|_| {
                [
                    rng.gen_range(0..30),
                    rng.gen_range(0..30),
                    rng.gen_range(0..30),
                ]
            })
            .collect();
        let mut expect = v.clone();
        expect.sort();
        sort_by_tuple(&mut v, 30, |t| *t);
        assert_eq!(v, expect);
    }
}
