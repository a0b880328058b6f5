//! SA-IS suffix array construction over integer alphabets, with Kasai LCP
//! and a block/sparse-table range-minimum structure.

const EMPTY: u32 = u32::MAX;

/// Suffix array of `text` (no sentinel in the output; empty suffix excluded).
pub fn suffix_array(text: &[u32]) -> Vec<u32> {
    let n = text.len();
    if n == 0 {
        return Vec::new();
    }
    assert!(n < u32::MAX as usize - 2, "text too long for u32 indexing");
    let max = *text.iter().max().unwrap() as usize;
    let s: Vec<u32>;
    let k;
    if max < 4 * n + 256 {
        s = text.iter().map(|&c| c + 1).chain(std::iter::once(0)).collect();
        k = max + 2;
    } else {
        // sparse alphabet: order-preserving compression
        let mut vals: Vec<u32> = text.to_vec();
        vals.sort_unstable();
        vals.dedup();
        s = text
            .iter()
            .map(|&c| vals.binary_search(&c).unwrap() as u32 + 1)
            .chain(std::iter::once(0))
            .collect();
        k = vals.len() + 2;
    }
    let sa = sais(&s, k);
    sa[1..].to_vec()
}

/// SA-IS for a string ending in a unique smallest character 0.
fn sais(s: &[u32], k: usize) -> Vec<u32> {
    let n = s.len();
    let mut sa = vec![EMPTY; n];
    if n == 1 {
        sa[0] = 0;
        return sa;
    }
    let mut is_s = vec![false; n];
    is_s[n - 1] = true;
    for i in (0..n - 1).rev() {
        is_s[i] = s[i] < s[i + 1] || (s[i] == s[i + 1] && is_s[i + 1]);
    }
    let is_lms = |i: usize| i > 0 && is_s[i] && !is_s[i - 1];

    let mut count = vec![0u32; k];
    for &c in s {
        count[c as usize] += 1;
    }

    // round 1: seed LMS positions in text order, induce
    seed_lms_text_order(s, &is_s, &count, &mut sa);
    induce(s, &is_s, &count, &mut sa);

    // name sorted LMS substrings
    let lms_in_text: Vec<u32> = (0..n).filter(|&i| is_lms(i)).map(|i| i as u32).collect();
    let m = lms_in_text.len();
    let mut name_of = vec![EMPTY; n];
    let mut names = 0u32;
    {
        let mut prev = EMPTY;
        for &j in sa.iter() {
            let j = j as usize;
            if !is_lms(j) {
                continue;
            }
            if prev != EMPTY && !lms_eq(s, &is_s, prev as usize, j) {
                names += 1;
            }
            name_of[j] = names;
            prev = j as u32;
        }
        names += 1; // count, not last index
    }

    let sorted_lms: Vec<u32> = if (names as usize) < m {
        let reduced: Vec<u32> = lms_in_text.iter().map(|&j| name_of[j as usize]).collect();
        let sa1 = sais(&reduced, names as usize);
        sa1.iter().map(|&r| lms_in_text[r as usize]).collect()
    } else {
        let mut v = vec![0u32; m];
        for &j in &lms_in_text {
            v[name_of[j as usize] as usize] = j;
        }
        v
    };

    // round 2: seed LMS in their sorted order, induce
    sa.fill(EMPTY);
    let mut tails = bucket_tails(&count);
    for &j in sorted_lms.iter().rev() {
        let c = s[j as usize] as usize;
        tails[c] -= 1;
        sa[tails[c] as usize] = j;
    }
    induce(s, &is_s, &count, &mut sa);
    sa
}

fn bucket_heads(count: &[u32]) -> Vec<u32> {
    let mut h = Vec::with_capacity(count.len());
    let mut sum = 0u32;
    for &c in count {
        h.push(sum);
        sum += c;
    }
    h
}

fn bucket_tails(count: &[u32]) -> Vec<u32> {
    let mut t = Vec::with_capacity(count.len());
    let mut sum = 0u32;
    for &c in count {
        sum += c;
        t.push(sum);
    }
    t
}

fn seed_lms_text_order(s: &[u32], is_s: &[bool], count: &[u32], sa: &mut [u32]) {
    let mut tails = bucket_tails(count);
    for i in 1..s.len() {
        if is_s[i] && !is_s[i - 1] {
            let c = s[i] as usize;
            tails[c] -= 1;
            sa[tails[c] as usize] = i as u32;
        }
    }
}

fn induce(s: &[u32], is_s: &[bool], count: &[u32], sa: &mut [u32]) {
    let n = s.len();
    let mut heads = bucket_heads(count);
    for i in 0..n {
        let j = sa[i];
        if j == EMPTY || j == 0 {
            continue;
        }
        let j = j as usize - 1;
        if !is_s[j] {
            let c = s[j] as usize;
            sa[heads[c] as usize] = j as u32;
            heads[c] += 1;
        }
    }
    let mut tails = bucket_tails(count);
    for i in (0..n).rev() {
        let j = sa[i];
        if j == EMPTY || j == 0 {
            continue;
        }
        let j = j as usize - 1;
        if is_s[j] {
            let c = s[j] as usize;
            tails[c] -= 1;
            sa[tails[c] as usize] = j as u32;
        }
    }
}

/// Equality of the LMS substrings starting at `a` and `b`.
fn lms_eq(s: &[u32], is_s: &[bool], a: usize, b: usize) -> bool {
    let n = s.len();
    if a == n - 1 || b == n - 1 {
        return a == b;
    }
    let is_lms = |i: usize| i > 0 && is_s[i] && !is_s[i - 1];
    let mut d = 0usize;
    loop {
        if s[a + d] != s[b + d] {
            return false;
        }
        d += 1;
        let (al, bl) = (is_lms(a + d), is_lms(b + d));
        if al || bl {
            return al && bl && s[a + d] == s[b + d];
        }
    }
}

/// Kasai's algorithm. `lcp[i] = lcp(suffix sa[i-1], suffix sa[i])`, `lcp[0]=0`.
pub fn lcp_array(text: &[u32], sa: &[u32], rank: &[u32]) -> Vec<u32> {
    let n = text.len();
    let mut lcp = vec![0u32; n];
    let mut k = 0usize;
    for i in 0..n {
        let r = rank[i] as usize;
        if r == 0 {
            k = 0;
            continue;
        }
        let j = sa[r - 1] as usize;
        while i + k < n && j + k < n && text[i + k] == text[j + k] {
            k += 1;
        }
        lcp[r] = k as u32;
        k = k.saturating_sub(1);
    }
    lcp
}

const RMQ_BLOCK: usize = 32;

/// Range-minimum (argmin) over a fixed array: block minima plus a sparse
/// table over the blocks, partial blocks scanned.
#[derive(Debug, Clone)]
pub struct Rmq {
    vals: Vec<u32>,
    // table[lvl][b] = index of min among blocks [b .. b + 2^lvl)
    table: Vec<Vec<u32>>,
}

impl Rmq {
    pub fn new(vals: Vec<u32>) -> Rmq {
        let n = vals.len();
        let nb = n.div_ceil(RMQ_BLOCK);
        let mut base = Vec::with_capacity(nb);
        for b in 0..nb {
            let lo = b * RMQ_BLOCK;
            let hi = (lo + RMQ_BLOCK).min(n);
            let mut best = lo;
            for i in lo + 1..hi {
                if vals[i] < vals[best] {
                    best = i;
                }
            }
            base.push(best as u32);
        }
        let levels = if nb <= 1 {
            1
        } else {
            (usize::BITS - (nb - 1).leading_zeros()) as usize + 1
        };
        let mut table = Vec::with_capacity(levels);
        table.push(base);
        for lvl in 1..levels {
            let half = 1usize << (lvl - 1);
            let prev = &table[lvl - 1];
            let len = nb.saturating_sub((1 << lvl) - 1);
            let mut cur = Vec::with_capacity(len);
            for b in 0..len {
                let x = prev[b];
                let y = prev[b + half];
                cur.push(if vals[y as usize] < vals[x as usize] { y } else { x });
            }
            table.push(cur);
        }
        Rmq { vals, table }
    }

    pub fn values(&self) -> &[u32] {
        &self.vals
    }

    /// Index of the leftmost-block minimum in `[l..=r]`.
    pub fn argmin(&self, l: usize, r: usize) -> usize {
        debug_assert!(l <= r && r < self.vals.len());
        let bl = l / RMQ_BLOCK;
        let br = r / RMQ_BLOCK;
        if bl == br {
            return self.scan(l, r);
        }
        let mut best = self.scan(l, (bl + 1) * RMQ_BLOCK - 1);
        let tail = self.scan(br * RMQ_BLOCK, r);
        if self.vals[tail] < self.vals[best] {
            best = tail;
        }
        if bl + 1 <= br - 1 {
            let mid = self.blocks_argmin(bl + 1, br - 1);
            if self.vals[mid] < self.vals[best] {
                best = mid;
            }
        }
        best
    }

    pub fn min(&self, l: usize, r: usize) -> u32 {
        self.vals[self.argmin(l, r)]
    }

    fn scan(&self, l: usize, r: usize) -> usize {
        let mut best = l;
        for i in l + 1..=r {
            if self.vals[i] < self.vals[best] {
                best = i;
            }
        }
        best
    }

    fn blocks_argmin(&self, bl: usize, br: usize) -> usize {
        let span = br - bl + 1;
        let lvl = (usize::BITS - 1 - span.leading_zeros()) as usize;
        let x = self.table[lvl][bl];
        let y = self.table[lvl][br + 1 - (1 << lvl)];
        (if self.vals[y as usize] < self.vals[x as usize] { y } else { x }) as usize
    }
}
