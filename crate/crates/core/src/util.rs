//! Small string primitives used across the crate: Z-function, prefix
//! function, minimal rotation, and run enumeration in short windows.

/// Z-array: `z[i]` = length of the longest common prefix of `s` and `s[i..]`.
/// `z[0] = |s|`.
pub fn z_function<T: Eq>(s: &[T]) -> Vec<usize> {
    let n = s.len();
    let mut z = vec![0usize; n];
    if n == 0 {
        return z;
    }
    z[0] = n;
    let (mut l, mut r) = (0usize, 0usize);
    for i in 1..n {
        if i < r {
            z[i] = z[i - l].min(r - i);
        }
        while i + z[i] < n && s[z[i]] == s[i + z[i]] {
            z[i] += 1;
        }
        if i + z[i] > r {
            l = i;
            r = i + z[i];
        }
    }
    z
}

/// KMP prefix function; `pi[i]` = longest proper border of `s[..=i]`.
pub fn prefix_function<T: Eq>(s: &[T]) -> Vec<usize> {
    let n = s.len();
    let mut pi = vec![0usize; n];
    for i in 1..n {
        let mut k = pi[i - 1];
        while k > 0 && s[i] != s[k] {
            k = pi[k - 1];
        }
        if s[i] == s[k] {
            k += 1;
        }
        pi[i] = k;
    }
    pi
}

/// Smallest period of `s` (`|s|` for the empty border case).
pub fn smallest_period<T: Eq>(s: &[T]) -> usize {
    if s.is_empty() {
        return 0;
    }
    let pi = prefix_function(s);
    s.len() - pi[s.len() - 1]
}

/// Booth's algorithm: index of the lexicographically minimal rotation.
pub fn minimal_rotation<T: Ord>(s: &[T]) -> usize {
    let n = s.len();
    if n <= 1 {
        return 0;
    }
    let at = |i: usize| &s[i % n];
    let (mut i, mut j, mut k) = (0usize, 1usize, 0usize);
    while i < n && j < n && k < n {
        match at(i + k).cmp(at(j + k)) {
            std::cmp::Ordering::Equal => k += 1,
            std::cmp::Ordering::Greater => {
                i = (i + k + 1).max(j + 1);
                k = 0;
            }
            std::cmp::Ordering::Less => {
                j = (j + k + 1).max(i + 1);
                k = 0;
            }
        }
    }
    i.min(j)
}

/// A run found inside a window, in window-relative coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct LocalRun {
    pub start: usize,
    pub end: usize, // inclusive
    pub period: usize,
}

/// All runs of a short string by direct maximal extension, O(n^2).
pub fn runs_in_window<T: Eq>(s: &[T]) -> Vec<LocalRun> {
    let n = s.len();
    let mut out = Vec::new();
    for p in 1..=n / 2 {
        let mut i = 0;
        while i + p < n {
            if s[i] != s[i + p] {
                i += 1;
                continue;
            }
            // maximal stretch of matches starting at i
            let mut j = i;
            while j + p < n && s[j] == s[j + p] {
                j += 1;
            }
            // fragment [i .. j+p-1] has period p and is maximal
            let (start, end) = (i, j + p - 1);
            if end - start + 1 >= 2 * p && smallest_period(&s[start..=end]) == p {
                out.push(LocalRun { start, end, period: p });
            }
            i = j + 1;
        }
    }
    out.sort();
    out.dedup();
    out
}
