//! Prefix-function based matching on cyclic sequences.

fn prefix_function<T: Eq>(pattern: &[T]) -> Vec<usize> {
    let mut pi = vec![0; pattern.len()];
    let mut k = 0;
    for i in 1..pattern.len() {
        while k > 0 && pattern[i] != pattern[k] {
            k = pi[k - 1];
        }
        if pattern[i] == pattern[k] {
            k += 1;
        }
        pi[i] = k;
    }
    pi
}

/// Start offsets `s` in `0..cycle.len()` with `cycle[s..] ++ cycle[..s]` beginning with `pattern`.
pub(crate) fn cyclic_occurrences<T: Eq>(cycle: &[T], pattern: &[T]) -> Vec<usize> {
    let n = cycle.len();
    if pattern.is_empty() {
        return (0..n.max(1)).collect();
    }
    if n == 0 || pattern.len() > n {
        return Vec::new();
    }
    let pi = prefix_function(pattern);
    let mut out = Vec::new();
    let mut k = 0;
    for i in 0..n + pattern.len() - 1 {
        let c = &cycle[i % n];
        while k > 0 && *c != pattern[k] {
            k = pi[k - 1];
        }
        if *c == pattern[k] {
            k += 1;
        }
        if k == pattern.len() {
            out.push(i + 1 - k);
            k = pi[k - 1];
        }
    }
    out
}

/// Smallest `r` with `a` rotated left by `r` equal to `b`.
pub(crate) fn rotation_offset<T: Eq>(a: &[T], b: &[T]) -> Option<usize> {
    if a.len() != b.len() {
        return None;
    }
    cyclic_occurrences(a, b).first().copied()
}

/// Smallest period `d` dividing `len` with `s = s[..d]` repeated.
pub(crate) fn primitive_period<T: Eq>(s: &[T]) -> usize {
    let n = s.len();
    if n == 0 {
        return 0;
    }
    let d = n - prefix_function(s)[n - 1];
    if n.is_multiple_of(d) {
        d
    } else {
        n
    }
}
