//! Worst-case pswitch counts for the synthesis algorithms.

use std::collections::HashMap;

/// Smallest `L` with `base^L >= n` (0 for `n <= 1`).
pub fn ceil_log(base: u64, n: u64) -> u32 {
    assert!(base >= 2, "logarithm base must be at least 2");
    let mut power: u64 = 1;
    let mut l = 0;
    while power < n {
        power = power.saturating_mul(base);
        l += 1;
    }
    l
}

/// `f_{n,N}`: the binary algorithm's bound for denominator `2^n` and `N` states.
pub fn complexity_bound(n: u32, states: usize) -> u64 {
    denominator_bound(2, n, states)
}

/// `f_{n,N}` from its defining recursion: `f(n, 1) = 0`, `f(0, N) = 0`,
/// `f(n, N) = max_{1 <= i <= ceil(N/2)} f(n-1, i) + f(n-1, N-i+1) + 1`.
pub fn complexity_bound_recursive(n: u32, states: usize) -> u64 {
    fn go(n: u32, states: usize, memo: &mut HashMap<(u32, usize), u64>) -> u64 {
        if n == 0 || states <= 1 {
            return 0;
        }
        if let Some(&v) = memo.get(&(n, states)) {
            return v;
        }
        let v = (1..=states.div_ceil(2))
            .map(|i| go(n - 1, i, memo) + go(n - 1, states - i + 1, memo) + 1)
            .max()
            .unwrap();
        memo.insert((n, states), v);
        v
    }
    go(n, states, &mut HashMap::new())
}

/// Denominator-reduction bound for targets over `q^n` with `N` states:
/// `(N-1)(q-1)(n-L) + q^L - 1` with `L = ceil(log_q N)`, and `q^n - 1` when
/// `n < L`.
pub fn denominator_bound(q: u64, n: u32, states: usize) -> u64 {
    let l = ceil_log(q, states as u64);
    if n <= l {
        return q.pow(n) - 1;
    }
    (states as u64 - 1) * (q - 1) * u64::from(n - l) + q.pow(l) - 1
}

/// The denominator-reduction recursion: `f(n, 1) = 0`, `f(0, N) = 0`,
/// `f(n, N) = q - 1 + max sum_j f(n-1, i_j)` over `q` parts `i_j >= 1`
/// summing to `N + q - 1`.
pub fn denominator_bound_recursive(q: u64, n: u32, states: usize) -> u64 {
    let mut prev: Vec<u64> = vec![0; states + 1];
    for _ in 0..n {
        prev = (0..=states)
            .map(|m| {
                if m <= 1 {
                    0
                } else {
                    partition_max(&prev, q as usize, m) + q - 1
                }
            })
            .collect();
    }
    prev[states]
}

/// Largest `sum_j values[i_j]` over `parts` integers `i_j >= 1` summing to `states + parts - 1`.
fn partition_max(values: &[u64], parts: usize, states: usize) -> u64 {
    let total = states + parts - 1;
    let mut best: Vec<Option<u64>> = vec![None; total + 1];
    best[0] = Some(0);
    for _ in 0..parts {
        let mut next = vec![None; total + 1];
        for t in 0..=total {
            let Some(b) = best[t] else { continue };
            for i in 1..=states.min(total - t) {
                let v = b + values[i];
                if next[t + i].is_none_or(|x: u64| x < v) {
                    next[t + i] = Some(v);
                }
            }
        }
        best = next;
    }
    best[total].expect("a partition always exists")
}

/// Prime factorization by trial division, as `(prime, exponent)` in increasing order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut k = 0;
        while n.is_multiple_of(p) {
            n /= p;
            k += 1;
        }
        if k > 0 {
            out.push((p, k));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Sum of per-prime denominator-reduction bounds for denominator `d`.
pub fn composite_bound(d: u64, states: usize) -> u64 {
    factorize(d)
        .into_iter()
        .map(|(p, k)| denominator_bound(p, k, states))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn logs() {
        assert_eq!(ceil_log(2, 1), 0);
        assert_eq!(ceil_log(2, 2), 1);
        assert_eq!(ceil_log(2, 3), 2);
        assert_eq!(ceil_log(2, 9), 4);
        assert_eq!(ceil_log(3, 3), 1);
        assert_eq!(ceil_log(3, 4), 2);
    }

    #[test]
    fn bound_examples() {
        assert_eq!(complexity_bound(10, 2), 10);
        assert_eq!(complexity_bound(4, 9), 15);
        assert_eq!(complexity_bound(0, 7), 0);
        assert_eq!(complexity_bound(3, 4), 6);
        assert_eq!(complexity_bound_recursive(3, 3), 5);
        assert_eq!(complexity_bound_recursive(5, 1), 0);
        for states in 2..12 {
            assert_eq!(complexity_bound_recursive(1, states), 1);
        }
    }

    #[test]
    fn denominator_bounds() {
        assert_eq!(denominator_bound(3, 1, 3), 2);
        assert_eq!(denominator_bound(3, 2, 3), 6);
        assert_eq!(denominator_bound(5, 2, 3), 12);
        assert_eq!(denominator_bound(6, 2, 3), 15);
        assert_eq!(denominator_bound(3, 1, 4), 2);
        for n in 0..8 {
            for states in 1..10 {
                assert_eq!(denominator_bound(2, n, states), complexity_bound(n, states));
                assert_eq!(
                    denominator_bound_recursive(2, n, states),
                    complexity_bound_recursive(n, states)
                );
            }
        }
    }

    #[test]
    fn factors() {
        assert_eq!(factorize(1), vec![]);
        assert_eq!(factorize(6), vec![(2, 1), (3, 1)]);
        assert_eq!(factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(factorize(999_983), vec![(999_983, 1)]);
        assert_eq!(composite_bound(6, 3), 3);
    }
}
