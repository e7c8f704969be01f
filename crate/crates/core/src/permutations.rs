//! Lexicographic permutation enumeration and the size guards that keep the
//! brute-force routines honest.

use std::ops::ControlFlow;

use thiserror::Error;

/// A brute-force routine was asked to run on an input above its hard limit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{what} is limited to {limit} vertices, got {n}")]
pub struct SizeGuardError {
    pub what: &'static str,
    pub n: usize,
    pub limit: usize,
}

pub(crate) fn guard(what: &'static str, n: usize, limit: usize) -> Result<(), SizeGuardError> {
    if n > limit {
        Err(SizeGuardError { what, n, limit })
    } else {
        Ok(())
    }
}

pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// Advances `seq` to the next permutation in lexicographic order. Returns
/// `false` (leaving `seq` sorted ascending) once the last one is passed.
pub fn next_permutation(seq: &mut [usize]) -> bool {
    if seq.len() < 2 {
        return false;
    }
    let mut i = seq.len() - 1;
    while i > 0 && seq[i - 1] >= seq[i] {
        i -= 1;
    }
    if i == 0 {
        seq.reverse();
        return false;
    }
    let mut j = seq.len() - 1;
    while seq[j] <= seq[i - 1] {
        j -= 1;
    }
    seq.swap(i - 1, j);
    seq[i..].reverse();
    true
}

/// Visits every permutation of `0..n` in lexicographic order.
pub fn for_each_permutation(
    n: usize,
    mut visit: impl FnMut(&[usize]) -> ControlFlow<()>,
) -> ControlFlow<()> {
    let mut seq: Vec<usize> = (0..n).collect();
    loop {
        visit(&seq)?;
        if !next_permutation(&mut seq) {
            return ControlFlow::Continue(());
        }
    }
}

/// Visits, in lexicographic order, the permutations of `0..n` whose first
/// entry is `first`. The `n` slices for `first = 0..n` concatenate to the
/// full lexicographic enumeration.
pub fn for_each_permutation_from(
    n: usize,
    first: usize,
    mut visit: impl FnMut(&[usize]) -> ControlFlow<()>,
) -> ControlFlow<()> {
    assert!(first < n, "first vertex {first} out of range for {n}");
    let mut seq: Vec<usize> = std::iter::once(first)
        .chain((0..n).filter(|&v| v != first))
        .collect();
    loop {
        visit(&seq)?;
        if !next_permutation(&mut seq[1..]) {
            return ControlFlow::Continue(());
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumerates_in_lexicographic_order() {
        let mut all = Vec::new();
        let _ = for_each_permutation(3, |p| {
            all.push(p.to_vec());
            ControlFlow::Continue(())
        });
        assert_eq!(
            all,
            vec![
                vec![0, 1, 2],
                vec![0, 2, 1],
                vec![1, 0, 2],
                vec![1, 2, 0],
                vec![2, 0, 1],
                vec![2, 1, 0]
            ]
        );
    }

    #[test]
    fn partitions_concatenate_to_full_enumeration() {
        let mut full = Vec::new();
        let _ = for_each_permutation(5, |p| {
            full.push(p.to_vec());
            ControlFlow::Continue(())
        });
        let mut parts = Vec::new();
        for first in 0..5 {
            let _ = for_each_permutation_from(5, first, |p| {
                parts.push(p.to_vec());
                ControlFlow::Continue(())
            });
        }
        assert_eq!(full.len() as u64, factorial(5));
        assert_eq!(full, parts);
    }

    #[test]
    fn degenerate_sizes() {
        let mut count = 0;
        let _ = for_each_permutation(0, |p| {
            assert!(p.is_empty());
            count += 1;
            ControlFlow::Continue(())
        });
        assert_eq!(count, 1);
        assert_eq!(factorial(0), 1);
        assert_eq!(factorial(10), 3_628_800);
    }

    #[test]
    fn guard_rejects_oversized_inputs() {
        assert!(guard("test", 10, 10).is_ok());
        let err = guard("test", 11, 10).unwrap_err();
        assert_eq!(err.to_string(), "test is limited to 10 vertices, got 11");
    }
}
