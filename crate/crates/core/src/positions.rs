//! Indexing of upper-triangle entry positions.
//!
//! Position order is row-major over the strict upper triangle:
//! (1,2), (1,3), ..., (1,n), (2,3), ..., (n-1,n). Vertices are 1-based
//! throughout. The same order indexes quiver entries, sign-pattern
//! components and polynomial variables.

/// Number of upper-triangle positions for an `n`-vertex quiver.
pub fn entry_count(n: usize) -> usize {
    n * (n - 1) / 2
}

/// Recovers `n` from an entry count, when the count is triangular.
pub fn size_from_entry_count(m: usize) -> Option<usize> {
    let mut n = 2;
    loop {
        let t = entry_count(n);
        if t == m {
            return Some(n);
        }
        if t > m {
            return None;
        }
        n += 1;
    }
}

/// Position index of entry (i,j), requiring 1 <= i < j <= n.
pub fn index_of(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(
        1 <= i && i < j && j <= n,
        "bad position ({i},{j}) for n={n}"
    );
    (i - 1) * (2 * n - i) / 2 + (j - i - 1)
}

/// Inverse of [`index_of`].
pub fn pair_of(n: usize, pos: usize) -> (usize, usize) {
    debug_assert!(pos < entry_count(n));
    let mut i = 1;
    let mut offset = pos;
    while offset >= n - i {
        offset -= n - i;
        i += 1;
    }
    (i, i + 1 + offset)
}

/// Canonical variable name for a position: "x12" for n <= 9, "x1_10" beyond.
pub fn var_name(n: usize, pos: usize) -> String {
    let (i, j) = pair_of(n, pos);
    if n <= 9 {
        format!("x{i}{j}")
    } else {
        format!("x{i}_{j}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_pair_round_trip() {
        for n in 2..=10 {
            for pos in 0..entry_count(n) {
                let (i, j) = pair_of(n, pos);
                assert!(1 <= i && i < j && j <= n);
                assert_eq!(index_of(n, i, j), pos);
            }
        }
    }

    #[test]
    fn row_major_order_for_n4() {
        let pairs: Vec<_> = (0..6).map(|p| pair_of(4, p)).collect();
        assert_eq!(pairs, vec![(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]);
    }

    #[test]
    fn names() {
        assert_eq!(var_name(4, 0), "x12");
        assert_eq!(var_name(4, 5), "x34");
        assert_eq!(var_name(10, 8), "x1_10");
    }

    #[test]
    fn size_recovery() {
        assert_eq!(size_from_entry_count(6), Some(4));
        assert_eq!(size_from_entry_count(3), Some(3));
        assert_eq!(size_from_entry_count(1), Some(2));
        assert_eq!(size_from_entry_count(4), None);
    }
}
