//! Small enumeration helpers shared by the minor and generator machinery.
//! Everything returns deterministic, lexicographically ordered lists.

/// All k-element subsets of {0, ..., n-1} in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < n - (k - i) {
                cur[i] += 1;
                for j in (i + 1)..k {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// All tuples (t_1, ..., t_parts) of nonnegative integers with sum `total`,
/// in lexicographic order.
pub fn weak_compositions(total: u64, parts: usize) -> Vec<Vec<u64>> {
    if parts == 0 {
        return if total == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in weak_compositions(total - first, parts - 1) {
            let mut tuple = Vec::with_capacity(parts);
            tuple.push(first);
            tuple.append(&mut rest);
            out.push(tuple);
        }
    }
    out
}

/// All subsets of {0, ..., n-1}, each sorted ascending, enumerated by
/// increasing bitmask.
pub fn subsets(n: usize) -> Vec<Vec<usize>> {
    assert!(n < 32);
    (0u32..1 << n)
        .map(|mask| (0..n).filter(|&i| mask & (1 << i) != 0).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combinations_are_lexicographic() {
        assert_eq!(
            combinations(4, 2),
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        assert_eq!(combinations(3, 0), vec![Vec::<usize>::new()]);
        assert!(combinations(2, 3).is_empty());
        // Binomial count cross-check.
        assert_eq!(combinations(10, 4).len(), 210);
    }

    #[test]
    fn weak_compositions_count_is_stars_and_bars() {
        // C(total + parts - 1, parts - 1)
        assert_eq!(weak_compositions(2, 3).len(), 6);
        assert_eq!(weak_compositions(1, 3).len(), 3);
        assert_eq!(weak_compositions(0, 2), vec![vec![0, 0]]);
        assert_eq!(weak_compositions(3, 1), vec![vec![3]]);
        assert_eq!(weak_compositions(1, 0), Vec::<Vec<u64>>::new());
        for t in weak_compositions(4, 3) {
            assert_eq!(t.iter().sum::<u64>(), 4);
        }
    }

    #[test]
    fn subsets_cover_the_power_set() {
        let s = subsets(3);
        assert_eq!(s.len(), 8);
        assert_eq!(s[0], Vec::<usize>::new());
        assert_eq!(s[7], vec![0, 1, 2]);
    }
}
