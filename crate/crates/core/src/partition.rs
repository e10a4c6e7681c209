//! Column-independent row partitions.
//!
//! Two rows land in the same part exactly when they are connected through a
//! chain of rows with overlapping supports. This is the finest partition in
//! which rows of different parts never share a nonzero column.

use serde::Serialize;

use crate::matrix::IntMatrix;
use crate::model::NFoldInstance;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RowPartition {
    /// 0-based row indices; each part sorted, parts ordered by first row.
    pub parts: Vec<Vec<usize>>,
    /// Size of the largest part.
    pub p: usize,
    /// Number of parts.
    #[serde(rename = "S")]
    pub s: usize,
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // keep the smaller index as representative
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

/// Finest column-independent partition of the rows of `m`.
///
/// A matrix without rows yields no parts and `p = S = 0`.
pub fn column_independent_partition(m: &IntMatrix) -> RowPartition {
    let mut uf = UnionFind::new(m.rows());
    let mut first_row_in_col: Vec<Option<usize>> = vec![None; m.cols()];
    for r in 0..m.rows() {
        for c in m.support(r) {
            match first_row_in_col[c] {
                Some(prev) => uf.union(prev, r),
                None => first_row_in_col[c] = Some(r),
            }
        }
    }
    let mut parts: Vec<Vec<usize>> = Vec::new();
    let mut slot: Vec<Option<usize>> = vec![None; m.rows()];
    for r in 0..m.rows() {
        let root = uf.find(r);
        match slot[root] {
            Some(k) => parts[k].push(r),
            None => {
                slot[root] = Some(parts.len());
                parts.push(vec![r]);
            }
        }
    }
    let p = parts.iter().map(Vec::len).max().unwrap_or(0);
    let s = parts.len();
    RowPartition { parts, p, s }
}

/// Partition parameters of an N-fold instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct NFoldParams {
    pub p_a: usize,
    pub s_a: usize,
    pub p_b: usize,
}

/// `(p_A, S_A)` from the concatenated top blocks, `p_B` as the maximum over
/// the local blocks (1 when no brick has local rows).
pub fn nfold_partition_params(instance: &NFoldInstance) -> NFoldParams {
    let top = column_independent_partition(&instance.top_matrix());
    let p_b = instance
        .bricks()
        .iter()
        .map(|b| column_independent_partition(&b.b).p)
        .max()
        .unwrap_or(0)
        .max(1);
    NFoldParams {
        p_a: top.p,
        s_a: top.s,
        p_b,
    }
}

/// True when rows in different parts have disjoint supports.
pub fn is_column_independent(m: &IntMatrix, parts: &[Vec<usize>]) -> bool {
    let mut owner: Vec<Option<usize>> = vec![None; m.cols()];
    for (k, part) in parts.iter().enumerate() {
        for &r in part {
            for c in m.support(r) {
                match owner[c] {
                    Some(o) if o != k => return false,
                    _ => owner[c] = Some(k),
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_nested(rows).unwrap()
    }

    #[test]
    fn diagonal_rows_are_separate() {
        let p = column_independent_partition(&m(&[vec![1, 0, 0], vec![0, 2, 0], vec![0, 0, 3]]));
        assert_eq!(p.parts, vec![vec![0], vec![1], vec![2]]);
        assert_eq!((p.p, p.s), (1, 3));
    }

    #[test]
    fn chained_rows_merge() {
        let p = column_independent_partition(&m(&[vec![1, 1, 0], vec![0, 1, 1]]));
        assert_eq!(p.parts, vec![vec![0, 1]]);
        assert_eq!((p.p, p.s), (2, 1));
    }

    #[test]
    fn mixed_rows() {
        let p = column_independent_partition(&m(&[
            vec![1, 0, 1, 0],
            vec![0, 1, 0, 0],
            vec![1, 0, 0, 1],
        ]));
        assert_eq!(p.parts, vec![vec![0, 2], vec![1]]);
        assert_eq!((p.p, p.s), (2, 2));
    }

    #[test]
    fn zero_rows_are_singletons() {
        let p = column_independent_partition(&m(&[vec![0, 0], vec![1, 1], vec![0, 0]]));
        assert_eq!(p.parts, vec![vec![0], vec![1], vec![2]]);
    }

    fn small_matrix() -> impl Strategy<Value = IntMatrix> {
        (1usize..6, 1usize..6).prop_flat_map(|(r, c)| {
            proptest::collection::vec(prop_oneof![3 => Just(0i64), 1 => -2i64..=2], r * c)
                .prop_map(move |d| IntMatrix::new(r, c, d).unwrap())
        })
    }

    proptest! {
        #[test]
        fn finest_partition_law(mat in small_matrix()) {
            let p = column_independent_partition(&mat);
            let mut all: Vec<usize> = p.parts.iter().flatten().copied().collect();
            all.sort_unstable();
            prop_assert_eq!(all, (0..mat.rows()).collect::<Vec<_>>());
            prop_assert!(is_column_independent(&mat, &p.parts));
            prop_assert!(p.p <= mat.rows() && p.s <= mat.rows() && p.p >= 1);
            // merging two parts stays column-independent
            if p.parts.len() >= 2 {
                let mut merged = p.parts.clone();
                let last = merged.pop().unwrap();
                merged[0].extend(last);
                prop_assert!(is_column_independent(&mat, &merged));
            }
            // every split of a part breaks independence
            for (k, part) in p.parts.iter().enumerate() {
                if part.len() < 2 { continue; }
                for mask in 1u32..(1 << part.len()) - 1 {
                    let a: Vec<usize> = part.iter().enumerate()
                        .filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &r)| r).collect();
                    let b: Vec<usize> = part.iter().enumerate()
                        .filter(|(i, _)| mask >> i & 1 == 0).map(|(_, &r)| r).collect();
                    let mut split = p.parts.clone();
                    split[k] = a;
                    split.push(b);
                    prop_assert!(!is_column_independent(&mat, &split));
                }
            }
        }

        #[test]
        fn row_permutation_is_equivariant(mat in small_matrix(), seed in 0u64..1000) {
            let n = mat.rows();
            let mut perm: Vec<usize> = (0..n).collect();
            // deterministic shuffle from the seed
            let mut s = seed;
            for i in (1..n).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                perm.swap(i, (s >> 33) as usize % (i + 1));
            }
            let permuted = mat.select_rows(&perm);
            let a = column_independent_partition(&mat);
            let b = column_independent_partition(&permuted);
            prop_assert_eq!((a.p, a.s), (b.p, b.s));
            let mut mapped: Vec<Vec<usize>> = b.parts.iter()
                .map(|part| { let mut v: Vec<usize> = part.iter().map(|&r| perm[r]).collect(); v.sort_unstable(); v })
                .collect();
            mapped.sort();
            let mut orig = a.parts.clone();
            orig.sort();
            prop_assert_eq!(mapped, orig);
        }
    }
}
