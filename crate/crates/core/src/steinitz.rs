//! Executable Steinitz reordering for zero-sum integer vectors.
//!
//! Given vectors `v_1..v_N` in `Z^m` with `sum v_i = 0` and `||v_i||_inf <= delta`,
//! finds an order whose prefix sums all stay within `m * delta` in the
//! infinity norm. A greedy pass is tried first; backtracking with the prefix
//! bound as the pruning rule takes over if greedy overshoots.

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SteinitzOrder {
    /// 0-based positions into the input sequence.
    pub permutation: Vec<usize>,
    pub max_prefix_norm: u64,
    pub bound: u64,
}

fn linf(v: &[i64]) -> u64 {
    v.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0)
}

pub fn steinitz_reorder(vectors: &[Vec<i64>], delta: u64) -> Result<SteinitzOrder> {
    let dim = vectors.first().map_or(0, Vec::len);
    if vectors.iter().any(|v| v.len() != dim) {
        return Err(Error::DimensionMismatch(
            "vectors differ in dimension".into(),
        ));
    }
    if let Some(i) = vectors.iter().position(|v| linf(v) > delta) {
        return Err(Error::Invalid(format!(
            "vector {i} exceeds the infinity-norm bound {delta}"
        )));
    }
    let mut total = vec![0i64; dim];
    for v in vectors {
        for (t, x) in total.iter_mut().zip(v) {
            *t = t.checked_add(*x).ok_or(Error::Overflow("vector sum"))?;
        }
    }
    if total.iter().any(|t| *t != 0) {
        return Err(Error::Invalid("vectors do not sum to zero".into()));
    }
    let bound = (dim as u64).saturating_mul(delta);

    let order = greedy(vectors, dim);
    let order = if max_prefix(vectors, &order, dim) <= bound {
        order
    } else {
        backtrack(vectors, dim, bound).ok_or_else(|| {
            Error::Internal("no ordering within the Steinitz bound was found".into())
        })?
    };
    let max_prefix_norm = max_prefix(vectors, &order, dim);
    Ok(SteinitzOrder {
        permutation: order,
        max_prefix_norm,
        bound,
    })
}

fn greedy(vectors: &[Vec<i64>], dim: usize) -> Vec<usize> {
    let mut used = vec![false; vectors.len()];
    let mut prefix = vec![0i64; dim];
    let mut order = Vec::with_capacity(vectors.len());
    for _ in 0..vectors.len() {
        let mut best: Option<(u64, usize)> = None;
        for (i, v) in vectors.iter().enumerate() {
            if used[i] {
                continue;
            }
            let norm = prefix
                .iter()
                .zip(v)
                .map(|(p, x)| (p + x).unsigned_abs())
                .max()
                .unwrap_or(0);
            if best.map_or(true, |(b, _)| norm < b) {
                best = Some((norm, i));
            }
        }
        let (_, i) = best.expect("an unused vector remains");
        used[i] = true;
        for (p, x) in prefix.iter_mut().zip(&vectors[i]) {
            *p += x;
        }
        order.push(i);
    }
    order
}

fn max_prefix(vectors: &[Vec<i64>], order: &[usize], dim: usize) -> u64 {
    let mut prefix = vec![0i64; dim];
    let mut worst = 0;
    for &i in order {
        for (p, x) in prefix.iter_mut().zip(&vectors[i]) {
            *p += x;
        }
        worst = worst.max(linf(&prefix));
    }
    worst
}

fn backtrack(vectors: &[Vec<i64>], dim: usize, bound: u64) -> Option<Vec<usize>> {
    fn go(
        vectors: &[Vec<i64>],
        bound: u64,
        used: &mut Vec<bool>,
        prefix: &mut Vec<i64>,
        order: &mut Vec<usize>,
    ) -> bool {
        if order.len() == vectors.len() {
            return true;
        }
        for i in 0..vectors.len() {
            // identical vectors are interchangeable; try only the first unused copy
            if used[i] || (0..i).any(|k| !used[k] && vectors[k] == vectors[i]) {
                continue;
            }
            let ok = prefix
                .iter()
                .zip(&vectors[i])
                .all(|(p, x)| (p + x).unsigned_abs() <= bound);
            if !ok {
                continue;
            }
            used[i] = true;
            for (p, x) in prefix.iter_mut().zip(&vectors[i]) {
                *p += x;
            }
            order.push(i);
            if go(vectors, bound, used, prefix, order) {
                return true;
            }
            order.pop();
            for (p, x) in prefix.iter_mut().zip(&vectors[i]) {
                *p -= x;
            }
            used[i] = false;
        }
        false
    }
    let mut used = vec![false; vectors.len()];
    let mut prefix = vec![0i64; dim];
    let mut order = Vec::new();
    go(vectors, bound, &mut used, &mut prefix, &mut order).then_some(order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn one_dimensional() {
        let r = steinitz_reorder(&[vec![1], vec![-1]], 1).unwrap();
        assert_eq!(r.max_prefix_norm, 1);
        let r = steinitz_reorder(&[vec![1], vec![1], vec![-1], vec![-1]], 1).unwrap();
        assert_eq!(r.max_prefix_norm, 1);
        assert_eq!(r.bound, 1);
    }

    #[test]
    fn two_dimensional() {
        let v = vec![
            vec![2, 0],
            vec![0, 2],
            vec![-2, -2],
            vec![1, 1],
            vec![-1, -1],
        ];
        let r = steinitz_reorder(&v, 2).unwrap();
        assert!(r.max_prefix_norm <= 4);
        let mut p = r.permutation.clone();
        p.sort_unstable();
        assert_eq!(p, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn backtracking_fallback_respects_bound() {
        let v = vec![
            vec![1, 1],
            vec![1, -1],
            vec![-1, 1],
            vec![-1, -1],
            vec![1, 0],
            vec![-1, 0],
        ];
        let order = backtrack(&v, 2, 1).unwrap();
        assert!(max_prefix(&v, &order, 2) <= 1);
    }

    #[test]
    fn precondition_errors() {
        assert!(matches!(
            steinitz_reorder(&[vec![1], vec![1]], 1),
            Err(Error::Invalid(_))
        ));
        assert!(matches!(
            steinitz_reorder(&[vec![3], vec![-3]], 2),
            Err(Error::Invalid(_))
        ));
        assert!(steinitz_reorder(&[vec![1, 0], vec![-1]], 1).is_err());
        assert!(steinitz_reorder(&[], 0).unwrap().permutation.is_empty());
    }

    fn zero_sum() -> impl Strategy<Value = (Vec<Vec<i64>>, u64)> {
        (1usize..=3, 0i64..=3, 1usize..=7).prop_flat_map(|(m, d, n)| {
            proptest::collection::vec(proptest::collection::vec(-d..=d, m), n).prop_filter_map(
                "closing vector out of range",
                move |mut vs| {
                    let last: Vec<i64> = (0..m)
                        .map(|k| -vs.iter().map(|v| v[k]).sum::<i64>())
                        .collect();
                    if last.iter().any(|x| x.abs() > d) {
                        return None;
                    }
                    vs.push(last);
                    Some((vs, d as u64))
                },
            )
        })
    }

    proptest! {
        #[test]
        fn prefix_bound_holds((vs, d) in zero_sum()) {
            let r = steinitz_reorder(&vs, d).unwrap();
            let mut p = r.permutation.clone();
            p.sort_unstable();
            prop_assert_eq!(p, (0..vs.len()).collect::<Vec<_>>());
            prop_assert!(r.max_prefix_norm <= vs[0].len() as u64 * d);
            let reversed: Vec<Vec<i64>> = vs.iter().rev().cloned().collect();
            let r2 = steinitz_reorder(&reversed, d).unwrap();
            prop_assert!(r2.max_prefix_norm <= vs[0].len() as u64 * d);
        }
    }
}
