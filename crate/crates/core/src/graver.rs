//! Graver bases of small matrices and the partition-based l1-norm bounds.
//!
//! A Graver element is a nonzero kernel vector that cannot be written as a
//! sum of two nonzero sign-compatible kernel vectors. For a matrix whose
//! finest column-independent partition has largest part `p` and whose
//! entries are bounded by `delta`, every Graver element has l1-norm at most
//! `(2 p delta + 1)^p`; for an N-fold matrix the bound is
//! `S_A L_B (2 p_A delta L_B + 1)^p_A` with `L_B = (2 p_B delta + 1)^p_B`.

use num_integer::Integer;
use num_rational::Ratio;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{is_conformal, l1_norm, IntMatrix};
use crate::partition::column_independent_partition;

/// Value standing in for "no useful cap" once a bound overflows `u64`.
pub const SATURATED: u64 = u64::MAX;

/// Default number of enumeration leaves before giving up.
pub const DEFAULT_BUDGET: u64 = 20_000_000;

fn pow_saturating(base: u64, exp: u64) -> u64 {
    let mut acc = 1u64;
    for _ in 0..exp {
        acc = acc.saturating_mul(base);
        if acc == SATURATED {
            break;
        }
    }
    acc
}

/// `(2 p delta + 1)^p`, saturating at [`SATURATED`].
pub fn lemma2_bound(p: u64, delta: u64) -> u64 {
    let base = p.saturating_mul(delta).saturating_mul(2).saturating_add(1);
    pow_saturating(base, p)
}

/// `S_A L_B (2 p_A delta L_B + 1)^p_A` with `L_B = lemma2_bound(p_B, delta)`.
pub fn nfold_graver_bound(s_a: u64, p_a: u64, p_b: u64, delta: u64) -> u64 {
    let l_b = lemma2_bound(p_b, delta);
    let base = p_a
        .saturating_mul(delta)
        .saturating_mul(l_b)
        .saturating_mul(2)
        .saturating_add(1);
    s_a.saturating_mul(l_b)
        .saturating_mul(pow_saturating(base, p_a))
}

/// `(2 p delta + 1)^p` for `m`, with `p` from its finest partition.
pub fn finest_partition_bound(m: &IntMatrix) -> u64 {
    let part = column_independent_partition(m);
    lemma2_bound(part.p.max(1) as u64, m.max_abs() as u64)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraverSet {
    pub matrix: IntMatrix,
    /// Sorted lexicographically, closed under negation.
    pub elements: Vec<Vec<i64>>,
    pub norm_cap: u64,
}

impl GraverSet {
    pub fn contains(&self, y: &[i64]) -> bool {
        self.elements
            .binary_search_by(|e| e.as_slice().cmp(y))
            .is_ok()
    }

    pub fn max_norm(&self) -> u64 {
        self.elements.iter().map(|e| l1_norm(e)).max().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

type Q = Ratio<i128>;

/// Row-reduced echelon data of the row space of a matrix.
struct Echelon {
    /// Original rows that are linearly independent (greedy, in order).
    basis_rows: Vec<usize>,
    /// Fully reduced rows, one per pivot.
    rows: Vec<Vec<Q>>,
    pivots: Vec<usize>,
}

fn echelon(m: &IntMatrix) -> Echelon {
    let n = m.cols();
    let mut rows: Vec<Vec<Q>> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    let mut basis_rows = Vec::new();
    for r in 0..m.rows() {
        let mut v: Vec<Q> = m
            .row(r)
            .iter()
            .map(|&x| Q::from_integer(x as i128))
            .collect();
        for (row, &pc) in rows.iter().zip(&pivots) {
            let f = v[pc];
            if f != Q::from_integer(0) {
                for c in 0..n {
                    v[c] -= f * row[c];
                }
            }
        }
        if let Some(pc) = (0..n).find(|&c| v[c] != Q::from_integer(0)) {
            let lead = v[pc];
            for x in v.iter_mut() {
                *x /= lead;
            }
            for row in rows.iter_mut() {
                let f = row[pc];
                if f != Q::from_integer(0) {
                    for c in 0..n {
                        row[c] -= f * v[c];
                    }
                }
            }
            rows.push(v);
            pivots.push(pc);
            basis_rows.push(r);
        }
    }
    Echelon {
        basis_rows,
        rows,
        pivots,
    }
}

/// Rank of `m` over the rationals.
pub fn rank(m: &IntMatrix) -> usize {
    echelon(m).pivots.len()
}

/// Enumeration radius: the single-matrix norm bound of `m`, tightened by the bound of a
/// maximal independent row subset (same kernel, no larger `p` or `delta`).
pub fn enumeration_radius(m: &IntMatrix) -> u64 {
    let ech = echelon(m);
    let reduced = m.select_rows(&ech.basis_rows);
    let own = finest_partition_bound(m);
    let red = if reduced.rows() == 0 {
        lemma2_bound(1, 0)
    } else {
        finest_partition_bound(&reduced)
    };
    own.min(red)
}

/// Number of integer points of l1-norm at most `radius` in `dim` dimensions.
fn l1_ball_size(dim: u64, radius: u64) -> u64 {
    // sum_k 2^k C(dim, k) C(radius, k)
    let mut total = 0u64;
    let mut c_dim = 1u64;
    let mut c_rad = 1u64;
    for k in 0..=dim.min(radius) {
        if k > 0 {
            c_dim = c_dim.saturating_mul(dim - k + 1) / k;
            c_rad = c_rad.saturating_mul(radius - k + 1) / k;
        }
        let term = pow_saturating(2, k)
            .saturating_mul(c_dim)
            .saturating_mul(c_rad);
        total = total.saturating_add(term);
    }
    total
}

struct KernelParam {
    free: Vec<usize>,
    pivots: Vec<usize>,
    /// Per pivot row: integer coefficients on the free columns and the common
    /// denominator, so `y_pivot = -(sum coef_f y_f) / denom`.
    coef: Vec<Vec<i128>>,
    denom: Vec<i128>,
}

fn kernel_param(m: &IntMatrix) -> KernelParam {
    let ech = echelon(m);
    let is_pivot: Vec<bool> = (0..m.cols()).map(|c| ech.pivots.contains(&c)).collect();
    let free: Vec<usize> = (0..m.cols()).filter(|&c| !is_pivot[c]).collect();
    let mut coef = Vec::new();
    let mut denom = Vec::new();
    for row in &ech.rows {
        let l = free.iter().fold(1i128, |acc, &f| acc.lcm(row[f].denom()));
        coef.push(
            free.iter()
                .map(|&f| (row[f] * Q::from_integer(l)).to_integer())
                .collect(),
        );
        denom.push(l);
    }
    KernelParam {
        free,
        pivots: ech.pivots,
        coef,
        denom,
    }
}

/// All nonzero kernel vectors with l1-norm at most `radius`.
fn kernel_vectors(m: &IntMatrix, radius: u64, budget: u64) -> Result<Vec<Vec<i64>>> {
    let param = kernel_param(m);
    let dim = param.free.len() as u64;
    if dim == 0 {
        return Ok(Vec::new());
    }
    let radius = radius.min(i64::MAX as u64 / 4);
    if l1_ball_size(dim, radius) > budget {
        return Err(Error::Intractable(format!(
            "kernel of dimension {dim} within l1-radius {radius} exceeds the enumeration budget"
        )));
    }
    let mut out = Vec::new();
    let mut free_vals = vec![0i64; param.free.len()];
    enumerate_free(
        &param,
        m.cols(),
        radius,
        0,
        radius,
        &mut free_vals,
        &mut out,
    );
    Ok(out)
}

fn enumerate_free(
    param: &KernelParam,
    n: usize,
    radius: u64,
    depth: usize,
    left: u64,
    vals: &mut Vec<i64>,
    out: &mut Vec<Vec<i64>>,
) {
    if depth == vals.len() {
        if vals.iter().all(|v| *v == 0) {
            return;
        }
        let mut y = vec![0i64; n];
        for (k, &f) in param.free.iter().enumerate() {
            y[f] = vals[k];
        }
        let mut norm = radius - left;
        for (row, &pc) in param.pivots.iter().enumerate() {
            let s: i128 = param.coef[row]
                .iter()
                .zip(vals.iter())
                .map(|(c, v)| c * *v as i128)
                .sum();
            if s % param.denom[row] != 0 {
                return;
            }
            let v = -s / param.denom[row];
            norm = norm.saturating_add(v.unsigned_abs() as u64);
            if norm > radius {
                return;
            }
            y[pc] = v as i64;
        }
        out.push(y);
        return;
    }
    let b = left as i64;
    for v in -b..=b {
        vals[depth] = v;
        enumerate_free(
            param,
            n,
            radius,
            depth + 1,
            left - v.unsigned_abs(),
            vals,
            out,
        );
    }
    vals[depth] = 0;
}

/// Graver basis of `m`. The enumeration radius is the single-matrix norm bound of the
/// finest partition (tightened through an independent row subset), further
/// capped by `cap` when given.
pub fn graver_basis(m: &IntMatrix, cap: Option<u64>) -> Result<GraverSet> {
    graver_basis_with_budget(m, cap, DEFAULT_BUDGET)
}

pub fn graver_basis_with_budget(m: &IntMatrix, cap: Option<u64>, budget: u64) -> Result<GraverSet> {
    let radius = enumeration_radius(m).min(cap.unwrap_or(SATURATED));
    let mut cycles = kernel_vectors(m, radius, budget)?;
    cycles.sort_by(|a, b| l1_norm(a).cmp(&l1_norm(b)).then_with(|| a.cmp(b)));
    let mut kept: Vec<Vec<i64>> = Vec::new();
    for y in cycles {
        // a strictly smaller conformal cycle exists iff a Graver element sits below y
        if !kept.iter().any(|g| is_conformal(g, &y)) {
            kept.push(y);
        }
    }
    kept.sort();
    Ok(GraverSet {
        matrix: m.clone(),
        elements: kept,
        norm_cap: radius,
    })
}

/// True iff `y` is a nonzero kernel vector of `m` with no nonzero kernel
/// vector `z != y` conformal to it.
pub fn is_indecomposable(m: &IntMatrix, y: &[i64]) -> bool {
    if y.len() != m.cols() || y.iter().all(|v| *v == 0) {
        return false;
    }
    match m.mul_vec(y) {
        Ok(v) if v.iter().all(|x| *x == 0) => {}
        _ => return false,
    }
    let n = y.len();
    // suffix_range[j][r] = (min, max) of row r over coordinates j.. in the conformal box
    let mut suffix: Vec<Vec<(i128, i128)>> = vec![vec![(0, 0); m.rows()]; n + 1];
    for j in (0..n).rev() {
        let (lo, hi) = if y[j] >= 0 {
            (0, y[j] as i128)
        } else {
            (y[j] as i128, 0)
        };
        for r in 0..m.rows() {
            let a = m.get(r, j) as i128;
            let (p, q) = (a * lo, a * hi);
            let (smin, smax) = suffix[j + 1][r];
            suffix[j][r] = (smin + p.min(q), smax + p.max(q));
        }
    }
    let mut z = vec![0i64; n];
    let mut partial = vec![0i128; m.rows()];
    !find_sub_cycle(m, y, &suffix, 0, &mut z, &mut partial)
}

fn find_sub_cycle(
    m: &IntMatrix,
    y: &[i64],
    suffix: &[Vec<(i128, i128)>],
    j: usize,
    z: &mut Vec<i64>,
    partial: &mut Vec<i128>,
) -> bool {
    for (r, s) in partial.iter().enumerate() {
        let (lo, hi) = suffix[j][r];
        if s + lo > 0 || s + hi < 0 {
            return false;
        }
    }
    if j == y.len() {
        return z.iter().any(|v| *v != 0) && z.as_slice() != y;
    }
    let (lo, hi) = if y[j] >= 0 { (0, y[j]) } else { (y[j], 0) };
    for v in lo..=hi {
        z[j] = v;
        for (r, s) in partial.iter_mut().enumerate() {
            *s += m.get(r, j) as i128 * v as i128;
        }
        let found = find_sub_cycle(m, y, suffix, j + 1, z, partial);
        for (r, s) in partial.iter_mut().enumerate() {
            *s -= m.get(r, j) as i128 * v as i128;
        }
        if found {
            return true;
        }
    }
    z[j] = 0;
    false
}

/// Writes the kernel vector `y` as a sum of Graver elements conformal to it.
pub fn conformal_decompose(m: &IntMatrix, y: &[i64], basis: &GraverSet) -> Result<Vec<Vec<i64>>> {
    if m.mul_vec(y)?.iter().any(|v| *v != 0) {
        return Err(Error::Invalid("vector is not in the kernel".into()));
    }
    let mut residual = y.to_vec();
    let mut parts = Vec::new();
    while residual.iter().any(|v| *v != 0) {
        let g = basis
            .elements
            .iter()
            .find(|g| is_conformal(g, &residual))
            .ok_or_else(|| {
                Error::Internal(format!("no conformal Graver element below {residual:?}"))
            })?;
        for (r, v) in residual.iter_mut().zip(g) {
            *r -= v;
        }
        parts.push(g.clone());
    }
    Ok(parts)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_nested(rows).unwrap()
    }

    #[test]
    fn bound_formulas() {
        assert_eq!(lemma2_bound(1, 1), 3);
        assert_eq!(lemma2_bound(2, 1), 25);
        assert_eq!(lemma2_bound(1, 0), 1);
        assert_eq!(lemma2_bound(40, 1000), SATURATED);
        assert_eq!(nfold_graver_bound(2, 1, 1, 1), 42);
        assert_eq!(nfold_graver_bound(1, 1, 1, 0), 1);
        for (d, pmax) in [(1u64, 1u64), (3, 2), (4, 5)] {
            let expected = d * (2 * pmax + 1) * (2 * pmax * (2 * pmax + 1) + 1);
            assert_eq!(nfold_graver_bound(d, 1, 1, pmax), expected);
        }
        assert_eq!(nfold_graver_bound(3, 20, 20, 50), SATURATED);
    }

    #[test]
    fn ball_sizes() {
        assert_eq!(l1_ball_size(1, 5), 11);
        assert_eq!(l1_ball_size(2, 1), 5);
        assert_eq!(l1_ball_size(2, 2), 13);
        assert_eq!(l1_ball_size(3, 1), 7);
    }

    #[test]
    fn indecomposability() {
        let a = m(&[vec![1, -1]]);
        assert!(is_indecomposable(&a, &[1, 1]));
        assert!(!is_indecomposable(&a, &[2, 2]));
        let b = m(&[vec![1, 1, -1]]);
        assert!(is_indecomposable(&b, &[1, -1, 0]));
        assert!(!is_indecomposable(&b, &[1, 1, 2]));
        assert!(!is_indecomposable(&b, &[1, 0, 0]));
    }

    #[test]
    fn small_bases() {
        assert!(graver_basis(&IntMatrix::identity(2), None)
            .unwrap()
            .is_empty());
        assert_eq!(
            graver_basis(&m(&[vec![1, -1]]), None).unwrap().elements,
            vec![vec![-1, -1], vec![1, 1]]
        );
        let g = graver_basis(&m(&[vec![1, 1, -1]]), None).unwrap();
        let mut expected = vec![
            vec![1, 0, 1],
            vec![0, 1, 1],
            vec![1, -1, 0],
            vec![-1, 0, -1],
            vec![0, -1, -1],
            vec![-1, 1, 0],
        ];
        expected.sort();
        assert_eq!(g.elements, expected);
        assert_eq!(g.norm_cap, 3);
    }

    #[test]
    fn zero_matrix_gives_units() {
        let g = graver_basis(&IntMatrix::zeros(2, 3), None).unwrap();
        assert_eq!(g.len(), 6);
        assert!(g.elements.iter().all(|e| l1_norm(e) == 1));
    }

    #[test]
    fn dependent_rows_tighten_radius() {
        // three proportional rows: p = 3 for the matrix, p = 1 after reduction
        let a = m(&[vec![1, 2, -1, 1], vec![2, 4, -2, 2], vec![-1, -2, 1, -1]]);
        assert_eq!(finest_partition_bound(&a), lemma2_bound(3, 4));
        assert_eq!(enumeration_radius(&a), lemma2_bound(1, 2));
        let g = graver_basis(&a, None).unwrap();
        assert!(g.elements.iter().all(|e| is_indecomposable(&a, e)));
        assert_eq!(rank(&a), 1);
    }

    #[test]
    fn decomposition() {
        let a = m(&[vec![1, -1]]);
        let g = graver_basis(&a, None).unwrap();
        assert!(conformal_decompose(&a, &[0, 0], &g).unwrap().is_empty());
        assert_eq!(
            conformal_decompose(&a, &[3, 3], &g).unwrap(),
            vec![vec![1, 1]; 3]
        );
        let b = m(&[vec![1, 1, -1]]);
        let g = graver_basis(&b, None).unwrap();
        let parts = conformal_decompose(&b, &[2, 1, 3], &g).unwrap();
        let mut sum = vec![0; 3];
        for p in &parts {
            assert!(is_conformal(p, &[2, 1, 3]));
            assert!(g.contains(p));
            for (s, v) in sum.iter_mut().zip(p) {
                *s += v;
            }
        }
        assert_eq!(sum, vec![2, 1, 3]);
        assert!(conformal_decompose(&b, &[1, 1, 1], &g).is_err());
    }

    #[test]
    fn broken_basis_is_reported() {
        let a = m(&[vec![1, -1]]);
        let empty = GraverSet {
            matrix: a.clone(),
            elements: vec![],
            norm_cap: 3,
        };
        assert!(matches!(
            conformal_decompose(&a, &[1, 1], &empty),
            Err(Error::Internal(_))
        ));
    }

    #[test]
    fn budget_is_enforced() {
        let a = m(&[vec![10, -10, 0, 0, 0, 0]]);
        assert!(matches!(
            graver_basis_with_budget(&a, None, 1000),
            Err(Error::Intractable(_))
        ));
    }
}
