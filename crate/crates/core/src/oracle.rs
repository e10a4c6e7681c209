//! Brute-force references. Nothing here calls into the solver, the Graver
//! enumerator or the scheduling and coloring encoders; only matrix primitives and
//! instance accessors are shared.

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::graver::GraverSet;
use crate::matrix::IntMatrix;
use crate::model::{NFoldInstance, Solution, Status};
use crate::scheduling::{SchedulingFile, Variant};

pub const IP_VOLUME_BUDGET: u128 = 10_000_000;
pub const GRAVER_BUDGET: u128 = 50_000_000;

/// Exhaustive optimum over every integer point of the box. Bricks are
/// enumerated separately first so only locally feasible pieces are combined.
pub fn oracle_ip_solve(instance: &NFoldInstance) -> Result<Solution> {
    let lower = instance.lower();
    let upper = instance.upper();
    let volume = lower
        .iter()
        .zip(&upper)
        .fold(1u128, |acc, (l, u)| acc.saturating_mul((u - l + 1) as u128));
    if volume > IP_VOLUME_BUDGET {
        return Err(Error::Intractable(format!("box has {volume} points")));
    }
    let mut pieces: Vec<Vec<Vec<i64>>> = Vec::new();
    for brick in instance.bricks() {
        let mut ok = Vec::new();
        let mut point = brick.lower.clone();
        loop {
            if brick.b.mul_vec(&point)? == brick.b_local {
                ok.push(point.clone());
            }
            if !odometer(&mut point, &brick.lower, &brick.upper) {
                break;
            }
        }
        if ok.is_empty() {
            return Ok(Solution::infeasible(0));
        }
        pieces.push(ok);
    }
    let full = instance.assemble();
    let rhs = instance.rhs();
    let minimize = !instance.objective().is_maximization();
    let mut best: Option<(i64, Vec<i64>)> = None;
    let mut idx = vec![0usize; pieces.len()];
    loop {
        let x: Vec<i64> = idx
            .iter()
            .zip(&pieces)
            .flat_map(|(i, p)| p[*i].iter().copied())
            .collect();
        if full.mul_vec(&x)? == rhs {
            let v = instance.evaluate_objective(&x)?;
            let better = match &best {
                None => true,
                Some((b, _)) => (minimize && v < *b) || (!minimize && v > *b),
            };
            if better {
                best = Some((v, x));
            }
        }
        let mut k = pieces.len();
        loop {
            if k == 0 {
                return Ok(match best {
                    Some((v, x)) => Solution {
                        status: Status::Optimal,
                        x,
                        objective_value: v,
                        iterations: 0,
                        steps: Vec::new(),
                    },
                    None => Solution::infeasible(0),
                });
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < pieces[k].len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

fn odometer(point: &mut [i64], lower: &[i64], upper: &[i64]) -> bool {
    for k in (0..point.len()).rev() {
        if point[k] < upper[k] {
            point[k] += 1;
            return true;
        }
        point[k] = lower[k];
    }
    false
}

/// Row indices of a maximal independent subset, by fraction-free elimination.
fn independent_rows(m: &IntMatrix) -> Vec<usize> {
    let mut basis: Vec<(usize, Vec<i128>)> = Vec::new();
    let mut chosen = Vec::new();
    for r in 0..m.rows() {
        let mut v: Vec<i128> = m.row(r).iter().map(|x| *x as i128).collect();
        for (pc, row) in &basis {
            if v[*pc] != 0 {
                let (a, b) = (row[*pc], v[*pc]);
                for c in 0..v.len() {
                    v[c] = v[c] * a - row[c] * b;
                }
                let g = v.iter().fold(0i128, |g, x| gcd(g, *x));
                if g > 1 {
                    v.iter_mut().for_each(|x| *x /= g);
                }
            }
        }
        if let Some(pc) = v.iter().position(|x| *x != 0) {
            basis.push((pc, v));
            chosen.push(r);
        }
    }
    chosen
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Largest connected group of rows linked by shared columns.
fn largest_linked_group(m: &IntMatrix) -> usize {
    let rows = m.rows();
    let mut seen = vec![false; rows];
    let mut best = 0;
    for start in 0..rows {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut stack = vec![start];
        let mut size = 0;
        while let Some(r) = stack.pop() {
            size += 1;
            for o in 0..rows {
                if !seen[o] && (0..m.cols()).any(|c| m.get(r, c) != 0 && m.get(o, c) != 0) {
                    seen[o] = true;
                    stack.push(o);
                }
            }
        }
        best = best.max(size);
    }
    best.max(1)
}

fn radius_of(m: &IntMatrix) -> u128 {
    let p = largest_linked_group(m) as u32;
    let delta = m.max_abs() as u128;
    (2 * p as u128 * delta + 1).saturating_pow(p)
}

/// Integer kernel basis (columns) and the inverse transform, from unimodular
/// column reduction of `m`.
fn kernel_lattice(m: &IntMatrix) -> (Vec<Vec<i128>>, Vec<Vec<i128>>) {
    let (rows, n) = (m.rows(), m.cols());
    let mut work: Vec<Vec<i128>> = (0..rows)
        .map(|r| m.row(r).iter().map(|x| *x as i128).collect())
        .collect();
    // u: n x n, columns transformed alongside work; v = u^-1
    let mut u: Vec<Vec<i128>> = (0..n)
        .map(|i| (0..n).map(|j| (i == j) as i128).collect())
        .collect();
    let mut v = u.clone();
    let mut piv = 0;
    for row in 0..rows {
        if piv == n {
            break;
        }
        loop {
            let smallest = (piv..n)
                .filter(|&c| work[row][c] != 0)
                .min_by_key(|&c| work[row][c].abs());
            let Some(c) = smallest else { break };
            if c != piv {
                for w in work.iter_mut() {
                    w.swap(c, piv);
                }
                for x in u.iter_mut() {
                    x.swap(c, piv);
                }
                v.swap(c, piv);
            }
            let mut done = true;
            for c in piv + 1..n {
                if work[row][c] == 0 {
                    continue;
                }
                let q = work[row][c].div_euclid(work[row][piv]);
                for w in work.iter_mut() {
                    w[c] -= q * w[piv];
                }
                for x in u.iter_mut() {
                    x[c] -= q * x[piv];
                }
                for k in 0..n {
                    let add = q * v[c][k];
                    v[piv][k] += add;
                }
                if work[row][c] != 0 {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if work[row][piv] != 0 {
            piv += 1;
        }
    }
    let basis: Vec<Vec<i128>> = (piv..n)
        .map(|c| (0..n).map(|r| u[r][c]).collect())
        .collect();
    let inverse_rows: Vec<Vec<i128>> = (piv..n).map(|c| v[c].clone()).collect();
    (basis, inverse_rows)
}

/// Graver basis straight from the definition: every kernel vector within
/// the single-matrix norm bound, minus those with a smaller conformal kernel vector.
pub fn oracle_graver(m: &IntMatrix) -> Result<GraverSet> {
    let n = m.cols();
    let reduced = m.select_rows(&independent_rows(m));
    let radius = if reduced.rows() == 0 {
        1
    } else {
        radius_of(m).min(radius_of(&reduced))
    };
    if reduced.rows() == n {
        return Ok(GraverSet {
            matrix: m.clone(),
            elements: Vec::new(),
            norm_cap: radius as u64,
        });
    }
    let (basis, inverse) = kernel_lattice(m);
    let bounds: Vec<i128> = inverse
        .iter()
        .map(|row| {
            row.iter()
                .map(|x| x.abs())
                .max()
                .unwrap_or(0)
                .saturating_mul(radius as i128)
        })
        .collect();
    let count = bounds
        .iter()
        .fold(1u128, |acc, b| acc.saturating_mul((2 * b + 1) as u128));
    if count > GRAVER_BUDGET {
        return Err(Error::Intractable(format!(
            "coefficient box has {count} points"
        )));
    }
    let mut cycles: Vec<(u128, Vec<i64>)> = Vec::new();
    let mut coef: Vec<i128> = bounds.iter().map(|b| -b).collect();
    let neg: Vec<i128> = coef.clone();
    loop {
        let mut y = vec![0i128; n];
        for (k, c) in coef.iter().enumerate() {
            for j in 0..n {
                y[j] += c * basis[k][j];
            }
        }
        let norm: u128 = y.iter().map(|x| x.unsigned_abs()).sum();
        if norm > 0 && norm <= radius {
            cycles.push((norm, y.iter().map(|x| *x as i64).collect()));
        }
        let mut k = coef.len();
        let mut advanced = false;
        while k > 0 {
            k -= 1;
            if coef[k] < bounds[k] {
                coef[k] += 1;
                advanced = true;
                break;
            }
            coef[k] = neg[k];
        }
        if !advanced {
            break;
        }
    }
    cycles.sort();
    let below = |z: &[i64], y: &[i64]| {
        z.iter()
            .zip(y)
            .all(|(a, b)| a * b >= 0 && a.abs() <= b.abs())
    };
    let mut elements = Vec::new();
    for (i, (norm, y)) in cycles.iter().enumerate() {
        let decomposable = cycles[..i]
            .iter()
            .take_while(|(nz, _)| nz < norm)
            .any(|(_, z)| below(z, y));
        if !decomposable {
            elements.push(y.clone());
        }
    }
    elements.sort();
    Ok(GraverSet {
        matrix: m.clone(),
        elements,
        norm_cap: radius.min(u64::MAX as u128) as u64,
    })
}

/// Cap on the number of job-to-machine assignments examined.
pub const SCHEDULE_BUDGET: u128 = 1_000_000;

/// Best value over every assignment of the individual jobs to machines,
/// `None` when no assignment is valid. Makespans and loads are in whole
/// time units; the weighted completion sum tries every job order on every
/// machine instead of relying on Smith's rule.
pub fn oracle_schedule(file: &SchedulingFile, variant: Variant) -> Result<Option<Ratio<i64>>> {
    let (machines, jobs) = match variant {
        Variant::Rcmax => {
            let kinds = file
                .kinds
                .as_ref()
                .ok_or_else(|| Error::Invalid("missing `kinds`".into()))?;
            (kinds.machines.len(), expand(file.types.iter().map(|t| t.n)))
        }
        _ => {
            let speeds = file
                .speeds
                .as_ref()
                .ok_or_else(|| Error::Invalid("missing `speeds`".into()))?;
            (speeds.len(), expand(file.types.iter().map(|t| t.n)))
        }
    };
    let space = (machines as u128)
        .checked_pow(jobs.len() as u32)
        .unwrap_or(u128::MAX);
    if machines == 0 || space > SCHEDULE_BUDGET {
        return Err(Error::Intractable(format!("{space} assignments")));
    }
    let minimize = variant != Variant::Cmin;
    let mut best: Option<Ratio<i64>> = None;
    let mut assign = vec![0usize; jobs.len()];
    loop {
        let mut per_machine = vec![Vec::new(); machines];
        for (job, &i) in assign.iter().enumerate() {
            per_machine[i].push(jobs[job]);
        }
        if let Some(v) = assignment_value(file, variant, &per_machine)? {
            let better = match best {
                None => true,
                Some(b) => (minimize && v < b) || (!minimize && v > b),
            };
            if better {
                best = Some(v);
            }
        }
        let mut k = assign.len();
        loop {
            if k == 0 {
                return Ok(best);
            }
            k -= 1;
            assign[k] += 1;
            if assign[k] < machines {
                break;
            }
            assign[k] = 0;
        }
    }
}

fn expand(counts: impl Iterator<Item = i64>) -> Vec<usize> {
    counts
        .enumerate()
        .flat_map(|(j, n)| std::iter::repeat(j).take(n.max(0) as usize))
        .collect()
}

fn ceil_div(a: i64, b: i64) -> i64 {
    (a + b - 1) / b
}

/// Value of one assignment, `None` when it breaks a hard constraint.
fn assignment_value(
    file: &SchedulingFile,
    variant: Variant,
    jobs: &[Vec<usize>],
) -> Result<Option<Ratio<i64>>> {
    let types = &file.types;
    let p = |j: usize| types[j].p.unwrap_or(0);
    let mut values = Vec::with_capacity(jobs.len());
    for (i, mine) in jobs.iter().enumerate() {
        let value = match variant {
            Variant::Rcmax => {
                let kinds = file.kinds.as_ref().expect("checked by caller");
                let row = &kinds.times[kinds.machines[i]];
                let mut load = 0;
                for &j in mine {
                    match row[j] {
                        Some(t) => load += t,
                        None => return Ok(None),
                    }
                }
                Ratio::from_integer(load)
            }
            _ => {
                let speed = file.speeds.as_ref().expect("checked by caller")[i];
                let load: i64 = mine.iter().map(|&j| p(j)).sum();
                match variant {
                    Variant::Cmax => Ratio::from_integer(ceil_div(load, speed)),
                    Variant::CmaxCap => {
                        let caps = file
                            .capacities
                            .as_ref()
                            .ok_or_else(|| Error::Invalid("missing capacities".into()))?;
                        if mine.len() as i64 > caps[i] {
                            return Ok(None);
                        }
                        Ratio::from_integer(ceil_div(load, speed))
                    }
                    Variant::Cmin => Ratio::from_integer(load / speed),
                    Variant::CmaxRelease => {
                        // blocks by type in release order, each as early as allowed
                        let mut order: Vec<usize> = mine.clone();
                        order.sort_by_key(|&j| (types[j].r.unwrap_or(0), j));
                        let mut clock = 0i64;
                        for j in order {
                            clock = clock.max(speed * types[j].r.unwrap_or(0)) + p(j);
                        }
                        Ratio::from_integer(ceil_div(clock, speed))
                    }
                    Variant::CmaxDeadline => {
                        let mut order: Vec<usize> = mine.clone();
                        order.sort_by_key(|&j| (types[j].d.unwrap_or(0), j));
                        let mut clock = 0i64;
                        for j in order {
                            clock += p(j);
                            if clock > speed * types[j].d.unwrap_or(0) {
                                return Ok(None);
                            }
                        }
                        Ratio::from_integer(ceil_div(clock, speed))
                    }
                    Variant::Qswc => {
                        best_sequence(mine, |j| (p(j), types[j].w.unwrap_or(0)), speed)
                    }
                    Variant::Rcmax => unreachable!(),
                }
            }
        };
        values.push(value);
    }
    let pick = match variant {
        Variant::Qswc => values.into_iter().sum(),
        Variant::Cmin => values.into_iter().min().unwrap_or_default(),
        _ => values.into_iter().max().unwrap_or_default(),
    };
    Ok(Some(pick))
}

/// Minimum weighted completion sum of `jobs` on one machine over all orders.
fn best_sequence(jobs: &[usize], data: impl Fn(usize) -> (i64, i64), speed: i64) -> Ratio<i64> {
    let mut order: Vec<usize> = jobs.to_vec();
    order.sort_unstable();
    let mut best = i64::MAX;
    loop {
        let mut clock = 0;
        let mut sum = 0;
        for &j in &order {
            let (p, w) = data(j);
            clock += p;
            sum += w * clock;
        }
        best = best.min(sum);
        if !next_permutation(&mut order) {
            break;
        }
    }
    Ratio::new(if jobs.is_empty() { 0 } else { best }, speed)
}

fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len())
        .rev()
        .find(|&j| v[j] > v[i - 1])
        .expect("pivot has a successor");
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Minimum sum of colors over proper colorings with colors `1..=n`.
/// Vertices listed in the same group of `together` must share a color;
/// `None` when no proper coloring honors the groups.
pub fn oracle_min_sum_coloring(
    adjacency: &[Vec<usize>],
    together: &[Vec<usize>],
) -> Result<Option<u64>> {
    let n = adjacency.len();
    if n > 10 {
        return Err(Error::Intractable(format!("{n} vertices")));
    }
    let mut leader: Vec<usize> = (0..n).collect();
    for group in together {
        if let Some(&first) = group.iter().min() {
            group.iter().for_each(|&v| leader[v] = first);
        }
    }
    let mut colors = vec![0u64; n];
    let mut best = u64::MAX;
    search_colors(adjacency, &leader, 0, 0, &mut colors, &mut best);
    Ok(if n == 0 {
        Some(0)
    } else {
        (best != u64::MAX).then_some(best)
    })
}

fn search_colors(
    adj: &[Vec<usize>],
    leader: &[usize],
    v: usize,
    sum: u64,
    colors: &mut [u64],
    best: &mut u64,
) {
    if sum + (adj.len() - v) as u64 >= *best {
        return;
    }
    if v == adj.len() {
        *best = sum;
        return;
    }
    let forced = (leader[v] < v).then(|| colors[leader[v]]);
    for c in 1..=adj.len() as u64 {
        if forced.is_some_and(|f| f != c) {
            continue;
        }
        if adj[v].iter().any(|&u| u < v && colors[u] == c) {
            continue;
        }
        colors[v] = c;
        search_colors(adj, leader, v + 1, sum + c, colors, best);
    }
    colors[v] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Brick, Objective};

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_nested(rows).unwrap()
    }

    #[test]
    fn graver_anchors() {
        assert!(oracle_graver(&IntMatrix::identity(2))
            .unwrap()
            .elements
            .is_empty());
        assert_eq!(
            oracle_graver(&m(&[vec![1, -1]])).unwrap().elements,
            vec![vec![-1, -1], vec![1, 1]]
        );
        let g = oracle_graver(&m(&[vec![1, 1, -1]])).unwrap();
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
    }

    #[test]
    fn kernel_lattice_is_exact() {
        let a = m(&[vec![2, 4, -2, 1]]);
        let (basis, inv) = kernel_lattice(&a);
        assert_eq!(basis.len(), 3);
        for b in &basis {
            let y: Vec<i64> = b.iter().map(|x| *x as i64).collect();
            assert_eq!(a.mul_vec(&y).unwrap(), vec![0]);
        }
        // inverse rows recover coefficients
        for (k, row) in inv.iter().enumerate() {
            for (l, b) in basis.iter().enumerate() {
                let dot: i128 = row.iter().zip(b).map(|(x, y)| x * y).sum();
                assert_eq!(dot, (k == l) as i128);
            }
        }
    }

    #[test]
    fn independent_subset() {
        let a = m(&[vec![1, 2], vec![2, 4], vec![0, 1]]);
        assert_eq!(independent_rows(&a), vec![0, 2]);
    }

    fn one_brick(upper: i64, b_top: i64, c: Vec<i64>) -> NFoldInstance {
        let brick = Brick {
            a: m(&[vec![1, 1]]),
            b: IntMatrix::zeros(0, 2),
            b_local: vec![],
            lower: vec![0, 0],
            upper: vec![upper, upper],
        };
        NFoldInstance::new(vec![brick], vec![b_top], Objective::LinearMax { c }).unwrap()
    }

    #[test]
    fn ip_anchors() {
        let sol = oracle_ip_solve(&one_brick(5, 4, vec![1, 2])).unwrap();
        assert_eq!((sol.objective_value, sol.x.clone()), (8, vec![0, 4]));
        assert_eq!(
            oracle_ip_solve(&one_brick(3, 7, vec![1, 2]))
                .unwrap()
                .status,
            Status::Infeasible
        );
        let point = one_brick(0, 0, vec![1, 1]);
        assert_eq!(oracle_ip_solve(&point).unwrap().x, vec![0, 0]);
        let empty = one_brick(0, 1, vec![1, 1]);
        assert_eq!(oracle_ip_solve(&empty).unwrap().status, Status::Infeasible);
    }

    fn file(json: &str) -> SchedulingFile {
        serde_json::from_str(json).unwrap()
    }

    fn value(json: &str, variant: Variant) -> Option<Ratio<i64>> {
        oracle_schedule(&file(json), variant).unwrap()
    }

    #[test]
    fn schedule_anchors() {
        let int = |v| Some(Ratio::from_integer(v));
        assert_eq!(
            value(r#"{"speeds":[1,2],"types":[{"p":2,"n":3}]}"#, Variant::Cmax),
            int(2)
        );
        assert_eq!(
            value(r#"{"speeds":[1,1],"types":[{"p":1,"n":4}]}"#, Variant::Cmin),
            int(2)
        );
        assert_eq!(
            value(
                r#"{"speeds":[1,1],"capacities":[1,3],"types":[{"p":1,"n":4}]}"#,
                Variant::CmaxCap
            ),
            int(3)
        );
        assert_eq!(
            value(
                r#"{"speeds":[1],"types":[{"p":1,"n":1,"r":0},{"p":1,"n":1,"r":5}]}"#,
                Variant::CmaxRelease
            ),
            int(6)
        );
        let unrelated =
            r#"{"types":[{"n":2},{"n":2}],"kinds":{"machines":[0,1],"times":[[1,1],[null,1]]}}"#;
        assert_eq!(value(unrelated, Variant::Rcmax), int(2));
        assert_eq!(
            value(
                r#"{"speeds":[1],"types":[{"p":2,"n":1,"w":1},{"p":1,"n":1,"w":1}]}"#,
                Variant::Qswc
            ),
            int(4)
        );
        assert_eq!(
            value(
                r#"{"speeds":[1,1],"types":[{"p":1,"n":2,"w":1}]}"#,
                Variant::Qswc
            ),
            int(2)
        );
    }

    #[test]
    fn schedule_infeasible_and_budget() {
        assert_eq!(
            value(
                r#"{"speeds":[1],"types":[{"p":3,"n":1,"d":2}]}"#,
                Variant::CmaxDeadline
            ),
            None
        );
        let big = file(r#"{"speeds":[1,1,1],"types":[{"p":1,"n":20}]}"#);
        assert!(matches!(
            oracle_schedule(&big, Variant::Cmax),
            Err(Error::Intractable(_))
        ));
    }

    #[test]
    fn coloring_anchors() {
        let k3 = vec![vec![1, 2], vec![0, 2], vec![0, 1]];
        assert_eq!(oracle_min_sum_coloring(&k3, &[]).unwrap(), Some(6));
        let p3 = vec![vec![1], vec![0, 2], vec![1]];
        assert_eq!(oracle_min_sum_coloring(&p3, &[]).unwrap(), Some(4));
        assert_eq!(oracle_min_sum_coloring(&[vec![]], &[]).unwrap(), Some(1));
        // forcing the two ends of a path together changes nothing
        assert_eq!(
            oracle_min_sum_coloring(&p3, &[vec![2, 0]]).unwrap(),
            Some(4)
        );
        assert_eq!(oracle_min_sum_coloring(&p3, &[vec![0, 1]]).unwrap(), None);
    }
}
