//! Augmentation solver for N-fold programs.
//!
//! Phase one builds an auxiliary program with slack columns whose optimum is
//! zero exactly when the original program is feasible. Both phases then run
//! the same loop: for every step length `lambda` in `1, 2, 4, ...` find the
//! best step `y` with `Ay = 0`, `||y||_1 <= g1` and `l <= x + lambda y <= u`,
//! apply the best of them, and stop once no step improves the objective.
//!
//! `g1` is the N-fold Graver bound computed from the finest partitions of
//! the top and local blocks. Every Graver element of the constraint matrix
//! lies inside the search space, so termination certifies optimality.
//!
//! The best step for a fixed `lambda` is found by a dynamic program over the
//! columns, processed right to left. A state holds the top-row sum of the
//! columns already placed and the local-row sum of the current brick; a
//! brick boundary is only crossed with a zero local sum. States that the
//! remaining columns cannot bring back to zero are dropped.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{self, Error, Result};
use crate::graver::nfold_graver_bound;
use crate::matrix::{l1_norm, IntMatrix};
use crate::model::{Brick, NFoldInstance, Objective, Solution, Status, StepRecord};
use crate::partition::nfold_partition_params;

#[derive(Debug, Clone)]
pub struct SolverConfig {
    /// Upper limit on the number of dynamic-programming states per step search.
    pub state_budget: usize,
    /// Upper limit on augmentation steps per phase.
    pub max_iterations: usize,
    pub record_steps: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            state_budget: 4_000_000,
            max_iterations: 1_000_000,
            record_steps: false,
        }
    }
}

/// A kernel vector of one brick's local block, usable as that brick's part
/// of a step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StepCandidate {
    pub brick: usize,
    pub y: Vec<i64>,
    /// Contribution `A^(i) y` to the top rows.
    pub sigma: Vec<i64>,
    pub gain: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Step {
    pub lambda: i64,
    pub y: Vec<i64>,
    pub gain: i64,
}

/// Loop state of one augmentation phase.
#[derive(Debug, Clone)]
pub struct AugmentationState {
    pub x: Vec<i64>,
    pub utility: i64,
    pub lambdas: Vec<i64>,
    pub norm_cap: u64,
    pub iterations: usize,
}

fn ceil_div(a: i64, b: i64) -> i64 {
    let q = a / b;
    if (a % b != 0) && ((a < 0) == (b < 0)) {
        q + 1
    } else {
        q
    }
}

fn floor_div(a: i64, b: i64) -> i64 {
    let q = a / b;
    if (a % b != 0) && ((a < 0) != (b < 0)) {
        q - 1
    } else {
        q
    }
}

/// Cap on the l1-norm of step vectors: the N-fold Graver bound, or the box
/// diameter times the variable count when that is smaller.
pub fn norm_cap(instance: &NFoldInstance) -> Result<u64> {
    let params = nfold_partition_params(instance);
    let delta = instance.delta() as u64;
    let bound = nfold_graver_bound(
        params.s_a.max(1) as u64,
        params.p_a.max(1) as u64,
        params.p_b as u64,
        delta,
    );
    let width = instance.box_width()? as u64;
    let fallback = (instance.num_vars() as u64).saturating_mul(width);
    Ok(bound.min(fallback))
}

/// Step lengths `1, 2, 4, ..., 2^ceil(log2(max(1, width)))`.
pub fn lambda_schedule(width: i64) -> Vec<i64> {
    let mut out = vec![1i64];
    while *out.last().unwrap() < width.max(1) {
        let next = out.last().unwrap().saturating_mul(2);
        out.push(next);
    }
    out
}

/// Per-column admissible step values at `x` for step length `lambda`.
fn step_ranges(
    instance: &NFoldInstance,
    x: &[i64],
    lambda: i64,
    cap: u64,
) -> Result<Vec<(i64, i64)>> {
    let cap = cap.min(i64::MAX as u64) as i64;
    let lower = instance.lower();
    let upper = instance.upper();
    let mut out = Vec::with_capacity(x.len());
    for j in 0..x.len() {
        let lo = ceil_div(error::sub(lower[j], x[j])?, lambda).max(-cap);
        let hi = floor_div(error::sub(upper[j], x[j])?, lambda).min(cap);
        if lo > 0 || hi < 0 {
            return Err(Error::Invalid(format!(
                "point violates the bounds at column {j}"
            )));
        }
        out.push((lo, hi));
    }
    Ok(out)
}

fn gain_of(obj: &Objective, j: usize, x: i64, lambda: i64, v: i64) -> Result<i64> {
    let moved = error::add(x, error::mul(lambda, v)?)?;
    error::sub(obj.utility(j, moved)?, obj.utility(j, x)?)
}

/// All local kernel vectors of brick `brick` that fit the `lambda`-scaled box
/// around `x` and have l1-norm at most `cap`, in lexicographic order.
pub fn brick_candidates(
    instance: &NFoldInstance,
    x: &[i64],
    lambda: i64,
    cap: u64,
    brick: usize,
) -> Result<Vec<StepCandidate>> {
    let ranges = step_ranges(instance, x, lambda, cap)?;
    let cols = instance.brick_range(brick);
    let b = &instance.bricks()[brick];
    let ranges = &ranges[cols.clone()];
    let t = b.width();
    let mut suffix = vec![vec![(0i128, 0i128); b.b.rows()]; t + 1];
    for j in (0..t).rev() {
        for r in 0..b.b.rows() {
            let a = b.b.get(r, j) as i128;
            let (p, q) = (a * ranges[j].0 as i128, a * ranges[j].1 as i128);
            let (lo, hi) = suffix[j + 1][r];
            suffix[j][r] = (lo + p.min(q), hi + p.max(q));
        }
    }
    let mut out = Vec::new();
    let mut y = vec![0i64; t];
    let mut partial = vec![0i128; b.b.rows()];
    candidate_dfs(b, ranges, &suffix, cap, 0, &mut y, &mut partial, &mut out);
    out.into_iter()
        .map(|y| {
            let sigma = b.a.mul_vec(&y)?;
            let mut gain = 0i64;
            for (k, v) in y.iter().enumerate() {
                let j = cols.start + k;
                gain = error::add(gain, gain_of(instance.objective(), j, x[j], lambda, *v)?)?;
            }
            Ok(StepCandidate {
                brick,
                y,
                sigma,
                gain,
            })
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn candidate_dfs(
    b: &Brick,
    ranges: &[(i64, i64)],
    suffix: &[Vec<(i128, i128)>],
    left: u64,
    j: usize,
    y: &mut Vec<i64>,
    partial: &mut Vec<i128>,
    out: &mut Vec<Vec<i64>>,
) {
    for (r, s) in partial.iter().enumerate() {
        let (lo, hi) = suffix[j][r];
        if s + lo > 0 || s + hi < 0 {
            return;
        }
    }
    if j == y.len() {
        out.push(y.clone());
        return;
    }
    let budget = left.min(i64::MAX as u64) as i64;
    let (lo, hi) = (ranges[j].0.max(-budget), ranges[j].1.min(budget));
    for v in lo..=hi {
        y[j] = v;
        for (r, s) in partial.iter_mut().enumerate() {
            *s += b.b.get(r, j) as i128 * v as i128;
        }
        candidate_dfs(
            b,
            ranges,
            suffix,
            left - v.unsigned_abs(),
            j + 1,
            y,
            partial,
            out,
        );
        for (r, s) in partial.iter_mut().enumerate() {
            *s -= b.b.get(r, j) as i128 * v as i128;
        }
    }
    y[j] = 0;
}

/// Pareto frontier of `(norm, gain)` labels: norms ascending, gains strictly
/// ascending.
#[derive(Debug, Clone, Default)]
struct Frontier(Vec<(u64, i64)>);

impl Frontier {
    fn insert(&mut self, norm: u64, gain: i64) {
        if self.0.iter().any(|&(n, g)| n <= norm && g >= gain) {
            return;
        }
        self.0.retain(|&(n, g)| !(n >= norm && g <= gain));
        let pos = self.0.partition_point(|&(n, _)| n < norm);
        self.0.insert(pos, (norm, gain));
    }

    fn best(&self) -> Option<i64> {
        self.0.last().map(|&(_, g)| g)
    }

    fn norm_for_gain(&self, gain: i64) -> Option<u64> {
        self.0.iter().find(|&&(_, g)| g == gain).map(|&(n, _)| n)
    }
}

struct Column<'a> {
    top: Vec<i64>,
    local: Vec<i64>,
    brick: &'a Brick,
    /// True when this is the last column of its brick.
    closes_brick: bool,
    /// Local-row count of the brick owning the next column (0 past the end).
    next_local_rows: usize,
}

/// Best step for a fixed `lambda`: maximizes the exact objective gain over
/// all `y` with `Ay = 0`, `||y||_1 <= cap` and `l <= x + lambda y <= u`.
/// Ties go to the lexicographically smallest `y`. `None` when no step
/// has positive gain.
pub fn best_step(
    instance: &NFoldInstance,
    x: &[i64],
    lambda: i64,
    cap: u64,
) -> Result<Option<Step>> {
    best_step_with(instance, x, lambda, cap, &SolverConfig::default())
}

pub fn best_step_with(
    instance: &NFoldInstance,
    x: &[i64],
    lambda: i64,
    cap: u64,
    config: &SolverConfig,
) -> Result<Option<Step>> {
    if lambda < 1 {
        return Err(Error::Invalid("step length must be positive".into()));
    }
    if x.len() != instance.num_vars() {
        return Err(Error::DimensionMismatch(
            "point length differs from the variable count".into(),
        ));
    }
    let n = x.len();
    if n == 0 || cap == 0 {
        return Ok(None);
    }
    let ranges = step_ranges(instance, x, lambda, cap)?;
    let r = instance.top_rows();
    let objective = instance.objective();

    let mut columns: Vec<Column> = Vec::with_capacity(n);
    for brick in instance.bricks() {
        for c in 0..brick.width() {
            columns.push(Column {
                top: brick.a.column(c),
                local: brick.b.column(c),
                brick,
                closes_brick: c + 1 == brick.width(),
                next_local_rows: 0,
            });
        }
    }
    for j in 0..n {
        columns[j].next_local_rows = if j + 1 < n {
            columns[j + 1].brick.b.rows()
        } else {
            0
        };
    }

    let max_norm: u64 = ranges.iter().fold(0u64, |acc, (lo, hi)| {
        acc.saturating_add(lo.unsigned_abs().max(hi.unsigned_abs()))
    });
    let binding = cap < max_norm;
    let sigma_limit = (instance.delta() as u64)
        .saturating_mul(cap)
        .min(i64::MAX as u64) as i128;

    // prefix intervals: what columns before j can contribute
    let mut top_pre: Vec<Vec<(i128, i128)>> = vec![vec![(0, 0); r]; n + 1];
    let mut local_pre: Vec<Vec<(i128, i128)>> = Vec::with_capacity(n + 1);
    let mut running: Vec<(i128, i128)> = Vec::new();
    for j in 0..n {
        for k in 0..r {
            let a = columns[j].top[k] as i128;
            let (p, q) = (a * ranges[j].0 as i128, a * ranges[j].1 as i128);
            let (lo, hi) = top_pre[j][k];
            top_pre[j + 1][k] = (lo + p.min(q), hi + p.max(q));
        }
        let first_in_brick = j == 0 || columns[j - 1].closes_brick;
        if first_in_brick {
            running = vec![(0, 0); columns[j].local.len()];
        }
        local_pre.push(running.clone());
        for (k, slot) in running.iter_mut().enumerate() {
            let a = columns[j].local[k] as i128;
            let (p, q) = (a * ranges[j].0 as i128, a * ranges[j].1 as i128);
            *slot = (slot.0 + p.min(q), slot.1 + p.max(q));
        }
    }

    let admissible = |j: usize, key: &[i64]| -> bool {
        for k in 0..r {
            let s = key[k] as i128;
            if s.abs() > sigma_limit {
                return false;
            }
            let (lo, hi) = top_pre[j][k];
            if -s < lo || -s > hi {
                return false;
            }
        }
        for (k, &(lo, hi)) in local_pre[j].iter().enumerate() {
            let s = key[r + k] as i128;
            if -s < lo || -s > hi {
                return false;
            }
        }
        true
    };

    // layers[j]: states describing columns j..n
    let mut layers: Vec<HashMap<Vec<i64>, Frontier>> = vec![HashMap::new(); n + 1];
    let mut end = Frontier::default();
    end.insert(0, 0);
    layers[n].insert(vec![0i64; r], end);
    let mut total_states = 1usize;

    for j in (0..n).rev() {
        let col = &columns[j];
        let s_here = col.local.len();
        let (next, rest) = layers.split_at_mut(j + 1);
        let current = &mut next[j];
        for (key, frontier) in rest[0].iter() {
            if col.closes_brick && key[r..].iter().any(|v| *v != 0) {
                continue;
            }
            for v in ranges[j].0..=ranges[j].1 {
                let norm_v = if binding { v.unsigned_abs() } else { 0 };
                let mut new_key = Vec::with_capacity(r + s_here);
                for k in 0..r {
                    new_key.push(error::add(key[k], error::mul(v, col.top[k])?)?);
                }
                for k in 0..s_here {
                    let base = if col.closes_brick { 0 } else { key[r + k] };
                    new_key.push(error::add(base, error::mul(v, col.local[k])?)?);
                }
                if !admissible(j, &new_key) {
                    continue;
                }
                let g = gain_of(objective, j, x[j], lambda, v)?;
                let slot = current.entry(new_key).or_default();
                for &(fnorm, fgain) in &frontier.0 {
                    let norm = fnorm.saturating_add(norm_v);
                    if norm > cap {
                        continue;
                    }
                    slot.insert(norm, error::add(fgain, g)?);
                }
            }
        }
        current.retain(|_, f| !f.0.is_empty());
        total_states += current.len();
        if total_states > config.state_budget {
            return Err(Error::Intractable(format!(
                "step search exceeded {} dynamic-programming states",
                config.state_budget
            )));
        }
    }

    let start_key = vec![0i64; r + columns[0].local.len()];
    let Some(best) = layers[0].get(&start_key).and_then(Frontier::best) else {
        return Ok(None);
    };
    if best <= 0 {
        return Ok(None);
    }

    // forward reconstruction, smallest value first at every column
    let mut y = Vec::with_capacity(n);
    let mut key = start_key;
    let mut target = best;
    let mut budget = cap;
    for j in 0..n {
        let col = &columns[j];
        let s_here = col.local.len();
        let mut chosen = None;
        for v in ranges[j].0..=ranges[j].1 {
            let norm_v = if binding { v.unsigned_abs() } else { 0 };
            if norm_v > budget {
                continue;
            }
            let mut next_key = Vec::with_capacity(r + col.next_local_rows);
            for k in 0..r {
                next_key.push(key[k] - v * col.top[k]);
            }
            let local: Vec<i64> = (0..s_here).map(|k| key[r + k] - v * col.local[k]).collect();
            if col.closes_brick {
                if local.iter().any(|x| *x != 0) {
                    continue;
                }
                next_key.extend(std::iter::repeat(0).take(col.next_local_rows));
            } else {
                next_key.extend(local);
            }
            let g = gain_of(objective, j, x[j], lambda, v)?;
            let want = target - g;
            if let Some(nrm) = layers[j + 1]
                .get(&next_key)
                .and_then(|f| f.norm_for_gain(want))
            {
                if nrm <= budget - norm_v {
                    chosen = Some((v, next_key, want, norm_v));
                    break;
                }
            }
        }
        let (v, next_key, want, norm_v) = chosen
            .ok_or_else(|| Error::Internal(format!("step reconstruction failed at column {j}")))?;
        y.push(v);
        key = next_key;
        target = want;
        budget -= norm_v;
    }
    Ok(Some(Step {
        lambda,
        y,
        gain: best,
    }))
}

/// Checks that `y` lies in the kernel of the assembled matrix.
fn in_kernel(instance: &NFoldInstance, y: &[i64]) -> Result<bool> {
    if instance.top_product(y)?.iter().any(|v| *v != 0) {
        return Ok(false);
    }
    for (i, b) in instance.bricks().iter().enumerate() {
        if b.b
            .mul_vec(&y[instance.brick_range(i)])?
            .iter()
            .any(|v| *v != 0)
        {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Default)]
pub struct Solver {
    pub config: SolverConfig,
}

struct PhaseResult {
    x: Vec<i64>,
    utility: i64,
    iterations: usize,
    steps: Vec<StepRecord>,
}

impl Solver {
    pub fn new(config: SolverConfig) -> Self {
        Self { config }
    }

    /// Augments from `x0` until no step improves or the utility reaches
    /// `ceiling`, a known upper bound on it.
    fn run_phase(
        &self,
        instance: &NFoldInstance,
        x0: Vec<i64>,
        phase: u8,
        ceiling: Option<i64>,
    ) -> Result<PhaseResult> {
        if !instance.check_feasible(&x0)? {
            return Err(Error::Invalid(
                "augmentation needs a feasible starting point".into(),
            ));
        }
        let mut state = AugmentationState {
            utility: instance.utility(&x0)?,
            x: x0,
            lambdas: lambda_schedule(instance.box_width()?),
            norm_cap: norm_cap(instance)?,
            iterations: 0,
        };
        let mut steps = Vec::new();
        loop {
            if ceiling.is_some_and(|c| state.utility >= c) {
                break;
            }
            let mut best: Option<Step> = None;
            for &lambda in &state.lambdas {
                if let Some(step) =
                    best_step_with(instance, &state.x, lambda, state.norm_cap, &self.config)?
                {
                    if best.as_ref().map_or(true, |b| step.gain > b.gain) {
                        best = Some(step);
                    }
                }
            }
            let Some(step) = best else { break };

            if !in_kernel(instance, &step.y)? || l1_norm(&step.y) > state.norm_cap {
                return Err(Error::Internal(
                    "step left the kernel or exceeded the norm cap".into(),
                ));
            }
            let next: Vec<i64> = state
                .x
                .iter()
                .zip(&step.y)
                .map(|(a, b)| error::add(*a, error::mul(step.lambda, *b)?))
                .collect::<Result<_>>()?;
            let utility = instance.utility(&next)?;
            if !instance.check_feasible(&next)?
                || utility <= state.utility
                || utility - state.utility != step.gain
            {
                return Err(Error::Internal(
                    "accepted step is infeasible or does not improve".into(),
                ));
            }
            state.x = next;
            state.utility = utility;
            state.iterations += 1;
            if self.config.record_steps {
                steps.push(StepRecord {
                    phase,
                    lambda: step.lambda,
                    step: step.y,
                    gain: step.gain,
                    objective: instance.evaluate_objective(&state.x)?,
                });
            }
            if state.iterations > self.config.max_iterations {
                return Err(Error::Intractable(
                    "augmentation iteration limit reached".into(),
                ));
            }
        }
        Ok(PhaseResult {
            x: state.x,
            utility: state.utility,
            iterations: state.iterations,
            steps,
        })
    }

    /// Runs the augmentation loop from a feasible `x0` to an optimum.
    pub fn augment_to_optimal(&self, instance: &NFoldInstance, x0: &[i64]) -> Result<Solution> {
        // a constant objective admits no improving step
        let ceiling = instance
            .objective()
            .is_zero()
            .then(|| instance.utility(x0))
            .transpose()?;
        let res = self.run_phase(instance, x0.to_vec(), 2, ceiling)?;
        Ok(Solution {
            status: Status::Optimal,
            objective_value: instance.evaluate_objective(&res.x)?,
            x: res.x,
            iterations: res.iterations,
            steps: res.steps,
        })
    }

    fn phase_one(
        &self,
        instance: &NFoldInstance,
    ) -> Result<(Option<Vec<i64>>, usize, Vec<StepRecord>)> {
        let start: Vec<i64> = instance
            .lower()
            .iter()
            .zip(instance.upper())
            .map(|(l, u)| 0i64.clamp(*l, u))
            .collect();
        let residual = instance.residual(&start)?;
        if residual.iter().all(|v| *v == 0) {
            return Ok((Some(start), 0, Vec::new()));
        }
        let (aux, aux_start, origin) = auxiliary_instance(instance, &start, &residual)?;
        let res = self.run_phase(&aux, aux_start, 1, Some(0))?;
        if res.utility != 0 {
            return Ok((None, res.iterations, res.steps));
        }
        let mut x = vec![0; instance.num_vars()];
        for (value, from) in res.x.iter().zip(&origin) {
            if let Some(j) = from {
                x[*j] = *value;
            }
        }
        debug_assert!(instance.check_feasible(&x)?);
        Ok((Some(x), res.iterations, res.steps))
    }

    /// A feasible point, or `None` when the instance is infeasible.
    pub fn initial_feasible(&self, instance: &NFoldInstance) -> Result<Option<Vec<i64>>> {
        Ok(self.phase_one(instance)?.0)
    }

    pub fn solve(&self, instance: &NFoldInstance) -> Result<Solution> {
        let (start, it1, mut steps) = self.phase_one(instance)?;
        let Some(x0) = start else {
            let mut sol = Solution::infeasible(it1);
            sol.steps = steps;
            return Ok(sol);
        };
        let mut sol = self.augment_to_optimal(instance, &x0)?;
        sol.iterations += it1;
        steps.append(&mut sol.steps);
        sol.steps = steps;
        Ok(sol)
    }
}

/// Slack-extended program whose optimum is zero iff `instance` is feasible.
/// Brick 0 absorbs the top residual; every brick absorbs its own local
/// residual. The slack of a local row is placed right after the first
/// column of that row, so rows keep their column span and the step search
/// does not carry them open across the whole brick. Returns the program,
/// its trivially feasible start and, per column, the original column index.
fn auxiliary_instance(
    instance: &NFoldInstance,
    start: &[i64],
    residual: &[i64],
) -> Result<(NFoldInstance, Vec<i64>, Vec<Option<usize>>)> {
    enum Col {
        Original(usize),
        Local(usize),
        Top(usize),
    }
    let r = instance.top_rows();
    let mut bricks = Vec::with_capacity(instance.brick_count());
    let mut c = Vec::new();
    let mut x = Vec::new();
    let mut origin = Vec::new();
    let mut res_off = r;
    for (i, brick) in instance.bricks().iter().enumerate() {
        let s = brick.b.rows();
        let t = brick.width();
        let mut layout: Vec<Col> = Vec::with_capacity(t + s + r);
        let first_col = |q: usize| (0..t).find(|&col| brick.b.get(q, col) != 0);
        for col in 0..t {
            layout.push(Col::Original(col));
            layout.extend(
                (0..s)
                    .filter(|&q| first_col(q) == Some(col))
                    .map(Col::Local),
            );
        }
        layout.extend((0..s).filter(|&q| first_col(q).is_none()).map(Col::Local));
        if i == 0 {
            layout.extend((0..r).map(Col::Top));
        }
        let width = layout.len();
        let mut a = IntMatrix::zeros(r, width);
        let mut b = IntMatrix::zeros(s, width);
        let mut lower = Vec::with_capacity(width);
        let mut upper = Vec::with_capacity(width);
        let base = instance.offset(i);
        for (pos, col) in layout.iter().enumerate() {
            let (rho, unit) = match *col {
                Col::Original(j) => {
                    for row in 0..r {
                        a.set(row, pos, brick.a.get(row, j));
                    }
                    for row in 0..s {
                        b.set(row, pos, brick.b.get(row, j));
                    }
                    lower.push(brick.lower[j]);
                    upper.push(brick.upper[j]);
                    x.push(start[base + j]);
                    c.push(0);
                    origin.push(Some(base + j));
                    continue;
                }
                Col::Top(k) => (residual[k], (true, k)),
                Col::Local(q) => (residual[res_off + q], (false, q)),
            };
            let sign = if rho < 0 { -1 } else { 1 };
            match unit {
                (true, k) => a.set(k, pos, sign),
                (false, q) => b.set(q, pos, sign),
            }
            lower.push(0);
            upper.push(rho.checked_abs().ok_or(Error::Overflow("residual"))?);
            x.push(rho.abs());
            c.push(-1);
            origin.push(None);
        }
        res_off += s;
        bricks.push(Brick {
            a,
            b,
            b_local: brick.b_local.clone(),
            lower,
            upper,
        });
    }
    let aux = NFoldInstance::new(
        bricks,
        instance.b_top().to_vec(),
        Objective::LinearMax { c },
    )?;
    Ok((aux, x, origin))
}

/// Two-phase solve with the default configuration.
pub fn solve(instance: &NFoldInstance) -> Result<Solution> {
    Solver::default().solve(instance)
}

pub fn initial_feasible(instance: &NFoldInstance) -> Result<Option<Vec<i64>>> {
    Solver::default().initial_feasible(instance)
}

pub fn augment_to_optimal(instance: &NFoldInstance, x0: &[i64]) -> Result<Solution> {
    Solver::default().augment_to_optimal(instance, x0)
}
