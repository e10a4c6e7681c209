use num_integer::Integer;
use num_rational::Ratio;

use super::{MachineSchedule, Schedule, UniformInstance, UnrelatedInstance, Variant};
use crate::error::{self, Error, Result};
use crate::matrix::IntMatrix;
use crate::model::{Brick, NFoldInstance, Objective, Status};

/// An encoded program together with what is needed to read a schedule back.
#[derive(Debug, Clone)]
pub struct Encoding {
    pub instance: NFoldInstance,
    pub variant: Variant,
    /// The decision horizon T, absent for `qswc`.
    pub horizon: Option<i64>,
    /// Program objective divided by this factor is Σ w_j C_j.
    pub scale: i64,
    /// Brick-local column of each job type's count.
    pub count_columns: Vec<usize>,
    /// Brick-local column of each job type's block start, when present.
    pub start_columns: Option<Vec<usize>>,
    source: Source,
}

#[derive(Debug, Clone)]
enum Source {
    Uniform(UniformInstance),
    Unrelated(UnrelatedInstance),
}

/// Collects the columns and local rows of one machine. Count columns carry
/// the identity entry of their job type in the top band; every inequality
/// appends its own slack column at the current end of the brick.
struct BrickBuilder {
    d: usize,
    counted: Vec<Option<usize>>,
    lower: Vec<i64>,
    upper: Vec<i64>,
    rows: Vec<Vec<(usize, i64)>>,
    rhs: Vec<i64>,
}

impl BrickBuilder {
    fn new(d: usize) -> Self {
        BrickBuilder {
            d,
            counted: Vec::new(),
            lower: Vec::new(),
            upper: Vec::new(),
            rows: Vec::new(),
            rhs: Vec::new(),
        }
    }

    fn column(&mut self, lower: i64, upper: i64) -> usize {
        self.counted.push(None);
        self.lower.push(lower);
        self.upper.push(upper);
        self.lower.len() - 1
    }

    /// Count column of job type `j`.
    fn count(&mut self, j: usize, upper: i64) -> usize {
        let col = self.column(0, upper);
        self.counted[col] = Some(j);
        col
    }

    fn equality(&mut self, terms: Vec<(usize, i64)>, rhs: i64) {
        self.rows.push(terms);
        self.rhs.push(rhs);
    }

    /// Adds `terms + sign * slack = rhs` with `slack` in `[0, max(0, slack_max)]`.
    fn with_slack(&mut self, mut terms: Vec<(usize, i64)>, sign: i64, rhs: i64, slack_max: i64) {
        let col = self.column(0, slack_max.max(0));
        terms.push((col, sign));
        self.equality(terms, rhs);
    }

    fn finish(self) -> Result<Brick> {
        let t = self.lower.len();
        let mut b = IntMatrix::zeros(self.rows.len(), t);
        for (row, terms) in self.rows.iter().enumerate() {
            for &(col, v) in terms {
                b.set(row, col, error::add(b.get(row, col), v)?);
            }
        }
        let mut a = IntMatrix::zeros(self.d, t);
        for (col, j) in self.counted.iter().enumerate() {
            if let Some(j) = j {
                a.set(*j, col, 1);
            }
        }
        Ok(Brick {
            a,
            b,
            b_local: self.rhs,
            lower: self.lower,
            upper: self.upper,
        })
    }
}

fn order_by<K: Ord>(d: usize, key: impl Fn(usize) -> K) -> Vec<usize> {
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by_key(|&j| (key(j), j));
    order
}

/// Non-increasing w/p, ties broken by the smaller type index.
pub(crate) fn smith_order(p: &[i64], w: &[i64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..p.len()).collect();
    order.sort_by(|&a, &b| {
        let lhs = w[b] as i128 * p[a] as i128;
        let rhs = w[a] as i128 * p[b] as i128;
        lhs.cmp(&rhs).then(a.cmp(&b))
    });
    order
}

/// Builds the feasibility program "is there a schedule of value T?".
pub fn encode_decision(inst: &UniformInstance, variant: Variant, horizon: i64) -> Result<Encoding> {
    if !variant.is_uniform_decision() {
        return Err(Error::Invalid(format!(
            "{variant} is not a decision variant"
        )));
    }
    if horizon < 0 {
        return Err(Error::Invalid("the horizon T must be non-negative".into()));
    }
    inst.require(variant)?;
    let d = inst.type_count();
    let types = inst.types();
    let total = inst.total_work()?;
    let counts_upper: Vec<i64> = types.iter().map(|t| t.n).collect();
    let load_terms = || -> Vec<(usize, i64)> { (0..d).map(|j| (j, types[j].p)).collect() };

    let mut bricks = Vec::with_capacity(inst.machine_count());
    let mut count_columns = (0..d).collect::<Vec<_>>();
    let mut start_columns = None;
    for (i, &speed) in inst.speeds().iter().enumerate() {
        let budget = error::mul(speed, horizon)?;
        let mut bb = BrickBuilder::new(d);
        match variant {
            Variant::Cmax | Variant::CmaxCap | Variant::Cmin => {
                for j in 0..d {
                    bb.count(j, counts_upper[j]);
                }
                if variant == Variant::Cmin {
                    bb.with_slack(load_terms(), -1, budget, error::sub(total, budget)?);
                } else {
                    bb.with_slack(load_terms(), 1, budget, budget);
                }
                if variant == Variant::CmaxCap {
                    let cap = inst.capacities().expect("checked by require")[i];
                    bb.with_slack((0..d).map(|j| (j, 1)).collect(), 1, cap, cap);
                }
            }
            Variant::CmaxRelease | Variant::CmaxDeadline => {
                // Blocks are laid out in processing order so that every row
                // touches a short run of neighbouring columns.
                let release = variant == Variant::CmaxRelease;
                let order = if release {
                    order_by(d, |j| types[j].r.unwrap_or(0))
                } else {
                    order_by(d, |j| types[j].d.unwrap_or(0))
                };
                let mut starts = vec![0usize; d];
                let mut counts = vec![0usize; d];
                for (k, &j) in order.iter().enumerate() {
                    let t = &types[j];
                    let earliest = if release && t.n > 0 {
                        error::mul(speed, t.r.unwrap_or(0))?
                    } else {
                        0
                    };
                    let due = if release {
                        budget
                    } else {
                        error::mul(speed, t.d.unwrap_or(0))?.min(budget)
                    };
                    let latest = due.max(earliest);
                    starts[j] = bb.column(earliest, latest);
                    if k > 0 {
                        let prev = order[k - 1];
                        bb.with_slack(
                            vec![
                                (starts[j], 1),
                                (starts[prev], -1),
                                (counts[prev], -types[prev].p),
                            ],
                            -1,
                            0,
                            latest,
                        );
                    }
                    counts[j] = bb.count(j, t.n);
                    // Every block ends by the makespan row, so a due date past
                    // the budget needs no row of its own.
                    if !release && due < budget {
                        bb.with_slack(vec![(starts[j], 1), (counts[j], t.p)], 1, due, due);
                    }
                }
                let last = *order.last().expect("at least one type");
                bb.with_slack(
                    vec![(starts[last], 1), (counts[last], types[last].p)],
                    1,
                    budget,
                    budget,
                );
                count_columns = counts;
                start_columns = Some(starts);
            }
            Variant::Rcmax | Variant::Qswc => unreachable!("rejected above"),
        }
        bricks.push(bb.finish()?);
    }
    let width: usize = bricks.iter().map(Brick::width).sum();
    let instance = NFoldInstance::new(bricks, counts_upper, Objective::zero(width))?;
    Ok(Encoding {
        instance,
        variant,
        horizon: Some(horizon),
        scale: 1,
        count_columns,
        start_columns,
        source: Source::Uniform(inst.clone()),
    })
}

/// Unrelated machines: a load row with slack and a row forbidding the
/// incompatible job types, per machine.
pub fn encode_rcmax(inst: &UnrelatedInstance, horizon: i64) -> Result<Encoding> {
    if horizon < 0 {
        return Err(Error::Invalid("the horizon T must be non-negative".into()));
    }
    let d = inst.type_count();
    let counts = inst.multiplicities().to_vec();
    let mut bricks = Vec::with_capacity(inst.machine_count());
    for i in 0..inst.machine_count() {
        let mut bb = BrickBuilder::new(d);
        for (j, &n) in counts.iter().enumerate() {
            bb.count(j, n);
        }
        let load = (0..d).map(|j| (j, inst.time(i, j).unwrap_or(0))).collect();
        bb.with_slack(load, 1, horizon, horizon);
        let forbidden = (0..d)
            .map(|j| (j, i64::from(inst.time(i, j).is_none())))
            .collect();
        bb.equality(forbidden, 0);
        bricks.push(bb.finish()?);
    }
    let width: usize = bricks.iter().map(Brick::width).sum();
    let instance = NFoldInstance::new(bricks, counts, Objective::zero(width))?;
    Ok(Encoding {
        instance,
        variant: Variant::Rcmax,
        horizon: Some(horizon),
        scale: 1,
        count_columns: (0..d).collect(),
        start_columns: None,
        source: Source::Unrelated(inst.clone()),
    })
}

/// Weighted completion time as a separable convex program over the job
/// counts and the prefix loads of each machine in Smith order.
///
/// On a machine of speed s the doubled objective is
/// `(1/s) * (Σ_k Z_k² (w_k/p_k - w_{k+1}/p_{k+1}) + Σ_j p_j w_j x_j)`
/// with `Z` measured in work. All terms are multiplied by `lcm(p)` and
/// `lcm(speeds)` to keep the coefficients integral.
pub fn encode_qswc(inst: &UniformInstance) -> Result<Encoding> {
    inst.require(Variant::Qswc)?;
    if inst.capacities().is_some() || inst.types().iter().any(|t| t.r.is_some() || t.d.is_some()) {
        return Err(Error::Invalid(
            "qswc takes no capacities, releases or deadlines".into(),
        ));
    }
    let d = inst.type_count();
    let types = inst.types();
    let p: Vec<i64> = types.iter().map(|t| t.p).collect();
    let w: Vec<i64> = types.iter().map(|t| t.w.unwrap_or(0)).collect();
    let order = smith_order(&p, &w);
    let lcm_p = p.iter().try_fold(1i64, |acc, &v| checked_lcm(acc, v))?;
    let lcm_s = inst
        .speeds()
        .iter()
        .try_fold(1i64, |acc, &v| checked_lcm(acc, v))?;
    let total = inst.total_work()?;
    let counts: Vec<i64> = types.iter().map(|t| t.n).collect();

    let mut bricks = Vec::new();
    let mut quad = Vec::new();
    let mut lin = Vec::new();
    for &speed in inst.speeds() {
        let factor = lcm_s / speed;
        let mut bb = BrickBuilder::new(d);
        for (j, &n) in counts.iter().enumerate() {
            bb.count(j, n);
        }
        for _ in 0..d {
            bb.column(0, total);
        }
        for (k, &j) in order.iter().enumerate() {
            let mut terms = vec![(d + j, 1), (j, -p[j])];
            if k > 0 {
                terms.push((d + order[k - 1], -1));
            }
            bb.equality(terms, 0);
        }
        bricks.push(bb.finish()?);

        let ratio = |j: usize| error::mul(lcm_p / p[j], w[j]);
        let mut a = vec![0i64; 2 * d];
        let mut b = vec![0i64; 2 * d];
        for (k, &j) in order.iter().enumerate() {
            let next = match order.get(k + 1) {
                Some(&n) => ratio(n)?,
                None => 0,
            };
            a[d + j] = error::mul(factor, error::sub(ratio(j)?, next)?)?;
            b[j] = error::mul(factor, error::mul(lcm_p, error::mul(p[j], w[j])?)?)?;
        }
        quad.extend(a);
        lin.extend(b);
    }
    let scale = error::mul(2, error::mul(lcm_p, lcm_s)?)?;
    let instance = NFoldInstance::new(
        bricks,
        counts,
        Objective::SeparableConvexMin { a: quad, b: lin },
    )?;
    Ok(Encoding {
        instance,
        variant: Variant::Qswc,
        horizon: None,
        scale,
        count_columns: (0..d).collect(),
        start_columns: None,
        source: Source::Uniform(inst.clone()),
    })
}

fn checked_lcm(a: i64, b: i64) -> Result<i64> {
    error::mul(a / a.gcd(&b), b)
}

/// Reads a schedule out of a feasible point and recomputes its value from
/// the schedule alone.
pub fn decode(enc: &Encoding, x: &[i64]) -> Result<Schedule> {
    if !enc.instance.check_feasible(x)? {
        return Err(Error::Internal(
            "decoded point is not feasible for its program".into(),
        ));
    }
    let bricks = enc.instance.brick_count();
    let per_machine: Vec<&[i64]> = (0..bricks)
        .map(|i| &x[enc.instance.brick_range(i)])
        .collect();
    let multiplicities = match &enc.source {
        Source::Uniform(u) => u.types().iter().map(|t| t.n).collect::<Vec<_>>(),
        Source::Unrelated(u) => u.multiplicities().to_vec(),
    };
    for (j, &n) in multiplicities.iter().enumerate() {
        let placed: i64 = per_machine.iter().map(|xs| xs[enc.count_columns[j]]).sum();
        if placed != n {
            return Err(Error::Internal(format!(
                "job type {j}: {placed} placed, {n} required"
            )));
        }
    }
    let machines: Vec<MachineSchedule> = per_machine
        .iter()
        .map(|xs| MachineSchedule {
            counts: enc.count_columns.iter().map(|&c| xs[c]).collect(),
            starts: enc
                .start_columns
                .as_ref()
                .map(|cols| cols.iter().map(|&c| xs[c]).collect()),
        })
        .collect();

    let objective = match &enc.source {
        Source::Unrelated(u) => unrelated_makespan(u, &machines)?,
        Source::Uniform(u) => uniform_value(u, enc.variant, &machines)?,
    };
    let horizon_ok = match (enc.variant, enc.horizon) {
        (Variant::Cmin, Some(t)) => objective >= Ratio::from_integer(t),
        (Variant::Qswc, _) => {
            let program = Ratio::new(enc.instance.evaluate_objective(x)?, enc.scale);
            program == objective
        }
        (_, Some(t)) => objective <= Ratio::from_integer(t),
        (_, None) => true,
    };
    if !horizon_ok {
        return Err(Error::Internal(format!(
            "recomputed value {objective} disagrees with the program"
        )));
    }
    Ok(Schedule {
        status: Status::Optimal,
        variant: enc.variant,
        machines,
        objective: Some(objective),
    })
}

fn unrelated_makespan(
    inst: &UnrelatedInstance,
    machines: &[MachineSchedule],
) -> Result<Ratio<i64>> {
    let mut worst = 0;
    for (i, m) in machines.iter().enumerate() {
        let mut load = 0i64;
        for (j, &c) in m.counts.iter().enumerate() {
            match inst.time(i, j) {
                Some(p) => load = error::add(load, error::mul(p, c)?)?,
                None if c > 0 => {
                    return Err(Error::Internal(format!(
                        "machine {i} runs incompatible type {j}"
                    )));
                }
                None => {}
            }
        }
        worst = worst.max(load);
    }
    Ok(Ratio::from_integer(worst))
}

fn uniform_value(
    inst: &UniformInstance,
    variant: Variant,
    machines: &[MachineSchedule],
) -> Result<Ratio<i64>> {
    let types = inst.types();
    let mut best: Option<i64> = None;
    let mut weighted = Ratio::from_integer(0i64);
    for (i, m) in machines.iter().enumerate() {
        let speed = inst.speeds()[i];
        let load = m
            .counts
            .iter()
            .zip(types)
            .try_fold(0i64, |acc, (&c, t)| error::add(acc, error::mul(c, t.p)?))?;
        let value = match variant {
            Variant::Cmax => Integer::div_ceil(&load, &speed),
            Variant::CmaxCap => {
                let cap = inst.capacities().expect("checked by require")[i];
                if m.counts.iter().sum::<i64>() > cap {
                    return Err(Error::Internal(format!("machine {i} exceeds its capacity")));
                }
                Integer::div_ceil(&load, &speed)
            }
            Variant::Cmin => Integer::div_floor(&load, &speed),
            Variant::CmaxRelease | Variant::CmaxDeadline => {
                Integer::div_ceil(&block_end(inst, variant, i, m)?, &speed)
            }
            Variant::Qswc => {
                let p: Vec<i64> = types.iter().map(|t| t.p).collect();
                let w: Vec<i64> = types.iter().map(|t| t.w.unwrap_or(0)).collect();
                let mut clock = 0i64;
                let mut sum = 0i64;
                for j in smith_order(&p, &w) {
                    for _ in 0..m.counts[j] {
                        clock = error::add(clock, p[j])?;
                        sum = error::add(sum, error::mul(w[j], clock)?)?;
                    }
                }
                weighted += Ratio::new(sum, speed);
                0
            }
            Variant::Rcmax => unreachable!("unrelated instances are decoded separately"),
        };
        best = Some(match (variant, best) {
            (_, None) => value,
            (Variant::Cmin, Some(b)) => b.min(value),
            (_, Some(b)) => b.max(value),
        });
    }
    if variant == Variant::Qswc {
        return Ok(weighted);
    }
    Ok(Ratio::from_integer(best.unwrap_or(0)))
}

/// Checks the block schedule of one machine and returns its end in work units.
fn block_end(
    inst: &UniformInstance,
    variant: Variant,
    i: usize,
    m: &MachineSchedule,
) -> Result<i64> {
    let types = inst.types();
    let speed = inst.speeds()[i];
    let starts = m
        .starts
        .as_ref()
        .ok_or_else(|| Error::Internal("missing start times".into()))?;
    let order = if variant == Variant::CmaxRelease {
        order_by(types.len(), |j| types[j].r.unwrap_or(0))
    } else {
        order_by(types.len(), |j| types[j].d.unwrap_or(0))
    };
    let mut end = 0i64;
    for &j in &order {
        if m.counts[j] == 0 {
            continue;
        }
        let start = starts[j];
        if start < end {
            return Err(Error::Internal(format!(
                "machine {i}: block of type {j} overlaps its predecessor"
            )));
        }
        if variant == Variant::CmaxRelease && start < error::mul(speed, types[j].r.unwrap_or(0))? {
            return Err(Error::Internal(format!(
                "machine {i}: type {j} starts before its release"
            )));
        }
        end = error::add(start, error::mul(types[j].p, m.counts[j])?)?;
        if variant == Variant::CmaxDeadline && end > error::mul(speed, types[j].d.unwrap_or(0))? {
            return Err(Error::Internal(format!(
                "machine {i}: type {j} misses its deadline"
            )));
        }
    }
    Ok(end)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::nfold_partition_params;
    use crate::scheduling::JobType;

    fn speeds_12() -> UniformInstance {
        UniformInstance::new(vec![1, 2], vec![JobType::new(2, 3)], None).unwrap()
    }

    #[test]
    fn cmax_shape_matches_the_parameter_table() {
        let inst = UniformInstance::new(
            vec![1, 2, 3],
            vec![JobType::new(2, 3), JobType::new(5, 1)],
            None,
        )
        .unwrap();
        for variant in [Variant::Cmax, Variant::Cmin] {
            let enc = encode_decision(&inst, variant, 4).unwrap();
            let params = nfold_partition_params(&enc.instance);
            assert_eq!((params.p_a, params.s_a, params.p_b), (1, 2, 1));
            assert_eq!(enc.instance.delta(), 5);
            assert_eq!(enc.instance.brick_count(), 3);
            assert!(enc
                .instance
                .bricks()
                .iter()
                .all(|b| b.width() == 3 && b.b.rows() == 1));
        }
    }

    #[test]
    fn decode_reports_makespan() {
        let enc = encode_decision(&speeds_12(), Variant::Cmax, 2).unwrap();
        // one job on the slow machine, two on the fast one, slacks 0 and 0
        let sched = decode(&enc, &[1, 0, 2, 0]).unwrap();
        assert_eq!(sched.objective, Some(Ratio::from_integer(2)));
        assert_eq!(sched.machines[1].counts, vec![2]);
    }

    #[test]
    fn decode_everything_on_one_machine() {
        let enc = encode_decision(&speeds_12(), Variant::Cmax, 6).unwrap();
        let sched = decode(&enc, &[3, 0, 0, 12]).unwrap();
        assert_eq!(sched.objective, Some(Ratio::from_integer(6)));
    }

    #[test]
    fn decode_rejects_infeasible_points() {
        let enc = encode_decision(&speeds_12(), Variant::Cmax, 1).unwrap();
        assert!(matches!(
            decode(&enc, &[1, 0, 2, 0]),
            Err(Error::Internal(_))
        ));
    }

    #[test]
    fn release_encoding_checks_start_times() {
        let mut early = JobType::new(1, 1);
        early.r = Some(0);
        let mut late = JobType::new(1, 1);
        late.r = Some(5);
        let inst = UniformInstance::new(vec![1], vec![early, late], None).unwrap();
        let enc = encode_decision(&inst, Variant::CmaxRelease, 6).unwrap();
        // columns: start 0, count 0, start 1, ordering slack, count 1, makespan slack
        let sched = decode(&enc, &[0, 1, 5, 4, 1, 0]).unwrap();
        assert_eq!(sched.objective, Some(Ratio::from_integer(6)));
        assert_eq!(sched.machines[0].starts, Some(vec![0, 5]));
        assert!(!enc.instance.check_feasible(&[0, 1, 4, 3, 1, 1]).unwrap());
    }

    #[test]
    fn missing_variant_data_is_rejected() {
        assert!(matches!(
            encode_decision(&speeds_12(), Variant::CmaxCap, 3),
            Err(Error::Invalid(_))
        ));
        assert!(matches!(
            encode_decision(&speeds_12(), Variant::CmaxRelease, 3),
            Err(Error::Invalid(_))
        ));
        assert!(matches!(encode_qswc(&speeds_12()), Err(Error::Invalid(_))));
        assert!(matches!(
            encode_decision(&speeds_12(), Variant::Cmax, -1),
            Err(Error::Invalid(_))
        ));
    }

    #[test]
    fn rcmax_rows_have_disjoint_supports() {
        let inst = UnrelatedInstance::new(
            vec![0, 1],
            vec![vec![Some(1), Some(1)], vec![None, Some(3)]],
            vec![2, 2],
        )
        .unwrap();
        let enc = encode_rcmax(&inst, 4).unwrap();
        let params = nfold_partition_params(&enc.instance);
        assert_eq!((params.p_a, params.s_a, params.p_b), (1, 2, 1));
        assert_eq!(enc.instance.delta(), 3);
        assert!(enc
            .instance
            .bricks()
            .iter()
            .all(|b| b.b.rows() == 2 && b.width() == 3));
    }

    #[test]
    fn qswc_objective_is_scaled_twice_the_weighted_sum() {
        let mut long = JobType::new(2, 1);
        long.w = Some(1);
        let mut short = JobType::new(1, 1);
        short.w = Some(1);
        let inst = UniformInstance::new(vec![1], vec![long, short], None).unwrap();
        let enc = encode_qswc(&inst).unwrap();
        assert_eq!(enc.scale, 4);
        // short first: x = (1, 1), Z_long = 3, Z_short = 1
        let sched = decode(&enc, &[1, 1, 3, 1]).unwrap();
        assert_eq!(sched.objective, Some(Ratio::from_integer(4)));
    }

    #[test]
    fn smith_order_breaks_ties_by_index() {
        assert_eq!(smith_order(&[2, 1, 4], &[2, 1, 1]), vec![0, 1, 2]);
        assert_eq!(smith_order(&[2, 1], &[1, 1]), vec![1, 0]);
    }
}
