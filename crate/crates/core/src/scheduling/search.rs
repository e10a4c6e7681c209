use num_integer::Integer;
use num_rational::Ratio;
use serde::Serialize;

use super::encode::{decode, encode_decision, encode_qswc, encode_rcmax, Encoding};
use super::{JobType, Schedule, UniformInstance, UnrelatedInstance, Variant};
use crate::error::{Error, Result};
use crate::solver::Solver;

/// One decision probe made during the search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Probe {
    pub horizon: i64,
    pub feasible: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchTrace {
    pub schedule: Schedule,
    pub probes: Vec<Probe>,
}

enum Direction {
    /// Least feasible T; feasibility is upward closed.
    Least,
    /// Greatest feasible T; feasibility is downward closed.
    Greatest,
}

fn bisect(
    mut lo: i64,
    mut hi: i64,
    direction: Direction,
    mut probe: impl FnMut(i64) -> Result<Option<Schedule>>,
) -> Result<(Option<(i64, Schedule)>, Vec<Probe>)> {
    let mut probes = Vec::new();
    let mut ask = |t: i64, probes: &mut Vec<Probe>| -> Result<Option<Schedule>> {
        let out = probe(t)?;
        probes.push(Probe {
            horizon: t,
            feasible: out.is_some(),
        });
        Ok(out)
    };
    match direction {
        Direction::Least => {
            let Some(mut best) = ask(hi, &mut probes)? else {
                return Ok((None, probes));
            };
            while lo < hi {
                let mid = lo + (hi - lo) / 2;
                match ask(mid, &mut probes)? {
                    Some(s) => {
                        hi = mid;
                        best = s;
                    }
                    None => lo = mid + 1,
                }
            }
            Ok((Some((hi, best)), probes))
        }
        Direction::Greatest => {
            let Some(mut best) = ask(lo, &mut probes)? else {
                return Ok((None, probes));
            };
            while lo < hi {
                let mid = lo + (hi - lo + 1) / 2;
                match ask(mid, &mut probes)? {
                    Some(s) => {
                        lo = mid;
                        best = s;
                    }
                    None => hi = mid - 1,
                }
            }
            Ok((Some((lo, best)), probes))
        }
    }
}

fn feasible_schedule(solver: &Solver, enc: &Encoding) -> Result<Option<Schedule>> {
    let solution = solver.solve(&enc.instance)?;
    if !solution.is_optimal() {
        return Ok(None);
    }
    decode(enc, &solution.x).map(Some)
}

fn finish(
    variant: Variant,
    found: Option<(i64, Schedule)>,
    probes: Vec<Probe>,
) -> Result<SearchTrace> {
    let schedule = match found {
        None => Schedule::infeasible(variant),
        Some((t, schedule)) => {
            if schedule.objective != Some(Ratio::from_integer(t)) {
                return Err(Error::Internal(format!(
                    "search settled on T = {t} but the schedule achieves {:?}",
                    schedule.objective
                )));
            }
            schedule
        }
    };
    Ok(SearchTrace { schedule, probes })
}

/// Binary search over T for one of the uniform-machine decision variants.
pub fn search_makespan(
    inst: &UniformInstance,
    variant: Variant,
    solver: &Solver,
) -> Result<SearchTrace> {
    if !variant.is_uniform_decision() {
        return Err(Error::Invalid(format!("{variant} is not searched over T")));
    }
    inst.require(variant)?;
    let total = inst.total_work()?;
    let speed_sum: i64 = inst.speeds().iter().sum();
    let lower = Integer::div_ceil(&total, &speed_sum);
    let probe = |t: i64| feasible_schedule(solver, &encode_decision(inst, variant, t)?);
    let fastest = *inst.speeds().iter().max().expect("validated non-empty");
    let slowest = *inst.speeds().iter().min().expect("validated non-empty");
    // Upper ends are the value of a known schedule, or a bound every
    // feasible schedule meets.
    let (found, probes) = match variant {
        Variant::Cmin => bisect(
            0,
            total / slowest + inst.p_max(),
            Direction::Greatest,
            probe,
        )?,
        Variant::Cmax => bisect(
            lower,
            Integer::div_ceil(&total, &fastest),
            Direction::Least,
            probe,
        )?,
        Variant::CmaxCap => bisect(
            lower,
            Integer::div_ceil(&total, &slowest),
            Direction::Least,
            probe,
        )?,
        Variant::CmaxRelease => {
            let mut order: Vec<&JobType> = inst.types().iter().filter(|t| t.n > 0).collect();
            order.sort_by_key(|t| t.r);
            let mut end = 0i64;
            for t in order {
                end = end.max(fastest * t.r.unwrap_or(0)) + t.p * t.n;
            }
            bisect(
                lower,
                Integer::div_ceil(&end, &fastest).max(lower),
                Direction::Least,
                probe,
            )?
        }
        Variant::CmaxDeadline => {
            let due = inst
                .types()
                .iter()
                .filter(|t| t.n > 0)
                .filter_map(|t| t.d)
                .max()
                .unwrap_or(0);
            let hi = due.min(Integer::div_ceil(&total, &slowest)).max(lower);
            bisect(lower, hi, Direction::Least, probe)?
        }
        Variant::Rcmax | Variant::Qswc => unreachable!("rejected above"),
    };
    finish(variant, found, probes)
}

/// Optimal schedule for a makespan or min-load variant on uniform machines.
pub fn solve_makespan(inst: &UniformInstance, variant: Variant) -> Result<Schedule> {
    Ok(search_makespan(inst, variant, &Solver::default())?.schedule)
}

/// Least makespan on unrelated machines.
pub fn solve_rcmax(inst: &UnrelatedInstance) -> Result<Schedule> {
    Ok(search_rcmax(inst, &Solver::default())?.schedule)
}

pub fn search_rcmax(inst: &UnrelatedInstance, solver: &Solver) -> Result<SearchTrace> {
    let longest = inst.p_max();
    let hi = inst
        .multiplicities()
        .iter()
        .try_fold(0i64, |acc, &n| acc.checked_add(n.checked_mul(longest)?))
        .ok_or(Error::Overflow("makespan bound"))?;
    let (found, probes) = bisect(0, hi, Direction::Least, |t| {
        feasible_schedule(solver, &encode_rcmax(inst, t)?)
    })?;
    finish(Variant::Rcmax, found, probes)
}

/// Minimum weighted sum of completion times.
pub fn solve_qswc(inst: &UniformInstance) -> Result<Schedule> {
    let enc = encode_qswc(inst)?;
    let solution = Solver::default().solve(&enc.instance)?;
    if !solution.is_optimal() {
        return Err(Error::Internal(
            "weighted completion program has no feasible point".into(),
        ));
    }
    decode(&enc, &solution.x)
}
