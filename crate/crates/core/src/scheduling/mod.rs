//! High-multiplicity scheduling on uniform and unrelated machines.
//!
//! Every variant becomes one N-fold brick per machine whose top band counts
//! how many jobs of each type were placed. Makespan-style objectives are
//! found by binary search over decision instances; the weighted completion
//! objective is a single separable convex program.

mod encode;
mod search;

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::model::Status;

pub use encode::{decode, encode_decision, encode_qswc, encode_rcmax, Encoding};
pub use search::{
    search_makespan, search_rcmax, solve_makespan, solve_qswc, solve_rcmax, Probe, SearchTrace,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    Cmax,
    Cmin,
    CmaxCap,
    CmaxRelease,
    CmaxDeadline,
    Rcmax,
    Qswc,
}

impl Variant {
    pub const ALL: [Variant; 7] = [
        Variant::Cmax,
        Variant::Cmin,
        Variant::CmaxCap,
        Variant::CmaxRelease,
        Variant::CmaxDeadline,
        Variant::Rcmax,
        Variant::Qswc,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Variant::Cmax => "cmax",
            Variant::Cmin => "cmin",
            Variant::CmaxCap => "cmax-cap",
            Variant::CmaxRelease => "cmax-release",
            Variant::CmaxDeadline => "cmax-deadline",
            Variant::Rcmax => "rcmax",
            Variant::Qswc => "qswc",
        }
    }

    /// Decision variants share the binary search over uniform machines.
    pub fn is_uniform_decision(self) -> bool {
        !matches!(self, Variant::Rcmax | Variant::Qswc)
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Variant::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown scheduling variant `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JobType {
    pub p: i64,
    pub n: i64,
    pub w: Option<i64>,
    pub r: Option<i64>,
    pub d: Option<i64>,
}

impl JobType {
    pub fn new(p: i64, n: i64) -> Self {
        JobType {
            p,
            n,
            w: None,
            r: None,
            d: None,
        }
    }
}

/// Job types on machines that differ only by speed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniformInstance {
    speeds: Vec<i64>,
    types: Vec<JobType>,
    capacities: Option<Vec<i64>>,
}

impl UniformInstance {
    pub fn new(
        speeds: Vec<i64>,
        types: Vec<JobType>,
        capacities: Option<Vec<i64>>,
    ) -> Result<Self> {
        if speeds.is_empty() {
            return Err(Error::Invalid("at least one machine is required".into()));
        }
        if let Some(i) = speeds.iter().position(|s| *s <= 0) {
            return Err(Error::Invalid(format!(
                "machine {i} has a non-positive speed"
            )));
        }
        if types.is_empty() {
            return Err(Error::Invalid("at least one job type is required".into()));
        }
        for (j, t) in types.iter().enumerate() {
            if t.p <= 0 {
                return Err(Error::Invalid(format!(
                    "job type {j} has a non-positive processing time"
                )));
            }
            if t.n < 0 {
                return Err(Error::Invalid(format!(
                    "job type {j} has a negative multiplicity"
                )));
            }
            if [t.w, t.r, t.d].iter().flatten().any(|v| *v < 0) {
                return Err(Error::Invalid(format!(
                    "job type {j} has a negative weight, release or deadline"
                )));
            }
        }
        if let Some(caps) = &capacities {
            if caps.len() != speeds.len() {
                return Err(Error::DimensionMismatch(format!(
                    "{} capacities for {} machines",
                    caps.len(),
                    speeds.len()
                )));
            }
            if caps.iter().any(|c| *c < 0) {
                return Err(Error::Invalid("capacities must be non-negative".into()));
            }
        }
        Ok(UniformInstance {
            speeds,
            types,
            capacities,
        })
    }

    pub fn speeds(&self) -> &[i64] {
        &self.speeds
    }

    pub fn types(&self) -> &[JobType] {
        &self.types
    }

    pub fn capacities(&self) -> Option<&[i64]> {
        self.capacities.as_deref()
    }

    pub fn machine_count(&self) -> usize {
        self.speeds.len()
    }

    pub fn type_count(&self) -> usize {
        self.types.len()
    }

    pub fn p_max(&self) -> i64 {
        self.types.iter().map(|t| t.p).max().unwrap_or(0)
    }

    pub fn total_jobs(&self) -> i64 {
        self.types.iter().map(|t| t.n).sum()
    }

    /// Σ p_j n_j.
    pub fn total_work(&self) -> Result<i64> {
        self.types.iter().try_fold(0i64, |acc, t| {
            acc.checked_add(t.p.checked_mul(t.n).ok_or(Error::Overflow("total work"))?)
                .ok_or(Error::Overflow("total work"))
        })
    }

    /// Fails unless the optional data `variant` relies on is present.
    pub fn require(&self, variant: Variant) -> Result<()> {
        let missing = |what: &str| Err(Error::Invalid(format!("variant {variant} needs {what}")));
        match variant {
            Variant::CmaxCap if self.capacities.is_none() => missing("capacities"),
            Variant::CmaxRelease if self.types.iter().any(|t| t.r.is_none()) => {
                missing("a release time per type")
            }
            Variant::CmaxDeadline if self.types.iter().any(|t| t.d.is_none()) => {
                missing("a deadline per type")
            }
            Variant::Qswc if self.types.iter().any(|t| t.w.is_none()) => {
                missing("a weight per type")
            }
            Variant::Rcmax => Err(Error::Invalid(
                "rcmax takes an unrelated-machines instance".into(),
            )),
            _ => Ok(()),
        }
    }
}

/// Machines of a few kinds; a job type may be unprocessable on a kind.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnrelatedInstance {
    machine_kinds: Vec<usize>,
    /// `times[kind][type]`, `None` for incompatible pairs.
    times: Vec<Vec<Option<i64>>>,
    multiplicities: Vec<i64>,
}

impl UnrelatedInstance {
    pub fn new(
        machine_kinds: Vec<usize>,
        times: Vec<Vec<Option<i64>>>,
        multiplicities: Vec<i64>,
    ) -> Result<Self> {
        if machine_kinds.is_empty() {
            return Err(Error::Invalid("at least one machine is required".into()));
        }
        if multiplicities.is_empty() {
            return Err(Error::Invalid("at least one job type is required".into()));
        }
        if multiplicities.iter().any(|n| *n < 0) {
            return Err(Error::Invalid("multiplicities must be non-negative".into()));
        }
        if let Some(i) = machine_kinds.iter().position(|k| *k >= times.len()) {
            return Err(Error::Invalid(format!(
                "machine {i} refers to an unknown kind"
            )));
        }
        for (k, row) in times.iter().enumerate() {
            if row.len() != multiplicities.len() {
                return Err(Error::DimensionMismatch(format!(
                    "kind {k} lists {} times for {} job types",
                    row.len(),
                    multiplicities.len()
                )));
            }
            if row.iter().flatten().any(|p| *p <= 0) {
                return Err(Error::Invalid(format!(
                    "kind {k} has a non-positive processing time"
                )));
            }
        }
        Ok(UnrelatedInstance {
            machine_kinds,
            times,
            multiplicities,
        })
    }

    pub fn machine_kinds(&self) -> &[usize] {
        &self.machine_kinds
    }

    pub fn kind_count(&self) -> usize {
        self.times.len()
    }

    pub fn machine_count(&self) -> usize {
        self.machine_kinds.len()
    }

    pub fn type_count(&self) -> usize {
        self.multiplicities.len()
    }

    pub fn multiplicities(&self) -> &[i64] {
        &self.multiplicities
    }

    /// Processing time of `job_type` on machine `i`.
    pub fn time(&self, i: usize, job_type: usize) -> Option<i64> {
        self.times[self.machine_kinds[i]][job_type]
    }

    pub fn p_max(&self) -> i64 {
        self.times
            .iter()
            .flatten()
            .flatten()
            .copied()
            .max()
            .unwrap_or(0)
    }
}

/// Assignment of job types to one machine.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MachineSchedule {
    pub counts: Vec<i64>,
    /// Block start per job type in units of work; divide by the machine
    /// speed for wall-clock time.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub starts: Option<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Schedule {
    pub status: Status,
    pub variant: Variant,
    pub machines: Vec<MachineSchedule>,
    /// Makespan or minimum load for the search variants, the weighted sum
    /// of completion times for `qswc`.
    #[serde(
        serialize_with = "ratio_as_string",
        skip_serializing_if = "Option::is_none"
    )]
    pub objective: Option<Ratio<i64>>,
}

impl Schedule {
    pub fn infeasible(variant: Variant) -> Self {
        Schedule {
            status: Status::Infeasible,
            variant,
            machines: Vec::new(),
            objective: None,
        }
    }
}

fn ratio_as_string<S: Serializer>(
    value: &Option<Ratio<i64>>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match value {
        Some(v) => s.serialize_str(&v.to_string()),
        None => s.serialize_none(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TypeFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<i64>,
    pub n: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KindsFile {
    /// Kind index of every machine.
    pub machines: Vec<usize>,
    /// `times[kind][type]`; `null` marks an incompatible pair.
    pub times: Vec<Vec<Option<i64>>>,
}

/// On-disk scheduling instance. Uniform variants read `speeds`, `types`
/// and `capacities`; `rcmax` reads `types[*].n` and `kinds`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchedulingFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub speeds: Option<Vec<i64>>,
    pub types: Vec<TypeFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub capacities: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kinds: Option<KindsFile>,
}

impl SchedulingFile {
    pub fn uniform(&self) -> Result<UniformInstance> {
        let speeds = self
            .speeds
            .clone()
            .ok_or_else(|| Error::Invalid("missing `speeds`".into()))?;
        let types = self
            .types
            .iter()
            .enumerate()
            .map(|(j, t)| {
                let p =
                    t.p.ok_or_else(|| Error::Invalid(format!("job type {j} has no `p`")))?;
                Ok(JobType {
                    p,
                    n: t.n,
                    w: t.w,
                    r: t.r,
                    d: t.d,
                })
            })
            .collect::<Result<_>>()?;
        UniformInstance::new(speeds, types, self.capacities.clone())
    }

    pub fn unrelated(&self) -> Result<UnrelatedInstance> {
        let kinds = self
            .kinds
            .as_ref()
            .ok_or_else(|| Error::Invalid("missing `kinds`".into()))?;
        UnrelatedInstance::new(
            kinds.machines.clone(),
            kinds.times.clone(),
            self.types.iter().map(|t| t.n).collect(),
        )
    }

    pub fn from_uniform(inst: &UniformInstance) -> Self {
        SchedulingFile {
            speeds: Some(inst.speeds.clone()),
            types: inst
                .types
                .iter()
                .map(|t| TypeFile {
                    p: Some(t.p),
                    n: t.n,
                    w: t.w,
                    r: t.r,
                    d: t.d,
                })
                .collect(),
            capacities: inst.capacities.clone(),
            kinds: None,
        }
    }

    pub fn from_unrelated(inst: &UnrelatedInstance) -> Self {
        SchedulingFile {
            speeds: None,
            types: inst
                .multiplicities
                .iter()
                .map(|&n| TypeFile {
                    p: None,
                    n,
                    w: None,
                    r: None,
                    d: None,
                })
                .collect(),
            capacities: None,
            kinds: Some(KindsFile {
                machines: inst.machine_kinds.clone(),
                times: inst.times.clone(),
            }),
        }
    }
}

/// Runs the pipeline matching `variant` on a parsed instance file.
pub fn solve_schedule(file: &SchedulingFile, variant: Variant) -> Result<Schedule> {
    match variant {
        Variant::Rcmax => solve_rcmax(&file.unrelated()?),
        Variant::Qswc => solve_qswc(&file.uniform()?),
        _ => solve_makespan(&file.uniform()?, variant),
    }
}
