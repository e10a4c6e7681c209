//! N-fold instances, objectives, solutions and the basic checks on them.

use serde::{Deserialize, Serialize};

use crate::error::{self, Error, Result};
use crate::matrix::IntMatrix;

/// Objective of an N-fold program.
///
/// `LinearMax` maximizes `c.x`; `SeparableConvexMin` minimizes
/// `sum_j a_j x_j^2 + b_j x_j` with every `a_j >= 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Objective {
    #[serde(rename = "linear_max")]
    LinearMax { c: Vec<i64> },
    #[serde(rename = "sep_convex_min")]
    SeparableConvexMin { a: Vec<i64>, b: Vec<i64> },
}

impl Objective {
    /// The all-zero linear objective used by decision encodings.
    pub fn zero(len: usize) -> Self {
        Objective::LinearMax { c: vec![0; len] }
    }

    pub fn len(&self) -> usize {
        match self {
            Objective::LinearMax { c } => c.len(),
            Objective::SeparableConvexMin { a, .. } => a.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Objective value of coordinate `j` at `v`, as reported to callers.
    pub fn term(&self, j: usize, v: i64) -> Result<i64> {
        match self {
            Objective::LinearMax { c } => error::mul(c[j], v),
            Objective::SeparableConvexMin { a, b } => {
                error::add(error::mul(a[j], error::mul(v, v)?)?, error::mul(b[j], v)?)
            }
        }
    }

    /// Coordinate value in maximization sense: larger is always better.
    pub fn utility(&self, j: usize, v: i64) -> Result<i64> {
        let t = self.term(j, v)?;
        match self {
            Objective::LinearMax { .. } => Ok(t),
            Objective::SeparableConvexMin { .. } => {
                t.checked_neg().ok_or(Error::Overflow("negation"))
            }
        }
    }

    /// True when every coefficient vanishes.
    pub fn is_zero(&self) -> bool {
        match self {
            Objective::LinearMax { c } => c.iter().all(|v| *v == 0),
            Objective::SeparableConvexMin { a, b } => a.iter().chain(b).all(|v| *v == 0),
        }
    }

    pub fn is_maximization(&self) -> bool {
        matches!(self, Objective::LinearMax { .. })
    }
}

/// One column block: `A` in the top band, `B` on the diagonal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Brick {
    pub a: IntMatrix,
    pub b: IntMatrix,
    pub b_local: Vec<i64>,
    pub lower: Vec<i64>,
    pub upper: Vec<i64>,
}

impl Brick {
    pub fn width(&self) -> usize {
        self.lower.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "InstanceFile", into = "InstanceFile")]
pub struct NFoldInstance {
    bricks: Vec<Brick>,
    b_top: Vec<i64>,
    objective: Objective,
    offsets: Vec<usize>,
}

impl NFoldInstance {
    pub fn new(bricks: Vec<Brick>, b_top: Vec<i64>, objective: Objective) -> Result<Self> {
        if bricks.is_empty() {
            return Err(Error::Invalid(
                "an N-fold instance needs at least one brick".into(),
            ));
        }
        let r = b_top.len();
        let mut offsets = Vec::with_capacity(bricks.len() + 1);
        let mut total = 0usize;
        for (i, brick) in bricks.iter().enumerate() {
            let t = brick.width();
            if brick.a.rows() != r {
                return Err(Error::DimensionMismatch(format!(
                    "brick {i}: A has {} rows, b_top has {r}",
                    brick.a.rows()
                )));
            }
            if brick.a.cols() != t || brick.b.cols() != t || brick.upper.len() != t {
                return Err(Error::DimensionMismatch(format!(
                    "brick {i}: A, B and the bounds must all have {t} columns"
                )));
            }
            if brick.b.rows() != brick.b_local.len() {
                return Err(Error::DimensionMismatch(format!(
                    "brick {i}: B has {} rows, b_local has {}",
                    brick.b.rows(),
                    brick.b_local.len()
                )));
            }
            if let Some(j) = (0..t).find(|&j| brick.lower[j] > brick.upper[j]) {
                return Err(Error::Invalid(format!(
                    "brick {i}: lower > upper at column {j}"
                )));
            }
            offsets.push(total);
            total += t;
        }
        offsets.push(total);
        if objective.len() != total {
            return Err(Error::DimensionMismatch(format!(
                "objective has {} coefficients for {total} variables",
                objective.len()
            )));
        }
        if let Objective::SeparableConvexMin { a, b } = &objective {
            if b.len() != a.len() {
                return Err(Error::DimensionMismatch(
                    "quadratic and linear parts differ in length".into(),
                ));
            }
            if a.iter().any(|v| *v < 0) {
                return Err(Error::Invalid(
                    "separable objective must have a_j >= 0".into(),
                ));
            }
        }
        Ok(Self {
            bricks,
            b_top,
            objective,
            offsets,
        })
    }

    pub fn bricks(&self) -> &[Brick] {
        &self.bricks
    }

    pub fn brick_count(&self) -> usize {
        self.bricks.len()
    }

    pub fn b_top(&self) -> &[i64] {
        &self.b_top
    }

    pub fn objective(&self) -> &Objective {
        &self.objective
    }

    /// Number of top (linking) rows.
    pub fn top_rows(&self) -> usize {
        self.b_top.len()
    }

    pub fn num_vars(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    /// First global column of brick `i`.
    pub fn offset(&self, i: usize) -> usize {
        self.offsets[i]
    }

    pub fn brick_range(&self, i: usize) -> std::ops::Range<usize> {
        self.offsets[i]..self.offsets[i + 1]
    }

    pub fn lower(&self) -> Vec<i64> {
        self.bricks
            .iter()
            .flat_map(|b| b.lower.iter().copied())
            .collect()
    }

    pub fn upper(&self) -> Vec<i64> {
        self.bricks
            .iter()
            .flat_map(|b| b.upper.iter().copied())
            .collect()
    }

    /// Largest absolute entry over all blocks.
    pub fn delta(&self) -> i64 {
        self.bricks
            .iter()
            .map(|b| b.a.max_abs().max(b.b.max_abs()))
            .max()
            .unwrap_or(0)
    }

    /// `||u - l||_inf`.
    pub fn box_width(&self) -> Result<i64> {
        let mut w = 0i64;
        for b in &self.bricks {
            for (l, u) in b.lower.iter().zip(&b.upper) {
                w = w.max(error::sub(*u, *l)?);
            }
        }
        Ok(w)
    }

    /// The right-hand side stacked as in the assembled matrix.
    pub fn rhs(&self) -> Vec<i64> {
        let mut b = self.b_top.clone();
        for brick in &self.bricks {
            b.extend_from_slice(&brick.b_local);
        }
        b
    }

    /// Concatenation `(A^(1) ... A^(n))` of the top blocks.
    pub fn top_matrix(&self) -> IntMatrix {
        let r = self.top_rows();
        let mut m = IntMatrix::zeros(r, self.num_vars());
        for (i, brick) in self.bricks.iter().enumerate() {
            let off = self.offsets[i];
            for row in 0..r {
                for c in 0..brick.width() {
                    m.set(row, off + c, brick.a.get(row, c));
                }
            }
        }
        m
    }

    /// The full `(r + sum s_i) x (sum t_i)` constraint matrix.
    pub fn assemble(&self) -> IntMatrix {
        let r = self.top_rows();
        let local: usize = self.bricks.iter().map(|b| b.b.rows()).sum();
        let mut m = IntMatrix::zeros(r + local, self.num_vars());
        let mut row_off = r;
        for (i, brick) in self.bricks.iter().enumerate() {
            let off = self.offsets[i];
            for c in 0..brick.width() {
                for row in 0..r {
                    m.set(row, off + c, brick.a.get(row, c));
                }
                for row in 0..brick.b.rows() {
                    m.set(row_off + row, off + c, brick.b.get(row, c));
                }
            }
            row_off += brick.b.rows();
        }
        m
    }

    fn check_len(&self, x: &[i64]) -> Result<()> {
        if x.len() != self.num_vars() {
            return Err(Error::DimensionMismatch(format!(
                "point has {} entries, instance has {} variables",
                x.len(),
                self.num_vars()
            )));
        }
        Ok(())
    }

    /// Top-band product `sum_i A^(i) x^(i)`.
    pub fn top_product(&self, x: &[i64]) -> Result<Vec<i64>> {
        self.check_len(x)?;
        let mut acc = vec![0i64; self.top_rows()];
        for (i, brick) in self.bricks.iter().enumerate() {
            let part = brick.a.mul_vec(&x[self.brick_range(i)])?;
            for (s, v) in acc.iter_mut().zip(part) {
                *s = error::add(*s, v)?;
            }
        }
        Ok(acc)
    }

    /// `b - Ax`, top rows first then each brick's local rows.
    pub fn residual(&self, x: &[i64]) -> Result<Vec<i64>> {
        let top = self.top_product(x)?;
        let mut res = Vec::with_capacity(self.rhs().len());
        for (b, v) in self.b_top.iter().zip(top) {
            res.push(error::sub(*b, v)?);
        }
        for (i, brick) in self.bricks.iter().enumerate() {
            let local = brick.b.mul_vec(&x[self.brick_range(i)])?;
            for (b, v) in brick.b_local.iter().zip(local) {
                res.push(error::sub(*b, v)?);
            }
        }
        Ok(res)
    }

    pub fn within_bounds(&self, x: &[i64]) -> bool {
        x.len() == self.num_vars()
            && self.bricks.iter().enumerate().all(|(i, b)| {
                x[self.brick_range(i)]
                    .iter()
                    .zip(b.lower.iter().zip(&b.upper))
                    .all(|(v, (l, u))| l <= v && v <= u)
            })
    }

    /// `Ax = b` and `l <= x <= u`.
    pub fn check_feasible(&self, x: &[i64]) -> Result<bool> {
        self.check_len(x)?;
        if !self.within_bounds(x) {
            return Ok(false);
        }
        Ok(self.residual(x)?.iter().all(|v| *v == 0))
    }

    pub fn evaluate_objective(&self, x: &[i64]) -> Result<i64> {
        self.check_len(x)?;
        x.iter().enumerate().try_fold(0i64, |acc, (j, v)| {
            error::add(acc, self.objective.term(j, *v)?)
        })
    }

    /// Objective in maximization sense (negated for convex minimization).
    pub fn utility(&self, x: &[i64]) -> Result<i64> {
        self.check_len(x)?;
        x.iter().enumerate().try_fold(0i64, |acc, (j, v)| {
            error::add(acc, self.objective.utility(j, *v)?)
        })
    }

    /// Input measure `L = log2(||u - l||_inf) * log2(c_max)`, where `c_max`
    /// is the largest `|c.x|` over the box. Zero when either factor's
    /// argument is at most 1.
    pub fn input_measure(&self) -> Result<f64> {
        let c = match &self.objective {
            Objective::LinearMax { c } => c,
            Objective::SeparableConvexMin { .. } => {
                return Err(Error::NotApplicable(
                    "input measure is defined for linear objectives".into(),
                ))
            }
        };
        let lower = self.lower();
        let upper = self.upper();
        let (mut hi, mut lo) = (0i128, 0i128);
        for j in 0..c.len() {
            let a = c[j] as i128 * lower[j] as i128;
            let b = c[j] as i128 * upper[j] as i128;
            hi = hi.checked_add(a.max(b)).ok_or(Error::Overflow("c_max"))?;
            lo = lo.checked_add(a.min(b)).ok_or(Error::Overflow("c_max"))?;
        }
        let c_max = hi.unsigned_abs().max(lo.unsigned_abs());
        let width = self.box_width()?;
        if width <= 1 || c_max <= 1 {
            return Ok(0.0);
        }
        Ok((width as f64).log2() * (c_max as f64).log2())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct BrickFile {
    #[serde(rename = "A")]
    a: Vec<Vec<i64>>,
    #[serde(rename = "B")]
    b: Vec<Vec<i64>>,
    b_local: Vec<i64>,
    lower: Vec<i64>,
    upper: Vec<i64>,
}

/// On-disk layout of an instance.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    objective: Objective,
    b_top: Vec<i64>,
    bricks: Vec<BrickFile>,
}

impl TryFrom<InstanceFile> for NFoldInstance {
    type Error = Error;

    fn try_from(f: InstanceFile) -> Result<Self> {
        let bricks = f
            .bricks
            .into_iter()
            .map(|b| {
                let t = b.lower.len();
                Ok(Brick {
                    a: IntMatrix::from_rows(&b.a, t)?,
                    b: IntMatrix::from_rows(&b.b, t)?,
                    b_local: b.b_local,
                    lower: b.lower,
                    upper: b.upper,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        NFoldInstance::new(bricks, f.b_top, f.objective)
    }
}

impl From<NFoldInstance> for InstanceFile {
    fn from(inst: NFoldInstance) -> Self {
        InstanceFile {
            objective: inst.objective,
            b_top: inst.b_top,
            bricks: inst
                .bricks
                .into_iter()
                .map(|b| BrickFile {
                    a: b.a.to_rows(),
                    b: b.b.to_rows(),
                    b_local: b.b_local,
                    lower: b.lower,
                    upper: b.upper,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Optimal,
    Infeasible,
}

/// One applied augmentation step, recorded when step logging is on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StepRecord {
    pub phase: u8,
    pub lambda: i64,
    pub step: Vec<i64>,
    pub gain: i64,
    pub objective: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Solution {
    pub status: Status,
    pub x: Vec<i64>,
    #[serde(rename = "objective")]
    pub objective_value: i64,
    pub iterations: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub steps: Vec<StepRecord>,
}

impl Solution {
    pub fn infeasible(iterations: usize) -> Self {
        Solution {
            status: Status::Infeasible,
            x: Vec::new(),
            objective_value: 0,
            iterations,
            steps: Vec::new(),
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == Status::Optimal
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) fn brick(
        a: &[Vec<i64>],
        b: &[Vec<i64>],
        b_local: &[i64],
        lower: &[i64],
        upper: &[i64],
    ) -> Brick {
        let t = lower.len();
        Brick {
            a: IntMatrix::from_rows(a, t).unwrap(),
            b: IntMatrix::from_rows(b, t).unwrap(),
            b_local: b_local.to_vec(),
            lower: lower.to_vec(),
            upper: upper.to_vec(),
        }
    }

    fn identity_pair() -> NFoldInstance {
        let bricks = vec![
            brick(&[vec![1]], &[vec![1]], &[1], &[0], &[3]),
            brick(&[vec![1]], &[vec![1]], &[1], &[0], &[3]),
        ];
        NFoldInstance::new(bricks, vec![2], Objective::zero(2)).unwrap()
    }

    #[test]
    fn assemble_single_brick() {
        let inst = NFoldInstance::new(
            vec![brick(&[vec![1]], &[vec![2]], &[0], &[0], &[1])],
            vec![0],
            Objective::zero(1),
        )
        .unwrap();
        assert_eq!(inst.assemble().to_rows(), vec![vec![1], vec![2]]);
    }

    #[test]
    fn assemble_two_identity_bricks() {
        assert_eq!(
            identity_pair().assemble().to_rows(),
            vec![vec![1, 1], vec![1, 0], vec![0, 1]]
        );
    }

    #[test]
    fn assemble_wide_bricks() {
        let bricks = vec![
            brick(&[vec![1, 0]], &[vec![1, 1]], &[0], &[0, 0], &[1, 1]),
            brick(&[vec![0, 1]], &[vec![1, 1]], &[0], &[0, 0], &[1, 1]),
        ];
        let inst = NFoldInstance::new(bricks, vec![0], Objective::zero(4)).unwrap();
        assert_eq!(
            inst.assemble().to_rows(),
            vec![vec![1, 0, 0, 1], vec![1, 1, 0, 0], vec![0, 0, 1, 1]]
        );
    }

    #[test]
    fn feasibility_checks() {
        let inst = identity_pair();
        assert!(inst.check_feasible(&[1, 1]).unwrap());
        assert!(!inst.check_feasible(&[2, 0]).unwrap());
        let mut loose = inst.clone();
        loose.bricks[0].upper[0] = 0;
        assert!(!loose.check_feasible(&[1, 1]).unwrap());
        assert!(inst.check_feasible(&[1]).is_err());
    }

    #[test]
    fn objective_values() {
        let lin = Objective::LinearMax { c: vec![1, 2] };
        let cvx = Objective::SeparableConvexMin {
            a: vec![1, 0],
            b: vec![0, 1],
        };
        let mk = |o: Objective| {
            NFoldInstance::new(
                vec![brick(&[vec![0, 0]], &[], &[], &[-10, -10], &[10, 10])],
                vec![0],
                o,
            )
            .unwrap()
        };
        assert_eq!(mk(lin.clone()).evaluate_objective(&[3, 4]).unwrap(), 11);
        assert_eq!(mk(cvx.clone()).evaluate_objective(&[2, 5]).unwrap(), 9);
        assert_eq!(mk(lin).evaluate_objective(&[0, 0]).unwrap(), 0);
        assert_eq!(mk(cvx.clone()).evaluate_objective(&[0, 0]).unwrap(), 0);
        assert!(matches!(
            mk(cvx).input_measure(),
            Err(Error::NotApplicable(_))
        ));
    }

    #[test]
    fn input_measure_values() {
        let mk = |c: Vec<i64>, lo: i64, hi: i64| {
            NFoldInstance::new(
                vec![brick(&[vec![0]], &[], &[], &[lo], &[hi])],
                vec![0],
                Objective::LinearMax { c },
            )
            .unwrap()
        };
        // width 8, c_max = 2 * 8 = 16
        assert_eq!(mk(vec![2], 0, 8).input_measure().unwrap(), 12.0);
        assert_eq!(mk(vec![2], 4, 4).input_measure().unwrap(), 0.0);
        assert_eq!(mk(vec![0], 0, 8).input_measure().unwrap(), 0.0);
        // c_max from the negative side
        assert_eq!(mk(vec![-2], -8, 0).input_measure().unwrap(), 12.0);
    }

    #[test]
    fn validation_errors() {
        let bad_r = NFoldInstance::new(
            vec![brick(&[vec![1], vec![1]], &[], &[], &[0], &[1])],
            vec![0],
            Objective::zero(1),
        );
        assert!(matches!(bad_r, Err(Error::DimensionMismatch(_))));
        let inverted = NFoldInstance::new(
            vec![brick(&[vec![1]], &[], &[], &[2], &[1])],
            vec![0],
            Objective::zero(1),
        );
        assert!(matches!(inverted, Err(Error::Invalid(_))));
        let nonconvex = NFoldInstance::new(
            vec![brick(&[vec![1]], &[], &[], &[0], &[1])],
            vec![0],
            Objective::SeparableConvexMin {
                a: vec![-1],
                b: vec![0],
            },
        );
        assert!(matches!(nonconvex, Err(Error::Invalid(_))));
    }

    #[test]
    fn json_layout() {
        let text = r#"{"objective":{"kind":"linear_max","c":[1,3]},"b_top":[6],
            "bricks":[{"A":[[1]],"B":[],"b_local":[],"lower":[0],"upper":[5]},
                      {"A":[[1]],"B":[],"b_local":[],"lower":[0],"upper":[5]}]}"#;
        let inst: NFoldInstance = serde_json::from_str(text).unwrap();
        assert_eq!(inst.brick_count(), 2);
        assert_eq!(inst.bricks()[0].b.rows(), 0);
        let back: NFoldInstance =
            serde_json::from_str(&serde_json::to_string(&inst).unwrap()).unwrap();
        assert_eq!(back, inst);
        assert!(serde_json::from_str::<NFoldInstance>(&text.replace("[6]", "[6.5]")).is_err());
    }
}
