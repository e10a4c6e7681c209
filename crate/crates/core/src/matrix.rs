//! Dense integer matrices with checked arithmetic.

use serde::{Deserialize, Serialize};

use crate::error::{self, Error, Result};

/// Row-major dense integer matrix.
///
/// Zero-row and zero-column matrices are legal; a brick without local
/// constraints carries a `0 x t` matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<i64>) -> Result<Self> {
        if rows.checked_mul(cols) != Some(data.len()) {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from nested rows. `cols` fixes the width when there
    /// are no rows to infer it from.
    pub fn from_rows(rows: &[Vec<i64>], cols: usize) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            data.extend_from_slice(row);
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Like [`IntMatrix::from_rows`] but infers the width from the first row.
    pub fn from_nested(rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        Self::from_rows(rows, cols)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: i64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[i64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<i64> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    /// Largest absolute entry (the `Delta` of the block matrices).
    pub fn max_abs(&self) -> i64 {
        self.data
            .iter()
            .map(|v| v.saturating_abs())
            .max()
            .unwrap_or(0)
    }

    /// Column indices with a nonzero entry in row `r`.
    pub fn support(&self, r: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(r)
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != 0)
            .map(|(c, _)| c)
    }

    pub fn mul_vec(&self, x: &[i64]) -> Result<Vec<i64>> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                x.len(),
                self.cols
            )));
        }
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(x)
                    .try_fold(0i64, |acc, (a, b)| error::add(acc, error::mul(*a, *b)?))
            })
            .collect()
    }

    /// Matrix made of the selected rows, in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * self.cols);
        for &r in rows {
            data.extend_from_slice(self.row(r));
        }
        Self {
            rows: rows.len(),
            cols: self.cols,
            data,
        }
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hconcat(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot concatenate {} rows with {} rows",
                self.rows, other.rows
            )));
        }
        let cols = self.cols + other.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for r in 0..self.rows {
            data.extend_from_slice(self.row(r));
            data.extend_from_slice(other.row(r));
        }
        Ok(Self {
            rows: self.rows,
            cols,
            data,
        })
    }
}

impl Serialize for IntMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<i64>>::deserialize(d)?;
        IntMatrix::from_nested(&rows).map_err(serde::de::Error::custom)
    }
}

/// l1 norm, saturating.
pub fn l1_norm(v: &[i64]) -> u64 {
    v.iter()
        .fold(0u64, |acc, x| acc.saturating_add(x.unsigned_abs()))
}

pub fn linf_norm(v: &[i64]) -> u64 {
    v.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0)
}

/// `z` is sign-compatible with `y` and `|z_j| <= |y_j|` everywhere.
pub fn is_conformal(z: &[i64], y: &[i64]) -> bool {
    z.iter().zip(y).all(|(a, b)| {
        (*a == 0) || (a.signum() == b.signum() && a.unsigned_abs() <= b.unsigned_abs())
    })
}

pub fn is_sign_compatible(a: &[i64], b: &[i64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x.signum() * y.signum() >= 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_lengths() {
        assert!(IntMatrix::new(2, 2, vec![1, 2, 3]).is_err());
        assert!(IntMatrix::from_rows(&[vec![1, 2], vec![3]], 2).is_err());
    }

    #[test]
    fn mul_vec_detects_overflow() {
        let m = IntMatrix::from_nested(&[vec![i64::MAX, 1]]).unwrap();
        assert_eq!(m.mul_vec(&[1, 0]).unwrap(), vec![i64::MAX]);
        assert!(matches!(m.mul_vec(&[1, 1]), Err(Error::Overflow(_))));
        assert!(matches!(m.mul_vec(&[2, 0]), Err(Error::Overflow(_))));
    }

    #[test]
    fn conformality() {
        assert!(is_conformal(&[1, 0, -1], &[2, 3, -1]));
        assert!(!is_conformal(&[1, 0, 1], &[2, 3, -1]));
        assert!(!is_conformal(&[3, 0, 0], &[2, 3, -1]));
        assert!(is_sign_compatible(&[0, -2], &[5, -1]));
    }

    #[test]
    fn hconcat_and_select() {
        let a = IntMatrix::identity(2);
        let b = IntMatrix::from_nested(&[vec![5], vec![6]]).unwrap();
        let c = a.hconcat(&b).unwrap();
        assert_eq!(c.to_rows(), vec![vec![1, 0, 5], vec![0, 1, 6]]);
        assert_eq!(c.select_rows(&[1]).to_rows(), vec![vec![0, 1, 6]]);
        assert_eq!(c.max_abs(), 6);
    }
}
