//! The single stream kind: a matrix shaped like the network matrix.
//!
//! Lightweight networks use dense `M × N` matrices; countable networks use
//! finitely-describable matrices indexed by port names.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dense::DenseMatrix;
use crate::fd_matrix::FdMatrix;

/// Row and column keys of countable matrices are formatted port names.
pub type Key = String;
pub type FdMat = FdMatrix<Key>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Shape {
    Dense { rows: usize, cols: usize },
    Countable,
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shape::Dense { rows, cols } => write!(f, "{rows}x{cols}"),
            Shape::Countable => f.write_str("countable"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("shape mismatch: {left} vs {right}")]
pub struct ShapeMismatch {
    pub left: Shape,
    pub right: Shape,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Matrix {
    Dense(DenseMatrix),
    Fd(FdMat),
}

impl Matrix {
    pub fn zero(shape: Shape) -> Self {
        match shape {
            Shape::Dense { rows, cols } => Matrix::Dense(DenseMatrix::zeros(rows, cols)),
            Shape::Countable => Matrix::Fd(FdMat::zero()),
        }
    }

    /// Scalar lift: every entry equal to `x`.
    pub fn scalar(shape: Shape, x: f64) -> Self {
        match shape {
            Shape::Dense { rows, cols } => Matrix::Dense(DenseMatrix::filled(rows, cols, x)),
            Shape::Countable => Matrix::Fd(FdMat::lift_scalar(x)),
        }
    }

    pub fn shape(&self) -> Shape {
        match self {
            Matrix::Dense(d) => Shape::Dense {
                rows: d.rows(),
                cols: d.cols(),
            },
            Matrix::Fd(_) => Shape::Countable,
        }
    }

    fn check(&self, other: &Matrix) -> Result<(), ShapeMismatch> {
        if self.shape() == other.shape() {
            Ok(())
        } else {
            Err(ShapeMismatch {
                left: self.shape(),
                right: other.shape(),
            })
        }
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix, ShapeMismatch> {
        self.check(other)?;
        Ok(match (self, other) {
            (Matrix::Dense(a), Matrix::Dense(b)) => Matrix::Dense(a.add(b)),
            (Matrix::Fd(a), Matrix::Fd(b)) => Matrix::Fd(a.add(b)),
            _ => unreachable!("shapes checked"),
        })
    }

    pub fn scale(&self, c: f64) -> Matrix {
        match self {
            Matrix::Dense(a) => Matrix::Dense(a.scale(c)),
            Matrix::Fd(a) => Matrix::Fd(a.scale(c)),
        }
    }

    pub fn hadamard(&self, other: &Matrix) -> Result<Matrix, ShapeMismatch> {
        self.check(other)?;
        Ok(match (self, other) {
            (Matrix::Dense(a), Matrix::Dense(b)) => Matrix::Dense(a.hadamard(b)),
            (Matrix::Fd(a), Matrix::Fd(b)) => Matrix::Fd(a.hadamard(b)),
            _ => unreachable!("shapes checked"),
        })
    }

    /// `self += c * other`, reusing the dense buffer.
    pub fn add_scaled(&mut self, c: f64, other: &Matrix) -> Result<(), ShapeMismatch> {
        self.check(other)?;
        match (self, other) {
            (Matrix::Dense(a), Matrix::Dense(b)) => a.axpy(c, b),
            (Matrix::Fd(a), Matrix::Fd(b)) => *a = a.add(&b.scale(c)),
            _ => unreachable!("shapes checked"),
        }
        Ok(())
    }

    pub fn map_entries(&self, f: impl Fn(f64) -> f64) -> Matrix {
        match self {
            Matrix::Dense(a) => Matrix::Dense(a.map(f)),
            Matrix::Fd(a) => Matrix::Fd(a.map_entries(f)),
        }
    }

    pub fn constant_value(&self) -> Option<f64> {
        match self {
            Matrix::Dense(a) => a.constant_value(),
            Matrix::Fd(a) => a.constant_value(),
        }
    }

    /// Entry at `(row, col)`; dense matrices take decimal keys. Out-of-range
    /// or non-numeric dense keys read as zero.
    pub fn value(&self, row: &str, col: &str) -> f64 {
        match self {
            Matrix::Dense(a) => match (row.parse::<usize>(), col.parse::<usize>()) {
                (Ok(i), Ok(j)) if i < a.rows() && j < a.cols() => a.get(i, j),
                _ => 0.0,
            },
            Matrix::Fd(a) => a.value(&row.to_string(), &col.to_string()),
        }
    }

    /// Bounded-size representation of the same matrix (countable matrices
    /// are rewritten in row-canonical form; dense ones are unchanged).
    pub fn canonical(self) -> Matrix {
        match self {
            Matrix::Dense(_) => self,
            Matrix::Fd(a) => Matrix::Fd(a.canonical()),
        }
    }

    pub fn as_dense(&self) -> Option<&DenseMatrix> {
        match self {
            Matrix::Dense(d) => Some(d),
            Matrix::Fd(_) => None,
        }
    }

    pub fn as_fd(&self) -> Option<&FdMat> {
        match self {
            Matrix::Fd(a) => Some(a),
            Matrix::Dense(_) => None,
        }
    }

    pub fn has_finite_support(&self) -> bool {
        match self {
            Matrix::Dense(_) => true,
            Matrix::Fd(a) => a.finite_support(),
        }
    }

    /// Nonzero entries as `(row key, col key, value)`, sorted by position.
    /// `None` if the support is infinite.
    pub fn triplets(&self) -> Option<Vec<(Key, Key, f64)>> {
        match self {
            Matrix::Dense(d) => Some(
                d.nonzeros()
                    .map(|(i, j, x)| (i.to_string(), j.to_string(), x))
                    .collect(),
            ),
            Matrix::Fd(a) => a.triplets().ok(),
        }
    }

    /// Equality that treats NaN entries as equal to each other. Countable
    /// matrices are compared semantically.
    pub fn same_values(&self, other: &Matrix) -> bool {
        let eq = |a: f64, b: f64| a == b || (a.is_nan() && b.is_nan());
        match (self, other) {
            (Matrix::Dense(a), Matrix::Dense(b)) => {
                a.shape() == b.shape() && a.data().iter().zip(b.data()).all(|(x, y)| eq(*x, *y))
            }
            (Matrix::Fd(a), Matrix::Fd(b)) => a.semantically_equal(b),
            _ => false,
        }
    }
}

impl From<DenseMatrix> for Matrix {
    fn from(d: DenseMatrix) -> Self {
        Matrix::Dense(d)
    }
}

impl From<FdMat> for Matrix {
    fn from(a: FdMat) -> Self {
        Matrix::Fd(a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mixing_shapes_is_an_error() {
        let d = Matrix::zero(Shape::Dense { rows: 2, cols: 2 });
        let f = Matrix::zero(Shape::Countable);
        assert!(d.add(&f).is_err());
        assert!(d
            .hadamard(&Matrix::zero(Shape::Dense { rows: 2, cols: 3 }))
            .is_err());
    }

    #[test]
    fn literal_forms_deserialize_by_shape() {
        let d: Matrix = serde_json::from_str("[[1.0, 2.0]]").unwrap();
        assert_eq!(d.shape(), Shape::Dense { rows: 1, cols: 2 });
        let f: Matrix = serde_json::from_str(
            r#"{"terms":[{"u":{"default":1.0},"v":{"default":0.0,"except":{"a@o1%x":2.0}}}]}"#,
        )
        .unwrap();
        assert_eq!(f.value("anything", "a@o1%x"), 2.0);
        assert_eq!(f.value("anything", "b@o1%x"), 0.0);
    }

    #[test]
    fn dense_triplets_use_decimal_keys() {
        let mut d = DenseMatrix::zeros(2, 3);
        d.set(1, 2, -4.0);
        let t = Matrix::Dense(d).triplets().unwrap();
        assert_eq!(t, vec![("1".to_string(), "2".to_string(), -4.0)]);
    }
}
