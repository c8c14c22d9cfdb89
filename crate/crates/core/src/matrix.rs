//! Small dense integer matrices with exact arithmetic.
//!
//! Everything combinatorial in the crate (adjacency matrices, incidence
//! matrices, transplantation matrices, trace tables) lives in [`IntMatrix`].
//! Entries are `i128` and every product is overflow-checked so that a
//! comparison made here is never silently wrong.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_rational::Rational64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("dimension mismatch: {left:?} vs {right:?}")]
    Dimension {
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("integer overflow in exact matrix arithmetic")]
    Overflow,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i128>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    /// All-ones matrix `J`.
    pub fn ones(n: usize) -> Self {
        IntMatrix {
            rows: n,
            cols: n,
            data: vec![1; n * n],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> i128) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        IntMatrix { rows, cols, data }
    }

    /// Builds a matrix from nested rows; panics on ragged input.
    pub fn from_rows<R: AsRef<[i128]>>(rows: &[R]) -> Self {
        let n = rows.len();
        let m = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(n * m);
        for r in rows {
            assert_eq!(r.as_ref().len(), m, "ragged rows");
            data.extend_from_slice(r.as_ref());
        }
        IntMatrix {
            rows: n,
            cols: m,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[i128] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn checked_mul(&self, other: &IntMatrix) -> Result<IntMatrix, MatrixError> {
        if self.cols != other.rows {
            return Err(MatrixError::Dimension {
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other[(k, j)];
                    if b == 0 {
                        continue;
                    }
                    let p = a.checked_mul(b).ok_or(MatrixError::Overflow)?;
                    let slot = &mut out.data[i * other.cols + j];
                    *slot = slot.checked_add(p).ok_or(MatrixError::Overflow)?;
                }
            }
        }
        Ok(out)
    }

    /// Product of matrices whose entries are known to stay small; panics on overflow.
    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        self.checked_mul(other).expect("exact matrix product")
    }

    pub fn add(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn scale(&self, c: i128) -> IntMatrix {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    pub fn trace(&self) -> i128 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn row_sums(&self) -> Vec<i128> {
        (0..self.rows).map(|i| self.row(i).iter().sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<i128> {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self[(i, j)]).sum())
            .collect()
    }

    pub fn is_zero_one(&self) -> bool {
        self.data.iter().all(|&x| x == 0 || x == 1)
    }

    /// A permutation matrix has exactly one 1 in every row and column.
    pub fn is_permutation_matrix(&self) -> bool {
        self.is_square()
            && self.is_zero_one()
            && self.row_sums().iter().all(|&s| s == 1)
            && self.col_sums().iter().all(|&s| s == 1)
    }

    pub fn entries(&self) -> &[i128] {
        &self.data
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<i128, MatrixError> {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Ok(1);
        }
        let mut a = self.data.clone();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n - 1 {
            if a[k * n + k] == 0 {
                let Some(p) = (k + 1..n).find(|&r| a[r * n + k] != 0) else {
                    return Ok(0);
                };
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                sign = -sign;
            }
            let pivot = a[k * n + k];
            for i in k + 1..n {
                for j in k + 1..n {
                    let x = a[i * n + j]
                        .checked_mul(pivot)
                        .and_then(|v| {
                            a[i * n + k]
                                .checked_mul(a[k * n + j])
                                .and_then(|w| v.checked_sub(w))
                        })
                        .ok_or(MatrixError::Overflow)?;
                    a[i * n + j] = x / prev;
                }
                a[i * n + k] = 0;
            }
            prev = pivot;
        }
        Ok(sign * a[n * n - 1])
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        rational_rank(
            self.rows,
            self.cols,
            self.data.iter().map(|&x| Rational64::from_integer(x as i64)).collect(),
        )
    }

    pub fn to_rational(&self) -> Vec<Vec<Rational64>> {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .map(|&x| Rational64::from_integer(x as i64))
                    .collect()
            })
            .collect()
    }
}

/// Row-reduces a dense rational matrix and returns its rank.
pub fn rational_rank(rows: usize, cols: usize, mut a: Vec<Rational64>) -> usize {
    let zero = Rational64::from_integer(0);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| a[r * cols + c] != zero) else {
            continue;
        };
        for j in 0..cols {
            a.swap(rank * cols + j, p * cols + j);
        }
        let pivot = a[rank * cols + c];
        for r in 0..rows {
            if r == rank || a[r * cols + c] == zero {
                continue;
            }
            let f = a[r * cols + c] / pivot;
            for j in c..cols {
                let v = a[rank * cols + j];
                a[r * cols + j] -= f * v;
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = i128;
    fn index(&self, (i, j): (usize, usize)) -> &i128 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i128 {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| format!("{x:>2}")).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bareiss_matches_cofactor_expansion() {
        let m = IntMatrix::from_rows(&[[2, -1, 0], [1, 3, 4], [0, 5, -2]]);
        // 2*(3*-2 - 4*5) - (-1)*(1*-2 - 0) + 0 = -52 - 2
        assert_eq!(m.determinant().unwrap(), -54);
        let singular = IntMatrix::from_rows(&[[1, 2], [2, 4]]);
        assert_eq!(singular.determinant().unwrap(), 0);
        assert_eq!(singular.rank(), 1);
    }

    #[test]
    fn zero_pivot_requires_swap() {
        let m = IntMatrix::from_rows(&[[0, 1], [1, 0]]);
        assert_eq!(m.determinant().unwrap(), -1);
        assert!(m.is_permutation_matrix());
    }

    #[test]
    fn product_dimension_mismatch() {
        let a = IntMatrix::zeros(2, 3);
        assert!(matches!(a.checked_mul(&a), Err(MatrixError::Dimension { .. })));
    }
}
