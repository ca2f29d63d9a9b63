//! Dense exact-rational matrices, just enough for the gap and walk operators.

use std::fmt;

use num_traits::{One, Zero};

use crate::scalar::Rational;

#[derive(Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zeros(size, size);
        for i in 0..size {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> &Rational {
        &self.data[row * self.cols + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Rational) {
        self.data[row * self.cols + col] = value;
    }

    pub fn row(&self, row: usize) -> &[Rational] {
        &self.data[row * self.cols..(row + 1) * self.cols]
    }

    pub fn row_sum(&self, row: usize) -> Rational {
        self.row(row)
            .iter()
            .fold(Rational::zero(), |acc, x| acc + x)
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// `M · v` (column vector on the right).
    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols, "dimension mismatch in mul_vec");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(m, _)| !m.is_zero())
                    .fold(Rational::zero(), |acc, (m, x)| acc + m * x)
            })
            .collect()
    }

    /// `v · M` (row vector on the left). One step of a distribution.
    pub fn vec_mul(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.rows, "dimension mismatch in vec_mul");
        let mut out = vec![Rational::zero(); self.cols];
        for (i, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, m) in self.row(i).iter().enumerate() {
                if !m.is_zero() {
                    out[j] += x * m;
                }
            }
        }
        out
    }

    pub fn mul(&self, other: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in mul");
        let mut out = ExactMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let row = other.vec_mul(self.row(i));
            out.data[i * other.cols..(i + 1) * other.cols].clone_from_slice(&row);
        }
        out
    }

    pub fn pow(&self, exp: u32) -> ExactMatrix {
        assert_eq!(self.rows, self.cols, "pow of non-square matrix");
        let mut result = ExactMatrix::identity(self.rows);
        for _ in 0..exp {
            result = result.mul(self);
        }
        result
    }
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ExactMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let cells: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  {}", cells.join(", "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    #[test]
    fn products_agree_with_hand_values() {
        let mut m = ExactMatrix::zeros(2, 2);
        m.set(0, 0, q(1, 2));
        m.set(0, 1, q(1, 2));
        m.set(1, 0, q(1, 3));
        m.set(1, 1, q(2, 3));
        assert_eq!(m.mul_vec(&[q(1, 1), q(0, 1)]), vec![q(1, 2), q(1, 3)]);
        assert_eq!(m.vec_mul(&[q(1, 1), q(0, 1)]), vec![q(1, 2), q(1, 2)]);
        let sq = m.pow(2);
        assert_eq!(*sq.get(0, 0), q(1, 4) + q(1, 6));
        assert_eq!(sq.row_sum(1), q(1, 1));
        assert_eq!(m.pow(0), ExactMatrix::identity(2));
    }
}
