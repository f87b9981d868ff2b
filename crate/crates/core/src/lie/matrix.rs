//! Dense exact rational matrices.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: Vec<Vec<BigRational>>,
    ncols: usize,
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Debug, Clone)]
pub struct Echelon {
    pub matrix: RationalMatrix,
    pub pivots: Vec<usize>,
}

impl RationalMatrix {
    /// Panics if the rows have differing lengths.
    pub fn from_rows(rows: Vec<Vec<BigRational>>, ncols: usize) -> Self {
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged matrix");
        RationalMatrix {
            rows,
            ncols,
            row_labels: Vec::new(),
            col_labels: Vec::new(),
        }
    }

    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        RationalMatrix::from_rows(vec![vec![BigRational::zero(); ncols]; nrows], ncols)
    }

    pub fn with_labels(mut self, rows: Vec<String>, cols: Vec<String>) -> Self {
        self.row_labels = rows;
        self.col_labels = cols;
        self
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn row(&self, i: usize) -> &[BigRational] {
        &self.rows[i]
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.rows[i][j]
    }

    pub fn transpose(&self) -> RationalMatrix {
        let rows = (0..self.ncols)
            .map(|j| self.rows.iter().map(|r| r[j].clone()).collect())
            .collect();
        RationalMatrix {
            rows,
            ncols: self.rows.len(),
            row_labels: self.col_labels.clone(),
            col_labels: self.row_labels.clone(),
        }
    }

    /// Gauss-Jordan elimination. The pivot in each column is the first
    /// nonzero entry at or below the current row.
    pub fn echelon(&self) -> Echelon {
        let mut m = self.rows.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.ncols {
            if r == m.len() {
                break;
            }
            let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
                continue;
            };
            m.swap(r, p);
            let inv = m[r][c].recip();
            for x in m[r].iter_mut() {
                *x *= &inv;
            }
            let pivot_row = m[r].clone();
            for (i, row) in m.iter_mut().enumerate() {
                if i == r || row[c].is_zero() {
                    continue;
                }
                let k = row[c].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row).skip(c) {
                    if !p.is_zero() {
                        *x -= &k * p;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        Echelon {
            matrix: RationalMatrix::from_rows(m, self.ncols),
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.echelon().pivots.len()
    }

    /// Basis of `{ x : M x = 0 }`, one vector per free column, with a 1 in
    /// that column.
    pub fn right_kernel(&self) -> Vec<Vec<BigRational>> {
        let Echelon { matrix, pivots } = self.echelon();
        (0..self.ncols)
            .filter(|c| !pivots.contains(c))
            .map(|free| {
                let mut v = vec![BigRational::zero(); self.ncols];
                v[free] = BigRational::one();
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = -matrix.rows[r][free].clone();
                }
                v
            })
            .collect()
    }

    /// Basis of `{ y : y M = 0 }`, the dependencies among rows.
    pub fn left_kernel(&self) -> Vec<Vec<BigRational>> {
        self.transpose().right_kernel()
    }

    /// Rank together with a left-kernel basis.
    pub fn rank_kernel(&self) -> (usize, Vec<Vec<BigRational>>) {
        (self.rank(), self.left_kernel())
    }

    /// `y M`
    pub fn left_mul(&self, y: &[BigRational]) -> Vec<BigRational> {
        assert_eq!(y.len(), self.nrows());
        let mut out = vec![BigRational::zero(); self.ncols];
        for (c, row) in y.iter().zip(&self.rows) {
            if c.is_zero() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(row) {
                *o += c * x;
            }
        }
        out
    }

    /// Solves `M x = b`; fails when `b` is outside the column space. Free
    /// variables are set to zero.
    pub fn solve(&self, b: &[BigRational]) -> Result<Vec<BigRational>> {
        if b.len() != self.nrows() {
            return Err(Error::Malformed(format!(
                "right-hand side has length {}, expected {}",
                b.len(),
                self.nrows()
            )));
        }
        let augmented = RationalMatrix::from_rows(
            self.rows
                .iter()
                .zip(b)
                .map(|(r, x)| {
                    r.iter()
                        .cloned()
                        .chain(std::iter::once(x.clone()))
                        .collect()
                })
                .collect(),
            self.ncols + 1,
        );
        let Echelon { matrix, pivots } = augmented.echelon();
        if pivots.last() == Some(&self.ncols) {
            return Err(Error::Inconsistent(
                "right-hand side is not in the column space".into(),
            ));
        }
        let mut x = vec![BigRational::zero(); self.ncols];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = matrix.rows[r][self.ncols].clone();
        }
        Ok(x)
    }
}

pub fn rank_kernel(m: &RationalMatrix) -> (usize, Vec<Vec<BigRational>>) {
    m.rank_kernel()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::tree::int;

    fn mat(rows: &[&[i64]]) -> RationalMatrix {
        let ncols = rows[0].len();
        RationalMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| int(x)).collect())
                .collect(),
            ncols,
        )
    }

    #[test]
    fn zero_matrix() {
        let m = RationalMatrix::zeros(3, 2);
        let (rank, kernel) = m.rank_kernel();
        assert_eq!(rank, 0);
        assert_eq!(kernel.len(), 3);
    }

    #[test]
    fn small_rank_and_kernel() {
        let m = mat(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        let (rank, kernel) = m.rank_kernel();
        assert_eq!(rank, 2);
        assert_eq!(kernel, vec![vec![int(-2), int(1), int(0)]]);
        assert!(m.left_mul(&kernel[0]).iter().all(Zero::is_zero));
        for v in m.right_kernel() {
            for r in 0..3 {
                let dot: BigRational = m.row(r).iter().zip(&v).map(|(a, b)| a * b).sum();
                assert!(dot.is_zero());
            }
        }
    }

    #[test]
    fn solve_consistent_and_not() {
        let m = mat(&[&[1, 1], &[1, -1], &[2, 0]]);
        assert_eq!(
            m.solve(&[int(3), int(1), int(4)]).unwrap(),
            vec![int(2), int(1)]
        );
        assert!(matches!(
            m.solve(&[int(3), int(1), int(5)]),
            Err(Error::Inconsistent(_))
        ));
    }
}
