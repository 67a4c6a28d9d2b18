use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Dense matrix of exact rationals, stored row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix { rows, cols, data: vec![BigRational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigRational::one());
        }
        m
    }

    /// Builds from rows; all rows must have the same length.
    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        ExactMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| BigRational::from_integer(BigInt::from(v))).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigRational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigRational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j) + a * b;
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    /// Row-wise denominator clearing: an integer matrix with the same row space.
    fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|i| {
                let row = self.row(i);
                let l = row.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
                row.iter().map(|v| (v * BigRational::from_integer(l.clone())).to_integer()).collect()
            })
            .collect()
    }

    /// Fraction-free echelon pass; returns the rank and the sign-adjusted last
    /// pivot (the determinant when square and nonsingular, up to the row
    /// scalings applied while clearing denominators).
    fn bareiss(&self) -> (usize, BigInt) {
        let mut a = self.integer_rows();
        let (m, n) = (self.rows, self.cols);
        let mut prev = BigInt::one();
        let mut r = 0;
        let mut sign = 1i32;
        for c in 0..n {
            if r == m {
                break;
            }
            let Some(p) = (r..m).find(|&i| !a[i][c].is_zero()) else {
                continue;
            };
            if p != r {
                a.swap(p, r);
                sign = -sign;
            }
            let (top, rest) = a.split_at_mut(r + 1);
            let prow = &top[r];
            for row in rest.iter_mut() {
                let lead = std::mem::take(&mut row[c]);
                for j in c + 1..n {
                    let mut v = &row[j] * &prow[c];
                    if !lead.is_zero() && !prow[j].is_zero() {
                        v -= &lead * &prow[j];
                    }
                    row[j] = if prev.is_one() { v } else { v / &prev };
                }
            }
            prev = a[r][c].clone();
            r += 1;
        }
        let last = if sign < 0 { -prev } else { prev };
        (r, last)
    }

    /// Exact rank, computed fraction-free.
    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        self.bareiss().0
    }

    /// Exact nullity: `cols - rank`.
    pub fn kernel_dim(&self) -> usize {
        self.cols - self.rank()
    }

    /// Exact determinant of a square matrix.
    pub fn determinant(&self) -> BigRational {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        if self.rows == 0 {
            return BigRational::one();
        }
        let (r, last) = self.bareiss();
        if r < self.rows {
            return BigRational::zero();
        }
        // undo the row scalings from denominator clearing
        let scale = (0..self.rows).fold(BigInt::one(), |acc, i| {
            acc * self.row(i).iter().fold(BigInt::one(), |l, v| l.lcm(v.denom()))
        });
        BigRational::new(last, scale)
    }

    /// A basis of the right kernel, from the reduced row echelon form.
    pub fn kernel_basis(&self) -> Vec<Vec<BigRational>> {
        let mut a: Vec<Vec<BigRational>> = (0..self.rows).map(|i| self.row(i).to_vec()).collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            let Some(p) = (r..self.rows).find(|&i| !a[i][c].is_zero()) else {
                continue;
            };
            a.swap(p, r);
            let inv = a[r][c].recip();
            for v in a[r].iter_mut() {
                *v *= &inv;
            }
            for i in 0..self.rows {
                if i != r && !a[i][c].is_zero() {
                    let f = a[i][c].clone();
                    for j in 0..self.cols {
                        let d = &f * &a[r][j];
                        a[i][j] -= d;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![BigRational::zero(); self.cols];
                v[f] = BigRational::one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = -a[row][f].clone();
                }
                v
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn max_abs_numerator(&self) -> BigInt {
        self.data.iter().map(|v| v.numer().abs()).max().unwrap_or_default()
    }
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ExactMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let cells: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn identity_and_zero() {
        assert_eq!(ExactMatrix::identity(3).kernel_dim(), 0);
        assert_eq!(ExactMatrix::zeros(2, 4).kernel_dim(), 4);
        assert_eq!(ExactMatrix::zeros(0, 5).kernel_dim(), 5);
        assert_eq!(ExactMatrix::zeros(3, 0).rank(), 0);
    }

    #[test]
    fn rational_entries() {
        let m = ExactMatrix::from_rows(vec![vec![q(1, 2), q(1, 3)], vec![q(3, 2), q(1, 1)]]);
        assert_eq!(m.rank(), 1);
        assert_eq!(m.determinant(), BigRational::zero());
        let m = ExactMatrix::from_rows(vec![vec![q(1, 2), q(1, 3)], vec![q(1, 5), q(1, 7)]]);
        assert_eq!(m.determinant(), q(1, 14) - q(1, 15));
    }

    #[test]
    fn determinant_with_swaps() {
        let m = ExactMatrix::from_i64(&[vec![0, 2, 0], vec![2, 0, 0], vec![0, 0, 3]]);
        assert_eq!(m.determinant(), q(-12, 1));
        let u2 = ExactMatrix::from_i64(&[vec![0, 2], vec![2, 0]]);
        assert_eq!(u2.determinant(), q(-4, 1));
    }

    #[test]
    fn kernel_basis_solves() {
        let g = ExactMatrix::from_i64(&[vec![0, 2, 4], vec![2, 0, 4], vec![4, 4, 16]]);
        let k = g.kernel_basis();
        assert_eq!(k.len(), 1);
        let v = &k[0];
        // proportional to (2, 2, -1)
        assert_eq!(&v[0] / &v[2], q(-2, 1));
        assert_eq!(&v[1] / &v[2], q(-2, 1));
    }
}
