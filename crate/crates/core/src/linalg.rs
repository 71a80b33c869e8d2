//! Tiny dense matrices for the pointwise tensor algebra.
//!
//! Everything here is at most `(n1+n2-2) x (n1+n2-2)`, so a row-major `Vec`
//! with naive products is the right tool.

use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Real> Mat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, T::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions must match");
        Self::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols)
                .map(|k| self.get(i, k) * other.get(k, j))
                .sum()
        })
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |i, j| {
            self.get(i, j) - other.get(i, j)
        })
    }

    pub fn scale(&self, c: T) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j) * c)
    }

    /// Frobenius norm; the signature-blind size of a matrix residual.
    pub fn frobenius(&self) -> T {
        self.data.iter().map(|&x| x * x).sum::<T>().sqrt()
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, &x| acc.max(x.abs()))
    }

    /// Largest deviation from symmetry, `max |a_ij - a_ji|`.
    pub fn asymmetry(&self) -> T {
        let mut worst = T::zero();
        for i in 0..self.rows {
            for j in 0..self.cols.min(self.rows) {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }
}

/// Eigenvalues of a symmetric 2x2 matrix, ascending.
pub fn sym_eigenvalues_2x2<T: Real>(m: &Mat<T>) -> (T, T) {
    assert_eq!((m.rows(), m.cols()), (2, 2));
    let half = T::real(0.5);
    let mean = (m.get(0, 0) + m.get(1, 1)) * half;
    let off = (m.get(0, 1) + m.get(1, 0)) * half;
    let diff = (m.get(0, 0) - m.get(1, 1)) * half;
    let disc = (diff * diff + off * off).sqrt();
    (mean - disc, mean + disc)
}

/// Determinant of a 3x3 matrix given as rows.
pub fn det3<T: Real>(r: &[[T; 3]; 3]) -> T {
    r[0][0] * (r[1][1] * r[2][2] - r[1][2] * r[2][1])
        - r[0][1] * (r[1][0] * r[2][2] - r[1][2] * r[2][0])
        + r[0][2] * (r[1][0] * r[2][1] - r[1][1] * r[2][0])
}

/// Determinant of a 4x4 matrix given as rows (cofactor expansion).
pub fn det4<T: Real>(r: &[[T; 4]; 4]) -> T {
    let mut acc = T::zero();
    for col in 0..4 {
        let mut minor = [[T::zero(); 3]; 3];
        for (mi, row) in r[1..].iter().enumerate() {
            let mut mj = 0;
            for (cj, &v) in row.iter().enumerate() {
                if cj != col {
                    minor[mi][mj] = v;
                    mj += 1;
                }
            }
        }
        let term = r[0][col] * det3(&minor);
        if col % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matmul_and_transpose() {
        let a = Mat::from_fn(2, 3, |i, j| (i * 3 + j) as f64);
        let b = a.transpose();
        let p = a.mul(&b);
        assert_eq!(p.get(0, 0), 5.0);
        assert_eq!(p.get(1, 1), 50.0);
        assert_eq!(p.get(0, 1), p.get(1, 0));
    }

    #[test]
    fn eigenvalues_of_diagonal() {
        let mut m = Mat::zeros(2, 2);
        m.set(0, 0, 0.5);
        m.set(1, 1, 0.25);
        let (lo, hi) = sym_eigenvalues_2x2(&m);
        assert_eq!((lo, hi), (0.25, 0.5));
    }

    #[test]
    fn determinants() {
        let id3 = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        assert_eq!(det3(&id3), 1.0);
        let mut id4 = [[0.0; 4]; 4];
        for (i, row) in id4.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        assert_eq!(det4(&id4), 1.0);
        // swap two rows of the identity: determinant flips sign
        id4.swap(0, 1);
        assert_eq!(det4(&id4), -1.0);
    }
}
