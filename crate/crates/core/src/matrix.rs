//! Dense square matrices over the rationals and exact span membership.

use std::ops::{AddAssign, Mul, SubAssign};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    size: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn zeros(size: usize) -> Self {
        Self { size, data: vec![Rational::zero(); size * size] }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zeros(size);
        for i in 0..size {
            m.data[i * size + i] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let size = rows.len();
        if rows.iter().any(|r| r.len() != size) {
            return Err(Error::Shape(format!("matrix rows must all have length {size}")));
        }
        Ok(Self { size, data: rows.into_iter().flatten().collect() })
    }

    /// The elementary matrix with a single 1 at `(row, col)`.
    pub fn unit(size: usize, row: usize, col: usize) -> Self {
        let mut m = Self::zeros(size);
        m.data[row * size + col] = Rational::one();
        m
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, row: usize, col: usize) -> &Rational {
        &self.data[row * self.size + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Rational) {
        self.data[row * self.size + col] = value;
    }

    pub fn rows(&self) -> Vec<Vec<Rational>> {
        self.data.chunks(self.size.max(1)).map(<[Rational]>::to_vec).take(self.size).collect()
    }

    /// Row-major entries.
    pub fn as_slice(&self) -> &[Rational] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn scaled(&self, factor: &Rational) -> Self {
        Self { size: self.size, data: self.data.iter().map(|x| x * factor).collect() }
    }

    pub fn add_scaled(&mut self, other: &Matrix, factor: &Rational) {
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            if !b.is_zero() {
                *a += b * factor;
            }
        }
    }
}

impl AddAssign<&Matrix> for Matrix {
    fn add_assign(&mut self, other: &Matrix) {
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            if !b.is_zero() {
                *a += b;
            }
        }
    }
}

impl SubAssign<&Matrix> for Matrix {
    fn sub_assign(&mut self, other: &Matrix) {
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            if !b.is_zero() {
                *a -= b;
            }
        }
    }
}

impl Mul for &Matrix {
    type Output = Matrix;

    fn mul(self, other: &Matrix) -> Matrix {
        let n = self.size;
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = &self.data[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &other.data[k * n + j];
                    if !b.is_zero() {
                        out.data[i * n + j] += a * b;
                    }
                }
            }
        }
        out
    }
}

/// The linear span of a list of linearly independent vectors, reduced to
/// echelon form so that membership and coordinates are exact.
#[derive(Debug, Clone)]
pub struct Span {
    /// Row `j` is a combination of the inputs with a 1 in column `pivots[j]`
    /// and zeros in every other pivot column.
    reduced: Vec<Vec<Rational>>,
    /// `reduced[j] = Σ_i transform[j][i] * input[i]`.
    transform: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
}

impl Span {
    /// Gauss-Jordan elimination over exact rationals. Fails with
    /// [`Error::Rank`] when the vectors are dependent.
    pub fn new(vectors: &[Vec<Rational>]) -> Result<Self> {
        let count = vectors.len();
        let width = vectors.first().map_or(0, Vec::len);
        if vectors.iter().any(|v| v.len() != width) {
            return Err(Error::Shape("span vectors must share a length".into()));
        }
        let mut rows = vectors.to_vec();
        let mut transform: Vec<Vec<Rational>> = (0..count)
            .map(|i| (0..count).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
            .collect();
        let mut pivots = Vec::new();
        let mut rank = 0;
        for col in 0..width {
            let Some(p) = (rank..count).find(|&r| !rows[r][col].is_zero()) else {
                continue;
            };
            rows.swap(rank, p);
            transform.swap(rank, p);
            let inv = rows[rank][col].recip();
            for x in rows[rank].iter_mut().chain(transform[rank].iter_mut()) {
                *x *= &inv;
            }
            for r in 0..count {
                if r == rank || rows[r][col].is_zero() {
                    continue;
                }
                let f = rows[r][col].clone();
                for c in 0..width {
                    let delta = &rows[rank][c] * &f;
                    rows[r][c] -= delta;
                }
                for c in 0..count {
                    let delta = &transform[rank][c] * &f;
                    transform[r][c] -= delta;
                }
            }
            pivots.push(col);
            rank += 1;
            if rank == count {
                break;
            }
        }
        if rank < count {
            return Err(Error::Rank { rank, count });
        }
        Ok(Self { reduced: rows, transform, pivots })
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    /// Coordinates of `target` over the input vectors, or `None` when it lies
    /// outside their span.
    pub fn coordinates(&self, target: &[Rational]) -> Option<Vec<Rational>> {
        let width = target.len();
        let mut rebuilt = vec![Rational::zero(); width];
        let mut coords = vec![Rational::zero(); self.dim()];
        for (j, &p) in self.pivots.iter().enumerate() {
            let w = &target[p];
            if w.is_zero() {
                continue;
            }
            for (acc, x) in rebuilt.iter_mut().zip(&self.reduced[j]) {
                *acc += x * w;
            }
            for (acc, x) in coords.iter_mut().zip(&self.transform[j]) {
                *acc += x * w;
            }
        }
        (rebuilt.as_slice() == target).then_some(coords)
    }
}
