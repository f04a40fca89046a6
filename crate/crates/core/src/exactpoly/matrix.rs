use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{Polynomial, Rational, Scalar};
use crate::error::{Error, Result};

/// Dense row-major matrix, 0-based indexing.
#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type PolyMatrix = Matrix<Polynomial>;
pub type RatMatrix = Matrix<Rational>;

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
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
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|row| row.len() != c) {
            return Err(Error::DimensionMismatch {
                expected: c,
                got: bad.len(),
            });
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
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

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.get(i, j).add(&a.mul(b));
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::DimensionMismatch {
                expected: self.rows * self.cols,
                got: other.rows * other.cols,
            });
        }
        Ok(Self::from_fn(self.rows, self.cols, |i, j| {
            self.get(i, j).sub(other.get(i, j))
        }))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    /// Submatrix on strictly ascending, in-range row and column index sets.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Result<Self> {
        check_index_set(rows, self.rows)?;
        check_index_set(cols, self.cols)?;
        Ok(Self::from_fn(rows.len(), cols.len(), |i, j| {
            self.get(rows[i], cols[j]).clone()
        }))
    }

    /// Determinant of the square submatrix on `rows` x `cols`.
    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> Result<T> {
        if rows.len() != cols.len() {
            return Err(Error::RaggedMinor {
                rows: rows.len(),
                cols: cols.len(),
            });
        }
        Ok(det_bareiss(&self.submatrix(rows, cols)?))
    }
}

fn check_index_set(idx: &[usize], bound: usize) -> Result<()> {
    if idx.windows(2).any(|w| w[0] >= w[1]) || idx.last().is_some_and(|&l| l >= bound) {
        return Err(Error::BadIndexSet);
    }
    Ok(())
}

/// Fraction-free (Bareiss) determinant. Every division is exact over an
/// integral domain; row swaps flip the sign.
pub fn det_bareiss<T: Scalar>(m: &Matrix<T>) -> T {
    assert!(m.is_square(), "determinant of a non-square matrix");
    let n = m.rows;
    if n == 0 {
        return T::one();
    }
    let mut a: Vec<Vec<T>> = (0..n).map(|i| m.row(i).to_vec()).collect();
    let mut negate = false;
    let mut prev = T::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    negate = !negate;
                }
                None => return T::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a[k][k].mul(&a[i][j]).sub(&a[i][k].mul(&a[k][j]));
                a[i][j] = num
                    .div_exact(&prev)
                    .expect("Bareiss division is exact in an integral domain");
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        d.neg()
    } else {
        d
    }
}

/// Cofactor expansion along the first row. Exponential; meant for small
/// matrices and as an independent check of [`det_bareiss`].
pub fn det_laplace<T: Scalar>(m: &Matrix<T>) -> T {
    assert!(m.is_square(), "determinant of a non-square matrix");
    let idx: Vec<usize> = (0..m.cols).collect();
    laplace(m, 0, &idx)
}

fn laplace<T: Scalar>(m: &Matrix<T>, row: usize, cols: &[usize]) -> T {
    if cols.is_empty() {
        return T::one();
    }
    let mut acc = T::zero();
    for (k, &c) in cols.iter().enumerate() {
        let a = m.get(row, c);
        if a.is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let term = a.mul(&laplace(m, row + 1, &rest));
        acc = if k % 2 == 0 {
            acc.add(&term)
        } else {
            acc.sub(&term)
        };
    }
    acc
}

/// Rank over the rationals. Rows are cleared of denominators and reduced by
/// fraction-free elimination on primitive integer rows.
pub fn rank(m: &RatMatrix) -> usize {
    let mut rows: Vec<Vec<BigInt>> = (0..m.rows).map(|i| integer_row(m.row(i))).collect();
    rows.retain(|r| r.iter().any(|x| !x.is_zero()));
    let mut rank = 0;
    for col in 0..m.cols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot_row = rows[rank].clone();
        let pv = pivot_row[col].clone();
        for r in rows.iter_mut().skip(rank + 1) {
            if r[col].is_zero() {
                continue;
            }
            let f = r[col].clone();
            for (x, y) in r.iter_mut().zip(&pivot_row) {
                *x = &*x * &pv - &f * y;
            }
            make_primitive(r);
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

fn integer_row(row: &[Rational]) -> Vec<BigInt> {
    let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let mut out: Vec<BigInt> = row.iter().map(|x| x.numer() * (&l / x.denom())).collect();
    make_primitive(&mut out);
    out
}

fn make_primitive(row: &mut [BigInt]) {
    let g = row.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in row.iter_mut() {
            *x = &*x / &g;
        }
    }
}

impl RatMatrix {
    /// Inverse of an upper unitriangular matrix by back substitution.
    pub fn unitriangular_inverse(&self) -> Result<RatMatrix> {
        if !self.is_upper_unitriangular() {
            return Err(Error::NotUnitriangular);
        }
        let n = self.rows;
        let mut inv = RatMatrix::identity(n);
        for j in 0..n {
            for i in (0..j).rev() {
                let mut s = <Rational as Zero>::zero();
                for k in i + 1..=j {
                    s -= self.get(i, k) * inv.get(k, j);
                }
                inv.set(i, j, s);
            }
        }
        Ok(inv)
    }

    pub fn is_upper_unitriangular(&self) -> bool {
        self.is_square()
            && (0..self.rows)
                .all(|i| self.get(i, i).is_one() && (0..i).all(|j| Zero::is_zero(self.get(i, j))))
    }
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[T]> = self.data.chunks(self.cols.max(1)).collect();
        f.debug_struct("Matrix")
            .field("rows", &self.rows)
            .field("cols", &self.cols)
            .field("data", &rows)
            .finish()
    }
}

impl fmt::Display for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let cells: Vec<String> = self.row(i).iter().map(super::format_rational).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}
