//! Small dense complex linear algebra.
//!
//! Matrices here are at most a few hundred wide (Choi matrices of the
//! coarse-graining channels, sector density matrices), so a row-major
//! `Vec` and a cyclic Jacobi eigensolver are enough. The eigensolver first
//! splits the matrix into its irreducible blocks; Choi matrices are almost
//! entirely zero and decouple into one dense block plus isolated diagonal
//! entries.

use crate::error::{GqcaError, Result};
use crate::num::{czero, Real, C};
use num_complex::Complex;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix<T: Real> {
    rows: usize,
    cols: usize,
    data: Vec<C<T>>,
}

impl<T: Real> CMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![czero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex::new(T::one(), T::zero());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C<T>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    /// Row-major construction; panics when `data.len() != rows * cols`.
    pub fn from_rows(rows: usize, cols: usize, data: Vec<C<T>>) -> Self {
        assert_eq!(data.len(), rows * cols, "row-major data has wrong length");
        Self { rows, cols, data }
    }

    /// `|v><w|`
    pub fn outer(v: &[C<T>], w: &[C<T>]) -> Self {
        Self::from_fn(v.len(), w.len(), |r, c| v[r] * w[c].conj())
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

    pub fn as_slice(&self) -> &[C<T>] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn trace(&self) -> C<T> {
        (0..self.rows.min(self.cols))
            .map(|i| self[(i, i)])
            .fold(czero(), |a, b| a + b)
    }

    pub fn scale(&self, k: C<T>) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| x * k).collect(),
        }
    }

    pub fn mul_vec(&self, v: &[C<T>]) -> Vec<C<T>> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                let row = &self.data[r * self.cols..(r + 1) * self.cols];
                row.iter().zip(v).fold(czero(), |acc, (&a, &b)| acc + a * b)
            })
            .collect()
    }

    /// Largest elementwise modulus.
    pub fn max_abs(&self) -> T {
        self.data
            .iter()
            .map(|z| z.norm())
            .fold(T::zero(), |a, b| a.max(b))
    }

    /// Largest elementwise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (*a - *b).norm())
            .fold(T::zero(), |a, b| a.max(b))
    }

    /// Largest deviation from Hermiticity, `max |A_ij - conj(A_ji)|`.
    pub fn hermiticity_error(&self) -> T {
        if !self.is_square() {
            return T::infinity();
        }
        let mut worst = T::zero();
        for r in 0..self.rows {
            for c in r..self.cols {
                worst = worst.max((self[(r, c)] - self[(c, r)].conj()).norm());
            }
        }
        worst
    }

    /// `<v| A |v>`
    pub fn expectation(&self, v: &[C<T>]) -> C<T> {
        let av = self.mul_vec(v);
        v.iter()
            .zip(&av)
            .fold(czero(), |acc, (&a, &b)| acc + a.conj() * b)
    }
}

impl<T: Real> Index<(usize, usize)> for CMatrix<T> {
    type Output = C<T>;

    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &C<T> {
        &self.data[r * self.cols + c]
    }
}

impl<T: Real> IndexMut<(usize, usize)> for CMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C<T> {
        &mut self.data[r * self.cols + c]
    }
}

impl<T: Real> Mul for &CMatrix<T> {
    type Output = CMatrix<T>;

    fn mul(self, rhs: &CMatrix<T>) -> CMatrix<T> {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out = CMatrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)];
                if a == czero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    out.data[r * rhs.cols + c] += a * rhs[(k, c)];
                }
            }
        }
        out
    }
}

impl<T: Real> Add for &CMatrix<T> {
    type Output = CMatrix<T>;

    fn add(self, rhs: &CMatrix<T>) -> CMatrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| *a + *b)
                .collect(),
        }
    }
}

impl<T: Real> Sub for &CMatrix<T> {
    type Output = CMatrix<T>;

    fn sub(self, rhs: &CMatrix<T>) -> CMatrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| *a - *b)
                .collect(),
        }
    }
}

/// A 2x2 complex matrix, row-major: `[[m00, m01], [m10, m11]]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Unitary2<T: Real> {
    pub m: [[C<T>; 2]; 2],
}

impl<T: Real> Unitary2<T> {
    pub fn new(m00: C<T>, m01: C<T>, m10: C<T>, m11: C<T>) -> Self {
        Self {
            m: [[m00, m01], [m10, m11]],
        }
    }

    pub fn pauli_x() -> Self {
        let (o, z) = (Complex::new(T::one(), T::zero()), czero());
        Self::new(z, o, o, z)
    }

    pub fn pauli_z() -> Self {
        let (o, z) = (Complex::new(T::one(), T::zero()), czero());
        Self::new(o, z, z, -o)
    }

    /// Matrix element `<row| V |col>`.
    #[inline]
    pub fn get(&self, row: usize, col: usize) -> C<T> {
        self.m[row][col]
    }

    pub fn adjoint(&self) -> Self {
        Self::new(
            self.m[0][0].conj(),
            self.m[1][0].conj(),
            self.m[0][1].conj(),
            self.m[1][1].conj(),
        )
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        let mut out = [[czero(); 2]; 2];
        for (r, row) in out.iter_mut().enumerate() {
            for (c, entry) in row.iter_mut().enumerate() {
                *entry = self.m[r][0] * rhs.m[0][c] + self.m[r][1] * rhs.m[1][c];
            }
        }
        Self { m: out }
    }

    pub fn scale(&self, k: C<T>) -> Self {
        Self::new(
            self.m[0][0] * k,
            self.m[0][1] * k,
            self.m[1][0] * k,
            self.m[1][1] * k,
        )
    }

    pub fn plus(&self, rhs: &Self) -> Self {
        Self::new(
            self.m[0][0] + rhs.m[0][0],
            self.m[0][1] + rhs.m[0][1],
            self.m[1][0] + rhs.m[1][0],
            self.m[1][1] + rhs.m[1][1],
        )
    }

    pub fn max_abs_diff(&self, rhs: &Self) -> T {
        let mut worst = T::zero();
        for r in 0..2 {
            for c in 0..2 {
                worst = worst.max((self.m[r][c] - rhs.m[r][c]).norm());
            }
        }
        worst
    }

    /// `max |(V^dagger V - I)_ij|`
    pub fn unitarity_error(&self) -> T {
        let p = self.adjoint().matmul(self);
        let one = Complex::new(T::one(), T::zero());
        let id = Self::new(one, czero(), czero(), one);
        p.max_abs_diff(&id)
    }
}

/// Eigen-decomposition of a Hermitian matrix; eigenvalues ascending, the
/// `k`-th column of `vectors` belongs to `values[k]`.
#[derive(Clone, Debug)]
pub struct HermitianEigen<T: Real> {
    pub values: Vec<T>,
    pub vectors: CMatrix<T>,
}

const MAX_SWEEPS: usize = 100;

/// Eigenvalues and eigenvectors of a Hermitian matrix.
///
/// Only the upper triangle is trusted; the input must be Hermitian up to
/// rounding (checked loosely, relative to the matrix scale).
pub fn eigh<T: Real>(a: &CMatrix<T>) -> Result<HermitianEigen<T>> {
    if !a.is_square() {
        return Err(GqcaError::Dimension(format!(
            "eigh needs a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let n = a.rows();
    let scale = a.max_abs().max(T::one());
    let herm_tol = scale * T::epsilon() * crate::num::lit(1e4);
    if a.hermiticity_error() > herm_tol {
        return Err(GqcaError::Dimension(format!(
            "matrix is not Hermitian (error {:?})",
            a.hermiticity_error()
        )));
    }

    let mut values = vec![T::zero(); n];
    let mut vectors = CMatrix::zeros(n, n);
    for block in irreducible_blocks(a) {
        let sub = CMatrix::from_fn(block.len(), block.len(), |r, c| a[(block[r], block[c])]);
        let (vals, vecs) = jacobi(sub);
        for (k, &col) in block.iter().enumerate() {
            values[col] = vals[k];
            for (r, &row) in block.iter().enumerate() {
                vectors[(row, col)] = vecs[(r, k)];
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        values[i]
            .partial_cmp(&values[j])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let sorted_values = order.iter().map(|&i| values[i]).collect();
    let sorted_vectors = CMatrix::from_fn(n, n, |r, c| vectors[(r, order[c])]);
    Ok(HermitianEigen {
        values: sorted_values,
        vectors: sorted_vectors,
    })
}

/// Eigenvalues only, ascending.
pub fn eigvalsh<T: Real>(a: &CMatrix<T>) -> Result<Vec<T>> {
    eigh(a).map(|e| e.values)
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue<T: Real>(a: &CMatrix<T>) -> Result<T> {
    let vals = eigvalsh(a)?;
    Ok(vals.first().copied().unwrap_or_else(T::zero))
}

/// Trace norm `sum |lambda|` of a Hermitian matrix.
pub fn trace_norm<T: Real>(a: &CMatrix<T>) -> Result<T> {
    Ok(eigvalsh(a)?.into_iter().map(|x| x.abs()).sum())
}

/// Connected components of the nonzero pattern, each sorted.
fn irreducible_blocks<T: Real>(a: &CMatrix<T>) -> Vec<Vec<usize>> {
    let n = a.rows();
    let mut comp = vec![usize::MAX; n];
    let mut blocks = Vec::new();
    for start in 0..n {
        if comp[start] != usize::MAX {
            continue;
        }
        let id = blocks.len();
        let mut members = vec![start];
        comp[start] = id;
        let mut head = 0;
        while head < members.len() {
            let i = members[head];
            head += 1;
            for j in 0..n {
                if comp[j] == usize::MAX && (a[(i, j)] != czero() || a[(j, i)] != czero()) {
                    comp[j] = id;
                    members.push(j);
                }
            }
        }
        members.sort_unstable();
        blocks.push(members);
    }
    blocks
}

/// Cyclic complex Jacobi. Each rotation first removes the phase of the
/// pivot with a diagonal unitary, then applies a real Givens rotation.
fn jacobi<T: Real>(mut a: CMatrix<T>) -> (Vec<T>, CMatrix<T>) {
    let n = a.rows();
    let mut v = CMatrix::identity(n);
    if n == 1 {
        return (vec![a[(0, 0)].re], v);
    }
    let frob: T = a.as_slice().iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
    let stop = frob * T::epsilon() * crate::num::lit(1e-3);

    for _ in 0..MAX_SWEEPS {
        let mut off = T::zero();
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[(p, q)].norm_sqr();
            }
        }
        if off.sqrt() <= stop || off == T::zero() {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag == T::zero() {
                    continue;
                }
                let phase = apq.unscale(mag);
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let two = T::one() + T::one();
                let theta = (aqq - app) / (two * mag);
                let t = if theta.is_infinite() {
                    T::zero()
                } else {
                    let sgn = if theta >= T::zero() {
                        T::one()
                    } else {
                        -T::one()
                    };
                    sgn / (theta.abs() + (theta * theta + T::one()).sqrt())
                };
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                // R = diag(1, conj(phase)) * [[c, s], [-s, c]]
                let r_pp = Complex::new(c, T::zero());
                let r_pq = Complex::new(s, T::zero());
                let r_qp = phase.conj() * Complex::new(-s, T::zero());
                let r_qq = phase.conj() * Complex::new(c, T::zero());

                // A <- A R  (columns p, q)
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * r_pp + akq * r_qp;
                    a[(k, q)] = akp * r_pq + akq * r_qq;
                }
                // A <- R^dagger A  (rows p, q)
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = r_pp.conj() * apk + r_qp.conj() * aqk;
                    a[(q, k)] = r_pq.conj() * apk + r_qq.conj() * aqk;
                }
                a[(p, q)] = czero();
                a[(q, p)] = czero();
                a[(p, p)] = Complex::new(a[(p, p)].re, T::zero());
                a[(q, q)] = Complex::new(a[(q, q)].re, T::zero());
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * r_pp + vkq * r_qp;
                    v[(k, q)] = vkp * r_pq + vkq * r_qq;
                }
            }
        }
    }
    let values = (0..n).map(|i| a[(i, i)].re).collect();
    (values, v)
}
