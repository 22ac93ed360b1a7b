//! Dense row-major matrices and the structured building blocks the criteria
//! are assembled from.
//!
//! Structured builders ([`boundary_matrix`], [`selector_matrix`], identities,
//! ones-vectors and unit selectors) only ever hold small integers, so products
//! and Kronecker compositions of them are exact in `f64` and identity checks
//! on them can use plain equality.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};

/// Hard cap on the number of entries of any assembled matrix.
pub const MAX_ENTRIES: usize = 4_000_000;

/// Zero-test threshold: `abs_eps + rel_scale * scale`, where `scale` is the
/// largest absolute entry of the data under test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerance {
    pub abs_eps: f64,
    pub rel_scale: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            abs_eps: 1e-9,
            rel_scale: 1e-12,
        }
    }
}

impl Tolerance {
    pub fn new(abs_eps: f64, rel_scale: f64) -> Result<Self> {
        if !(abs_eps >= 0.0 && abs_eps.is_finite()) || !(rel_scale >= 0.0 && rel_scale.is_finite())
        {
            return Err(Error::InvalidDimension(format!(
                "tolerance parts must be finite and nonnegative (abs_eps={abs_eps}, rel_scale={rel_scale})"
            )));
        }
        Ok(Self { abs_eps, rel_scale })
    }

    /// Threshold for data whose largest absolute entry is `scale`.
    pub fn threshold(&self, scale: f64) -> f64 {
        self.abs_eps + self.rel_scale * scale.abs()
    }
}

pub(crate) fn check_capacity(rows: usize, cols: usize) -> Result<()> {
    match rows.checked_mul(cols) {
        Some(n) if n <= MAX_ENTRIES => Ok(()),
        _ => Err(Error::Capacity {
            rows,
            cols,
            cap: MAX_ENTRIES,
        }),
    }
}

/// Largest absolute value in a slice, `0.0` when empty.
pub fn max_abs(values: &[f64]) -> f64 {
    values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
}

/// Immutable dense real matrix stored row-major.
#[derive(Clone, PartialEq, Serialize)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        write!(f, "]")
    }
}

impl Matrix {
    /// Builds a matrix from row-major entries. Entries must be finite.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        check_capacity(rows, cols)?;
        if data.len() != rows * cols {
            return Err(Error::InvalidDimension(format!(
                "{} entries given for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidDimension(format!(
                "non-finite entry at ({}, {})",
                pos / cols.max(1),
                pos % cols.max(1)
            )));
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from a list of equally long rows.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::InvalidDimension(format!(
                    "row {i} has {} entries, expected {cols}",
                    r.len()
                )));
            }
            data.extend_from_slice(r);
        }
        Self::from_vec(rows.len(), cols, data)
    }

    pub(crate) fn from_raw(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_raw(rows, cols, vec![0.0; rows * cols])
    }

    pub fn identity(k: usize) -> Self {
        let mut m = Self::zeros(k, k);
        for i in 0..k {
            m.data[i * k + i] = 1.0;
        }
        m
    }

    /// All-ones `rows x cols` matrix; `ones(k, 1)` is the column `1_k`.
    pub fn ones(rows: usize, cols: usize) -> Self {
        Self::from_raw(rows, cols, vec![1.0; rows * cols])
    }

    /// The logical column vector `δ_k^i` (1-based `i`).
    pub fn unit(k: usize, i: usize) -> Result<Self> {
        if i == 0 || i > k {
            return Err(Error::InvalidDimension(format!(
                "unit vector index {i} outside 1..={k}"
            )));
        }
        let mut m = Self::zeros(k, 1);
        m.data[i - 1] = 1.0;
        Ok(m)
    }

    /// The last logical vector `δ_k^k`.
    pub fn last_unit(k: usize) -> Result<Self> {
        Self::unit(k, k)
    }

    pub fn column(values: &[f64]) -> Self {
        Self::from_raw(values.len(), 1, values.to_vec())
    }

    pub fn row_vector(values: &[f64]) -> Self {
        Self::from_raw(1, values.len(), values.to_vec())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        assert!(
            r < self.rows && c < self.cols,
            "index ({r}, {c}) out of bounds"
        );
        self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                data.push(self.data[r * self.cols + c]);
            }
        }
        Self::from_raw(self.cols, self.rows, data)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::from_raw(
            self.rows,
            self.cols,
            self.data.iter().map(|v| v * s).collect(),
        )
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(
            self.cols,
            x.len(),
            "cannot multiply a {}x{} matrix by a vector of length {}",
            self.rows,
            self.cols,
            x.len()
        );
        (0..self.rows)
            .map(|r| self.row(r).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn max_abs(&self) -> f64 {
        max_abs(&self.data)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0.0)
    }

    /// Largest entrywise absolute difference; shapes must match.
    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        assert_eq!(self.shape(), other.shape(), "shape mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()))
    }

    /// Rows `start..end` as a new matrix.
    pub fn row_range(&self, start: usize, end: usize) -> Self {
        assert!(start <= end && end <= self.rows);
        Self::from_raw(
            end - start,
            self.cols,
            self.data[start * self.cols..end * self.cols].to_vec(),
        )
    }

    /// Columns `start..end` as a new matrix.
    pub fn col_range(&self, start: usize, end: usize) -> Self {
        assert!(start <= end && end <= self.cols);
        let mut data = Vec::with_capacity(self.rows * (end - start));
        for r in 0..self.rows {
            data.extend_from_slice(&self.row(r)[start..end]);
        }
        Self::from_raw(self.rows, end - start, data)
    }

    pub fn kron(&self, other: &Matrix) -> Result<Self> {
        kron(self, other)
    }

    pub(crate) fn to_nalgebra(&self) -> DMatrix<f64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }

    pub(crate) fn from_nalgebra(m: &DMatrix<f64>) -> Self {
        let mut data = Vec::with_capacity(m.nrows() * m.ncols());
        for r in 0..m.nrows() {
            for c in 0..m.ncols() {
                data.push(m[(r, c)]);
            }
        }
        Self::from_raw(m.nrows(), m.ncols(), data)
    }
}

impl Mul for &Matrix {
    type Output = Matrix;

    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(
            self.cols, rhs.rows,
            "cannot multiply {}x{} by {}x{}",
            self.rows, self.cols, rhs.rows, rhs.cols
        );
        let mut out = vec![0.0; self.rows * rhs.cols];
        for r in 0..self.rows {
            let orow = &mut out[r * rhs.cols..(r + 1) * rhs.cols];
            for (k, &a) in self.row(r).iter().enumerate() {
                if a == 0.0 {
                    continue;
                }
                for (o, &b) in orow.iter_mut().zip(rhs.row(k)) {
                    *o += a * b;
                }
            }
        }
        Matrix::from_raw(self.rows, rhs.cols, out)
    }
}

impl Add for &Matrix {
    type Output = Matrix;

    fn add(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.shape(), rhs.shape(), "shape mismatch in addition");
        Matrix::from_raw(
            self.rows,
            self.cols,
            self.data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }
}

impl Sub for &Matrix {
    type Output = Matrix;

    fn sub(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.shape(), rhs.shape(), "shape mismatch in subtraction");
        Matrix::from_raw(
            self.rows,
            self.cols,
            self.data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }
}

impl Neg for &Matrix {
    type Output = Matrix;

    fn neg(self) -> Matrix {
        self.scale(-1.0)
    }
}

/// `B_k = [I_{k-1}, -1_{k-1}]`, the alternating-difference operator whose
/// kernel is spanned by `1_k`.
pub fn boundary_matrix(k: usize) -> Result<Matrix> {
    if k < 2 {
        return Err(Error::InvalidDimension(format!(
            "boundary matrix needs k >= 2, got {k}"
        )));
    }
    check_capacity(k - 1, k)?;
    let mut m = Matrix::zeros(k - 1, k);
    for i in 0..k - 1 {
        m.data[i * k + i] = 1.0;
        m.data[i * k + k - 1] = -1.0;
    }
    Ok(m)
}

/// `D_k = [I_{k-1}, 0]`.
pub fn selector_matrix(k: usize) -> Result<Matrix> {
    if k < 2 {
        return Err(Error::InvalidDimension(format!(
            "selector matrix needs k >= 2, got {k}"
        )));
    }
    check_capacity(k - 1, k)?;
    let mut m = Matrix::zeros(k - 1, k);
    for i in 0..k - 1 {
        m.data[i * k + i] = 1.0;
    }
    Ok(m)
}

/// `H_k = I_k - (1/k) 1_k 1_k^T`, the orthogonal projector removing the mean.
pub fn centering_matrix(k: usize) -> Result<Matrix> {
    if k < 1 {
        return Err(Error::InvalidDimension(
            "centering matrix needs k >= 1".into(),
        ));
    }
    check_capacity(k, k)?;
    let off = -1.0 / k as f64;
    let mut m = Matrix::from_raw(k, k, vec![off; k * k]);
    for i in 0..k {
        m.data[i * k + i] = 1.0 + off;
    }
    Ok(m)
}

/// Kronecker product `A ⊗ B`.
pub fn kron(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    let rows = a.rows.checked_mul(b.rows).ok_or(Error::Capacity {
        rows: usize::MAX,
        cols: 0,
        cap: MAX_ENTRIES,
    })?;
    let cols = a.cols.checked_mul(b.cols).ok_or(Error::Capacity {
        rows: 0,
        cols: usize::MAX,
        cap: MAX_ENTRIES,
    })?;
    check_capacity(rows, cols)?;
    let mut data = vec![0.0; rows * cols];
    for ar in 0..a.rows {
        for ac in 0..a.cols {
            let s = a.data[ar * a.cols + ac];
            if s == 0.0 {
                continue;
            }
            for br in 0..b.rows {
                let base = (ar * b.rows + br) * cols + ac * b.cols;
                for (o, &v) in data[base..base + b.cols].iter_mut().zip(b.row(br)) {
                    *o = s * v;
                }
            }
        }
    }
    Ok(Matrix::from_raw(rows, cols, data))
}

/// Left-to-right Kronecker product of all factors; the empty product is `[1]`.
pub fn kron_all(factors: &[Matrix]) -> Result<Matrix> {
    factors
        .iter()
        .try_fold(Matrix::identity(1), |acc, f| kron(&acc, f))
}

/// Horizontal concatenation.
pub fn hstack(blocks: &[Matrix]) -> Result<Matrix> {
    let Some(first) = blocks.first() else {
        return Ok(Matrix::zeros(0, 0));
    };
    let rows = first.rows;
    if let Some(b) = blocks.iter().find(|b| b.rows != rows) {
        return Err(Error::InvalidDimension(format!(
            "hstack: block with {} rows next to {rows}",
            b.rows
        )));
    }
    let cols: usize = blocks.iter().map(|b| b.cols).sum();
    check_capacity(rows, cols)?;
    let mut data = Vec::with_capacity(rows * cols);
    for r in 0..rows {
        for b in blocks {
            data.extend_from_slice(b.row(r));
        }
    }
    Ok(Matrix::from_raw(rows, cols, data))
}

/// Vertical concatenation.
pub fn vstack(blocks: &[Matrix]) -> Result<Matrix> {
    let Some(first) = blocks.first() else {
        return Ok(Matrix::zeros(0, 0));
    };
    let cols = first.cols;
    if let Some(b) = blocks.iter().find(|b| b.cols != cols) {
        return Err(Error::InvalidDimension(format!(
            "vstack: block with {} columns under {cols}",
            b.cols
        )));
    }
    let rows: usize = blocks.iter().map(|b| b.rows).sum();
    check_capacity(rows, cols)?;
    let mut data = Vec::with_capacity(rows * cols);
    for b in blocks {
        data.extend_from_slice(&b.data);
    }
    Ok(Matrix::from_raw(rows, cols, data))
}

/// Block-diagonal matrix `diag(blocks...)`.
pub fn block_diag(blocks: &[Matrix]) -> Result<Matrix> {
    let rows: usize = blocks.iter().map(|b| b.rows).sum();
    let cols: usize = blocks.iter().map(|b| b.cols).sum();
    check_capacity(rows, cols)?;
    let mut m = Matrix::zeros(rows, cols);
    let (mut r0, mut c0) = (0, 0);
    for b in blocks {
        for r in 0..b.rows {
            let dst = (r0 + r) * cols + c0;
            m.data[dst..dst + b.cols].copy_from_slice(b.row(r));
        }
        r0 += b.rows;
        c0 += b.cols;
    }
    Ok(m)
}

/// Row-major vectorization `V_r(X)`.
pub fn vec_rows(x: &Matrix) -> Vec<f64> {
    x.data.clone()
}

/// Inverse of [`vec_rows`].
pub fn unvec_rows(v: &[f64], rows: usize, cols: usize) -> Result<Matrix> {
    Matrix::from_vec(rows, cols, v.to_vec())
}

fn singular_values_sorted(a: &Matrix) -> Vec<f64> {
    if a.rows == 0 || a.cols == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = a.to_nalgebra().singular_values().iter().copied().collect();
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

fn rank_cutoff(a: &Matrix, sigma_max: f64, tol: &Tolerance, scale: f64) -> f64 {
    let conventional = a.rows.max(a.cols) as f64 * f64::EPSILON * sigma_max;
    conventional.max(tol.threshold(scale))
}

/// Numerical rank: singular values above
/// `max(max(rows, cols) * eps * sigma_max, tol.threshold(scale))`.
pub fn numerical_rank(a: &Matrix, tol: &Tolerance, scale: f64) -> usize {
    let s = singular_values_sorted(a);
    let Some(&smax) = s.first() else { return 0 };
    let cut = rank_cutoff(a, smax, tol, scale);
    s.iter().filter(|&&v| v > cut).count()
}

/// `cols(A) - rank(A)`.
pub fn nullity(a: &Matrix, tol: &Tolerance) -> usize {
    a.cols - numerical_rank(a, tol, a.max_abs())
}

/// Solves `A x = b` when it is consistent at tolerance, returning the
/// minimum-norm solution; `None` when `rank([A|b]) > rank(A)`.
pub fn solve_consistent(a: &Matrix, b: &[f64], tol: &Tolerance) -> Result<Option<Vec<f64>>> {
    if a.rows != b.len() {
        return Err(Error::InvalidDimension(format!(
            "system has {} rows but right-hand side has length {}",
            a.rows,
            b.len()
        )));
    }
    let scale = a.max_abs().max(max_abs(b));
    let augmented = hstack(&[a.clone(), Matrix::column(b)])?;
    let rank_a = numerical_rank(a, tol, scale);
    let rank_ab = numerical_rank(&augmented, tol, scale);
    if rank_ab > rank_a {
        return Ok(None);
    }
    if rank_a == 0 {
        return Ok(Some(vec![0.0; a.cols]));
    }
    let svd = a.to_nalgebra().svd(true, true);
    let (Some(u), Some(v_t)) = (svd.u.as_ref(), svd.v_t.as_ref()) else {
        unreachable!("svd computed with both factors");
    };
    let smax = svd.singular_values.max();
    let cut = rank_cutoff(a, smax, tol, scale);
    let bn = nalgebra::DVector::from_column_slice(b);
    let mut x = nalgebra::DVector::zeros(a.cols);
    for (i, &sigma) in svd.singular_values.iter().enumerate() {
        if sigma > cut {
            let coeff = u.column(i).dot(&bn) / sigma;
            x += v_t.row(i).transpose() * coeff;
        }
    }
    Ok(Some(x.iter().copied().collect()))
}

/// Minimum-norm least-squares solution of `A x = b` (rank cut at the
/// conventional `max(rows, cols) * eps * sigma_max`).
pub fn least_squares(a: &Matrix, b: &[f64]) -> Result<Vec<f64>> {
    if a.rows != b.len() {
        return Err(Error::InvalidDimension(format!(
            "system has {} rows but right-hand side has length {}",
            a.rows,
            b.len()
        )));
    }
    if a.rows == 0 || a.cols == 0 {
        return Ok(vec![0.0; a.cols]);
    }
    let svd = a.to_nalgebra().svd(true, true);
    let cut = a.rows.max(a.cols) as f64 * f64::EPSILON * svd.singular_values.max();
    let x = svd
        .solve(&nalgebra::DVector::from_column_slice(b), cut)
        .map_err(|e| Error::InvalidDimension(e.to_string()))?;
    Ok(x.iter().copied().collect())
}

/// Largest absolute entry of `A x - b`.
pub fn residual_inf(a: &Matrix, x: &[f64], b: &[f64]) -> f64 {
    a.mul_vec(x)
        .iter()
        .zip(b)
        .fold(0.0_f64, |m, (l, r)| m.max((l - r).abs()))
}

/// Orthogonal projector onto `{v : B v = 0}` computed as
/// `I - B^T (B B^T)^{-1} B`; `B` must have full row rank.
pub fn kernel_projector(b: &Matrix) -> Result<Matrix> {
    let bn = b.to_nalgebra();
    let gram = &bn * bn.transpose();
    let inv = gram.try_inverse().ok_or_else(|| {
        Error::UnsupportedShape("constraint matrix does not have full row rank".into())
    })?;
    let p = DMatrix::identity(b.cols, b.cols) - bn.transpose() * inv * &bn;
    Ok(Matrix::from_nalgebra(&p))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[f64]]) -> Matrix {
        Matrix::from_rows(rows).unwrap()
    }

    #[test]
    fn boundary_and_selector_small_cases() {
        assert_eq!(boundary_matrix(2).unwrap(), m(&[&[1.0, -1.0]]));
        assert_eq!(
            boundary_matrix(3).unwrap(),
            m(&[&[1.0, 0.0, -1.0], &[0.0, 1.0, -1.0]])
        );
        assert_eq!(selector_matrix(2).unwrap(), m(&[&[1.0, 0.0]]));
        assert!(matches!(
            boundary_matrix(1),
            Err(Error::InvalidDimension(_))
        ));
        assert!(matches!(
            selector_matrix(0),
            Err(Error::InvalidDimension(_))
        ));
    }

    #[test]
    fn boundary_selector_identities_are_exact() {
        for k in 2..=7 {
            let b = boundary_matrix(k).unwrap();
            let d = selector_matrix(k).unwrap();
            let ones = Matrix::ones(k, 1);
            let last = Matrix::last_unit(k).unwrap();
            assert!((&b * &ones).is_zero());
            assert!((&d * &last).is_zero());
            assert_eq!(&b * &d.transpose(), Matrix::identity(k - 1));
            let expected = &Matrix::identity(k) - &(&ones * &last.transpose());
            assert_eq!(&d.transpose() * &b, expected);
        }
    }

    #[test]
    fn centering_matrix_values_and_projector_form() {
        assert_eq!(centering_matrix(1).unwrap(), m(&[&[0.0]]));
        assert_eq!(
            centering_matrix(2).unwrap(),
            m(&[&[0.5, -0.5], &[-0.5, 0.5]])
        );
        for k in 1..=6 {
            let h = centering_matrix(k).unwrap();
            assert_eq!(h, h.transpose());
            assert!((&h * &h).max_abs_diff(&h) <= 1e-12);
            assert!(max_abs(&h.mul_vec(&vec![1.0; k])) <= 1e-12);
            if k >= 2 {
                let p = kernel_projector(&boundary_matrix(k).unwrap()).unwrap();
                // kernel_projector returns I - B^T(BB^T)^{-1}B, so its complement is H_k
                let complement = &Matrix::identity(k) - &p;
                assert!(complement.max_abs_diff(&h) <= 1e-12);
            }
        }
    }

    #[test]
    fn kron_identity_factor_examples() {
        let b = m(&[&[1.0, -1.0]]);
        assert_eq!(
            kron(&Matrix::identity(2), &b).unwrap(),
            m(&[&[1.0, -1.0, 0.0, 0.0], &[0.0, 0.0, 1.0, -1.0]])
        );
        assert_eq!(
            kron(&b, &Matrix::identity(2)).unwrap(),
            m(&[&[1.0, 0.0, -1.0, 0.0], &[0.0, 1.0, 0.0, -1.0]])
        );
    }

    #[test]
    fn kron_rejects_oversized_results() {
        let big = Matrix::zeros(2001, 1);
        let err = kron(&big, &big.transpose()).unwrap_err();
        assert!(matches!(err, Error::Capacity { .. }));
    }

    #[test]
    fn vec_rows_definition() {
        assert_eq!(
            vec_rows(&m(&[&[1.0, 2.0], &[3.0, 4.0]])),
            vec![1.0, 2.0, 3.0, 4.0]
        );
    }

    #[test]
    fn solve_consistent_small_systems() {
        let tol = Tolerance::default();
        let x = solve_consistent(&Matrix::identity(2), &[3.0, 4.0], &tol)
            .unwrap()
            .unwrap();
        assert!((x[0] - 3.0).abs() < 1e-12 && (x[1] - 4.0).abs() < 1e-12);

        let x = solve_consistent(&m(&[&[1.0, -1.0]]), &[5.0], &tol)
            .unwrap()
            .unwrap();
        assert!((x[0] - x[1] - 5.0).abs() < 1e-12);
        // minimum-norm choice
        assert!((x[0] - 2.5).abs() < 1e-12 && (x[1] + 2.5).abs() < 1e-12);

        assert_eq!(
            solve_consistent(&m(&[&[1.0], &[1.0]]), &[0.0, 1.0], &tol).unwrap(),
            None
        );
        assert!(matches!(
            solve_consistent(&Matrix::identity(2), &[1.0], &tol),
            Err(Error::InvalidDimension(_))
        ));
    }

    #[test]
    fn nullity_examples() {
        let tol = Tolerance::default();
        assert_eq!(nullity(&Matrix::identity(3), &tol), 0);
        assert_eq!(nullity(&Matrix::zeros(2, 5), &tol), 5);
        for (k1, k2) in [(2, 2), (2, 3), (3, 3)] {
            let bb = kron(&boundary_matrix(k1).unwrap(), &boundary_matrix(k2).unwrap()).unwrap();
            assert_eq!(nullity(&bb, &tol), k1 + k2 - 1);
        }
    }

    #[test]
    fn tolerance_validation() {
        assert!(Tolerance::new(-1.0, 0.0).is_err());
        assert!(Tolerance::new(0.0, f64::NAN).is_err());
        let t = Tolerance::default();
        assert_eq!(t.threshold(1000.0), 1e-9 + 1e-9);
    }

    #[test]
    fn from_vec_rejects_bad_input() {
        assert!(Matrix::from_vec(2, 2, vec![1.0; 3]).is_err());
        assert!(Matrix::from_vec(1, 2, vec![1.0, f64::INFINITY]).is_err());
        assert!(Matrix::from_rows(&[vec![1.0, 2.0], vec![3.0]]).is_err());
    }
}
