//! Dense complex matrices, Hermitian wrappers, and spectral decomposition.
//!
//! Everything downstream works with square `f64`-precision complex matrices.
//! [`HermitianMatrix`] guarantees exact Hermitian symmetry by construction
//! (tiny defects are symmetrized away, larger ones rejected), and
//! [`hermitian_spectrum`] diagonalizes via cyclic Jacobi rotations, which is
//! accurate and dependency-free at the dimensions used here (d ≲ 16).

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Relative defect below which a nearly-Hermitian matrix is symmetrized.
pub const HERMITIAN_DEFECT_TOL: f64 = 1e-12;
/// Off-diagonal Frobenius mass threshold (relative) for Jacobi convergence.
pub const JACOBI_OFF_TOL: f64 = 1e-14;
/// Hard cap on Jacobi sweeps before reporting non-convergence.
pub const JACOBI_MAX_SWEEPS: usize = 100;
/// Relative tolerance for discarding the imaginary part of a real quantity.
pub const REALNESS_TOL: f64 = 1e-12;

/// Square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Zero matrix of the given dimension.
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Complex64::ZERO; dim * dim],
        }
    }

    /// Identity matrix.
    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, Complex64::ONE);
        }
        m
    }

    /// Diagonal matrix from real entries.
    pub fn from_diag(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.set(i, i, Complex64::new(d, 0.0));
        }
        m
    }

    /// Build from nested rows; every row must have length `rows.len()`.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::Dimension(row.len(), dim));
            }
            data.extend_from_slice(row);
        }
        let m = Self { dim, data };
        if !m.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(m)
    }

    /// Build entry-wise from a closure over (row, col), row-major order.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.data[row * self.dim + col] = value;
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "matrix dimension mismatch");
        Self {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "matrix dimension mismatch");
        Self {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|a| a * factor).collect(),
        }
    }

    /// Matrix product `self · other`.
    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "matrix dimension mismatch");
        let d = self.dim;
        let mut out = Self::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let aik = self.data[i * d + k];
                if aik == Complex64::ZERO {
                    continue;
                }
                for j in 0..d {
                    out.data[i * d + j] += aik * other.data[k * d + j];
                }
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(j, i).conj())
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Column `j` as a vector.
    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.dim).map(|i| self.get(i, j)).collect()
    }
}

impl std::ops::Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: Self) -> ComplexMatrix {
        ComplexMatrix::add(self, rhs)
    }
}

impl std::ops::Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: Self) -> ComplexMatrix {
        ComplexMatrix::sub(self, rhs)
    }
}

impl std::ops::Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: Self) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

/// A matrix guaranteed Hermitian by construction.
///
/// Construction symmetrizes `(M + M†)/2` when the Hermitian defect is below
/// `1e-12 · (1 + max |entry|)` and rejects the input otherwise, so silent
/// corruption of genuinely non-Hermitian data is impossible.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    m: ComplexMatrix,
}

impl HermitianMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        let d = m.dim();
        if !m.is_finite() {
            return Err(Error::NonFinite);
        }
        let mut defect: f64 = 0.0;
        for i in 0..d {
            for j in i..d {
                defect = defect.max((m.get(i, j) - m.get(j, i).conj()).norm());
            }
        }
        let tol = HERMITIAN_DEFECT_TOL * (1.0 + m.max_abs());
        if defect > tol {
            return Err(Error::NotHermitian { defect, tol });
        }
        let mut sym = ComplexMatrix::zeros(d);
        for i in 0..d {
            sym.set(i, i, Complex64::new(m.get(i, i).re, 0.0));
            for j in (i + 1)..d {
                let avg = (m.get(i, j) + m.get(j, i).conj()) * 0.5;
                sym.set(i, j, avg);
                sym.set(j, i, avg.conj());
            }
        }
        Ok(Self { m: sym })
    }

    /// Diagonal Hermitian matrix from real entries.
    pub fn from_diag(diag: &[f64]) -> Self {
        Self {
            m: ComplexMatrix::from_diag(diag),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            m: ComplexMatrix::identity(dim),
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.m
    }

    pub fn dim(&self) -> usize {
        self.m.dim()
    }

    /// Real trace.
    pub fn trace(&self) -> f64 {
        self.m.trace().re
    }

    pub fn spectrum(&self) -> Result<Spectrum> {
        hermitian_spectrum(self)
    }
}

/// Eigendecomposition of a Hermitian matrix: ascending real eigenvalues and
/// the matching orthonormal eigenvector columns.
#[derive(Debug, Clone)]
pub struct Spectrum {
    values: Vec<f64>,
    vectors: ComplexMatrix,
}

impl Spectrum {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// Eigenvalues in ascending order.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, i: usize) -> f64 {
        self.values[i]
    }

    /// Matrix whose `i`-th column is the eigenvector of `values()[i]`.
    pub fn vectors(&self) -> &ComplexMatrix {
        &self.vectors
    }

    pub fn vector(&self, i: usize) -> Vec<Complex64> {
        self.vectors.column(i)
    }

    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        *self.values.last().expect("empty spectrum")
    }

    /// Rebuild `U diag(f(λ)) U†`; `f = identity` reconstructs the matrix.
    pub fn map_values(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let d = self.dim();
        let u = &self.vectors;
        ComplexMatrix::from_fn(d, |i, j| {
            (0..d)
                .map(|k| u.get(i, k) * f(self.values[k]) * u.get(j, k).conj())
                .sum()
        })
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map_values(|x| x)
    }
}

/// Commutator `[A, B] = AB − BA`.
pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    if a.dim() != b.dim() {
        return Err(Error::Dimension(a.dim(), b.dim()));
    }
    Ok(&a.matmul(b) - &b.matmul(a))
}

/// Anticommutator `{A, B} = AB + BA`.
pub fn anticommutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    if a.dim() != b.dim() {
        return Err(Error::Dimension(a.dim(), b.dim()));
    }
    Ok(&a.matmul(b) + &b.matmul(a))
}

/// Squared Frobenius norm `‖X‖² = Tr(X†X) = Σ |x_ij|²`.
pub fn frobenius_norm_sq(x: &ComplexMatrix) -> f64 {
    x_entries_norm_sq(x)
}

fn x_entries_norm_sq(x: &ComplexMatrix) -> f64 {
    let d = x.dim();
    let mut sum = 0.0;
    for i in 0..d {
        for j in 0..d {
            sum += x.get(i, j).norm_sqr();
        }
    }
    sum
}

/// Types usable as the weight of a weighted norm or as a state in an
/// expectation value: Hermitian, positive semidefinite, finite.
pub trait Weight {
    fn weight(&self) -> &ComplexMatrix;
}

/// Weighted squared norm `‖X‖²_ω = Tr(ω X†X)`.
///
/// Real for any Hermitian PSD weight; the imaginary residue is validated
/// below `1e-12 · scale` before being discarded.
pub fn weighted_norm_sq(x: &ComplexMatrix, w: &impl Weight) -> Result<f64> {
    let wm = w.weight();
    if x.dim() != wm.dim() {
        return Err(Error::Dimension(x.dim(), wm.dim()));
    }
    let d = x.dim();
    let mut sum = Complex64::ZERO;
    // Tr(ω X†X) = Σ_{i,j,k} ω[i][j] conj(x[k][j]) x[k][i]
    for k in 0..d {
        for i in 0..d {
            let xki = x.get(k, i);
            if xki == Complex64::ZERO {
                continue;
            }
            for j in 0..d {
                sum += wm.get(i, j) * x.get(k, j).conj() * xki;
            }
        }
    }
    validate_real(sum, "weighted norm")
}

/// Expectation value `⟨X⟩ = Tr(Xρ)`; complex in general.
pub fn expectation(x: &ComplexMatrix, state: &impl Weight) -> Result<Complex64> {
    let rho = state.weight();
    if x.dim() != rho.dim() {
        return Err(Error::Dimension(x.dim(), rho.dim()));
    }
    let d = x.dim();
    let mut sum = Complex64::ZERO;
    for i in 0..d {
        for j in 0..d {
            sum += x.get(i, j) * rho.get(j, i);
        }
    }
    Ok(sum)
}

/// Expectation of a Hermitian observable, validated real.
pub fn expectation_real(x: &HermitianMatrix, state: &impl Weight) -> Result<f64> {
    let z = expectation(x.matrix(), state)?;
    validate_real(z, "expectation of Hermitian observable")
}

/// Checks that a mathematically-real quantity has only a rounding-level
/// imaginary part, then discards it. Taking the real part silently would
/// mask bugs upstream.
pub fn validate_real(z: Complex64, what: &str) -> Result<f64> {
    if z.im.abs() > REALNESS_TOL * (1.0 + z.norm()) {
        return Err(Error::Numerical(format!(
            "{what} should be real, got imaginary part {:.3e}",
            z.im
        )));
    }
    Ok(z.re)
}

/// Full eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
///
/// Each pivot phase-reduces the complex off-diagonal entry to a real one and
/// applies the classical symmetric 2×2 rotation. Sweeps stop once the
/// off-diagonal Frobenius mass falls below `1e-14 · (1 + ‖M‖)`.
pub fn hermitian_spectrum(h: &HermitianMatrix) -> Result<Spectrum> {
    let d = h.dim();
    let mut a = h.matrix().clone();
    let mut v = ComplexMatrix::identity(d);

    if d > 1 {
        let norm = frobenius_norm_sq(&a).sqrt();
        let stop = JACOBI_OFF_TOL * (1.0 + norm);
        let mut converged = false;
        for _sweep in 0..JACOBI_MAX_SWEEPS {
            if off_diagonal_norm(&a) <= stop {
                converged = true;
                break;
            }
            for p in 0..d - 1 {
                for q in p + 1..d {
                    rotate(&mut a, &mut v, p, q);
                }
            }
        }
        if !converged && off_diagonal_norm(&a) > stop {
            return Err(Error::Convergence(JACOBI_MAX_SWEEPS));
        }
    }

    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| {
        a.get(i, i)
            .re
            .partial_cmp(&a.get(j, j).re)
            .expect("eigenvalues are finite")
    });
    let values: Vec<f64> = order.iter().map(|&i| a.get(i, i).re).collect();
    let vectors = ComplexMatrix::from_fn(d, |i, j| v.get(i, order[j]));
    Ok(Spectrum { values, vectors })
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let d = a.dim();
    let mut sum = 0.0;
    for i in 0..d {
        for j in 0..d {
            if i != j {
                sum += a.get(i, j).norm_sqr();
            }
        }
    }
    sum.sqrt()
}

/// One Jacobi rotation zeroing the (p, q) entry of the Hermitian matrix `a`,
/// accumulated into the eigenvector columns `v`.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let beta = a.get(p, q);
    let r = beta.norm();
    if r <= f64::MIN_POSITIVE {
        return;
    }
    let phase = beta / r;
    let alpha = a.get(p, p).re;
    let gamma = a.get(q, q).re;
    let tau = (gamma - alpha) / (2.0 * r);
    // Smaller-magnitude root of t² − 2τt − 1 = 0 keeps the rotation angle
    // below 45° for numerical stability.
    let t = if tau >= 0.0 {
        -1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let d = a.dim();

    // A ← A·V with V = [[c, −s·phase], [s·conj(phase), c]] on (p, q).
    for k in 0..d {
        let akp = a.get(k, p);
        let akq = a.get(k, q);
        a.set(k, p, akp * c + akq * s * phase.conj());
        a.set(k, q, akq * c - akp * s * phase);
    }
    // A ← V†·A.
    for k in 0..d {
        let apk = a.get(p, k);
        let aqk = a.get(q, k);
        a.set(p, k, apk * c + aqk * s * phase);
        a.set(q, k, aqk * c - apk * s * phase.conj());
    }
    // Pivot pair is zero by construction; pin it and keep the diagonal real.
    a.set(p, q, Complex64::ZERO);
    a.set(q, p, Complex64::ZERO);
    let app = a.get(p, p).re;
    let aqq = a.get(q, q).re;
    a.set(p, p, Complex64::new(app, 0.0));
    a.set(q, q, Complex64::new(aqq, 0.0));

    for k in 0..d {
        let vkp = v.get(k, p);
        let vkq = v.get(k, q);
        v.set(k, p, vkp * c + vkq * s * phase.conj());
        v.set(k, q, vkq * c - vkp * s * phase);
    }
}
