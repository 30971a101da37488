//! Variance-product bound terms and the lemma-level norm properties.
//!
//! The central object is [`BoundReport`]: for observables A, B and state ρ it
//! collects both sides of
//!
//! ```text
//! V(A)·V(B) ≥ ¼|⟨[A,B]⟩|² + Cov(A,B)² + λ₁λ₂/(λ₁+λ₂)·‖[A,B]‖²_ρ
//! ```
//!
//! where λ₁, λ₂ are the two smallest eigenvalues of ρ and ‖·‖_ρ is the
//! ρ-weighted Frobenius norm. The remaining operations expose the supporting
//! machinery — the looser spectral bound, the weighted Cauchy–Schwarz shift,
//! the orthonormal-pair ratio check — plus the two earlier qubit trade-off
//! terms for cross-validation.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matcore::{
    self, commutator, expectation, expectation_real, validate_real, weighted_norm_sq,
    ComplexMatrix, HermitianMatrix, Weight,
};
use crate::qubit::{self, BlochObservable};
use crate::states::{mixing_coefficient, purity, DensityMatrix, PositiveMatrix};

/// Relative tolerance below which negative slack counts as an inequality
/// violation rather than rounding.
pub const SLACK_TOL: f64 = 1e-9;

/// Both sides of the variance-product bound, term by term.
///
/// `total_bound = robertson + schrodinger_cov_sq + new_tradeoff` and
/// `slack = product − total_bound`; negative slack beyond rounding means the
/// inequality failed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundReport {
    pub variance_a: f64,
    pub variance_b: f64,
    pub product: f64,
    pub robertson: f64,
    pub schrodinger_cov_sq: f64,
    pub new_tradeoff: f64,
    pub total_bound: f64,
    pub slack: f64,
}

fn check_dim(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::Dimension(a, b));
    }
    Ok(())
}

/// Variance `V(A) = Tr[(A − ⟨A⟩)²ρ] = ‖A − ⟨A⟩I‖²_ρ`.
pub fn variance(a: &HermitianMatrix, rho: &DensityMatrix) -> Result<f64> {
    check_dim(a.dim(), rho.dim())?;
    let mean = expectation_real(a, rho)?;
    let shifted = a
        .matrix()
        .sub(&ComplexMatrix::identity(a.dim()).scale(Complex64::new(mean, 0.0)));
    weighted_norm_sq(&shifted, rho)
}

/// Symmetrized covariance `Cov(A,B) = ⟨{A,B}⟩/2 − ⟨A⟩⟨B⟩`.
pub fn covariance(a: &HermitianMatrix, b: &HermitianMatrix, rho: &DensityMatrix) -> Result<f64> {
    check_dim(a.dim(), b.dim())?;
    check_dim(a.dim(), rho.dim())?;
    let anti = matcore::anticommutator(a.matrix(), b.matrix())?;
    let sym = validate_real(expectation(&anti, rho)?, "anticommutator expectation")? / 2.0;
    let ma = expectation_real(a, rho)?;
    let mb = expectation_real(b, rho)?;
    Ok(sym - ma * mb)
}

/// Robertson term `¼|⟨[A,B]⟩|²`.
pub fn robertson_term(a: &HermitianMatrix, b: &HermitianMatrix, rho: &DensityMatrix) -> Result<f64> {
    check_dim(a.dim(), b.dim())?;
    check_dim(a.dim(), rho.dim())?;
    let comm = commutator(a.matrix(), b.matrix())?;
    Ok(0.25 * expectation(&comm, rho)?.norm_sqr())
}

/// Mixed-state trade-off term `λ₁λ₂/(λ₁+λ₂) · ‖[A,B]‖²_ρ`.
pub fn new_tradeoff_term(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    rho: &DensityMatrix,
) -> Result<f64> {
    check_dim(a.dim(), b.dim())?;
    check_dim(a.dim(), rho.dim())?;
    let comm = commutator(a.matrix(), b.matrix())?;
    Ok(mixing_coefficient(rho).value * weighted_norm_sq(&comm, rho)?)
}

/// Same value as [`new_tradeoff_term`]; reported separately where the
/// standalone commutator-norm bound is compared against the classic terms.
pub fn conjectured_bound_term(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    rho: &DensityMatrix,
) -> Result<f64> {
    new_tradeoff_term(a, b, rho)
}

/// Looser spectral bound coefficient: `(λ₁²/(2λ_d)) · ‖[A,B]‖²_ρ`.
pub fn loose_bound_term(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    rho: &DensityMatrix,
) -> Result<f64> {
    check_dim(a.dim(), b.dim())?;
    check_dim(a.dim(), rho.dim())?;
    let spec = rho.spectrum();
    let lambda1 = spec.min().max(0.0);
    let lambda_d = spec.max();
    let comm = commutator(a.matrix(), b.matrix())?;
    Ok(lambda1 * lambda1 / (2.0 * lambda_d) * weighted_norm_sq(&comm, rho)?)
}

/// Full report of every term of the bound for one (A, B, ρ) triple.
pub fn bound_report(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    rho: &DensityMatrix,
) -> Result<BoundReport> {
    let variance_a = variance(a, rho)?;
    let variance_b = variance(b, rho)?;
    let product = variance_a * variance_b;
    let robertson = robertson_term(a, b, rho)?;
    let cov = covariance(a, b, rho)?;
    let schrodinger_cov_sq = cov * cov;
    let new_tradeoff = new_tradeoff_term(a, b, rho)?;
    let total_bound = robertson + schrodinger_cov_sq + new_tradeoff;
    Ok(BoundReport {
        variance_a,
        variance_b,
        product,
        robertson,
        schrodinger_cov_sq,
        new_tradeoff,
        total_bound,
        slack: product - total_bound,
    })
}

/// ω-weighted inner product `⟨X,Y⟩_ω = Tr(X†Yω)`.
pub fn weighted_inner(x: &ComplexMatrix, y: &ComplexMatrix, w: &impl Weight) -> Result<Complex64> {
    check_dim(x.dim(), y.dim())?;
    check_dim(x.dim(), w.weight().dim())?;
    Ok(x.adjoint().matmul(y).matmul(w.weight()).trace())
}

/// Optimal shift of X along Y in the ω-weighted norm.
///
/// Returns `t = −conj(Tr(X†Yω))/‖Y‖²_ω` and `X + tY`, the minimizer of
/// `‖X + sY‖²_ω` over complex s, with minimum
/// `‖X‖²_ω − |Tr(X†Yω)|²/‖Y‖²_ω`.
pub fn shift_minimizer(
    x: &ComplexMatrix,
    y: &ComplexMatrix,
    w: &PositiveMatrix,
) -> Result<(Complex64, ComplexMatrix)> {
    let ynorm = weighted_norm_sq(y, w)?;
    if ynorm <= f64::MIN_POSITIVE {
        return Err(Error::ZeroNorm);
    }
    let inner = weighted_inner(x, y, w)?;
    let t = -inner.conj() / ynorm;
    let shifted = x.add(&y.scale(t));
    Ok((t, shifted))
}

/// Cauchy–Schwarz defect `‖X‖²_ω‖Y‖²_ω − |Tr(X†Yω)|²`, nonnegative up to
/// rounding for any strictly positive ω.
pub fn strengthened_lhs(x: &ComplexMatrix, y: &ComplexMatrix, w: &PositiveMatrix) -> Result<f64> {
    let nx = weighted_norm_sq(x, w)?;
    let ny = weighted_norm_sq(y, w)?;
    let inner = weighted_inner(x, y, w)?;
    let value = nx * ny - inner.norm_sqr();
    if value < -1e-12 * (1.0 + nx * ny) {
        return Err(Error::Numerical(format!(
            "Cauchy-Schwarz defect came out negative: {value:.3e}"
        )));
    }
    Ok(value)
}

/// Compares the global eigenvalue ratio `(λ₁+λ₂)/(λ₁λ₂)` of ω against the
/// same expression restricted to the span of an orthonormal pair (x, y):
/// `lhs ≥ rhs` for every strictly positive ω.
pub fn lemma_a1_ratio_check(
    w: &PositiveMatrix,
    x: &[Complex64],
    y: &[Complex64],
) -> Result<(f64, f64)> {
    let d = w.dim();
    if x.len() != d {
        return Err(Error::Dimension(x.len(), d));
    }
    if y.len() != d {
        return Err(Error::Dimension(y.len(), d));
    }
    let nx: f64 = x.iter().map(|z| z.norm_sqr()).sum();
    let ny: f64 = y.iter().map(|z| z.norm_sqr()).sum();
    let overlap: Complex64 = x.iter().zip(y).map(|(a, b)| a.conj() * b).sum();
    const ORTHO_TOL: f64 = 1e-10;
    if (nx - 1.0).abs() > ORTHO_TOL || (ny - 1.0).abs() > ORTHO_TOL {
        return Err(Error::NotOrthonormal(format!(
            "norms {:.12}, {:.12}",
            nx.sqrt(),
            ny.sqrt()
        )));
    }
    if overlap.norm() > ORTHO_TOL {
        return Err(Error::NotOrthonormal(format!(
            "overlap magnitude {:.3e}",
            overlap.norm()
        )));
    }

    let quad = |u: &[Complex64], v: &[Complex64]| -> Complex64 {
        let wm = w.weight();
        let mut sum = Complex64::ZERO;
        for (i, ui) in u.iter().enumerate() {
            for (j, vj) in v.iter().enumerate() {
                sum += ui.conj() * wm.get(i, j) * vj;
            }
        }
        sum
    };
    let wxx = validate_real(quad(x, x), "⟨x|ωx⟩")?;
    let wyy = validate_real(quad(y, y), "⟨y|ωy⟩")?;
    let wxy = quad(x, y);

    let lambda1 = w.spectrum().value(0);
    let lambda2 = w.spectrum().value(1);
    let lhs = (lambda1 + lambda2) / (lambda1 * lambda2);
    let rhs = (wxx + wyy) / (wxx * wyy - wxy.norm_sqr());
    Ok((lhs, rhs))
}

/// Earlier qubit trade-off term `(|a|²|b|² − (a·b)²) · 2(1−P)` in Bloch form.
pub fn mpm_term(a: &BlochObservable, b: &BlochObservable, rho: &DensityMatrix) -> Result<f64> {
    check_dim(rho.dim(), 2)?;
    let av = a.vector();
    let bv = b.vector();
    let linear_entropy = 2.0 * (1.0 - purity(rho));
    Ok((qubit::dot(av, av) * qubit::dot(bv, bv) - qubit::dot(av, bv).powi(2)) * linear_entropy)
}

/// Earlier qubit trade-off term `(1−P)/8 · (ξ(A,A)ξ(B,B) − ξ(A,B)²)` with
/// `ξ(X,Y) = 2Tr(XY) − Tr(X)Tr(Y)`.
pub fn zheng_term(a: &HermitianMatrix, b: &HermitianMatrix, rho: &DensityMatrix) -> Result<f64> {
    check_dim(a.dim(), 2)?;
    check_dim(b.dim(), 2)?;
    check_dim(rho.dim(), 2)?;
    let xi_aa = qubit::xi(a, a)?;
    let xi_bb = qubit::xi(b, b)?;
    let xi_ab = qubit::xi(a, b)?;
    Ok((1.0 - purity(rho)) / 8.0 * (xi_aa * xi_bb - xi_ab * xi_ab))
}
