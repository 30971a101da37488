//! Bloch-vector calculus for two-level systems.
//!
//! A qubit state is ρ = ½(I + c·σ) with |c| ≤ 1 and an observable is
//! A = a₀I + a·σ. Every bound term then has a closed form in plain real
//! 3-vector arithmetic; [`closed_form_report`] computes the full report that
//! way, deliberately touching no complex matrices, so it serves as an
//! independent oracle for the matrix-path computation in `relations`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matcore::{expectation, validate_real, ComplexMatrix, HermitianMatrix};
use crate::relations::BoundReport;
use crate::states::DensityMatrix;

/// Slack allowed on |c| beyond 1 for round-trip drift on pure states.
pub const BLOCH_NORM_TOL: f64 = 1e-12;

pub fn dot(u: [f64; 3], v: [f64; 3]) -> f64 {
    u[0] * v[0] + u[1] * v[1] + u[2] * v[2]
}

pub fn cross(u: [f64; 3], v: [f64; 3]) -> [f64; 3] {
    [
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    ]
}

/// Bloch coordinates of a qubit state; |c| ≤ 1 + tolerance enforced,
/// larger vectors rejected rather than clamped.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochState {
    c: [f64; 3],
}

impl BlochState {
    pub fn new(c: [f64; 3]) -> Result<Self> {
        if !c.iter().all(|x| x.is_finite()) {
            return Err(Error::NonFinite);
        }
        let norm = dot(c, c).sqrt();
        if norm > 1.0 + BLOCH_NORM_TOL {
            return Err(Error::Domain(format!(
                "Bloch vector norm {norm:.15} exceeds 1"
            )));
        }
        Ok(Self { c })
    }

    pub fn vector(&self) -> [f64; 3] {
        self.c
    }

    pub fn norm(&self) -> f64 {
        dot(self.c, self.c).sqrt()
    }
}

/// Bloch decomposition of a qubit observable A = a₀I + a·σ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochObservable {
    a0: f64,
    a: [f64; 3],
}

impl BlochObservable {
    pub fn new(a0: f64, a: [f64; 3]) -> Result<Self> {
        if !a0.is_finite() || !a.iter().all(|x| x.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { a0, a })
    }

    pub fn offset(&self) -> f64 {
        self.a0
    }

    pub fn vector(&self) -> [f64; 3] {
        self.a
    }
}

pub fn pauli_x() -> HermitianMatrix {
    let m = ComplexMatrix::from_rows(&[
        vec![Complex64::ZERO, Complex64::ONE],
        vec![Complex64::ONE, Complex64::ZERO],
    ])
    .expect("static entries");
    HermitianMatrix::new(m).expect("σx is Hermitian")
}

pub fn pauli_y() -> HermitianMatrix {
    let m = ComplexMatrix::from_rows(&[
        vec![Complex64::ZERO, Complex64::new(0.0, -1.0)],
        vec![Complex64::new(0.0, 1.0), Complex64::ZERO],
    ])
    .expect("static entries");
    HermitianMatrix::new(m).expect("σy is Hermitian")
}

pub fn pauli_z() -> HermitianMatrix {
    HermitianMatrix::from_diag(&[1.0, -1.0])
}

fn check_qubit(dim: usize) -> Result<()> {
    if dim != 2 {
        return Err(Error::Dimension(dim, 2));
    }
    Ok(())
}

/// ρ = ½(I + c·σ), eigenvalues (1 ± |c|)/2.
pub fn bloch_to_density(s: &BlochState) -> DensityMatrix {
    let [c1, c2, c3] = s.vector();
    let m = ComplexMatrix::from_rows(&[
        vec![
            Complex64::new((1.0 + c3) / 2.0, 0.0),
            Complex64::new(c1 / 2.0, -c2 / 2.0),
        ],
        vec![
            Complex64::new(c1 / 2.0, c2 / 2.0),
            Complex64::new((1.0 - c3) / 2.0, 0.0),
        ],
    ])
    .expect("finite Bloch coordinates");
    let h = HermitianMatrix::new(m).expect("Bloch construction is exactly Hermitian");
    DensityMatrix::new(h).expect("Bloch vector inside the unit ball gives a valid state")
}

/// Inverse of [`bloch_to_density`]: cᵢ = Tr(ρσᵢ).
pub fn density_to_bloch(rho: &DensityMatrix) -> Result<BlochState> {
    check_qubit(rho.dim())?;
    let component = |sigma: HermitianMatrix| -> Result<f64> {
        validate_real(expectation(sigma.matrix(), rho)?, "Bloch component")
    };
    BlochState::new([
        component(pauli_x())?,
        component(pauli_y())?,
        component(pauli_z())?,
    ])
}

/// Bloch decomposition of a Hermitian qubit observable:
/// a₀ = Tr(A)/2, aᵢ = Tr(Aσᵢ)/2.
pub fn observable_to_bloch(a: &HermitianMatrix) -> Result<BlochObservable> {
    check_qubit(a.dim())?;
    let m = a.matrix();
    let half_tr = |s: HermitianMatrix| -> Result<f64> {
        validate_real(m.matmul(s.matrix()).trace(), "observable Bloch component").map(|x| x / 2.0)
    };
    BlochObservable::new(
        a.trace() / 2.0,
        [half_tr(pauli_x())?, half_tr(pauli_y())?, half_tr(pauli_z())?],
    )
}

/// A = a₀I + a·σ.
pub fn bloch_to_observable(o: &BlochObservable) -> HermitianMatrix {
    let a0 = o.offset();
    let [a1, a2, a3] = o.vector();
    let m = ComplexMatrix::from_rows(&[
        vec![Complex64::new(a0 + a3, 0.0), Complex64::new(a1, -a2)],
        vec![Complex64::new(a1, a2), Complex64::new(a0 - a3, 0.0)],
    ])
    .expect("finite Bloch coordinates");
    HermitianMatrix::new(m).expect("Bloch construction is exactly Hermitian")
}

/// Every bound term in closed form:
///
/// ```text
/// V(A)      = |a|² − (a·c)²
/// robertson = ((a×b)·c)²
/// cov²      = (a·b − (a·c)(b·c))²
/// trade-off = (1 − |c|²)·|a×b|²
/// ```
///
/// For qubits the product equals the total bound identically, so the slack
/// is rounding-level.
pub fn closed_form_report(a: &BlochObservable, b: &BlochObservable, s: &BlochState) -> BoundReport {
    let av = a.vector();
    let bv = b.vector();
    let cv = s.vector();
    let ac = dot(av, cv);
    let bc = dot(bv, cv);
    let axb = cross(av, bv);

    let variance_a = dot(av, av) - ac * ac;
    let variance_b = dot(bv, bv) - bc * bc;
    let product = variance_a * variance_b;
    let robertson = dot(axb, cv).powi(2);
    let cov = dot(av, bv) - ac * bc;
    let schrodinger_cov_sq = cov * cov;
    let new_tradeoff = (1.0 - dot(cv, cv)) * dot(axb, axb);
    let total_bound = robertson + schrodinger_cov_sq + new_tradeoff;
    BoundReport {
        variance_a,
        variance_b,
        product,
        robertson,
        schrodinger_cov_sq,
        new_tradeoff,
        total_bound,
        slack: product - total_bound,
    }
}

/// |product − total_bound| via the matrix path; rounding-level for every
/// qubit triple because the two-level bound is an exact equality.
pub fn exact_equality_residual(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    rho: &DensityMatrix,
) -> Result<f64> {
    check_qubit(rho.dim())?;
    let report = crate::relations::bound_report(a, b, rho)?;
    Ok(report.slack.abs())
}

/// ξ(X,Y) = 2Tr(XY) − Tr(X)Tr(Y); equals 4(a·b) for Bloch forms.
pub fn xi(x: &HermitianMatrix, y: &HermitianMatrix) -> Result<f64> {
    check_qubit(x.dim())?;
    check_qubit(y.dim())?;
    let txy = validate_real(x.matrix().matmul(y.matrix()).trace(), "Tr(XY)")?;
    Ok(2.0 * txy - x.trace() * y.trace())
}
