//! Angular-momentum matrices for arbitrary spin `j` and the maximally-mixed
//! demonstration where the product of variances meets the trade-off bound.
//!
//! The basis is |j, m⟩ with m descending from j to −j, so `J₃` is diagonal
//! with entries ħm and the raising operator sits on the first superdiagonal:
//! `(J₊)[k−1][k] = ħ√(k(2j + 1 − k))`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matcore::{commutator, ComplexMatrix, HermitianMatrix};
use crate::relations::bound_report;
use crate::states::DensityMatrix;

/// 2j must land within this distance of a positive integer.
pub const SPIN_TOL: f64 = 1e-9;

/// The three spin components for a fixed `j`, all scaled by the same ħ.
#[derive(Debug, Clone)]
pub struct SpinSystem {
    twice_j: u32,
    hbar: f64,
    j1: HermitianMatrix,
    j2: HermitianMatrix,
    j3: HermitianMatrix,
}

impl SpinSystem {
    pub fn twice_j(&self) -> u32 {
        self.twice_j
    }

    pub fn j(&self) -> f64 {
        self.twice_j as f64 / 2.0
    }

    pub fn dim(&self) -> usize {
        self.twice_j as usize + 1
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn j1(&self) -> &HermitianMatrix {
        &self.j1
    }

    pub fn j2(&self) -> &HermitianMatrix {
        &self.j2
    }

    pub fn j3(&self) -> &HermitianMatrix {
        &self.j3
    }
}

fn validate_twice_j(j: f64) -> Result<u32> {
    if !j.is_finite() {
        return Err(Error::Domain(format!("spin {j} is not finite")));
    }
    let twice = 2.0 * j;
    let rounded = twice.round();
    if rounded < 1.0 || (twice - rounded).abs() > SPIN_TOL {
        return Err(Error::Domain(format!(
            "spin {j} is not a positive half-integer"
        )));
    }
    Ok(rounded as u32)
}

/// Builds `J₁, J₂, J₃` for spin `j` from the ladder operators:
/// `J₁ = (J₊ + J₋)/2`, `J₂ = (J₊ − J₋)/(2i)`, `J₋ = J₊†`.
pub fn build_spin(j: f64, hbar: f64) -> Result<SpinSystem> {
    let twice_j = validate_twice_j(j)?;
    if !(hbar.is_finite() && hbar > 0.0) {
        return Err(Error::Domain(format!("hbar {hbar} must be positive")));
    }
    let dim = twice_j as usize + 1;
    let t = twice_j as f64;

    let mut plus = ComplexMatrix::zeros(dim);
    for k in 1..dim {
        let kf = k as f64;
        let val = hbar * (kf * (t + 1.0 - kf)).sqrt();
        plus.set(k - 1, k, Complex64::new(val, 0.0));
    }
    let minus = plus.adjoint();

    let j1 = HermitianMatrix::new((&plus + &minus).scale(Complex64::new(0.5, 0.0)))?;
    let j2 = HermitianMatrix::new((&plus - &minus).scale(Complex64::new(0.0, -0.5)))?;
    let diag: Vec<f64> = (0..dim).map(|i| hbar * (t - 2.0 * i as f64) / 2.0).collect();
    let j3 = HermitianMatrix::from_diag(&diag);

    Ok(SpinSystem {
        twice_j,
        hbar,
        j1,
        j2,
        j3,
    })
}

/// `α_j = j(j+1)(2j+1)/3 = Σ_m m²`, evaluated as `t(t+1)(t+2)/12` with
/// `t = 2j` so the result is an exact dyadic rational in f64.
pub fn alpha_constant(j: f64) -> Result<f64> {
    let t = validate_twice_j(j)? as f64;
    Ok(t * (t + 1.0) * (t + 2.0) / 12.0)
}

/// Largest entry of `[J_a, J_b] − iħJ_c` over the three cyclic component
/// triples; zero up to rounding for a correctly built system.
pub fn commutation_residual(sys: &SpinSystem) -> f64 {
    let components = [&sys.j1, &sys.j2, &sys.j3];
    let mut worst = 0.0_f64;
    for (a, b, c) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
        let comm = commutator(components[a].matrix(), components[b].matrix())
            .expect("components share a dimension");
        let expected = components[c]
            .matrix()
            .scale(Complex64::new(0.0, sys.hbar));
        worst = worst.max((&comm - &expected).max_abs());
    }
    worst
}

/// Largest entry of `J₁² + J₂² + J₃² − ħ²j(j+1)I`.
pub fn casimir_residual(sys: &SpinSystem) -> f64 {
    let sq = |h: &HermitianMatrix| h.matrix().matmul(h.matrix());
    let total = &(&sq(&sys.j1) + &sq(&sys.j2)) + &sq(&sys.j3);
    let t = sys.twice_j as f64;
    let casimir = sys.hbar * sys.hbar * (t * (t + 2.0) / 4.0);
    let expected = ComplexMatrix::identity(sys.dim()).scale(Complex64::new(casimir, 0.0));
    (&total - &expected).max_abs()
}

/// The bound at the maximally mixed state, where Robertson and covariance
/// both vanish and only the trade-off term survives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinDemo {
    pub product: f64,
    pub bound: f64,
    pub robertson: f64,
    pub cov_sq: f64,
}

/// Evaluates `(J₁, J₂)` against `I/d`: the product is `(ħ²α_j/d)²`, the bound
/// `ħ⁴α_j/(2d²)`, and the two coincide exactly when `j = 1/2`.
pub fn maximally_mixed_demo(sys: &SpinSystem) -> Result<SpinDemo> {
    let rho = DensityMatrix::maximally_mixed(sys.dim());
    let report = bound_report(&sys.j1, &sys.j2, &rho)?;
    Ok(SpinDemo {
        product: report.product,
        bound: report.total_bound,
        robertson: report.robertson,
        cov_sq: report.schrodinger_cov_sq,
    })
}
