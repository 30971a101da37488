//! Density matrices, strictly positive weights, and the random ensembles
//! behind every statistical check in this crate.
//!
//! All samplers draw from a [`SeededStream`], so a fixed `(seed, path)` pair
//! reproduces the same matrices bit for bit on every platform.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matcore::{frobenius_norm_sq, ComplexMatrix, HermitianMatrix, Spectrum, Weight};
use crate::qubit::{bloch_to_density, BlochObservable, BlochState};
use crate::stream::SeededStream;

/// Tolerance on the trace-one and eigenvalue-nonnegativity checks.
pub const DENSITY_TOL: f64 = 1e-12;

/// λ₁ must exceed this fraction of λ_d for a weight to count as strictly
/// positive; below it a mixing coefficient collapses to zero.
pub const POSITIVITY_TOL: f64 = 1e-12;

/// Rejection-sampling retry budget before reporting a degenerate draw.
const SAMPLE_RETRIES: usize = 3;

/// Traces below this mark a Gram matrix as too degenerate to normalize.
const DEGENERATE_TRACE: f64 = 1e-12;

/// A quantum state: Hermitian, unit trace, positive semidefinite, with its
/// eigendecomposition computed once at construction.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    matrix: HermitianMatrix,
    spectrum: Spectrum,
}

impl DensityMatrix {
    pub fn new(matrix: HermitianMatrix) -> Result<Self> {
        let trace = matrix.trace();
        if (trace - 1.0).abs() > DENSITY_TOL {
            return Err(Error::InvalidDensity(format!(
                "trace is {trace:.15}, expected 1"
            )));
        }
        let spectrum = matrix.spectrum()?;
        let lambda_min = spectrum.min();
        if lambda_min < -DENSITY_TOL {
            return Err(Error::InvalidDensity(format!(
                "smallest eigenvalue {lambda_min:.3e} is negative"
            )));
        }
        Ok(Self { matrix, spectrum })
    }

    /// `I/d`, the state of maximal ignorance.
    pub fn maximally_mixed(dim: usize) -> Self {
        let p = 1.0 / dim as f64;
        Self::new(HermitianMatrix::from_diag(&vec![p; dim]))
            .expect("uniform diagonal is a valid state")
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        self.matrix.matrix()
    }

    pub fn hermitian(&self) -> &HermitianMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Eigendecomposition, ascending; cached at construction.
    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }
}

impl Weight for DensityMatrix {
    fn weight(&self) -> &ComplexMatrix {
        self.matrix.matrix()
    }
}

/// A strictly positive Hermitian weight: `λ₁ > POSITIVITY_TOL · λ_d`.
/// No trace normalization is imposed.
#[derive(Debug, Clone)]
pub struct PositiveMatrix {
    matrix: HermitianMatrix,
    spectrum: Spectrum,
}

impl PositiveMatrix {
    pub fn new(matrix: HermitianMatrix) -> Result<Self> {
        let spectrum = matrix.spectrum()?;
        let lambda_min = spectrum.min();
        let lambda_max = spectrum.max();
        if lambda_min <= POSITIVITY_TOL * lambda_max.max(0.0) {
            return Err(Error::NonPositiveWeight(lambda_min));
        }
        Ok(Self { matrix, spectrum })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        self.matrix.matrix()
    }

    pub fn hermitian(&self) -> &HermitianMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Eigendecomposition, ascending; cached at construction.
    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }
}

impl Weight for PositiveMatrix {
    fn weight(&self) -> &ComplexMatrix {
        self.matrix.matrix()
    }
}

/// `Tr ρ²`, between `1/d` (maximally mixed) and `1` (pure).
pub fn purity(rho: &DensityMatrix) -> f64 {
    frobenius_norm_sq(rho.matrix())
}

/// The two smallest eigenvalues of a state together with
/// `λ₁λ₂/(λ₁ + λ₂)`; always within `[λ₁/2, λ₁]`, and exactly `(1 − Tr ρ²)/2`
/// for qubits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixingCoefficient {
    pub lambda1: f64,
    pub lambda2: f64,
    pub value: f64,
}

/// Never fails: eigenvalues are clamped to `[0, ∞)`, and the value collapses
/// to zero when `λ₁ ≤ POSITIVITY_TOL · λ_d` (pure or rank-deficient states)
/// or when the state is one-dimensional.
pub fn mixing_coefficient(rho: &DensityMatrix) -> MixingCoefficient {
    let spec = rho.spectrum();
    let lambda1 = spec.value(0).max(0.0);
    if spec.dim() < 2 {
        return MixingCoefficient {
            lambda1,
            lambda2: lambda1,
            value: 0.0,
        };
    }
    let lambda2 = spec.value(1).max(0.0);
    let value = if lambda1 <= POSITIVITY_TOL * spec.max() {
        0.0
    } else {
        lambda1 * lambda2 / (lambda1 + lambda2)
    };
    MixingCoefficient {
        lambda1,
        lambda2,
        value,
    }
}

fn ginibre(dim: usize, rng: &mut SeededStream) -> ComplexMatrix {
    ComplexMatrix::from_fn(dim, |_, _| rng.complex_normal())
}

fn normalized_gram(dim: usize, rng: &mut SeededStream) -> Option<HermitianMatrix> {
    let g = ginibre(dim, rng);
    let gram = g.matmul(&g.adjoint());
    let trace = gram.trace().re;
    if trace <= DEGENERATE_TRACE {
        return None;
    }
    let h = HermitianMatrix::new(gram.scale(Complex64::new(1.0 / trace, 0.0)))
        .expect("a Gram matrix is exactly Hermitian");
    Some(h)
}

/// `ρ = GG†/Tr(GG†)` with `G` a square matrix of i.i.d. standard complex
/// Gaussians: the Hilbert–Schmidt ensemble.
pub fn sample_density_hs(dim: usize, rng: &mut SeededStream) -> Result<DensityMatrix> {
    for _ in 0..SAMPLE_RETRIES {
        if let Some(h) = normalized_gram(dim, rng) {
            return DensityMatrix::new(h);
        }
    }
    Err(Error::DegenerateSample(SAMPLE_RETRIES))
}

/// Same construction as [`sample_density_hs`], rejecting the measure-zero
/// draws whose smallest eigenvalue is not strictly positive.
pub fn sample_positive_hs(dim: usize, rng: &mut SeededStream) -> Result<PositiveMatrix> {
    for _ in 0..SAMPLE_RETRIES {
        let Some(h) = normalized_gram(dim, rng) else {
            continue;
        };
        match PositiveMatrix::new(h) {
            Ok(w) => return Ok(w),
            Err(Error::NonPositiveWeight(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::DegenerateSample(SAMPLE_RETRIES))
}

/// Uniform-direction Bloch vector of radius `√(2p − 1)`, the radius at which
/// `Tr ρ² = p`. Defined for `p ∈ [1/2, 1]` only.
pub fn sample_bloch_fixed_purity(p: f64, rng: &mut SeededStream) -> Result<BlochState> {
    if !(0.5..=1.0).contains(&p) {
        return Err(Error::Domain(format!(
            "qubit purity {p} outside [1/2, 1]"
        )));
    }
    let r = (2.0 * p - 1.0).sqrt();
    let u = rng.unit_vec3();
    BlochState::new([r * u[0], r * u[1], r * u[2]])
}

/// [`sample_bloch_fixed_purity`] materialized as a density matrix.
pub fn sample_qubit_fixed_purity(p: f64, rng: &mut SeededStream) -> Result<DensityMatrix> {
    Ok(bloch_to_density(&sample_bloch_fixed_purity(p, rng)?))
}

/// `(G + G†)/2` with `G` i.i.d. standard complex Gaussian: diagonal entries
/// N(0, 1), off-diagonal real and imaginary parts N(0, 1/2).
pub fn sample_observable_gue(dim: usize, rng: &mut SeededStream) -> HermitianMatrix {
    let g = ginibre(dim, rng);
    let sym = (&g + &g.adjoint()).scale(Complex64::new(0.5, 0.0));
    HermitianMatrix::new(sym).expect("symmetrized Gaussian is exactly Hermitian")
}

/// Traceless observable `a·σ` with `a` uniform on the unit sphere.
pub fn sample_qubit_observable_unit_bloch(rng: &mut SeededStream) -> BlochObservable {
    BlochObservable::new(0.0, rng.unit_vec3()).expect("unit vector is finite")
}

/// Two orthonormal vectors in ℂᵈ: independent Gaussian draws followed by
/// Gram–Schmidt. Degenerate draws (measure zero) are redrawn.
pub fn sample_orthonormal_pair(
    dim: usize,
    rng: &mut SeededStream,
) -> (Vec<Complex64>, Vec<Complex64>) {
    assert!(dim >= 2, "an orthonormal pair needs dimension at least 2");
    loop {
        let x_raw: Vec<Complex64> = (0..dim).map(|_| rng.complex_normal()).collect();
        let nx: f64 = x_raw.iter().map(|z| z.norm_sqr()).sum();
        if nx.sqrt() <= 1e-6 {
            continue;
        }
        let inv = 1.0 / nx.sqrt();
        let x: Vec<Complex64> = x_raw.iter().map(|z| z * inv).collect();

        let y_raw: Vec<Complex64> = (0..dim).map(|_| rng.complex_normal()).collect();
        let overlap: Complex64 = x.iter().zip(&y_raw).map(|(a, b)| a.conj() * b).sum();
        let y_perp: Vec<Complex64> = y_raw
            .iter()
            .zip(&x)
            .map(|(b, a)| b - overlap * a)
            .collect();
        let ny: f64 = y_perp.iter().map(|z| z.norm_sqr()).sum();
        if ny.sqrt() <= 1e-6 {
            continue;
        }
        let inv = 1.0 / ny.sqrt();
        let y: Vec<Complex64> = y_perp.iter().map(|z| z * inv).collect();
        return (x, y);
    }
}
