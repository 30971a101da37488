//! Uncertainty-bound computations for mixed quantum states.
//!
//! The central object is a strengthened variance bound: for observables A, B
//! and a state ρ with ascending eigenvalues λ₁ ≤ λ₂ ≤ …,
//!
//! ```text
//! V(A)·V(B) ≥ ¼|⟨[A,B]⟩|² + Cov(A,B)² + λ₁λ₂/(λ₁+λ₂)·‖[A,B]‖²_ρ
//! ```
//!
//! where `‖X‖²_ρ = Tr(ρX†X)`. The right-hand side keeps a commutator
//! contribution alive on mixed states even when the expectation of the
//! commutator vanishes, and collapses to an exact equality on qubits.
//!
//! Module map:
//!
//! - [`matcore`]: dense complex matrices, Hermitian wrappers, a Jacobi
//!   eigensolver, weighted norms.
//! - [`states`]: density matrices, positive weights, and seeded random
//!   ensembles.
//! - [`relations`]: the bound terms, the assembled [`BoundReport`], and the
//!   surrounding norm inequalities.
//! - [`qubit`]: Bloch-vector closed forms that mirror every matrix-path
//!   quantity in plain real arithmetic.
//! - [`spin`]: angular-momentum matrices and the maximally-mixed
//!   demonstration.
//! - [`tightness`]: ascent and evolution searches certifying the constants.
//! - [`stream`]: reproducible, path-splittable random streams.

pub mod error;
pub mod matcore;
pub mod qubit;
pub mod relations;
pub mod spin;
pub mod states;
pub mod stream;
pub mod tightness;

pub use error::{Error, Result};
pub use matcore::{
    anticommutator, commutator, frobenius_norm_sq, hermitian_spectrum, weighted_norm_sq,
    ComplexMatrix, HermitianMatrix, Spectrum, Weight,
};
pub use qubit::{
    bloch_to_density, bloch_to_observable, closed_form_report, density_to_bloch,
    exact_equality_residual, observable_to_bloch, BlochObservable, BlochState,
};
pub use relations::{
    bound_report, conjectured_bound_term, covariance, lemma_a1_ratio_check, loose_bound_term,
    mpm_term, new_tradeoff_term, robertson_term, shift_minimizer, strengthened_lhs, variance,
    zheng_term, BoundReport,
};
pub use spin::{
    alpha_constant, build_spin, casimir_residual, commutation_residual, maximally_mixed_demo,
    SpinDemo, SpinSystem,
};
pub use states::{
    mixing_coefficient, purity, sample_bloch_fixed_purity, sample_density_hs,
    sample_observable_gue, sample_positive_hs, sample_qubit_fixed_purity,
    sample_qubit_observable_unit_bloch, DensityMatrix, MixingCoefficient, PositiveMatrix,
};
pub use stream::SeededStream;
pub use tightness::{
    maximize_ratio, minimize_eq5_slack, ratio, SlackSearch, TightnessCertificate,
};
