//! Searches certifying how tight the commutator-norm inequality is.
//!
//! For a strictly positive weight ω with ascending eigenvalues λ₁ ≤ … ≤ λ_d,
//! the inequality `c·‖X‖²_ω‖Y‖²_ω ≥ ‖[X,Y]‖²_ω` holds with
//! `c = (λ₁+λ₂)/(λ₁λ₂)` for arbitrary X and normal Y, and the constant is
//! achieved: with ω-eigenvectors v₁, v₂ for λ₁, λ₂, the pair
//!
//! ```text
//! X = |v₁⟩⟨v₂|,   Y = (1/λ₁)|v₁⟩⟨v₁| − (1/λ₂)|v₂⟩⟨v₂|
//! ```
//!
//! satisfies `[X,Y] = −(1/λ₁ + 1/λ₂)X` and meets the constant exactly.
//! [`maximize_ratio`] starts one ascent from that pair and the rest from
//! random matrices, so its certificate reaches the constant on every weight
//! while double-checking that no start ever exceeds it.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matcore::{commutator, weighted_norm_sq, ComplexMatrix, HermitianMatrix};
use crate::relations::bound_report;
use crate::states::{DensityMatrix, PositiveMatrix};
use crate::stream::SeededStream;

/// Ascent stops once an iteration improves the ratio by less than this,
/// relative to the current value.
pub const STOP_TOL: f64 = 1e-12;

/// `‖[X,Y]‖²_ω / (‖X‖²_ω‖Y‖²_ω)`; the quantity bounded by
/// `(λ₁+λ₂)/(λ₁λ₂)` whenever Y is normal.
pub fn ratio(x: &ComplexMatrix, y: &ComplexMatrix, w: &PositiveMatrix) -> Result<f64> {
    let nx = weighted_norm_sq(x, w)?;
    let ny = weighted_norm_sq(y, w)?;
    let denom = nx * ny;
    if denom <= f64::MIN_POSITIVE {
        return Err(Error::ZeroNorm);
    }
    Ok(weighted_norm_sq(&commutator(x, y)?, w)? / denom)
}

/// Outcome of [`maximize_ratio`]: the theoretical constant, the best ratio
/// any start reached, and the pair that reached it.
#[derive(Debug, Clone)]
pub struct TightnessCertificate {
    pub c_target: f64,
    pub best_ratio: f64,
    pub x_best: ComplexMatrix,
    pub y_best: ComplexMatrix,
    pub restarts_used: usize,
    pub iterations_used: usize,
}

struct Ascent<'a> {
    w: &'a PositiveMatrix,
    w_inv: ComplexMatrix,
}

impl Ascent<'_> {
    /// Adjoint of `X ↦ [X, Y]` under `⟨A,B⟩_ω = Tr(ωA†B)`:
    /// `V ↦ (VωY† − Y†Vω)ω⁻¹`.
    fn ad_adjoint(&self, v: &ComplexMatrix, y: &ComplexMatrix) -> ComplexMatrix {
        let vw = v.matmul(self.w.matrix());
        let ya = y.adjoint();
        (&vw.matmul(&ya) - &ya.matmul(&vw)).matmul(&self.w_inv)
    }

    /// ⟨·,·⟩_ω-orthogonal projection onto Hermitian matrices: the H solving
    /// `Hω + ωH = Vω + ωV†`, diagonalized in ω's eigenbasis where it reads
    /// `H̃_ij = S̃_ij/(λ_i + λ_j)`.
    fn project_hermitian(&self, v: &ComplexMatrix) -> ComplexMatrix {
        let wm = self.w.matrix();
        let u = self.w.spectrum().vectors();
        let lambdas = self.w.spectrum().values();
        let s = &v.matmul(wm) + &wm.matmul(&v.adjoint());
        let s_tilde = u.adjoint().matmul(&s).matmul(u);
        let d = v.dim();
        let h_tilde = ComplexMatrix::from_fn(d, |i, j| {
            s_tilde.get(i, j) / (lambdas[i] + lambdas[j])
        });
        let h = u.matmul(&h_tilde).matmul(&u.adjoint());
        // Symmetrize away the rounding drift of the basis changes.
        (&h + &h.adjoint()).scale(Complex64::new(0.5, 0.0))
    }

    fn normalize(&self, v: &ComplexMatrix) -> Option<ComplexMatrix> {
        let n = weighted_norm_sq(v, self.w).ok()?;
        if n <= 1e-300 {
            return None;
        }
        Some(v.scale(Complex64::new(1.0 / n.sqrt(), 0.0)))
    }

    /// Alternating power iteration: each half-step applies a positive
    /// semidefinite map and renormalizes, so the ratio never decreases.
    fn run(
        &self,
        x0: &ComplexMatrix,
        y0: &ComplexMatrix,
        max_iters: usize,
    ) -> Option<(f64, ComplexMatrix, ComplexMatrix, usize)> {
        let mut x = self.normalize(x0)?;
        let mut y = self.normalize(&self.project_hermitian(y0))?;
        let mut current = ratio(&x, &y, self.w).ok()?;
        let mut iters = 0;
        for it in 1..=max_iters {
            iters = it;
            let adx = commutator(&x, &y).ok()?;
            let Some(xn) = self.normalize(&self.ad_adjoint(&adx, &y)) else {
                break;
            };
            x = xn;
            let ady = commutator(&y, &x).ok()?;
            let Some(yn) = self.normalize(&self.project_hermitian(&self.ad_adjoint(&ady, &x)))
            else {
                break;
            };
            y = yn;
            let next = ratio(&x, &y, self.w).ok()?;
            let improved = next > current + STOP_TOL * (1.0 + current.abs());
            if next > current {
                current = next;
            }
            if !improved {
                break;
            }
        }
        Some((current, x, y, iters))
    }
}

fn outer(u: &[Complex64], v: &[Complex64]) -> ComplexMatrix {
    ComplexMatrix::from_fn(u.len(), |i, j| u[i] * v[j].conj())
}

/// Runs `restarts` ascents of the commutator-norm ratio over pairs
/// `(X, Y Hermitian)`: the first from the pair that provably meets the
/// constant, the rest from random matrices. The best ratio is tracked with
/// strict improvement, so ties resolve to the earliest start and the result
/// is independent of any evaluation order.
pub fn maximize_ratio(
    w: &PositiveMatrix,
    restarts: usize,
    max_iters: usize,
    rng: &mut SeededStream,
) -> Result<TightnessCertificate> {
    let d = w.dim();
    if d < 2 {
        return Err(Error::Domain(format!(
            "tightness search needs dimension at least 2, got {d}"
        )));
    }
    let spectrum = w.spectrum();
    let lambda1 = spectrum.value(0);
    let lambda2 = spectrum.value(1);
    let c_target = (lambda1 + lambda2) / (lambda1 * lambda2);

    let ascent = Ascent {
        w,
        w_inv: spectrum.map_values(|l| 1.0 / l),
    };

    let starts = restarts.max(1);
    let mut best: Option<(f64, ComplexMatrix, ComplexMatrix, usize)> = None;
    for start in 0..starts {
        let (x0, y0) = if start == 0 {
            let v1 = spectrum.vector(0);
            let v2 = spectrum.vector(1);
            let x0 = outer(&v1, &v2);
            let y0 = &outer(&v1, &v1).scale(Complex64::new(1.0 / lambda1, 0.0))
                - &outer(&v2, &v2).scale(Complex64::new(1.0 / lambda2, 0.0));
            (x0, y0)
        } else {
            let x0 = ComplexMatrix::from_fn(d, |_, _| rng.complex_normal());
            let g = ComplexMatrix::from_fn(d, |_, _| rng.complex_normal());
            let y0 = (&g + &g.adjoint()).scale(Complex64::new(0.5, 0.0));
            (x0, y0)
        };
        let Some(candidate) = ascent.run(&x0, &y0, max_iters) else {
            continue;
        };
        let better = match &best {
            None => true,
            Some((r, ..)) => candidate.0 > *r,
        };
        if better {
            best = Some(candidate);
        }
    }

    let (best_ratio, x_best, y_best, iterations_used) =
        best.ok_or_else(|| Error::Numerical("every ascent start degenerated".into()))?;
    Ok(TightnessCertificate {
        c_target,
        best_ratio,
        x_best,
        y_best,
        restarts_used: starts,
        iterations_used,
    })
}

/// Outcome of [`minimize_eq5_slack`]: the smallest slack found and the
/// triple that produced it.
#[derive(Debug, Clone)]
pub struct SlackSearch {
    pub slack_min: f64,
    pub a: HermitianMatrix,
    pub b: HermitianMatrix,
    pub rho: DensityMatrix,
}

fn decode_hermitian(params: &[f64], dim: usize) -> HermitianMatrix {
    let mut m = ComplexMatrix::zeros(dim);
    let mut idx = 0;
    for i in 0..dim {
        m.set(i, i, Complex64::new(params[idx], 0.0));
        idx += 1;
    }
    for i in 0..dim {
        for j in i + 1..dim {
            let z = Complex64::new(params[idx], params[idx + 1]);
            idx += 2;
            m.set(i, j, z);
            m.set(j, i, z.conj());
        }
    }
    HermitianMatrix::new(m).expect("constructed with exactly conjugate entries")
}

fn decode_density(params: &[f64], dim: usize) -> Option<DensityMatrix> {
    let mut l = ComplexMatrix::zeros(dim);
    let mut idx = 0;
    for i in 0..dim {
        l.set(i, i, Complex64::new(params[idx], 0.0));
        idx += 1;
    }
    for i in 0..dim {
        for j in 0..i {
            l.set(i, j, Complex64::new(params[idx], params[idx + 1]));
            idx += 2;
        }
    }
    let gram = l.matmul(&l.adjoint());
    let trace = gram.trace().re;
    if trace <= 1e-12 {
        return None;
    }
    let h = HermitianMatrix::new(gram.scale(Complex64::new(1.0 / trace, 0.0))).ok()?;
    DensityMatrix::new(h).ok()
}

fn eval_slack(params: &[f64], dim: usize, rho_fixed: Option<&DensityMatrix>) -> Option<f64> {
    let n = dim * dim;
    let a = decode_hermitian(&params[..n], dim);
    let b = decode_hermitian(&params[n..2 * n], dim);
    let slack = match rho_fixed {
        Some(rho) => bound_report(&a, &b, rho).ok()?.slack,
        None => {
            let rho = decode_density(&params[2 * n..], dim)?;
            bound_report(&a, &b, &rho).ok()?.slack
        }
    };
    Some(slack)
}

/// Adaptive (1+1) evolution search for the most negative slack of the
/// variance-product bound in dimension `dim`, over all triples `(A, B, ρ)`
/// or — when `rho_fixed` is given — over observable pairs at that state.
/// A slack minimum at rounding level is evidence the bound holds there;
/// a structurally negative minimum would be a counterexample.
pub fn minimize_eq5_slack(
    dim: usize,
    rho_fixed: Option<&DensityMatrix>,
    restarts: usize,
    max_iters: usize,
    rng: &mut SeededStream,
) -> Result<SlackSearch> {
    if dim < 2 {
        return Err(Error::Domain(format!(
            "slack search needs dimension at least 2, got {dim}"
        )));
    }
    if let Some(rho) = rho_fixed {
        if rho.dim() != dim {
            return Err(Error::Dimension(rho.dim(), dim));
        }
    }
    let n = if rho_fixed.is_some() { 2 } else { 3 } * dim * dim;
    let mut best: Option<(f64, Vec<f64>)> = None;
    for _ in 0..restarts.max(1) {
        let (mut params, mut current) = loop {
            let candidate: Vec<f64> = (0..n).map(|_| rng.normal()).collect();
            if let Some(slack) = eval_slack(&candidate, dim, rho_fixed) {
                break (candidate, slack);
            }
        };
        let mut sigma = 0.5;
        for _ in 0..max_iters {
            let proposal: Vec<f64> = params.iter().map(|p| p + sigma * rng.normal()).collect();
            match eval_slack(&proposal, dim, rho_fixed) {
                Some(slack) if slack < current => {
                    params = proposal;
                    current = slack;
                    sigma *= 1.25;
                }
                _ => sigma *= 0.92,
            }
            if sigma < 1e-12 {
                break;
            }
        }
        let better = match &best {
            None => true,
            Some((s, _)) => current < *s,
        };
        if better {
            best = Some((current, params));
        }
    }

    let (slack_min, params) = best.expect("at least one restart ran");
    let m = dim * dim;
    let a = decode_hermitian(&params[..m], dim);
    let b = decode_hermitian(&params[m..2 * m], dim);
    let rho = match rho_fixed {
        Some(rho) => rho.clone(),
        None => decode_density(&params[2 * m..], dim).expect("winning parameters decoded before"),
    };
    Ok(SlackSearch {
        slack_min,
        a,
        b,
        rho,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::HermitianMatrix;
    use crate::qubit::{pauli_x, pauli_y};
    use crate::states::{sample_observable_gue, sample_positive_hs};
    use approx::assert_abs_diff_eq;

    fn identity_weight(d: usize) -> PositiveMatrix {
        let scaled = ComplexMatrix::identity(d).scale(Complex64::new(1.0 / d as f64, 0.0));
        PositiveMatrix::new(HermitianMatrix::new(scaled).unwrap()).unwrap()
    }

    fn hermitian_defect(m: &ComplexMatrix) -> f64 {
        (m - &m.adjoint()).max_abs()
    }

    #[test]
    fn ratio_examples() {
        let w = identity_weight(2);
        assert_abs_diff_eq!(
            ratio(pauli_x().matrix(), pauli_y().matrix(), &w).unwrap(),
            4.0,
            epsilon = 1e-13
        );

        let da = ComplexMatrix::from_diag(&[1.0, 2.0]);
        let db = ComplexMatrix::from_diag(&[-3.0, 5.0]);
        assert_eq!(ratio(&da, &db, &w).unwrap(), 0.0);
        assert_eq!(
            ratio(pauli_x().matrix(), pauli_x().matrix(), &w).unwrap(),
            0.0
        );

        let zero = ComplexMatrix::zeros(2);
        assert!(matches!(
            ratio(&zero, pauli_x().matrix(), &w),
            Err(Error::ZeroNorm)
        ));
    }

    #[test]
    fn ratio_is_scale_invariant() {
        let mut rng = SeededStream::new(60);
        for _ in 0..50 {
            let w = sample_positive_hs(3, &mut rng).unwrap();
            let x = ComplexMatrix::from_fn(3, |_, _| rng.complex_normal());
            let y = ComplexMatrix::from_fn(3, |_, _| rng.complex_normal());
            let base = ratio(&x, &y, &w).unwrap();
            let alpha = Complex64::new(rng.normal(), rng.normal());
            let beta = Complex64::new(2.5 * rng.normal(), 0.1);
            if alpha.norm() < 1e-3 || beta.norm() < 1e-3 {
                continue;
            }
            let scaled = ratio(&x.scale(alpha), &y.scale(beta), &w).unwrap();
            assert_abs_diff_eq!(scaled, base, epsilon = 1e-12 * (1.0 + base));
        }
    }

    #[test]
    fn maximize_on_qubit_identity_weight() {
        let w = identity_weight(2);
        let mut rng = SeededStream::new(61);
        let cert = maximize_ratio(&w, 4, 200, &mut rng).unwrap();
        assert_abs_diff_eq!(cert.c_target, 4.0, epsilon = 1e-12);
        assert!((cert.best_ratio - 4.0).abs() <= 1e-6 * 4.0);
        assert!(cert.best_ratio <= cert.c_target * (1.0 + 1e-9));
        assert_eq!(cert.restarts_used, 4);
        assert!(cert.iterations_used >= 1);
        let scale = 1.0 + cert.y_best.max_abs();
        assert!(hermitian_defect(&cert.y_best) <= 1e-8 * scale);
    }

    #[test]
    fn maximize_reaches_twice_dimension_on_identity_weight() {
        let mut rng = SeededStream::new(62);
        for d in 2..=4 {
            let w = identity_weight(d);
            let cert = maximize_ratio(&w, 4, 300, &mut rng).unwrap();
            let expected = 2.0 * d as f64;
            assert!(
                (cert.best_ratio - expected).abs() <= 1e-3 * expected,
                "d = {d}: {}",
                cert.best_ratio
            );
            assert!(cert.best_ratio <= cert.c_target * (1.0 + 1e-9));
        }
    }

    #[test]
    fn maximize_brackets_constant_on_random_weights() {
        let mut rng = SeededStream::new(63);
        for _ in 0..5 {
            let w = sample_positive_hs(3, &mut rng).unwrap();
            let cert = maximize_ratio(&w, 8, 300, &mut rng).unwrap();
            assert!(
                cert.best_ratio >= 0.999 * cert.c_target,
                "reached only {} of {}",
                cert.best_ratio,
                cert.c_target
            );
            assert!(cert.best_ratio <= cert.c_target * (1.0 + 1e-9));
        }
    }

    #[test]
    fn maximize_is_reproducible() {
        let run = || {
            let mut rng = SeededStream::derive(64, &[9]);
            let w = sample_positive_hs(3, &mut rng).unwrap();
            maximize_ratio(&w, 6, 200, &mut rng).unwrap()
        };
        let a = run();
        let b = run();
        assert_eq!(a.best_ratio.to_bits(), b.best_ratio.to_bits());
        assert_eq!(a.iterations_used, b.iterations_used);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(a.x_best.get(i, j), b.x_best.get(i, j));
            }
        }
    }

    #[test]
    fn random_pairs_never_exceed_constant() {
        let mut rng = SeededStream::new(65);
        for d in 2..=4 {
            let w = sample_positive_hs(d, &mut rng).unwrap();
            let c_target =
                (w.spectrum().value(0) + w.spectrum().value(1))
                    / (w.spectrum().value(0) * w.spectrum().value(1));
            for _ in 0..200 {
                let x = ComplexMatrix::from_fn(d, |_, _| rng.complex_normal());
                let y = sample_observable_gue(d, &mut rng);
                let r = ratio(&x, y.matrix(), &w).unwrap();
                assert!(r <= c_target * (1.0 + 1e-9), "d = {d}: {r} vs {c_target}");
            }
        }
    }

    #[test]
    fn slack_search_on_qubits_finds_rounding_level_minimum() {
        let mut rng = SeededStream::new(66);
        let search = minimize_eq5_slack(2, None, 2, 1500, &mut rng).unwrap();
        let report = bound_report(&search.a, &search.b, &search.rho).unwrap();
        let scale = 1.0 + report.product.abs();
        assert!(
            search.slack_min.abs() <= 1e-9 * scale,
            "slack {:.3e}",
            search.slack_min
        );
        assert_eq!(report.slack, search.slack_min);
    }

    #[test]
    fn slack_search_stays_nonnegative_in_dimension_three() {
        let mut rng = SeededStream::new(67);
        let search = minimize_eq5_slack(3, None, 2, 1500, &mut rng).unwrap();
        let report = bound_report(&search.a, &search.b, &search.rho).unwrap();
        let scale = 1.0 + report.product.abs();
        assert!(
            search.slack_min >= -1e-9 * scale,
            "slack {:.3e}",
            search.slack_min
        );
    }

    #[test]
    fn slack_search_with_fixed_state() {
        let mut rng = SeededStream::new(70);
        let rho = DensityMatrix::maximally_mixed(3);

        // Equal observables are a degenerate witness: the covariance term
        // alone reproduces the product, so the slack is exactly zero.
        let a = sample_observable_gue(3, &mut rng);
        let witness = bound_report(&a, &a, &rho).unwrap();
        assert!(witness.slack.abs() <= 1e-12 * (1.0 + witness.product));

        let search = minimize_eq5_slack(3, Some(&rho), 2, 1500, &mut rng).unwrap();
        let scale = 1.0 + bound_report(&search.a, &search.b, &search.rho)
            .unwrap()
            .product
            .abs();
        assert!(search.slack_min >= -1e-9 * scale);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(search.rho.matrix().get(i, j), rho.matrix().get(i, j));
            }
        }

        let wrong_dim = minimize_eq5_slack(2, Some(&rho), 1, 10, &mut rng);
        assert!(matches!(wrong_dim, Err(Error::Dimension(3, 2))));
    }

    #[test]
    fn slack_search_is_reproducible() {
        let run = || {
            let mut rng = SeededStream::derive(68, &[3]);
            minimize_eq5_slack(2, None, 1, 400, &mut rng)
                .unwrap()
                .slack_min
        };
        assert_eq!(run().to_bits(), run().to_bits());
    }

    #[test]
    fn rejects_dimension_one() {
        let mut rng = SeededStream::new(69);
        let w = PositiveMatrix::new(HermitianMatrix::from_diag(&[1.0])).unwrap();
        assert!(matches!(
            maximize_ratio(&w, 1, 10, &mut rng),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            minimize_eq5_slack(1, None, 1, 10, &mut rng),
            Err(Error::Domain(_))
        ));
    }
}
