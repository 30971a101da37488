//! Randomized verification campaigns: independent (ρ, A, B) triples on
//! counter-based streams, so results are identical for any worker count.

use rayon::prelude::*;
use serde::Serialize;

use qbound_core::relations::SLACK_TOL;
use qbound_core::{bound_report, sample_density_hs, sample_observable_gue, SeededStream};

use crate::Failure;

/// Relative residual above which a qubit triple no longer counts as sitting
/// on the exact-equality manifold.
pub const QUBIT_RESIDUAL_TOL: f64 = 1e-10;

const CHUNK: usize = 512;

/// Outcome of one campaign.  `min_slack` is the most negative slack seen;
/// `max_rel_residual` is the largest |slack|/(1 + product), which at
/// dimension 2 measures the distance from exact equality.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifySummary {
    pub dim: usize,
    pub samples: usize,
    pub seed: u64,
    pub violations: usize,
    pub min_slack: f64,
    pub max_rel_residual: f64,
}

struct Partial {
    violations: usize,
    min_slack: f64,
    max_rel_residual: f64,
}

/// Draws `samples` triples at `dim` — each from the stream keyed by
/// (seed, dim, sample index) — and counts slacks below −1e−9·(1 + product).
pub fn run_verify(dim: usize, samples: usize, seed: u64) -> Result<VerifySummary, Failure> {
    if dim < 2 {
        return Err(Failure::Input(format!(
            "dim must be at least 2, got {dim}"
        )));
    }
    if samples == 0 {
        return Err(Failure::Input("samples must be at least 1".into()));
    }

    let n_chunks = samples.div_ceil(CHUNK);
    let partials: Vec<Partial> = (0..n_chunks)
        .into_par_iter()
        .map(|chunk| -> Result<Partial, Failure> {
            let mut p = Partial {
                violations: 0,
                min_slack: f64::INFINITY,
                max_rel_residual: 0.0,
            };
            for i in chunk * CHUNK..((chunk + 1) * CHUNK).min(samples) {
                let mut rng = SeededStream::derive(seed, &[dim as u64, i as u64]);
                let rho = sample_density_hs(dim, &mut rng)?;
                let a = sample_observable_gue(dim, &mut rng);
                let b = sample_observable_gue(dim, &mut rng);
                let report = bound_report(&a, &b, &rho)?;
                if report.slack < -SLACK_TOL * (1.0 + report.product) {
                    p.violations += 1;
                }
                p.min_slack = p.min_slack.min(report.slack);
                p.max_rel_residual = p
                    .max_rel_residual
                    .max(report.slack.abs() / (1.0 + report.product));
            }
            Ok(p)
        })
        .collect::<Result<Vec<_>, Failure>>()?;

    let mut summary = VerifySummary {
        dim,
        samples,
        seed,
        violations: 0,
        min_slack: f64::INFINITY,
        max_rel_residual: 0.0,
    };
    for p in partials {
        summary.violations += p.violations;
        summary.min_slack = summary.min_slack.min(p.min_slack);
        summary.max_rel_residual = summary.max_rel_residual.max(p.max_rel_residual);
    }
    Ok(summary)
}
