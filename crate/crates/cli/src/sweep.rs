//! Fixed-purity Monte Carlo averages of every bound term over the qubit
//! Bloch measure — unit-vector observables, uniform state direction —
//! together with the analytic curves those averages estimate.
//!
//! Samples are keyed by (seed, grid index, sample index) and partial sums
//! are merged in index order, so the emitted rows are byte-identical for
//! any worker count.

use rayon::prelude::*;
use serde::Serialize;

use qbound_core::qubit::{cross, dot};
use qbound_core::{sample_bloch_fixed_purity, sample_qubit_observable_unit_bloch, SeededStream};

use crate::Failure;

/// Grid coordinates live on this lattice so that endpoints like 1.0 are hit
/// exactly; sub-nanounit digits in grid specs are rounded away.
const LATTICE: f64 = 1e9;

const CHUNK: usize = 4096;

/// One grid point; field order is the CSV column order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub purity: f64,
    pub n_samples: usize,
    pub avg_robertson: f64,
    pub stderr_robertson: f64,
    pub analytic_robertson: f64,
    pub avg_schrodinger_cov: f64,
    pub stderr_schrodinger_cov: f64,
    pub analytic_schrodinger_cov: f64,
    pub avg_new_tradeoff: f64,
    pub stderr_new_tradeoff: f64,
    pub analytic_new_tradeoff: f64,
    pub avg_product: f64,
    pub stderr_product: f64,
    pub analytic_product: f64,
}

/// Mean Robertson term `(2/9)(2P − 1)`.
pub fn analytic_robertson(p: f64) -> f64 {
    2.0 * (2.0 * p - 1.0) / 9.0
}

/// Mean squared covariance `(2/9)(2P² − 4P + 3)`.
pub fn analytic_schrodinger_cov(p: f64) -> f64 {
    2.0 * (2.0 * p * p - 4.0 * p + 3.0) / 9.0
}

/// Mean trade-off term `(4/3)(1 − P)`.
pub fn analytic_new_tradeoff(p: f64) -> f64 {
    4.0 * (1.0 - p) / 3.0
}

/// Mean variance product `(4/9)(2 − P)²`, the sum of the other three means.
pub fn analytic_product(p: f64) -> f64 {
    let t = 2.0 - p;
    4.0 * t * t / 9.0
}

/// Parses `MIN:MAX:STEP` into an inclusive purity grid.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>, Failure> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [min, max, step] = parts.as_slice() else {
        return Err(Failure::Input(format!(
            "grid must be MIN:MAX:STEP, got {spec:?}"
        )));
    };
    let parse = |name: &str, text: &str| -> Result<f64, Failure> {
        text.trim()
            .parse::<f64>()
            .map_err(|_| Failure::Input(format!("grid {name} is not a number: {text:?}")))
    };
    grid_points(
        parse("min", min)?,
        parse("max", max)?,
        parse("step", step)?,
    )
}

/// Lattice grid `{min, min+step, …}` up to and including `max` when the step
/// divides the span. Purities must satisfy `1/2 ≤ min ≤ max ≤ 1`.
pub fn grid_points(min: f64, max: f64, step: f64) -> Result<Vec<f64>, Failure> {
    if !(min.is_finite() && max.is_finite() && step.is_finite()) {
        return Err(Failure::Input("grid bounds must be finite".into()));
    }
    if !(0.5..=1.0).contains(&min) || !(0.5..=1.0).contains(&max) || min > max {
        return Err(Failure::Input(format!(
            "purity grid must satisfy 0.5 ≤ min ≤ max ≤ 1, got {min}:{max}"
        )));
    }
    let to_lattice = |x: f64| (x * LATTICE).round() as i64;
    let (lo, hi) = (to_lattice(min), to_lattice(max));
    if lo == hi {
        return Ok(vec![lo as f64 / LATTICE]);
    }
    let st = to_lattice(step);
    if st <= 0 {
        return Err(Failure::Input(format!(
            "grid step must be at least {:.0e}, got {step}",
            1.0 / LATTICE
        )));
    }
    Ok((0..=(hi - lo) / st)
        .map(|k| (lo + k * st) as f64 / LATTICE)
        .collect())
}

/// Robertson, squared covariance, trade-off, and variance product for one
/// draw of unit-vector observables and a radius-√(2p−1) state.
///
/// The trade-off coefficient is written `2(1 − p)` rather than `1 − |c|²` so
/// the term is exactly zero at p = 1 instead of carrying the rounding dust
/// of the sampled direction's norm.
fn sample_terms(p: f64, rng: &mut SeededStream) -> [f64; 4] {
    let a = sample_qubit_observable_unit_bloch(rng).vector();
    let b = sample_qubit_observable_unit_bloch(rng).vector();
    let c = sample_bloch_fixed_purity(p, rng)
        .expect("grid purities are validated")
        .vector();
    let ab = cross(a, b);
    let ac = dot(a, c);
    let bc = dot(b, c);
    let cov = dot(a, b) - ac * bc;
    [
        dot(ab, c) * dot(ab, c),
        cov * cov,
        2.0 * (1.0 - p) * dot(ab, ab),
        (1.0 - ac * ac) * (1.0 - bc * bc),
    ]
}

#[derive(Clone, Copy)]
struct Moments {
    sum: [f64; 4],
    sum_sq: [f64; 4],
}

impl Moments {
    fn zero() -> Self {
        Moments {
            sum: [0.0; 4],
            sum_sq: [0.0; 4],
        }
    }

    fn absorb(&mut self, terms: [f64; 4]) {
        for ((s, q), t) in self.sum.iter_mut().zip(&mut self.sum_sq).zip(terms) {
            *s += t;
            *q += t * t;
        }
    }

    fn merge(&mut self, other: &Moments) {
        for (s, o) in self.sum.iter_mut().zip(other.sum) {
            *s += o;
        }
        for (q, o) in self.sum_sq.iter_mut().zip(other.sum_sq) {
            *q += o;
        }
    }
}

fn row_at(grid_index: usize, p: f64, samples: usize, seed: u64) -> SweepRow {
    let n_chunks = samples.div_ceil(CHUNK);
    let partials: Vec<Moments> = (0..n_chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut m = Moments::zero();
            for i in chunk * CHUNK..((chunk + 1) * CHUNK).min(samples) {
                let mut rng = SeededStream::derive(seed, &[grid_index as u64, i as u64]);
                m.absorb(sample_terms(p, &mut rng));
            }
            m
        })
        .collect();
    let mut total = Moments::zero();
    for m in &partials {
        total.merge(m);
    }

    let n = samples as f64;
    let mut avg = [0.0; 4];
    let mut se = [0.0; 4];
    for k in 0..4 {
        avg[k] = total.sum[k] / n;
        let var = ((total.sum_sq[k] - n * avg[k] * avg[k]) / (n - 1.0)).max(0.0);
        se[k] = (var / n).sqrt();
    }

    SweepRow {
        purity: p,
        n_samples: samples,
        avg_robertson: avg[0],
        stderr_robertson: se[0],
        analytic_robertson: analytic_robertson(p),
        avg_schrodinger_cov: avg[1],
        stderr_schrodinger_cov: se[1],
        analytic_schrodinger_cov: analytic_schrodinger_cov(p),
        avg_new_tradeoff: avg[2],
        stderr_new_tradeoff: se[2],
        analytic_new_tradeoff: analytic_new_tradeoff(p),
        avg_product: avg[3],
        stderr_product: se[3],
        analytic_product: analytic_product(p),
    }
}

/// One row per grid point, `samples` draws each.
pub fn run_sweep(grid: &[f64], samples: usize, seed: u64) -> Result<Vec<SweepRow>, Failure> {
    if grid.is_empty() {
        return Err(Failure::Input("purity grid is empty".into()));
    }
    if samples < 2 {
        return Err(Failure::Input(
            "need at least 2 samples per grid point for standard errors".into(),
        ));
    }
    Ok(grid
        .iter()
        .enumerate()
        .map(|(g, &p)| row_at(g, p, samples, seed))
        .collect())
}

/// Serializes rows under the fixed header; identical rows give identical
/// bytes.
pub fn csv_bytes(rows: &[SweepRow]) -> Result<Vec<u8>, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row)
            .map_err(|e| Failure::Input(format!("csv: {e}")))?;
    }
    w.into_inner()
        .map_err(|e| Failure::Input(format!("csv: {e}")))
}

/// Sign-change bisection to interval width 1e−13.
fn bisect(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> f64 {
    let rising = f(lo) < 0.0;
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if (f(mid) < 0.0) == rising {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-13 {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Purity where the mean trade-off term crosses the mean Robertson term:
/// 7/8.
pub fn robertson_crossing() -> f64 {
    bisect(0.5, 1.0, |p| {
        analytic_new_tradeoff(p) - analytic_robertson(p)
    })
}

/// Purity where the mean trade-off term crosses Robertson plus squared
/// covariance: √3 − 1.
pub fn schrodinger_crossing() -> f64 {
    bisect(0.5, 1.0, |p| {
        analytic_new_tradeoff(p) - analytic_robertson(p) - analytic_schrodinger_cov(p)
    })
}
