//! Matrix files on disk: a JSON object `{"dim", "re", "im"}` holding
//! row-major real and imaginary grids, and atomic whole-file writes.

use std::fs;
use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use qbound_core::{ComplexMatrix, DensityMatrix, HermitianMatrix, PositiveMatrix};

use crate::Failure;

/// On-disk matrix layout. Both grids must be `dim × dim`; JSON number
/// parsing round-trips every finite double exactly.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixFile {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl MatrixFile {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        let d = m.dim();
        let grid = |pick: fn(Complex64) -> f64| -> Vec<Vec<f64>> {
            (0..d)
                .map(|i| (0..d).map(|j| pick(m.get(i, j))).collect())
                .collect()
        };
        MatrixFile {
            dim: d,
            re: grid(|z| z.re),
            im: grid(|z| z.im),
        }
    }

    /// Checks grid shape and entry finiteness before building the matrix.
    pub fn to_matrix(&self) -> Result<ComplexMatrix, String> {
        if self.dim == 0 {
            return Err("dim must be at least 1".into());
        }
        for (name, grid) in [("re", &self.re), ("im", &self.im)] {
            if grid.len() != self.dim {
                return Err(format!(
                    "{name} grid has {} rows, expected {}",
                    grid.len(),
                    self.dim
                ));
            }
            for (i, row) in grid.iter().enumerate() {
                if row.len() != self.dim {
                    return Err(format!(
                        "{name} grid row {i} has {} entries, expected {}",
                        row.len(),
                        self.dim
                    ));
                }
                if let Some(j) = row.iter().position(|x| !x.is_finite()) {
                    return Err(format!("{name}[{i}][{j}] is not finite"));
                }
            }
        }
        Ok(ComplexMatrix::from_fn(self.dim, |i, j| {
            Complex64::new(self.re[i][j], self.im[i][j])
        }))
    }
}

/// Reads and shape-checks a matrix file; error messages carry the path and,
/// for JSON syntax problems, the line and column.
pub fn read_matrix(path: &Path) -> Result<ComplexMatrix, Failure> {
    let at = |msg: String| Failure::Input(format!("{}: {msg}", path.display()));
    let text = fs::read_to_string(path).map_err(|e| at(e.to_string()))?;
    let file: MatrixFile = serde_json::from_str(&text).map_err(|e| at(e.to_string()))?;
    file.to_matrix().map_err(at)
}

fn hermitian_at(path: &Path, m: ComplexMatrix) -> Result<HermitianMatrix, Failure> {
    HermitianMatrix::new(m).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

/// Loads a matrix file as a quantum state, enforcing Hermiticity, unit
/// trace, and positive semidefiniteness.
pub fn load_density(path: &Path) -> Result<DensityMatrix, Failure> {
    let h = hermitian_at(path, read_matrix(path)?)?;
    DensityMatrix::new(h).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

/// Loads a matrix file as an observable, enforcing Hermiticity.
pub fn load_observable(path: &Path) -> Result<HermitianMatrix, Failure> {
    hermitian_at(path, read_matrix(path)?)
}

/// Loads a matrix file as a strictly positive weight.
pub fn load_positive(path: &Path) -> Result<PositiveMatrix, Failure> {
    let h = hermitian_at(path, read_matrix(path)?)?;
    PositiveMatrix::new(h).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

/// Writes through a sibling temp file and renames into place, so the
/// destination never holds partial output.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    let at = |msg: String| Failure::Input(format!("{}: {msg}", path.display()));
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| at(e.to_string()))?;
    tmp.write_all(bytes).map_err(|e| at(e.to_string()))?;
    tmp.persist(path).map_err(|e| at(e.to_string()))?;
    Ok(())
}

/// Serializes a matrix to the JSON file layout and writes it atomically.
pub fn write_matrix(path: &Path, m: &ComplexMatrix) -> Result<(), Failure> {
    let file = MatrixFile::from_matrix(m);
    let mut text = serde_json::to_string_pretty(&file)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    text.push('\n');
    write_atomic(path, text.as_bytes())
}
