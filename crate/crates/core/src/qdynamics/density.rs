use nalgebra::{DMatrix, SymmetricEigen};

use super::basis::Subsystem;
use super::state::BipartiteState;
use crate::correspondence::ProbabilityVector;
use crate::error::{Error, Result};
use crate::par;
use crate::C64;

/// Hermitian, unit-trace operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    matrix: DMatrix<C64>,
}

impl DensityOperator {
    /// Wraps `matrix` after checking hermiticity (1e-12) and trace (1e-10).
    pub fn new(matrix: DMatrix<C64>) -> Result<Self> {
        let rho = DensityOperator { matrix };
        rho.check_shape_and_trace()?;
        Ok(rho)
    }

    pub(crate) fn from_matrix_unchecked(matrix: DMatrix<C64>) -> Self {
        DensityOperator { matrix }
    }

    /// `|psi><psi|` for a normalised joint state, flattened row-major
    /// (heavy index major). Quadratic in the joint dimension: small bases only.
    pub fn pure(state: &BipartiteState) -> Self {
        let v = nalgebra::DVector::from_column_slice(state.amplitudes());
        DensityOperator {
            matrix: &v * v.adjoint(),
        }
    }

    pub fn diagonal(p: &ProbabilityVector) -> Self {
        let d = p.len();
        DensityOperator {
            matrix: DMatrix::from_fn(d, d, |i, j| {
                if i == j {
                    C64::new(p.values()[i], 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            }),
        }
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace(&self) -> f64 {
        self.matrix.diagonal().iter().map(|c| c.re).sum()
    }

    /// `Tr rho^2`, which for a Hermitian matrix is the squared Frobenius norm.
    pub fn purity(&self) -> f64 {
        self.matrix.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Largest `|rho_ij|` with `i != j`.
    pub fn max_off_diagonal(&self) -> f64 {
        let d = self.dim();
        let mut m: f64 = 0.0;
        for j in 0..d {
            for i in 0..d {
                if i != j {
                    m = m.max(self.matrix[(i, j)].norm());
                }
            }
        }
        m
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        SymmetricEigen::new(self.matrix.clone())
            .eigenvalues
            .iter()
            .copied()
            .collect()
    }

    /// Full invariant check: hermitian within `herm_tol`, unit trace within
    /// `trace_tol`, no eigenvalue below `-eig_tol`.
    pub fn validate(&self, herm_tol: f64, trace_tol: f64, eig_tol: f64) -> Result<()> {
        self.check_hermitian(herm_tol)?;
        if (self.trace() - 1.0).abs() > trace_tol {
            return Err(Error::Numerical(format!("trace {} != 1", self.trace())));
        }
        if let Some(min) = self.eigenvalues().into_iter().reduce(f64::min) {
            if min < -eig_tol {
                return Err(Error::Numerical(format!("negative eigenvalue {min}")));
            }
        }
        Ok(())
    }

    fn check_shape_and_trace(&self) -> Result<()> {
        if !self.matrix.is_square() {
            return Err(Error::usage("density operator must be square"));
        }
        self.check_hermitian(1e-12)?;
        if (self.trace() - 1.0).abs() > 1e-10 {
            return Err(Error::usage(format!("trace {} != 1", self.trace())));
        }
        Ok(())
    }

    fn check_hermitian(&self, tol: f64) -> Result<()> {
        let d = self.dim();
        for j in 0..d {
            for i in 0..=j {
                let e = (self.matrix[(i, j)] - self.matrix[(j, i)].conj()).norm();
                if e > tol {
                    return Err(Error::Numerical(format!(
                        "not hermitian at ({i},{j}): {e:e}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Partial trace over the complement of `keep`.
pub fn reduced_density(state: &BipartiteState, keep: Subsystem) -> DensityOperator {
    let (dh, dl) = (state.d_heavy(), state.d_light());
    match keep {
        Subsystem::Heavy => gram_rows(state.amplitudes(), dh, dl),
        Subsystem::Light => {
            let mut t = vec![C64::new(0.0, 0.0); dh * dl];
            for ih in 0..dh {
                for il in 0..dl {
                    t[il * dh + ih] = state.amplitudes()[ih * dl + il];
                }
            }
            gram_rows(&t, dl, dh)
        }
    }
}

/// `G_ij = sum_k r_i[k] conj(r_j[k])` for the rows of a row-major matrix.
fn gram_rows(data: &[C64], rows: usize, cols: usize) -> DensityOperator {
    let lower: Vec<Vec<C64>> = par::map_range(rows, |i| {
        let ri = &data[i * cols..(i + 1) * cols];
        (0..=i)
            .map(|j| {
                let rj = &data[j * cols..(j + 1) * cols];
                ri.iter().zip(rj).map(|(a, b)| a * b.conj()).sum()
            })
            .collect()
    });
    let mut m = DMatrix::zeros(rows, rows);
    for (i, row) in lower.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            m[(i, j)] = *v;
            m[(j, i)] = v.conj();
        }
        m[(i, i)] = C64::new(row[i].re, 0.0);
    }
    DensityOperator::from_matrix_unchecked(m)
}

/// `1 - Tr rho^2`.
pub fn linear_entropy(rho: &DensityOperator) -> f64 {
    1.0 - rho.purity()
}

/// Squared singular values of the amplitude grid, descending.
pub fn schmidt_weights(state: &BipartiteState) -> Vec<f64> {
    let svd = state.to_matrix().svd(false, false);
    let mut w: Vec<f64> = svd.singular_values.iter().map(|s| s * s).collect();
    w.sort_by(|a, b| b.total_cmp(a));
    w
}

/// Diagonal of a reduced density matrix in the momentum basis.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumWeights {
    pub weights: ProbabilityVector,
    /// Largest off-diagonal magnitude, a coherence diagnostic.
    pub max_off_diagonal: f64,
}

pub fn quantum_weights(rho: &DensityOperator) -> QuantumWeights {
    let diag: Vec<f64> = rho.matrix().diagonal().iter().map(|c| c.re.max(0.0)).collect();
    QuantumWeights {
        weights: ProbabilityVector::normalized(diag),
        max_off_diagonal: rho.max_off_diagonal(),
    }
}

/// `1/2 Tr |a - b|`.
pub fn trace_distance(a: &DensityOperator, b: &DensityOperator) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::usage(format!(
            "trace distance between {}- and {}-dimensional operators",
            a.dim(),
            b.dim()
        )));
    }
    let diff = a.matrix() - b.matrix();
    Ok(hermitian_trace_norm(diff) * 0.5)
}

pub(crate) fn hermitian_trace_norm(m: DMatrix<C64>) -> f64 {
    SymmetricEigen::new(m)
        .eigenvalues
        .iter()
        .map(|x| x.abs())
        .sum()
}

/// Trace distances between a state and its classical counterpart, for the
/// whole pair and for one subsystem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Distinguishability {
    pub global_distance: f64,
    pub reduced_distance: f64,
}

pub fn state_distinguishability(
    rho_full: &DensityOperator,
    rho_cl_full: &DensityOperator,
    rho_reduced: &DensityOperator,
    rho_cl_reduced: &DensityOperator,
) -> Result<Distinguishability> {
    Ok(Distinguishability {
        global_distance: trace_distance(rho_full, rho_cl_full)?.clamp(0.0, 1.0),
        reduced_distance: trace_distance(rho_reduced, rho_cl_reduced)?.clamp(0.0, 1.0),
    })
}
