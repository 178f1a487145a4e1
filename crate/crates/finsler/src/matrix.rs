//! Exactly-symmetric dense matrices.
//!
//! Inputs are validated as nearly symmetric, then stored as `(A + Aᵀ)/2`
//! exactly; every downstream routine assumes bitwise symmetry, so asymmetry
//! cannot drift through congruences.

use nalgebra::{DMatrix, DVector};

use crate::error::Error;

/// Relative asymmetry allowed at construction before input is rejected.
const SYMMETRY_TOL: f64 = 1e-8;

/// A real symmetric matrix with exactly symmetric storage.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix {
    mat: DMatrix<f64>,
}

impl SymmetricMatrix {
    /// Builds from row-major entries of a `dim × dim` array.
    pub fn new(dim: usize, entries: &[f64]) -> Result<Self, Error> {
        if dim == 0 {
            return Err(Error::InvalidInput("dimension must be positive".into()));
        }
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch(format!(
                "expected {} entries for a {dim}x{dim} matrix, got {}",
                dim * dim,
                entries.len()
            )));
        }
        let mat = DMatrix::from_row_slice(dim, dim, entries);
        Self::from_matrix(&mat)
    }

    /// Builds from a square matrix, checking near-symmetry.
    pub fn from_matrix(mat: &DMatrix<f64>) -> Result<Self, Error> {
        if mat.nrows() == 0 || mat.nrows() != mat.ncols() {
            return Err(Error::DimensionMismatch(format!(
                "expected a nonempty square matrix, got {}x{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        if mat.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("matrix entries must be finite".into()));
        }
        let max_abs = mat.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
        let asym = (mat - mat.transpose()).iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
        if asym > SYMMETRY_TOL * (1.0 + max_abs) {
            return Err(Error::InvalidInput(format!(
                "matrix is not symmetric: max |A_ij - A_ji| = {asym:e}"
            )));
        }
        Ok(Self { mat: (mat + mat.transpose()) * 0.5 })
    }

    /// Symmetric part of an arbitrary square matrix, without the asymmetry check.
    /// For internal products like `TᵀMT` that are symmetric up to round-off.
    pub fn symmetric_part(mat: &DMatrix<f64>) -> Self {
        debug_assert_eq!(mat.nrows(), mat.ncols());
        Self { mat: (mat + mat.transpose()) * 0.5 }
    }

    pub fn zeros(dim: usize) -> Self {
        Self { mat: DMatrix::zeros(dim, dim) }
    }

    pub fn identity(dim: usize) -> Self {
        Self { mat: DMatrix::identity(dim, dim) }
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        Self { mat: DMatrix::from_diagonal(&DVector::from_row_slice(diag)) }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.mat
    }

    /// Largest absolute entry; the `‖·‖_max` norm used in tolerance scales.
    pub fn max_abs(&self) -> f64 {
        self.mat.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
    }

    /// The quadratic form `xᵀ A x`.
    pub fn quad_form(&self, x: &DVector<f64>) -> f64 {
        x.dot(&(&self.mat * x))
    }

    /// `A + c·B`, exactly symmetric by construction.
    pub fn add_scaled(&self, c: f64, other: &SymmetricMatrix) -> SymmetricMatrix {
        SymmetricMatrix { mat: &self.mat + &other.mat * c }
    }

    /// The congruence `Pᵀ A P`, resymmetrized against round-off.
    pub fn congruence(&self, p: &DMatrix<f64>) -> SymmetricMatrix {
        SymmetricMatrix::symmetric_part(&(p.transpose() * &self.mat * p))
    }
}

impl std::ops::Index<(usize, usize)> for SymmetricMatrix {
    type Output = f64;
    fn index(&self, idx: (usize, usize)) -> &f64 {
        &self.mat[idx]
    }
}
