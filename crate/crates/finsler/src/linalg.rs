//! Spectral decomposition, kernel bases, pseudoinverse, and semidefiniteness
//! tests under the crate's tolerance policy.
//!
//! Numerical rank follows the standard rule: a singular value counts as
//! nonzero when it exceeds `σ_max · max(nrows, ncols) · rank_tol`.

use nalgebra::{DMatrix, DVector, SymmetricEigen, SVD};

use crate::matrix::SymmetricMatrix;
use crate::tolerance::ToleranceProfile;

/// Eigenvalues ascending, with matching orthonormal eigenvector columns.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: DMatrix<f64>,
}

impl SpectralDecomposition {
    pub fn lambda_min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn lambda_max(&self) -> f64 {
        *self.eigenvalues.last().expect("nonempty spectrum")
    }

    /// Eigenvector column `i` as an owned vector.
    pub fn eigenvector(&self, i: usize) -> DVector<f64> {
        self.eigenvectors.column(i).into_owned()
    }

    /// `1 + max |λ|`, the scale used for relative eigenvalue thresholds.
    pub fn scale(&self) -> f64 {
        1.0 + self.lambda_min().abs().max(self.lambda_max().abs())
    }
}

/// Full symmetric eigendecomposition, eigenvalues sorted ascending.
pub fn spectral_decompose(a: &SymmetricMatrix) -> SpectralDecomposition {
    let eig = SymmetricEigen::new(a.as_matrix().clone());
    let n = a.dim();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut eigenvectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        eigenvectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    SpectralDecomposition { eigenvalues, eigenvectors }
}

fn svd_of(a: &DMatrix<f64>) -> SVD<f64, nalgebra::Dyn, nalgebra::Dyn> {
    SVD::new(a.clone(), true, true)
}

fn rank_cutoff(singular_values: &[f64], dims: (usize, usize), tol: &ToleranceProfile) -> f64 {
    let sigma_max = singular_values.iter().fold(0.0_f64, |acc, s| acc.max(*s));
    sigma_max * dims.0.max(dims.1) as f64 * tol.rank_tol
}

/// Number of singular values above the relative cutoff.
pub fn numerical_rank(a: &DMatrix<f64>, tol: &ToleranceProfile) -> usize {
    if a.nrows() == 0 || a.ncols() == 0 {
        return 0;
    }
    let svd = svd_of(a);
    let cutoff = rank_cutoff(svd.singular_values.as_slice(), (a.nrows(), a.ncols()), tol);
    svd.singular_values.iter().filter(|&&s| s > cutoff).count()
}

/// Orthonormal basis of the numerical kernel of `a`; zero columns when the
/// kernel is trivial.
///
/// nalgebra's SVD is thin, so a wide matrix is padded with zero rows first;
/// padding changes neither the singular values nor the right singular vectors.
pub fn kernel_basis(a: &DMatrix<f64>, tol: &ToleranceProfile) -> DMatrix<f64> {
    kernel_basis_floored(a, tol, 0.0)
}

/// [`kernel_basis`] with an absolute singular-value floor folded into the
/// cutoff.
///
/// The relative cutoff alone misbehaves when `a` is a numerically zero
/// product: its largest singular value is rounding noise, so every direction
/// looks like range and the kernel comes back empty.  Callers that know the
/// scale `a` was produced at pass it as `floor`.
pub fn kernel_basis_floored(a: &DMatrix<f64>, tol: &ToleranceProfile, floor: f64) -> DMatrix<f64> {
    let n = a.ncols();
    if n == 0 {
        return DMatrix::zeros(0, 0);
    }
    if a.nrows() == 0 {
        return DMatrix::identity(n, n);
    }
    let padded;
    let work = if a.nrows() < n {
        padded = {
            let mut p = DMatrix::zeros(n, n);
            p.view_mut((0, 0), (a.nrows(), n)).copy_from(a);
            p
        };
        &padded
    } else {
        a
    };
    let svd = svd_of(work);
    let v_t = svd.v_t.as_ref().expect("SVD with v_t requested");
    let cutoff = rank_cutoff(svd.singular_values.as_slice(), (a.nrows(), n), tol).max(floor);
    let kernel_rows: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] <= cutoff)
        .collect();
    let mut basis = DMatrix::zeros(n, kernel_rows.len());
    for (col, &row) in kernel_rows.iter().enumerate() {
        basis.set_column(col, &v_t.row(row).transpose());
    }
    basis
}

/// Moore–Penrose pseudoinverse with the crate's rank rule.
pub fn pseudoinverse(a: &DMatrix<f64>, tol: &ToleranceProfile) -> DMatrix<f64> {
    if a.nrows() == 0 || a.ncols() == 0 {
        return DMatrix::zeros(a.ncols(), a.nrows());
    }
    let svd = svd_of(a);
    let u = svd.u.as_ref().expect("SVD with u requested");
    let v_t = svd.v_t.as_ref().expect("SVD with v_t requested");
    let cutoff = rank_cutoff(svd.singular_values.as_slice(), (a.nrows(), a.ncols()), tol);
    let mut pinv = DMatrix::zeros(a.ncols(), a.nrows());
    for i in 0..svd.singular_values.len() {
        let s = svd.singular_values[i];
        if s > cutoff {
            // v_i · u_iᵀ / σ_i, accumulated column by column.
            let v_i = v_t.row(i).transpose();
            let u_i = u.column(i);
            pinv += v_i * u_i.transpose() / s;
        }
    }
    pinv
}

/// Sign classification of a symmetric matrix's spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DefinitenessClass {
    PositiveSemidefinite,
    NegativeSemidefinite,
    Indefinite,
    Zero,
}

impl DefinitenessClass {
    /// True for the classes whose null cone `{x : xᵀNx = 0}` equals `ker N`.
    pub fn is_sign_semidefinite(self) -> bool {
        !matches!(self, DefinitenessClass::Indefinite)
    }
}

/// Classifies the spectrum against `psd_tol · (1 + max|λ|)`.
///
/// `Zero` is reported only when every eigenvalue sits inside the band; callers
/// that branch on sign treat it as positive semidefinite.
pub fn definiteness_class(a: &SymmetricMatrix, tol: &ToleranceProfile) -> DefinitenessClass {
    let eig = spectral_decompose(a);
    let threshold = tol.psd_tol * eig.scale();
    let lo = eig.lambda_min();
    let hi = eig.lambda_max();
    if lo >= -threshold && hi <= threshold {
        DefinitenessClass::Zero
    } else if lo >= -threshold {
        DefinitenessClass::PositiveSemidefinite
    } else if hi <= threshold {
        DefinitenessClass::NegativeSemidefinite
    } else {
        DefinitenessClass::Indefinite
    }
}

/// Result of a `⪰ 0` test, with the decisive eigenvalue attached.
#[derive(Debug, Clone, Copy)]
pub struct PsdCheck {
    pub psd: bool,
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub threshold: f64,
}

/// `λ_min(A) ≥ −psd_tol·(1 + |λ_max|)`, reported with the spectrum edges.
pub fn is_psd(a: &SymmetricMatrix, tol: &ToleranceProfile) -> PsdCheck {
    let eig = spectral_decompose(a);
    let threshold = tol.psd_tol * (1.0 + eig.lambda_max().abs());
    PsdCheck {
        psd: eig.lambda_min() >= -threshold,
        lambda_min: eig.lambda_min(),
        lambda_max: eig.lambda_max(),
        threshold,
    }
}

/// First condition of the non-strict Schur test to fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchurFailure {
    /// `R ⪰ 0` fails.
    RNotPsd,
    /// `Q − S R⁺ Sᵀ ⪰ 0` fails.
    ComplementNotPsd,
    /// `S (I − R R⁺) ≠ 0`: `S` leaks outside the range of `R`.
    RangeCondition,
}

#[derive(Debug, Clone, Copy)]
pub struct SchurCheck {
    pub psd: bool,
    pub failure: Option<SchurFailure>,
    /// `λ_min` of the Schur complement `Q − S R⁺ Sᵀ`.
    pub complement_lambda_min: f64,
    /// `‖S(I − R R⁺)‖_max`.
    pub range_residual: f64,
}

/// Non-strict Schur test: `[[Q, S], [Sᵀ, R]] ⪰ 0` iff `R ⪰ 0`,
/// `Q − S R⁺ Sᵀ ⪰ 0`, and `S (I − R R⁺) = 0`.
pub fn schur_psd_check(
    q: &SymmetricMatrix,
    s: &DMatrix<f64>,
    r: &SymmetricMatrix,
    tol: &ToleranceProfile,
) -> Result<SchurCheck, crate::error::Error> {
    if s.nrows() != q.dim() || s.ncols() != r.dim() {
        return Err(crate::error::Error::DimensionMismatch(format!(
            "S must be {}x{} to couple Q ({0}x{0}) with R ({1}x{1}), got {}x{}",
            q.dim(),
            r.dim(),
            s.nrows(),
            s.ncols()
        )));
    }
    let r_pinv = pseudoinverse(r.as_matrix(), tol);
    let complement = SymmetricMatrix::symmetric_part(&(q.as_matrix() - s * &r_pinv * s.transpose()));
    let complement_check = is_psd(&complement, tol);
    let projector = DMatrix::identity(r.dim(), r.dim()) - r.as_matrix() * &r_pinv;
    let range_residual = (s * projector).iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
    let s_scale = 1.0 + s.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));

    let failure = if !is_psd(r, tol).psd {
        Some(SchurFailure::RNotPsd)
    } else if !complement_check.psd {
        Some(SchurFailure::ComplementNotPsd)
    } else if range_residual > tol.zero_tol * s_scale {
        Some(SchurFailure::RangeCondition)
    } else {
        None
    };
    Ok(SchurCheck {
        psd: failure.is_none(),
        failure,
        complement_lambda_min: complement_check.lambda_min,
        range_residual,
    })
}

/// Max-abs norm of an arbitrary rectangular matrix.
pub(crate) fn max_abs(a: &DMatrix<f64>) -> f64 {
    a.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
}
