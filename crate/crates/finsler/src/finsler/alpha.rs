//! Constructive multiplier synthesis for sign-semidefinite N.
//!
//! Work with `Ñ = ±N ⪰ 0`. An orthogonal T = [T1 T2 T3] splits ℝⁿ into the
//! part of `ker Ñ` that M couples (T1), the part M annihilates (T2), and the
//! complement of the kernel (T3). In these coordinates `TᵀMT` has rows/cols
//! of zeros at T2 and `TᵀÑT = diag(0, 0, V33)` with `V33 ≻ 0`, so
//! `M + α̃Ñ ⪰ 0` reduces by one Schur step to `S33 + α̃V33 ⪰ 0` with
//! `S33 = W33 − W13ᵀW11⁻¹W13`. Any
//! `α̃ ≥ max(−λ_min(S33), 0)/λ_min(V33)` works; an overshoot margin absorbs
//! round-off from the congruence.

use nalgebra::linalg::Cholesky;
use nalgebra::DMatrix;

use crate::error::Error;
use crate::linalg::{
    definiteness_class, kernel_basis, kernel_basis_floored, spectral_decompose, DefinitenessClass,
};
use crate::matrix::SymmetricMatrix;
use crate::tolerance::ToleranceProfile;

use super::FinslerInstance;

/// The congruence behind a synthesized multiplier, kept for auditing.
#[derive(Debug, Clone)]
pub struct CongruenceData {
    /// Kernel directions of N that M couples to the rest; `T1ᵀMT1 ≻ 0`.
    pub t1: DMatrix<f64>,
    /// Kernel directions of N annihilated by M.
    pub t2: DMatrix<f64>,
    /// Orthonormal complement of `ker N`.
    pub t3: DMatrix<f64>,
    /// λ_min(T1ᵀMT1); strictly positive exactly when NS2 and NS3 hold.
    pub w11_lambda_min: f64,
    /// λ_min(T3ᵀÑT3) with Ñ the sign-corrected N; strictly positive.
    pub v33_lambda_min: f64,
    /// λ_min of the Schur complement S33.
    pub s33_lambda_min: f64,
    /// Overshoot added past the minimal Schur-feasible multiplier.
    pub margin: f64,
}

/// Synthesizes α with `M + αN ⪰ 0` for sign-semidefinite nonzero N, assuming
/// NS2 and NS3 hold. The sign of α matches the class: positive for `N ⪰ 0`,
/// negative for `N ⪯ 0`.
pub fn synthesize_alpha_definite(
    inst: &FinslerInstance,
    tol: &ToleranceProfile,
) -> Result<(f64, CongruenceData), Error> {
    let sign = match definiteness_class(inst.n(), tol) {
        DefinitenessClass::PositiveSemidefinite => 1.0,
        DefinitenessClass::NegativeSemidefinite => -1.0,
        other => {
            return Err(Error::PreconditionViolated(format!(
                "alpha synthesis needs a sign-semidefinite nonzero N, got {other:?}"
            )));
        }
    };
    let n_eff = SymmetricMatrix::zeros(inst.dim()).add_scaled(sign, inst.n());
    let m = inst.m();

    let n_floor = tol.psd_tol * (1.0 + n_eff.max_abs());
    let b = kernel_basis_floored(n_eff.as_matrix(), tol, n_floor);
    // Split ker Ñ by the action of M: T2 spans the annihilated part.  M·B is
    // judged at the scale of M (B is orthonormal), so an exact annihilation
    // that rounds to noise still lands in T2.
    let m_floor = tol.zero_tol * (1.0 + m.max_abs());
    let eta2 = kernel_basis_floored(&(m.as_matrix() * &b), tol, m_floor);
    let t2 = &b * &eta2;
    let eta1 = kernel_basis(&eta2.transpose(), tol);
    let t1 = &b * &eta1;
    let t3 = kernel_basis(&b.transpose(), tol);
    if t3.ncols() == 0 {
        return Err(Error::PreconditionViolated(
            "N vanishes within tolerance; no multiplier can act".into(),
        ));
    }

    let v33 = n_eff.congruence(&t3);
    let v33_lambda_min = spectral_decompose(&v33).lambda_min();
    if v33_lambda_min <= tol.psd_tol * (1.0 + n_eff.max_abs()) {
        return Err(Error::PreconditionViolated(format!(
            "kernel split failed: restriction of N to the complement has lambda_min = {v33_lambda_min}"
        )));
    }

    let w33 = m.congruence(&t3);
    let (s33, w11_lambda_min) = if t1.ncols() == 0 {
        (w33, f64::INFINITY)
    } else {
        let w11 = m.congruence(&t1);
        let eig_w11 = spectral_decompose(&w11);
        let w11_lambda_min = eig_w11.lambda_min();
        if w11_lambda_min <= tol.psd_tol * (1.0 + eig_w11.lambda_max().abs()) {
            return Err(Error::PreconditionViolated(format!(
                "W11 is not positive definite (lambda_min = {w11_lambda_min}); NS2/NS3 do not hold"
            )));
        }
        let chol = Cholesky::new(w11.as_matrix().clone()).ok_or_else(|| {
            Error::PreconditionViolated("W11 passed the eigenvalue gate but failed Cholesky".into())
        })?;
        let w13 = t1.transpose() * m.as_matrix() * &t3;
        let schur = w33.as_matrix() - w13.transpose() * chol.solve(&w13);
        (SymmetricMatrix::symmetric_part(&schur), w11_lambda_min)
    };

    let s33_lambda_min = spectral_decompose(&s33).lambda_min();
    let margin = tol.strict_margin * (1.0 + s33.max_abs());
    // λ_min(S33 + α̃V33) ≥ λ_min(S33) + α̃·λ_min(V33) ≥ margin
    let alpha_tilde = ((-s33_lambda_min).max(0.0) + margin) / v33_lambda_min;
    let alpha = sign * alpha_tilde;

    let cert = CongruenceData {
        t1,
        t2,
        t3,
        w11_lambda_min,
        v33_lambda_min,
        s33_lambda_min,
        margin,
    };
    Ok((alpha, cert))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::is_psd;

    fn tol() -> ToleranceProfile {
        ToleranceProfile::default()
    }

    fn pair(m: SymmetricMatrix, n: SymmetricMatrix) -> FinslerInstance {
        FinslerInstance::new(m, n).unwrap()
    }

    #[test]
    fn example_2_needs_alpha_just_past_one() {
        let inst = pair(
            SymmetricMatrix::from_diagonal(&[1.0, -1.0]),
            SymmetricMatrix::from_diagonal(&[0.0, 1.0]),
        );
        let (alpha, cert) = synthesize_alpha_definite(&inst, &tol()).unwrap();
        assert!(alpha >= 1.0 && alpha < 1.001);
        assert!(is_psd(&inst.combine(alpha), &tol()).psd);
        assert_eq!(cert.t1.ncols(), 1);
        assert_eq!(cert.t2.ncols(), 0);
        assert_eq!(cert.t3.ncols(), 1);
        assert!((cert.s33_lambda_min + 1.0).abs() < 1e-12);
    }

    #[test]
    fn psd_m_needs_only_the_margin() {
        let inst = pair(SymmetricMatrix::identity(2), SymmetricMatrix::from_diagonal(&[0.0, 1.0]));
        let (alpha, cert) = synthesize_alpha_definite(&inst, &tol()).unwrap();
        // S33 = [1] ⪰ 0, so the clamp keeps only the overshoot
        assert!(alpha > 0.0 && alpha <= cert.margin / cert.v33_lambda_min + 1e-18);
        assert!(is_psd(&inst.combine(alpha), &tol()).psd);
    }

    #[test]
    fn nsd_n_mirrors_with_negative_alpha() {
        let inst = pair(
            SymmetricMatrix::from_diagonal(&[1.0, -1.0]),
            SymmetricMatrix::from_diagonal(&[0.0, -1.0]),
        );
        let (alpha, _) = synthesize_alpha_definite(&inst, &tol()).unwrap();
        assert!(alpha <= -1.0);
        assert!(is_psd(&inst.combine(alpha), &tol()).psd);
    }

    #[test]
    fn definite_n_skips_the_kernel_blocks() {
        let inst = pair(SymmetricMatrix::from_diagonal(&[1.0, -3.0]), SymmetricMatrix::identity(2));
        let (alpha, cert) = synthesize_alpha_definite(&inst, &tol()).unwrap();
        assert_eq!(cert.t1.ncols(), 0);
        assert_eq!(cert.t2.ncols(), 0);
        assert_eq!(cert.t3.ncols(), 2);
        assert!(alpha >= 3.0);
        assert!(is_psd(&inst.combine(alpha), &tol()).psd);
    }

    #[test]
    fn annihilated_kernel_goes_to_t2() {
        // M kills ker N entirely: T1 empty, S33 = W33.
        let inst = pair(
            SymmetricMatrix::from_diagonal(&[0.0, -2.0]),
            SymmetricMatrix::from_diagonal(&[0.0, 1.0]),
        );
        let (alpha, cert) = synthesize_alpha_definite(&inst, &tol()).unwrap();
        assert_eq!(cert.t1.ncols(), 0);
        assert_eq!(cert.t2.ncols(), 1);
        assert!(alpha >= 2.0);
        assert!(is_psd(&inst.combine(alpha), &tol()).psd);
    }

    #[test]
    fn rejects_wrong_n_classes() {
        let m = SymmetricMatrix::identity(2);
        let indefinite = pair(m.clone(), SymmetricMatrix::from_diagonal(&[1.0, -1.0]));
        assert!(matches!(
            synthesize_alpha_definite(&indefinite, &tol()),
            Err(Error::PreconditionViolated(_))
        ));
        let zero = pair(m, SymmetricMatrix::zeros(2));
        assert!(matches!(
            synthesize_alpha_definite(&zero, &tol()),
            Err(Error::PreconditionViolated(_))
        ));
    }

    #[test]
    fn rejects_inconsistent_conditions_via_w11() {
        // M = −I on ker N: NS2 fails, W11 = [−1] cannot be positive definite.
        let inst = pair(
            SymmetricMatrix::from_diagonal(&[-1.0, -1.0]),
            SymmetricMatrix::from_diagonal(&[0.0, 1.0]),
        );
        let err = synthesize_alpha_definite(&inst, &tol());
        assert!(matches!(err, Err(Error::PreconditionViolated(_))));
    }
}
