//! Exact checks of the two spectral conditions.
//!
//! For sign-semidefinite N the null cone `{x : xᵀNx = 0}` equals `ker N`, so
//! both conditions reduce to eigenvalue questions about the kernel
//! restriction `G = BᵀMB`. For indefinite N the cone is genuinely quadratic:
//! NS2 is decided through the line search (it is equivalent to NS1 there) and
//! NS3 can only be probed.

use nalgebra::DVector;

use crate::linalg::{definiteness_class, is_psd, kernel_basis_floored, spectral_decompose};
use crate::oracle::{
    alpha_linesearch, ns2_sphere_oracle, scan_null_cone, DEFAULT_CONE_BUDGET,
    DEFAULT_SEARCH_BUDGET,
};
use crate::tolerance::ToleranceProfile;

use super::{ConditionStatus, FinslerInstance, Witness, WitnessRole};

/// Cheaper budget for best-effort scans that no verdict depends on.
const PROBE_BUDGET: usize = 1_000;

/// NS2: `xᵀNx = 0 ⟹ xᵀMx ≥ 0`.
///
/// Sign-semidefinite N: holds iff `BᵀMB ⪰ 0` for a kernel basis B; a failure
/// maps the bottom eigenvector back as the witness. Indefinite N: decided by
/// the line search (Lemma-equivalence with NS1); on failure the null cone is
/// sampled for a witness, and a `Violated(None)` means the sampler came up
/// empty, not that the violation is in doubt.
pub fn check_ns2(inst: &FinslerInstance, tol: &ToleranceProfile, seed: u64) -> ConditionStatus {
    let class = definiteness_class(inst.n(), tol);
    if class.is_sign_semidefinite() {
        let n_floor = tol.psd_tol * (1.0 + inst.n().max_abs());
        let b = kernel_basis_floored(inst.n().as_matrix(), tol, n_floor);
        if b.ncols() == 0 {
            // trivial cone: nothing to check
            return ConditionStatus::Holds;
        }
        let g = inst.m().congruence(&b);
        if is_psd(&g, tol).psd {
            return ConditionStatus::Holds;
        }
        let eig = spectral_decompose(&g);
        let x = &b * eig.eigenvector(0);
        let witness = Witness::evaluate(inst, x, WitnessRole::Ns2Violator);
        let verified = witness.verify(inst, tol);
        ConditionStatus::Violated(verified.then_some(witness))
    } else {
        let ls = alpha_linesearch(inst, tol, DEFAULT_SEARCH_BUDGET);
        if ls.value >= -tol.psd_tol * inst.certificate_scale(ls.alpha_star) {
            ConditionStatus::Holds
        } else {
            ConditionStatus::Violated(ns2_sphere_oracle(inst, DEFAULT_CONE_BUDGET, seed, tol))
        }
    }
}

/// NS3: `ker N ∩ {ξ : ξᵀMξ = 0} ⊆ ker M`.
///
/// With B a kernel basis of N and `G = BᵀMB` sign-semidefinite, the
/// M-isotropic vectors of `ker N` are exactly `B·ker G`; the condition holds
/// iff M annihilates them. An indefinite G makes the isotropic set a cone
/// and the check inexact: `NotDecisive`, with a sampled violator when the
/// scan verifies one. (`decide_ns1` never consults that branch: an
/// indefinite G already violates NS2.)
pub fn check_ns3(inst: &FinslerInstance, tol: &ToleranceProfile, seed: u64) -> ConditionStatus {
    let n_floor = tol.psd_tol * (1.0 + inst.n().max_abs());
    let b = kernel_basis_floored(inst.n().as_matrix(), tol, n_floor);
    if b.ncols() == 0 {
        return ConditionStatus::Holds;
    }
    let g = inst.m().congruence(&b);
    let class = definiteness_class(&g, tol);
    if !class.is_sign_semidefinite() {
        let eig_g = spectral_decompose(&g);
        let mut best: Option<(DVector<f64>, f64)> = None;
        scan_null_cone(&eig_g, tol, seed, PROBE_BUDGET, &mut |eta| {
            let x = &b * eta;
            let residual = (inst.m().as_matrix() * &x).norm();
            if best.as_ref().is_none_or(|(_, r)| residual > *r) {
                best = Some((x, residual));
            }
        });
        let witness = best.and_then(|(x, _)| {
            let w = Witness::evaluate(inst, x, WitnessRole::Ns3Violator);
            w.verify(inst, tol).then_some(w)
        });
        return ConditionStatus::NotDecisive(witness);
    }
    // G is measured at the scale of M: when the restriction cancels exactly,
    // G is rounding noise and must keep its full kernel.
    let g_floor = tol.psd_tol * (1.0 + inst.m().max_abs());
    let k = kernel_basis_floored(g.as_matrix(), tol, g_floor);
    if k.ncols() == 0 {
        // no isotropic directions beyond 0
        return ConditionStatus::Holds;
    }
    let candidates = &b * &k;
    let mut worst = (0, f64::NEG_INFINITY);
    for j in 0..candidates.ncols() {
        let residual = (inst.m().as_matrix() * candidates.column(j)).norm();
        if residual > worst.1 {
            worst = (j, residual);
        }
    }
    if worst.1 <= tol.zero_tol * (1.0 + inst.m().max_abs()) {
        return ConditionStatus::Holds;
    }
    let witness = Witness::evaluate(
        inst,
        candidates.column(worst.0).into_owned(),
        WitnessRole::Ns3Violator,
    );
    let verified = witness.verify(inst, tol);
    ConditionStatus::Violated(verified.then_some(witness))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::SymmetricMatrix;
    use approx::assert_abs_diff_eq;

    fn tol() -> ToleranceProfile {
        ToleranceProfile::default()
    }

    fn pair(m: SymmetricMatrix, n: SymmetricMatrix) -> FinslerInstance {
        FinslerInstance::new(m, n).unwrap()
    }

    fn example_1() -> FinslerInstance {
        pair(
            SymmetricMatrix::from_diagonal(&[1.0, -1.0]),
            SymmetricMatrix::new(2, &[1.0, 1.0, 1.0, 1.0]).unwrap(),
        )
    }

    fn example_2() -> FinslerInstance {
        pair(
            SymmetricMatrix::from_diagonal(&[1.0, -1.0]),
            SymmetricMatrix::from_diagonal(&[0.0, 1.0]),
        )
    }

    #[test]
    fn ns2_holds_on_both_worked_examples() {
        assert!(check_ns2(&example_1(), &tol(), 0).holds());
        assert!(check_ns2(&example_2(), &tol(), 0).holds());
    }

    #[test]
    fn ns2_kernel_violation_produces_kernel_witness() {
        let inst = pair(
            SymmetricMatrix::from_diagonal(&[-1.0, -1.0]),
            SymmetricMatrix::from_diagonal(&[0.0, 1.0]),
        );
        let status = check_ns2(&inst, &tol(), 0);
        let w = status.witness().expect("verified witness");
        assert!(matches!(status, ConditionStatus::Violated(_)));
        assert_abs_diff_eq!(w.x[0].abs(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(w.x[1], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(w.quad_m, -1.0, epsilon = 1e-12);
    }

    #[test]
    fn ns2_indefinite_branch_decides_both_ways() {
        let holds = pair(
            SymmetricMatrix::from_diagonal(&[1.0, -1.0]),
            SymmetricMatrix::from_diagonal(&[1.0, -1.0]),
        );
        assert!(check_ns2(&holds, &tol(), 0).holds());

        let fails = pair(
            SymmetricMatrix::from_diagonal(&[-1.0, -1.0]),
            SymmetricMatrix::from_diagonal(&[1.0, -1.0]),
        );
        let status = check_ns2(&fails, &tol(), 0);
        assert!(matches!(status, ConditionStatus::Violated(Some(_))));
        assert!(status.witness().unwrap().verify(&fails, &tol()));
    }

    #[test]
    fn ns2_definite_n_holds_vacuously() {
        let inst = pair(SymmetricMatrix::from_diagonal(&[-5.0, -5.0]), SymmetricMatrix::identity(2));
        assert!(check_ns2(&inst, &tol(), 0).holds());
    }

    #[test]
    fn ns3_example_1_yields_the_antisymmetric_witness() {
        let status = check_ns3(&example_1(), &tol(), 0);
        let w = status.witness().expect("verified witness");
        assert!(matches!(status, ConditionStatus::Violated(_)));
        let r = 0.5_f64.sqrt();
        assert_abs_diff_eq!(w.x[0].abs(), r, epsilon = 1e-10);
        assert_abs_diff_eq!(w.x[1].abs(), r, epsilon = 1e-10);
        assert!(w.x[0] * w.x[1] < 0.0);
        assert!(w.residual_m > 0.9);
    }

    #[test]
    fn ns3_holds_on_example_2_and_trivial_cases() {
        assert!(check_ns3(&example_2(), &tol(), 0).holds());
        // M = 0: everything lies in ker M
        let zero_m = pair(SymmetricMatrix::zeros(3), SymmetricMatrix::from_diagonal(&[1.0, 0.0, 0.0]));
        assert!(check_ns3(&zero_m, &tol(), 0).holds());
        // N definite: empty kernel
        let pd_n = pair(SymmetricMatrix::from_diagonal(&[1.0, -7.0]), SymmetricMatrix::identity(2));
        assert!(check_ns3(&pd_n, &tol(), 0).holds());
    }

    #[test]
    fn ns3_indefinite_restriction_is_not_decisive() {
        // ker N = span{e1, e2}, G = diag(1, −1) indefinite; the cone scan
        // still finds x with xᵀMx = 0, Mx ≠ 0.
        let inst = pair(
            SymmetricMatrix::from_diagonal(&[1.0, -1.0, 0.0]),
            SymmetricMatrix::from_diagonal(&[0.0, 0.0, 1.0]),
        );
        let status = check_ns3(&inst, &tol(), 0);
        assert!(matches!(status, ConditionStatus::NotDecisive(Some(_))));
        assert!(status.witness().unwrap().verify(&inst, &tol()));
    }
}
