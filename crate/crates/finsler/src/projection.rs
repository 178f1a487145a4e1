//! Two-sided multiplier feasibility and the identity-channel closed form.
//!
//! The object is the inequality `Q + UᵀXV + VᵀXᵀU ⪰ 0` over rectangular X
//! (the non-strict projection lemma). Some X works iff three spectral
//! conditions hold: `xᵀQx ≥ 0` on `ker U`, the same on `ker V`, and every
//! Q-isotropic vector of `ker U ∩ ker V` lies in `ker Q`. [`check_nspl`]
//! decides them; no closed-form X exists in general.
//!
//! When V = I the story is better: feasibility collapses to the one-sided
//! conditions on `ker U` alone, and the solution set then always contains a
//! positive multiple of U itself, which [`solve_nspl_identity`] constructs
//! through the multiplier synthesis for the pair `(Q, UᵀU)`.

use nalgebra::{DMatrix, DVector};

use crate::error::Error;
use crate::finsler::{
    check_ns3, decide_ns1, ConditionStatus, FinslerInstance, Witness, WitnessRole,
};
use crate::linalg::{
    definiteness_class, is_psd, kernel_basis, kernel_basis_floored, numerical_rank,
    spectral_decompose,
};
use crate::matrix::SymmetricMatrix;
use crate::oracle::scan_null_cone;
use crate::tolerance::ToleranceProfile;

/// Cheaper budget for best-effort scans that no verdict depends on.
const PROBE_BUDGET: usize = 1_000;

/// Data (Q, U, V) of the inequality `Q + UᵀXV + VᵀXᵀU ⪰ 0`.
#[derive(Debug, Clone)]
pub struct NsplInstance {
    q: SymmetricMatrix,
    u: DMatrix<f64>,
    v: DMatrix<f64>,
}

impl NsplInstance {
    /// U and V need `dim(Q)` columns each; row counts are free (X is
    /// `rows(U) × rows(V)`).
    pub fn new(q: SymmetricMatrix, u: DMatrix<f64>, v: DMatrix<f64>) -> Result<Self, Error> {
        let n = q.dim();
        if u.ncols() != n || v.ncols() != n {
            return Err(Error::DimensionMismatch(format!(
                "Q is {n}x{n} but U has {} and V has {} columns",
                u.ncols(),
                v.ncols()
            )));
        }
        if u.iter().chain(v.iter()).any(|e| !e.is_finite()) {
            return Err(Error::InvalidInput("U and V entries must be finite".into()));
        }
        Ok(Self { q, u, v })
    }

    pub fn q(&self) -> &SymmetricMatrix {
        &self.q
    }

    pub fn u(&self) -> &DMatrix<f64> {
        &self.u
    }

    pub fn v(&self) -> &DMatrix<f64> {
        &self.v
    }

    pub fn dim(&self) -> usize {
        self.q.dim()
    }
}

/// The three conditions. Witnesses are evaluated against the Gram pairs
/// `(Q, UᵀU)`, `(Q, VᵀV)` and `(Q, UᵀU + VᵀV)`: a vector kills `Ux` exactly
/// when it is N-isotropic for `N = UᵀU`, so the roles carry over unchanged.
#[derive(Debug, Clone)]
pub struct NsplReport {
    /// `xᵀQx ≥ 0` on `ker U`.
    pub cond_u: ConditionStatus,
    /// `xᵀQx ≥ 0` on `ker V`.
    pub cond_v: ConditionStatus,
    /// Q-isotropic vectors of `ker U ∩ ker V` lie in `ker Q`.
    pub coupling: ConditionStatus,
    /// All three hold: some X satisfies the inequality.
    pub feasible: bool,
}

/// Decides feasibility of `Q + UᵀXV + VᵀXᵀU ⪰ 0`.
pub fn check_nspl(inst: &NsplInstance, tol: &ToleranceProfile) -> NsplReport {
    let cond_u = kernel_restriction_status(inst.q(), inst.u(), tol);
    let cond_v = kernel_restriction_status(inst.q(), inst.v(), tol);
    let coupling = coupling_status(inst, tol);
    let feasible = cond_u.holds() && cond_v.holds() && coupling.holds();
    NsplReport { cond_u, cond_v, coupling, feasible }
}

/// `xᵀQx ≥ 0` on `ker A`, reported like an NS2 check of the pair `(Q, AᵀA)`.
fn kernel_restriction_status(
    q: &SymmetricMatrix,
    a: &DMatrix<f64>,
    tol: &ToleranceProfile,
) -> ConditionStatus {
    let basis = kernel_basis(a, tol);
    if basis.ncols() == 0 {
        return ConditionStatus::Holds;
    }
    let g = q.congruence(&basis);
    if is_psd(&g, tol).psd {
        return ConditionStatus::Holds;
    }
    let eig = spectral_decompose(&g);
    let pair = gram_pair(q, a);
    let w = Witness::evaluate(&pair, &basis * eig.eigenvector(0), WitnessRole::Ns2Violator);
    let verified = w.verify(&pair, tol);
    ConditionStatus::Violated(verified.then_some(w))
}

fn gram_pair(q: &SymmetricMatrix, a: &DMatrix<f64>) -> FinslerInstance {
    let gram = SymmetricMatrix::symmetric_part(&(a.transpose() * a));
    FinslerInstance::new(q.clone(), gram).expect("Gram matrix is dim(Q)-square")
}

/// Coupling over the joint kernel, computed on the stacked matrix `[U; V]`
/// rather than by intersecting two bases (one SVD, no basis alignment).
/// Mirrors the NS3 check with `B = ker [U; V]`.
fn coupling_status(inst: &NsplInstance, tol: &ToleranceProfile) -> ConditionStatus {
    let (u, v) = (inst.u(), inst.v());
    let mut stack = DMatrix::zeros(u.nrows() + v.nrows(), inst.dim());
    stack.view_mut((0, 0), (u.nrows(), inst.dim())).copy_from(u);
    stack.view_mut((u.nrows(), 0), (v.nrows(), inst.dim())).copy_from(v);
    let b = kernel_basis(&stack, tol);
    if b.ncols() == 0 {
        return ConditionStatus::Holds;
    }

    let q = inst.q();
    let joint = SymmetricMatrix::symmetric_part(
        &(u.transpose() * u + v.transpose() * v),
    );
    let pair = FinslerInstance::new(q.clone(), joint).expect("joint Gram is dim(Q)-square");
    let g = q.congruence(&b);
    let class = definiteness_class(&g, tol);
    if !class.is_sign_semidefinite() {
        // only reachable when a one-sided condition already failed; scan for
        // a best-effort violator anyway
        let eig_g = spectral_decompose(&g);
        let mut best: Option<(DVector<f64>, f64)> = None;
        scan_null_cone(&eig_g, tol, 0, PROBE_BUDGET, &mut |eta| {
            let x = &b * eta;
            let residual = (q.as_matrix() * &x).norm();
            if best.as_ref().is_none_or(|(_, r)| residual > *r) {
                best = Some((x, residual));
            }
        });
        let witness = best.and_then(|(x, _)| {
            let w = Witness::evaluate(&pair, x, WitnessRole::Ns3Violator);
            w.verify(&pair, tol).then_some(w)
        });
        return ConditionStatus::NotDecisive(witness);
    }

    // G is measured at the scale of Q; see the NS3 check.
    let g_floor = tol.psd_tol * (1.0 + q.max_abs());
    let k = kernel_basis_floored(g.as_matrix(), tol, g_floor);
    if k.ncols() == 0 {
        return ConditionStatus::Holds;
    }
    let candidates = &b * &k;
    let mut worst = (0, f64::NEG_INFINITY);
    for j in 0..candidates.ncols() {
        let residual = (q.as_matrix() * candidates.column(j)).norm();
        if residual > worst.1 {
            worst = (j, residual);
        }
    }
    if worst.1 <= tol.zero_tol * (1.0 + q.max_abs()) {
        return ConditionStatus::Holds;
    }
    let w = Witness::evaluate(&pair, candidates.column(worst.0).into_owned(), WitnessRole::Ns3Violator);
    let verified = w.verify(&pair, tol);
    ConditionStatus::Violated(verified.then_some(w))
}

/// Solves `Q + UᵀX + XᵀU ⪰ 0` (the V = I instance) in the closed form
/// `X = αU` with α > 0.
///
/// Such a multiple exists whenever the instance is feasible at all: with
/// `M = Q`, `N = UᵀU ⪰ 0` the one-sided conditions are NS2 and NS3 of the
/// pair, [`decide_ns1`] synthesizes α′ > 0 with `Q + α′UᵀU ⪰ 0`, and
/// `X = (α′/2)U` assembles to exactly that matrix since
/// `UᵀX + XᵀU = α′UᵀU`.
///
/// The one-sided coupling is checked here directly (via the NS3 check of the
/// Gram pair): it does not follow from [`check_nspl`], whose joint kernel
/// `ker U ∩ ker I` is trivial.
pub fn solve_nspl_identity(
    q: &SymmetricMatrix,
    u: &DMatrix<f64>,
    tol: &ToleranceProfile,
) -> Result<DMatrix<f64>, Error> {
    if u.ncols() != q.dim() {
        return Err(Error::DimensionMismatch(format!(
            "Q is {0}x{0} but U has {1} columns",
            q.dim(),
            u.ncols()
        )));
    }
    if u.iter().any(|e| !e.is_finite()) {
        return Err(Error::InvalidInput("U entries must be finite".into()));
    }

    let cond_u = kernel_restriction_status(q, u, tol);
    let pair = gram_pair(q, u);
    let coupling = check_ns3(&pair, tol, 0);
    if !(cond_u.holds() && coupling.holds()) {
        return Err(Error::PreconditionViolated(format!(
            "no multiple of U works: kernel restriction {}, coupling {}",
            status_word(&cond_u),
            status_word(&coupling)
        )));
    }

    // any multiple of a vanishing U is zero; the conditions above already
    // demanded Q ⪰ 0
    if numerical_rank(u, tol) == 0 {
        return Ok(DMatrix::zeros(u.nrows(), u.ncols()));
    }

    let verdict = decide_ns1(&pair, tol, 0)?;
    if !verdict.feasible {
        return Err(Error::InternalInconsistency(format!(
            "conditions hold but the multiplier synthesis disagrees: {verdict:?}"
        )));
    }
    let alpha_prime = verdict.alpha.expect("feasible verdicts carry alpha");
    let x = u * (alpha_prime / 2.0);

    // judge the assembled inequality, not the shortcut Q + α′UᵀU
    let formed = q.as_matrix() + u.transpose() * &x + x.transpose() * u;
    let lambda_min = spectral_decompose(&SymmetricMatrix::symmetric_part(&formed)).lambda_min();
    if lambda_min < -tol.psd_tol * pair.certificate_scale(alpha_prime) {
        return Err(Error::InternalInconsistency(format!(
            "synthesized multiple fails the assembled inequality: lambda_min = {lambda_min}"
        )));
    }
    Ok(x)
}

fn status_word(status: &ConditionStatus) -> &'static str {
    match status {
        ConditionStatus::Holds => "holds",
        ConditionStatus::Violated(_) => "violated",
        ConditionStatus::NotDecisive(_) => "not decisive",
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn tol() -> ToleranceProfile {
        ToleranceProfile::default()
    }

    fn row(entries: &[f64]) -> DMatrix<f64> {
        DMatrix::from_row_slice(1, entries.len(), entries)
    }

    #[test]
    fn instance_rejects_column_mismatch() {
        let q = SymmetricMatrix::identity(2);
        let err = NsplInstance::new(q, row(&[1.0, 0.0, 0.0]), DMatrix::identity(2, 2));
        assert!(matches!(err, Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn kernel_restriction_failure_blocks_feasibility() {
        // ker U = span{e2}, restriction of Q there is −1
        let inst = NsplInstance::new(
            SymmetricMatrix::from_diagonal(&[1.0, -1.0]),
            row(&[1.0, 0.0]),
            DMatrix::identity(2, 2),
        )
        .unwrap();
        let report = check_nspl(&inst, &tol());
        assert!(!report.feasible);
        assert!(matches!(report.cond_u, ConditionStatus::Violated(Some(_))));
        let w = report.cond_u.witness().unwrap();
        assert_abs_diff_eq!(w.x[1].abs(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(w.quad_m, -1.0, epsilon = 1e-12);
    }

    #[test]
    fn swapped_channel_is_feasible() {
        let inst = NsplInstance::new(
            SymmetricMatrix::from_diagonal(&[1.0, -1.0]),
            row(&[0.0, 1.0]),
            DMatrix::identity(2, 2),
        )
        .unwrap();
        let report = check_nspl(&inst, &tol());
        assert!(report.feasible);
        assert!(report.cond_u.holds());
        // ker I is trivial on both the one-sided and the joint checks
        assert!(report.cond_v.holds());
        assert!(report.coupling.holds());
    }

    #[test]
    fn psd_q_is_feasible_for_any_channels() {
        let inst = NsplInstance::new(
            SymmetricMatrix::from_diagonal(&[2.0, 0.0, 1.0]),
            row(&[1.0, 1.0, 1.0]),
            DMatrix::from_row_slice(2, 3, &[0.0, 1.0, -1.0, 1.0, 0.0, 0.0]),
        )
        .unwrap();
        let report = check_nspl(&inst, &tol());
        assert!(report.feasible, "{report:?}");
    }

    #[test]
    fn coupling_violation_is_witnessed() {
        // e3 is killed by both channels and Q-isotropic, but Q·e3 = e1
        let q = SymmetricMatrix::new(
            3,
            &[0.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 0.0],
        )
        .unwrap();
        let inst =
            NsplInstance::new(q, row(&[1.0, 0.0, 0.0]), row(&[1.0, 0.0, 0.0])).unwrap();
        let report = check_nspl(&inst, &tol());
        assert!(report.cond_u.holds());
        assert!(report.cond_v.holds());
        assert!(matches!(report.coupling, ConditionStatus::Violated(Some(_))));
        assert!(!report.feasible);
        let w = report.coupling.witness().unwrap();
        assert_abs_diff_eq!(w.x[2].abs(), 1.0, epsilon = 1e-10);
        assert!(w.residual_m > 0.9);
    }

    #[test]
    fn identity_solution_on_the_worked_pair() {
        // Q + UᵀX + XᵀU = diag(1, 2β − 1) for X = βU
        let q = SymmetricMatrix::from_diagonal(&[1.0, -1.0]);
        let u = row(&[0.0, 1.0]);
        let x = solve_nspl_identity(&q, &u, &tol()).unwrap();
        assert_abs_diff_eq!(x[(0, 0)], 0.0, epsilon = 1e-12);
        assert!(x[(0, 1)] >= 0.5);
        assert_abs_diff_eq!(x[(0, 1)], 0.5, epsilon = 1e-4);
        let formed = q.as_matrix() + u.transpose() * &x + x.transpose() * &u;
        let lambda_min =
            spectral_decompose(&SymmetricMatrix::symmetric_part(&formed)).lambda_min();
        assert!(lambda_min >= 0.0, "residual lambda_min = {lambda_min}");
    }

    #[test]
    fn identity_solution_stays_a_multiple_of_u() {
        let q = SymmetricMatrix::identity(3);
        let u = DMatrix::from_row_slice(2, 3, &[1.0, 2.0, 0.0, 0.0, 1.0, -1.0]);
        let x = solve_nspl_identity(&q, &u, &tol()).unwrap();
        let beta = (&x * u.transpose()).trace() / (&u * u.transpose()).trace();
        assert!(beta > 0.0);
        assert!((x - &u * beta).norm() <= 1e-12);
    }

    #[test]
    fn full_channel_shifts_by_the_bottom_eigenvalue() {
        // U = I: Q + 2βI ⪰ 0 needs β ≥ 3/2
        let q = SymmetricMatrix::from_diagonal(&[-3.0, 5.0]);
        let u = DMatrix::identity(2, 2);
        let x = solve_nspl_identity(&q, &u, &tol()).unwrap();
        assert_abs_diff_eq!(x[(0, 0)], 1.5, epsilon = 1e-4);
        assert_abs_diff_eq!(x[(1, 1)], x[(0, 0)], epsilon = 1e-12);
        assert_abs_diff_eq!(x[(0, 1)], 0.0, epsilon = 1e-12);
        assert!(x[(0, 0)] >= 1.5);
    }

    #[test]
    fn identity_solution_rejects_infeasible_pairs() {
        let q = SymmetricMatrix::from_diagonal(&[1.0, -1.0]);
        let err = solve_nspl_identity(&q, &row(&[1.0, 0.0]), &tol());
        assert!(matches!(err, Err(Error::PreconditionViolated(_))));
    }

    #[test]
    fn vanishing_u_degenerates_to_a_psd_check() {
        let zero_u = DMatrix::zeros(1, 2);
        let x = solve_nspl_identity(&SymmetricMatrix::identity(2), &zero_u, &tol()).unwrap();
        assert_eq!(x, DMatrix::zeros(1, 2));

        let err = solve_nspl_identity(
            &SymmetricMatrix::from_diagonal(&[1.0, -1.0]),
            &zero_u,
            &tol(),
        );
        assert!(matches!(err, Err(Error::PreconditionViolated(_))));
    }
}
