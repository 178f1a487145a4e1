//! Strict variant: `M + αN ≻ 0` via the line-search bridge.
//!
//! Strict feasibility is an open condition, so it is decided by whether the
//! concave profile's maximum clears a positive margin rather than a
//! tolerance floor. The companion kernel margin ε quantifies the strict
//! counterpart of NS2 when N is sign-semidefinite: the infimum of `xᵀMx`
//! over unit vectors of `ker N`.

use crate::linalg::{definiteness_class, kernel_basis_floored, spectral_decompose};
use crate::oracle::{alpha_linesearch, LineSearchResult, DEFAULT_SEARCH_BUDGET};
use crate::tolerance::ToleranceProfile;

use super::FinslerInstance;

/// Verdict for strict feasibility.
#[derive(Debug, Clone, Copy)]
pub struct StrictOutcome {
    pub feasible: bool,
    /// Multiplier achieving `λ_min(M + αN) > 0`; present iff feasible.
    pub alpha: Option<f64>,
    /// Best `λ_min(M + αN)` found.
    pub lambda_min: f64,
    pub search: LineSearchResult,
}

/// Decides `∃α: M + αN ≻ 0`: feasible iff the line-search maximum exceeds
/// `strict_margin·scale`.
pub fn check_s1_strict(inst: &FinslerInstance, tol: &ToleranceProfile) -> StrictOutcome {
    let search = alpha_linesearch(inst, tol, DEFAULT_SEARCH_BUDGET);
    let feasible = search.value > tol.strict_margin * inst.certificate_scale(search.alpha_star);
    StrictOutcome {
        feasible,
        alpha: feasible.then_some(search.alpha_star),
        lambda_min: search.value,
        search,
    }
}

/// Strict-NS2 report.
#[derive(Debug, Clone, Copy)]
pub struct S2Report {
    /// Equals strict feasibility of the pair (the two are equivalent).
    pub holds: bool,
    /// `inf{xᵀMx : x ∈ ker N, ‖x‖ = 1} = λ_min(BᵀMB)`, the strict margin of
    /// the kernel restriction. Present only when N is sign-semidefinite with
    /// a nontrivial kernel; for definite N the infimum runs over an empty
    /// set and for indefinite N the null cone exceeds the kernel.
    pub epsilon: Option<f64>,
}

pub fn check_s2_strict(inst: &FinslerInstance, tol: &ToleranceProfile) -> S2Report {
    let holds = check_s1_strict(inst, tol).feasible;
    let class = definiteness_class(inst.n(), tol);
    let epsilon = if class.is_sign_semidefinite() {
        let n_floor = tol.psd_tol * (1.0 + inst.n().max_abs());
        let b = kernel_basis_floored(inst.n().as_matrix(), tol, n_floor);
        (b.ncols() > 0).then(|| spectral_decompose(&inst.m().congruence(&b)).lambda_min())
    } else {
        None
    };
    S2Report { holds, epsilon }
}
