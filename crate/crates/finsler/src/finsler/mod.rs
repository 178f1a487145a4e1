//! Feasibility of `M + αN ⪰ 0`, decided and certified.
//!
//! For symmetric M, N the following are equivalent:
//!
//! * NS1: there is a real α with `M + αN ⪰ 0`;
//! * NS2 and NS3 together, where NS2 requires `xᵀMx ≥ 0` whenever
//!   `xᵀNx = 0`, and NS3 requires every M-isotropic kernel vector of N to
//!   lie in `ker M` (`ker N ∩ {ξ : ξᵀMξ = 0} ⊆ ker M`).
//!
//! When N is indefinite, NS2 alone is equivalent to NS1 and implies NS3.
//! [`decide_ns1`] dispatches on the definiteness class of N: sign-semidefinite
//! N gets the constructive congruence proof (explicit α via
//! [`synthesize_alpha_definite`]), indefinite N gets the concave line search.
//! Negative verdicts come with residual-checked [`Witness`] vectors where the
//! search finds them.

mod alpha;
mod conditions;
mod cross;
mod strict;

pub use alpha::{synthesize_alpha_definite, CongruenceData};
pub use conditions::{check_ns2, check_ns3};
pub use cross::construct_cross_witness;
pub use strict::{check_s1_strict, check_s2_strict, S2Report, StrictOutcome};

use nalgebra::DVector;

use crate::error::Error;
use crate::linalg::{definiteness_class, spectral_decompose, DefinitenessClass};
use crate::matrix::SymmetricMatrix;
use crate::oracle::{alpha_linesearch, ns2_sphere_oracle, DEFAULT_CONE_BUDGET, DEFAULT_SEARCH_BUDGET};
use crate::tolerance::ToleranceProfile;

/// A symmetric pair (M, N) of equal dimension.
#[derive(Debug, Clone)]
pub struct FinslerInstance {
    m: SymmetricMatrix,
    n: SymmetricMatrix,
}

impl FinslerInstance {
    pub fn new(m: SymmetricMatrix, n: SymmetricMatrix) -> Result<Self, Error> {
        if m.dim() != n.dim() {
            return Err(Error::DimensionMismatch(format!(
                "M is {0}x{0} but N is {1}x{1}",
                m.dim(),
                n.dim()
            )));
        }
        Ok(Self { m, n })
    }

    pub fn dim(&self) -> usize {
        self.m.dim()
    }

    pub fn m(&self) -> &SymmetricMatrix {
        &self.m
    }

    pub fn n(&self) -> &SymmetricMatrix {
        &self.n
    }

    /// `M + αN`.
    pub fn combine(&self, alpha: f64) -> SymmetricMatrix {
        self.m.add_scaled(alpha, &self.n)
    }

    /// `1 + ‖M‖ + |α|·‖N‖` (max-abs entry norms), the reference scale for
    /// certificate residuals at multiplier α.
    pub fn certificate_scale(&self, alpha: f64) -> f64 {
        1.0 + self.m.max_abs() + alpha.abs() * self.n.max_abs()
    }
}

/// What a witness vector certifies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessRole {
    /// Unit x on the null cone of N with `xᵀMx < 0`: NS2 fails, hence no α
    /// exists.
    Ns2Violator,
    /// Unit x in `ker N`, M-isotropic, with `Mx ≠ 0`: NS3 fails.
    Ns3Violator,
    /// Unit x on the null cone of N with `xᵀMx < 0`, built by the cross-term
    /// construction from an NS3 violator.
    CrossTermViolator,
}

/// A unit vector with its residual magnitudes under both forms.
#[derive(Debug, Clone)]
pub struct Witness {
    pub x: DVector<f64>,
    pub role: WitnessRole,
    /// `xᵀMx`.
    pub quad_m: f64,
    /// `xᵀNx`.
    pub quad_n: f64,
    /// `‖Mx‖`.
    pub residual_m: f64,
    /// `‖Nx‖`.
    pub residual_n: f64,
}

impl Witness {
    /// Normalizes x and records its residuals. Does not judge the role;
    /// callers follow up with [`Witness::verify`].
    pub fn evaluate(inst: &FinslerInstance, x: DVector<f64>, role: WitnessRole) -> Self {
        let norm = x.norm();
        let x = if norm > 0.0 { x / norm } else { x };
        let quad_m = inst.m().quad_form(&x);
        let quad_n = inst.n().quad_form(&x);
        let residual_m = (inst.m().as_matrix() * &x).norm();
        let residual_n = (inst.n().as_matrix() * &x).norm();
        Self { x, role, quad_m, quad_n, residual_m, residual_n }
    }

    /// Recomputes the residuals from scratch and checks the role's bounds.
    /// Quadratic-form zero checks are relative to `1 + ‖·‖`; the negativity
    /// bound `xᵀMx < −psd_tol` is absolute.
    pub fn verify(&self, inst: &FinslerInstance, tol: &ToleranceProfile) -> bool {
        if self.x.len() != inst.dim() || (self.x.norm() - 1.0).abs() > 1e-9 {
            return false;
        }
        let quad_m = inst.m().quad_form(&self.x);
        let quad_n = inst.n().quad_form(&self.x);
        let m_scale = 1.0 + inst.m().max_abs();
        let n_scale = 1.0 + inst.n().max_abs();
        match self.role {
            WitnessRole::Ns2Violator | WitnessRole::CrossTermViolator => {
                quad_n.abs() <= tol.zero_tol * n_scale && quad_m < -tol.psd_tol
            }
            WitnessRole::Ns3Violator => {
                let residual_n = (inst.n().as_matrix() * &self.x).norm();
                let residual_m = (inst.m().as_matrix() * &self.x).norm();
                residual_n <= tol.zero_tol * n_scale
                    && quad_m.abs() <= tol.zero_tol * m_scale
                    && residual_m > tol.psd_tol * m_scale
            }
        }
    }
}

/// Status of one of the two spectral conditions.
#[derive(Debug, Clone)]
pub enum ConditionStatus {
    Holds,
    /// Condition fails; the witness is absent when the search could not
    /// certify one (it failed, not the condition check).
    Violated(Option<Witness>),
    /// The kernel restriction is indefinite, so the condition's zero set is
    /// a cone rather than a subspace and the check is not exact. Carries a
    /// best-effort violator when the cone scan verified one.
    NotDecisive(Option<Witness>),
}

impl ConditionStatus {
    pub fn holds(&self) -> bool {
        matches!(self, ConditionStatus::Holds)
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            ConditionStatus::Holds => None,
            ConditionStatus::Violated(w) | ConditionStatus::NotDecisive(w) => w.as_ref(),
        }
    }
}

/// Which dispatch branch produced a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecisionMethod {
    /// Sign-semidefinite (or zero) N: NS2 ∧ NS3 checked exactly, α from the
    /// congruence construction.
    DefiniteConstructive,
    /// Indefinite N: concave line search over α (NS2 alone decides).
    IndefiniteLineSearch,
}

/// Outcome of [`decide_ns1`].
#[derive(Debug, Clone)]
pub struct FinslerVerdict {
    pub feasible: bool,
    /// Certified multiplier; present iff feasible.
    pub alpha: Option<f64>,
    /// `λ_min(M + αN)` at the certified α.
    pub certificate_lambda_min: Option<f64>,
    /// NS2 status; always populated on the constructive path, populated with
    /// the line-search conclusion on the indefinite path.
    pub ns2: Option<ConditionStatus>,
    /// NS3 status; not consulted on the indefinite path (NS2 implies it).
    pub ns3: Option<ConditionStatus>,
    pub method: DecisionMethod,
}

/// Decides whether some α makes `M + αN ⪰ 0` and certifies the answer.
///
/// Sign-semidefinite N: feasible iff NS2 and NS3 both hold, with α
/// synthesized by the congruence construction (positive for `N ⪰ 0`,
/// negative for `N ⪯ 0`). Zero N: feasible iff `M ⪰ 0`, with α = 0.
/// Indefinite N: feasible iff the line-search maximum of `λ_min(M + αN)`
/// clears `−psd_tol·scale`.
///
/// `seed` drives only the randomized witness searches on negative verdicts.
pub fn decide_ns1(
    inst: &FinslerInstance,
    tol: &ToleranceProfile,
    seed: u64,
) -> Result<FinslerVerdict, Error> {
    match definiteness_class(inst.n(), tol) {
        DefinitenessClass::Zero => {
            let ns2 = check_ns2(inst, tol, seed);
            let ns3 = check_ns3(inst, tol, seed);
            let feasible = ns2.holds() && ns3.holds();
            Ok(FinslerVerdict {
                feasible,
                alpha: feasible.then_some(0.0),
                certificate_lambda_min: feasible
                    .then(|| spectral_decompose(inst.m()).lambda_min()),
                ns2: Some(ns2),
                ns3: Some(ns3),
                method: DecisionMethod::DefiniteConstructive,
            })
        }
        DefinitenessClass::PositiveSemidefinite | DefinitenessClass::NegativeSemidefinite => {
            let ns2 = check_ns2(inst, tol, seed);
            let ns3 = check_ns3(inst, tol, seed);
            if !(ns2.holds() && ns3.holds()) {
                return Ok(FinslerVerdict {
                    feasible: false,
                    alpha: None,
                    certificate_lambda_min: None,
                    ns2: Some(ns2),
                    ns3: Some(ns3),
                    method: DecisionMethod::DefiniteConstructive,
                });
            }
            let (alpha, _cert) = synthesize_alpha_definite(inst, tol)?;
            let lambda = spectral_decompose(&inst.combine(alpha)).lambda_min();
            if lambda < -tol.psd_tol * inst.certificate_scale(alpha) {
                return Err(Error::InternalInconsistency(format!(
                    "synthesized alpha = {alpha} fails its own certificate: lambda_min = {lambda}"
                )));
            }
            Ok(FinslerVerdict {
                feasible: true,
                alpha: Some(alpha),
                certificate_lambda_min: Some(lambda),
                ns2: Some(ns2),
                ns3: Some(ns3),
                method: DecisionMethod::DefiniteConstructive,
            })
        }
        DefinitenessClass::Indefinite => {
            let ls = alpha_linesearch(inst, tol, DEFAULT_SEARCH_BUDGET);
            let scale = inst.certificate_scale(ls.alpha_star);
            if ls.value >= -tol.psd_tol * scale {
                return Ok(FinslerVerdict {
                    feasible: true,
                    alpha: Some(ls.alpha_star),
                    certificate_lambda_min: Some(ls.value),
                    ns2: Some(ConditionStatus::Holds),
                    ns3: None,
                    method: DecisionMethod::IndefiniteLineSearch,
                });
            }
            // Indefinite N always brackets mathematically; exhaustion means
            // the eigenvalue budget ran out, not that α diverges.
            if ls.exhausted {
                return Err(Error::BudgetExhausted(format!(
                    "line search stopped after {} evaluations without a conclusive bracket",
                    ls.iterations
                )));
            }
            let witness = ns2_sphere_oracle(inst, DEFAULT_CONE_BUDGET, seed, tol);
            Ok(FinslerVerdict {
                feasible: false,
                alpha: None,
                certificate_lambda_min: None,
                ns2: Some(ConditionStatus::Violated(witness)),
                ns3: None,
                method: DecisionMethod::IndefiniteLineSearch,
            })
        }
    }
}
