//! Feasibility certificates for the non-strict matrix inequality
//! `M + αN ⪰ 0`.
//!
//! Given symmetric `M` and `N`, [`decide_ns1`] decides whether some real
//! multiplier `α` makes `M + αN` positive semidefinite, and produces either
//! an explicit certified `α` or an explicit witness vector showing why none
//! exists. The decision runs through two finite conditions:
//!
//! * `NS2`: `xᵀNx = 0` implies `xᵀMx ≥ 0`, and
//! * `NS3`: `ker N ∩ {ξ : ξᵀMξ = 0} ⊆ ker M`,
//!
//! which together are equivalent to feasibility. Strict feasibility
//! (`M + αN ≻ 0`), the projection-lemma closed form `X = αU`, and a
//! block-partitioned variant quantifying over matrices `Z` with
//! `[I; Z]ᵀN[I; Z] = 0` are derived from the same machinery.
//!
//! ```
//! use finsler::{decide_ns1, FinslerInstance, SymmetricMatrix, ToleranceProfile};
//!
//! let m = SymmetricMatrix::from_diagonal(&[1.0, -1.0]);
//! let n = SymmetricMatrix::from_diagonal(&[0.0, 1.0]);
//! let inst = FinslerInstance::new(m, n).unwrap();
//! let verdict = decide_ns1(&inst, &ToleranceProfile::default(), 0).unwrap();
//! assert!(verdict.feasible);
//! assert!(verdict.alpha.unwrap() >= 1.0);
//! ```

pub mod error;
pub mod finsler;
pub mod linalg;
pub mod matrix;
pub mod oracle;
pub mod projection;
pub mod tolerance;

pub use error::Error;
pub use finsler::{
    check_ns2, check_ns3, check_s1_strict, check_s2_strict, construct_cross_witness, decide_ns1,
    synthesize_alpha_definite, CongruenceData, ConditionStatus, DecisionMethod, FinslerInstance,
    FinslerVerdict, S2Report, StrictOutcome, Witness, WitnessRole,
};
pub use linalg::{
    definiteness_class, is_psd, kernel_basis, numerical_rank, pseudoinverse, schur_psd_check,
    spectral_decompose, DefinitenessClass, PsdCheck, SchurCheck, SchurFailure,
    SpectralDecomposition,
};
pub use matrix::SymmetricMatrix;
pub use oracle::{
    alpha_linesearch, gen_feasible_instance, gen_ns3_violating_instance, ns2_sphere_oracle,
    GeneratedInstance, GroundTruth, LineSearchResult, DEFAULT_CONE_BUDGET, DEFAULT_SEARCH_BUDGET,
};
pub use projection::{check_nspl, solve_nspl_identity, NsplInstance, NsplReport};
pub use tolerance::ToleranceProfile;
