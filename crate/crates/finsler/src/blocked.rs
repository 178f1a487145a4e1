//! Block-partitioned pairs and the matrix-variable reduction.
//!
//! Here M and N carry a 2×2 block partition and the multiplier question is
//! asked through the matrix-valued condition
//!
//! * (M1): `[I; Z]ᵀM[I; Z] ⪰ 0` for every Z with `[I; Z]ᵀN[I; Z] = 0`,
//!
//! which under the assumptions below is what NS2 looks like after the second
//! block of x is eliminated. The assumptions: `N22 ⪯ 0`, N11 equals the
//! completed square `N12·N22⁺·N12ᵀ`, `im N12ᵀ ⊆ im N22`, `M22 ⪯ 0`, and M
//! keeps a positive direction after elimination. They make the Z family
//! affine, `Z0 + K·Θ` with `Z0 = −N22⁺N12ᵀ` and K spanning `ker N22`, which
//! collapses (M1) to three finite checks, and they make N ⪯ 0, so
//! [`decide_mfl`] can decide the pair twice: once directly on (M, N) and
//! once as (M1) ∧ NS3. The routes must agree; disagreement is reported, not
//! reconciled.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::finsler::{check_ns3, decide_ns1, ConditionStatus, FinslerInstance, FinslerVerdict};
use crate::linalg::{is_psd, kernel_basis_floored, pseudoinverse, spectral_decompose};
use crate::matrix::SymmetricMatrix;
use crate::oracle::{gaussian_matrix, random_symmetric};
use crate::tolerance::ToleranceProfile;

/// A symmetric pair of dimension `dim1 + dim2` read through the 2×2 block
/// partition at row/column `dim1`.
#[derive(Debug, Clone)]
pub struct BlockedSymmetricPair {
    dim1: usize,
    dim2: usize,
    m: SymmetricMatrix,
    n: SymmetricMatrix,
}

impl BlockedSymmetricPair {
    pub fn new(
        dim1: usize,
        dim2: usize,
        m: SymmetricMatrix,
        n: SymmetricMatrix,
    ) -> Result<Self, Error> {
        if dim1 == 0 || dim2 == 0 {
            return Err(Error::InvalidInput("both blocks need positive dimension".into()));
        }
        if m.dim() != dim1 + dim2 || n.dim() != dim1 + dim2 {
            return Err(Error::DimensionMismatch(format!(
                "blocks {dim1}+{dim2} do not tile a {}x{} / {}x{} pair",
                m.dim(),
                m.dim(),
                n.dim(),
                n.dim()
            )));
        }
        Ok(Self { dim1, dim2, m, n })
    }

    pub fn dim1(&self) -> usize {
        self.dim1
    }

    pub fn dim2(&self) -> usize {
        self.dim2
    }

    pub fn m(&self) -> &SymmetricMatrix {
        &self.m
    }

    pub fn n(&self) -> &SymmetricMatrix {
        &self.n
    }

    pub fn m11(&self) -> SymmetricMatrix {
        principal(self.m.as_matrix(), 0, self.dim1)
    }

    pub fn m12(&self) -> DMatrix<f64> {
        self.m.as_matrix().view((0, self.dim1), (self.dim1, self.dim2)).into_owned()
    }

    pub fn m22(&self) -> SymmetricMatrix {
        principal(self.m.as_matrix(), self.dim1, self.dim2)
    }

    pub fn n11(&self) -> SymmetricMatrix {
        principal(self.n.as_matrix(), 0, self.dim1)
    }

    pub fn n12(&self) -> DMatrix<f64> {
        self.n.as_matrix().view((0, self.dim1), (self.dim1, self.dim2)).into_owned()
    }

    pub fn n22(&self) -> SymmetricMatrix {
        principal(self.n.as_matrix(), self.dim1, self.dim2)
    }
}

fn principal(a: &DMatrix<f64>, start: usize, len: usize) -> SymmetricMatrix {
    // principal blocks of an exactly symmetric matrix are exactly symmetric
    SymmetricMatrix::symmetric_part(&a.view((start, start), (len, len)).into_owned())
}

fn negated(a: &SymmetricMatrix) -> SymmetricMatrix {
    SymmetricMatrix::zeros(a.dim()).add_scaled(-1.0, a)
}

/// `[I; Z]`, the embedding x₁ ↦ (x₁, Zx₁).
fn embedding(z: &DMatrix<f64>) -> DMatrix<f64> {
    let (rows, cols) = z.shape();
    let mut p = DMatrix::zeros(cols + rows, cols);
    p.view_mut((0, 0), (cols, cols)).copy_from(&DMatrix::identity(cols, cols));
    p.view_mut((cols, 0), (rows, cols)).copy_from(z);
    p
}

/// The five standing assumptions, each with its measured evidence.
#[derive(Debug, Clone)]
pub struct MflAssumptionReport {
    /// `N22 ⪯ 0`.
    pub n22_nsd: bool,
    /// `‖N11 − N12·N22⁺·N12ᵀ‖_F`; N11 must equal the completed square.
    pub completion_residual: f64,
    pub completion: bool,
    /// `‖(I − N22·N22⁺)·N12ᵀ‖_F`; the coupling block must live in `im N22`.
    pub range_residual: f64,
    pub range_inclusion: bool,
    /// `M22 ⪯ 0`.
    pub m22_nsd: bool,
    /// `M̃11 = [I; Z0]ᵀM[I; Z0]`, M after eliminating the second block along
    /// the distinguished solution `Z0 = −N22⁺N12ᵀ`.
    pub m_tilde: SymmetricMatrix,
    pub m_tilde_lambda_max: f64,
    /// Top eigenvector of M̃11, the certificate when `positive_direction`.
    pub x_bar: DVector<f64>,
    /// Some x̄ with `x̄ᵀM̃11x̄ > 0`, i.e. `λ_max(M̃11) > psd_tol`.
    pub positive_direction: bool,
    pub all_hold: bool,
}

pub fn check_mfl_assumptions(
    pair: &BlockedSymmetricPair,
    tol: &ToleranceProfile,
) -> MflAssumptionReport {
    let n22 = pair.n22();
    let n12 = pair.n12();
    let n22_pinv = pseudoinverse(n22.as_matrix(), tol);
    let n_scale = 1.0 + pair.n().max_abs();

    let n22_nsd = is_psd(&negated(&n22), tol).psd;
    let completion_residual =
        (pair.n11().as_matrix() - &n12 * &n22_pinv * n12.transpose()).norm();
    let completion = completion_residual <= tol.zero_tol * n_scale;
    let projector = DMatrix::identity(pair.dim2(), pair.dim2()) - n22.as_matrix() * &n22_pinv;
    let range_residual = (projector * n12.transpose()).norm();
    let range_inclusion = range_residual <= tol.zero_tol * n_scale;
    let m22_nsd = is_psd(&negated(&pair.m22()), tol).psd;

    let z0 = -(&n22_pinv * n12.transpose());
    let m_tilde = pair.m().congruence(&embedding(&z0));
    let eig = spectral_decompose(&m_tilde);
    let m_tilde_lambda_max = eig.lambda_max();
    let x_bar = eig.eigenvector(pair.dim1() - 1);
    let positive_direction = m_tilde_lambda_max > tol.psd_tol;

    let all_hold = n22_nsd && completion && range_inclusion && m22_nsd && positive_direction;
    MflAssumptionReport {
        n22_nsd,
        completion_residual,
        completion,
        range_residual,
        range_inclusion,
        m22_nsd,
        m_tilde,
        m_tilde_lambda_max,
        x_bar,
        positive_direction,
        all_hold,
    }
}

/// The affine family of all Z with `[I; Z]ᵀN[I; Z] = 0`: every such Z is
/// `Z0 + K·Θ` with `Z0 = −N22⁺N12ᵀ`, K an orthonormal basis of `ker N22`,
/// and Θ arbitrary.
///
/// Needs `N22 ⪯ 0`, the completed square, and the range inclusion (the first
/// three assumptions): completing the square then gives
/// `[I; Z]ᵀN[I; Z] = (Z − Z0)ᵀN22(Z − Z0)`, which vanishes exactly when the
/// columns of `Z − Z0` lie in `ker N22`. The residual at Z0 is re-checked on
/// return.
pub fn null_z_family(
    pair: &BlockedSymmetricPair,
    tol: &ToleranceProfile,
) -> Result<(DMatrix<f64>, DMatrix<f64>), Error> {
    let report = check_mfl_assumptions(pair, tol);
    if !(report.n22_nsd && report.completion && report.range_inclusion) {
        return Err(Error::PreconditionViolated(format!(
            "N blocks are not in eliminable form: N22 ⪯ 0 {}, completion residual {:.3e}, range residual {:.3e}",
            report.n22_nsd, report.completion_residual, report.range_residual
        )));
    }
    let n22 = pair.n22();
    let z0 = -(pseudoinverse(n22.as_matrix(), tol) * pair.n12().transpose());
    let n22_floor = tol.psd_tol * (1.0 + n22.max_abs());
    let k = kernel_basis_floored(n22.as_matrix(), tol, n22_floor);

    let residual = pair.n().congruence(&embedding(&z0));
    let z0_scale = 1.0 + z0.norm_squared();
    if residual.as_matrix().norm() > tol.zero_tol * (1.0 + pair.n().max_abs()) * z0_scale {
        return Err(Error::PreconditionViolated(format!(
            "completed square does not vanish at Z0: residual {:.3e}",
            residual.as_matrix().norm()
        )));
    }
    Ok((z0, k))
}

/// Outcome of [`check_m1`].
#[derive(Debug, Clone)]
pub enum M1Status {
    Holds,
    /// A concrete Z in the null family whose M-form has a negative
    /// eigenvalue.
    Violated(DMatrix<f64>),
}

impl M1Status {
    pub fn holds(&self) -> bool {
        matches!(self, M1Status::Holds)
    }
}

/// Decides (M1) exactly.
///
/// On the family `Z = Z0 + KΘ` the form expands to
/// `M̃11 + CΘ + ΘᵀCᵀ + ΘᵀDΘ` with `C = (M12 + Z0ᵀM22)K` and `D = KᵀM22K ⪯ 0`.
/// Positivity over all Θ forces `D = 0` (the t² term otherwise drives an
/// eigenvalue to −∞), which with `M22 ⪯ 0` means `M22K = 0` and reduces C to
/// `M12K`; the linear term then forces `C = 0`; what remains is `M̃11 ⪰ 0`.
/// So (M1) holds iff `M̃11 ⪰ 0`, `M22K = 0` and `M12K = 0`, and a failure of
/// any one yields an explicit violating Z, verified before return.
pub fn check_m1(pair: &BlockedSymmetricPair, tol: &ToleranceProfile) -> Result<M1Status, Error> {
    let report = check_mfl_assumptions(pair, tol);
    if !(report.n22_nsd && report.completion && report.range_inclusion && report.m22_nsd) {
        return Err(Error::PreconditionViolated(format!(
            "pair is not in eliminable form: N22 ⪯ 0 {}, completion {}, range {}, M22 ⪯ 0 {}",
            report.n22_nsd, report.completion, report.range_inclusion, report.m22_nsd
        )));
    }
    let (z0, k) = null_z_family(pair, tol)?;
    let m_tilde = &report.m_tilde;
    let m_scale = 1.0 + pair.m().max_abs();

    let m_tilde_psd = is_psd(m_tilde, tol).psd;
    let m22k = pair.m22().as_matrix() * &k;
    let m12k = pair.m12() * &k;
    if m_tilde_psd
        && m22k.norm() <= tol.zero_tol * m_scale
        && m12k.norm() <= tol.zero_tol * m_scale
    {
        return Ok(M1Status::Holds);
    }

    if !m_tilde_psd {
        // Θ = 0 already violates
        return Ok(M1Status::Violated(z0));
    }

    let c = (pair.m12() + z0.transpose() * pair.m22().as_matrix()) * &k;
    let theta0 = if m22k.norm() > tol.zero_tol * m_scale {
        // Θ = t·d·eᵀ: the t² coefficient is dᵀDd < 0, and e is aimed along
        // −Cd so the linear term helps
        let d_form = SymmetricMatrix::symmetric_part(&(k.transpose() * &m22k));
        let d = spectral_decompose(&d_form).eigenvector(0);
        let cd = &c * &d;
        let e = if cd.norm() > 0.0 {
            -cd / cd.norm()
        } else {
            DVector::from_fn(pair.dim1(), |i, _| if i == 0 { 1.0 } else { 0.0 })
        };
        d * e.transpose()
    } else {
        // D ≈ 0, so the form is affine in Θ; walk against the linear term
        -c.transpose()
    };

    let mut t = 1.0;
    for _ in 0..80 {
        let z = &z0 + &k * (&theta0 * t);
        let form = pair.m().congruence(&embedding(&z));
        if spectral_decompose(&form).lambda_min() < -tol.psd_tol {
            return Ok(M1Status::Violated(z));
        }
        t *= 2.0;
    }
    Err(Error::InternalInconsistency(
        "a reduction condition fails but no finite step certifies the violation".into(),
    ))
}

/// Verdict of [`decide_mfl`]: the direct decision plus the reduced route it
/// was checked against.
#[derive(Debug, Clone)]
pub struct MflVerdict {
    /// Direct decision on the assembled pair (N ⪯ 0 under the assumptions,
    /// so this is the constructive path with α < 0 on feasibility).
    pub verdict: FinslerVerdict,
    pub m1: M1Status,
    pub ns3: ConditionStatus,
}

/// Decides `M + αN ⪰ 0` for a blocked pair twice and insists the routes
/// agree: directly through [`decide_ns1`], and as (M1) ∧ NS3. Disagreement
/// is an [`Error::InternalInconsistency`] carrying both raw outputs; it
/// flags a tolerance-boundary instance or a bug, and is a tested surface,
/// not a recovery path.
pub fn decide_mfl(
    pair: &BlockedSymmetricPair,
    tol: &ToleranceProfile,
    seed: u64,
) -> Result<MflVerdict, Error> {
    let report = check_mfl_assumptions(pair, tol);
    if !report.all_hold {
        return Err(Error::PreconditionViolated(format!(
            "assumptions fail: N22 ⪯ 0 {}, completion {}, range {}, M22 ⪯ 0 {}, positive direction {}",
            report.n22_nsd,
            report.completion,
            report.range_inclusion,
            report.m22_nsd,
            report.positive_direction
        )));
    }
    let inst = FinslerInstance::new(pair.m().clone(), pair.n().clone())?;
    let verdict = decide_ns1(&inst, tol, seed)?;
    let m1 = check_m1(pair, tol)?;
    let ns3 = check_ns3(&inst, tol, seed);
    let reduced = m1.holds() && ns3.holds();
    if verdict.feasible != reduced {
        return Err(Error::InternalInconsistency(format!(
            "direct route says feasible = {}, reduced route says M1 holds = {} and NS3 holds = {}; direct verdict: {verdict:?}",
            verdict.feasible,
            m1.holds(),
            ns3.holds()
        )));
    }
    Ok(MflVerdict { verdict, m1, ns3 })
}

/// Draws a pair satisfying all five assumptions by construction: `N22`
/// a negated Gram of random rank, `N12ᵀ = N22·F` (range inclusion),
/// `N11` the completed square, `M22` a negated Gram, and `M11` shifted along
/// the top eliminated direction until the positive-direction assumption
/// holds.
///
/// `force_m1` additionally plants the reduction conditions: `M22` and the
/// rows of `M12` are projected onto `im N22`, and `M11` is solved against a
/// PSD target so that `M̃11 ⪰ 0.1·I`.
pub fn gen_assumption_satisfying_pair(
    dim1: usize,
    dim2: usize,
    seed: u64,
    force_m1: bool,
) -> Result<BlockedSymmetricPair, Error> {
    if dim1 == 0 || dim2 == 0 {
        return Err(Error::InvalidInput("both blocks need positive dimension".into()));
    }
    let tol = ToleranceProfile::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let rank = rng.gen_range(0..=dim2);
    let g = gaussian_matrix(&mut rng, rank, dim2);
    let n22 = SymmetricMatrix::symmetric_part(&(-(g.transpose() * &g)));
    let n22_pinv = pseudoinverse(n22.as_matrix(), &tol);
    let f = gaussian_matrix(&mut rng, dim2, dim1);
    let n12 = (n22.as_matrix() * f).transpose();
    let n11 = SymmetricMatrix::symmetric_part(&(&n12 * &n22_pinv * n12.transpose()));
    let n = assemble(n11.as_matrix(), &n12, n22.as_matrix());

    let z0 = -(&n22_pinv * n12.transpose());
    let projector = n22.as_matrix() * &n22_pinv;

    let h_rank = rng.gen_range(0..=dim2);
    let h = gaussian_matrix(&mut rng, h_rank, dim2);
    let mut m22 = SymmetricMatrix::symmetric_part(&(-(h.transpose() * &h)));
    let mut m12 = gaussian_matrix(&mut rng, dim1, dim2);
    let mut m11 = random_symmetric(&mut rng, dim1);
    if force_m1 {
        m22 = SymmetricMatrix::symmetric_part(
            &(projector.transpose() * m22.as_matrix() * &projector),
        );
        m12 *= 1.0;
        m12 = m12 * &projector;
        let r = gaussian_matrix(&mut rng, dim1, dim1);
        let target = r.transpose() * &r + DMatrix::identity(dim1, dim1) * 0.1;
        // M̃11 = M11 + M12·Z0 + Z0ᵀM12ᵀ + Z0ᵀM22·Z0 = target
        let coupling =
            &m12 * &z0 + z0.transpose() * m12.transpose() + z0.transpose() * m22.as_matrix() * &z0;
        m11 = SymmetricMatrix::symmetric_part(&(target - coupling));
    }

    let mut m = assemble(m11.as_matrix(), &m12, m22.as_matrix());
    let pair = BlockedSymmetricPair::new(dim1, dim2, m.clone(), n.clone())?;
    let report = check_mfl_assumptions(&pair, &tol);
    if !report.positive_direction {
        let lift = (report.m_tilde_lambda_max.abs() + 1.0)
            * (&report.x_bar * report.x_bar.transpose());
        let m11_lifted = SymmetricMatrix::symmetric_part(&(m11.as_matrix() + lift));
        m = assemble(m11_lifted.as_matrix(), &m12, m22.as_matrix());
    }
    BlockedSymmetricPair::new(dim1, dim2, m, n)
}

fn assemble(b11: &DMatrix<f64>, b12: &DMatrix<f64>, b22: &DMatrix<f64>) -> SymmetricMatrix {
    let (d1, d2) = (b11.nrows(), b22.nrows());
    let mut full = DMatrix::zeros(d1 + d2, d1 + d2);
    full.view_mut((0, 0), (d1, d1)).copy_from(b11);
    full.view_mut((0, d1), (d1, d2)).copy_from(b12);
    full.view_mut((d1, 0), (d2, d1)).copy_from(&b12.transpose());
    full.view_mut((d1, d1), (d2, d2)).copy_from(b22);
    SymmetricMatrix::symmetric_part(&full)
}
