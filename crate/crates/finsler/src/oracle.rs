//! Independent verification machinery: a concave 1-D eigenvalue line search
//! over α, null-cone sampling for NS2, and seeded instance generators.
//!
//! `α ↦ λ_min(M + αN)` is a pointwise infimum of affine functions of α
//! (one per unit vector), hence concave; a bracketing golden-section search
//! maximizes it exactly. This is the brute-force oracle every constructive
//! verdict is tested against.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::Error;
use crate::finsler::{FinslerInstance, Witness, WitnessRole};
use crate::linalg::{kernel_basis, spectral_decompose, DefinitenessClass, SpectralDecomposition};
use crate::matrix::SymmetricMatrix;
use crate::tolerance::ToleranceProfile;

/// Default cap on eigenvalue evaluations in [`alpha_linesearch`].
pub const DEFAULT_SEARCH_BUDGET: usize = 600;
/// Default sample cap for null-cone witness searches.
pub const DEFAULT_CONE_BUDGET: usize = 10_000;

/// Bracket width past which expansion gives up: the maximizer is at infinity
/// for practical purposes.
const BRACKET_CAP: f64 = 1e12;

/// Outcome of the concave line search over α.
#[derive(Debug, Clone, Copy)]
pub struct LineSearchResult {
    /// Best α found (earliest sample on plateaus).
    pub alpha_star: f64,
    /// `λ_min(M + α*N)`.
    pub value: f64,
    /// Final search interval.
    pub bracket: (f64, f64),
    /// Eigenvalue evaluations consumed.
    pub iterations: usize,
    /// Bracket expansion hit the width cap without enclosing a maximizer
    /// (profile flat or increasing toward infinity, e.g. semidefinite N);
    /// `alpha_star`/`value` are best-so-far.
    pub exhausted: bool,
}

struct Profile<'a> {
    inst: &'a FinslerInstance,
    m_abs: f64,
    n_abs: f64,
    evals: usize,
    best_alpha: f64,
    best_value: f64,
}

impl<'a> Profile<'a> {
    fn new(inst: &'a FinslerInstance) -> Self {
        Self {
            inst,
            m_abs: inst.m().max_abs(),
            n_abs: inst.n().max_abs(),
            evals: 0,
            best_alpha: 0.0,
            best_value: f64::NEG_INFINITY,
        }
    }

    /// Eigenvalues of `M + αN` carry rounding noise of order `ε·‖M + αN‖`,
    /// which at |α| ~ 1e11 can flip the sign of a vanishing λ_min. Anything
    /// inside 100ε of that scale is a tie.
    fn noise_floor(&self, alpha: f64) -> f64 {
        1e-14 * (1.0 + self.m_abs + alpha.abs() * self.n_abs)
    }

    fn eval(&mut self, alpha: f64) -> f64 {
        let value = spectral_decompose(&self.inst.combine(alpha)).lambda_min();
        self.evals += 1;
        // improvements must clear the noise floor; plateau ties keep the
        // earliest α
        if value > self.best_value + self.noise_floor(alpha) {
            self.best_value = value;
            self.best_alpha = alpha;
        }
        value
    }
}

/// Maximizes `λ_min(M + αN)` over α.
///
/// Brackets from `[−1, 1]` by doubling the half-width until the profile
/// decreases at both endpoints relative to the best interior sample (or the
/// width exceeds 1e12, reported via `exhausted`), then refines by golden
/// section to width `1e−10·(1 + |α*|)`.
pub fn alpha_linesearch(
    inst: &FinslerInstance,
    _tol: &ToleranceProfile,
    budget: usize,
) -> LineSearchResult {
    let mut profile = Profile::new(inst);
    let mut interior_best = profile.eval(0.0);
    let (mut lo, mut hi) = (-1.0_f64, 1.0_f64);
    let mut f_lo = profile.eval(lo);
    let mut f_hi = profile.eval(hi);

    let mut exhausted = false;
    loop {
        // the decrease must clear the noise floor, or junk eigenvalues at
        // huge |α| fake a bracket
        if f_lo < interior_best - profile.noise_floor(lo)
            && f_hi < interior_best - profile.noise_floor(hi)
        {
            break;
        }
        if hi - lo > BRACKET_CAP || profile.evals + 2 > budget {
            exhausted = true;
            break;
        }
        interior_best = interior_best.max(f_lo).max(f_hi);
        let half = hi - lo;
        let center = 0.5 * (lo + hi);
        lo = center - half;
        hi = center + half;
        f_lo = profile.eval(lo);
        f_hi = profile.eval(hi);
    }

    // Golden-section refinement; ties shrink from the right, so on plateaus
    // the interval converges to the left plateau edge. On exhausted brackets
    // this still pins down the best finite sample.
    let invphi = 0.5 * (5.0_f64.sqrt() - 1.0);
    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - (b - a) * invphi;
    let mut x2 = a + (b - a) * invphi;
    let mut f1 = profile.eval(x1);
    let mut f2 = profile.eval(x2);
    while b - a > 1e-10 * (1.0 + a.abs().max(b.abs())) {
        if profile.evals >= budget {
            exhausted = true;
            break;
        }
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - (b - a) * invphi;
            f1 = profile.eval(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + (b - a) * invphi;
            f2 = profile.eval(x2);
        }
    }

    // Prefer the bracket center over the raw best sample when the values tie:
    // on plateaus the earliest sample can sit far from the converged interval.
    // Ties break toward smaller |α|.
    let mid = 0.5 * (a + b);
    let f_mid = profile.eval(mid);
    let tie = f_mid >= profile.best_value - 1e-12 * (1.0 + profile.best_value.abs());
    let (alpha_star, value) = if tie && mid.abs() < profile.best_alpha.abs() {
        (mid, f_mid)
    } else {
        (profile.best_alpha, profile.best_value)
    };

    LineSearchResult { alpha_star, value, bracket: (a, b), iterations: profile.evals, exhausted }
}

/// Visits up to `budget` unit vectors on the null cone `{x : xᵀAx = 0}` of
/// the symmetric matrix behind `eig`.
///
/// Deterministic pass first: every kernel eigenvector, then every balanced
/// positive/negative eigenvector pair `√|λ⁻|·u ± √λ⁺·v`. Remaining budget is
/// spent on seeded random balanced mixes with random kernel components.
pub(crate) fn scan_null_cone(
    eig: &SpectralDecomposition,
    tol: &ToleranceProfile,
    seed: u64,
    budget: usize,
    visit: &mut dyn FnMut(DVector<f64>),
) {
    let threshold = tol.psd_tol * eig.scale();
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    let mut ker = Vec::new();
    for (i, &lambda) in eig.eigenvalues.iter().enumerate() {
        if lambda > threshold {
            pos.push(i);
        } else if lambda < -threshold {
            neg.push(i);
        } else {
            ker.push(i);
        }
    }
    if pos.is_empty() && neg.is_empty() && ker.is_empty() {
        return;
    }
    let mut used = 0usize;
    let mut emit = |x: DVector<f64>, used: &mut usize| {
        let norm = x.norm();
        if norm > 1e-12 {
            visit(x / norm);
            *used += 1;
        }
    };

    for &k in &ker {
        if used >= budget {
            return;
        }
        emit(eig.eigenvector(k), &mut used);
    }
    for &i in &pos {
        for &j in &neg {
            let u = eig.eigenvector(i);
            let v = eig.eigenvector(j);
            let a = eig.eigenvalues[j].abs().sqrt();
            let b = eig.eigenvalues[i].sqrt();
            for sign in [1.0, -1.0] {
                if used >= budget {
                    return;
                }
                emit(&u * a + &v * (sign * b), &mut used);
            }
        }
    }

    // Random pass: balanced mixes across the whole spectrum.
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = eig.eigenvalues.len();
    while used < budget {
        if pos.is_empty() || neg.is_empty() {
            if ker.is_empty() {
                return;
            }
            let mut x = DVector::zeros(n);
            for &k in &ker {
                let c: f64 = rng.sample(StandardNormal);
                x += eig.eigenvector(k) * c;
            }
            emit(x, &mut used);
            continue;
        }
        let mut p = DVector::zeros(n);
        let mut p_form = 0.0;
        for &i in &pos {
            let c: f64 = rng.sample(StandardNormal);
            p += eig.eigenvector(i) * c;
            p_form += c * c * eig.eigenvalues[i];
        }
        let mut q = DVector::zeros(n);
        let mut q_form = 0.0;
        for &j in &neg {
            let c: f64 = rng.sample(StandardNormal);
            q += eig.eigenvector(j) * c;
            q_form += c * c * eig.eigenvalues[j].abs();
        }
        if p_form <= 0.0 || q_form <= 0.0 {
            continue;
        }
        let mut x = p / p_form.sqrt() + q / q_form.sqrt();
        for &k in &ker {
            let c: f64 = rng.sample(StandardNormal);
            x += eig.eigenvector(k) * c;
        }
        emit(x, &mut used);
    }
}

/// Samples the null cone of N for a unit x with `xᵀMx < −psd_tol`; returns
/// the most negative violator found, already residual-verified.
///
/// Absence of a violation is not proof: the cone is scanned, not enumerated.
pub fn ns2_sphere_oracle(
    inst: &FinslerInstance,
    samples: usize,
    seed: u64,
    tol: &ToleranceProfile,
) -> Option<Witness> {
    let eig_n = spectral_decompose(inst.n());
    let mut best: Option<(DVector<f64>, f64)> = None;
    scan_null_cone(&eig_n, tol, seed, samples, &mut |x| {
        let quad_n = inst.n().quad_form(&x);
        if quad_n.abs() > tol.zero_tol {
            return;
        }
        let quad_m = inst.m().quad_form(&x);
        if best.as_ref().is_none_or(|(_, b)| quad_m < *b) {
            best = Some((x, quad_m));
        }
    });
    match best {
        Some((x, quad_m)) if quad_m < -tol.psd_tol => {
            let witness = Witness::evaluate(inst, x, WitnessRole::Ns2Violator);
            witness.verify(inst, tol).then_some(witness)
        }
        _ => None,
    }
}

/// What a generated instance is guaranteed to satisfy.
#[derive(Debug, Clone)]
pub enum GroundTruth {
    /// `λ_min(M + alpha_true·N) ≥ 0` by construction.
    Feasible { alpha_true: f64 },
    /// The planted unit vector violates NS3: it lies in `ker N`, is
    /// M-isotropic, and `M·x ≠ 0`. Infeasible by Theorem-necessity.
    InfeasibleNs3 { witness: DVector<f64> },
}

/// A seeded random instance with its construction certificate.
#[derive(Debug, Clone)]
pub struct GeneratedInstance {
    pub inst: FinslerInstance,
    pub truth: GroundTruth,
    pub seed: u64,
}

pub(crate) fn gaussian_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| rng.sample(StandardNormal))
}

fn gaussian_vector(rng: &mut ChaCha8Rng, n: usize) -> DVector<f64> {
    DVector::from_fn(n, |_, _| rng.sample(StandardNormal))
}

pub(crate) fn random_orthogonal(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<f64> {
    let qr = nalgebra::linalg::QR::new(gaussian_matrix(rng, n, n));
    qr.q()
}

pub(crate) fn random_symmetric(rng: &mut ChaCha8Rng, n: usize) -> SymmetricMatrix {
    SymmetricMatrix::symmetric_part(&gaussian_matrix(rng, n, n))
}

/// Draws N of the requested class with a mixed-sign spectrum bounded away
/// from zero on the non-kernel part.
fn draw_n_of_class(
    rng: &mut ChaCha8Rng,
    n: usize,
    class: DefinitenessClass,
) -> Result<SymmetricMatrix, Error> {
    match class {
        DefinitenessClass::Zero => Ok(SymmetricMatrix::zeros(n)),
        DefinitenessClass::PositiveSemidefinite | DefinitenessClass::NegativeSemidefinite => {
            let rank = rng.gen_range(1..=n);
            let g = gaussian_matrix(rng, rank, n);
            let gram = SymmetricMatrix::symmetric_part(&(g.transpose() * &g));
            if class == DefinitenessClass::PositiveSemidefinite {
                Ok(gram)
            } else {
                Ok(SymmetricMatrix::zeros(n).add_scaled(-1.0, &gram))
            }
        }
        DefinitenessClass::Indefinite => {
            if n < 2 {
                return Err(Error::InvalidInput(
                    "an indefinite matrix needs dimension at least 2".into(),
                ));
            }
            let mut spectrum = vec![0.0; n];
            spectrum[0] = rng.gen_range(0.2..2.0);
            spectrum[1] = -rng.gen_range(0.2..2.0);
            for lambda in spectrum.iter_mut().skip(2) {
                *lambda = rng.gen_range(-2.0..2.0);
            }
            let q = random_orthogonal(rng, n);
            let lam = DMatrix::from_diagonal(&DVector::from_vec(spectrum));
            Ok(SymmetricMatrix::symmetric_part(&(&q * lam * q.transpose())))
        }
    }
}

/// Feasible-by-construction instance: `M = P − alpha_true·N` with `P ≻ 0`,
/// so `M + alpha_true·N = P`. The sign of `alpha_true` matches the class.
pub fn gen_feasible_instance(
    n: usize,
    seed: u64,
    n_class: DefinitenessClass,
) -> Result<GeneratedInstance, Error> {
    if n == 0 {
        return Err(Error::InvalidInput("dimension must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_mat = draw_n_of_class(&mut rng, n, n_class)?;
    let alpha_true = match n_class {
        DefinitenessClass::Zero => 0.0,
        DefinitenessClass::PositiveSemidefinite => rng.gen_range(0.5..3.0),
        DefinitenessClass::NegativeSemidefinite => -rng.gen_range(0.5..3.0),
        DefinitenessClass::Indefinite => rng.gen_range(-3.0..3.0),
    };
    let r = gaussian_matrix(&mut rng, n, n);
    let p = SymmetricMatrix::symmetric_part(&(r.transpose() * &r))
        .add_scaled(0.1, &SymmetricMatrix::identity(n));
    let m = p.add_scaled(-alpha_true, &n_mat);
    let inst = FinslerInstance::new(m, n_mat)?;
    Ok(GeneratedInstance { inst, truth: GroundTruth::Feasible { alpha_true }, seed })
}

/// Infeasible-by-construction instance: a planted unit x with `Nx = 0`,
/// `xᵀMx = 0`, `Mx ≠ 0` (the Example-1 pattern: off-diagonal coupling from x
/// to an orthogonal direction).
pub fn gen_ns3_violating_instance(
    n: usize,
    seed: u64,
    n_class: DefinitenessClass,
) -> Result<GeneratedInstance, Error> {
    if n < 2 {
        return Err(Error::InvalidInput("planting an NS3 violator needs dimension at least 2".into()));
    }
    match n_class {
        DefinitenessClass::Zero => {
            // With N = 0 the planted violator forces M indefinite and the
            // kernel restriction of M indefinite with it, so the generator's
            // contract (check_ns3 = Violated) cannot be met.
            return Err(Error::InvalidInput(
                "the zero class admits no NS3-violating instance with a decisive kernel restriction".into(),
            ));
        }
        DefinitenessClass::Indefinite if n < 3 => {
            return Err(Error::InvalidInput(
                "an indefinite N with a nontrivial kernel needs dimension at least 3".into(),
            ));
        }
        _ => {}
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x = {
        let g = gaussian_vector(&mut rng, n);
        let norm = g.norm();
        g / norm
    };
    // Orthonormal complement of x, rotated by a random orthogonal factor.
    let complement = kernel_basis(&DMatrix::from_fn(1, n, |_, j| x[j]), &ToleranceProfile::default());
    let w_basis = &complement * random_orthogonal(&mut rng, n - 1);

    let mut spectrum: Vec<f64> = vec![0.0; n - 1];
    for lambda in spectrum.iter_mut() {
        let magnitude = rng.gen_range(0.3..2.0);
        *lambda = match n_class {
            DefinitenessClass::PositiveSemidefinite => magnitude,
            DefinitenessClass::NegativeSemidefinite => -magnitude,
            DefinitenessClass::Indefinite => {
                if rng.gen::<bool>() {
                    magnitude
                } else {
                    -magnitude
                }
            }
            DefinitenessClass::Zero => unreachable!(),
        };
    }
    if n_class == DefinitenessClass::Indefinite {
        spectrum[0] = spectrum[0].abs();
        spectrum[1] = -spectrum[1].abs();
    }
    let lam = DMatrix::from_diagonal(&DVector::from_vec(spectrum));
    let n_mat = SymmetricMatrix::symmetric_part(&(&w_basis * lam * w_basis.transpose()));

    let w = {
        let c = gaussian_vector(&mut rng, n - 1);
        let v = &w_basis * c;
        let norm = v.norm();
        v / norm
    };
    let coupling = rng.gen_range(0.5..2.0);
    let s = random_symmetric(&mut rng, n - 1);
    let background = w_basis.clone() * s.as_matrix() * w_basis.transpose();
    let m_mat = SymmetricMatrix::symmetric_part(
        &((&x * w.transpose() + &w * x.transpose()) * coupling + background),
    );
    let inst = FinslerInstance::new(m_mat, n_mat)?;
    Ok(GeneratedInstance { inst, truth: GroundTruth::InfeasibleNs3 { witness: x }, seed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn tol() -> ToleranceProfile {
        ToleranceProfile::default()
    }

    fn example_1() -> FinslerInstance {
        FinslerInstance::new(
            SymmetricMatrix::from_diagonal(&[1.0, -1.0]),
            SymmetricMatrix::new(2, &[1.0, 1.0, 1.0, 1.0]).unwrap(),
        )
        .unwrap()
    }

    fn example_2() -> FinslerInstance {
        FinslerInstance::new(
            SymmetricMatrix::from_diagonal(&[1.0, -1.0]),
            SymmetricMatrix::from_diagonal(&[0.0, 1.0]),
        )
        .unwrap()
    }

    #[test]
    fn linesearch_example_1_is_a_boundary_case() {
        // λ_min(M + αN) = α − √(α²+1): negative everywhere, sup 0 at infinity.
        // The bracket expansion must exhaust, and the best value stalls where
        // the profile's growth sinks under the noise floor, a few orders
        // above −1e-7. It must never go positive.
        let result = alpha_linesearch(&example_1(), &tol(), DEFAULT_SEARCH_BUDGET);
        assert!(result.exhausted);
        assert!(result.value <= 0.0);
        assert!(result.value > -1e-4);
    }

    #[test]
    fn linesearch_example_1_matches_closed_form() {
        let inst = example_1();
        for alpha in [0.0, 1.0, 10.0] {
            let computed = spectral_decompose(&inst.combine(alpha)).lambda_min();
            let expected = alpha - (alpha * alpha + 1.0).sqrt();
            assert_abs_diff_eq!(computed, expected, epsilon = 1e-9);
        }
    }

    #[test]
    fn linesearch_example_2_clips_the_plateau() {
        // λ_min(diag(1, α−1)) = min(1, α−1): plateau [2, ∞) clipped at its
        // left edge. The profile never turns down on the right, so the
        // expansion exhausts; the plateau edge survives via the tie rule.
        let result = alpha_linesearch(&example_2(), &tol(), DEFAULT_SEARCH_BUDGET);
        assert!(result.exhausted);
        assert_abs_diff_eq!(result.value, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(result.alpha_star, 2.0, epsilon = 1e-9);
    }

    #[test]
    fn linesearch_constant_profile() {
        let inst = FinslerInstance::new(
            SymmetricMatrix::from_diagonal(&[-1.0, -1.0]),
            SymmetricMatrix::zeros(2),
        )
        .unwrap();
        let result = alpha_linesearch(&inst, &tol(), DEFAULT_SEARCH_BUDGET);
        assert!(result.exhausted);
        assert_abs_diff_eq!(result.value, -1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(result.alpha_star, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn linesearch_interior_maximum() {
        // diag(1+α, −1−α): unique maximizer α = −1, value 0.
        let inst = FinslerInstance::new(
            SymmetricMatrix::from_diagonal(&[1.0, -1.0]),
            SymmetricMatrix::from_diagonal(&[1.0, -1.0]),
        )
        .unwrap();
        let result = alpha_linesearch(&inst, &tol(), DEFAULT_SEARCH_BUDGET);
        assert!(!result.exhausted);
        assert_abs_diff_eq!(result.alpha_star, -1.0, epsilon = 1e-8);
        assert!(result.value.abs() < 1e-9);
        assert!(result.bracket.0 <= result.alpha_star && result.alpha_star <= result.bracket.1);
    }

    #[test]
    fn sphere_oracle_example_1_finds_nothing() {
        assert!(ns2_sphere_oracle(&example_1(), 1000, 7, &tol()).is_none());
    }

    #[test]
    fn sphere_oracle_finds_cone_violation() {
        // Cone of N = diag(1,−1) is x₁ = ±x₂; M = −I gives xᵀMx = −1 there.
        let inst = FinslerInstance::new(
            SymmetricMatrix::from_diagonal(&[-1.0, -1.0]),
            SymmetricMatrix::from_diagonal(&[1.0, -1.0]),
        )
        .unwrap();
        let witness = ns2_sphere_oracle(&inst, 100, 7, &tol()).expect("violation on the cone");
        assert_abs_diff_eq!(witness.quad_m, -1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(witness.x[0].abs(), witness.x[1].abs(), epsilon = 1e-9);
    }

    #[test]
    fn sphere_oracle_trivial_cone() {
        let inst = FinslerInstance::new(
            SymmetricMatrix::from_diagonal(&[-1.0, -1.0]),
            SymmetricMatrix::identity(2),
        )
        .unwrap();
        assert!(ns2_sphere_oracle(&inst, 100, 7, &tol()).is_none());
    }

    #[test]
    fn generated_feasible_truth_holds() {
        for (seed, class) in [
            (1, DefinitenessClass::PositiveSemidefinite),
            (2, DefinitenessClass::NegativeSemidefinite),
            (3, DefinitenessClass::Indefinite),
            (4, DefinitenessClass::Zero),
        ] {
            let gen = gen_feasible_instance(5, seed, class).unwrap();
            let GroundTruth::Feasible { alpha_true } = gen.truth else {
                panic!("feasible generator must report alpha_true")
            };
            let lam = spectral_decompose(&gen.inst.combine(alpha_true)).lambda_min();
            assert!(lam >= 0.0, "λ_min = {lam} at alpha_true for seed {seed}");
        }
    }

    #[test]
    fn generated_ns3_violator_plants_residuals() {
        for class in [
            DefinitenessClass::PositiveSemidefinite,
            DefinitenessClass::NegativeSemidefinite,
            DefinitenessClass::Indefinite,
        ] {
            let gen = gen_ns3_violating_instance(4, 11, class).unwrap();
            let GroundTruth::InfeasibleNs3 { witness } = &gen.truth else {
                panic!("violating generator must plant a witness")
            };
            assert!((gen.inst.n().as_matrix() * witness).norm() <= 1e-12);
            assert!(gen.inst.m().quad_form(witness).abs() <= 1e-12);
            assert!((gen.inst.m().as_matrix() * witness).norm() >= 0.5);
        }
    }

    #[test]
    fn generators_are_deterministic() {
        let a = gen_feasible_instance(6, 42, DefinitenessClass::Indefinite).unwrap();
        let b = gen_feasible_instance(6, 42, DefinitenessClass::Indefinite).unwrap();
        assert_eq!(a.inst.m().as_matrix(), b.inst.m().as_matrix());
        assert_eq!(a.inst.n().as_matrix(), b.inst.n().as_matrix());
        let c = gen_ns3_violating_instance(5, 42, DefinitenessClass::Indefinite).unwrap();
        let d = gen_ns3_violating_instance(5, 42, DefinitenessClass::Indefinite).unwrap();
        assert_eq!(c.inst.m().as_matrix(), d.inst.m().as_matrix());
    }

    #[test]
    fn generator_rejects_impossible_classes() {
        assert!(gen_ns3_violating_instance(2, 1, DefinitenessClass::Indefinite).is_err());
        assert!(gen_ns3_violating_instance(4, 1, DefinitenessClass::Zero).is_err());
        assert!(gen_feasible_instance(1, 1, DefinitenessClass::Indefinite).is_err());
        assert!(gen_feasible_instance(0, 1, DefinitenessClass::Zero).is_err());
    }

    #[test]
    fn scalar_feasible_instance() {
        let gen = gen_feasible_instance(1, 9, DefinitenessClass::PositiveSemidefinite).unwrap();
        let GroundTruth::Feasible { alpha_true } = gen.truth else { unreachable!() };
        assert!(gen.inst.combine(alpha_true).as_matrix()[(0, 0)] >= 0.0);
    }
}
