//! Cross-term construction: from an NS3 violator to an NS2 violator.
//!
//! Given indefinite N and a unit x with `Nx = 0`, `xᵀMx = 0`, `z = Mx ≠ 0`,
//! build y on the null cone of N with `yᵀz > 0`, then step from x against
//! the gradient: `g(t) = (x + ty)ᵀM(x + ty) = xᵀMx + 2t·yᵀz + t²·yᵀMy` turns
//! strictly negative at a small t of the opposite sign to `yᵀz`. The
//! normalized step is a residual-checked NS2 violation, certifying that no
//! multiplier α exists.
//!
//! y comes from z itself when z already sits on the cone, otherwise from
//! `y = z + t·d` with d an N-eigenvector whose eigenvalue sign opposes
//! `zᵀNz0`; the quadratic `f(t) = (z+td)ᵀN(z+td)` has real roots of both
//! signs, and the root whose sign matches `dᵀz` keeps `yᵀz ≥ ‖z‖²`. Every
//! candidate is verified before it is returned; failures fall through a
//! deterministic ladder and then seeded random cone directions.

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::Error;
use crate::linalg::{definiteness_class, spectral_decompose, DefinitenessClass};
use crate::tolerance::ToleranceProfile;

use super::{FinslerInstance, Witness, WitnessRole};

const RANDOM_DIRECTION_BUDGET: usize = 200;

/// Builds a verified NS2-violating witness from an NS3 violator x.
///
/// `seed` drives only the random fallback directions; the primary
/// construction is deterministic.
pub fn construct_cross_witness(
    inst: &FinslerInstance,
    x: &DVector<f64>,
    tol: &ToleranceProfile,
    seed: u64,
) -> Result<Witness, Error> {
    if x.len() != inst.dim() {
        return Err(Error::DimensionMismatch(format!(
            "witness seed has length {} for a {}-dimensional instance",
            x.len(),
            inst.dim()
        )));
    }
    let norm = x.norm();
    if !norm.is_finite() || norm == 0.0 {
        return Err(Error::InvalidInput("witness seed must be a nonzero finite vector".into()));
    }
    let x = x / norm;
    if definiteness_class(inst.n(), tol) != DefinitenessClass::Indefinite {
        return Err(Error::PreconditionViolated(
            "the cross-term construction needs an indefinite N".into(),
        ));
    }
    let m_scale = 1.0 + inst.m().max_abs();
    let n_scale = 1.0 + inst.n().max_abs();
    if (inst.n().as_matrix() * &x).norm() > tol.zero_tol * n_scale {
        return Err(Error::PreconditionViolated("x is not in the kernel of N".into()));
    }
    if inst.m().quad_form(&x).abs() > tol.zero_tol * m_scale {
        return Err(Error::PreconditionViolated("x is not M-isotropic".into()));
    }
    let z = inst.m().as_matrix() * &x;
    if z.norm() <= tol.psd_tol * m_scale {
        return Err(Error::PreconditionViolated("Mx vanishes: x does not violate the condition".into()));
    }

    let c = inst.n().quad_form(&z);
    if c.abs() <= tol.zero_tol * n_scale * z.norm_squared() {
        // z is already on the cone
        if let Some(w) = try_step(inst, &x, &z, &z, tol) {
            return Ok(w);
        }
    }

    let eig_n = spectral_decompose(inst.n());
    let threshold = tol.psd_tol * eig_n.scale();
    // Eigenvalues sorted ascending: walk the group of sign opposite to c,
    // strongest magnitude first.
    let dim = inst.dim();
    let opposite: Vec<usize> = if c > 0.0 {
        (0..dim).take_while(|&i| eig_n.eigenvalues[i] < -threshold).collect()
    } else {
        (0..dim).rev().take_while(|&i| eig_n.eigenvalues[i] > threshold).collect()
    };
    for &i in &opposite {
        let d = eig_n.eigenvector(i);
        for y in root_candidates(inst, &z, &d, c) {
            if let Some(w) = try_step(inst, &x, &y, &z, tol) {
                return Ok(w);
            }
        }
    }

    // Randomized directions within the opposite-sign eigenspace keep
    // dᵀNd bounded away from zero with the right sign.
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RANDOM_DIRECTION_BUDGET {
        if opposite.is_empty() {
            break;
        }
        let mut d = DVector::zeros(dim);
        for &i in &opposite {
            let w: f64 = rng.sample(StandardNormal);
            d += eig_n.eigenvector(i) * w;
        }
        let d_norm = d.norm();
        if d_norm < 1e-12 {
            continue;
        }
        d /= d_norm;
        for y in root_candidates(inst, &z, &d, c) {
            if let Some(w) = try_step(inst, &x, &y, &z, tol) {
                return Ok(w);
            }
        }
    }

    Err(Error::WitnessSearchFailed(
        "no verified cross-term violator within the search budget".into(),
    ))
}

/// Both cone points `z + t·d` along direction d, the sign-matched root first.
fn root_candidates(
    inst: &FinslerInstance,
    z: &DVector<f64>,
    d: &DVector<f64>,
    c: f64,
) -> Vec<DVector<f64>> {
    let a = inst.n().quad_form(d);
    let b_half = d.dot(&(inst.n().as_matrix() * z));
    let disc = b_half * b_half - a * c;
    if disc <= 0.0 || a == 0.0 {
        return Vec::new();
    }
    let s = disc.sqrt();
    let q = -(b_half + b_half.signum() * s);
    let (r1, r2) = (q / a, c / q);
    let (t_pos, t_neg) = (r1.max(r2), r1.min(r2));
    // t with the sign of dᵀz keeps yᵀz = ‖z‖² + t·dᵀz ≥ ‖z‖²
    let (first, second) = if d.dot(z) >= 0.0 { (t_pos, t_neg) } else { (t_neg, t_pos) };
    vec![z + d * first, z + d * second]
}

/// Steps from x along y where the cross term makes `xᵀMx` strictly negative,
/// trying the proof's small step first and escalating if verification fails.
fn try_step(
    inst: &FinslerInstance,
    x: &DVector<f64>,
    y: &DVector<f64>,
    z: &DVector<f64>,
    tol: &ToleranceProfile,
) -> Option<Witness> {
    let b_g = y.dot(z);
    if b_g.abs() <= 1e-12 * (1.0 + y.norm() * z.norm()) {
        return None;
    }
    let a_g = inst.m().quad_form(y);
    let t0 = -b_g.signum() * (b_g.abs() / (1.0 + a_g.abs())).min(1.0);
    let mut steps = vec![t0];
    if a_g > 0.0 {
        // exact minimizer of g
        steps.push(-b_g / a_g);
    }
    for k in 1..=10 {
        steps.push(t0 * f64::powi(2.0, k));
    }
    for t in steps {
        let candidate = Witness::evaluate(inst, x + y * t, WitnessRole::CrossTermViolator);
        if candidate.verify(inst, tol) {
            return Some(candidate);
        }
    }
    None
}
