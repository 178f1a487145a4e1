//! Tolerance policy shared by every decision in the crate.
//!
//! All semidefiniteness verdicts are relative to an explicit [`ToleranceProfile`];
//! nothing in the crate compares an eigenvalue against a bare literal.

use crate::error::Error;

/// Default relative threshold on singular values when computing numerical rank.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;
/// Default floor on eigenvalues for `⪰ 0` decisions.
pub const DEFAULT_PSD_TOL: f64 = 1e-9;
/// Default threshold for treating a residual vector or matrix as zero.
pub const DEFAULT_ZERO_TOL: f64 = 1e-9;
/// Default minimum `λ_min` needed to call a matrix strictly positive definite.
pub const DEFAULT_STRICT_MARGIN: f64 = 1e-8;

/// Thresholds governing rank, semidefiniteness, and residual decisions.
///
/// Double-precision symmetric eigensolvers are accurate to roughly
/// `1e-14 · ‖A‖` on the matrix sizes this crate targets, so the defaults
/// leave about two orders of magnitude of headroom. `strict_margin` must
/// exceed `psd_tol`: a matrix declared strictly definite must in particular
/// clear the non-strict floor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceProfile {
    /// Relative threshold for treating singular values as zero.
    pub rank_tol: f64,
    /// Absolute floor (scaled by spectrum size) on eigenvalues for `⪰ 0` decisions.
    pub psd_tol: f64,
    /// Threshold for treating a vector/matrix residual as zero.
    pub zero_tol: f64,
    /// Minimum `λ_min` to declare strict `≻ 0`.
    pub strict_margin: f64,
}

impl ToleranceProfile {
    pub fn new(rank_tol: f64, psd_tol: f64, zero_tol: f64, strict_margin: f64) -> Result<Self, Error> {
        let profile = Self { rank_tol, psd_tol, zero_tol, strict_margin };
        profile.validate()?;
        Ok(profile)
    }

    pub fn validate(&self) -> Result<(), Error> {
        let fields = [
            ("rank_tol", self.rank_tol),
            ("psd_tol", self.psd_tol),
            ("zero_tol", self.zero_tol),
            ("strict_margin", self.strict_margin),
        ];
        for (name, value) in fields {
            if !(value > 0.0) || !value.is_finite() {
                return Err(Error::InvalidInput(format!("{name} must be strictly positive, got {value}")));
            }
        }
        if self.strict_margin <= self.psd_tol {
            return Err(Error::InvalidInput(format!(
                "strict_margin ({}) must exceed psd_tol ({})",
                self.strict_margin, self.psd_tol
            )));
        }
        Ok(())
    }
}

impl Default for ToleranceProfile {
    fn default() -> Self {
        Self {
            rank_tol: DEFAULT_RANK_TOL,
            psd_tol: DEFAULT_PSD_TOL,
            zero_tol: DEFAULT_ZERO_TOL,
            strict_margin: DEFAULT_STRICT_MARGIN,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_profile_is_valid() {
        ToleranceProfile::default().validate().unwrap();
    }

    #[test]
    fn strict_margin_dominates_psd_tol() {
        let t = ToleranceProfile::default();
        assert!(t.strict_margin > t.psd_tol);
    }

    #[test]
    fn rejects_nonpositive_fields() {
        assert!(ToleranceProfile::new(0.0, 1e-9, 1e-9, 1e-8).is_err());
        assert!(ToleranceProfile::new(1e-10, -1e-9, 1e-9, 1e-8).is_err());
        assert!(ToleranceProfile::new(1e-10, 1e-9, f64::NAN, 1e-8).is_err());
    }

    #[test]
    fn rejects_inverted_margins() {
        assert!(ToleranceProfile::new(1e-10, 1e-8, 1e-9, 1e-9).is_err());
    }
}
