//! The `(N, s, p)` parameter triple and its derived exponents.

use crate::error::{invalid, Result};

/// Half-width of the excluded band around `p = N/s`.
pub const CRITICAL_BAND: f64 = 1e-12;

/// Validated Hardy parameters.
///
/// `dim` is the space dimension `N`, `s` the fractional order and `p` the
/// integrability exponent. The ground-state exponent `alpha = (N - ps)/p`
/// is never zero; `p_star = Np/(N - ps)` exists only below the critical
/// exponent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HardyParams {
    dim: u32,
    s: f64,
    p: f64,
    alpha: f64,
    p_star: Option<f64>,
}

impl HardyParams {
    pub fn new(dim: u32, s: f64, p: f64) -> Result<Self> {
        if dim == 0 {
            return invalid("dimension N must be at least 1");
        }
        if !(s > 0.0 && s < 1.0) {
            return invalid(format!("s must lie in (0, 1), got {s}"));
        }
        if !(p >= 1.0) || !p.is_finite() {
            return invalid(format!("p must be a finite real >= 1, got {p}"));
        }
        let n = dim as f64;
        let gap = n - p * s;
        if gap.abs() < CRITICAL_BAND {
            return invalid(format!("p = N/s is excluded (N = {dim}, s = {s}, p = {p})"));
        }
        let alpha = gap / p;
        let p_star = (gap > 0.0).then(|| n * p / gap);
        Ok(HardyParams {
            dim,
            s,
            p,
            alpha,
            p_star,
        })
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    /// Dimension as a float.
    pub fn n(&self) -> f64 {
        self.dim as f64
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// `(N - ps)/p`.
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Sobolev exponent `Np/(N - ps)`, absent when `N < ps`.
    pub fn p_star(&self) -> Option<f64> {
        self.p_star
    }

    /// `p * s`.
    pub fn ps(&self) -> f64 {
        self.p * self.s
    }

    /// Whether `N > ps`, i.e. the ground state decays at infinity.
    pub fn subcritical(&self) -> bool {
        self.alpha > 0.0
    }

    /// `p(1 - s)`: the exponent governing the diagonal behaviour of the
    /// symmetrised integrands.
    pub fn kappa(&self) -> f64 {
        self.p * (1.0 - self.s)
    }
}

/// Free-function constructor.
pub fn make_params(dim: u32, s: f64, p: f64) -> Result<HardyParams> {
    HardyParams::new(dim, s, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::HardyError;
    use proptest::prelude::*;

    #[test]
    fn derived_exponents() {
        let hp = make_params(1, 0.5, 1.0).unwrap();
        assert_eq!(hp.alpha(), 0.5);
        assert_eq!(hp.p_star(), Some(2.0));

        let hp = make_params(1, 0.75, 2.0).unwrap();
        assert_eq!(hp.alpha(), -0.25);
        assert_eq!(hp.p_star(), None);
    }

    #[test]
    fn rejects_critical_and_out_of_range() {
        assert!(matches!(
            make_params(1, 0.5, 2.0),
            Err(HardyError::InvalidParams(_))
        ));
        assert!(make_params(1, 0.0, 1.5).is_err());
        assert!(make_params(1, 1.0, 1.5).is_err());
        assert!(make_params(2, 0.5, 0.9).is_err());
        assert!(make_params(0, 0.5, 1.0).is_err());
        assert!(make_params(2, 0.5, f64::NAN).is_err());
    }

    proptest! {
        #[test]
        fn alpha_identity_and_sign(dim in 1u32..6, s in 0.01f64..0.99, p in 1.0f64..8.0) {
            prop_assume!((dim as f64 - p * s).abs() > 1e-9);
            let hp = make_params(dim, s, p).unwrap();
            let n = dim as f64;
            prop_assert!((hp.alpha() * p + p * s - n).abs() < 1e-12 * n.max(p * s));
            prop_assert_eq!(hp.alpha() > 0.0, n > p * s);
            if let Some(ps) = hp.p_star() {
                prop_assert!(ps > p);
            }
        }
    }
}
