//! Elementary convexity inequalities for scalars and vectors.
//!
//! The residuals below are the differences "left side minus right side" of
//! the pointwise inequalities behind the ground-state representation. They
//! are all nonnegative.

use num_complex::Complex64;

use crate::constants::remainder_constant;
use crate::error::{invalid, HardyError, Result};

pub use crate::constants::boundary_profile;

/// A complex scalar.
pub type ComplexScalar = Complex64;

fn check_t(t: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&t) {
        return invalid(format!("t must lie in [0, 1], got {t}"));
    }
    Ok(())
}

/// `|a - t|^p - (1-t)^{p-1} (|a|^p - t)`.
pub fn residual_numbers(a: ComplexScalar, t: f64, p: f64) -> Result<f64> {
    check_t(t)?;
    if !(p >= 1.0) {
        return invalid(format!("p must be >= 1, got {p}"));
    }
    Ok(raw_residual(a, t, p))
}

fn raw_residual(a: ComplexScalar, t: f64, p: f64) -> f64 {
    (a - t).norm().powf(p) - (1.0 - t).powf(p - 1.0) * (a.norm().powf(p) - t)
}

/// [`residual_numbers`] minus `c_p t^{p/2} |a - 1|^p`.
pub fn residual_numbers_improved(a: ComplexScalar, t: f64, p: f64) -> Result<f64> {
    check_t(t)?;
    let cp = remainder_constant(p)?;
    if p == 2.0 {
        // |a-t|² - (1-t)(|a|²-t) - t|a-1|² expands to 0 term by term.
        return Ok(0.0);
    }
    Ok(raw_residual(a, t, p) - cp * t.powf(0.5 * p) * (a - 1.0).norm().powf(p))
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// `|a+b|^p - |a|^p - p|a|^{p-2}<a,b> - [c_p |b|^p]` for real vectors.
///
/// The cross term is taken as 0 at `a = 0`.
pub fn residual_convexity(a: &[f64], b: &[f64], p: f64, with_remainder: bool) -> Result<f64> {
    if a.len() != b.len() {
        return Err(HardyError::DimensionMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    if !(p >= 1.0) {
        return invalid(format!("p must be >= 1, got {p}"));
    }
    let cp = if with_remainder {
        remainder_constant(p)?
    } else {
        0.0
    };
    let nb = norm(b);
    if p == 2.0 {
        return Ok(nb * nb * (1.0 - cp));
    }
    let na = norm(a);
    let sum: Vec<f64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
    let cross = if na == 0.0 {
        0.0
    } else {
        p * na.powf(p - 2.0) * dot(a, b)
    };
    Ok(norm(&sum).powf(p) - na.powf(p) - cross - cp * nb.powf(p))
}
