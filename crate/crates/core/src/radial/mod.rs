//! Radial functions: seminorms, Rayleigh quotients, trial functions and the
//! remainder and isoperimetric checks.

mod engine;
mod function;

pub use engine::{PairPoint, RadialContext};
pub use function::{Piece, RadialPiecewisePower};

use crate::constants::{hardy_constant, remainder_constant};
use crate::error::{invalid, HardyError, Result};
use crate::exec::Execution;
use crate::numerics::{sphere_area, Endpoint, QuadConfig, QuadResult};
use crate::params::HardyParams;

/// Outer tolerance of the radial double integrals; the inner one is ten
/// times tighter.
pub const RADIAL_REL_TOL: f64 = 1e-7;

/// Tolerance used for the sharp constant inside radial checks.
const CONSTANT_TOL: f64 = 1e-11;

/// Fractional seminorm `∬ |u(x)-u(y)|^p |x-y|^{-N-ps} dx dy` of a radial `u`.
pub fn radial_energy(
    params: &HardyParams,
    u: &RadialPiecewisePower,
    rel_tol: f64,
) -> Result<QuadResult> {
    RadialContext::new(params, rel_tol)?.energy(u)
}

/// `∫ |u(x)|^p |x|^{-ps} dx`.
pub fn weighted_norm(
    params: &HardyParams,
    u: &RadialPiecewisePower,
    rel_tol: f64,
) -> Result<QuadResult> {
    RadialContext::new(params, rel_tol)?.weighted_norm(u)
}

fn quotient(ctx: &RadialContext, u: &RadialPiecewisePower) -> Result<f64> {
    let denom = ctx.weighted_norm(u)?.value;
    if denom == 0.0 {
        return Err(HardyError::ZeroDenominator);
    }
    Ok(ctx.energy(u)?.value / denom)
}

/// Energy divided by the weighted norm.
pub fn rayleigh_quotient(params: &HardyParams, u: &RadialPiecewisePower) -> Result<f64> {
    quotient(&RadialContext::new(params, RADIAL_REL_TOL)?, u)
}

impl RadialContext {
    /// Energy divided by the weighted norm.
    pub fn rayleigh_quotient(&self, u: &RadialPiecewisePower) -> Result<f64> {
        quotient(self, u)
    }
}

/// Trial functions approximating the ground state `|x|^{-α}`.
///
/// For `N > ps` (`m = None`):
/// `1 - n^{-α}` on `[0, 1)`, `r^{-α} - n^{-α}` on `[1, n)`, 0 beyond.
/// For `N < ps` (`m = Some(m)`, `m >= 2`):
/// 0 on `[0, 1/n)`, `r^{-α} - n^{α}` on `[1/n, 1)`, `1 - n^{α}` on `[1, m)`,
/// then a linear ramp down to 0 at `2m`.
pub fn trial_function(
    params: &HardyParams,
    n: u64,
    m: Option<u64>,
) -> Result<RadialPiecewisePower> {
    if n < 2 {
        return invalid(format!("trial function needs n >= 2, got {n}"));
    }
    let a = params.alpha();
    let nf = n as f64;
    match (params.subcritical(), m) {
        (true, None) => {
            let tail = nf.powf(-a);
            RadialPiecewisePower::new(
                vec![0.0, 1.0, nf],
                vec![
                    Piece::constant(1.0 - tail),
                    Piece {
                        c: 1.0,
                        beta: a,
                        d: -tail,
                    },
                ],
            )
        }
        (false, Some(m)) => {
            if m < 2 {
                return invalid(format!("cutoff radius m must be >= 2, got {m}"));
            }
            let mf = m as f64;
            let floor = nf.powf(a);
            let plateau = 1.0 - floor;
            RadialPiecewisePower::new(
                vec![0.0, 1.0 / nf, 1.0, mf, 2.0 * mf],
                vec![
                    Piece::ZERO,
                    Piece {
                        c: 1.0,
                        beta: a,
                        d: -floor,
                    },
                    Piece::constant(plateau),
                    Piece {
                        c: -plateau / mf,
                        beta: -1.0,
                        d: 2.0 * plateau,
                    },
                ],
            )
        }
        (true, Some(_)) => invalid("cutoff m applies only when N < ps"),
        (false, None) => invalid("N < ps requires a cutoff radius m"),
    }
}

/// One point of a sharpness scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SharpnessPoint {
    pub n: u64,
    pub ratio: f64,
    /// `ratio - C`.
    pub gap: f64,
}

/// Rayleigh quotients of the trial functions for each `n`, with `m = 10 n`
/// when `N < ps`.
pub fn sharpness_scan(params: &HardyParams, n_list: &[u64]) -> Result<Vec<SharpnessPoint>> {
    sharpness_scan_with(params, n_list, Execution::Parallel)
}

pub fn sharpness_scan_with(
    params: &HardyParams,
    n_list: &[u64],
    exec: Execution,
) -> Result<Vec<SharpnessPoint>> {
    if n_list.windows(2).any(|w| w[0] >= w[1]) {
        return invalid("n_list must be strictly increasing");
    }
    let ctx = RadialContext::new(params, RADIAL_REL_TOL)?;
    let c = hardy_constant(params, CONSTANT_TOL)?.value;
    exec.map(n_list, |&n| {
        let m = (!params.subcritical()).then_some(10 * n);
        let ratio = ctx.rayleigh_quotient(&trial_function(params, n, m)?)?;
        Ok(SharpnessPoint {
            n,
            ratio,
            gap: ratio - c,
        })
    })
    .into_iter()
    .collect()
}

/// `(b + delta)^k - b^k` for `b, delta >= 0`.
fn pow_gap(b: f64, delta: f64, k: f64) -> f64 {
    let delta = delta.max(0.0);
    if b <= 0.0 {
        return delta.powf(k);
    }
    b.powf(k) * (k * (delta / b).ln_1p()).exp_m1()
}

/// Error terms in the trial-function computation for `N > ps`.
///
/// `energy + 2 r0 = C (weighted_norm + r1 + r2)` holds exactly; `r0`, `r1`
/// and `r2` are nonnegative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SharpnessDiagnostics {
    pub n: u64,
    pub energy: f64,
    pub weighted_norm: f64,
    pub r0: f64,
    pub r1: f64,
    pub r2: f64,
    pub constant: f64,
}

impl SharpnessDiagnostics {
    /// `|E + 2R0 - C(W + R1 + R2)| / (E + 2R0)`.
    pub fn identity_defect(&self) -> f64 {
        let lhs = self.energy + 2.0 * self.r0;
        (lhs - self.constant * (self.weighted_norm + self.r1 + self.r2)).abs() / lhs
    }
}

/// Compute `R_0`, `R_1`, `R_2` for the trial function `u_n` by direct
/// quadrature of their defining integrals.
pub fn sharpness_diagnostics(params: &HardyParams, n: u64) -> Result<SharpnessDiagnostics> {
    if !params.subcritical() {
        return invalid("sharpness diagnostics are defined for N > ps");
    }
    let ctx = RadialContext::new(params, RADIAL_REL_TOL)?;
    let u = trial_function(params, n, None)?;
    let p = params.p();
    let a = params.alpha();
    let nf = n as f64;
    let floor = nf.powf(-a);
    let omega = |r: f64| if r.is_finite() { r.powf(-a) } else { 0.0 };
    // ω(r) - ω(c) for r = c - below and ω(c) - ω(r) for r = c + above,
    // from the exact distance to c when r is close to it
    let excess = |c: f64, r: f64, below: f64| {
        if below > 0.5 * c {
            omega(r) - omega(c)
        } else {
            omega(c) * (-a * (-below / c).ln_1p()).exp_m1()
        }
    };
    let deficit = |c: f64, r: f64, above: f64| {
        if above > c {
            omega(c) - omega(r)
        } else {
            -omega(c) * (-a * (above / c).ln_1p()).exp_m1()
        }
    };
    let k = p - 1.0;

    // |x| < 1 has ω(x)^{p-1} ~ |x|^{-α(p-1)}
    let origin_exp = params.n() - a * k;
    let t1 = ctx.pair_integral((0.0, 1.0), (1.0, nf), origin_exp, |pt| {
        let b = deficit(1.0, pt.y, pt.y_above_lo);
        b * pow_gap(b, excess(1.0, pt.x, pt.x_below_hi), k)
    })?;
    let t2 = ctx.pair_integral((1.0, nf), (nf, f64::INFINITY), 1.0, |pt| {
        let b = excess(nf, pt.x, pt.x_below_hi);
        b * pow_gap(b, deficit(nf, pt.y, pt.y_above_lo), k)
    })?;
    let t3 = ctx.pair_integral((0.0, 1.0), (nf, f64::INFINITY), origin_exp, |pt| {
        let b = 1.0 - floor;
        b * pow_gap(
            b,
            excess(1.0, pt.x, pt.x_below_hi) + deficit(nf, pt.y, pt.y_above_lo),
            k,
        )
    })?;

    let expo = params.n() - 1.0 - params.ps();
    let sphere = sphere_area(params.dim());
    let cfg = QuadConfig::new(1e-10, 0.0);
    let r1 = engine::integrate_chain(
        |r, _, below| {
            let b = 1.0 - floor;
            Ok(b * pow_gap(b, excess(1.0, r, below) + floor, k) * r.powf(expo))
        },
        &[0.0, 1.0],
        Endpoint::power_if_singular(a),
        Endpoint::Regular,
        &cfg,
    )?;
    let r2 = engine::integrate_chain(
        |r, _, below| {
            let b = excess(nf, r, below);
            Ok(b * pow_gap(b, floor, k) * r.powf(expo))
        },
        &engine::geometric_points(1.0, nf, 1.0),
        Endpoint::Regular,
        Endpoint::Regular,
        &cfg,
    )?;

    Ok(SharpnessDiagnostics {
        n,
        energy: ctx.energy(&u)?.value,
        weighted_norm: ctx.weighted_norm(&u)?.value,
        r0: t1.value + t2.value + t3.value,
        r1: sphere * r1.value,
        r2: sphere * r2.value,
        constant: hardy_constant(params, CONSTANT_TOL)?.value,
    })
}

/// Both sides of the remainder inequality for a radial `u`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RemainderCheck {
    /// `E[u] - C ∫ |u|^p |x|^{-ps}`.
    pub lhs_gap: f64,
    /// `c_p ∬ |v(x)-v(y)|^p |x-y|^{-N-ps} (|x||y|)^{-(N-ps)/2}`, `v = |x|^α u`.
    pub remainder: f64,
    pub energy: f64,
    pub weighted_norm: f64,
}

/// Evaluate the remainder inequality for `p >= 2`.
pub fn remainder_check(params: &HardyParams, u: &RadialPiecewisePower) -> Result<RemainderCheck> {
    let cp = remainder_constant(params.p())?;
    let ctx = RadialContext::new(params, RADIAL_REL_TOL)?;
    let c = hardy_constant(params, CONSTANT_TOL)?.value;
    let energy = ctx.energy(u)?.value;
    let norm = ctx.weighted_norm(u)?.value;
    let remainder = cp * ctx.ground_state_energy(u)?.value;
    Ok(RemainderCheck {
        lhs_gap: energy - c * norm,
        remainder,
        energy,
        weighted_norm: norm,
    })
}

/// Both sides of the fractional isoperimetric inequality for a ball.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsoperimetricCheck {
    /// `|B_R|^{(N-s)/N}`.
    pub lhs: f64,
    /// `(2(N-s) / (N C)) (N/|S^{N-1}|)^{s/N} ∬_{B_R × B_R^c} |x-y|^{-N-s}`.
    pub rhs: f64,
}

impl IsoperimetricCheck {
    pub fn relative_gap(&self) -> f64 {
        (self.lhs - self.rhs).abs() / self.lhs
    }
}

/// Isoperimetric comparison for the ball of radius `radius`, `p = 1`.
pub fn isoperimetric_check(params: &HardyParams, radius: f64) -> Result<IsoperimetricCheck> {
    if params.p() != 1.0 {
        return invalid(format!(
            "isoperimetric check needs p = 1, got {}",
            params.p()
        ));
    }
    if !(radius > 0.0) {
        return invalid(format!("radius must be positive, got {radius}"));
    }
    let n = params.n();
    let s = params.s();
    let sphere = sphere_area(params.dim());
    let c = hardy_constant(params, CONSTANT_TOL)?.value;
    let ball = RadialPiecewisePower::indicator(radius)?;
    // the energy counts both orderings of the pair (x, y)
    let cross = 0.5 * radial_energy(params, &ball, RADIAL_REL_TOL)?.value;
    let volume = sphere * radius.powf(n) / n;
    Ok(IsoperimetricCheck {
        lhs: volume.powf((n - s) / n),
        rhs: 2.0 * (n - s) / (n * c) * (n / sphere).powf(s / n) * cross,
    })
}
