//! Globally adaptive Gauss–Kronrod quadrature.
//!
//! Each interval is integrated with the 21-point Kronrod rule and its embedded
//! 10-point Gauss rule. Both rules are open, so the integrand is never sampled
//! at an interval endpoint; integrable endpoint singularities are therefore
//! safe, and [`integrate_singular`] removes the common power-law ones by a
//! change of variables before the adaptive loop sees them.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{HardyError, Result};

/// Value, error estimate and evaluation count of an integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

impl QuadResult {
    pub const ZERO: QuadResult = QuadResult {
        value: 0.0,
        error_estimate: 0.0,
        evaluations: 0,
    };

    /// Scale value and error estimate by a constant.
    pub fn scaled(self, factor: f64) -> QuadResult {
        QuadResult {
            value: self.value * factor,
            error_estimate: self.error_estimate * factor.abs(),
            evaluations: self.evaluations,
        }
    }
}

impl std::ops::Add for QuadResult {
    type Output = QuadResult;

    fn add(self, rhs: QuadResult) -> QuadResult {
        QuadResult {
            value: self.value + rhs.value,
            error_estimate: self.error_estimate + rhs.error_estimate,
            evaluations: self.evaluations + rhs.evaluations,
        }
    }
}

impl std::iter::Sum for QuadResult {
    fn sum<I: Iterator<Item = QuadResult>>(iter: I) -> QuadResult {
        iter.fold(QuadResult::ZERO, |acc, r| acc + r)
    }
}

/// Tolerances and limits for the adaptive loop.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Maximum number of bisections applied to any single interval.
    pub max_depth: u32,
    /// Maximum number of live intervals.
    pub max_intervals: usize,
}

pub const DEFAULT_REL_TOL: f64 = 1e-10;
pub const DEFAULT_ABS_TOL: f64 = 1e-14;

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig {
            rel_tol: DEFAULT_REL_TOL,
            abs_tol: DEFAULT_ABS_TOL,
            max_depth: 200,
            max_intervals: 20_000,
        }
    }
}

impl QuadConfig {
    pub fn new(rel_tol: f64, abs_tol: f64) -> Self {
        QuadConfig {
            rel_tol,
            abs_tol,
            ..QuadConfig::default()
        }
    }
}

// Kronrod abscissae on [-1, 1]; odd indices are the 10-point Gauss nodes.
const XGK: [f64; 11] = [
    0.995_657_163_025_808_1,
    0.973_906_528_517_171_7,
    0.930_157_491_355_708_2,
    0.865_063_366_688_984_5,
    0.780_817_726_586_416_9,
    0.679_409_568_299_024_4,
    0.562_757_134_668_604_7,
    0.433_395_394_129_247_2,
    0.294_392_862_701_460_2,
    0.148_874_338_981_631_22,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874,
    0.032_558_162_307_964_725,
    0.054_755_896_574_351_995,
    0.075_039_674_810_919_96,
    0.093_125_454_583_697_6,
    0.109_387_158_802_297_64,
    0.123_491_976_262_065_84,
    0.134_709_217_311_473_34,
    0.142_775_938_577_060_09,
    0.147_739_104_901_338_49,
    0.149_445_554_002_916_9,
];

const WG: [f64; 5] = [
    0.066_671_344_308_688_14,
    0.149_451_349_150_580_6,
    0.219_086_362_515_982_04,
    0.269_266_719_309_996_35,
    0.295_524_224_714_752_87,
];

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    res_abs: f64,
    depth: u32,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// One Gauss–Kronrod 10/21 pass: (value, error estimate, |f| integral).
fn gk21<F>(f: &mut F, a: f64, b: f64) -> Result<(f64, f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let fc = f(center)?;
    let mut kronrod = fc * WGK[10];
    let mut gauss = 0.0;
    let mut abs_sum = fc.abs() * WGK[10];
    let mut fv = [0.0f64; 20];

    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx)?;
        let f2 = f(center + dx)?;
        fv[2 * j] = f1;
        fv[2 * j + 1] = f2;
        kronrod += WGK[j] * (f1 + f2);
        abs_sum += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }

    let mean = 0.5 * kronrod;
    let mut asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        asc += WGK[j] * ((fv[2 * j] - mean).abs() + (fv[2 * j + 1] - mean).abs());
    }

    let value = kronrod * half;
    let res_abs = abs_sum * half.abs();
    let res_asc = asc * half.abs();
    let mut err = ((kronrod - gauss) * half).abs();

    // QUADPACK error rescaling.
    if res_asc != 0.0 && err != 0.0 {
        let scale = (200.0 * err / res_asc).powf(1.5);
        err = if scale < 1.0 {
            res_asc * scale
        } else {
            res_asc
        };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }

    if !value.is_finite() || !err.is_finite() {
        return Err(HardyError::ConvergenceFailure {
            a,
            b,
            value,
            error_estimate: err,
            evaluations: 21,
        });
    }
    Ok((value, err, res_abs))
}

/// Fallible integrand version of [`integrate_points`].
///
/// `points` must be strictly increasing with at least two entries; every
/// consecutive pair seeds one initial interval.
pub fn try_integrate_points<F>(mut f: F, points: &[f64], cfg: &QuadConfig) -> Result<QuadResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    if points.len() < 2 {
        return Err(HardyError::InvalidParams(
            "quadrature needs at least two points".into(),
        ));
    }
    for w in points.windows(2) {
        if !(w[0] < w[1]) || !w[0].is_finite() || !w[1].is_finite() {
            return Err(HardyError::InvalidParams(format!(
                "quadrature points must be finite and increasing, got {} then {}",
                w[0], w[1]
            )));
        }
    }

    let mut heap = BinaryHeap::new();
    let mut total = 0.0;
    let mut total_err = 0.0;
    let mut total_abs = 0.0;
    let mut evaluations = 0usize;

    for w in points.windows(2) {
        let (value, error, res_abs) = gk21(&mut f, w[0], w[1])?;
        evaluations += 21;
        total += value;
        total_err += error;
        total_abs += res_abs;
        heap.push(Segment {
            a: w[0],
            b: w[1],
            value,
            error,
            res_abs,
            depth: 0,
        });
    }

    loop {
        // Below this floor the error estimate is dominated by rounding.
        let floor = 100.0 * f64::EPSILON * total_abs;
        let target = (cfg.rel_tol * total.abs()).max(cfg.abs_tol).max(floor);
        if total_err <= target {
            break;
        }
        let worst = match heap.pop() {
            Some(seg) => seg,
            None => break,
        };
        let mid = 0.5 * (worst.a + worst.b);
        if worst.depth >= cfg.max_depth
            || heap.len() + 2 > cfg.max_intervals
            || !(worst.a < mid && mid < worst.b)
        {
            return Err(HardyError::ConvergenceFailure {
                a: points[0],
                b: points[points.len() - 1],
                value: total,
                error_estimate: total_err,
                evaluations,
            });
        }
        let (v1, e1, abs1) = gk21(&mut f, worst.a, mid)?;
        let (v2, e2, abs2) = gk21(&mut f, mid, worst.b)?;
        evaluations += 42;

        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.error;
        total_abs += abs1 + abs2 - worst.res_abs;
        heap.push(Segment {
            a: worst.a,
            b: mid,
            value: v1,
            error: e1,
            res_abs: abs1,
            depth: worst.depth + 1,
        });
        heap.push(Segment {
            a: mid,
            b: worst.b,
            value: v2,
            error: e2,
            res_abs: abs2,
            depth: worst.depth + 1,
        });
    }

    // Re-sum to shed the drift accumulated by the incremental updates.
    let mut value = 0.0;
    let mut error_estimate = 0.0;
    for seg in heap.iter() {
        value += seg.value;
        error_estimate += seg.error;
    }
    Ok(QuadResult {
        value,
        error_estimate,
        evaluations,
    })
}

/// Integrate `f` over `[points[0], points[last]]`, seeding the adaptive loop
/// with the given breakpoints.
pub fn integrate_points<F>(f: F, points: &[f64], rel_tol: f64, abs_tol: f64) -> Result<QuadResult>
where
    F: Fn(f64) -> f64,
{
    try_integrate_points(|x| Ok(f(x)), points, &QuadConfig::new(rel_tol, abs_tol))
}

/// Adaptive quadrature of `f` over `[a, b]`.
///
/// The estimate satisfies `error_estimate <= max(rel_tol * |value|, abs_tol)`
/// on success. Fails with [`HardyError::ConvergenceFailure`] when some
/// interval would need more than 200 bisections.
pub fn integrate_adaptive<F>(f: F, a: f64, b: f64, rel_tol: f64, abs_tol: f64) -> Result<QuadResult>
where
    F: Fn(f64) -> f64,
{
    if !(a < b) {
        return Err(HardyError::InvalidParams(format!(
            "integration bounds must satisfy a < b, got [{a}, {b}]"
        )));
    }
    integrate_points(f, &[a, b], rel_tol, abs_tol)
}

/// Endpoint behaviour of an integrand.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Endpoint {
    /// Bounded and reasonably smooth.
    Regular,
    /// Behaves like `dist^(e - 1)` for the given `e > 0`.
    Power(f64),
}

impl Endpoint {
    /// Power-law endpoint, falling back to `Regular` when no substitution is
    /// needed (exponent `e >= 1`).
    pub fn power_if_singular(e: f64) -> Endpoint {
        if e < 1.0 {
            Endpoint::Power(e)
        } else {
            Endpoint::Regular
        }
    }
}

/// Integrate over `[a, b]` removing power-law endpoint behaviour.
///
/// For `Endpoint::Power(e)` at the left end the half-interval is mapped by
/// `x = a + σ^(1/e)`, which turns `(x - a)^(e-1) dx` into `dσ / e`; the right
/// end is handled symmetrically. The integrand receives `(x, x - a, b - x)`
/// with the distances computed without cancellation.
pub fn try_integrate_singular<F>(
    mut f: F,
    a: f64,
    b: f64,
    left: Endpoint,
    right: Endpoint,
    cfg: &QuadConfig,
) -> Result<QuadResult>
where
    F: FnMut(f64, f64, f64) -> Result<f64>,
{
    if !(a < b) {
        return Err(HardyError::InvalidParams(format!(
            "integration bounds must satisfy a < b, got [{a}, {b}]"
        )));
    }
    if left == Endpoint::Regular && right == Endpoint::Regular {
        return try_integrate_points(|x| f(x, x - a, b - x), &[a, b], cfg);
    }
    let half = 0.5 * (b - a);
    let mid = a + half;
    let half_cfg = QuadConfig {
        abs_tol: 0.5 * cfg.abs_tol,
        ..*cfg
    };

    let lower = match left {
        Endpoint::Regular => try_integrate_points(|x| f(x, x - a, b - x), &[a, mid], &half_cfg)?,
        Endpoint::Power(e) => {
            let top = half.powf(e);
            try_integrate_points(
                |sigma| {
                    let d = sigma.powf(1.0 / e);
                    let jac = d / (e * sigma);
                    Ok(f(a + d, d, (b - a) - d)? * jac)
                },
                &[0.0, top],
                &half_cfg,
            )?
        }
    };
    let upper = match right {
        Endpoint::Regular => try_integrate_points(|x| f(x, x - a, b - x), &[mid, b], &half_cfg)?,
        Endpoint::Power(e) => {
            let top = (b - mid).powf(e);
            try_integrate_points(
                |sigma| {
                    let d = sigma.powf(1.0 / e);
                    let jac = d / (e * sigma);
                    Ok(f(b - d, (b - a) - d, d)? * jac)
                },
                &[0.0, top],
                &half_cfg,
            )?
        }
    };
    Ok(lower + upper)
}

/// Infallible-integrand convenience wrapper over [`try_integrate_singular`].
pub fn integrate_singular<F>(
    f: F,
    a: f64,
    b: f64,
    left: Endpoint,
    right: Endpoint,
    rel_tol: f64,
    abs_tol: f64,
) -> Result<QuadResult>
where
    F: Fn(f64) -> f64,
{
    try_integrate_singular(
        |x, _, _| Ok(f(x)),
        a,
        b,
        left,
        right,
        &QuadConfig::new(rel_tol, abs_tol),
    )
}
