//! Sharp Hardy constant, remainder constant and Lorentz embedding constants.

mod phi;

pub use phi::{phi_kernel, phi_scaled, PhiTable};

use crate::error::{invalid, HardyError, Result};
use crate::numerics::{
    gamma_fn, minimize_scalar, sphere_area, try_integrate_points, try_integrate_singular, Endpoint,
    Minimum, QuadConfig,
};
use crate::params::HardyParams;

/// How a constant was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    OneDimIntegral,
    ClosedFormP2,
    ClosedFormP1N1,
    RadialDoubleIntegral,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::OneDimIntegral => "one_dim_integral",
            Method::ClosedFormP2 => "closed_form_p2",
            Method::ClosedFormP1N1 => "closed_form_p1_n1",
            Method::RadialDoubleIntegral => "radial_double_integral",
        }
    }
}

/// A computed value of `C_{N,s,p}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantReport {
    pub params: HardyParams,
    pub value: f64,
    pub method: Method,
    pub error_estimate: f64,
}

/// `1 - r^a` where `q = 1 - r`; whichever of `r`, `q` is small is the one
/// known to full relative accuracy.
pub(crate) fn one_minus_pow(r: f64, q: f64, a: f64) -> f64 {
    let log_r = if r < 0.5 { r.ln() } else { (-q).ln_1p() };
    -(a * log_r).exp_m1()
}

/// Smallest `q` handed to integrands; keeps `q^x` finite after substitution
/// underflow.
pub(crate) const Q_FLOOR: f64 = 1e-300;

/// Sharp constant `C_{N,s,p} = 2 ∫_0^1 r^{ps-1} |1 - r^α|^p Φ(r) dr`.
///
/// The integral is split at `r = 1/2`. Near `r = 0` the integrand behaves like
/// `r^{e-1}` with `e = ps` (N > ps) or `e = N` (N < ps) and is integrated
/// after `r = σ^{1/e}`. Near `r = 1` it behaves like `(1-r)^{p(1-s)-1}` and
/// is integrated in `ξ = (1-r)^{p(1-s)}` when that exponent is singular.
pub fn hardy_constant(params: &HardyParams, rel_tol: f64) -> Result<ConstantReport> {
    let p = params.p();
    let ps = params.ps();
    let a = params.alpha().abs();
    let e = if params.subcritical() { ps } else { params.n() };
    let kappa = params.kappa();
    let phi_tol = (1e-2 * rel_tol).max(1e-13);
    let cfg = QuadConfig::new(rel_tol, 0.0);

    // (1 - r^a)^p Φ(r) r^{e-1}, with q = 1 - r.
    let body = |r: f64, q: f64| -> Result<f64> {
        let h = phi_scaled(params, r, q, phi_tol)?;
        let ratio = one_minus_pow(r, q, a) / q;
        Ok(r.powf(e - 1.0) * ratio.powf(p) * h * q.powf(p - 1.0 - ps))
    };

    let lower = try_integrate_singular(
        |r, _, _| body(r, 1.0 - r),
        0.0,
        0.5,
        Endpoint::power_if_singular(e),
        Endpoint::Regular,
        &cfg,
    )?;

    let upper = if kappa < 1.0 {
        // q = ξ^{1/κ}: q^{κ-1} dq = dξ / κ
        try_integrate_points(
            |xi| {
                let q = xi.powf(1.0 / kappa).max(Q_FLOOR);
                let r = 1.0 - q;
                let h = phi_scaled(params, r, q, phi_tol)?;
                let ratio = one_minus_pow(r, q, a) / q;
                Ok(r.powf(e - 1.0) * ratio.powf(p) * h / kappa)
            },
            &[0.0, 0.5f64.powf(kappa)],
            &cfg,
        )?
    } else {
        try_integrate_points(|q| body(1.0 - q, q), &[0.0, 0.5], &cfg)?
    };

    let total = (lower + upper).scaled(2.0);
    Ok(ConstantReport {
        params: *params,
        value: total.value,
        method: Method::OneDimIntegral,
        error_estimate: total.error_estimate,
    })
}

/// Fourier-side closed form for `p = 2`:
/// `2π^{N/2} Γ((N+2s)/4)² / Γ((N-2s)/4)² · |Γ(-s)| / Γ((N+2s)/2)`.
pub fn hardy_constant_p2(params: &HardyParams) -> Result<f64> {
    if params.p() != 2.0 {
        return invalid(format!("closed form requires p = 2, got {}", params.p()));
    }
    let n = params.n();
    let s = params.s();
    let num = gamma_fn((n + 2.0 * s) / 4.0)?;
    let den = gamma_fn((n - 2.0 * s) / 4.0)?;
    Ok(
        2.0 * std::f64::consts::PI.powf(n / 2.0) * (num / den).powi(2) * gamma_fn(-s)?.abs()
            / gamma_fn((n + 2.0 * s) / 2.0)?,
    )
}

/// `C_{1,s,1} = 2^{2-s}/s`.
pub fn hardy_constant_p1_n1(s: f64) -> f64 {
    (2.0 - s).exp2() / s
}

/// Whichever closed form applies to these parameters, if any.
pub fn closed_form(params: &HardyParams) -> Option<(Method, f64)> {
    if params.p() == 2.0 {
        hardy_constant_p2(params)
            .ok()
            .map(|v| (Method::ClosedFormP2, v))
    } else if params.p() == 1.0 && params.dim() == 1 {
        Some((Method::ClosedFormP1N1, hardy_constant_p1_n1(params.s())))
    } else {
        None
    }
}

/// Sharp constant from the double integral over `{|x| < 1 < |y|}`.
///
/// After integrating out the angles and mapping the outer radius by
/// `|y| = 1/w`, this is
/// `2|α| ∫_0^1 w^{ps-1} ∫_0^1 ρ^{N-1} |ρ^{-α} - w^{α}|^{p-1} Φ(ρw) dρ dw`.
/// The inner integral over `ρ ∈ (1/2, 1)` is carried out in `1 - ρ` with
/// geometric breakpoints on the scale `1 - w`, where the kernel concentrates.
pub fn hardy_constant_crosscheck(params: &HardyParams, rel_tol: f64) -> Result<ConstantReport> {
    let table = PhiTable::new(params)?;
    let n = params.n();
    let p = params.p();
    let ps = params.ps();
    let alpha = params.alpha();
    let a = alpha.abs();
    let kappa = params.kappa();
    let inner_cfg = QuadConfig::new(0.1 * rel_tol, 0.0);
    // Near 0 the integrands expand in powers of (ρw)^a on top of the leading
    // power; substituting with exponent a makes every term regular.
    let origin = |e: f64| Endpoint::power_if_singular(e.min(a));
    let outer_cfg = QuadConfig::new(rel_tol, 0.0);

    // ρ-exponent and w-exponent after pulling |1 - (ρw)^a| out of the
    // difference of ground states.
    let (rho_exp, w_extra) = if alpha > 0.0 {
        (n - 1.0 - alpha * (p - 1.0), 0.0)
    } else {
        (n - 1.0, alpha * (p - 1.0))
    };

    // ∫_0^1 ρ^{rho_exp} (1 - (ρw)^a)^{p-1} Φ(ρw) dρ with b = 1 - w.
    let inner = |w: f64, b: f64| -> Result<f64> {
        let lower = try_integrate_singular(
            |rho, _, _| {
                let t = rho * w;
                let q = 1.0 - t;
                Ok(rho.powf(rho_exp) * one_minus_pow(t, q, a).powf(p - 1.0) * table.phi(t, q))
            },
            0.0,
            0.5,
            origin(rho_exp + 1.0),
            Endpoint::Regular,
            &inner_cfg,
        )?;
        let mut points = vec![0.0];
        let mut d = b.max(Q_FLOOR);
        while d < 0.5 {
            points.push(d);
            d *= 4.0;
        }
        points.push(0.5);
        let upper = try_integrate_points(
            |gap| {
                let rho = 1.0 - gap;
                let t = rho * w;
                let q = gap + b - gap * b;
                let ratio = one_minus_pow(t, q, a) / q;
                Ok(rho.powf(rho_exp)
                    * ratio.powf(p - 1.0)
                    * table.scaled(t, q)
                    * q.powf(p - 2.0 - ps))
            },
            &points,
            &inner_cfg,
        )?;
        Ok(lower.value + upper.value)
    };

    let w_exp = ps - 1.0 + w_extra;
    let lower = try_integrate_singular(
        |w, _, _| Ok(w.powf(w_exp) * inner(w, 1.0 - w)?),
        0.0,
        0.5,
        origin(w_exp + 1.0),
        Endpoint::Regular,
        &outer_cfg,
    )?;
    // Near w = 1 the inner integral grows like (1-w)^{κ-1}.
    let upper = if kappa < 1.0 {
        try_integrate_points(
            |xi| {
                let b = xi.powf(1.0 / kappa).max(Q_FLOOR);
                let w = 1.0 - b;
                Ok(w.powf(w_exp) * inner(w, b)? * b.powf(1.0 - kappa) / kappa)
            },
            &[0.0, 0.5f64.powf(kappa)],
            &outer_cfg,
        )?
    } else {
        try_integrate_points(
            |b| {
                let w = 1.0 - b;
                Ok(w.powf(w_exp) * inner(w, b)?)
            },
            &[0.0, 0.5],
            &outer_cfg,
        )?
    };
    let total = (lower + upper).scaled(2.0 * a);
    Ok(ConstantReport {
        params: *params,
        value: total.value,
        method: Method::RadialDoubleIntegral,
        error_estimate: total.error_estimate,
    })
}

/// `(1-τ)^p - τ^p + pτ^{p-1}`, the limit profile whose minimum is `c_p`.
pub fn boundary_profile(tau: f64, p: f64) -> f64 {
    (1.0 - tau).abs().powf(p) - tau.powf(p) + p * tau.powf(p - 1.0)
}

/// Minimizer and minimum of the boundary profile over `(0, 1/2)`.
pub fn remainder_minimizer(p: f64) -> Result<Minimum> {
    if !(p >= 2.0) {
        return invalid(format!("remainder constant needs p >= 2, got {p}"));
    }
    Ok(minimize_scalar(
        |tau| boundary_profile(tau, p),
        0.0,
        0.5,
        1e-12,
    ))
}

/// Remainder constant `c_p = min_{0<τ<1/2} ((1-τ)^p - τ^p + pτ^{p-1})`.
pub fn remainder_constant(p: f64) -> Result<f64> {
    if p == 2.0 {
        remainder_minimizer(p)?;
        return Ok(1.0);
    }
    Ok(remainder_minimizer(p)?.min)
}

/// Second index of a Lorentz space, possibly infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LorentzIndex {
    Finite(f64),
    Infinite,
}

impl LorentzIndex {
    pub fn parse(text: &str) -> Option<LorentzIndex> {
        match text.trim() {
            "inf" | "infinity" | "∞" => Some(LorentzIndex::Infinite),
            other => other.parse::<f64>().ok().map(LorentzIndex::Finite),
        }
    }
}

impl std::fmt::Display for LorentzIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LorentzIndex::Finite(r) => write!(f, "{r}"),
            LorentzIndex::Infinite => write!(f, "inf"),
        }
    }
}

/// `(p*/r)^{1/r} (p/p*)^{1/p}` for `r > p`, exactly 1 at `r = p`, and
/// `(p/p*)^{1/p}` at `r = ∞`.
pub fn lorentz_prefactor(params: &HardyParams, r: LorentzIndex) -> Result<f64> {
    let p = params.p();
    let p_star = params
        .p_star()
        .ok_or_else(|| HardyError::InvalidParams("embedding requires N > ps".into()))?;
    match r {
        LorentzIndex::Finite(r) if r < p => invalid(format!("Lorentz index r = {r} below p = {p}")),
        LorentzIndex::Finite(r) if r == p => Ok(1.0),
        LorentzIndex::Finite(r) => Ok((p_star / r).powf(1.0 / r) * (p / p_star).powf(1.0 / p)),
        LorentzIndex::Infinite => Ok((p / p_star).powf(1.0 / p)),
    }
}

/// Sharp prefactor of the embedding into `L_{p*, r}`, given `C_{N,s,p}`.
pub fn embedding_constant_with(params: &HardyParams, r: LorentzIndex, hardy: f64) -> Result<f64> {
    let factor = lorentz_prefactor(params, r)?;
    let n = params.n();
    let base = (n / sphere_area(params.dim())).powf(params.s() / n) * hardy.powf(-1.0 / params.p());
    Ok(base * factor)
}

/// Sharp prefactor of the embedding into `L_{p*, r}`.
pub fn embedding_constant(params: &HardyParams, r: LorentzIndex, rel_tol: f64) -> Result<f64> {
    lorentz_prefactor(params, r)?;
    let c = hardy_constant(params, rel_tol)?.value;
    embedding_constant_with(params, r, c)
}
