//! The angular kernel `Φ_{N,s,p}`.
//!
//! `Φ(t) = ∫_{S^{N-1}} |t e - ω|^{-N-ps} dω` for `0 <= t < 1`. It blows up
//! like `(1-t)^{-1-ps}` at `t = 1`, so everything here works with the
//! rescaled kernel `h(q) = q^{1+ps} Φ(1-q)`, which stays bounded, and takes
//! `q = 1 - t` as a separate argument so callers can supply it without
//! cancellation.

use std::f64::consts::PI;

use crate::error::{HardyError, Result};
use crate::numerics::{sphere_area, try_integrate_points, QuadConfig};
use crate::params::HardyParams;

fn check_domain(t: f64) -> Result<()> {
    if !(0.0..1.0).contains(&t) {
        return Err(HardyError::OutOfDomain(t));
    }
    Ok(())
}

/// `Φ_{N,s,p}(t)` evaluated directly by quadrature over the polar angle.
pub fn phi_kernel(params: &HardyParams, t: f64) -> Result<f64> {
    check_domain(t)?;
    let q = 1.0 - t;
    let h = phi_scaled(params, t, q, 1e-13)?;
    Ok(h * q.powf(-1.0 - params.ps()))
}

/// `(1-t)^{1+ps} Φ(t)` with `q = 1 - t` supplied by the caller.
///
/// For `N >= 2` this integrates
/// `|S^{N-2}| sin^{N-2}θ q^{1+ps} / (q² + 4t sin²(θ/2))^{(N+ps)/2}` over
/// `θ ∈ (0, π)`, splitting geometrically toward `θ = 0` where the integrand
/// concentrates as `q → 0`.
pub fn phi_scaled(params: &HardyParams, t: f64, q: f64, rel_tol: f64) -> Result<f64> {
    // t may round to 1 when q is tiny; q is the authoritative distance.
    if !(t >= 0.0 && q > 0.0 && q <= 1.0) {
        return Err(HardyError::OutOfDomain(t));
    }
    let ps = params.ps();
    if params.dim() == 1 {
        return Ok(1.0 + (q / (1.0 + t)).powf(1.0 + ps));
    }

    let n = params.n();
    let sin_power = n - 2.0;
    let half_exp = 0.5 * (n + ps);
    let log_q = q.ln();
    let integrand = |theta: f64| {
        let half_sin = (0.5 * theta).sin();
        // ln(q² + 4t sin²(θ/2)) without underflow when q is tiny
        let x = half_sin / q;
        let ln_denom = if x < 1e100 {
            2.0 * log_q + (4.0 * t * x * x).ln_1p()
        } else {
            (4.0 * t).ln() + 2.0 * half_sin.ln() + (1.0 / (4.0 * t * x * x)).ln_1p()
        };
        let mut log_val = (1.0 + ps) * log_q - half_exp * ln_denom;
        if sin_power != 0.0 {
            log_val += sin_power * theta.sin().ln();
        }
        Ok(log_val.exp())
    };

    let mut points = vec![0.0];
    if q < 0.25 {
        let mut theta = q;
        while theta < PI / 2.0 {
            points.push(theta);
            theta *= 4.0;
        }
    }
    points.push(PI);

    let cfg = QuadConfig::new(rel_tol, 0.0);
    let r = try_integrate_points(integrand, &points, &cfg)?;
    Ok(sphere_area(params.dim() - 1) * r.value)
}

const CHEB_NODES: usize = 20;
const MIN_Q_EXP: i32 = 60;

/// One Chebyshev panel in the variable `x` on `[lo, hi]`.
#[derive(Debug, Clone)]
struct Panel {
    lo: f64,
    hi: f64,
    values: [f64; CHEB_NODES],
}

fn cheb_node(j: usize) -> f64 {
    (PI * j as f64 / (CHEB_NODES - 1) as f64).cos()
}

impl Panel {
    fn build<F>(lo: f64, hi: f64, mut f: F) -> Result<Panel>
    where
        F: FnMut(f64) -> Result<f64>,
    {
        let mut values = [0.0; CHEB_NODES];
        for (j, v) in values.iter_mut().enumerate() {
            let x = 0.5 * (lo + hi) + 0.5 * (hi - lo) * cheb_node(j);
            *v = f(x)?;
        }
        Ok(Panel { lo, hi, values })
    }

    /// Barycentric interpolation at Chebyshev points of the second kind.
    fn eval(&self, x: f64) -> f64 {
        let u = (2.0 * x - self.lo - self.hi) / (self.hi - self.lo);
        let mut num = 0.0;
        let mut den = 0.0;
        for j in 0..CHEB_NODES {
            let diff = u - cheb_node(j);
            if diff == 0.0 {
                return self.values[j];
            }
            let mut w = if j % 2 == 0 { 1.0 } else { -1.0 };
            if j == 0 || j == CHEB_NODES - 1 {
                w *= 0.5;
            }
            let c = w / diff;
            num += c * self.values[j];
            den += c;
        }
        num / den
    }
}

/// Tabulated rescaled kernel for fast repeated evaluation.
///
/// `N = 1` uses the elementary formula. For `N >= 2` the rescaled kernel is
/// interpolated on two panels covering `t ∈ [0, 1/2]` and on dyadic panels
/// `q ∈ [2^{-k-1}, 2^{-k}]` down to `q = 2^{-60}`, each with 20 Chebyshev
/// nodes; below that the rescaled kernel is frozen at its last value.
#[derive(Debug, Clone)]
pub struct PhiTable {
    params: HardyParams,
    near_zero: Vec<Panel>,
    near_one: Vec<Panel>,
}

impl PhiTable {
    pub fn new(params: &HardyParams) -> Result<PhiTable> {
        if params.dim() == 1 {
            return Ok(PhiTable {
                params: *params,
                near_zero: Vec::new(),
                near_one: Vec::new(),
            });
        }
        let tol = 1e-14;
        let near_zero = vec![
            Panel::build(0.0, 0.25, |t| phi_scaled(params, t, 1.0 - t, tol))?,
            Panel::build(0.25, 0.5, |t| phi_scaled(params, t, 1.0 - t, tol))?,
        ];
        let near_one = (1..=MIN_Q_EXP)
            .map(|k| {
                let hi = (-(k as f64)).exp2();
                Panel::build(0.5 * hi, hi, |q| phi_scaled(params, 1.0 - q, q, tol))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PhiTable {
            params: *params,
            near_zero,
            near_one,
        })
    }

    pub fn params(&self) -> &HardyParams {
        &self.params
    }

    /// `q^{1+ps} Φ(1-q)` for `q = 1 - t ∈ (0, 1]`.
    pub fn scaled(&self, t: f64, q: f64) -> f64 {
        if self.params.dim() == 1 {
            return 1.0 + (q / (1.0 + t)).powf(1.0 + self.params.ps());
        }
        if t <= 0.25 {
            return self.near_zero[0].eval(t.max(0.0));
        }
        if t <= 0.5 {
            return self.near_zero[1].eval(t);
        }
        let k = (-q.log2()).floor() as i32;
        if k < 1 {
            return self.near_one[0].eval(q);
        }
        if k > MIN_Q_EXP {
            let last = &self.near_one[(MIN_Q_EXP - 1) as usize];
            return last.eval(last.lo);
        }
        self.near_one[(k - 1) as usize].eval(q)
    }

    /// `Φ(t)`.
    pub fn phi(&self, t: f64, q: f64) -> f64 {
        self.scaled(t, q) * q.powf(-1.0 - self.params.ps())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{gamma_fn, sphere_area};
    use crate::params::make_params;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    /// Closed form for N = 3 from the elementary antiderivative of the
    /// `t`-integral: `2π((1-r)^{-1-ps} - (1+r)^{-1-ps}) / (r(1+ps))`.
    fn phi_n3(ps: f64, r: f64) -> f64 {
        2.0 * PI * ((1.0 - r).powf(-1.0 - ps) - (1.0 + r).powf(-1.0 - ps)) / (r * (1.0 + ps))
    }

    #[test]
    fn one_dimensional_at_origin() {
        let hp = make_params(1, 0.3, 1.7).unwrap();
        assert_eq!(phi_kernel(&hp, 0.0).unwrap(), 2.0);
    }

    #[test]
    fn origin_value_is_sphere_area() {
        for dim in 1..=5u32 {
            let hp = make_params(dim, 0.4, 1.5).unwrap();
            let v = phi_kernel(&hp, 0.0).unwrap();
            // |S^{N-1}| = |S^{N-2}| B((N-1)/2, 1/2) for N >= 2
            let expected = if dim == 1 {
                2.0
            } else {
                let a = (dim as f64 - 1.0) / 2.0;
                let beta =
                    gamma_fn(a).unwrap() * gamma_fn(0.5).unwrap() / gamma_fn(a + 0.5).unwrap();
                sphere_area(dim - 1) * beta
            };
            assert!(rel(v, expected) < 1e-10, "N = {dim}: {v} vs {expected}");
            assert!(rel(v, sphere_area(dim)) < 1e-10);
        }
    }

    #[test]
    fn three_dimensional_closed_form() {
        let hp = make_params(3, 0.5, 1.0).unwrap();
        let v = phi_kernel(&hp, 0.5).unwrap();
        assert!(rel(v, phi_n3(0.5, 0.5)) < 1e-12);
        assert!((v - 19.13).abs() < 0.01);
        for &r in &[0.1, 0.7, 0.95, 0.999, 1.0 - 1e-6, 1.0 - 1e-10] {
            let hp = make_params(3, 0.3, 2.5).unwrap();
            assert!(
                rel(phi_kernel(&hp, r).unwrap(), phi_n3(0.75, r)) < 1e-11,
                "r = {r}"
            );
        }
    }

    #[test]
    fn rejects_out_of_domain() {
        let hp = make_params(2, 0.5, 1.0).unwrap();
        assert!(matches!(
            phi_kernel(&hp, 1.0),
            Err(HardyError::OutOfDomain(_))
        ));
        assert!(matches!(
            phi_kernel(&hp, -0.1),
            Err(HardyError::OutOfDomain(_))
        ));
    }

    #[test]
    fn table_matches_direct_evaluation() {
        for &(dim, s, p) in &[
            (2u32, 0.5, 2.0),
            (3, 0.25, 1.0),
            (4, 0.7, 3.0),
            (2, 0.9, 1.5),
        ] {
            let hp = make_params(dim, s, p).unwrap();
            let table = PhiTable::new(&hp).unwrap();
            let mut q: f64 = 1.0;
            while q > 1e-17 {
                for factor in [1.0, 0.77, 0.53] {
                    let qq = q * factor;
                    let t = 1.0 - qq;
                    let direct = phi_scaled(&hp, t, qq, 1e-14).unwrap();
                    let tab = table.scaled(t, qq);
                    assert!(
                        rel(tab, direct) < 1e-11,
                        "N={dim} q={qq}: {tab} vs {direct}"
                    );
                }
                q *= 0.3;
            }
        }
    }
}
