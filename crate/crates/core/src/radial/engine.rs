//! Nested quadrature for radial double integrals.
//!
//! For radial `u` the seminorm reduces, after integrating out the angles and
//! symmetrizing so that `|y| = r w < |x| = r`, to
//! `2|S^{N-1}| ∫_0^∞ r^{a_out} ∫_0^1 w^{a_in} |u(r) - w^{shift} u(rw)|^p Φ(w) dw dr`.
//! The energy has `(a_out, a_in, shift) = (N-1-ps, N-1, 0)`; the weighted
//! remainder term has `(N-1-ps, (N+ps)/2 - 1, α)`.
//!
//! The inner integral is split at the breakpoints of `u`. On the piece that
//! contains `r` the difference vanishes linearly as `w -> 1` and is computed
//! in `q = 1 - w` without cancellation; elsewhere the inner variable is the
//! radius `ρ = rw` itself, measured from the breakpoint nearest to `r` so
//! that `r - ρ` stays exact when `r` sits on top of a breakpoint.

use crate::constants::{one_minus_pow, PhiTable, Q_FLOOR};
use crate::error::{HardyError, Result};
use crate::numerics::{
    sphere_area, try_integrate_points, try_integrate_singular, Endpoint, QuadConfig, QuadResult,
};
use crate::params::HardyParams;

use super::function::{Piece, RadialPiecewisePower};

/// Exponents of the reduced double integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Weights {
    pub a_out: f64,
    pub a_in: f64,
    pub shift: f64,
}

/// Evaluation point of a pair integrand: radii `x < y` with their exact
/// offsets from the nearest interval ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairPoint {
    pub x: f64,
    pub y: f64,
    /// `x_hi - x`.
    pub x_below_hi: f64,
    /// `y - y_lo`.
    pub y_above_lo: f64,
}

/// Integrate over consecutive points, with optional endpoint singularities at
/// the two ends of the chain. `f` receives `(x, x - pts[0], pts[last] - x)`,
/// exact in the first and last segments respectively.
pub(crate) fn integrate_chain<F>(
    mut f: F,
    pts: &[f64],
    left: Endpoint,
    right: Endpoint,
    cfg: &QuadConfig,
) -> Result<QuadResult>
where
    F: FnMut(f64, f64, f64) -> Result<f64>,
{
    let n = pts.len() - 1;
    let (start, end) = (pts[0], pts[n]);
    if n == 1 {
        return try_integrate_singular(f, start, end, left, right, cfg);
    }
    let tail_len = end - pts[1];
    let mut total = try_integrate_singular(
        |x, a, b| f(x, a, b + tail_len),
        start,
        pts[1],
        left,
        Endpoint::Regular,
        cfg,
    )?;
    if n > 2 {
        total = total + try_integrate_points(|x| f(x, x - start, end - x), &pts[1..n], cfg)?;
    }
    let head_len = pts[n - 1] - start;
    total = total
        + try_integrate_singular(
            |x, a, b| f(x, a + head_len, b),
            pts[n - 1],
            end,
            Endpoint::Regular,
            right,
            cfg,
        )?;
    Ok(total)
}

/// `lo, lo + first, lo + 4 first, ...` up to `hi`.
pub(crate) fn geometric_points(lo: f64, hi: f64, first: f64) -> Vec<f64> {
    let mut pts = vec![lo];
    let mut step = first;
    while step > 0.0 && lo + step < hi {
        pts.push(lo + step);
        step *= 4.0;
    }
    pts.push(hi);
    pts
}

fn divergent(msg: impl Into<String>) -> HardyError {
    HardyError::DivergentEnergy(msg.into())
}

/// Shared state for radial integrals at fixed `(N, s, p)`.
#[derive(Debug, Clone)]
pub struct RadialContext {
    params: HardyParams,
    table: PhiTable,
    sphere: f64,
    outer: QuadConfig,
    inner: QuadConfig,
}

impl RadialContext {
    /// Outer quadrature at `rel_tol`, inner at `rel_tol / 10`.
    pub fn new(params: &HardyParams, rel_tol: f64) -> Result<RadialContext> {
        Ok(RadialContext {
            params: *params,
            table: PhiTable::new(params)?,
            sphere: sphere_area(params.dim()),
            outer: QuadConfig::new(rel_tol, 0.0),
            inner: QuadConfig::new(0.1 * rel_tol, 0.0),
        })
    }

    pub fn params(&self) -> &HardyParams {
        &self.params
    }

    fn phi(&self, t: f64, q: f64) -> f64 {
        self.table.phi(t, q)
    }

    /// `∬ |u(x) - u(y)|^p |x - y|^{-N-ps} dx dy`.
    pub fn energy(&self, u: &RadialPiecewisePower) -> Result<QuadResult> {
        let hp = &self.params;
        self.double_integral(
            u,
            Weights {
                a_out: hp.n() - 1.0 - hp.ps(),
                a_in: hp.n() - 1.0,
                shift: 0.0,
            },
        )
    }

    /// `∬ |v(x) - v(y)|^p |x - y|^{-N-ps} (|x||y|)^{-(N-ps)/2} dx dy` with
    /// `v = |x|^α u`.
    pub fn ground_state_energy(&self, u: &RadialPiecewisePower) -> Result<QuadResult> {
        let hp = &self.params;
        self.double_integral(
            u,
            Weights {
                a_out: hp.n() - 1.0 - hp.ps(),
                a_in: 0.5 * (hp.n() + hp.ps()) - 1.0,
                shift: hp.alpha(),
            },
        )
    }

    /// `∫ |u(x)|^p |x|^{-ps} dx`.
    pub fn weighted_norm(&self, u: &RadialPiecewisePower) -> Result<QuadResult> {
        let hp = &self.params;
        let p = hp.p();
        let expo = hp.n() - 1.0 - hp.ps();
        let b = u.breaks();
        let mut total = QuadResult::ZERO;
        for (k, piece) in u.pieces().iter().enumerate() {
            if piece.c == 0.0 && piece.d == 0.0 {
                continue;
            }
            let f = |r: f64, _: f64, _: f64| Ok(piece.eval(r).abs().powf(p) * r.powf(expo));
            let res = if k == 0 {
                let lead = if piece.d == 0.0 { -piece.beta } else { 0.0 };
                let e = expo + 1.0 + p * lead;
                if e <= 0.0 {
                    return Err(divergent("weighted norm diverges at the origin"));
                }
                integrate_chain(
                    f,
                    &[0.0, b[1]],
                    Endpoint::power_if_singular(e),
                    Endpoint::Regular,
                    &self.outer,
                )?
            } else {
                let pts = geometric_points(b[k], b[k + 1], b[k]);
                integrate_chain(f, &pts, Endpoint::Regular, Endpoint::Regular, &self.outer)?
            };
            total = total + res;
        }
        Ok(total.scaled(self.sphere))
    }

    pub(crate) fn double_integral(
        &self,
        u: &RadialPiecewisePower,
        wt: Weights,
    ) -> Result<QuadResult> {
        if u.is_zero() {
            return Ok(QuadResult::ZERO);
        }
        let ps = self.params.ps();
        let b = u.breaks();
        let count = u.pieces().len();
        if ps >= 1.0 {
            if let Some(j) = (1..=count).find(|&j| u.jumps_at(j)) {
                return Err(divergent(format!(
                    "u jumps at r = {} but ps = {ps} >= 1",
                    b[j]
                )));
            }
        }

        let mut total = QuadResult::ZERO;
        if let Some(e0) = self.origin_exponent(&u.pieces()[0], wt)? {
            total = total
                + integrate_chain(
                    |r, gap, _| self.outer_integrand(u, wt, 1, r, gap),
                    &[0.0, b[1]],
                    Endpoint::power_if_singular(e0),
                    Endpoint::Regular,
                    &self.outer,
                )?;
        }
        for k in 2..=count {
            let left = if u.jumps_at(k - 1) {
                Endpoint::Power(1.0 - ps)
            } else {
                Endpoint::Regular
            };
            let pts = geometric_points(b[k - 1], b[k], b[k - 1]);
            total = total
                + integrate_chain(
                    |r, gap, _| self.outer_integrand(u, wt, k, r, gap),
                    &pts,
                    left,
                    Endpoint::Regular,
                    &self.outer,
                )?;
        }
        total = total + self.tail(u, wt)?;
        Ok(total.scaled(2.0 * self.sphere))
    }

    /// Power of `r` at which the outer integrand vanishes near 0, plus one;
    /// `None` when it vanishes identically on the first piece.
    fn origin_exponent(&self, piece: &Piece, wt: Weights) -> Result<Option<f64>> {
        let mut lead = f64::INFINITY;
        if piece.c != 0.0 && wt.shift - piece.beta != 0.0 {
            lead = lead.min(-piece.beta);
        }
        if piece.d != 0.0 && wt.shift != 0.0 {
            lead = lead.min(0.0);
        }
        if lead == f64::INFINITY {
            return Ok(None);
        }
        let e = wt.a_out + 1.0 + self.params.p() * lead;
        if e <= 0.0 {
            return Err(divergent("integrand not integrable at r = 0"));
        }
        Ok(Some(e))
    }

    /// Endpoint behaviour of the inner integrand as `ρ = rw -> 0` when the
    /// inner segment reaches the origin.
    fn inner_origin(&self, piece: &Piece, wt: Weights) -> Result<Endpoint> {
        let mut lead = 0.0f64;
        if piece.c != 0.0 {
            lead = lead.min(wt.shift - piece.beta);
        }
        if piece.d != 0.0 {
            lead = lead.min(wt.shift);
        }
        let e = wt.a_in + 1.0 + self.params.p() * lead;
        if e <= 0.0 {
            return Err(divergent("inner integrand not integrable at the origin"));
        }
        Ok(Endpoint::power_if_singular(e))
    }

    /// `r^{a_out} ∫_0^1 w^{a_in} |u(r) - w^shift u(rw)|^p Φ(w) dw` for `r` in
    /// piece `k` (1-based), `gap = r - r_{k-1}`.
    fn outer_integrand(
        &self,
        u: &RadialPiecewisePower,
        wt: Weights,
        k: usize,
        r: f64,
        gap: f64,
    ) -> Result<f64> {
        let piece = u.pieces()[k - 1];
        let ur = piece.eval(r);
        let mut sum = self.diagonal(&piece, wt, r, gap / r, k == 1)?;
        for j in 1..k {
            let adjacent = (j == k - 1).then_some(gap);
            sum += self.off_diagonal(u, wt, j, r, adjacent, Some(ur))?;
        }
        Ok(r.powf(wt.a_out) * sum)
    }

    /// Inner integral over `q ∈ (0, q_edge)`, where `r` and `r(1-q)` lie in
    /// the same piece.
    fn diagonal(
        &self,
        piece: &Piece,
        wt: Weights,
        r: f64,
        q_edge: f64,
        touches_origin: bool,
    ) -> Result<f64> {
        let p = self.params.p();
        let kappa = self.params.kappa();
        let c_exp = wt.shift - piece.beta;
        let has_c = piece.c != 0.0 && c_exp != 0.0;
        let has_d = piece.d != 0.0 && wt.shift != 0.0;
        if !has_c && !has_d {
            return Ok(0.0);
        }
        let cr = if has_c {
            piece.c * r.powf(-piece.beta)
        } else {
            0.0
        };
        // |u(r) - w^shift u(rw)| / q
        let ratio = |q: f64, w: f64| {
            let mut diff = 0.0;
            if has_c {
                diff += cr * one_minus_pow(w, q, c_exp);
            }
            if has_d {
                diff += piece.d * one_minus_pow(w, q, wt.shift);
            }
            diff.abs() / q
        };
        let body = |q: f64, w: f64| w.powf(wt.a_in) * ratio(q, w).powf(p) * self.table.scaled(w, q);

        let split = q_edge.min(0.5);
        let mut total = if kappa < 1.0 {
            // q = ξ^{1/κ} absorbs q^{κ-1}
            try_integrate_points(
                |xi| {
                    let q = xi.powf(1.0 / kappa).max(Q_FLOOR);
                    Ok(body(q, 1.0 - q) / kappa)
                },
                &[0.0, split.powf(kappa)],
                &self.inner,
            )?
            .value
        } else {
            try_integrate_points(
                |q| Ok(body(q, 1.0 - q) * q.powf(kappa - 1.0)),
                &[0.0, split],
                &self.inner,
            )?
            .value
        };
        if q_edge > split {
            let right = if touches_origin {
                self.inner_origin(piece, wt)?
            } else {
                Endpoint::Regular
            };
            total += try_integrate_singular(
                |q, _, to_edge| {
                    let w = if touches_origin { to_edge } else { 1.0 - q };
                    Ok(body(q, w) * q.powf(kappa - 1.0))
                },
                split,
                q_edge,
                Endpoint::Regular,
                right,
                &self.inner,
            )?
            .value;
        }
        Ok(total)
    }

    /// Inner integral over `ρ ∈ [r_{j-1}, r_j)`.
    ///
    /// With `ur = Some(u(r))` this is `∫ w^{a_in} |u(r) - w^shift u(ρ)|^p Φ(w) dw`
    /// with `w = ρ/r`. With `ur = None` (`r` beyond the support) it is the
    /// rescaled tail form `∫ ρ^{a_in + p shift} |u(ρ)|^p Φ(ρ/r) dρ`.
    /// `adjacent = Some(r - r_j)` when `r_j` is the breakpoint right below `r`.
    fn off_diagonal(
        &self,
        u: &RadialPiecewisePower,
        wt: Weights,
        j: usize,
        r: f64,
        adjacent: Option<f64>,
        ur: Option<f64>,
    ) -> Result<f64> {
        let piece = u.pieces()[j - 1];
        if piece.c == 0.0 && piece.d == 0.0 && ur.unwrap_or(0.0) == 0.0 {
            return Ok(0.0);
        }
        let p = self.params.p();
        let b = u.breaks();
        let (lo, hi) = (b[j - 1], b[j]);
        let tail_exp = wt.a_in + p * wt.shift;
        let f = |rho: f64, dist: f64| -> f64 {
            let (t, q) = if r.is_finite() {
                (rho / r, dist / r)
            } else {
                (0.0, 1.0)
            };
            let v = piece.eval(rho);
            let val = match ur {
                Some(ur) => t.powf(wt.a_in) * (ur - t.powf(wt.shift) * v).abs().powf(p) / r,
                None => rho.powf(tail_exp) * v.abs().powf(p),
            };
            val * self.phi(t, q)
        };
        let origin = if lo == 0.0 {
            self.inner_origin(&piece, wt)?
        } else {
            Endpoint::Regular
        };

        let res = match adjacent {
            Some(gap) => {
                // η = r_j - ρ, so r - ρ = gap + η exactly
                let len = hi - lo;
                let pts = geometric_points(0.0, len, gap);
                integrate_chain(
                    |eta, _, to_lo| {
                        let rho = if lo == 0.0 { to_lo } else { hi - eta };
                        Ok(f(rho, gap + eta))
                    },
                    &pts,
                    Endpoint::Regular,
                    origin,
                    &self.inner,
                )?
            }
            None => {
                let pts = if lo > 0.0 {
                    geometric_points(lo, hi, lo)
                } else {
                    vec![0.0, hi]
                };
                integrate_chain(
                    |rho, from_lo, _| {
                        let rho = if lo == 0.0 { from_lo } else { rho };
                        Ok(f(rho, r - rho))
                    },
                    &pts,
                    origin,
                    Endpoint::Regular,
                    &self.inner,
                )?
            }
        };
        Ok(res.value)
    }

    /// Contribution of `r` beyond the support radius `R`, in the variable
    /// `σ = (R/r)^{e}` with `e = a_in + p shift - a_out`.
    fn tail(&self, u: &RadialPiecewisePower, wt: Weights) -> Result<QuadResult> {
        let ps = self.params.ps();
        let big_r = u.support_radius();
        let count = u.pieces().len();
        let e = wt.a_in + self.params.p() * wt.shift - wt.a_out;
        if e <= 0.0 {
            return Err(divergent("integrand not integrable at infinity"));
        }
        let right = if u.jumps_at(count) {
            Endpoint::Power(1.0 - ps)
        } else {
            Endpoint::Regular
        };
        let res = try_integrate_singular(
            |_, _, one_minus_sigma| {
                let ln_sigma = (-one_minus_sigma).ln_1p();
                let gap = big_r * (-ln_sigma / e).exp_m1();
                let r = big_r + gap;
                let mut g = 0.0;
                for j in 1..=count {
                    let adjacent = (j == count).then_some(gap);
                    g += self.off_diagonal(u, wt, j, r, adjacent, None)?;
                }
                Ok(g)
            },
            0.0,
            1.0,
            Endpoint::Regular,
            right,
            &self.outer,
        )?;
        Ok(res.scaled(big_r.powf(-e) / e))
    }

    /// `∬ g(|x|, |y|) |x - y|^{-N-ps} dx dy` over `|x| ∈ [x_lo, x_hi)`,
    /// `|y| ∈ [y_lo, y_hi)` with `x_hi <= y_lo`; `y_hi` may be infinite.
    ///
    /// `origin_exp` is the power (plus one) of `ρ^{N-1} g(ρ, r)` as `ρ -> 0`,
    /// used only when `x_lo = 0`.
    pub fn pair_integral<G>(
        &self,
        x: (f64, f64),
        y: (f64, f64),
        origin_exp: f64,
        g: G,
    ) -> Result<QuadResult>
    where
        G: Fn(PairPoint) -> f64,
    {
        let (x_lo, x_hi) = x;
        let (y_lo, y_hi) = y;
        if !(x_lo < x_hi && x_hi <= y_lo && y_lo < y_hi) {
            return Err(HardyError::InvalidParams(format!(
                "pair integral needs x_lo < x_hi <= y_lo < y_hi, got {x:?} {y:?}"
            )));
        }
        let n = self.params.n();
        let ps = self.params.ps();
        let adjacent = x_hi == y_lo;
        let origin = if x_lo == 0.0 {
            if origin_exp <= 0.0 {
                return Err(divergent("pair integrand not integrable at the origin"));
            }
            Endpoint::power_if_singular(origin_exp)
        } else {
            Endpoint::Regular
        };

        let separation = y_lo - x_hi;
        // ∫ ρ^{N-1} g(ρ, r) Φ(ρ/r) dρ, gap = r - x_hi
        let inner = |r: f64, gap: f64| -> Result<f64> {
            let f = |rho: f64, below_hi: f64, dist: f64| {
                let (t, q) = if r.is_finite() {
                    (rho / r, dist / r)
                } else {
                    (0.0, 1.0)
                };
                let point = PairPoint {
                    x: rho,
                    y: r,
                    x_below_hi: below_hi,
                    y_above_lo: gap - separation,
                };
                rho.powf(n - 1.0) * g(point) * self.phi(t, q)
            };
            let res = if adjacent {
                let pts = geometric_points(0.0, x_hi - x_lo, gap);
                integrate_chain(
                    |eta, _, to_lo| {
                        let rho = if x_lo == 0.0 { to_lo } else { x_hi - eta };
                        Ok(f(rho, eta, gap + eta))
                    },
                    &pts,
                    Endpoint::Regular,
                    origin,
                    &self.inner,
                )?
            } else {
                integrate_chain(
                    |rho, _, to_hi| Ok(f(rho, to_hi, r - rho)),
                    &[x_lo, x_hi],
                    origin,
                    Endpoint::Regular,
                    &self.inner,
                )?
            };
            Ok(res.value)
        };

        let res = if y_hi.is_finite() {
            let first = if adjacent {
                (y_hi - y_lo).min(y_lo) * 4f64.powi(-8)
            } else {
                y_lo
            };
            let pts = geometric_points(y_lo, y_hi, first);
            integrate_chain(
                |r, from_lo, _| Ok(r.powf(-1.0 - ps) * inner(r, from_lo + separation)?),
                &pts,
                Endpoint::Regular,
                Endpoint::Regular,
                &self.outer,
            )?
        } else {
            // r = y_lo σ^{-1/ps}
            let mut pts = vec![0.0, 0.5];
            if adjacent {
                pts.extend((2..=8).map(|i| 1.0 - 4f64.powi(-i)));
            }
            pts.push(1.0);
            integrate_chain(
                |_, _, one_minus_sigma| {
                    let ln_sigma = (-one_minus_sigma).ln_1p();
                    let gap = y_lo * (-ln_sigma / ps).exp_m1();
                    inner(y_lo + gap, gap + separation)
                },
                &pts,
                Endpoint::Regular,
                Endpoint::Regular,
                &self.outer,
            )?
            .scaled(y_lo.powf(-ps) / ps)
        };
        Ok(res.scaled(self.sphere))
    }
}
