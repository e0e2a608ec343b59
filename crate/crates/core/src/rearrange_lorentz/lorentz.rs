use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::constants::LorentzIndex;
use crate::error::{invalid, HardyError, Result};
use crate::numerics::{
    ball_volume, gamma_fn, sphere_area, try_integrate_points, try_integrate_singular, Endpoint,
    QuadConfig,
};
use crate::params::HardyParams;
use crate::radial::RadialPiecewisePower;

/// Symmetric decreasing step function: `h_k` on `R_{k-1} <= |x| < R_k`
/// with `R_0 = 0`, increasing radii and strictly decreasing positive heights.
#[derive(Debug, Clone, PartialEq)]
pub struct StepRadialFunction {
    radii: Vec<f64>,
    heights: Vec<f64>,
}

impl StepRadialFunction {
    pub fn new(radii: Vec<f64>, heights: Vec<f64>) -> Result<StepRadialFunction> {
        if radii.len() != heights.len() {
            return Err(HardyError::DimensionMismatch {
                expected: radii.len(),
                got: heights.len(),
            });
        }
        if radii.is_empty() {
            return invalid("step function needs at least one layer");
        }
        if !(radii[0] > 0.0)
            || radii.windows(2).any(|w| !(w[0] < w[1]))
            || !radii.iter().all(|r| r.is_finite())
        {
            return invalid("radii must be finite, positive and increasing");
        }
        if !(heights[heights.len() - 1] > 0.0)
            || heights.windows(2).any(|w| !(w[0] > w[1]))
            || !heights.iter().all(|h| h.is_finite())
        {
            return invalid("heights must be finite, positive and strictly decreasing");
        }
        Ok(StepRadialFunction { radii, heights })
    }

    pub fn indicator(radius: f64) -> Result<StepRadialFunction> {
        StepRadialFunction::new(vec![radius], vec![1.0])
    }

    /// `layers` random layers with radii in `(0.1, 3)` and cumulative heights.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, layers: usize) -> Result<StepRadialFunction> {
        if layers == 0 {
            return invalid("step function needs at least one layer");
        }
        let mut radii: Vec<f64> = (0..layers).map(|_| rng.gen_range(0.1..3.0)).collect();
        radii.sort_by(f64::total_cmp);
        radii.dedup();
        let mut heights: Vec<f64> = (0..radii.len()).map(|_| rng.gen_range(0.1..2.0)).collect();
        for i in (0..heights.len().saturating_sub(1)).rev() {
            heights[i] += heights[i + 1];
        }
        StepRadialFunction::new(radii, heights)
    }

    /// [`StepRadialFunction::random`] driven by a ChaCha8 stream from `seed`.
    pub fn from_seed(seed: u64, layers: usize) -> Result<StepRadialFunction> {
        StepRadialFunction::random(&mut ChaCha8Rng::seed_from_u64(seed), layers)
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn heights(&self) -> &[f64] {
        &self.heights
    }

    /// `u(·/λ)`.
    pub fn dilated(&self, lambda: f64) -> Result<StepRadialFunction> {
        if !(lambda > 0.0) {
            return invalid(format!("dilation factor must be positive, got {lambda}"));
        }
        StepRadialFunction::new(
            self.radii.iter().map(|r| r * lambda).collect(),
            self.heights.clone(),
        )
    }

    pub fn to_radial(&self) -> Result<RadialPiecewisePower> {
        RadialPiecewisePower::step(&self.radii, &self.heights)
    }

    /// `|B_{R_k}|` in `R^N`.
    fn volumes(&self, dim: u32) -> impl Iterator<Item = f64> + '_ {
        let unit = ball_volume(dim);
        self.radii.iter().map(move |r| unit * r.powi(dim as i32))
    }

    /// `(V_k, h_{k+1}, h_k)`: `μ_u = V_k` for `t ∈ [h_{k+1}, h_k)`.
    fn levels(&self, dim: u32) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        let below = self
            .heights
            .iter()
            .skip(1)
            .copied()
            .chain(std::iter::once(0.0));
        self.volumes(dim)
            .zip(self.heights.iter().copied())
            .zip(below)
            .map(|((v, hi), lo)| (v, lo, hi))
    }

    /// Lines `radius height`, innermost layer first; `#` starts a comment.
    pub fn parse(text: &str) -> Result<StepRadialFunction> {
        let mut radii = Vec::new();
        let mut heights = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let err = |msg: String| HardyError::Parse { line, msg };
            let fields: Vec<&str> = content.split_whitespace().collect();
            let [r, h] = fields.as_slice() else {
                return Err(err(format!("expected 'radius height', got '{content}'")));
            };
            radii.push(
                r.parse::<f64>()
                    .map_err(|_| err(format!("bad radius '{r}'")))?,
            );
            heights.push(
                h.parse::<f64>()
                    .map_err(|_| err(format!("bad height '{h}'")))?,
            );
        }
        StepRadialFunction::new(radii, heights).map_err(|e| HardyError::Parse {
            line: 0,
            msg: e.to_string(),
        })
    }

    pub fn from_file(path: &Path) -> Result<StepRadialFunction> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| HardyError::InvalidParams(format!("{}: {e}", path.display())))?;
        StepRadialFunction::parse(&text)
    }
}

/// `|{x ∈ R^N : u(x) > t}|`.
pub fn distribution_function(u: &StepRadialFunction, dim: u32, t: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return invalid(format!("distribution function needs t >= 0, got {t}"));
    }
    let active = u.heights.iter().take_while(|&&h| h > t).count();
    Ok(match active {
        0 => 0.0,
        k => ball_volume(dim) * u.radii[k - 1].powi(dim as i32),
    })
}

/// `‖u‖_q`.
pub fn lq_norm(u: &StepRadialFunction, dim: u32, q: f64) -> Result<f64> {
    lorentz_norm(u, dim, q, LorentzIndex::Finite(q))
}

/// `‖u‖_{q,r} = (q ∫_0^∞ μ_u(t)^{r/q} t^{r-1} dt)^{1/r}`, and
/// `sup_t μ_u(t)^{1/q} t` for `r = ∞`.
pub fn lorentz_norm(u: &StepRadialFunction, dim: u32, q: f64, r: LorentzIndex) -> Result<f64> {
    if !(q >= 1.0 && q.is_finite()) {
        return invalid(format!("Lorentz norm needs q >= 1, got {q}"));
    }
    match r {
        LorentzIndex::Finite(r) if !(r >= 1.0 && r.is_finite()) => {
            invalid(format!("Lorentz norm needs r >= 1, got {r}"))
        }
        LorentzIndex::Finite(r) => {
            // log of V^{r/q} (h_k^r - h_{k+1}^r), summed in log space so that
            // large r neither overflows nor underflows
            let logs: Vec<f64> = u
                .levels(dim)
                .map(|(v, lo, hi)| {
                    r * (v.ln() / q + hi.ln()) + (-(r * (lo / hi).ln()).exp_m1()).ln()
                })
                .collect();
            let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let sum: f64 = logs.iter().map(|l| (l - top).exp()).sum();
            Ok((((q / r).ln() + top + sum.ln()) / r).exp())
        }
        LorentzIndex::Infinite => Ok(u
            .levels(dim)
            .map(|(v, _, hi)| v.powf(1.0 / q) * hi)
            .fold(0.0, f64::max)),
    }
}

/// Left and right side of a comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sides {
    pub lhs: f64,
    pub rhs: f64,
}

impl Sides {
    pub fn rhs_minus_lhs(&self) -> f64 {
        self.rhs - self.lhs
    }

    /// `|lhs - rhs| / max(|lhs|, |rhs|)`.
    pub fn relative_defect(&self) -> f64 {
        let scale = self.lhs.abs().max(self.rhs.abs());
        if scale == 0.0 {
            0.0
        } else {
            (self.lhs - self.rhs).abs() / scale
        }
    }
}

/// `∫ u^p |x|^{-ps} dx` as a sum over annuli.
pub fn weighted_lp(params: &HardyParams, u: &StepRadialFunction) -> Result<f64> {
    if !params.subcritical() {
        return invalid("weighted norm of a step function is finite only for N > ps");
    }
    let gap = params.n() - params.ps();
    let sphere = sphere_area(params.dim());
    let mut inner = 0.0;
    let mut total = 0.0;
    for (&r, &h) in u.radii.iter().zip(&u.heights) {
        let outer = r.powf(gap);
        total += h.powf(params.p()) * (outer - inner);
        inner = outer;
    }
    Ok(sphere * total / gap)
}

/// `lhs = ‖u‖_{p*,p}` against `rhs = (N/|S^{N-1}|)^{s/N} (∫ u^p |x|^{-ps})^{1/p}`.
pub fn symmdecr_identity(params: &HardyParams, u: &StepRadialFunction) -> Result<Sides> {
    let p_star = params
        .p_star()
        .ok_or_else(|| HardyError::InvalidParams("the identity needs N > ps".into()))?;
    let n = params.n();
    let lhs = lorentz_norm(u, params.dim(), p_star, LorentzIndex::Finite(params.p()))?;
    let rhs = (n / sphere_area(params.dim())).powf(params.s() / n)
        * weighted_lp(params, u)?.powf(1.0 / params.p());
    Ok(Sides { lhs, rhs })
}

/// `lhs - rhs` of [`symmdecr_identity`].
pub fn symmdecr_identity_gap(params: &HardyParams, u: &StepRadialFunction) -> Result<f64> {
    symmdecr_identity(params, u).map(|s| s.lhs - s.rhs)
}

/// `lhs = ‖u‖_{q,r}` against `rhs = (q/r)^{1/r} (p/q)^{1/p} ‖u‖_{q,p}`, `p < r`.
pub fn lorentz_nesting(
    u: &StepRadialFunction,
    dim: u32,
    q: f64,
    p: f64,
    r: LorentzIndex,
) -> Result<Sides> {
    if !(p >= 1.0) {
        return invalid(format!("nesting needs p >= 1, got {p}"));
    }
    let prefactor = match r {
        LorentzIndex::Finite(r) if !(r > p) => {
            return invalid(format!("nesting needs r > p, got r = {r}, p = {p}"))
        }
        LorentzIndex::Finite(r) => (q / r).powf(1.0 / r),
        LorentzIndex::Infinite => 1.0,
    };
    let lhs = lorentz_norm(u, dim, q, r)?;
    let rhs = prefactor * (p / q).powf(1.0 / p) * lorentz_norm(u, dim, q, LorentzIndex::Finite(p))?;
    Ok(Sides { lhs, rhs })
}

/// `rhs - lhs` of [`lorentz_nesting`].
pub fn lorentz_nesting_gap(
    u: &StepRadialFunction,
    dim: u32,
    q: f64,
    p: f64,
    r: LorentzIndex,
) -> Result<f64> {
    lorentz_nesting(u, dim, q, p, r).map(|s| s.rhs_minus_lhs())
}

/// Quadrature of `∫_0^∞ e^{-a z²} a^{c-1} da` against `Γ(c) z^{-2c}`,
/// `c = (N + ps)/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianCheck {
    pub integral: f64,
    pub error_estimate: f64,
    pub closed_form: f64,
}

impl GaussianCheck {
    pub fn gap(&self) -> f64 {
        self.integral - self.closed_form
    }
}

pub fn gaussian_decomposition(params: &HardyParams, z: f64) -> Result<GaussianCheck> {
    gaussian_subordination(0.5 * (params.n() + params.ps()), z)
}

/// `∫_0^∞ e^{-a z²} a^{c-1} da` against `Γ(c) z^{-2c}` for any `c > 0`.
pub fn gaussian_subordination(c: f64, z: f64) -> Result<GaussianCheck> {
    if !(z > 0.0 && z.is_finite()) {
        return invalid(format!("z must be positive, got {z}"));
    }
    if !(c > 0.0 && c.is_finite()) {
        return invalid(format!("exponent c must be positive, got {c}"));
    }
    let gamma = gamma_fn(c)?;
    // truncate where the incomplete-gamma tail ~ B^{c-1} e^{-B} is negligible
    let mut cutoff: f64 = 36.0;
    while (c - 1.0) * cutoff.ln() - cutoff > (1e-17 * gamma).ln() {
        cutoff *= 1.5;
    }
    let z2 = z * z;
    let cfg = QuadConfig::new(1e-13, 0.0);
    let f = |a: f64| (-a * z2).exp() * a.powf(c - 1.0);
    let head = try_integrate_singular(
        |a, _, _| Ok(f(a)),
        0.0,
        1.0 / z2,
        Endpoint::power_if_singular(c),
        Endpoint::Regular,
        &cfg,
    )?;
    let mut pts = vec![1.0 / z2];
    while *pts.last().expect("nonempty") < cutoff / z2 {
        pts.push(2.0 * pts.last().expect("nonempty"));
    }
    let tail = try_integrate_points(|a| Ok(f(a)), &pts, &cfg)?;
    let total = head + tail;
    Ok(GaussianCheck {
        integral: total.value,
        error_estimate: total.error_estimate,
        closed_form: gamma * z.powf(-2.0 * c),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::make_params;
    use crate::radial::weighted_norm;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn distribution_of_steps() {
        let ball = StepRadialFunction::indicator(2.0).unwrap();
        let vol = ball_volume(3) * 8.0;
        assert!(rel(distribution_function(&ball, 3, 0.5).unwrap(), vol) < 1e-15);
        assert_eq!(distribution_function(&ball, 3, 1.0).unwrap(), 0.0);
        let two = StepRadialFunction::new(vec![1.0, 2.0], vec![3.0, 1.0]).unwrap();
        assert!(
            rel(
                distribution_function(&two, 2, 0.5).unwrap(),
                4.0 * std::f64::consts::PI
            ) < 1e-15
        );
        assert!(
            rel(
                distribution_function(&two, 2, 2.0).unwrap(),
                std::f64::consts::PI
            ) < 1e-15
        );
        assert!(distribution_function(&two, 2, -1.0).is_err());
        // right-continuous and nonincreasing around every height
        for &h in two.heights() {
            let at = distribution_function(&two, 2, h).unwrap();
            let after = distribution_function(&two, 2, h + 1e-9).unwrap();
            let before = distribution_function(&two, 2, h - 1e-9).unwrap();
            assert_eq!(at, after);
            assert!(before >= at);
        }
    }

    #[test]
    fn indicator_norms() {
        let u = StepRadialFunction::indicator(1.5).unwrap();
        let vol = ball_volume(2) * 1.5f64.powi(2);
        for &(q, r) in &[(2.0, 1.0), (3.0, 2.5), (1.0, 4.0)] {
            let norm = lorentz_norm(&u, 2, q, LorentzIndex::Finite(r)).unwrap();
            assert!(rel(norm, (q / r).powf(1.0 / r) * vol.powf(1.0 / q)) < 1e-14);
        }
        let weak = lorentz_norm(&u, 2, 3.0, LorentzIndex::Infinite).unwrap();
        assert!(rel(weak, vol.powf(1.0 / 3.0)) < 1e-15);
        assert!(lorentz_norm(&u, 2, 0.5, LorentzIndex::Finite(2.0)).is_err());
        assert!(lorentz_norm(&u, 2, 2.0, LorentzIndex::Finite(0.5)).is_err());
    }

    #[test]
    fn diagonal_index_is_lq() {
        let u = StepRadialFunction::new(vec![0.5, 1.0, 2.5], vec![4.0, 2.0, 0.5]).unwrap();
        let unit = ball_volume(3);
        let mut inner = 0.0;
        let mut direct = 0.0;
        for (&r, &h) in u.radii().iter().zip(u.heights()) {
            direct += h.powf(2.5) * unit * (r.powi(3) - inner);
            inner = r.powi(3);
        }
        assert!(rel(lq_norm(&u, 3, 2.5).unwrap(), direct.powf(1.0 / 2.5)) < 1e-14);
    }

    #[test]
    fn symmdecr_identity_holds() {
        let hp = make_params(1, 0.5, 1.0).unwrap();
        let ball = StepRadialFunction::indicator(1.0).unwrap();
        assert!(symmdecr_identity_gap(&hp, &ball).unwrap().abs() < 1e-14);

        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for &(dim, s, p) in &[(2u32, 0.5, 2.0), (3, 0.3, 1.5), (1, 0.2, 4.0)] {
            let hp = make_params(dim, s, p).unwrap();
            for layers in 1..=4 {
                let u = StepRadialFunction::random(&mut rng, layers).unwrap();
                let sides = symmdecr_identity(&hp, &u).unwrap();
                assert!(sides.relative_defect() < 1e-12, "{sides:?}");
                let v = u.dilated(2.7).unwrap();
                assert!(symmdecr_identity(&hp, &v).unwrap().relative_defect() < 1e-12);
            }
        }
        let hp = make_params(1, 0.75, 2.0).unwrap();
        assert!(symmdecr_identity_gap(&hp, &ball).is_err());
    }

    #[test]
    fn weighted_lp_matches_quadrature() {
        let hp = make_params(2, 0.3, 2.0).unwrap();
        let u = StepRadialFunction::new(vec![0.4, 1.1, 2.0], vec![3.0, 1.5, 0.2]).unwrap();
        let quad = weighted_norm(&hp, &u.to_radial().unwrap(), 1e-12)
            .unwrap()
            .value;
        assert!(rel(weighted_lp(&hp, &u).unwrap(), quad) < 1e-11);
    }

    #[test]
    fn nesting_inequality() {
        let ball = StepRadialFunction::indicator(0.8).unwrap();
        for r in [LorentzIndex::Finite(3.0), LorentzIndex::Infinite] {
            let sides = lorentz_nesting(&ball, 2, 2.0, 1.0, r).unwrap();
            assert!(sides.relative_defect() < 1e-14, "{sides:?}");
        }
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..200 {
            let u = StepRadialFunction::random(&mut rng, 3).unwrap();
            let sides = lorentz_nesting(&u, 2, 2.0, 1.0, LorentzIndex::Finite(3.0)).unwrap();
            assert!(sides.rhs_minus_lhs() >= -1e-12 * sides.rhs);
            let weak = lorentz_nesting(&u, 2, 2.0, 1.0, LorentzIndex::Infinite).unwrap();
            assert!(weak.rhs_minus_lhs() >= -1e-12 * weak.rhs);
        }
        // the finite-r bound tends to the weak one
        let u = StepRadialFunction::random(&mut rng, 3).unwrap();
        let far = lorentz_nesting(&u, 2, 2.0, 1.0, LorentzIndex::Finite(1e6)).unwrap();
        let weak = lorentz_nesting(&u, 2, 2.0, 1.0, LorentzIndex::Infinite).unwrap();
        assert!(rel(far.rhs, weak.rhs) < 1e-4 && rel(far.lhs, weak.lhs) < 1e-4);
        assert!(lorentz_nesting(&u, 2, 2.0, 3.0, LorentzIndex::Finite(2.0)).is_err());
    }

    #[test]
    fn gaussian_identity() {
        let g = gaussian_subordination(1.0, 1.0).unwrap();
        assert!((g.integral - 1.0).abs() < 1e-12);
        assert!(gaussian_subordination(0.0, 1.0).is_err());

        let hp = make_params(1, 0.5, 1.0).unwrap();
        let g = gaussian_decomposition(&hp, 2.0).unwrap();
        assert!(rel(g.integral, gamma_fn(0.75).unwrap() * 2f64.powf(-1.5)) < 1e-10);

        for &(dim, s, p) in &[(3u32, 0.9, 2.0), (2, 0.1, 1.0), (4, 0.5, 3.0)] {
            let hp = make_params(dim, s, p).unwrap();
            for z in [0.1, 1.0, 7.0] {
                let g = gaussian_decomposition(&hp, z).unwrap();
                assert!(g.gap().abs() < 1e-8 * g.closed_form, "z = {z}: {g:?}");
            }
        }
        assert!(gaussian_decomposition(&hp, 0.0).is_err());
    }

    #[test]
    fn parse_layers() {
        let u = StepRadialFunction::parse("# two layers\n1 3\n2 1\n").unwrap();
        assert_eq!(u.heights(), &[3.0, 1.0]);
        assert!(matches!(
            StepRadialFunction::parse("1 x"),
            Err(HardyError::Parse { line: 1, .. })
        ));
        assert!(StepRadialFunction::parse("1 1\n2 3").is_err());
    }
}
