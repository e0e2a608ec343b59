use std::path::Path;

use crate::error::{invalid, HardyError, Result};
use crate::exec::Execution;
use crate::numerics::hurwitz_zeta;

/// Nonnegative function on `{-M, ..., M}`, zero elsewhere on the lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction1D {
    radius: usize,
    values: Vec<f64>,
}

/// Site of the `k`-th largest value: `0, 1, -1, 2, -2, ...`.
fn placement_site(k: usize) -> i64 {
    let half = k.div_ceil(2) as i64;
    if k % 2 == 1 {
        half
    } else {
        -half
    }
}

impl GridFunction1D {
    /// `values[i]` sits at site `i - radius`.
    pub fn new(radius: usize, values: Vec<f64>) -> Result<GridFunction1D> {
        if values.len() != 2 * radius + 1 {
            return Err(HardyError::DimensionMismatch {
                expected: 2 * radius + 1,
                got: values.len(),
            });
        }
        if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return invalid(format!(
                "lattice values must be finite and nonnegative, got {v}"
            ));
        }
        Ok(GridFunction1D { radius, values })
    }

    /// Smallest symmetric window holding all listed sites; unlisted sites are 0.
    pub fn from_sites(sites: &[(i64, f64)]) -> Result<GridFunction1D> {
        let radius = sites
            .iter()
            .map(|(s, _)| s.unsigned_abs() as usize)
            .max()
            .unwrap_or(0);
        let mut values = vec![0.0; 2 * radius + 1];
        for &(site, v) in sites {
            values[(site + radius as i64) as usize] = v;
        }
        GridFunction1D::new(radius, values)
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, site: i64) -> f64 {
        let idx = site + self.radius as i64;
        usize::try_from(idx)
            .ok()
            .and_then(|i| self.values.get(i))
            .copied()
            .unwrap_or(0.0)
    }

    /// `(site, value)` over the window.
    pub fn sites(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        let m = self.radius as i64;
        self.values
            .iter()
            .enumerate()
            .map(move |(i, &v)| (i as i64 - m, v))
    }

    /// Number of sites where `u > t`.
    pub fn distribution(&self, t: f64) -> f64 {
        self.values.iter().filter(|&&v| v > t).count() as f64
    }

    /// `ℓ_q` norm; `q = ∞` gives the maximum.
    pub fn lq_norm(&self, q: f64) -> f64 {
        if q.is_infinite() {
            self.values.iter().copied().fold(0.0, f64::max)
        } else {
            self.values
                .iter()
                .map(|v| v.powf(q))
                .sum::<f64>()
                .powf(1.0 / q)
        }
    }

    /// Lines `site value`; `#` starts a comment.
    pub fn parse(text: &str) -> Result<GridFunction1D> {
        let mut sites = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let err = |msg: String| HardyError::Parse { line, msg };
            let fields: Vec<&str> = content.split_whitespace().collect();
            let [site, value] = fields.as_slice() else {
                return Err(err(format!("expected 'site value', got '{content}'")));
            };
            let site: i64 = site
                .parse()
                .map_err(|_| err(format!("bad site '{site}'")))?;
            let value: f64 = value
                .parse()
                .map_err(|_| err(format!("bad value '{value}'")))?;
            if !(value.is_finite() && value >= 0.0) {
                return Err(err(format!(
                    "value must be finite and nonnegative, got {value}"
                )));
            }
            sites.push((site, value));
        }
        GridFunction1D::from_sites(&sites)
    }

    pub fn from_file(path: &Path) -> Result<GridFunction1D> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| HardyError::InvalidParams(format!("{}: {e}", path.display())))?;
        GridFunction1D::parse(&text)
    }
}

/// Symmetric decreasing rearrangement: values sorted in decreasing order and
/// placed at `0, 1, -1, 2, -2, ...` within the same window.
pub fn rearrange(u: &GridFunction1D) -> GridFunction1D {
    let mut sorted = u.values.clone();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let m = u.radius as i64;
    let mut values = vec![0.0; u.values.len()];
    for (k, v) in sorted.into_iter().enumerate() {
        values[(placement_site(k) + m) as usize] = v;
    }
    GridFunction1D {
        radius: u.radius,
        values,
    }
}

/// Positive, decreasing interaction weight on lattice distances `d >= 1`.
pub trait Kernel: Sync {
    fn weight(&self, d: u64) -> f64;
    /// `Σ_{d >= from} weight(d)`.
    fn tail(&self, from: u64) -> f64;
}

/// `d^{-exponent}`, summable for `exponent > 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerKernel(f64);

impl PowerKernel {
    pub fn new(exponent: f64) -> Result<PowerKernel> {
        if !(exponent > 1.0 && exponent.is_finite()) {
            return invalid(format!("power kernel needs exponent > 1, got {exponent}"));
        }
        Ok(PowerKernel(exponent))
    }

    pub fn exponent(&self) -> f64 {
        self.0
    }
}

impl Kernel for PowerKernel {
    fn weight(&self, d: u64) -> f64 {
        (d as f64).powf(-self.0)
    }

    fn tail(&self, from: u64) -> f64 {
        hurwitz_zeta(self.0, from.max(1) as f64).expect("exponent > 1 checked at construction")
    }
}

/// `base^{-d}` with `base > 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentialKernel(f64);

impl ExponentialKernel {
    pub fn new(base: f64) -> Result<ExponentialKernel> {
        if !(base > 1.0 && base.is_finite()) {
            return invalid(format!("exponential kernel needs base > 1, got {base}"));
        }
        Ok(ExponentialKernel(base))
    }
}

impl Kernel for ExponentialKernel {
    fn weight(&self, d: u64) -> f64 {
        self.0.powf(-(d as f64))
    }

    fn tail(&self, from: u64) -> f64 {
        self.0.powf(-(from.max(1) as f64)) / (1.0 - 1.0 / self.0)
    }
}

/// Convex `J` with `J(0) = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConvexCost {
    /// `|t|^q`, `q >= 1`.
    Power(f64),
    /// `plus · t_+ + minus · t_-`.
    Split { plus: f64, minus: f64 },
}

impl ConvexCost {
    pub fn validate(self) -> Result<ConvexCost> {
        match self {
            ConvexCost::Power(q) if !(q >= 1.0 && q.is_finite()) => {
                invalid(format!("|t|^q is convex only for q >= 1, got {q}"))
            }
            ConvexCost::Split { plus, minus } if !(plus >= 0.0 && minus >= 0.0) => {
                invalid("split cost needs nonnegative slopes")
            }
            ok => Ok(ok),
        }
    }

    pub fn eval(self, t: f64) -> f64 {
        match self {
            ConvexCost::Power(q) => t.abs().powf(q),
            ConvexCost::Split { plus, minus } => {
                if t >= 0.0 {
                    plus * t
                } else {
                    -minus * t
                }
            }
        }
    }
}

/// `Σ_{i≠j} J(u_i - u_j) k(|i - j|)` over sites of the window only.
pub fn lattice_energy<K: Kernel + ?Sized>(u: &GridFunction1D, kernel: &K, j: ConvexCost) -> f64 {
    let v = &u.values;
    let mut total = 0.0;
    for a in 0..v.len() {
        for b in (a + 1)..v.len() {
            let diff = v[a] - v[b];
            if diff != 0.0 {
                total += (j.eval(diff) + j.eval(-diff)) * kernel.weight((b - a) as u64);
            }
        }
    }
    total
}

/// The same sum over all of `Z`, with `u = 0` outside the window.
pub fn lattice_energy_extended<K: Kernel + ?Sized>(
    u: &GridFunction1D,
    kernel: &K,
    j: ConvexCost,
) -> f64 {
    let m = u.radius as i64;
    let outside: f64 = u
        .sites()
        .filter(|&(_, v)| v != 0.0)
        .map(|(x, v)| {
            let reach = kernel.tail((m - x + 1) as u64) + kernel.tail((m + x + 1) as u64);
            (j.eval(v) + j.eval(-v)) * reach
        })
        .sum();
    lattice_energy(u, kernel, j) + outside
}

/// `E[u] - E[u*]` for the energy on all of `Z`.
pub fn rearrangement_gap<K: Kernel + ?Sized>(u: &GridFunction1D, kernel: &K, j: ConvexCost) -> f64 {
    lattice_energy_extended(u, kernel, j) - lattice_energy_extended(&rearrange(u), kernel, j)
}

/// Outcome of an exhaustive rearrangement sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSummary {
    pub total: usize,
    /// Gaps `>= -1e-12 · E[u]`.
    pub nonnegative: usize,
    pub min_gap: f64,
    /// Values of the function with the smallest gap.
    pub worst: Vec<f64>,
}

impl SweepSummary {
    pub fn all_nonnegative(&self) -> bool {
        self.nonnegative == self.total
    }
}

/// Largest sweep accepted by [`exhaustive_sweep`].
const MAX_SWEEP: usize = 1 << 26;

/// Rearrangement gaps of every function on `{-M, ..., M}` with values in
/// `{0, 1, ..., max_value}`.
pub fn exhaustive_sweep<K: Kernel + ?Sized>(
    radius: usize,
    max_value: u32,
    kernel: &K,
    j: ConvexCost,
    exec: Execution,
) -> Result<SweepSummary> {
    let j = j.validate()?;
    let len = 2 * radius + 1;
    let levels = max_value as usize + 1;
    let total = u32::try_from(len)
        .ok()
        .and_then(|l| levels.checked_pow(l))
        .filter(|&t| t <= MAX_SWEEP)
        .ok_or_else(|| {
            HardyError::InvalidParams(format!("{levels}^{len} functions is too many to enumerate"))
        })?;

    let decode = |mut index: usize| {
        let mut values = vec![0.0; len];
        for slot in values.iter_mut() {
            *slot = (index % levels) as f64;
            index /= levels;
        }
        GridFunction1D { radius, values }
    };
    let gaps = exec.map_range(total, |index| {
        let u = decode(index);
        let gap = rearrangement_gap(&u, kernel, j);
        let ok = gap >= -1e-12 * lattice_energy_extended(&u, kernel, j).max(f64::MIN_POSITIVE);
        (gap, ok)
    });
    let (worst_index, min_gap) = gaps
        .iter()
        .enumerate()
        .map(|(i, &(g, _))| (i, g))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("at least one function");
    Ok(SweepSummary {
        total,
        nonnegative: gaps.iter().filter(|(_, ok)| *ok).count(),
        min_gap,
        worst: decode(worst_index).values,
    })
}
