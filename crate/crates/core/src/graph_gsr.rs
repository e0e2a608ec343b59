//! Ground-state representation on finite weighted graphs.
//!
//! With a positive ground state `ω` and `v = u/ω`, the energy
//! `E[u] = Σ_{i,j} |u_i - u_j|^p k(i,j)` splits exactly into
//! `Σ Φ_u(i,j) k(i,j) + Σ V_i |u_i|^p`, where `V` is the potential induced
//! by `ω` and every `Φ_u(i,j)` is nonnegative.
//!
//! The weighted energy `E_ω` uses the symmetric weight `ω_i^{p/2} ω_j^{p/2}`.

use std::path::Path;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::constants::remainder_constant;
use crate::error::{invalid, HardyError, Result};

/// Symmetric nonnegative edge weights with zero diagonal, stored densely.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    n: usize,
    weights: Vec<f64>,
}

impl WeightedGraph {
    /// Graph on `n` nodes with no edges.
    pub fn empty(n: usize) -> Result<WeightedGraph> {
        if n == 0 {
            return invalid("graph needs at least one node");
        }
        Ok(WeightedGraph {
            n,
            weights: vec![0.0; n * n],
        })
    }

    /// Build from a full row-major matrix, checking symmetry and signs.
    pub fn from_matrix(n: usize, weights: Vec<f64>) -> Result<WeightedGraph> {
        if weights.len() != n * n {
            return Err(HardyError::DimensionMismatch {
                expected: n * n,
                got: weights.len(),
            });
        }
        let mut g = WeightedGraph::empty(n)?;
        for i in 0..n {
            for j in 0..n {
                let w = weights[i * n + j];
                if w != weights[j * n + i] {
                    return invalid(format!("weights not symmetric at ({i}, {j})"));
                }
                if i != j {
                    g.set_weight(i, j, w)?;
                } else if w != 0.0 {
                    return invalid(format!("nonzero diagonal weight at node {i}"));
                }
            }
        }
        Ok(g)
    }

    /// Path `0 - 1 - ... - (n-1)` with unit nearest-neighbour weights.
    pub fn path(n: usize) -> Result<WeightedGraph> {
        let mut g = WeightedGraph::empty(n)?;
        for i in 1..n {
            g.set_weight(i - 1, i, 1.0)?;
        }
        Ok(g)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.weights[i * self.n + j]
    }

    /// Set `k(i,j) = k(j,i) = w`.
    pub fn set_weight(&mut self, i: usize, j: usize, w: f64) -> Result<()> {
        if i >= self.n || j >= self.n {
            return invalid(format!(
                "edge ({i}, {j}) outside a graph of {} nodes",
                self.n
            ));
        }
        if i == j {
            return invalid(format!("self-loop at node {i}"));
        }
        if !(w >= 0.0) || !w.is_finite() {
            return invalid(format!(
                "edge weight must be finite and nonnegative, got {w}"
            ));
        }
        self.weights[i * self.n + j] = w;
        self.weights[j * self.n + i] = w;
        Ok(())
    }

    /// Iterate over ordered pairs `(i, j, k(i,j))` with nonzero weight.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n).flat_map(move |i| {
            (0..self.n).filter_map(move |j| {
                let w = self.weight(i, j);
                (w != 0.0).then_some((i, j, w))
            })
        })
    }
}

/// Complex values attached to the nodes of a graph.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeFunction(pub Vec<Complex64>);

impl NodeFunction {
    pub fn real(values: &[f64]) -> NodeFunction {
        NodeFunction(values.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.0
    }

    /// Multiply every value by a real factor.
    pub fn scaled(&self, lambda: f64) -> NodeFunction {
        NodeFunction(self.0.iter().map(|z| z * lambda).collect())
    }
}

fn check_len(g: &WeightedGraph, f: &NodeFunction) -> Result<()> {
    if f.len() != g.len() {
        return Err(HardyError::DimensionMismatch {
            expected: g.len(),
            got: f.len(),
        });
    }
    Ok(())
}

fn check_p(p: f64) -> Result<()> {
    if !(p >= 1.0) || !p.is_finite() {
        return invalid(format!("p must be a finite real >= 1, got {p}"));
    }
    Ok(())
}

/// Real parts of a strictly positive ground state.
fn ground_state(g: &WeightedGraph, omega: &NodeFunction) -> Result<Vec<f64>> {
    check_len(g, omega)?;
    omega
        .values()
        .iter()
        .enumerate()
        .map(|(node, z)| {
            if z.im == 0.0 && z.re > 0.0 && z.re.is_finite() {
                Ok(z.re)
            } else {
                Err(HardyError::NonpositiveGroundState { node, value: z.re })
            }
        })
        .collect()
}

/// `x |x|^{e-1}` with the value 0 at `x = 0`.
fn sgnpow(x: f64, e: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x.signum() * x.abs().powf(e)
    }
}

/// `Σ_{i,j} |u_i - u_j|^p k(i,j)` over ordered pairs.
pub fn graph_energy(g: &WeightedGraph, u: &NodeFunction, p: f64) -> Result<f64> {
    check_p(p)?;
    check_len(g, u)?;
    let u = u.values();
    Ok(g.edges()
        .map(|(i, j, k)| (u[i] - u[j]).norm().powf(p) * k)
        .sum())
}

/// `Σ_{i,j} |v_i - v_j|^p ω_i^{p/2} ω_j^{p/2} k(i,j)`.
pub fn weighted_energy(
    g: &WeightedGraph,
    omega: &NodeFunction,
    v: &NodeFunction,
    p: f64,
) -> Result<f64> {
    check_p(p)?;
    let w = ground_state(g, omega)?;
    check_len(g, v)?;
    let v = v.values();
    Ok(g.edges()
        .map(|(i, j, k)| (v[i] - v[j]).norm().powf(p) * (w[i] * w[j]).powf(0.5 * p) * k)
        .sum())
}

/// `V_i = 2 ω_i^{1-p} Σ_j (ω_i - ω_j)|ω_i - ω_j|^{p-2} k(i,j)`.
pub fn induced_potential(g: &WeightedGraph, omega: &NodeFunction, p: f64) -> Result<Vec<f64>> {
    check_p(p)?;
    let w = ground_state(g, omega)?;
    Ok((0..g.len())
        .map(|i| {
            let s: f64 = (0..g.len())
                .map(|j| sgnpow(w[i] - w[j], p - 1.0) * g.weight(i, j))
                .sum();
            2.0 * w[i].powf(1.0 - p) * s
        })
        .collect())
}

/// Terms of the ground-state representation identity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GsrReport {
    pub energy: f64,
    pub phi_sum: f64,
    pub potential_term: f64,
    /// Smallest `Φ_u(i,j)` over edges.
    pub phi_min: f64,
    /// Magnitude used for relative comparisons.
    pub scale: f64,
}

impl GsrReport {
    /// `|E - (ΣΦk + ΣV|u|^p)| / scale`.
    pub fn relative_defect(&self) -> f64 {
        if self.scale == 0.0 {
            return 0.0;
        }
        (self.energy - self.phi_sum - self.potential_term).abs() / self.scale
    }
}

/// `Φ_u(i,j) = |u_i - u_j|^p - (ω_i|v_i|^p - ω_j|v_j|^p) sgn(ω_i-ω_j)|ω_i-ω_j|^{p-1}`.
fn phi_pair(u: &[Complex64], w: &[f64], v: &[Complex64], i: usize, j: usize, p: f64) -> f64 {
    let diff = (u[i] - u[j]).norm().powf(p);
    if w[i] == w[j] {
        return diff;
    }
    let a = w[i] * v[i].norm().powf(p);
    let b = w[j] * v[j].norm().powf(p);
    diff - (a - b) * sgnpow(w[i] - w[j], p - 1.0)
}

/// Evaluate both sides of `E[u] = Σ Φ_u k + Σ V |u|^p`.
pub fn gsr_identity(
    g: &WeightedGraph,
    omega: &NodeFunction,
    u: &NodeFunction,
    p: f64,
) -> Result<GsrReport> {
    check_p(p)?;
    let w = ground_state(g, omega)?;
    check_len(g, u)?;
    let u = u.values();
    let v: Vec<Complex64> = u.iter().zip(&w).map(|(z, wi)| z / wi).collect();
    let potential = induced_potential(g, omega, p)?;

    let mut energy = 0.0;
    let mut phi_sum = 0.0;
    let mut phi_min = f64::INFINITY;
    for (i, j, k) in g.edges() {
        energy += (u[i] - u[j]).norm().powf(p) * k;
        let phi = phi_pair(u, &w, &v, i, j, p);
        phi_sum += phi * k;
        phi_min = phi_min.min(phi);
    }
    let mut potential_term = 0.0;
    let mut potential_abs = 0.0;
    for (vi, ui) in potential.iter().zip(u) {
        let t = vi * ui.norm().powf(p);
        potential_term += t;
        potential_abs += t.abs();
    }
    if phi_min == f64::INFINITY {
        phi_min = 0.0;
    }
    Ok(GsrReport {
        energy,
        phi_sum,
        potential_term,
        phi_min,
        scale: energy.abs() + phi_sum.abs() + potential_abs,
    })
}

/// Remainder gap `E[u] - Σ V|u|^p - c_p E_ω[u/ω]` and a magnitude for it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RemainderGap {
    pub gap: f64,
    pub remainder: f64,
    pub scale: f64,
}

/// `E[u] - Σ V|u|^p - c_p E_ω[v]` for `p >= 2`.
pub fn gsr_remainder_gap(
    g: &WeightedGraph,
    omega: &NodeFunction,
    u: &NodeFunction,
    p: f64,
) -> Result<RemainderGap> {
    if !(p >= 2.0) {
        return invalid(format!("remainder inequality needs p >= 2, got {p}"));
    }
    let cp = remainder_constant(p)?;
    let report = gsr_identity(g, omega, u, p)?;
    let w = ground_state(g, omega)?;
    let v = NodeFunction(u.values().iter().zip(&w).map(|(z, wi)| z / wi).collect());
    let remainder = cp * weighted_energy(g, omega, &v, p)?;
    Ok(RemainderGap {
        gap: report.energy - report.potential_term - remainder,
        remainder,
        scale: report.scale + remainder.abs(),
    })
}

/// Ground-state identity for the unit-weight path with `p = 2`.
pub fn jacobi_case(n: usize, omega: &NodeFunction, u: &NodeFunction) -> Result<GsrReport> {
    let g = WeightedGraph::path(n)?;
    gsr_identity(&g, omega, u, 2.0)
}

/// A graph together with a ground state and a test function.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphInstance {
    pub graph: WeightedGraph,
    pub omega: NodeFunction,
    pub u: NodeFunction,
}

impl GraphInstance {
    /// Random instance: weights uniform on `(0, 1]` with edge density 1/2,
    /// `ω` log-uniform on `[0.1, 10]`, `u` uniform in the disk of radius 10.
    pub fn random(n: usize, seed: u64) -> Result<GraphInstance> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut graph = WeightedGraph::empty(n)?;
        for i in 0..n {
            for j in (i + 1)..n {
                if rng.gen_bool(0.5) {
                    let w = 1.0 - rng.gen::<f64>();
                    graph.set_weight(i, j, w)?;
                }
            }
        }
        let ln10 = 10f64.ln();
        let omega = NodeFunction::real(
            &(0..n)
                .map(|_| rng.gen_range(-ln10..=ln10).exp())
                .collect::<Vec<_>>(),
        );
        let u = NodeFunction(
            (0..n)
                .map(|_| {
                    let r = 10.0 * rng.gen::<f64>().sqrt();
                    let theta = rng.gen_range(0.0..std::f64::consts::TAU);
                    Complex64::from_polar(r, theta)
                })
                .collect(),
        );
        Ok(GraphInstance { graph, omega, u })
    }

    /// Parse the line format `i j w`, `omega i value`, `u i re im`.
    ///
    /// Node indices are 0-based and the node count is one more than the
    /// largest index mentioned. Nodes without an `omega` line get `ω = 1`;
    /// nodes without a `u` line get `u = 0`.
    pub fn parse(text: &str) -> Result<GraphInstance> {
        enum Line {
            Edge(usize, usize, f64),
            Omega(usize, f64),
            U(usize, Complex64),
        }
        let mut lines = Vec::new();
        let mut n = 0usize;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let err = |msg: String| HardyError::Parse { line: line_no, msg };
            let fields: Vec<&str> = content.split_whitespace().collect();
            let index = |s: &str| {
                s.parse::<usize>()
                    .map_err(|_| err(format!("bad node index '{s}'")))
            };
            let real = |s: &str| {
                s.parse::<f64>()
                    .map_err(|_| err(format!("bad number '{s}'")))
            };
            let parsed = match fields.as_slice() {
                ["omega", i, w] => Line::Omega(index(i)?, real(w)?),
                ["u", i, re, im] => Line::U(index(i)?, Complex64::new(real(re)?, real(im)?)),
                [i, j, w] => Line::Edge(index(i)?, index(j)?, real(w)?),
                _ => return Err(err(format!("unrecognized line '{content}'"))),
            };
            let top = match parsed {
                Line::Edge(i, j, _) => i.max(j),
                Line::Omega(i, _) | Line::U(i, _) => i,
            };
            n = n.max(top + 1);
            lines.push((line_no, parsed));
        }
        if n == 0 {
            return Err(HardyError::Parse {
                line: 0,
                msg: "no nodes".into(),
            });
        }
        let mut graph = WeightedGraph::empty(n)?;
        let mut omega = vec![Complex64::new(1.0, 0.0); n];
        let mut u = vec![Complex64::new(0.0, 0.0); n];
        for (line, parsed) in lines {
            match parsed {
                Line::Edge(i, j, w) => {
                    graph.set_weight(i, j, w).map_err(|e| HardyError::Parse {
                        line,
                        msg: e.to_string(),
                    })?
                }
                Line::Omega(i, w) => omega[i] = Complex64::new(w, 0.0),
                Line::U(i, z) => u[i] = z,
            }
        }
        Ok(GraphInstance {
            graph,
            omega: NodeFunction(omega),
            u: NodeFunction(u),
        })
    }

    pub fn from_file(path: &Path) -> Result<GraphInstance> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| HardyError::InvalidParams(format!("{}: {e}", path.display())))?;
        GraphInstance::parse(&text)
    }
}
