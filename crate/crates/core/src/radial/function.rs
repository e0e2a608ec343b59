use std::path::Path;

use crate::error::{invalid, HardyError, Result};

/// One piece `c r^{-beta} + d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Piece {
    pub c: f64,
    pub beta: f64,
    pub d: f64,
}

impl Piece {
    pub const ZERO: Piece = Piece {
        c: 0.0,
        beta: 0.0,
        d: 0.0,
    };

    pub fn constant(d: f64) -> Piece {
        Piece {
            c: 0.0,
            beta: 0.0,
            d,
        }
    }

    pub fn eval(&self, r: f64) -> f64 {
        if self.c == 0.0 {
            self.d
        } else {
            self.c * r.powf(-self.beta) + self.d
        }
    }

    /// Whether the piece is constant in `r`.
    pub fn is_constant(&self) -> bool {
        self.c == 0.0 || self.beta == 0.0
    }
}

/// Radial profile `u(r) = c_k r^{-beta_k} + d_k` on `[r_{k-1}, r_k)`, zero
/// for `r >= r_K`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialPiecewisePower {
    breaks: Vec<f64>,
    pieces: Vec<Piece>,
}

impl RadialPiecewisePower {
    /// `breaks` runs `0 = r_0 < r_1 < ... < r_K`; `pieces` has `K` entries.
    pub fn new(breaks: Vec<f64>, pieces: Vec<Piece>) -> Result<RadialPiecewisePower> {
        if breaks.len() != pieces.len() + 1 {
            return Err(HardyError::DimensionMismatch {
                expected: pieces.len() + 1,
                got: breaks.len(),
            });
        }
        if pieces.is_empty() {
            return invalid("radial function needs at least one piece");
        }
        if breaks[0] != 0.0 {
            return invalid(format!("first breakpoint must be 0, got {}", breaks[0]));
        }
        for w in breaks.windows(2) {
            if !(w[0] < w[1]) || !w[1].is_finite() {
                return invalid(format!(
                    "breakpoints must be finite and increasing, got {} then {}",
                    w[0], w[1]
                ));
            }
        }
        for (k, piece) in pieces.iter().enumerate() {
            if !(piece.c.is_finite() && piece.beta.is_finite() && piece.d.is_finite()) {
                return invalid(format!("piece {k} has non-finite coefficients"));
            }
        }
        let first = pieces[0];
        if first.c != 0.0 && first.beta > 0.0 {
            return invalid("piece touching r = 0 must be bounded (beta <= 0 or c = 0)");
        }
        Ok(RadialPiecewisePower { breaks, pieces })
    }

    /// Step function with value `heights[k]` on `[r_{k-1}, r_k)`,
    /// `radii = [r_1, ..., r_K]`.
    pub fn step(radii: &[f64], heights: &[f64]) -> Result<RadialPiecewisePower> {
        let mut breaks = vec![0.0];
        breaks.extend_from_slice(radii);
        RadialPiecewisePower::new(
            breaks,
            heights.iter().map(|&h| Piece::constant(h)).collect(),
        )
    }

    /// Indicator of the ball of radius `r`.
    pub fn indicator(r: f64) -> Result<RadialPiecewisePower> {
        RadialPiecewisePower::step(&[r], &[1.0])
    }

    /// Continuous piecewise-linear profile through `(radii[k], values[k])`,
    /// constant `values[0]` on `[0, radii[0]]` and vanishing at the last
    /// radius.
    pub fn trapezoid(radii: &[f64], values: &[f64]) -> Result<RadialPiecewisePower> {
        if radii.len() != values.len() + 1 {
            return Err(HardyError::DimensionMismatch {
                expected: values.len() + 1,
                got: radii.len(),
            });
        }
        let mut breaks = vec![0.0];
        breaks.extend_from_slice(radii);
        let mut pieces = vec![Piece::constant(values[0])];
        for k in 0..values.len() {
            let (r0, r1) = (radii[k], radii[k + 1]);
            let v0 = values[k];
            let v1 = values.get(k + 1).copied().unwrap_or(0.0);
            let slope = (v1 - v0) / (r1 - r0);
            pieces.push(Piece {
                c: slope,
                beta: -1.0,
                d: v0 - slope * r0,
            });
        }
        RadialPiecewisePower::new(breaks, pieces)
    }

    pub fn breaks(&self) -> &[f64] {
        &self.breaks
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    /// Outer radius of the support.
    pub fn support_radius(&self) -> f64 {
        *self.breaks.last().expect("nonempty")
    }

    pub fn eval(&self, r: f64) -> f64 {
        if r < 0.0 || r >= self.support_radius() {
            return 0.0;
        }
        let k = self.breaks.partition_point(|&b| b <= r);
        self.pieces[k - 1].eval(r)
    }

    /// Left and right limits at `r_j`, `j = 1..=K`.
    pub fn limits(&self, j: usize) -> (f64, f64) {
        let b = self.breaks[j];
        let left = self.pieces[j - 1].eval(b);
        let right = self.pieces.get(j).map_or(0.0, |p| p.eval(b));
        (left, right)
    }

    /// Largest one-sided value at any breakpoint.
    fn magnitude(&self) -> f64 {
        (1..self.breaks.len())
            .map(|j| {
                let (l, r) = self.limits(j);
                l.abs().max(r.abs())
            })
            .fold(0.0, f64::max)
    }

    /// Whether `u` jumps at `r_j`.
    pub fn jumps_at(&self, j: usize) -> bool {
        let (l, r) = self.limits(j);
        (l - r).abs() > 1e-12 * self.magnitude().max(f64::MIN_POSITIVE)
    }

    pub fn has_jump(&self) -> bool {
        (1..self.breaks.len()).any(|j| self.jumps_at(j))
    }

    /// Whether every piece vanishes.
    pub fn is_zero(&self) -> bool {
        self.pieces.iter().all(|p| p.c == 0.0 && p.d == 0.0)
    }

    /// `r -> u(r / lambda)`.
    pub fn dilated(&self, lambda: f64) -> Result<RadialPiecewisePower> {
        if !(lambda > 0.0) {
            return invalid(format!("dilation factor must be positive, got {lambda}"));
        }
        RadialPiecewisePower::new(
            self.breaks.iter().map(|b| b * lambda).collect(),
            self.pieces
                .iter()
                .map(|p| Piece {
                    c: p.c * lambda.powf(p.beta),
                    ..*p
                })
                .collect(),
        )
    }

    /// Parse lines `break r` and `piece c beta d`; `#` starts a comment.
    ///
    /// The leading breakpoint 0 may be given or omitted.
    pub fn parse(text: &str) -> Result<RadialPiecewisePower> {
        let mut breaks = vec![0.0];
        let mut pieces = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let err = |msg: String| HardyError::Parse { line, msg };
            let num = |s: &str| {
                s.parse::<f64>()
                    .map_err(|_| err(format!("bad number '{s}'")))
            };
            let fields: Vec<&str> = content.split_whitespace().collect();
            match fields.as_slice() {
                ["break", r] => {
                    let r = num(r)?;
                    if !(r == 0.0 && breaks.len() == 1) {
                        breaks.push(r);
                    }
                }
                ["piece", c, beta, d] => pieces.push(Piece {
                    c: num(c)?,
                    beta: num(beta)?,
                    d: num(d)?,
                }),
                _ => return Err(err(format!("unrecognized line '{content}'"))),
            }
        }
        RadialPiecewisePower::new(breaks, pieces).map_err(|e| HardyError::Parse {
            line: 0,
            msg: e.to_string(),
        })
    }

    pub fn from_file(path: &Path) -> Result<RadialPiecewisePower> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| HardyError::InvalidParams(format!("{}: {e}", path.display())))?;
        RadialPiecewisePower::parse(&text)
    }
}
