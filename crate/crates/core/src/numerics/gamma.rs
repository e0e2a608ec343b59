use std::f64::consts::PI;

use crate::error::{HardyError, Result};

// Lanczos coefficients, g = 7, n = 9.
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

fn lanczos(x: f64) -> f64 {
    let x = x - 1.0;
    let mut sum = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        sum += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * sum
}

/// sin(πx) with exact argument reduction.
pub(crate) fn sin_pi(x: f64) -> f64 {
    let r = x - 2.0 * (0.5 * x).round();
    if r == 0.0 || r.abs() == 1.0 {
        return 0.0;
    }
    (PI * r).sin()
}

/// The Gamma function.
///
/// Arguments in `[0.5, 50]` are shifted into `[1, 2)` by the recurrence and
/// evaluated there with a Lanczos approximation; larger arguments use the
/// approximation directly and arguments below 1/2 go through reflection.
pub fn gamma_fn(x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(HardyError::InvalidParams("Gamma of NaN".into()));
    }
    if x <= 0.0 && x == x.floor() {
        return Err(HardyError::PoleError(x));
    }
    if x < 0.5 {
        let s = sin_pi(x);
        return Ok(PI / (s * gamma_fn(1.0 - x)?));
    }
    if x > 50.0 {
        return Ok(lanczos(x));
    }
    let mut y = x;
    let mut factor = 1.0;
    while y >= 2.0 {
        y -= 1.0;
        factor *= y;
    }
    if y < 1.0 {
        factor /= y;
        y += 1.0;
    }
    Ok(factor * lanczos(y))
}

/// Surface measure of the unit sphere `S^{n-1}` in `R^n`, with `|S^0| = 2`.
pub fn sphere_area(n: u32) -> f64 {
    assert!(n >= 1, "sphere dimension must be positive");
    // |S^{n-1}| = 2π/(n-2) |S^{n-3}|
    let mut area = if n % 2 == 1 { 2.0 } else { 2.0 * PI };
    let mut k = 2 - n % 2;
    while k < n {
        area *= 2.0 * PI / k as f64;
        k += 2;
    }
    area
}

/// Volume of the unit ball in `R^n`.
pub fn ball_volume(n: u32) -> f64 {
    sphere_area(n) / n as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn factorials() {
        assert!(rel(gamma_fn(5.0).unwrap(), 24.0) < 1e-14);
        let mut fact = 1.0;
        for n in 1..30 {
            assert!(rel(gamma_fn(n as f64).unwrap(), fact) < 1e-13, "n = {n}");
            fact *= n as f64;
        }
    }

    #[test]
    fn half_integers() {
        let sqrt_pi = PI.sqrt();
        assert!(rel(gamma_fn(0.5).unwrap(), sqrt_pi) < 1e-14);
        assert!(rel(gamma_fn(-0.5).unwrap(), -2.0 * sqrt_pi) < 1e-14);
        assert!(rel(gamma_fn(1.5).unwrap(), 0.5 * sqrt_pi) < 1e-14);
        assert!(rel(gamma_fn(-1.5).unwrap(), 4.0 / 3.0 * sqrt_pi) < 1e-14);
    }

    #[test]
    fn known_values() {
        // Γ(1/4), Γ(3/4), Γ(1/3)
        assert!(rel(gamma_fn(0.25).unwrap(), 3.625_609_908_221_908) < 1e-14);
        assert!(rel(gamma_fn(0.75).unwrap(), 1.225_416_702_465_177_6) < 1e-14);
        assert!(rel(gamma_fn(1.0 / 3.0).unwrap(), 2.678_938_534_707_747_6) < 1e-14);
        // Γ(50) = 49!
        assert!(rel(gamma_fn(50.0).unwrap(), 6.082_818_640_342_675e62) < 1e-13);
    }

    #[test]
    fn poles() {
        for x in [0.0, -1.0, -2.0, -17.0] {
            assert_eq!(gamma_fn(x), Err(HardyError::PoleError(x)));
        }
    }

    #[test]
    fn recurrence_on_random_arguments() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10_000 {
            let x: f64 = rng.gen_range(0.1..40.0);
            let lhs = gamma_fn(x + 1.0).unwrap();
            let rhs = x * gamma_fn(x).unwrap();
            assert!(rel(lhs, rhs) < 1e-12, "x = {x}");
        }
    }

    #[test]
    fn reflection_on_negative_arguments() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let x: f64 = rng.gen_range(-20.0..-0.01);
            if (x - x.round()).abs() < 1e-3 {
                continue;
            }
            let lhs = gamma_fn(x).unwrap() * gamma_fn(1.0 - x).unwrap() * sin_pi(x);
            assert!(rel(lhs, PI) < 1e-12, "x = {x}");
        }
    }

    #[test]
    fn sphere_areas() {
        assert_eq!(sphere_area(1), 2.0);
        assert!(rel(sphere_area(2), 2.0 * PI) < 1e-15);
        assert!(rel(sphere_area(3), 4.0 * PI) < 1e-15);
        assert!(rel(sphere_area(4), 2.0 * PI * PI) < 1e-15);
        for n in 1..12u32 {
            let direct = 2.0 * PI.powf(n as f64 / 2.0) / gamma_fn(n as f64 / 2.0).unwrap();
            assert!(rel(sphere_area(n), direct) < 1e-15);
        }
    }
}
