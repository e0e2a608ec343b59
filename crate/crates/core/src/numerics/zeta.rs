use crate::error::{invalid, Result};

/// `B_{2j} / (2j)!` for `j = 1..=6`.
const BERNOULLI_OVER_FACT: [f64; 6] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30240.0,
    -1.0 / 1209600.0,
    1.0 / 47900160.0,
    -691.0 / 1307674368000.0,
];

/// Direct terms before switching to Euler–Maclaurin.
const DIRECT_TERMS: usize = 12;

/// Hurwitz zeta `Σ_{k>=0} (q + k)^{-a}` for `a > 1`, `q > 0`.
pub fn hurwitz_zeta(a: f64, q: f64) -> Result<f64> {
    if !(a > 1.0) || !(q > 0.0) {
        return invalid(format!(
            "Hurwitz zeta needs a > 1 and q > 0, got a = {a}, q = {q}"
        ));
    }
    let head: f64 = (0..DIRECT_TERMS).map(|k| (q + k as f64).powf(-a)).sum();
    let x = q + DIRECT_TERMS as f64;
    let mut tail = x.powf(1.0 - a) / (a - 1.0) + 0.5 * x.powf(-a);
    // rising factorial a (a+1) ... (a+2j-2) times x^{-a-2j+1}
    let mut rising = a;
    let mut power = x.powf(-a - 1.0);
    for (j, coef) in BERNOULLI_OVER_FACT.iter().enumerate() {
        if j > 0 {
            let m = (2 * j + 2) as f64;
            rising *= (a + m - 3.0) * (a + m - 2.0);
            power /= x * x;
        }
        tail += coef * rising * power;
    }
    Ok(head + tail)
}
