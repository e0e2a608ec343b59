/// Result of a bracketed scalar minimization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum {
    pub argmin: f64,
    pub min: f64,
}

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section search for the minimum of a unimodal `f` on `[lo, hi]`.
///
/// Stops once the bracket is narrower than `tol` (or after the bracket stops
/// shrinking in floating point) and returns the best of the bracket midpoint
/// and the two interior probes.
pub fn minimize_scalar<F>(f: F, lo: f64, hi: f64, tol: f64) -> Minimum
where
    F: Fn(f64) -> f64,
{
    assert!(lo < hi, "minimize_scalar needs lo < hi");
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);

    for _ in 0..500 {
        if b - a <= tol {
            break;
        }
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
        if !(a < c && c < d && d < b) {
            break;
        }
    }

    let mid = 0.5 * (a + b);
    let fm = f(mid);
    [(mid, fm), (c, fc), (d, fd)].into_iter().fold(
        Minimum {
            argmin: mid,
            min: fm,
        },
        |best, (x, v)| {
            if v < best.min {
                Minimum { argmin: x, min: v }
            } else {
                best
            }
        },
    )
}
