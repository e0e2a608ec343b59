//! Acceptance suite. Each test prints one `PASS`/`FAIL` line to stderr
//! (uncaptured) and then asserts.

use std::io::Write;
use std::time::{Duration, Instant};

use hardy_core::constants::{
    boundary_profile, hardy_constant, hardy_constant_crosscheck, hardy_constant_p2,
    remainder_constant, LorentzIndex,
};
use hardy_core::exec::Execution;
use hardy_core::graph_gsr::{gsr_identity, gsr_remainder_gap, GraphInstance};
use hardy_core::inequalities::{
    residual_convexity, residual_numbers, residual_numbers_improved, ComplexScalar,
};
use hardy_core::radial::{
    isoperimetric_check, rayleigh_quotient, remainder_check, sharpness_scan, RadialPiecewisePower,
};
use hardy_core::rearrange_lorentz::{
    exhaustive_sweep, lorentz_nesting, symmdecr_identity, ConvexCost, ExponentialKernel, Kernel,
    PowerKernel, StepRadialFunction,
};
use hardy_core::{make_params, HardyParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-10;

fn verdict(name: &str, pass: bool, detail: String) {
    let tag = if pass { "PASS" } else { "FAIL" };
    let _ = writeln!(
        std::io::stderr().lock(),
        "[acceptance] {tag} {name}: {detail}"
    );
    assert!(pass, "{name}: {detail}");
}

fn params(n: u32, s: f64, p: f64) -> HardyParams {
    make_params(n, s, p).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

#[test]
fn closed_form_one_dim_p1() {
    let mut worst = 0.0f64;
    let mut slowest = Duration::ZERO;
    for s in [0.1, 0.3, 0.5, 0.7, 0.9] {
        let (c, t) = timed(|| hardy_constant(&params(1, s, 1.0), TOL).unwrap().value);
        worst = worst.max(rel(c, (2.0 - s).exp2() / s));
        slowest = slowest.max(t);
    }
    verdict(
        "closed_form_one_dim_p1",
        worst <= 1e-8 && slowest < Duration::from_secs(1),
        format!("max rel err {worst:.2e}, slowest point {slowest:.2?}"),
    );
}

#[test]
fn closed_form_p2() {
    let mut worst = 0.0f64;
    let mut slowest = Duration::ZERO;
    for n in 1..=4u32 {
        for s in [0.3, 0.7] {
            let p = params(n, s, 2.0);
            let (c, t) = timed(|| hardy_constant(&p, TOL).unwrap().value);
            worst = worst.max(rel(c, hardy_constant_p2(&p).unwrap()));
            slowest = slowest.max(t);
        }
    }
    verdict(
        "closed_form_p2",
        worst <= 1e-8 && slowest < Duration::from_secs(5),
        format!("8 points, max rel err {worst:.2e}, slowest point {slowest:.2?}"),
    );
}

#[test]
fn route_agreement() {
    let grid = [
        // N > ps
        (1, 0.3, 1.5),
        (2, 0.5, 1.5),
        (3, 0.7, 2.5),
        (2, 0.3, 3.0),
        (3, 0.5, 1.0),
        (4, 0.9, 2.0),
        // N < ps
        (1, 0.5, 3.0),
        (1, 0.75, 2.0),
        (1, 0.9, 4.0),
        (2, 0.75, 4.0),
        (1, 0.3, 5.0),
        (2, 0.9, 3.0),
    ];
    let mut worst = 0.0f64;
    let mut slowest = Duration::ZERO;
    let mut branches = (0, 0);
    for (n, s, p) in grid {
        let hp = params(n, s, p);
        if hp.subcritical() {
            branches.0 += 1;
        } else {
            branches.1 += 1;
        }
        let (pair, t) = timed(|| {
            (
                hardy_constant(&hp, TOL).unwrap().value,
                hardy_constant_crosscheck(&hp, 1e-8).unwrap().value,
            )
        });
        worst = worst.max(rel(pair.1, pair.0));
        slowest = slowest.max(t);
    }
    verdict(
        "route_agreement",
        worst <= 1e-6 && branches.0 > 0 && branches.1 > 0 && slowest < Duration::from_secs(30),
        format!(
            "{} points with N > ps, {} with N < ps, max rel err {worst:.2e}, slowest point {slowest:.2?}",
            branches.0, branches.1
        ),
    );
}

#[test]
fn remainder_constants() {
    let c2 = remainder_constant(2.0).unwrap();
    let d3 = (remainder_constant(3.0).unwrap() - (2.0 - 2f64.sqrt())).abs();
    let d4 = (remainder_constant(4.0).unwrap() - 1.0 / 3.0).abs();
    // independent dense-grid minimum of the profile over (0, 1/2)
    let grid_min = |p: f64| {
        let m = 1_000_000;
        (1..m)
            .map(|k| boundary_profile(0.5 * k as f64 / m as f64, p))
            .fold(f64::INFINITY, f64::min)
    };
    let worst = [2.0, 2.5, 3.0, 4.0, 6.0]
        .into_iter()
        .map(|p| (grid_min(p) - remainder_constant(p).unwrap()).abs())
        .fold(0.0, f64::max);
    verdict(
        "remainder_constants",
        c2 == 1.0 && d3 <= 1e-10 && d4 <= 1e-10 && worst <= 1e-10,
        format!(
            "c_2 = {c2}, |c_3 err| {d3:.1e}, |c_4 err| {d4:.1e}, profile-min mismatch {worst:.1e}"
        ),
    );
}

fn random_scalar(rng: &mut ChaCha8Rng) -> ComplexScalar {
    // moduli spread over six decades, with a share of points close to 1
    let r = if rng.gen_bool(0.2) {
        1.0 + rng.gen_range(-1e-3..1e-3)
    } else {
        10f64.powf(rng.gen_range(-3.0..3.0))
    };
    let theta = if rng.gen_bool(0.3) {
        0.0
    } else {
        rng.gen_range(0.0..std::f64::consts::TAU)
    };
    ComplexScalar::from_polar(r, theta)
}

fn random_t(rng: &mut ChaCha8Rng) -> f64 {
    match rng.gen_range(0..10) {
        0 => 0.0,
        1 => 1.0,
        2 => rng.gen_range(0.0..1e-6),
        _ => rng.gen::<f64>(),
    }
}

#[test]
fn pointwise_inequalities() {
    const SAMPLES: usize = 100_000;
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_601);
    let mut violations = [0usize; 4];
    for _ in 0..SAMPLES {
        let a = random_scalar(&mut rng);
        let t = random_t(&mut rng);
        let p = rng.gen_range(1.0..6.0);
        let scale = (a - t).norm().powf(p) + (1.0 - t).powf(p - 1.0) * (a.norm().powf(p) + t);
        if residual_numbers(a, t, p).unwrap() < -1e-12 * scale {
            violations[0] += 1;
        }

        let q = rng.gen_range(2.0..6.0);
        let scale = (a - t).norm().powf(q)
            + (1.0 - t).powf(q - 1.0) * (a.norm().powf(q) + t)
            + t.powf(0.5 * q) * (a - 1.0).norm().powf(q);
        if residual_numbers_improved(a, t, q).unwrap() < -1e-12 * scale {
            violations[1] += 1;
        }

        let dim = rng.gen_range(1..=4);
        let x: Vec<f64> = (0..dim).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let y: Vec<f64> = (0..dim).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let norm = |v: &[f64]| v.iter().map(|c| c * c).sum::<f64>().sqrt();
        let sum: Vec<f64> = x.iter().zip(&y).map(|(u, v)| u + v).collect();
        let scale = |e: f64| {
            norm(&sum).powf(e)
                + norm(&x).powf(e)
                + e * norm(&x).powf(e - 1.0) * norm(&y)
                + norm(&y).powf(e)
        };
        if residual_convexity(&x, &y, p, false).unwrap() < -1e-12 * scale(p) {
            violations[2] += 1;
        }
        if residual_convexity(&x, &y, q, true).unwrap() < -1e-12 * scale(q) {
            violations[3] += 1;
        }
    }

    // p = 2: the improved residual vanishes identically, checked by direct expansion
    let mut worst_p2 = 0.0f64;
    for _ in 0..SAMPLES {
        let a = random_scalar(&mut rng);
        let t = random_t(&mut rng);
        let raw = (a - t).norm_sqr() - (1.0 - t) * (a.norm_sqr() - t) - t * (a - 1.0).norm_sqr();
        let scale = (a - t).norm_sqr() + a.norm_sqr() + 1.0 + (a - 1.0).norm_sqr();
        worst_p2 = worst_p2
            .max((raw / scale).abs())
            .max(residual_numbers_improved(a, t, 2.0).unwrap().abs());
        let x = [a.re, a.im];
        let y = [t, -t];
        worst_p2 = worst_p2.max(residual_convexity(&x, &y, 2.0, true).unwrap().abs());
    }
    verdict(
        "pointwise_inequalities",
        violations == [0; 4] && worst_p2 <= 1e-12,
        format!(
            "{SAMPLES} samples per form, violations {violations:?}, p = 2 improved residual max {worst_p2:.1e}"
        ),
    );
}

#[test]
fn graph_ground_state() {
    let (outcome, elapsed) = timed(|| {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut worst_identity = 0.0f64;
        for seed in 0..1_000u64 {
            let inst = GraphInstance::random(rng.gen_range(2..=20), seed).unwrap();
            let p = rng.gen_range(1.0..=5.0);
            let r = gsr_identity(&inst.graph, &inst.omega, &inst.u, p).unwrap();
            worst_identity = worst_identity.max(r.relative_defect());
        }
        let mut worst_gap = f64::INFINITY;
        let mut worst_p2 = 0.0f64;
        for seed in 0..10_000u64 {
            let inst = GraphInstance::random(rng.gen_range(2..=20), 1_000 + seed).unwrap();
            let p = [2.0, 2.5, 3.0, 4.0][(seed % 4) as usize];
            let g = gsr_remainder_gap(&inst.graph, &inst.omega, &inst.u, p).unwrap();
            if g.scale > 0.0 {
                worst_gap = worst_gap.min(g.gap / g.scale);
                if p == 2.0 {
                    worst_p2 = worst_p2.max(g.gap.abs() / g.scale);
                }
            }
        }
        (worst_identity, worst_gap, worst_p2)
    });
    let (identity, gap, p2) = outcome;
    verdict(
        "graph_ground_state",
        identity <= 1e-10 && gap >= -1e-10 && p2 <= 1e-12 && elapsed < Duration::from_secs(60),
        format!(
            "identity rel err {identity:.1e} (1000 instances), min scaled gap {gap:.1e} (10000 instances), \
             p = 2 rel defect {p2:.1e}, {elapsed:.2?}"
        ),
    );
}

#[test]
fn radial_p1_equality() {
    let mut worst = 0.0f64;
    for (n, s) in [(1, 0.5), (2, 0.5), (3, 0.25)] {
        let hp = params(n, s, 1.0);
        let c = hardy_constant(&hp, TOL).unwrap().value;
        for seed in 0..20 {
            let layers = 1 + (seed as usize % 4);
            let u = StepRadialFunction::from_seed(seed, layers)
                .unwrap()
                .to_radial()
                .unwrap();
            worst = worst.max(rel(rayleigh_quotient(&hp, &u).unwrap(), c));
        }
    }
    verdict(
        "radial_p1_equality",
        worst <= 1e-5,
        format!("60 symmetric decreasing steps, max rel deviation from C {worst:.1e}"),
    );
}

#[test]
fn sharpness_trial_functions() {
    let n_list = [10, 100, 1_000, 10_000];
    let ((lines, ok), elapsed) = timed(|| {
        let mut lines = Vec::new();
        let mut ok = true;
        for (n, s, p) in [(1, 0.25, 1.0), (2, 0.5, 2.0), (1, 0.75, 2.0)] {
            let scan = sharpness_scan(&params(n, s, p), &n_list).unwrap();
            let above = scan.iter().all(|pt| pt.gap > 0.0);
            let decreasing = scan.windows(2).all(|w| w[1].gap < w[0].gap);
            let halved = scan[3].gap <= 0.5 * scan[0].gap;
            ok &= above && decreasing && halved;
            let gaps: Vec<String> = scan.iter().map(|pt| format!("{:.2e}", pt.gap)).collect();
            lines.push(format!(
                "({n},{s},{p}) gaps [{}] above={above} decreasing={decreasing} halved={halved}",
                gaps.join(", ")
            ));
        }
        (lines, ok)
    });
    verdict(
        "sharpness_trial_functions",
        ok && elapsed < Duration::from_secs(300),
        format!("{}; {elapsed:.2?}", lines.join("; ")),
    );
}

fn random_trapezoid(rng: &mut ChaCha8Rng) -> RadialPiecewisePower {
    let k = rng.gen_range(1..=3);
    let mut radii: Vec<f64> = (0..=k).map(|_| rng.gen_range(0.2..3.0)).collect();
    radii.sort_by(f64::total_cmp);
    for i in 1..radii.len() {
        radii[i] = radii[i].max(radii[i - 1] + 0.05);
    }
    let values: Vec<f64> = (0..k).map(|_| rng.gen_range(0.2..2.0)).collect();
    RadialPiecewisePower::trapezoid(&radii, &values).unwrap()
}

fn random_step(rng: &mut ChaCha8Rng) -> RadialPiecewisePower {
    let layers = rng.gen_range(1..=3);
    StepRadialFunction::random(rng, layers)
        .unwrap()
        .to_radial()
        .unwrap()
}

#[test]
fn remainder_identity_and_inequality() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst = 0.0f64;
    for (hp, trapezoids) in [(params(2, 0.5, 2.0), true), (params(1, 0.25, 2.0), false)] {
        for _ in 0..5 {
            let u = if trapezoids {
                random_trapezoid(&mut rng)
            } else {
                random_step(&mut rng)
            };
            let r = remainder_check(&hp, &u).unwrap();
            worst = worst.max(rel(r.lhs_gap, r.remainder));
        }
    }
    let mut min_margin = f64::INFINITY;
    for (hp, trapezoids) in [(params(3, 0.5, 3.0), true), (params(1, 0.25, 3.0), false)] {
        for _ in 0..5 {
            let u = if trapezoids {
                random_trapezoid(&mut rng)
            } else {
                random_step(&mut rng)
            };
            let r = remainder_check(&hp, &u).unwrap();
            min_margin = min_margin.min((r.lhs_gap - r.remainder) / r.energy);
        }
    }
    verdict(
        "remainder_identity_and_inequality",
        worst <= 1e-5 && min_margin >= 0.0,
        format!(
            "p = 2 identity max rel err {worst:.1e} over 10 inputs; p = 3 min (gap - remainder)/E {min_margin:.2e} over 10 inputs"
        ),
    );
}

#[test]
fn lattice_rearrangement_sweep() {
    let power = PowerKernel::new(1.5).unwrap();
    let steep = PowerKernel::new(3.0).unwrap();
    let geometric = ExponentialKernel::new(2.0).unwrap();
    let cases: [(&str, &dyn Kernel, ConvexCost); 4] = [
        ("d^-1.5 |t|", &power, ConvexCost::Power(1.0)),
        ("d^-1.5 t^2", &power, ConvexCost::Power(2.0)),
        ("d^-3 |t|^3", &steep, ConvexCost::Power(3.0)),
        (
            "2^-d t_+ + 2t_-",
            &geometric,
            ConvexCost::Split {
                plus: 1.0,
                minus: 2.0,
            },
        ),
    ];
    let (summaries, elapsed) = timed(|| {
        cases
            .iter()
            .map(|(name, k, j)| {
                (
                    name,
                    exhaustive_sweep(3, 3, *k, *j, Execution::Parallel).unwrap(),
                )
            })
            .collect::<Vec<_>>()
    });
    let ok = summaries
        .iter()
        .all(|(_, s)| s.total == 16_384 && s.all_nonnegative());
    let detail: Vec<String> = summaries
        .iter()
        .map(|(name, s)| format!("{name}: {}/{}", s.nonnegative, s.total))
        .collect();
    verdict(
        "lattice_rearrangement_sweep",
        ok && elapsed < Duration::from_secs(30),
        format!("{}; {elapsed:.2?}", detail.join(", ")),
    );
}

#[test]
fn lorentz_identities() {
    let mut worst_identity = 0.0f64;
    for n in 1..=3u32 {
        for (s, p) in [(0.25, 1.0), (0.5, 1.5), (0.75, 1.25)] {
            let hp = params(n, s, p);
            for seed in 0..5 {
                let u = StepRadialFunction::from_seed(100 + seed, 1 + seed as usize).unwrap();
                worst_identity =
                    worst_identity.max(symmdecr_identity(&hp, &u).unwrap().relative_defect());
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst_nesting = f64::INFINITY;
    for _ in 0..1_000 {
        let layers = rng.gen_range(1..=6);
        let u = StepRadialFunction::random(&mut rng, layers).unwrap();
        let dim = rng.gen_range(1..=4);
        let q = rng.gen_range(1.0..5.0);
        let p = rng.gen_range(1.0..4.0);
        let r = if rng.gen_bool(0.2) {
            LorentzIndex::Infinite
        } else {
            LorentzIndex::Finite(p + rng.gen_range(0.01..6.0))
        };
        let sides = lorentz_nesting(&u, dim, q, p, r).unwrap();
        worst_nesting = worst_nesting.min(sides.rhs_minus_lhs() / sides.rhs);
    }

    let mut worst_indicator = 0.0f64;
    for (radius, dim, q, p, r) in [
        (1.0, 1, 2.0, 1.0, LorentzIndex::Finite(3.0)),
        (0.7, 2, 1.5, 1.2, LorentzIndex::Infinite),
        (2.5, 3, 4.0, 2.0, LorentzIndex::Finite(2.5)),
    ] {
        let u = StepRadialFunction::indicator(radius).unwrap();
        worst_indicator =
            worst_indicator.max(lorentz_nesting(&u, dim, q, p, r).unwrap().relative_defect());
    }
    verdict(
        "lorentz_identities",
        worst_identity <= 1e-10 && worst_nesting >= -1e-12 && worst_indicator <= 1e-14,
        format!(
            "identity max rel defect {worst_identity:.1e} on 3x3 grid; nesting min rel gap {worst_nesting:.2e} \
             over 1000 steps; indicator rel defect {worst_indicator:.1e}"
        ),
    );
}

#[test]
fn isoperimetric_balls() {
    let mut worst = 0.0f64;
    for n in [1, 2] {
        for radius in [0.5, 1.0, 3.0] {
            worst = worst.max(
                isoperimetric_check(&params(n, 0.5, 1.0), radius)
                    .unwrap()
                    .relative_gap(),
            );
        }
    }
    verdict(
        "isoperimetric_balls",
        worst <= 1e-5,
        format!("N in {{1, 2}}, 3 radii, max rel gap {worst:.1e}"),
    );
}

#[test]
fn extreme_s_scaling() {
    let mut range = (f64::INFINITY, 0.0f64);
    for (n, p) in [(2, 1.0), (3, 2.0)] {
        for s in [0.01, 0.05, 0.95, 0.99] {
            let c = hardy_constant(&params(n, s, p), TOL).unwrap().value;
            let scaled = c * s * (1.0 - s) / (n as f64 - p * s).powf(p);
            range = (range.0.min(scaled), range.1.max(scaled));
        }
    }
    verdict(
        "extreme_s_scaling",
        range.0 >= 1e-3 && range.1 <= 1e3,
        format!("C s(1-s)/(N-ps)^p in [{:.3e}, {:.3e}]", range.0, range.1),
    );
}
