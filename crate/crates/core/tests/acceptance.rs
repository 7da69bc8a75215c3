//! One line per acceptance criterion. Run with
//! `cargo test -p delaunay-dilation --test acceptance`.

mod common;

use std::f64::consts::{FRAC_PI_2, PI};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use delaunay_dilation::constructions::{
    closed_form_t, generate_chew, generate_three_circle, generate_two_semicircle, sweep_d, ChewSpec,
    ConstructionOutput, ThreeCircleSpec, TwoSemicircleSpec,
};
use delaunay_dilation::dilation::{graph_from_triangulation, max_dilation, triangulation_dilation};
use delaunay_dilation::experiments::{
    dilation_trend, invariance_check, plant, planted_configuration, sample, DensitySpec, PlantSpec,
};
use delaunay_dilation::triangulation::{delaunay, is_valid_delaunay, make_unique_delaunay};
use delaunay_dilation::Point2;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

// criterion 1
const SWEEP_FLOOR: f64 = 1.5810528;
// criterion 2
const CONVEX_222_BOUND: f64 = 1.5810;
// criterion 3
const THREE_CIRCLE_BOUND: f64 = 1.5846;
const THREE_CIRCLE_FALLBACK: f64 = 1.584;
const THREE_CIRCLE_DISTANCE: f64 = 2.4;
const THREE_CIRCLE_DISTANCE_TOL: f64 = 1e-3;
// criterion 4
const CHEW_TOL: f64 = 1e-9;
const CHEW_100_GAP: f64 = 1e-3;
// criterion 5
const VALIDITY_EPS: f64 = 1e-9;
const UNIQUE_BUDGET: f64 = 1e-6;
// criterion 7
const INVARIANCE_SETS: u64 = 100;
// criterion 8
const PLANT_SLACK: f64 = 1e-3;
const PLANT_SEEDS: u64 = 10;
// criterion 9
const TREND_NS: [usize; 3] = [50, 200, 1000];
const TREND_TRIALS: usize = 20;
const TREND_SEED: u64 = 0;
/// Medians measured on the first run; any change in them is a regression.
const TREND_BASELINE: [f64; 3] = [1.3228740841548747, 1.361878208753323, 1.3926800786628513];
const BASELINE_TOL: f64 = 1e-12;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn convex(total: usize) -> ConstructionOutput {
    generate_two_semicircle(TwoSemicircleSpec::with_total(0.29, 1.0, total).unwrap()).unwrap()
}

fn criterion_1() -> Outcome {
    let t = closed_form_t(0.29, 1.0).unwrap().t;
    let s = sweep_d(0.293, 0.294, 1e-4).unwrap();
    let min = s.rows.iter().map(|r| r.t).fold(f64::INFINITY, f64::min);
    outcome(
        t > 1.581 && s.rows.len() == 11 && min > SWEEP_FLOOR,
        format!("t(0.29, 1) = {t:.10}; {} sweep rows, min t = {min:.10} (floor {SWEEP_FLOOR})", s.rows.len()),
    )
}

fn criterion_2() -> Outcome {
    let big = convex(222);
    let r = triangulation_dilation(&big.points, &big.triangulation).unwrap();
    let small = convex(18);
    let rs = triangulation_dilation(&small.points, &small.triangulation).unwrap();
    outcome(
        r.max_dilation > CONVEX_222_BOUND && r.witness == (big.p, big.q) && rs.max_dilation > FRAC_PI_2,
        format!(
            "222 points: {:.7}, witness {:?} (marked {:?}); 18 points: {:.7} vs pi/2 = {:.7}",
            r.max_dilation,
            r.witness,
            (big.p, big.q),
            rs.max_dilation,
            FRAC_PI_2
        ),
    )
}

fn criterion_3() -> Outcome {
    let c = generate_three_circle(ThreeCircleSpec::default()).unwrap();
    let r = triangulation_dilation(&c.points, &c.triangulation).unwrap();
    let valid = is_valid_delaunay(&c.points, &c.triangulation, VALIDITY_EPS).unwrap().valid;
    let dist = c.marked_distance();
    let near = (dist - THREE_CIRCLE_DISTANCE).abs() <= THREE_CIRCLE_DISTANCE_TOL;
    let full = r.max_dilation > THREE_CIRCLE_BOUND && near && valid;
    let fallback = r.max_dilation >= THREE_CIRCLE_FALLBACK && valid;
    outcome(
        full,
        format!(
            "{} points: dilation {:.7} (need > {THREE_CIRCLE_BOUND}{}), |pp'| = {dist:.6}, valid {valid}, witness {:?}",
            c.points.len(),
            r.max_dilation,
            if !full && fallback { ", fallback bound met" } else { "" },
            r.witness
        ),
    )
}

fn criterion_4() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for n in [8usize, 100, 1000] {
        let c = generate_chew(ChewSpec { n }).unwrap();
        let r = triangulation_dilation(&c.points, &c.triangulation).unwrap();
        let exact = n as f64 / 2.0 * (PI / n as f64).sin();
        let err = (r.max_dilation - exact).abs();
        pass &= err <= CHEW_TOL && r.max_dilation < FRAC_PI_2;
        if n == 100 {
            pass &= r.max_dilation > FRAC_PI_2 - CHEW_100_GAP;
        }
        parts.push(format!("n={n}: {:.9} (err {err:.1e})", r.max_dilation));
    }
    outcome(pass, parts.join(", "))
}

fn criterion_5() -> Outcome {
    let builds: Vec<(String, ConstructionOutput)> = vec![
        ("chew 8".into(), generate_chew(ChewSpec { n: 8 }).unwrap()),
        ("chew 16".into(), generate_chew(ChewSpec { n: 16 }).unwrap()),
        ("chew 100".into(), generate_chew(ChewSpec { n: 100 }).unwrap()),
        ("chew 1000".into(), generate_chew(ChewSpec { n: 1000 }).unwrap()),
        ("convex 18".into(), convex(18)),
        ("convex 222".into(), convex(222)),
        ("three-circle".into(), generate_three_circle(ThreeCircleSpec::default()).unwrap()),
    ];
    let mut failures = Vec::new();
    for (name, c) in &builds {
        if !is_valid_delaunay(&c.points, &c.triangulation, VALIDITY_EPS).unwrap().valid {
            failures.push(format!("{name} invalid"));
        }
        match make_unique_delaunay(&c.points, &c.triangulation, UNIQUE_BUDGET) {
            Ok(moved) if delaunay(&moved).unwrap() == c.triangulation => {}
            Ok(_) => failures.push(format!("{name} round trip differs")),
            Err(e) => failures.push(format!("{name}: {e}")),
        }
    }
    let detail = if failures.is_empty() {
        format!("{} constructions valid at eps {VALIDITY_EPS:e} and reproduced after perturbation", builds.len())
    } else {
        failures.join("; ")
    };
    outcome(failures.is_empty(), detail)
}

fn criterion_6() -> Outcome {
    let mut mismatches = 0;
    for seed in 0..200u64 {
        let n = 3 + (seed as usize % 6);
        let ps = common::random_points(n, 6_000_000 + seed);
        let t = delaunay(&ps).unwrap();
        let r = max_dilation(&graph_from_triangulation(&ps, &t).unwrap()).unwrap();
        let (value, pair) = common::dfs_max_dilation(&t.edges(), ps.points());
        if r.max_dilation.to_bits() != value.to_bits() || r.witness != pair {
            mismatches += 1;
        }
    }
    outcome(mismatches == 0, format!("200 point sets of 3 to 8 points, {mismatches} mismatches"))
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut failed = 0;
    for k in 0..INVARIANCE_SETS {
        let ps = sample(&DensitySpec::unit_square(), 50, 700 + k).unwrap();
        let mag: f64 = rng.random_range(0.1..10.0);
        let a = if rng.random::<bool>() { mag } else { -mag };
        let b = Point2::xy(rng.random_range(-10.0..10.0), rng.random_range(-10.0..10.0));
        if !invariance_check(&ps, a, b, k).unwrap() {
            failed += 1;
        }
    }
    outcome(failed == 0, format!("{INVARIANCE_SETS} random 50-point sets, {failed} failures at 1e-9 relative"))
}

fn criterion_8() -> Outcome {
    let c = convex(222);
    let pc = planted_configuration(&c, UNIQUE_BUDGET, 20, 0).unwrap();
    let density = DensitySpec::Gaussian { mean: Point2::xy(0.5, 0.5), sigma: 1.0 };
    let mut worst = f64::INFINITY;
    for n_outside in [0usize, 100, 1000] {
        for seed in 0..PLANT_SEEDS {
            let spec = PlantSpec { n_outside, ..pc.spec.clone() };
            let ps = plant(&spec, &density, seed).unwrap();
            let r = triangulation_dilation(&ps, &delaunay(&ps).unwrap()).unwrap();
            worst = worst.min(r.max_dilation);
        }
    }
    outcome(
        worst >= pc.dilation - PLANT_SLACK,
        format!(
            "configuration {:.7}, ball radius {:.2e}, worst planted {worst:.7} over 3 x {PLANT_SEEDS} runs",
            pc.dilation, pc.spec.ball_radius
        ),
    )
}

fn criterion_9() -> Outcome {
    let r = dilation_trend(&DensitySpec::unit_square(), &TREND_NS, TREND_TRIALS, TREND_SEED).unwrap();
    let medians = r.medians();
    let inversions = medians.windows(2).filter(|w| w[1] < w[0]).count();
    let baseline_ok = TREND_BASELINE.iter().zip(&medians).all(|(b, m)| (b - m).abs() <= BASELINE_TOL);
    outcome(
        inversions <= 1 && baseline_ok,
        format!(
            "medians {:?}, {inversions} inversion(s), baseline {}",
            medians,
            if baseline_ok { "matches" } else { "CHANGED" }
        ),
    )
}

/// Name, check, runtime budget.
type Criterion = (&'static str, fn() -> Outcome, Duration);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("closed form sweep", criterion_1, Duration::from_millis(100)),
        ("two-semicircle construction", criterion_2, Duration::from_secs(1)),
        ("three-circle construction", criterion_3, Duration::from_secs(5)),
        ("chew limit", criterion_4, Duration::from_secs(1)),
        ("validity suite", criterion_5, Duration::from_secs(10)),
        ("oracle equivalence", criterion_6, Duration::from_secs(10)),
        ("scale and translation invariance", criterion_7, Duration::from_secs(30)),
        ("planted configuration", criterion_8, Duration::from_secs(120)),
        ("random dilation trend", criterion_9, Duration::from_secs(300)),
    ];
    let mut all = true;
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        let took = start.elapsed();
        let in_time = took <= *budget;
        let pass = o.pass && in_time;
        all &= pass;
        println!(
            "criterion {} {name}: {} ({}; {:.2?} of {:.0?}{})",
            i + 1,
            if pass { "PASS" } else { "FAIL" },
            o.detail,
            took,
            budget,
            if in_time { "" } else { ", over budget" }
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
