use delaunay_dilation::constructions::{generate_two_semicircle, TwoSemicircleSpec};
use delaunay_dilation::dilation::triangulation_dilation;
use delaunay_dilation::experiments::{
    dilation_trend, invariance_check, plant, planted_configuration, sample, DensitySpec, PlantSpec,
};
use delaunay_dilation::triangulation::{delaunay, PointSet};
use delaunay_dilation::Point2;
use proptest::prelude::*;

#[test]
fn trend_does_not_depend_on_thread_count() {
    let d = DensitySpec::unit_square();
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| dilation_trend(&d, &[20, 80], 8, 5).unwrap())
    };
    let one = run(1);
    let four = run(4);
    assert_eq!(one, four);
    let bits = |r: &delaunay_dilation::experiments::TrendResult| {
        r.samples.iter().map(|s| s.max_dilation.to_bits()).collect::<Vec<_>>()
    };
    assert_eq!(bits(&one), bits(&four));
}

#[test]
fn planted_convex_configuration_survives_outside_points() {
    let c = generate_two_semicircle(TwoSemicircleSpec::with_total(0.29, 1.0, 18).unwrap()).unwrap();
    let pc = planted_configuration(&c, 1e-6, 10, 0).unwrap();
    assert!(pc.dilation > std::f64::consts::FRAC_PI_2);
    let density = DensitySpec::Gaussian { mean: Point2::xy(0.5, 0.5), sigma: 1.0 };
    for n_outside in [0, 100] {
        for seed in 0..3 {
            let spec = PlantSpec { n_outside, ..pc.spec.clone() };
            let ps = plant(&spec, &density, seed).unwrap();
            let r = triangulation_dilation(&ps, &delaunay(&ps).unwrap()).unwrap();
            assert!(r.max_dilation >= 1.57, "{}", r.max_dilation);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn plant_invariants(seed in any::<u64>(), n_outside in 0usize..200, delta in 0.0..0.05f64, scale in 0.1..3.0f64, ox in -2.0..2.0f64) {
        let config = PointSet::from_xy(&[(0.2, 0.2), (0.8, 0.25), (0.5, 0.8), (0.45, 0.45)]).unwrap();
        let spec = PlantSpec { config, ball_radius: delta, scale, offset: Point2::xy(ox, -ox), n_outside };
        let density = DensitySpec::Gaussian { mean: Point2::xy(0.0, 0.0), sigma: 4.0 };
        let ps = plant(&spec, &density, seed).unwrap();
        prop_assert_eq!(ps.len(), 4 + n_outside);
        for (z, x) in ps.points()[..4].iter().zip(spec.config.points()) {
            let target = *x * scale + spec.offset;
            prop_assert!(z.dist(target) <= delta * scale * (1.0 + 1e-9) + 1e-15);
        }
        prop_assert!(ps.points()[4..].iter().all(|&p| !spec.in_box(p)));
    }

    #[test]
    fn invariance_under_random_similarities(seed in any::<u64>(), a in 0.1..10.0f64, neg in any::<bool>(), bx in -10.0..10.0f64, by in -10.0..10.0f64) {
        let ps = sample(&DensitySpec::unit_square(), 30, seed).unwrap();
        let a = if neg { -a } else { a };
        prop_assert!(invariance_check(&ps, a, Point2::xy(bx, by), seed).unwrap());
    }
}
