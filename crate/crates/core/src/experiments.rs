//! Random point sets: sampling, planted configurations, dilation trends and
//! the scale/translation invariance of the maximum dilation.

use std::collections::HashSet;
use std::f64::consts::TAU;

use rand::{Rng, RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constructions::ConstructionOutput;
use crate::dilation::triangulation_dilation;
use crate::error::{invalid, Error, Result};
use crate::geom::Point2;
use crate::numeric::derive_seed;
use crate::triangulation::{
    delaunay, key, make_unique_delaunay, perturb, stability_check, stable_radius, PointSet, Triangulation,
};

/// Attempts allowed per outside point before [`plant`] gives up.
pub const REJECTION_CAP: usize = 1_000_000;

/// Thresholds reported by [`dilation_trend`] as exceedance fractions.
pub const TREND_THRESHOLDS: [f64; 4] = [1.2, 1.3, 1.4, 1.5];

/// A probability density on the plane.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DensitySpec {
    /// Uniform on the square `[x0, x0 + side] x [y0, y0 + side]`.
    UniformSquare {
        #[serde(default)]
        x0: f64,
        #[serde(default)]
        y0: f64,
        #[serde(default = "one")]
        side: f64,
    },
    /// Uniform on a closed disk.
    UniformDisk { center: Point2, radius: f64 },
    /// Isotropic normal distribution.
    Gaussian { mean: Point2, sigma: f64 },
    /// Finite mixture; weights need not sum to one.
    Mixture { components: Vec<(f64, DensitySpec)> },
}

fn one() -> f64 {
    1.0
}

impl DensitySpec {
    /// The uniform density on the unit square.
    pub fn unit_square() -> Self {
        DensitySpec::UniformSquare { x0: 0.0, y0: 0.0, side: 1.0 }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = |v: f64| v.is_finite();
        match self {
            DensitySpec::UniformSquare { x0, y0, side } => {
                if !(finite(*x0) && finite(*y0) && *side > 0.0 && finite(*side)) {
                    return Err(invalid("uniform square needs a finite corner and positive side"));
                }
            }
            DensitySpec::UniformDisk { center, radius } => {
                if !(center.is_finite() && *radius > 0.0 && finite(*radius)) {
                    return Err(invalid("uniform disk needs a finite center and positive radius"));
                }
            }
            DensitySpec::Gaussian { mean, sigma } => {
                if !(mean.is_finite() && *sigma > 0.0 && finite(*sigma)) {
                    return Err(invalid("gaussian needs a finite mean and positive sigma"));
                }
            }
            DensitySpec::Mixture { components } => {
                if components.is_empty() {
                    return Err(invalid("mixture has no components"));
                }
                for (w, c) in components {
                    if !(*w > 0.0 && finite(*w)) {
                        return Err(invalid(format!("mixture weight {w}")));
                    }
                    c.validate()?;
                }
            }
        }
        Ok(())
    }

    /// Draws one point. Assumes the spec is valid.
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> Point2 {
        match self {
            DensitySpec::UniformSquare { x0, y0, side } => {
                Point2 { x: x0 + side * rng.random::<f64>(), y: y0 + side * rng.random::<f64>() }
            }
            DensitySpec::UniformDisk { center, radius } => {
                let rho = radius * rng.random::<f64>().sqrt();
                *center + Point2::polar(TAU * rng.random::<f64>()) * rho
            }
            DensitySpec::Gaussian { mean, sigma } => {
                let normal = Normal::new(0.0, *sigma).expect("validated sigma");
                Point2 { x: mean.x + normal.sample(rng), y: mean.y + normal.sample(rng) }
            }
            DensitySpec::Mixture { components } => {
                let total: f64 = components.iter().map(|(w, _)| w).sum();
                let mut u = total * rng.random::<f64>();
                for (w, c) in components {
                    if u < *w {
                        return c.draw(rng);
                    }
                    u -= w;
                }
                components.last().expect("validated mixture").1.draw(rng)
            }
        }
    }
}

/// `n` i.i.d. points from `density`; repeated points are redrawn.
///
/// ```
/// use delaunay_dilation::experiments::{sample, DensitySpec};
/// let ps = sample(&DensitySpec::unit_square(), 100, 7).unwrap();
/// assert_eq!(ps, sample(&DensitySpec::unit_square(), 100, 7).unwrap());
/// assert!(ps.points().iter().all(|p| (0.0..=1.0).contains(&p.x) && (0.0..=1.0).contains(&p.y)));
/// ```
pub fn sample(density: &DensitySpec, n: usize, seed: u64) -> Result<PointSet> {
    if n < 3 {
        return Err(Error::TooFewPoints { required: 3, actual: n });
    }
    density.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = HashSet::with_capacity(n);
    let mut pts = Vec::with_capacity(n);
    while pts.len() < n {
        let p = density.draw(&mut rng);
        if seen.insert(key(p)) {
            pts.push(p);
        }
    }
    PointSet::new(pts)
}

/// One trial of [`dilation_trend`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrendSample {
    pub n: usize,
    pub trial: usize,
    pub seed: u64,
    pub max_dilation: f64,
    pub witness: (usize, usize),
}

/// Aggregates over the trials for one `n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrendSummary {
    pub n: usize,
    pub median: f64,
    pub max: f64,
    pub min: f64,
    /// `(threshold, fraction of trials with max_dilation > threshold)`.
    pub exceeding: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrendResult {
    pub samples: Vec<TrendSample>,
    pub summaries: Vec<TrendSummary>,
}

impl TrendResult {
    pub fn medians(&self) -> Vec<f64> {
        self.summaries.iter().map(|s| s.median).collect()
    }
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let m = values.len();
    if m % 2 == 1 {
        values[m / 2]
    } else {
        0.5 * (values[m / 2 - 1] + values[m / 2])
    }
}

/// Maximum Delaunay dilation of `trials` samples at each size in `ns`.
///
/// Trial `k` at size `n` uses the seed `derive_seed(seed, n, k)`, so the
/// result does not depend on how the trials are scheduled.
pub fn dilation_trend(density: &DensitySpec, ns: &[usize], trials: usize, seed: u64) -> Result<TrendResult> {
    density.validate()?;
    if ns.is_empty() || trials == 0 {
        return Err(invalid("need at least one size and one trial"));
    }
    if ns.windows(2).any(|w| w[0] >= w[1]) {
        return Err(invalid("sizes must be strictly increasing"));
    }
    let jobs: Vec<(usize, usize)> = ns.iter().flat_map(|&n| (0..trials).map(move |k| (n, k))).collect();
    let samples = jobs
        .par_iter()
        .map(|&(n, trial)| {
            let trial_seed = derive_seed(seed, n as u64, trial as u64);
            let mut draw_seed = trial_seed;
            for attempt in 1u64.. {
                let ps = sample(density, n, draw_seed)?;
                match delaunay(&ps) {
                    Ok(t) => {
                        let r = triangulation_dilation(&ps, &t)?;
                        return Ok(TrendSample {
                            n,
                            trial,
                            seed: draw_seed,
                            max_dilation: r.max_dilation,
                            witness: r.witness,
                        });
                    }
                    Err(Error::AllCollinear) => {
                        log::warn!("collinear sample at n={n}, trial {trial}; redrawing");
                        draw_seed = derive_seed(trial_seed, attempt, 1);
                    }
                    Err(e) => return Err(e),
                }
            }
            unreachable!()
        })
        .collect::<Result<Vec<_>>>()?;

    let summaries = ns
        .iter()
        .map(|&n| {
            let mut vals: Vec<f64> = samples.iter().filter(|s| s.n == n).map(|s| s.max_dilation).collect();
            let exceeding = TREND_THRESHOLDS
                .iter()
                .map(|&th| (th, vals.iter().filter(|&&v| v > th).count() as f64 / vals.len() as f64))
                .collect();
            let med = median(&mut vals);
            TrendSummary { n, median: med, max: vals[vals.len() - 1], min: vals[0], exceeding }
        })
        .collect();
    Ok(TrendResult { samples, summaries })
}

/// A configuration planted into a box among random outside points.
///
/// The configuration lives in the unit square and is mapped into the box
/// `scale * [0, 1]^2 + offset`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlantSpec {
    pub config: PointSet,
    pub ball_radius: f64,
    pub scale: f64,
    pub offset: Point2,
    pub n_outside: usize,
}

impl PlantSpec {
    pub fn validate(&self) -> Result<()> {
        let d = self.ball_radius;
        if !(d >= 0.0 && d.is_finite()) {
            return Err(invalid(format!("ball radius {d}")));
        }
        if !(self.scale > 0.0 && self.scale.is_finite() && self.offset.is_finite()) {
            return Err(invalid("box needs a positive scale and finite offset"));
        }
        let pts = self.config.points();
        if pts.is_empty() {
            return Err(invalid("empty configuration"));
        }
        for (i, p) in pts.iter().enumerate() {
            if !(p.x - d > 0.0 && p.x + d < 1.0 && p.y - d > 0.0 && p.y + d < 1.0) {
                return Err(invalid(format!("ball around configuration point {i} leaves the unit box")));
            }
        }
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                if pts[i].dist(pts[j]) <= 2.0 * d {
                    return Err(invalid(format!("balls around points {i} and {j} overlap")));
                }
            }
        }
        Ok(())
    }

    fn to_box(&self, p: Point2) -> Point2 {
        p * self.scale + self.offset
    }

    /// True if `p` lies in the closed box.
    pub fn in_box(&self, p: Point2) -> bool {
        let lo = self.offset;
        let hi = self.offset + Point2 { x: self.scale, y: self.scale };
        p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y
    }
}

/// The configuration jittered within its balls and mapped into the box,
/// followed by `n_outside` points drawn from `density` outside the box.
///
/// ```
/// use delaunay_dilation::experiments::{plant, DensitySpec, PlantSpec};
/// use delaunay_dilation::geom::Point2;
/// use delaunay_dilation::triangulation::PointSet;
/// let config = PointSet::from_xy(&[(0.25, 0.25), (0.75, 0.25), (0.5, 0.75)]).unwrap();
/// let spec = PlantSpec { config, ball_radius: 0.0, scale: 2.0, offset: Point2::xy(1.0, 1.0), n_outside: 0 };
/// let ps = plant(&spec, &DensitySpec::unit_square(), 3).unwrap();
/// assert_eq!(ps[2], Point2::xy(2.0, 2.5));
/// ```
pub fn plant(spec: &PlantSpec, density: &DensitySpec, seed: u64) -> Result<PointSet> {
    spec.validate()?;
    density.validate()?;
    let jitter = perturb(&spec.config, spec.ball_radius, derive_seed(seed, 0, 0))?;
    let mut pts: Vec<Point2> = jitter.points().iter().map(|&p| spec.to_box(p)).collect();
    let mut seen: HashSet<_> = pts.iter().map(|&p| key(p)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, 1, 0));
    for _ in 0..spec.n_outside {
        let mut attempts = 0;
        loop {
            if attempts == REJECTION_CAP {
                return Err(Error::RejectionSampling { attempts });
            }
            attempts += 1;
            let p = density.draw(&mut rng);
            if !spec.in_box(p) && seen.insert(key(p)) {
                pts.push(p);
                break;
            }
        }
    }
    PointSet::new(pts)
}

/// A construction prepared for planting: made non-degenerate, scaled into
/// the unit box, with the largest stable ball radius halved.
#[derive(Debug, Clone, PartialEq)]
pub struct PlantedConfig {
    /// Planting spec with `n_outside = 0` and the identity box.
    pub spec: PlantSpec,
    /// Unique Delaunay triangulation of the configuration.
    pub triangulation: Triangulation,
    /// Maximum dilation of the configuration on its own.
    pub dilation: f64,
}

/// Turns a construction into a [`PlantSpec`].
///
/// The points are mapped into `[0.1, 0.9]^2` and then perturbed by at most
/// `budget` (in the construction's own units) so the constructed
/// triangulation becomes the unique Delaunay triangulation. The ball radius
/// is half of [`stable_radius`] with `trials` perturbations, shrunk further
/// if the balls would touch.
pub fn planted_configuration(c: &ConstructionOutput, budget: f64, trials: usize, seed: u64) -> Result<PlantedConfig> {
    let pts = c.points.points();
    let (mut lo, mut hi) = (pts[0], pts[0]);
    for p in pts {
        lo = Point2 { x: lo.x.min(p.x), y: lo.y.min(p.y) };
        hi = Point2 { x: hi.x.max(p.x), y: hi.y.max(p.y) };
    }
    let a = 0.8 / (hi.x - lo.x).max(hi.y - lo.y);
    let center = (lo + hi) * 0.5;
    // scale first so the uniqueness perturbation is not undone by rounding
    let scaled = c.points.affine(a, Point2 { x: 0.5, y: 0.5 } - center * a)?;
    let config = make_unique_delaunay(&scaled, &c.triangulation, budget * a)?;
    let triangulation = c.triangulation.clone();
    let dilation = triangulation_dilation(&config, &triangulation)?.max_dilation;
    let ball_radius = 0.5 * stable_radius(&config, trials, seed)?;
    let mut spec = PlantSpec { config, ball_radius, scale: 1.0, offset: Point2 { x: 0.0, y: 0.0 }, n_outside: 0 };
    while spec.validate().is_err() {
        spec.ball_radius *= 0.5;
        if spec.ball_radius == 0.0 {
            spec.validate()?;
        }
    }
    Ok(PlantedConfig { spec, triangulation, dilation })
}

/// Checks that the maximum Delaunay dilation of `a * ps + b` equals that of
/// `ps` to within `1e-9` relative.
///
/// `ps` must have a combinatorially stable Delaunay triangulation, checked
/// with [`stability_check`] at a perturbation far above rounding error;
/// otherwise the two triangulations may legitimately differ.
pub fn invariance_check(ps: &PointSet, a: f64, b: Point2, seed: u64) -> Result<bool> {
    let t = delaunay(ps)?;
    let extent = ps.points().iter().map(|p| p.x.abs().max(p.y.abs())).fold(0.0, f64::max);
    if !stability_check(ps, &t, 1e-10 * extent.max(1.0), 8, seed) {
        return Err(Error::DegeneratePointSet);
    }
    let moved = ps.affine(a, b)?;
    let before = triangulation_dilation(ps, &t)?.max_dilation;
    let after = triangulation_dilation(&moved, &delaunay(&moved)?)?.max_dilation;
    Ok((after - before).abs() <= 1e-9 * before)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_mean_within_standard_error() {
        let mean = Point2::xy(2.0, -1.0);
        let sigma = 0.5;
        let n = 10_000;
        let ps = sample(&DensitySpec::Gaussian { mean, sigma }, n, 5).unwrap();
        let (sx, sy) = ps.points().iter().fold((0.0, 0.0), |(x, y), p| (x + p.x, y + p.y));
        let bound = 5.0 * sigma / (n as f64).sqrt();
        assert!((sx / n as f64 - mean.x).abs() < bound);
        assert!((sy / n as f64 - mean.y).abs() < bound);
    }

    #[test]
    fn disk_and_mixture_support() {
        let disk = DensitySpec::UniformDisk { center: Point2::xy(3.0, 3.0), radius: 0.5 };
        let ps = sample(&disk, 500, 1).unwrap();
        assert!(ps.points().iter().all(|p| p.dist(Point2::xy(3.0, 3.0)) <= 0.5 + 1e-15));
        let mix = DensitySpec::Mixture { components: vec![(1.0, DensitySpec::unit_square()), (3.0, disk)] };
        let ps = sample(&mix, 2000, 2).unwrap();
        let near_disk = ps.points().iter().filter(|p| p.x > 2.0).count();
        assert!((1300..1700).contains(&near_disk), "{near_disk}");
    }

    #[test]
    fn rejects_bad_densities() {
        assert!(sample(&DensitySpec::Gaussian { mean: Point2::xy(0.0, 0.0), sigma: 0.0 }, 10, 0).is_err());
        assert!(sample(&DensitySpec::Mixture { components: vec![] }, 10, 0).is_err());
        assert!(sample(&DensitySpec::unit_square(), 2, 0).is_err());
    }

    #[test]
    fn three_points_have_unit_dilation() {
        let r = dilation_trend(&DensitySpec::unit_square(), &[3], 5, 1).unwrap();
        assert!(r.samples.iter().all(|s| s.max_dilation == 1.0));
    }

    #[test]
    fn trend_is_reproducible() {
        let d = DensitySpec::unit_square();
        let a = dilation_trend(&d, &[10, 30], 6, 9).unwrap();
        assert_eq!(a, dilation_trend(&d, &[10, 30], 6, 9).unwrap());
        assert_eq!(a.samples.len(), 12);
        assert!(a.samples.iter().all(|s| s.max_dilation >= 1.0));
        assert!(dilation_trend(&d, &[30, 10], 6, 9).is_err());
    }

    #[test]
    fn plant_places_outside_points_outside() {
        let config = PointSet::from_xy(&[(0.3, 0.3), (0.7, 0.3), (0.5, 0.7)]).unwrap();
        let spec = PlantSpec { config, ball_radius: 0.05, scale: 0.2, offset: Point2::xy(0.4, 0.4), n_outside: 200 };
        let ps = plant(&spec, &DensitySpec::unit_square(), 4).unwrap();
        assert_eq!(ps.len(), 203);
        assert!(ps.points()[3..].iter().all(|&p| !spec.in_box(p)));
        for (z, x) in ps.points()[..3].iter().zip(spec.config.points()) {
            assert!(z.dist(spec.to_box(*x)) <= 0.05 * 0.2 * (1.0 + 1e-12));
        }
    }

    #[test]
    fn plant_gives_up_when_density_sits_in_the_box() {
        let config = PointSet::from_xy(&[(0.5, 0.5)]).unwrap();
        let spec = PlantSpec { config, ball_radius: 0.0, scale: 1.0, offset: Point2::xy(0.0, 0.0), n_outside: 1 };
        let err = plant(&spec, &DensitySpec::unit_square(), 0).unwrap_err();
        assert_eq!(err, Error::RejectionSampling { attempts: REJECTION_CAP });
    }

    #[test]
    fn plant_rejects_overlapping_balls() {
        let config = PointSet::from_xy(&[(0.5, 0.5), (0.55, 0.5)]).unwrap();
        let spec = PlantSpec { config, ball_radius: 0.03, scale: 1.0, offset: Point2::xy(0.0, 0.0), n_outside: 0 };
        assert!(plant(&spec, &DensitySpec::unit_square(), 0).is_err());
    }

    #[test]
    fn planted_chew_keeps_its_dilation() {
        use crate::constructions::{generate_chew, ChewSpec};
        let c = generate_chew(ChewSpec { n: 16 }).unwrap();
        let pc = planted_configuration(&c, 1e-6, 8, 0).unwrap();
        assert!((pc.dilation - c.predicted_dilation).abs() < 1e-4);
        assert!(pc.spec.ball_radius > 0.0);
        let spec = PlantSpec { n_outside: 300, ..pc.spec };
        let ps = plant(&spec, &DensitySpec::Gaussian { mean: Point2::xy(0.5, 0.5), sigma: 1.0 }, 3).unwrap();
        let r = triangulation_dilation(&ps, &delaunay(&ps).unwrap()).unwrap();
        assert!(r.max_dilation >= pc.dilation - 1e-3);
    }

    #[test]
    fn invariance_examples() {
        let ps = sample(&DensitySpec::unit_square(), 50, 11).unwrap();
        assert!(invariance_check(&ps, 1.0, Point2::xy(0.0, 0.0), 0).unwrap());
        assert!(invariance_check(&ps, 2.0, Point2::xy(5.0, -3.0), 0).unwrap());
        assert!(invariance_check(&ps, -1.0, Point2::xy(0.0, 0.0), 0).unwrap());
        let square = PointSet::from_xy(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]).unwrap();
        assert_eq!(invariance_check(&square, 2.0, Point2::xy(0.0, 0.0), 0), Err(Error::DegeneratePointSet));
    }
}
