use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use serde::Deserialize;
use serde_json::json;

use delaunay_dilation::constructions::{
    generate_chew, generate_three_circle, generate_two_semicircle, sweep_d, ChewSpec, ConstructionOutput,
    ThreeCircleSpec, TwoSemicircleSpec,
};
use delaunay_dilation::dilation::{graph_from_triangulation, max_dilation, max_dilation_with_pairs, shortest_path};
use delaunay_dilation::experiments::{dilation_trend, plant as plant_points, planted_configuration, DensitySpec, PlantSpec};
use delaunay_dilation::svg::{render, Figure};
use delaunay_dilation::triangulation::{delaunay, is_valid_delaunay, PointSet, Triangulation};
use delaunay_dilation::{io, Error, Point2};

use crate::{ConstructArgs, DilationArgs, Dist, Format, Kind, Output, PlantArgs, RandomArgs, SweepArgs, VerifyArgs};

/// Bad invocation or unusable input; exit status 2.
#[derive(Debug)]
struct Usage(String);

impl fmt::Display for Usage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

/// 2 for usage, I/O and malformed input, 1 for everything else.
pub fn exit_code(e: &anyhow::Error) -> u8 {
    for cause in e.chain() {
        if cause.is::<Usage>() || cause.is::<std::io::Error>() {
            return 2;
        }
        if let Some(err) = cause.downcast_ref::<Error>() {
            return match err {
                Error::Format(_)
                | Error::InvalidParameter(_)
                | Error::MalformedTriangulation(_)
                | Error::IndexOutOfRange { .. }
                | Error::DuplicatePoint { .. }
                | Error::NonFinite { .. } => 2,
                _ => 1,
            };
        }
    }
    1
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_points(path: &Path) -> Result<PointSet> {
    io::points_from_json(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn read_triangulation(path: &Path, ps: &PointSet) -> Result<Triangulation> {
    let raw = io::triangulation_from_json(&read(path)?).with_context(|| format!("in {}", path.display()))?;
    Triangulation::from_triangles(ps, raw.triangles().to_vec())
        .map_err(|e| usage(format!("{} is not a triangulation of the points: {e}", path.display())))
}

fn read_density(path: &Path) -> Result<DensitySpec> {
    serde_json::from_str(&read(path)?).map_err(|e| usage(format!("density spec {}: {e}", path.display())))
}

/// Where output files go, if anywhere.
struct Sink {
    dir: Option<PathBuf>,
}

impl Sink {
    fn new(out: &Output, default_dir: Option<&str>) -> Result<Self> {
        let dir = out.out_dir.clone().or_else(|| default_dir.map(PathBuf::from));
        if out.svg && dir.is_none() {
            return Err(usage("--svg needs --out-dir"));
        }
        if let Some(d) = &dir {
            fs::create_dir_all(d).with_context(|| format!("creating {}", d.display()))?;
        }
        Ok(Sink { dir })
    }

    fn write(&self, name: &str, contents: &str) -> Result<()> {
        if let Some(d) = &self.dir {
            let path = d.join(name);
            fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
        }
        Ok(())
    }
}

/// Applies `--assert-bound`.
fn check_bound(out: &Output, value: f64) -> ExitCode {
    match out.assert_bound {
        Some(x) if value <= x => {
            eprintln!("bound not met: {value} <= {x}");
            ExitCode::from(1)
        }
        _ => ExitCode::SUCCESS,
    }
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
enum SpecFile {
    Chew(ChewSpec),
    Convex(TwoSemicircleSpec),
    ThreeCircle(ThreeCircleSpec),
}

fn build(spec: SpecFile) -> Result<ConstructionOutput> {
    Ok(match spec {
        SpecFile::Chew(s) => generate_chew(s)?,
        SpecFile::Convex(s) => generate_two_semicircle(s)?,
        SpecFile::ThreeCircle(s) => generate_three_circle(s)?,
    })
}

fn spec_from_flags(a: &ConstructArgs, kind: Kind) -> Result<SpecFile> {
    Ok(match kind {
        Kind::Chew => SpecFile::Chew(ChewSpec { n: a.n }),
        Kind::Convex => SpecFile::Convex(TwoSemicircleSpec::with_total(a.d.unwrap_or(0.29), a.alpha, a.points)?),
        Kind::ThreeCircle => {
            let mut s = ThreeCircleSpec::default();
            if a.d.is_some() || a.r.is_some() || a.g.is_some() {
                // the stated angles belong to the default geometry only
                s.theta = None;
                s.beta = None;
            }
            s.d = a.d.unwrap_or(s.d);
            s.r = a.r.unwrap_or(s.r);
            s.g = a.g.unwrap_or(s.g);
            s.arc_density = a.arc_density.unwrap_or(s.arc_density);
            SpecFile::ThreeCircle(s)
        }
    })
}

pub fn construct(a: ConstructArgs) -> Result<ExitCode> {
    let spec = match (&a.spec, a.kind) {
        (Some(path), _) => serde_json::from_str(&read(path)?)
            .map_err(|e| usage(format!("construction spec {}: {e}", path.display())))?,
        (None, Some(kind)) => spec_from_flags(&a, kind)?,
        (None, None) => return Err(usage("give a construction kind or --spec")),
    };
    let c = build(spec)?;
    let report = max_dilation(&graph_from_triangulation(&c.points, &c.triangulation)?)?;

    let sink = Sink::new(&a.out, Some("."))?;
    sink.write("points.json", &io::points_to_json(&c.points))?;
    sink.write("triangulation.json", &io::triangulation_to_json(&c.triangulation))?;
    if a.out.svg {
        let fig = Figure {
            guides: &c.guides,
            path: &report.witness_path,
            marked: Some((c.p, c.q)),
            caption: Some(format!("{} points, dilation {:.6}", c.points.len(), report.max_dilation)),
        };
        sink.write("figure.svg", &render(&c.points, &c.triangulation, &fig))?;
    }
    println!("points: {}", c.points.len());
    println!("triangles: {}", c.triangulation.len());
    println!("marked pair: {} {}", c.p, c.q);
    println!("predicted dilation: {}", c.predicted_dilation);
    println!("computed dilation: {}", report.max_dilation);
    println!("witness: {} {}", report.witness.0, report.witness.1);
    Ok(check_bound(&a.out, report.max_dilation))
}

pub fn dilation(a: DilationArgs) -> Result<ExitCode> {
    let ps = read_points(&a.points)?;
    let t = match &a.triangulation {
        Some(path) => read_triangulation(path, &ps)?,
        None => delaunay(&ps)?,
    };
    let g = graph_from_triangulation(&ps, &t)?;
    let sink = Sink::new(&a.out, None)?;

    if let Some(pair) = &a.pair {
        let (u, v) = (pair[0], pair[1]);
        if u >= ps.len() || v >= ps.len() {
            return Err(usage(format!("pair ({u}, {v}) out of range for {} points", ps.len())));
        }
        if u == v {
            return Err(usage("pair needs two different points"));
        }
        let (length, path) = shortest_path(&g, u, v)?;
        let distance = ps[u].dist(ps[v]);
        let value = length / distance;
        let out = serde_json::to_string_pretty(&json!({
            "u": u, "v": v, "path_length": length, "distance": distance, "dilation": value, "path": path,
        }))?;
        println!("{out}");
        sink.write("pair.json", &out)?;
        if a.out.svg {
            let fig = Figure { path: &path, marked: Some((u, v)), ..Default::default() };
            sink.write("figure.svg", &render(&ps, &t, &fig))?;
        }
        return Ok(check_bound(&a.out, value));
    }

    let with_pairs = a.pairs || a.format == Format::Csv;
    let report = if with_pairs { max_dilation_with_pairs(&g)? } else { max_dilation(&g)? };
    let text = match a.format {
        Format::Json => io::report_to_json(&report),
        Format::Csv => io::pairs_to_csv(report.pairs.as_deref().unwrap_or_default()),
    };
    print!("{text}");
    if a.format == Format::Json {
        println!();
    }
    sink.write(if a.format == Format::Json { "report.json" } else { "pairs.csv" }, &text)?;
    if a.out.svg {
        let fig = Figure {
            path: &report.witness_path,
            marked: Some(report.witness),
            caption: Some(format!("dilation {:.6}", report.max_dilation)),
            ..Default::default()
        };
        sink.write("figure.svg", &render(&ps, &t, &fig))?;
    }
    Ok(check_bound(&a.out, report.max_dilation))
}

pub fn sweep(a: SweepArgs) -> Result<ExitCode> {
    if a.out.svg {
        return Err(usage("sweep has no figure"));
    }
    let s = sweep_d(a.d_min, a.d_max, a.step)?;
    let csv = io::sweep_to_csv(&s.rows);
    let sink = Sink::new(&a.out, None)?;
    if sink.dir.is_some() {
        sink.write("sweep.csv", &csv)?;
    } else {
        print!("{csv}");
    }
    println!("argmax d={} t={}", s.argmax_d, s.max_t);
    let min_t = s.rows.iter().map(|r| r.t).fold(f64::INFINITY, f64::min);
    Ok(check_bound(&a.out, min_t))
}

pub fn random(a: RandomArgs) -> Result<ExitCode> {
    if a.out.svg {
        return Err(usage("random has no figure"));
    }
    let density = match &a.density {
        Some(path) => read_density(path)?,
        None => match a.dist {
            Dist::UniformSquare => DensitySpec::unit_square(),
            Dist::UniformDisk => DensitySpec::UniformDisk { center: Point2::xy(0.5, 0.5), radius: 0.5 },
            Dist::Gaussian => DensitySpec::Gaussian { mean: Point2::xy(0.5, 0.5), sigma: 1.0 },
        },
    };
    let r = dilation_trend(&density, &a.ns, a.trials, a.seed)?;
    let sink = Sink::new(&a.out, None)?;
    sink.write("trend.csv", &io::trend_to_csv(&r))?;
    sink.write("summary.json", &serde_json::to_string_pretty(&r.summaries)?)?;
    for s in &r.summaries {
        println!("n={} median={} min={} max={}", s.n, s.median, s.min, s.max);
    }
    let best = r.samples.iter().map(|s| s.max_dilation).fold(f64::NEG_INFINITY, f64::max);
    Ok(check_bound(&a.out, best))
}

pub fn plant(a: PlantArgs) -> Result<ExitCode> {
    let c = match a.config {
        Kind::Chew => generate_chew(ChewSpec { n: a.points.unwrap_or(100) })?,
        Kind::Convex => generate_two_semicircle(TwoSemicircleSpec::with_total(0.29, 1.0, a.points.unwrap_or(222))?)?,
        Kind::ThreeCircle => {
            if a.points.is_some() {
                return Err(usage("--points does not apply to three-circle"));
            }
            generate_three_circle(ThreeCircleSpec::default())?
        }
    };
    let density = match &a.density {
        Some(path) => read_density(path)?,
        None => DensitySpec::Gaussian { mean: Point2::xy(0.5, 0.5), sigma: 1.0 },
    };
    let pc = planted_configuration(&c, a.budget, 20, a.seed)?;
    let spec = PlantSpec { n_outside: a.n_outside, ..pc.spec.clone() };
    let ps = plant_points(&spec, &density, a.seed)?;
    let t = delaunay(&ps)?;
    let report = max_dilation(&graph_from_triangulation(&ps, &t)?)?;

    let sink = Sink::new(&a.out, None)?;
    sink.write("points.json", &io::points_to_json(&ps))?;
    sink.write("triangulation.json", &io::triangulation_to_json(&t))?;
    sink.write("report.json", &io::report_to_json(&report))?;
    if a.out.svg {
        let fig = Figure {
            path: &report.witness_path,
            marked: Some(report.witness),
            caption: Some(format!("dilation {:.6}", report.max_dilation)),
            ..Default::default()
        };
        sink.write("figure.svg", &render(&ps, &t, &fig))?;
    }
    println!("configuration points: {}", spec.config.len());
    println!("ball radius: {:e}", spec.ball_radius);
    println!("configuration dilation: {}", pc.dilation);
    println!("points: {}", ps.len());
    println!("dilation: {}", report.max_dilation);
    println!("witness: {} {}", report.witness.0, report.witness.1);
    Ok(check_bound(&a.out, report.max_dilation))
}

pub fn verify(a: VerifyArgs) -> Result<ExitCode> {
    let ps = read_points(&a.points)?;
    let t = read_triangulation(&a.triangulation, &ps)?;
    let report = is_valid_delaunay(&ps, &t, a.eps)?;
    println!("{}", serde_json::to_string_pretty(&report)?);
    if report.valid {
        eprintln!("valid");
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!(
            "invalid: {} illegal edge(s), {} point-in-circumcircle violation(s)",
            report.illegal_edges.len(),
            report.violations.len()
        );
        Ok(ExitCode::from(1))
    }
}
