mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Delaunay triangulations, their dilation, and lower-bound constructions.
#[derive(Parser)]
#[command(name = "ddil", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
pub struct Output {
    /// Directory for output files; created if missing.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// Also write figure.svg (requires --out-dir).
    #[arg(long)]
    pub svg: bool,
    /// Exit with status 1 unless the computed dilation exceeds this value.
    #[arg(long, value_name = "X")]
    pub assert_bound: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Build a construction and write points.json and triangulation.json.
    Construct(ConstructArgs),
    /// Maximum dilation of a triangulation (Delaunay unless given).
    Dilation(DilationArgs),
    /// Closed-form dilation of the two-semicircle family over a range of d.
    Sweep(SweepArgs),
    /// Maximum Delaunay dilation of random point sets.
    Random(RandomArgs),
    /// Plant a construction among random points and measure the dilation.
    Plant(PlantArgs),
    /// Check that a triangulation is Delaunay.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Kind {
    Chew,
    Convex,
    ThreeCircle,
}

#[derive(Args)]
pub struct ConstructArgs {
    /// Omit when --spec is given.
    #[arg(value_enum, required_unless_present = "spec")]
    pub kind: Option<Kind>,
    /// JSON spec file with a "kind" field plus that construction's parameters.
    #[arg(long, conflicts_with = "kind")]
    pub spec: Option<PathBuf>,
    /// Chew: number of points on the circle.
    #[arg(long, default_value_t = 16)]
    pub n: usize,
    /// Convex and three-circle: distance between the outer circle centers.
    #[arg(long)]
    pub d: Option<f64>,
    /// Convex: angle of the marked point below the top of its semicircle.
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    /// Convex: total number of points.
    #[arg(long, default_value_t = 222)]
    pub points: usize,
    /// Three-circle: radius of the middle circle.
    #[arg(long)]
    pub r: Option<f64>,
    /// Three-circle: arc length of the middle circle left empty next to each
    /// junction.
    #[arg(long)]
    pub g: Option<f64>,
    /// Three-circle: samples per unit of arc length.
    #[arg(long)]
    pub arc_density: Option<f64>,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Args)]
pub struct DilationArgs {
    #[arg(long)]
    pub points: PathBuf,
    /// Triangulation file; the Delaunay triangulation is used if omitted.
    #[arg(long)]
    pub triangulation: Option<PathBuf>,
    /// Report the dilation of this pair only.
    #[arg(long, num_args = 2, value_names = ["I", "J"])]
    pub pair: Option<Vec<usize>>,
    /// Include the table of every pair.
    #[arg(long)]
    pub pairs: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub d_min: f64,
    #[arg(long)]
    pub d_max: f64,
    #[arg(long)]
    pub step: f64,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Dist {
    UniformSquare,
    UniformDisk,
    Gaussian,
}

#[derive(Args)]
pub struct RandomArgs {
    #[arg(long, value_enum, default_value_t = Dist::UniformSquare, conflicts_with = "density")]
    pub dist: Dist,
    /// JSON density spec, for mixtures or non-default parameters.
    #[arg(long)]
    pub density: Option<PathBuf>,
    /// Comma-separated, strictly increasing point counts.
    #[arg(long, value_delimiter = ',', required = true)]
    pub ns: Vec<usize>,
    #[arg(long, default_value_t = 20)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Args)]
pub struct PlantArgs {
    #[arg(long, value_enum, default_value_t = Kind::Convex)]
    pub config: Kind,
    /// Point count of the configuration (Chew n or convex total).
    #[arg(long)]
    pub points: Option<usize>,
    #[arg(long, default_value_t = 500)]
    pub n_outside: usize,
    /// Density of the outside points; a unit gaussian around the box center
    /// if omitted.
    #[arg(long)]
    pub density: Option<PathBuf>,
    /// Perturbation budget used to make the configuration non-degenerate.
    #[arg(long, default_value_t = 1e-6)]
    pub budget: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub points: PathBuf,
    #[arg(long)]
    pub triangulation: PathBuf,
    /// Relative margin a point must be inside a circumcircle by to count.
    #[arg(long, default_value_t = 1e-9)]
    pub eps: f64,
}

fn main() -> ExitCode {
    // fixed filter: the tool reads no environment variables
    env_logger::Builder::new().filter_level(log::LevelFilter::Warn).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Construct(a) => commands::construct(a),
        Command::Dilation(a) => commands::dilation(a),
        Command::Sweep(a) => commands::sweep(a),
        Command::Random(a) => commands::random(a),
        Command::Plant(a) => commands::plant(a),
        Command::Verify(a) => commands::verify(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
