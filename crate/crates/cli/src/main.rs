mod config;
mod svg;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use torusrot::chains::{build_disk_chain, classify_chain, export_chain};
use torusrot::classify::{classify_map, ClassifyParams};
use torusrot::geom::Vec2;
use torusrot::maps::{parse_map, TorusLift};
use torusrot::recurrence::{atkinson_search, lifted_recurrence_fraction};
use torusrot::regions::{omega_region, u_epsilon_region, write_png, write_trgr, GridRegion, RegionSummary, Window};
use torusrot::rotation::rotation_set_estimate;

#[derive(Parser)]
#[command(name = "torusrot", version, about = "Rotation sets and planar topology of torus homeomorphism lifts")]
struct Cli {
    /// JSON file whose keys mirror the long flags; explicit flags win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads (falls back to TORUSROT_THREADS, then all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rotation-set estimate as JSON plus an SVG hull plot.
    Rotset(RotsetArgs),
    /// Classify a lift and write the verdict as JSON.
    Classify(ClassifyArgs),
    /// Raster of the half-plane intersection region.
    Omega(OmegaArgs),
    /// Raster of the filled orbit neighbourhood of a point.
    Ueps(UepsArgs),
    /// Build and classify a chain of orbit neighbourhoods.
    Chain(ChainArgs),
    /// Lifted recurrence statistics as JSON plus CSV.
    Recur(RecurArgs),
    /// Directional return times of one point as CSV.
    Atkinson(AtkinsonArgs),
}

#[derive(Args, Serialize, Deserialize)]
struct RotsetArgs {
    #[arg(long)]
    map: Option<String>,
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Defaults to the JSON path with an `.svg` extension.
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args, Serialize, Deserialize)]
struct ClassifyArgs {
    #[arg(long)]
    map: Option<String>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long = "N")]
    #[serde(rename = "N")]
    horizon: Option<u64>,
    #[arg(long)]
    denom_max: Option<i64>,
    #[arg(long)]
    m_threshold: Option<f64>,
    /// `k` for `[-k,k]²` or `x0,x1,y0,y1`.
    #[arg(long, allow_hyphen_values = true)]
    window: Option<String>,
    #[arg(long)]
    resolution: Option<u32>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize, Deserialize)]
struct OmegaArgs {
    #[arg(long)]
    map: Option<String>,
    /// Direction `a,b`.
    #[arg(long, allow_hyphen_values = true)]
    v: Option<String>,
    #[arg(long = "N")]
    #[serde(rename = "N")]
    horizon: Option<u64>,
    #[arg(long, allow_hyphen_values = true)]
    window: Option<String>,
    #[arg(long)]
    resolution: Option<u32>,
    /// `omega` or `b`.
    #[arg(long)]
    variant: Option<String>,
    /// Raster output (`.trgr`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Defaults to the raster path with a `.png` extension.
    #[arg(long)]
    png: Option<PathBuf>,
}

#[derive(Args, Serialize, Deserialize)]
struct UepsArgs {
    #[arg(long)]
    map: Option<String>,
    /// Point `x,y`.
    #[arg(long, allow_hyphen_values = true)]
    z: Option<String>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long = "N")]
    #[serde(rename = "N")]
    horizon: Option<u64>,
    #[arg(long, allow_hyphen_values = true)]
    window: Option<String>,
    #[arg(long)]
    resolution: Option<u32>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    png: Option<PathBuf>,
}

#[derive(Args, Serialize, Deserialize)]
struct ChainArgs {
    #[arg(long)]
    map: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    z: Option<String>,
    #[arg(long)]
    depth: Option<usize>,
    #[arg(long = "N")]
    #[serde(rename = "N")]
    horizon: Option<u64>,
    #[arg(long, allow_hyphen_values = true)]
    window: Option<String>,
    #[arg(long)]
    resolution: Option<u32>,
    /// `lattice`, `nonzero`, `offline:a,b` or `finite:a,b;c,d`.
    #[arg(long)]
    sigma: Option<String>,
    /// Output directory for level rasters and `manifest.json`.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize, Deserialize)]
struct RecurArgs {
    #[arg(long)]
    map: Option<String>,
    /// `grid`, `random`, `orbit:x,y` or `point:x,y`.
    #[arg(long)]
    sampler: Option<String>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long = "N")]
    #[serde(rename = "N")]
    horizon: Option<u64>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Defaults to the JSON path with a `.csv` extension.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args, Serialize, Deserialize)]
struct AtkinsonArgs {
    #[arg(long)]
    map: Option<String>,
    /// Direction `a,b`.
    #[arg(long, allow_hyphen_values = true)]
    v0: Option<String>,
    /// Start point `x,y`.
    #[arg(long, allow_hyphen_values = true)]
    x: Option<String>,
    #[arg(long = "N")]
    #[serde(rename = "N")]
    horizon: Option<u64>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Marks errors caused by malformed user input.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(err: anyhow::Error) -> anyhow::Error {
    anyhow!(Usage(format!("{err:#}")))
}

fn required<T>(value: Option<T>, flag: &str) -> Result<T> {
    value.ok_or_else(|| anyhow!(Usage(format!("missing required flag --{flag}"))))
}

fn lift_of(spec: Option<String>) -> Result<TorusLift> {
    Ok(parse_map(&required(spec, "map")?)?)
}

fn window_of(text: Option<String>, default: i64) -> Result<Window> {
    match text {
        Some(t) => config::window(&t).map_err(usage),
        None => Ok(Window::square(default)?),
    }
}

fn write_json<T: Serialize>(value: &T, path: Option<&Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(value)? + "\n";
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write_raster(region: &GridRegion, out: &Path, png: Option<PathBuf>) -> Result<()> {
    let file = fs::File::create(out).with_context(|| format!("creating {}", out.display()))?;
    write_trgr(region, std::io::BufWriter::new(file))?;
    write_png(region, &png.unwrap_or_else(|| out.with_extension("png")))?;
    Ok(())
}

#[derive(Serialize)]
struct RotsetReport {
    map_spec: String,
    n: u64,
    grid: usize,
    sample_count: usize,
    diameter: f64,
    hull: Vec<[f64; 2]>,
}

fn rotset(a: RotsetArgs) -> Result<()> {
    let lift = lift_of(a.map)?;
    let (n, grid) = (a.n.unwrap_or(200), a.grid.unwrap_or(16));
    let est = rotation_set_estimate(&lift, n, grid)?;
    let report = RotsetReport {
        map_spec: lift.to_string(),
        n,
        grid,
        sample_count: est.sample_count,
        diameter: est.diameter,
        hull: est.hull.vertices().iter().map(|p| [p.x, p.y]).collect(),
    };
    write_json(&report, a.out.as_deref())?;
    let svg_path = a.svg.or_else(|| a.out.as_ref().map(|p| p.with_extension("svg")));
    if let Some(path) = svg_path {
        fs::write(&path, svg::hull_svg(est.hull.vertices(), &report.map_spec))?;
    }
    Ok(())
}

fn classify(a: ClassifyArgs) -> Result<()> {
    let lift = lift_of(a.map)?;
    let d = ClassifyParams::default();
    let params = ClassifyParams {
        samples: a.samples.unwrap_or(d.samples),
        n: a.horizon.unwrap_or(d.n),
        denom_max: a.denom_max.unwrap_or(d.denom_max),
        m_threshold: a.m_threshold.unwrap_or(d.m_threshold),
        window: match a.window {
            Some(t) => config::window(&t).map_err(usage)?,
            None => d.window,
        },
        resolution: a.resolution.unwrap_or(d.resolution),
        seed: a.seed.unwrap_or(0),
    };
    write_json(&classify_map(&lift, &params)?, a.out.as_deref())
}

#[derive(Serialize)]
struct RasterReport {
    map_spec: String,
    summary: RegionSummary,
}

fn omega(a: OmegaArgs) -> Result<()> {
    let lift = lift_of(a.map)?;
    let v = config::point(&required(a.v, "v")?, "v").map_err(usage)?;
    let variant = config::variant(a.variant.as_deref().unwrap_or("omega")).map_err(usage)?;
    let window = window_of(a.window, 4)?;
    let region = omega_region(&lift, v, a.horizon.unwrap_or(50), window, a.resolution.unwrap_or(64), variant)?;
    write_raster(&region, &required(a.out, "out")?, a.png)?;
    write_json(&RasterReport { map_spec: lift.to_string(), summary: RegionSummary::of(&region) }, None)
}

#[derive(Serialize)]
struct UepsReport {
    map_spec: String,
    z: Vec2,
    eps: f64,
    period: Option<u64>,
    free: bool,
    summary: RegionSummary,
}

fn ueps(a: UepsArgs) -> Result<()> {
    let lift = lift_of(a.map)?;
    let z = config::point(&required(a.z, "z")?, "z").map_err(usage)?;
    let eps = a.eps.unwrap_or(0.1);
    let window = window_of(a.window, 4)?;
    let u = u_epsilon_region(&lift, z, eps, a.horizon.unwrap_or(50), window, a.resolution.unwrap_or(64))?;
    write_raster(&u.region, &required(a.out, "out")?, a.png)?;
    let summary = RegionSummary::of(&u.region);
    write_json(&UepsReport { map_spec: lift.to_string(), z, eps, period: u.period, free: u.free, summary }, None)
}

fn chain(a: ChainArgs) -> Result<()> {
    let lift = lift_of(a.map)?;
    let z = config::point(&required(a.z, "z")?, "z").map_err(usage)?;
    let sigma = config::sigma(a.sigma.as_deref().unwrap_or("nonzero")).map_err(usage)?;
    let window = window_of(a.window, 4)?;
    let chain = build_disk_chain(
        &lift,
        z,
        a.depth.unwrap_or(4),
        a.horizon.unwrap_or(50),
        window,
        a.resolution.unwrap_or(32),
        sigma,
    )?;
    let verdict = classify_chain(&chain)?;
    let manifest = export_chain(&chain, &verdict, &required(a.out, "out")?)?;
    write_json(&manifest, None)
}

fn recur(a: RecurArgs) -> Result<()> {
    let lift = lift_of(a.map)?;
    let seed = a.seed.unwrap_or(0);
    let sampler = config::sampler(a.sampler.as_deref().unwrap_or("random"), seed).map_err(usage)?;
    let report = lifted_recurrence_fraction(
        &lift,
        &sampler,
        a.samples.unwrap_or(100),
        a.horizon.unwrap_or(1000),
        a.eps.unwrap_or(0.05),
    )?;
    write_json(&report, a.out.as_deref())?;
    if let Some(path) = a.csv.or_else(|| a.out.as_ref().map(|p| p.with_extension("csv"))) {
        fs::write(&path, report.to_csv())?;
    }
    Ok(())
}

fn atkinson(a: AtkinsonArgs) -> Result<()> {
    let lift = lift_of(a.map)?;
    let v0 = config::point(&required(a.v0, "v0")?, "v0").map_err(usage)?;
    let x = config::point(&required(a.x, "x")?, "x").map_err(usage)?;
    let hits = atkinson_search(&lift, v0, x, a.horizon.unwrap_or(1000), a.eps.unwrap_or(0.05))?;
    let mut csv = String::from("n,torus_distance,directional_sum\n");
    for h in &hits {
        csv.push_str(&format!("{},{:e},{:e}\n", h.n, h.torus_distance, h.directional_sum));
    }
    match a.out {
        Some(p) => fs::write(&p, csv).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{csv}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let threads = match cli.threads {
        Some(t) => Some(t),
        None => match std::env::var("TORUSROT_THREADS") {
            Ok(s) => Some(s.trim().parse().map_err(|_| anyhow!(Usage(format!("TORUSROT_THREADS must be an integer, got {s:?}"))))?),
            Err(_) => None,
        },
    };
    if let Some(t) = threads {
        if t == 0 {
            return Err(anyhow!(Usage("thread count must be positive".into())));
        }
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global()?;
    }
    let cfg = cli.config.as_deref();
    match cli.command {
        Command::Rotset(a) => rotset(config::merge(&a, cfg).map_err(usage)?),
        Command::Classify(a) => classify(config::merge(&a, cfg).map_err(usage)?),
        Command::Omega(a) => omega(config::merge(&a, cfg).map_err(usage)?),
        Command::Ueps(a) => ueps(config::merge(&a, cfg).map_err(usage)?),
        Command::Chain(a) => chain(config::merge(&a, cfg).map_err(usage)?),
        Command::Recur(a) => recur(config::merge(&a, cfg).map_err(usage)?),
        Command::Atkinson(a) => atkinson(config::merge(&a, cfg).map_err(usage)?),
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<Usage>().is_some() {
        return 2;
    }
    match err.downcast_ref::<torusrot::Error>() {
        Some(torusrot::Error::InvalidArgument(_)) => 2,
        Some(
            torusrot::Error::PreconditionViolation(_)
            | torusrot::Error::DegenerateGeometry(_)
            | torusrot::Error::Resolution(_),
        ) => 3,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("torusrot: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
