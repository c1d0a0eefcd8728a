use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use hcs_core::acsf::{AcsfParams, AcsfState};
use hcs_core::experiment::{
    build_obstacles, convergence_sweep, reports_to_csv, run_conjecture_experiment, world_polyline, write_svg, AcsfTarget, Backend,
    ExperimentConfig, SvgCurve,
};
use hcs_core::geom::{FPoint, FPolyline, Point};
use hcs_core::hcs::{convex_layers, hull_boundary_curve, run, snap_to_obstacles, ScaledPolyline, StopCondition};
use hcs_core::io::{parse_polyline, read_pcurve, write_pcurve, PCurveFile};
use hcs_core::obstacles::{ExplicitObstacleSet, GridObstacleSet, ObstacleSet, Scale};

#[derive(Parser, Debug)]
#[command(name = "hcs", version, about = "Homotopic curve shortening over point obstacles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Snap a curve to obstacles and iterate HCS.
    Run(RunArgs),
    /// Affine curve-shortening flow.
    Acsf {
        #[command(subcommand)]
        command: AcsfCommand,
    },
    /// Convex-layer decomposition of a point set, checked against HCS.
    Layers(LayersArgs),
    /// Grid and random-point experiments.
    Experiment {
        #[command(subcommand)]
        command: ExperimentCommand,
    },
    /// Draw curve files as an SVG overlay.
    Render(RenderArgs),
}

#[derive(Subcommand, Debug)]
enum AcsfCommand {
    /// Run the flow on a curve until a length fraction or a flow time.
    Run(AcsfArgs),
}

#[derive(Subcommand, Debug)]
enum ExperimentCommand {
    /// Iterations to reach a length fraction, with c = m / (t* N^(2/3)).
    Conjecture(ConjectureArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
enum BackendArg {
    Grid,
    Random,
}

impl From<BackendArg> for Backend {
    fn from(b: BackendArg) -> Self {
        match b {
            BackendArg::Grid => Backend::Grid,
            BackendArg::Random => Backend::Random,
        }
    }
}

/// Flags shared by the subcommands. Every field may also come from the JSON
/// document given with `--config`; flags win.
#[derive(Args, Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
struct Common {
    /// Input curve: a file of `x y` lines or `builtin:delta`.
    #[arg(long)]
    curve: Option<String>,
    #[arg(long, value_enum)]
    backend: Option<BackendArg>,
    /// Obstacle counts, comma separated (`10000,1e5`).
    #[arg(long, value_delimiter = ',', value_parser = parse_count)]
    n: Option<Vec<u64>>,
    /// Seeds: a list `1,2,3` or a range `0..5`.
    #[arg(long, value_parser = parse_seeds)]
    seeds: Option<Seeds>,
    #[arg(long)]
    stop_fraction: Option<f64>,
    #[arg(long)]
    max_steps: Option<usize>,
    #[arg(long)]
    out_csv: Option<PathBuf>,
    #[arg(long)]
    out_svg: Option<PathBuf>,
    /// JSON document with any of the flags above.
    #[arg(long)]
    #[serde(skip)]
    config: Option<PathBuf>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
enum Seeds {
    List(Vec<u64>),
    Text(String),
}

impl Seeds {
    fn values(&self) -> Result<Vec<u64>> {
        match self {
            Seeds::List(v) => Ok(v.clone()),
            Seeds::Text(s) => seed_list(s),
        }
    }
}

fn seed_list(s: &str) -> Result<Vec<u64>> {
    if let Some((a, b)) = s.split_once("..") {
        let (a, b): (u64, u64) = (a.trim().parse()?, b.trim().parse()?);
        if a >= b {
            bail!("empty seed range {s}");
        }
        return Ok((a..b).collect());
    }
    s.split(',').map(|x| Ok(x.trim().parse()?)).collect()
}

fn parse_seeds(s: &str) -> std::result::Result<Seeds, String> {
    seed_list(s).map(Seeds::List).map_err(|e| e.to_string())
}

fn parse_count(s: &str) -> std::result::Result<u64, String> {
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    match s.parse::<f64>() {
        Ok(f) if f >= 1.0 && f.fract() == 0.0 && f < 1e18 => Ok(f as u64),
        _ => Err(format!("not a count: {s}")),
    }
}

impl Common {
    /// Fills unset flags from the `--config` document.
    fn resolve(mut self) -> Result<Self> {
        let Some(path) = self.config.clone() else {
            return Ok(self);
        };
        let text = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
        let file: Common = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        self.curve = self.curve.or(file.curve);
        self.backend = self.backend.or(file.backend);
        self.n = self.n.or(file.n);
        self.seeds = self.seeds.or(file.seeds);
        self.stop_fraction = self.stop_fraction.or(file.stop_fraction);
        self.max_steps = self.max_steps.or(file.max_steps);
        self.out_csv = self.out_csv.or(file.out_csv);
        self.out_svg = self.out_svg.or(file.out_svg);
        Ok(self)
    }

    fn curve(&self) -> Result<ScaledPolyline> {
        load_curve(self.curve.as_deref().unwrap_or("builtin:delta"))
    }

    fn backend(&self) -> Backend {
        self.backend.unwrap_or(BackendArg::Grid).into()
    }

    fn ns(&self) -> Vec<u64> {
        self.n.clone().unwrap_or_else(|| vec![10_000])
    }

    fn seeds(&self) -> Result<Vec<u64>> {
        self.seeds.as_ref().map(Seeds::values).unwrap_or_else(|| Ok((0..5).collect()))
    }

    fn stop_fraction(&self) -> Result<f64> {
        let f = self.stop_fraction.unwrap_or(0.7);
        if !(f > 0.0 && f < 1.0) {
            bail!("--stop-fraction must lie in (0, 1), got {f}");
        }
        Ok(f)
    }
}

fn load_curve(spec: &str) -> Result<ScaledPolyline> {
    if let Some(name) = spec.strip_prefix("builtin:") {
        return match name {
            "delta" => Ok(ScaledPolyline::delta()),
            _ => bail!("unknown builtin curve {name}"),
        };
    }
    let text = fs::read_to_string(spec).with_context(|| format!("reading {spec}"))?;
    let p = parse_polyline(&text).with_context(|| format!("parsing {spec}"))?;
    if p.vertices.len() < 3 {
        bail!("{spec}: a closed curve needs at least 3 vertices");
    }
    Ok(p)
}

fn write_out(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

#[derive(Args, Debug)]
struct RunArgs {
    #[command(flatten)]
    common: Common,
    /// Draw every k-th curve of the trace in the SVG.
    #[arg(long, default_value_t = 1)]
    every: usize,
    /// Write the final curve in P-curve format.
    #[arg(long)]
    out_curve: Option<PathBuf>,
}

fn cmd_run(args: RunArgs) -> Result<()> {
    let common = args.common.resolve()?;
    let curve = common.curve()?;
    let backend = common.backend();
    let n = *common.ns().first().context("--n is empty")?;
    let seed = common.seeds()?.first().copied().unwrap_or(0);
    let obs = build_obstacles(backend, n, seed)?;
    let start = snap_to_obstacles(&curve, obs.as_ref())?;
    let mut stop = match common.stop_fraction {
        Some(_) => StopCondition::length_fraction(common.stop_fraction()?),
        None => StopCondition::collapse(),
    };
    stop.max_steps = common.max_steps;
    let trace = run(&start, obs.as_ref(), stop)?;

    let mut csv = String::from("step,length,visits\n");
    let s = obs.scale().to_f64();
    for (i, (c, l)) in trace.curves.iter().zip(&trace.lengths).enumerate() {
        writeln!(csv, "{i},{},{}", l / s, c.len())?;
    }
    if let Some(p) = &common.out_csv {
        fs::write(p, &csv).with_context(|| format!("writing {}", p.display()))?;
    }
    if let Some(p) = &common.out_svg {
        let every = args.every.max(1);
        let curves: Vec<SvgCurve> = trace
            .curves
            .iter()
            .enumerate()
            .filter(|(i, _)| i % every == 0 || *i + 1 == trace.curves.len())
            .map(|(i, c)| SvgCurve { label: format!("step {i}"), curve: world_polyline(c, obs.scale()) })
            .collect();
        write_svg(&curves, p)?;
    }
    let last = trace.curves.last().expect("trace holds the input");
    if let Some(p) = &args.out_curve {
        let f = PCurveFile { backend: backend.to_string(), scale: obs.scale(), curve: last.clone() };
        fs::write(p, write_pcurve(&f)).with_context(|| format!("writing {}", p.display()))?;
    }
    let l0 = trace.lengths[0];
    println!("backend={backend} N={n} visits={} steps={} collapsed={}", start.len(), trace.steps_executed, trace.collapsed);
    println!("length {:.6} -> {:.6} ({:.4} of start)", l0 / s, last.length() / s, last.length() / l0);
    Ok(())
}

#[derive(Args, Debug)]
struct AcsfArgs {
    #[command(flatten)]
    common: Common,
    /// Number of samples.
    #[arg(long, default_value_t = 1000)]
    m: usize,
    /// Stop at this flow time instead of at a length fraction.
    #[arg(long)]
    t_end: Option<f64>,
    /// Also record intermediate curves every this much flow time.
    #[arg(long)]
    snapshot_every: Option<f64>,
}

fn cmd_acsf(args: AcsfArgs) -> Result<()> {
    let common = args.common.resolve()?;
    let curve = common.curve()?;
    let params = AcsfParams { m: args.m, ..AcsfParams::default() };
    let mut state = AcsfState::init(&curve.to_f64(), params)?;
    let l0 = state.length();
    let mut csv = String::from("t,x,y\n");
    let mut snaps: Vec<FPolyline> = vec![state.polyline()];
    state.write_csv_rows(&mut csv);
    let target = |s: &AcsfState| match args.t_end {
        Some(t) => s.time() >= t,
        None => s.length() <= common.stop_fraction.unwrap_or(0.7) * l0,
    };
    if args.t_end.is_none() {
        common.stop_fraction()?;
    }
    let mut next_snap = args.snapshot_every;
    while !target(&state) {
        state.step()?;
        if let (Some(at), Some(every)) = (next_snap, args.snapshot_every) {
            if state.time() >= at {
                state.write_csv_rows(&mut csv);
                snaps.push(state.polyline());
                next_snap = Some(at + every);
            }
        }
    }
    if snaps.last() != Some(&state.polyline()) {
        state.write_csv_rows(&mut csv);
        snaps.push(state.polyline());
    }
    if let Some(p) = &common.out_csv {
        fs::write(p, &csv).with_context(|| format!("writing {}", p.display()))?;
    }
    if let Some(p) = &common.out_svg {
        let curves: Vec<SvgCurve> =
            snaps.into_iter().enumerate().map(|(i, c)| SvgCurve { label: format!("snapshot {i}"), curve: c }).collect();
        write_svg(&curves, p)?;
    }
    println!(
        "t={} length fraction={:.6} near-singular steps={}",
        state.time(),
        state.length() / l0,
        state.singular_steps()
    );
    Ok(())
}

#[derive(Args, Debug)]
struct LayersArgs {
    /// Obstacle file (`scale <den>` header, then `x y` lines).
    #[arg(long, conflicts_with = "grid")]
    points: Option<PathBuf>,
    /// Use the k × k integer grid instead.
    #[arg(long)]
    grid: Option<i64>,
    #[arg(long)]
    out_svg: Option<PathBuf>,
}

fn cmd_layers(args: LayersArgs) -> Result<()> {
    let (points, obs): (Vec<Point>, Box<dyn ObstacleSet>) = match (&args.points, args.grid) {
        (Some(path), _) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let set = ExplicitObstacleSet::from_text(&text)?;
            (set.points().to_vec(), Box::new(set))
        }
        (None, Some(k)) if k >= 1 => {
            let pts = (0..k).flat_map(|x| (0..k).map(move |y| Point::new(x, y))).collect();
            (pts, Box::new(GridObstacleSet::new(Scale::Exact(1))))
        }
        _ => bail!("give --points <file> or --grid <k>"),
    };
    let layers = convex_layers(&points);
    let mut curve = hull_boundary_curve(&points, obs.as_ref())?;
    let mut agree = true;
    for (i, layer) in layers.iter().enumerate() {
        let mut corners: Vec<Point> = (0..curve.len()).filter(|&j| !curve.is_nailed(j)).map(|j| curve.visits()[j].point).collect();
        corners.sort_unstable();
        corners.dedup();
        let same = &corners == layer;
        agree &= same;
        println!("layer {}: {} points{}", i + 1, layer.len(), if same { "" } else { " (HCS differs)" });
        if curve.is_collapsed() {
            break;
        }
        curve = hcs_core::hcs::hcs_step(&curve, obs.as_ref())?;
    }
    println!("HCS from the hull boundary {} the layers", if agree { "reproduces" } else { "does not reproduce" });
    if let Some(p) = &args.out_svg {
        let curves: Vec<SvgCurve> = layers
            .iter()
            .enumerate()
            .map(|(i, l)| {
                let hull = hcs_core::geom::convex_hull(l);
                let vertices = hull.iter().map(|q| FPoint::new(q.x as f64, q.y as f64)).collect();
                SvgCurve { label: format!("layer {}", i + 1), curve: FPolyline { vertices, closed: true } }
            })
            .collect();
        write_svg(&curves, p)?;
    }
    Ok(())
}

#[derive(Args, Debug)]
struct ConjectureArgs {
    #[command(flatten)]
    common: Common,
    /// Flow time to use instead of simulating the flow (no distance column).
    #[arg(long, conflicts_with = "acsf_target")]
    t_star: Option<f64>,
    /// Flow target written by `hcs acsf run --out-csv`.
    #[arg(long)]
    acsf_target: Option<PathBuf>,
    /// Print zero wall times so the CSV is byte-reproducible.
    #[arg(long)]
    deterministic: bool,
    /// Also report h-distances of each grid run to the run at the largest N.
    #[arg(long)]
    convergence: bool,
}

fn cmd_conjecture(args: ConjectureArgs) -> Result<()> {
    let common = args.common.resolve()?;
    let cfg = ExperimentConfig {
        curve: common.curve()?,
        backend: common.backend(),
        ns: common.ns(),
        seeds: common.seeds()?,
        stop_fraction: common.stop_fraction()?,
        max_steps: common.max_steps,
        deterministic: args.deterministic,
    };
    let target = match (&args.acsf_target, args.t_star) {
        (Some(path), _) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            AcsfTarget::from_csv(&text)?
        }
        (None, Some(t)) => AcsfTarget { t_star: t, curve: None },
        (None, None) => {
            eprintln!("simulating the flow to {} of the length (this can take several minutes)", cfg.stop_fraction);
            AcsfTarget::simulate(&cfg.curve, cfg.stop_fraction, AcsfParams::default())?
        }
    };
    let out = run_conjecture_experiment(&cfg, &target)?;
    for s in &out.skipped {
        eprintln!("skipped {} N={} seed={:?}: {}", s.backend, s.n, s.seed, s.reason);
    }
    write_out(common.out_csv.as_deref(), &reports_to_csv(&out.reports))?;
    if let Some(p) = &common.out_svg {
        let mut curves: Vec<SvgCurve> = out
            .reports
            .iter()
            .filter(|r| !r.mean)
            .zip(&out.curves)
            .map(|(r, c)| SvgCurve {
                label: format!("{} N={}{}", r.backend, r.n, r.seed.map(|s| format!(" seed={s}")).unwrap_or_default()),
                curve: c.clone(),
            })
            .collect();
        if let Some(t) = &target.curve {
            curves.push(SvgCurve { label: format!("flow t={}", target.t_star), curve: t.clone() });
        }
        write_svg(&curves, p)?;
    }
    if args.convergence {
        let mut ns = cfg.ns.clone();
        ns.sort_unstable();
        let rep = convergence_sweep(&cfg.curve, &ns, cfg.stop_fraction)?;
        for (n, d) in rep.ns.iter().zip(&rep.distances) {
            eprintln!("h(N={n}, N={}) = {d}", ns.last().unwrap());
        }
        for r in &rep.ratios {
            eprintln!("ratio {r}");
        }
    }
    Ok(())
}

#[derive(Args, Debug)]
struct RenderArgs {
    /// P-curve files (as written by `hcs run --out-curve`) or `x y` polylines.
    #[arg(long = "curve", required = true)]
    curves: Vec<String>,
    #[arg(long)]
    out_svg: PathBuf,
}

fn cmd_render(args: RenderArgs) -> Result<()> {
    let mut curves = Vec::new();
    for spec in &args.curves {
        let curve = if spec.starts_with("builtin:") {
            load_curve(spec)?.to_f64()
        } else {
            let text = fs::read_to_string(spec).with_context(|| format!("reading {spec}"))?;
            if text.trim_start().starts_with("pcurve") {
                let f = read_pcurve(&text).with_context(|| format!("parsing {spec}"))?;
                world_polyline(&f.curve, f.scale)
            } else {
                parse_polyline(&text).with_context(|| format!("parsing {spec}"))?.to_f64()
            }
        };
        curves.push(SvgCurve { label: spec.clone(), curve });
    }
    write_svg(&curves, &args.out_svg)?;
    Ok(())
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Run(a) => cmd_run(a),
        Command::Acsf { command: AcsfCommand::Run(a) } => cmd_acsf(a),
        Command::Layers(a) => cmd_layers(a),
        Command::Experiment { command: ExperimentCommand::Conjecture(a) } => cmd_conjecture(a),
        Command::Render(a) => cmd_render(a),
    }
}
