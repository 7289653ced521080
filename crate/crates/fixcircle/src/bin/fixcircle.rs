use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use fixcircle::emit::{emit_csv, emit_svg, Layer};
use fixcircle::reproduce::{render_table, reproduce_all};
use fixcircle::scenario::{
    Check, CheckSpec, CircleSampling, Coords, Domain, Expect, MapRef, MetricRef, OutputKind, Scenario,
};
use fixcircle::{load_scenario, print_scenario, run_scenario, summary, Run, DEFAULT_SEED};
use fixcircle_core::mappings::CATALOG_NAMES;
use fixcircle_core::Window;

/// Fixed circles in S-metric spaces: solve and trace circles, check the
/// existence and uniqueness conditions, and reproduce the worked examples.
#[derive(Debug, Parser)]
#[command(name = "fixcircle", version)]
struct Cli {
    /// Seed for randomized checks. Falls back to the scenario's seed, then to
    /// FIXCIRCLE_SEED, then to a fixed default.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Print the scenario JSON that the command runs.
    #[arg(long, global = true)]
    print_scenario: bool,
    /// Print the full JSON report instead of the summary table.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a scenario file (or bundled scenario) or a single inline check.
    Verify(VerifyArgs),
    /// Solve a circle on the real line exactly.
    Solve(SolveArgs),
    /// Trace a circle on a grid.
    Trace(TraceArgs),
    /// Search for fixed circles around given centres.
    Discover(DiscoverArgs),
    /// Fuzz the S-metric axioms on random points.
    Fuzz(FuzzArgs),
    /// Run a scenario quietly and write its declared outputs.
    Plot(PlotArgs),
    /// Run every bundled scenario and print a pass/fail table.
    ReproducePaper(ReproduceArgs),
}

#[derive(Debug, Args)]
struct MetricArgs {
    /// Metric family, e.g. usual1d, symskew2d, exp2d, halfsum, generated:abs, dsl.
    #[arg(long)]
    metric: String,
    /// Family parameter as KEY=VALUE (repeatable).
    #[arg(long = "param", value_name = "KEY=VALUE")]
    params: Vec<String>,
    /// Source of a `dsl` metric, e.g. "abs(x - z) + abs(y - z)".
    #[arg(long)]
    metric_dsl: Option<String>,
}

impl MetricArgs {
    fn to_ref(&self) -> Result<MetricRef> {
        let mut params = BTreeMap::new();
        for p in &self.params {
            let (k, v) = p.split_once('=').ok_or_else(|| anyhow!("parameter `{p}` is not KEY=VALUE"))?;
            params.insert(k.trim().to_string(), v.trim().parse().with_context(|| format!("parameter `{p}`"))?);
        }
        Ok(MetricRef { family: self.metric.clone(), params, dsl: self.metric_dsl.clone() })
    }
}

#[derive(Debug, Args)]
struct DomainArgs {
    /// Window as LO:HI per axis, comma separated, e.g. "-1:1,-1:1".
    #[arg(long, allow_hyphen_values = true)]
    window: Option<String>,
    /// Grid spacing over the window.
    #[arg(long, conflicts_with_all = ["resolution", "points"])]
    step: Option<f64>,
    /// Grid cells per axis over the window.
    #[arg(long, conflicts_with = "points")]
    resolution: Option<usize>,
    /// Explicit points separated by ';', coordinates by ',', e.g. "0;1.5" or "0,0;1,0".
    #[arg(long, allow_hyphen_values = true)]
    points: Option<String>,
}

impl DomainArgs {
    fn to_domain(&self) -> Result<Domain> {
        Ok(Domain {
            window: self.window.as_deref().map(parse_window).transpose()?,
            step: self.step,
            resolution: self.resolution,
            random: None,
            points: self.points.as_deref().map(parse_points).transpose()?,
        })
    }
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Scenario file, or the name of a bundled scenario.
    #[arg(long, conflicts_with_all = ["metric", "check"])]
    scenario: Option<String>,
    #[command(flatten)]
    inline: InlineArgs,
    /// Directory for the scenario's declared outputs; nothing is written without it.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct InlineArgs {
    #[arg(long)]
    metric: Option<String>,
    #[arg(long = "param", value_name = "KEY=VALUE")]
    params: Vec<String>,
    #[arg(long)]
    metric_dsl: Option<String>,
    /// Catalog name (T1..T10, exm1, exm2, intro) or map DSL source.
    #[arg(long)]
    map: Option<String>,
    #[command(flatten)]
    domain: DomainArgs,
    /// Check to run: thm1, thm2, identity, rhoades, diameter, thm6, fixed_points, circle_fixed, discover.
    #[arg(long)]
    check: Option<String>,
    /// Circle centre; repeat for discover.
    #[arg(long, allow_hyphen_values = true)]
    center: Vec<String>,
    #[arg(long)]
    radius: Option<f64>,
    #[arg(long)]
    h: Option<f64>,
    /// Expected verdict as CONDITION=VERDICT, e.g. thm1_S2=fails (repeatable).
    #[arg(long = "expect", value_name = "CONDITION=VERDICT")]
    expect: Vec<String>,
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[command(flatten)]
    metric: MetricArgs,
    #[arg(long, allow_hyphen_values = true)]
    center: String,
    #[arg(long)]
    radius: f64,
    /// Write the solution as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct TraceArgs {
    #[command(flatten)]
    metric: MetricArgs,
    #[arg(long, allow_hyphen_values = true)]
    center: String,
    #[arg(long)]
    radius: f64,
    #[arg(long, allow_hyphen_values = true)]
    window: String,
    #[arg(long, default_value_t = 512)]
    resolution: usize,
    #[arg(long)]
    band_tol: Option<f64>,
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct DiscoverArgs {
    #[command(flatten)]
    metric: MetricArgs,
    /// Catalog name or map DSL source.
    #[arg(long)]
    map: String,
    #[command(flatten)]
    domain: DomainArgs,
    /// Candidate centre (repeatable).
    #[arg(long, required = true, allow_hyphen_values = true)]
    center: Vec<String>,
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct FuzzArgs {
    #[command(flatten)]
    metric: MetricArgs,
    #[arg(long, default_value_t = 10_000)]
    trials: usize,
    /// Sampling window; defaults to [-2, 2] on every axis.
    #[arg(long, allow_hyphen_values = true)]
    window: Option<String>,
}

#[derive(Debug, Args)]
struct PlotArgs {
    #[arg(long)]
    scenario: String,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct ReproduceArgs {
    #[arg(long, default_value = "reproduction")]
    out: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

/// `Ok(passed)` when the command ran; `Err` for unusable input.
fn execute(cli: &Cli) -> Result<bool> {
    match &cli.command {
        Command::Verify(args) => {
            let scenario = match &args.scenario {
                Some(s) => load_scenario(s)?,
                None => inline_scenario(&args.inline)?,
            };
            run(cli, &scenario, args.out.as_ref())
        }
        Command::Solve(args) => {
            let scenario = Scenario {
                name: "solve".into(),
                description: String::new(),
                seed: None,
                metric: args.metric.to_ref()?,
                map: None,
                domain: Domain::default(),
                tolerances: Default::default(),
                checks: vec![labelled(
                    "circle",
                    CheckSpec::Solve { center: parse_coords(&args.center)?, radius: args.radius, expect_points: None },
                )],
                outputs: Vec::new(),
            };
            let files: Vec<_> = args.csv.iter().map(|p| (OutputKind::Csv, p.clone())).collect();
            run_with_files(cli, &scenario, "circle", &files)
        }
        Command::Trace(args) => {
            let scenario = Scenario {
                name: "trace".into(),
                description: String::new(),
                seed: None,
                metric: args.metric.to_ref()?,
                map: None,
                domain: Domain { window: Some(parse_window(&args.window)?), ..Domain::default() },
                tolerances: Default::default(),
                checks: vec![labelled(
                    "circle",
                    CheckSpec::Trace {
                        center: parse_coords(&args.center)?,
                        radius: args.radius,
                        window: None,
                        resolution: Some(args.resolution),
                        band_tol: args.band_tol,
                        expect_min_points: None,
                        expect_near: Vec::new(),
                    },
                )],
                outputs: Vec::new(),
            };
            let files: Vec<_> = (args.csv.iter().map(|p| (OutputKind::Csv, p.clone())))
                .chain(args.svg.iter().map(|p| (OutputKind::Svg, p.clone())))
                .collect();
            run_with_files(cli, &scenario, "circle", &files)
        }
        Command::Discover(args) => {
            let scenario = Scenario {
                name: "discover".into(),
                description: String::new(),
                seed: None,
                metric: args.metric.to_ref()?,
                map: Some(map_ref(&args.map)),
                domain: args.domain.to_domain()?,
                tolerances: Default::default(),
                checks: vec![labelled(
                    "fixed_circles",
                    CheckSpec::Discover {
                        centers: args.center.iter().map(|c| parse_coords(c)).collect::<Result<_>>()?,
                        expect_circles: None,
                    },
                )],
                outputs: Vec::new(),
            };
            let files: Vec<_> = args.csv.iter().map(|p| (OutputKind::Csv, p.clone())).collect();
            run_with_files(cli, &scenario, "fixed_circles", &files)
        }
        Command::Fuzz(args) => {
            let metric = args.metric.to_ref()?;
            let dim = metric.resolve()?.dimension();
            let window = match &args.window {
                Some(w) => parse_window(w)?,
                None => Window::new(vec![-2.0; dim], vec![2.0; dim])?,
            };
            let scenario = Scenario {
                name: "fuzz".into(),
                description: String::new(),
                seed: None,
                metric,
                map: None,
                domain: Domain { window: Some(window), ..Domain::default() },
                tolerances: Default::default(),
                checks: vec![labelled("axioms", CheckSpec::Axioms { trials: args.trials, expect_clean: Some(true) })],
                outputs: Vec::new(),
            };
            run(cli, &scenario, None)
        }
        Command::Plot(args) => {
            let scenario = load_scenario(&args.scenario)?;
            let out = run_scenario(&scenario, seed(cli, &scenario))?;
            for p in out.write_outputs(&args.out)? {
                println!("wrote {}", p.display());
            }
            Ok(true)
        }
        Command::ReproducePaper(args) => {
            let seed = cli.seed.or_else(env_seed).unwrap_or(DEFAULT_SEED);
            let rows = reproduce_all(seed, &args.out)?;
            print!("{}", render_table(&rows, seed));
            Ok(rows.iter().all(|r| r.passed))
        }
    }
}

fn seed(cli: &Cli, scenario: &Scenario) -> u64 {
    cli.seed.or(scenario.seed).or_else(env_seed).unwrap_or(DEFAULT_SEED)
}

fn env_seed() -> Option<u64> {
    std::env::var("FIXCIRCLE_SEED").ok()?.trim().parse().ok()
}

fn run_and_print(cli: &Cli, scenario: &Scenario) -> Result<Run> {
    if cli.print_scenario {
        println!("{}", print_scenario(scenario));
    }
    let result = run_scenario(scenario, seed(cli, scenario))?;
    if cli.json {
        print!("{}", result.report.to_json());
    } else {
        print!("{}", summary::render(&result.report));
    }
    Ok(result)
}

fn run(cli: &Cli, scenario: &Scenario, out: Option<&PathBuf>) -> Result<bool> {
    let result = run_and_print(cli, scenario)?;
    if let Some(dir) = out {
        for p in result.write_outputs(dir)? {
            eprintln!("wrote {}", p.display());
        }
    }
    Ok(result.report.passed)
}

/// Inline commands name their output files directly, anywhere on disk, and
/// always draw the point set of the check labelled `source`.
fn run_with_files(cli: &Cli, scenario: &Scenario, source: &str, files: &[(OutputKind, PathBuf)]) -> Result<bool> {
    let result = run_and_print(cli, scenario)?;
    let cloud = result.clouds.get(source).cloned().unwrap_or_default();
    for (kind, path) in files {
        match kind {
            OutputKind::Svg => {
                let window = match &scenario.domain.window {
                    Some(w) => w.clone(),
                    None => bail!("an SVG plot needs a window"),
                };
                emit_svg(&[Layer { label: source, cloud: &cloud }], &window, &scenario.name, path)
            }
            _ => emit_csv(&cloud, result.dim, path),
        }
        .with_context(|| format!("writing {}", path.display()))?;
        eprintln!("wrote {}", path.display());
    }
    Ok(result.report.passed)
}

fn labelled(label: &str, spec: CheckSpec) -> Check {
    Check { label: Some(label.into()), spec }
}

fn map_ref(s: &str) -> MapRef {
    if CATALOG_NAMES.contains(&s) {
        MapRef::Catalog(s.into())
    } else {
        MapRef::Dsl(s.into())
    }
}

fn inline_scenario(a: &InlineArgs) -> Result<Scenario> {
    let metric = a.metric.clone().ok_or_else(|| anyhow!("either --scenario or --metric is required"))?;
    let metric = MetricArgs { metric, params: a.params.clone(), metric_dsl: a.metric_dsl.clone() }.to_ref()?;
    let kind = a.check.as_deref().ok_or_else(|| anyhow!("--check is required with inline flags"))?;
    let centers: Vec<Coords> = a.center.iter().map(|c| parse_coords(c)).collect::<Result<_>>()?;
    let center = || centers.first().cloned().ok_or_else(|| anyhow!("--center is required for `{kind}`"));
    let radius = || a.radius.ok_or_else(|| anyhow!("--radius is required for `{kind}`"));
    let mut expect = BTreeMap::new();
    for e in &a.expect {
        let (k, v) = e.split_once('=').ok_or_else(|| anyhow!("expectation `{e}` is not CONDITION=VERDICT"))?;
        let v: Expect = serde_json::from_value(serde_json::Value::String(v.trim().to_string()))
            .map_err(|_| anyhow!("unknown verdict `{v}` (holds, holds_on_sample, fails, vacuous)"))?;
        expect.insert(k.trim().to_string(), v);
    }
    let sample = CircleSampling::Auto;
    let spec = match kind {
        "thm1" => CheckSpec::Thm1 { center: center()?, radius: radius()?, sample, expect, expect_fixed: None },
        "thm2" => CheckSpec::Thm2 {
            center: center()?,
            radius: radius()?,
            h: a.h.unwrap_or(0.0),
            sample,
            expect,
            expect_fixed: None,
        },
        "identity" => CheckSpec::Identity { center: center()?, h: a.h.unwrap_or(3.0), expect, expect_identity: None },
        "rhoades" => CheckSpec::Rhoades { center: center()?, radius: radius()?, sample, expect },
        "diameter" => CheckSpec::Diameter { center: center()?, radius: radius()?, sample, expect },
        "thm6" => {
            CheckSpec::Thm6 { center: center()?, expect_r: None, expect, expect_fixed: None, expect_ball_fixed: None }
        }
        "fixed_points" => CheckSpec::FixedPoints { expect_points: None },
        "circle_fixed" => CheckSpec::CircleFixed { center: center()?, radius: radius()?, sample, expect_fixed: None },
        "discover" => CheckSpec::Discover { centers: centers.clone(), expect_circles: None },
        other => bail!("unknown check `{other}`"),
    };
    if !matches!(kind, "thm1" | "thm2" | "identity" | "rhoades" | "diameter" | "thm6") && !a.expect.is_empty() {
        bail!("--expect does not apply to `{kind}`");
    }
    Ok(Scenario {
        name: format!("inline-{kind}"),
        description: String::new(),
        seed: None,
        metric,
        map: a.map.as_deref().map(map_ref),
        domain: a.domain.to_domain()?,
        tolerances: Default::default(),
        checks: vec![Check::new(spec)],
        outputs: Vec::new(),
    })
}

fn parse_coords(s: &str) -> Result<Coords> {
    let s = s.trim().trim_start_matches('(').trim_end_matches(')');
    let coords = s
        .split(',')
        .map(|c| c.trim().parse::<f64>().with_context(|| format!("bad coordinate `{c}`")))
        .collect::<Result<Vec<_>>>()?;
    Ok(Coords(coords))
}

fn parse_points(s: &str) -> Result<Vec<Coords>> {
    s.split(';').filter(|p| !p.trim().is_empty()).map(parse_coords).collect()
}

fn parse_window(s: &str) -> Result<Window> {
    let (mut lo, mut hi) = (Vec::new(), Vec::new());
    for axis in s.split(',') {
        let (a, b) = axis.split_once(':').ok_or_else(|| anyhow!("window axis `{axis}` is not LO:HI"))?;
        lo.push(a.trim().parse::<f64>().with_context(|| format!("bad bound `{a}`"))?);
        hi.push(b.trim().parse::<f64>().with_context(|| format!("bad bound `{b}`"))?);
    }
    Ok(Window::new(lo, hi)?)
}
