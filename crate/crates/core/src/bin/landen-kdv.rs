use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use landen_kdv::config::{Family, RunConfig, Tolerances, WaveConfig};
use landen_kdv::evolve::{self, EvolverConfig, Trajectory};
use landen_kdv::format::sig15;
use landen_kdv::suites::{self, Suite};
use landen_kdv::verify;
use landen_kdv::waves::{PlusMinusWave, PmWaveParams};
use landen_kdv::{Error, LandenMap, PeriodicGrid, Sign, VelocityScaling, WaveFamily};

const SCHEMA: &str = "landen-kdv/1";

#[derive(Debug, Parser)]
#[command(name = "landen-kdv", version)]
#[command(about = "Generalized Landen transformations and superposed cnoidal KdV waves")]
struct Cli {
    /// JSON run configuration; command-line flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print γ, m~, shifts, cyclic constants a_p(r) and A(p, m)
    Landen {
        #[arg(short, value_parser = clap::value_parser!(u64).range(1..))]
        p: u64,
        #[arg(short, value_parser = open_unit_interval)]
        m: f64,
        /// CSV output (quantity,index,value)
        #[arg(long, conflicts_with = "json")]
        csv: bool,
    },
    /// Run verification suites and write a JSONL report
    Verify(VerifyArgs),
    /// Dump (x, u) samples of an exact solution as CSV
    Eval(EvalArgs),
    /// Evolve exact initial data with the pseudo-spectral solver and compare
    Evolve(EvolveArgs),
    /// Fit the residual-minimizing velocity of a superposed u± wave
    ProbeUpm {
        #[arg(short, value_parser = clap::value_parser!(u64).range(1..))]
        p: u64,
        #[arg(short, value_parser = open_unit_interval)]
        m: f64,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, value_enum, default_value_t = SignArg::Plus)]
        sign: SignArg,
        #[arg(long, default_value_t = 256)]
        points: usize,
    },
    /// Print the effective run configuration
    Config,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    suite: Suite,
    /// Write the JSONL report here instead of stdout.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Override every upper-bound tolerance.
    #[arg(long)]
    tolerance: Option<f64>,
    /// Restrict the orders p (identity and wave grids).
    #[arg(short, long = "p", value_delimiter = ',')]
    p: Vec<usize>,
    /// Restrict the modulus parameters m (identity and wave grids).
    #[arg(short, long = "m", value_delimiter = ',')]
    m: Vec<f64>,
    #[arg(long)]
    points: Option<usize>,
    /// Worker threads.
    #[arg(long, env = "LANDEN_KDV_JOBS", default_value_t = 1)]
    jobs: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum SignArg {
    Plus,
    Minus,
}

impl From<SignArg> for Sign {
    fn from(s: SignArg) -> Self {
        match s {
            SignArg::Plus => Sign::Plus,
            SignArg::Minus => Sign::Minus,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum ScalingArg {
    Standard,
    AsWritten,
}

impl From<ScalingArg> for VelocityScaling {
    fn from(s: ScalingArg) -> Self {
        match s {
            ScalingArg::Standard => VelocityScaling::Standard,
            ScalingArg::AsWritten => VelocityScaling::AsWritten,
        }
    }
}

#[derive(Debug, Args)]
struct WaveArgs {
    #[arg(long, value_enum)]
    family: Option<Family>,
    #[arg(short, long = "p")]
    p: Option<usize>,
    #[arg(short, long = "m")]
    m: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<f64>,
    #[arg(long, value_enum)]
    sign: Option<SignArg>,
    /// Level of the constant family.
    #[arg(long, allow_hyphen_values = true)]
    level: Option<f64>,
}

impl WaveArgs {
    fn apply(&self, wave: &mut WaveConfig) {
        if let Some(f) = self.family {
            wave.family = f;
        }
        if let Some(p) = self.p {
            wave.p = p;
        }
        if let Some(m) = self.m {
            wave.m = m;
        }
        if let Some(a) = self.alpha {
            wave.alpha = a;
        }
        if let Some(b) = self.beta {
            wave.beta = b;
        }
        if let Some(s) = self.sign {
            wave.sign = s.into();
        }
        if let Some(l) = self.level {
            wave.level = l;
        }
    }
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[command(flatten)]
    wave: WaveArgs,
    #[arg(long, allow_hyphen_values = true)]
    t: Option<f64>,
    #[arg(long)]
    points: Option<usize>,
    #[arg(long)]
    periods: Option<usize>,
    /// Time scaling for u±.
    #[arg(long, value_enum, default_value_t = ScalingArg::Standard)]
    scaling: ScalingArg,
    /// CSV destination; stdout when omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct EvolveArgs {
    #[command(flatten)]
    wave: WaveArgs,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    final_time: Option<f64>,
    #[arg(long)]
    points: Option<usize>,
    #[arg(long)]
    periods: Option<usize>,
    #[arg(long)]
    no_dealias: bool,
    #[arg(long)]
    snapshot_every: Option<usize>,
    /// Directory for per-snapshot CSV files and run.json.
    #[arg(long)]
    output_dir: Option<PathBuf>,
}

fn open_unit_interval(s: &str) -> Result<f64, String> {
    let m: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if m > 0.0 && m < 1.0 {
        Ok(m)
    } else {
        Err(format!("m must satisfy 0 < m < 1, got {s}"))
    }
}

/// Failure kinds mapped to exit codes: 1 for failed checks, instability and I/O, 2 for bad input.
enum Failure {
    Checks(String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Instability { .. } => Failure::Checks(format!("instability: {e}")),
            Error::Consistency(_) => Failure::Checks(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

fn io_error(path: &Path, e: std::io::Error) -> Failure {
    Failure::Checks(format!("{}: {e}", path.display()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks(msg)) => {
            eprintln!("landen-kdv: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("landen-kdv: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let config = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    match &cli.command {
        Command::Landen { p, m, csv } => cmd_landen(*p as usize, *m, cli.json, *csv),
        Command::Verify(args) => cmd_verify(config, args, cli.json),
        Command::Eval(args) => cmd_eval(config, args, cli.json),
        Command::Evolve(args) => cmd_evolve(config, args, cli.json),
        Command::ProbeUpm { p, m, alpha, sign, points } => {
            cmd_probe_upm(*p as usize, *m, *alpha, (*sign).into(), *points, cli.json)
        }
        Command::Config => {
            println!("{}", config.to_json());
            Ok(())
        }
    }
}

fn cmd_landen(p: usize, m: f64, json: bool, csv: bool) -> Result<(), Failure> {
    let map = LandenMap::new(p, m)?;
    let a = landen_kdv::a_constant(p, m)?;
    if json {
        let doc = json!({
            "schema": SCHEMA,
            "p": p,
            "m": m,
            "gamma": map.gamma(),
            "m_tilde": map.m_tilde(),
            "shifts": map.shifts(),
            "cyclic_constants": map.cyclic_constants(),
            "A": a,
        });
        println!("{doc}");
    } else if csv {
        let mut out = String::from("quantity,index,value\n");
        out += &format!("gamma,,{}\n", sig15(map.gamma()));
        out += &format!("m_tilde,,{}\n", sig15(map.m_tilde()));
        for (i, s) in map.shifts().iter().enumerate() {
            out += &format!("shift,{},{}\n", i + 1, sig15(*s));
        }
        for (r, c) in map.cyclic_constants().iter().enumerate() {
            out += &format!("a,{},{}\n", r + 1, sig15(*c));
        }
        out += &format!("A,,{}\n", sig15(a));
        print!("{out}");
    } else {
        println!("p        {p}");
        println!("m        {}", sig15(m));
        println!("gamma    {}", sig15(map.gamma()));
        println!("m_tilde  {}", sig15(map.m_tilde()));
        for (i, s) in map.shifts().iter().enumerate() {
            println!("shift[{}] {}", i + 1, sig15(*s));
        }
        for (r, c) in map.cyclic_constants().iter().enumerate() {
            println!("a_{p}({}) {}", r + 1, sig15(*c));
        }
        println!("A        {}", sig15(a));
    }
    Ok(())
}

fn cmd_verify(config: RunConfig, args: &VerifyArgs, json: bool) -> Result<(), Failure> {
    let mut cfg = config.verify;
    if let Some(tol) = args.tolerance {
        if !(tol.is_finite() && tol > 0.0) {
            return Err(Failure::Usage(format!("tolerance must be positive, got {tol}")));
        }
        cfg.tolerances = Tolerances::uniform(tol);
    }
    if !args.p.is_empty() {
        cfg.identity_p = args.p.clone();
        cfg.wave_p = args.p.clone();
    }
    if !args.m.is_empty() {
        cfg.identity_m = args.m.clone();
        cfg.wave_m = args.m.clone();
    }
    if let Some(n) = args.points {
        cfg.grid_points = n;
    }
    if args.jobs == 0 {
        return Err(Failure::Usage("--jobs must be at least 1".into()));
    }
    let records = suites::run_suite(args.suite, &cfg, args.jobs)?;
    let report = suites::to_jsonl(&records);
    match &args.report {
        Some(path) => fs::write(path, &report).map_err(|e| io_error(path, e))?,
        None if !json => print!("{report}"),
        None => {}
    }
    let failed: Vec<_> = records.iter().filter(|r| !r.pass).collect();
    if json {
        let summary = json!({
            "schema": SCHEMA,
            "suite": args.suite,
            "checks": records.len(),
            "failed": failed.len(),
            "pass": failed.is_empty(),
            "records": if args.report.is_none() { json!(records) } else { json!(null) },
        });
        println!("{summary}");
    } else {
        eprintln!("{} checks, {} failed", records.len(), failed.len());
    }
    if failed.is_empty() {
        Ok(())
    } else {
        let first = failed[0];
        Err(Failure::Checks(format!(
            "{} check(s) failed; first: {} metric={} tol={}",
            failed.len(),
            first.check,
            sig15(first.metric),
            sig15(first.tol)
        )))
    }
}

fn write_csv(path: Option<&Path>, xs: &[f64], us: &[f64]) -> Result<(), Failure> {
    let mut out = String::with_capacity(xs.len() * 40);
    out.push_str("x,u\n");
    for (x, u) in xs.iter().zip(us) {
        out.push_str(&sig15(*x));
        out.push(',');
        out.push_str(&sig15(*u));
        out.push('\n');
    }
    match path {
        Some(p) => fs::write(p, out).map_err(|e| io_error(p, e)),
        None => std::io::stdout()
            .write_all(out.as_bytes())
            .map_err(|e| Failure::Checks(format!("stdout: {e}"))),
    }
}

fn cmd_eval(config: RunConfig, args: &EvalArgs, json: bool) -> Result<(), Failure> {
    let mut cfg = config.eval;
    args.wave.apply(&mut cfg.wave);
    if let Some(t) = args.t {
        cfg.t = t;
    }
    if let Some(n) = args.points {
        cfg.points = n;
    }
    if let Some(k) = args.periods {
        cfg.periods = k;
    }
    if cfg.periods == 0 {
        return Err(Failure::Usage("periods must be at least 1".into()));
    }
    let wave = cfg.wave.build(args.scaling.into())?;
    let xs: Vec<f64> = if wave.spatial_period().is_none() && cfg.wave.family != Family::Constant {
        // aperiodic (m = 1): sample the window |αx| ≤ 10 around the crest
        let half = 10.0 / cfg.wave.alpha;
        (0..cfg.points).map(|j| -half + 2.0 * half * j as f64 / (cfg.points - 1).max(1) as f64).collect()
    } else {
        let period = cfg.wave.period(wave.as_ref())?;
        PeriodicGrid::new(period * cfg.periods as f64, cfg.points)?.nodes()
    };
    let us: Vec<f64> = xs.iter().map(|&x| wave.value(x, cfg.t)).collect();
    write_csv(args.output.as_deref(), &xs, &us)?;
    if json {
        let doc = json!({
            "schema": SCHEMA,
            "family": cfg.wave.family,
            "points": xs.len(),
            "t": cfg.t,
            "velocity": wave.velocity(),
            "period": wave.spatial_period(),
            "output": args.output,
        });
        eprintln!("{doc}");
    }
    Ok(())
}

fn max_deviation(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0_f64, |acc, (x, y)| acc.max((x - y).abs()))
}

fn write_snapshots(dir: &Path, trajectory: &Trajectory) -> Result<(), Failure> {
    fs::create_dir_all(dir).map_err(|e| io_error(dir, e))?;
    let xs = trajectory.grid.nodes();
    for (i, snap) in trajectory.snapshots.iter().enumerate() {
        let path = dir.join(format!("snapshot_{i:05}.csv"));
        write_csv(Some(&path), &xs, &snap.samples)?;
    }
    Ok(())
}

fn cmd_evolve(config: RunConfig, args: &EvolveArgs, json: bool) -> Result<(), Failure> {
    let mut cfg = config.evolve;
    args.wave.apply(&mut cfg.wave);
    if let Some(dt) = args.dt {
        cfg.dt = dt;
    }
    if let Some(t) = args.final_time {
        cfg.final_time = Some(t);
    }
    if let Some(n) = args.points {
        cfg.points = n;
    }
    if let Some(k) = args.periods {
        cfg.periods = k;
    }
    if args.no_dealias {
        cfg.dealias = false;
    }
    if let Some(k) = args.snapshot_every {
        cfg.snapshot_every = Some(k);
    }
    if cfg.periods == 0 {
        return Err(Failure::Usage("periods must be at least 1".into()));
    }
    if !(cfg.dt.is_finite() && cfg.dt > 0.0) {
        return Err(Failure::Usage(format!("dt must be positive, got {}", cfg.dt)));
    }

    let wave = cfg.wave.build(VelocityScaling::Standard)?;
    let wave_period = cfg.wave.period(wave.as_ref())?;
    let unit = if cfg.wave.family == Family::Up { wave_period * cfg.wave.p as f64 } else { wave_period };
    let grid = PeriodicGrid::new(unit * cfg.periods as f64, cfg.points)?;
    let velocity = wave.velocity();
    let final_time = match cfg.final_time {
        Some(t) => t,
        None if velocity.abs() > 0.0 => (wave_period / velocity.abs() / cfg.dt).ceil() * cfg.dt,
        None => 1000.0 * cfg.dt,
    };
    let evolver = EvolverConfig {
        grid,
        dt: cfg.dt,
        final_time,
        scheme: Default::default(),
        dealias: cfg.dealias,
        snapshot_every: cfg.snapshot_every,
    };
    let steps = evolver.steps()?;
    if !evolver.within_stability_heuristic() {
        eprintln!(
            "landen-kdv: warning: dt = {} exceeds the step heuristic C(L/N)^3 = {}",
            sig15(evolver.dt),
            sig15(evolver.stability_limit())
        );
    }
    let u0 = wave.sample(&grid, 0.0);
    let trajectory = evolve::evolve_trajectory(&u0, &evolver)?;
    let final_state = &trajectory.final_state().samples;
    let exact = wave.sample(&grid, final_time);
    let deviation = max_deviation(final_state, &exact);
    let conservation = evolve::conservation_report(&trajectory);
    let translation = evolve::rigid_translation(&grid, &u0, final_state, velocity, final_time)?;

    if let Some(dir) = &args.output_dir {
        write_snapshots(dir, &trajectory)?;
        let meta = json!({
            "schema": SCHEMA,
            "wave": cfg.wave,
            "velocity": velocity,
            "grid": { "period": grid.period(), "points": grid.len() },
            "dt": evolver.dt,
            "final_time": final_time,
            "steps": steps,
            "dealias": evolver.dealias,
            "snapshot_times": trajectory.snapshots.iter().map(|s| s.time).collect::<Vec<_>>(),
            "max_deviation": deviation,
            "conservation": conservation,
            "translation": translation,
        });
        let path = dir.join("run.json");
        let text = serde_json::to_string_pretty(&meta).expect("metadata serializes");
        fs::write(&path, text + "\n").map_err(|e| io_error(&path, e))?;
    }

    if json {
        println!(
            "{}",
            json!({
                "schema": SCHEMA,
                "family": cfg.wave.family,
                "final_time": final_time,
                "steps": steps,
                "max_deviation": deviation,
                "mass_drift": conservation.mass_drift,
                "momentum_drift": conservation.momentum_drift,
                "translation_offset_cells": translation.offset_cells,
            })
        );
    } else {
        println!("final_time      {}", sig15(final_time));
        println!("steps           {steps}");
        println!("max_deviation   {}", sig15(deviation));
        println!("mass_drift      {}", sig15(conservation.mass_drift));
        println!("momentum_drift  {}", sig15(conservation.momentum_drift));
        println!("lag_offset      {} cells", sig15(translation.offset_cells));
    }
    Ok(())
}

fn cmd_probe_upm(p: usize, m: f64, alpha: f64, sign: Sign, points: usize, json: bool) -> Result<(), Failure> {
    let params = PmWaveParams::new(alpha, m, sign)?;
    let wave = PlusMinusWave::superposed(params, p, 0.0)?;
    let period = wave.spatial_period().expect("0 < m < 1");
    let grid = PeriodicGrid::new(period, points)?;
    let report = verify::fit_velocity(&wave, &grid, 0.0)?;
    let single = params.velocity(VelocityScaling::Standard);
    if json {
        println!(
            "{}",
            json!({
                "schema": SCHEMA,
                "p": p,
                "m": m,
                "alpha": alpha,
                "sign": sign,
                "fitted_velocity": report.velocity,
                "normalized_residual": report.normalized,
                "single_wave_velocity": single,
            })
        );
    } else {
        println!("fitted_velocity      {}", sig15(report.velocity));
        println!("normalized_residual  {}", sig15(report.normalized));
        println!("single_wave_velocity {}", sig15(single));
    }
    Ok(())
}
