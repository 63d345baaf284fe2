//! `cmacr`: compute rate regions of the compound multiple-access channel
//! with a relay and export them as CSV/JSON artifacts.
//!
//! Four modes:
//! * `gaussian-region` — DF / CF / outer-bound rate frontiers at fixed
//!   powers, one CSV per (strategy, gamma^2) pair;
//! * `gaussian-sweep` — maximum symmetric rate of each strategy versus a
//!   common transmit power, one wide CSV;
//! * `dmc-search` — randomized input search for a discrete channel's
//!   achievable region, one cloud CSV;
//! * `verify` — runtime invariant suite, one JSON report (process exits
//!   with status 1 when a check fails).
//!
//! Configuration comes from an optional JSON file (`--config`); individual
//! flags override its fields, and every field has a built-in default, so
//! `cmacr --mode gaussian-region` alone reproduces the reference
//! experiment. Exit codes: 0 success, 1 invariant failure, 2 configuration
//! or I/O error. Decibel inputs are converted to linear scale here at the
//! boundary; the library works in linear units (sweep power lists stay in
//! dB because the sweep API itself is dB-denominated).

use clap::Parser;
use serde::Deserialize;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use cmacr::dmc::{DmcChannel, LinkCapacities, RegionKind, SearchOptions};
use cmacr::gaussian::{
    db_to_linear, strategy_cloud, symmetric_rate_sweep, GaussianChannel, Strategy,
};
use cmacr::region::write_frontier_csv;
use cmacr::region::write_cloud_csv;
use cmacr::verify::{run_suite, Fault, VerifyOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum Mode {
    /// Rate frontiers at fixed powers (one CSV per strategy and gamma^2).
    GaussianRegion,
    /// Symmetric rate versus power (one wide CSV).
    GaussianSweep,
    /// Randomized achievable-region search on a discrete channel.
    DmcSearch,
    /// Runtime invariant suite (JSON report; exit 1 on failure).
    Verify,
}

impl Mode {
    fn parse_config_value(s: &str) -> Result<Mode, CliError> {
        match s {
            "gaussian-region" => Ok(Mode::GaussianRegion),
            "gaussian-sweep" => Ok(Mode::GaussianSweep),
            "dmc-search" => Ok(Mode::DmcSearch),
            "verify" => Ok(Mode::Verify),
            other => Err(CliError::Config(format!(
                "unknown mode '{other}' (expected gaussian-region, gaussian-sweep, dmc-search or verify)"
            ))),
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "cmacr",
    version,
    about = "Rate regions of the compound multiple-access channel with a relay"
)]
struct Cli {
    /// JSON experiment configuration; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Experiment to run (defaults to the config's mode, else gaussian-region).
    #[arg(long, value_enum)]
    mode: Option<Mode>,
    /// Output directory for artifacts, created if missing (default: out).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed for randomized searches and the verifier (default: 0).
    #[arg(long)]
    seed: Option<u64>,
    /// Power-split grid step in (0, 0.5] (default: 0.05).
    #[arg(long)]
    grid_step: Option<f64>,
    /// Worker thread count (default: all cores). Results do not depend on it.
    #[arg(long)]
    threads: Option<usize>,
}

/// One number or a list of numbers, so configs may write `"gamma_sq": 5`
/// or `"gamma_sq": [1, 5]`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum NumOrList {
    One(f64),
    Many(Vec<f64>),
}

impl NumOrList {
    fn to_vec(&self) -> Vec<f64> {
        match self {
            NumOrList::One(x) => vec![*x],
            NumOrList::Many(v) => v.clone(),
        }
    }
}

/// The JSON experiment configuration. Every field is optional; unknown
/// fields are rejected so typos fail loudly.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ExperimentConfig {
    mode: Option<String>,
    out: Option<PathBuf>,
    seed: Option<u64>,
    /// Power-split grid step in (0, 0.5].
    grid_step: Option<f64>,
    /// Transmit powers in dB (sources and relay).
    p1_db: Option<f64>,
    p2_db: Option<f64>,
    p3_db: Option<f64>,
    /// Squared source-to-relay gain(s); a list runs one region per value.
    gamma_sq: Option<NumOrList>,
    /// Squared relay-to-receiver gain.
    eta_sq: Option<f64>,
    /// Strategies for gaussian-region: subset of ["df", "cf", "outer"].
    strategies: Option<Vec<String>>,
    /// Power sweep list in dB for gaussian-sweep.
    p_db_list: Option<Vec<f64>>,
    /// Sample budget for dmc-search.
    budget: Option<usize>,
    /// Region family for dmc-search: df | cf | outer | cognitive-mac |
    /// compound | partial | limited-link.
    region_kind: Option<String>,
    /// Cognition-link capacities for region_kind = limited-link.
    link_c1: Option<f64>,
    link_c2: Option<f64>,
    /// Discrete channel for dmc-search (same schema as DmcChannel JSON).
    channel: Option<serde_json::Value>,
    /// Randomized draws per verifier check.
    draws: Option<usize>,
    /// Verifier fault injection: "inflate-df-sum-rate" demonstrates that a
    /// broken evaluator is caught.
    fault: Option<String>,
}

#[derive(Debug)]
enum CliError {
    /// Bad configuration or I/O problem: exit status 2.
    Config(String),
    /// An invariant check failed: exit status 1.
    Invariant(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) | CliError::Invariant(m) => f.write_str(m),
        }
    }
}

impl From<cmacr::Error> for CliError {
    fn from(e: cmacr::Error) -> Self {
        CliError::Config(e.to_string())
    }
}

/// Fully resolved settings: flag > config field > built-in default.
#[derive(Debug)]
struct Settings {
    mode: Mode,
    out: PathBuf,
    seed: u64,
    grid_step: f64,
    p1_db: f64,
    p2_db: f64,
    p3_db: f64,
    gamma_sqs: Vec<f64>,
    eta_sq: f64,
    strategies: Vec<Strategy>,
    p_db_list: Vec<f64>,
    budget: usize,
    region_kind: RegionKind,
    channel: Option<DmcChannel>,
    draws: usize,
    fault: Option<Fault>,
}

fn resolve(cli: &Cli, cfg: ExperimentConfig) -> Result<Settings, CliError> {
    let mode = match (cli.mode, &cfg.mode) {
        (Some(m), _) => m,
        (None, Some(s)) => Mode::parse_config_value(s)?,
        (None, None) => Mode::GaussianRegion,
    };
    let grid_step = cli.grid_step.or(cfg.grid_step).unwrap_or(0.05);
    if !(grid_step > 0.0 && grid_step <= 0.5) {
        return Err(CliError::Config(format!("grid_step {grid_step} outside (0, 0.5]")));
    }
    let strategies = match &cfg.strategies {
        None => Strategy::ALL.to_vec(),
        Some(names) => {
            if names.is_empty() {
                return Err(CliError::Config("strategies list is empty".into()));
            }
            names
                .iter()
                .map(|n| Strategy::from_str(n).map_err(CliError::from))
                .collect::<Result<Vec<_>, _>>()?
        }
    };
    let p_db_list = match &cfg.p_db_list {
        None => (0..=30).map(f64::from).collect(),
        Some(list) if list.is_empty() => {
            return Err(CliError::Config("p_db_list is empty: nothing to sweep".into()));
        }
        Some(list) => list.clone(),
    };
    let links = LinkCapacities::new(cfg.link_c1.unwrap_or(0.5), cfg.link_c2.unwrap_or(0.5))?;
    let region_kind = match cfg.region_kind.as_deref().unwrap_or("df") {
        "df" => RegionKind::DecodeForward,
        "cf" => RegionKind::CompressForward,
        "outer" => RegionKind::OuterBound,
        "cognitive-mac" => RegionKind::CognitiveMac,
        "compound" => RegionKind::CompoundCognitive,
        "partial" => RegionKind::PartialCognitive,
        "limited-link" => RegionKind::LimitedLink(links),
        other => {
            return Err(CliError::Config(format!(
                "unknown region_kind '{other}' (expected df, cf, outer, cognitive-mac, compound, partial or limited-link)"
            )));
        }
    };
    let channel = match &cfg.channel {
        None => None,
        Some(v) => Some(DmcChannel::from_json(&v.to_string())?),
    };
    let fault = match cfg.fault.as_deref() {
        None => None,
        Some("inflate-df-sum-rate") => Some(Fault::InflateDfSumRate),
        Some(other) => {
            return Err(CliError::Config(format!(
                "unknown fault '{other}' (expected inflate-df-sum-rate)"
            )));
        }
    };
    Ok(Settings {
        mode,
        out: cli.out.clone().or(cfg.out).unwrap_or_else(|| PathBuf::from("out")),
        seed: cli.seed.or(cfg.seed).unwrap_or(0),
        grid_step,
        p1_db: cfg.p1_db.unwrap_or(5.0),
        p2_db: cfg.p2_db.unwrap_or(5.0),
        p3_db: cfg.p3_db.unwrap_or(5.0),
        gamma_sqs: cfg.gamma_sq.as_ref().map(NumOrList::to_vec).unwrap_or_else(|| vec![1.0, 5.0]),
        eta_sq: cfg.eta_sq.unwrap_or(10.0),
        strategies,
        p_db_list,
        budget: cfg.budget.unwrap_or(256),
        region_kind,
        channel,
        draws: cfg.draws.unwrap_or(8),
        fault,
    })
}

/// Gaussian channel at the settings' powers with one squared relay gain.
fn gaussian_channel(s: &Settings, gamma_sq: f64) -> Result<GaussianChannel, CliError> {
    Ok(GaussianChannel::from_squared_gains(
        db_to_linear(s.p1_db),
        db_to_linear(s.p2_db),
        db_to_linear(s.p3_db),
        gamma_sq,
        s.eta_sq,
    )?)
}

/// "1" for 1.0, "2.5" for 2.5: keeps artifact names free of stray ".0".
fn gamma_label(g: f64) -> String {
    if g.fract() == 0.0 && g.abs() < 1e9 {
        format!("{}", g as i64)
    } else {
        format!("{g}")
    }
}

fn create_out_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir)
        .map_err(|e| CliError::Config(format!("cannot create output directory {}: {e}", dir.display())))
}

fn write_artifact(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    fs::write(path, contents)
        .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display())))
}

fn run_gaussian_region(s: &Settings) -> Result<(), CliError> {
    create_out_dir(&s.out)?;
    if s.gamma_sqs.is_empty() {
        return Err(CliError::Config("gamma_sq list is empty".into()));
    }
    for &gamma_sq in &s.gamma_sqs {
        let ch = gaussian_channel(s, gamma_sq)?;
        for &strategy in &s.strategies {
            let cloud = strategy_cloud(&ch, strategy, s.grid_step)?;
            let frontier = cloud.frontier_slice(0.0)?;
            let mut buf = Vec::new();
            write_frontier_csv(&frontier, &mut buf)?;
            let path = s.out.join(format!("fig2_{strategy}_gamma{}.csv", gamma_label(gamma_sq)));
            write_artifact(&path, &buf)?;
            println!("wrote {} ({} directions)", path.display(), frontier.len());
        }
    }
    Ok(())
}

fn run_gaussian_sweep(s: &Settings) -> Result<(), CliError> {
    create_out_dir(&s.out)?;
    let gamma_sq = s.gamma_sqs.first().copied().unwrap_or(1.0);
    let template = gaussian_channel(s, gamma_sq)?;
    let mut columns = Vec::new();
    for strategy in Strategy::ALL {
        columns.push(symmetric_rate_sweep(&template, &s.p_db_list, strategy, s.grid_step)?);
    }
    let mut csv = String::from("p_db,df_rate,cf_rate,outer_rate\n");
    for (i, &p_db) in s.p_db_list.iter().enumerate() {
        let _ = writeln!(
            csv,
            "{p_db},{},{},{}",
            columns[0][i].1, columns[1][i].1, columns[2][i].1
        );
    }
    let path = s.out.join("fig3_sweep.csv");
    write_artifact(&path, csv.as_bytes())?;
    println!("wrote {} ({} power levels)", path.display(), s.p_db_list.len());
    Ok(())
}

/// Built-in demonstration channel for dmc-search when the config supplies
/// none: each receiver hears its own source XOR the relay through a binary
/// symmetric channel, and the relay hears the XOR of the two sources.
fn demo_channel() -> DmcChannel {
    let bsc = |b_in: usize, b_out: usize, d: f64| if b_in == b_out { 1.0 - d } else { d };
    DmcChannel::from_fn([2, 2, 2], [2, 2, 2], |x, y| {
        bsc(x[0] ^ x[2], y[0], 0.1) * bsc(x[1] ^ x[2], y[1], 0.2) * bsc(x[0] ^ x[1], y[2], 0.05)
    })
    .expect("demo channel is a valid law")
}

fn run_dmc_search(s: &Settings) -> Result<(), CliError> {
    create_out_dir(&s.out)?;
    let ch = s.channel.clone().unwrap_or_else(demo_channel);
    let cloud = cmacr::dmc::search_region_with(
        &ch,
        s.region_kind,
        s.budget,
        s.seed,
        &SearchOptions::default(),
    )?;
    let mut buf = Vec::new();
    write_cloud_csv(&cloud, &mut buf)?;
    let path = s.out.join(format!("dmc_{}_cloud.csv", s.region_kind));
    write_artifact(&path, &buf)?;
    println!(
        "wrote {} ({} points, symmetric rate {})",
        path.display(),
        cloud.len(),
        cloud.max_symmetric_rate()
    );
    Ok(())
}

fn run_verify(s: &Settings) -> Result<(), CliError> {
    create_out_dir(&s.out)?;
    let opts = VerifyOptions {
        seed: s.seed,
        draws: s.draws,
        grid_step: s.grid_step.min(0.5),
        fault: s.fault,
    };
    let report = run_suite(&opts)?;
    let path = s.out.join("verify_report.json");
    let mut body = report.to_json_pretty();
    body.push('\n');
    write_artifact(&path, body.as_bytes())?;
    for c in &report.checks {
        println!("check {}: {}", c.name, if c.passed { "pass" } else { "FAIL" });
    }
    println!("wrote {}", path.display());
    if !report.passed {
        let failing: Vec<&str> = report
            .checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name.as_str())
            .collect();
        return Err(CliError::Invariant(format!(
            "{} invariant check(s) failed: {}",
            failing.len(),
            failing.join(", ")
        )));
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<(), CliError> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Config("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(format!("cannot size the thread pool: {e}")))?;
    }
    let cfg = match &cli.config {
        None => ExperimentConfig::default(),
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
            serde_json::from_str(&text)
                .map_err(|e| CliError::Config(format!("invalid config {}: {e}", path.display())))?
        }
    };
    let settings = resolve(cli, cfg)?;
    match settings.mode {
        Mode::GaussianRegion => run_gaussian_region(&settings),
        Mode::GaussianSweep => run_gaussian_sweep(&settings),
        Mode::DmcSearch => run_dmc_search(&settings),
        Mode::Verify => run_verify(&settings),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                CliError::Invariant(_) => ExitCode::from(1),
                CliError::Config(_) => ExitCode::from(2),
            }
        }
    }
}
