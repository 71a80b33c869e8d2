//! Run configuration: a JSON file plus command-line overrides; flags win.

use std::collections::BTreeMap;
use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use serde::Deserialize;

use umbilic::families::Family;
use umbilic::geometry::GridSpec;
use umbilic::verify::{apply_overrides, default_checks, CheckSpec};

/// Export coordinates for `build`: exact ambient data, or the bounded
/// Poincaré-ball projection of each hyperbolic factor (which also emits an
/// OBJ mesh).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Projection {
    Ambient,
    Ball,
}

/// The JSON configuration file. Every field is optional; flags override.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub family: Option<String>,
    /// Alias for `k1`, convenient for the single-curvature family.
    pub k: Option<f64>,
    pub k1: Option<f64>,
    pub k2: Option<f64>,
    pub lambda1: Option<f64>,
    pub lambda2: Option<f64>,
    /// `[s0, s1, t0, t1]`.
    pub rect: Option<[f64; 4]>,
    /// `[ns, nt]`.
    pub grid: Option<[usize; 2]>,
    pub curve_samples: Option<usize>,
    pub out: Option<PathBuf>,
    /// Per-check tolerance overrides by name.
    pub tolerances: Option<BTreeMap<String, f64>>,
    pub disabled_checks: Option<Vec<String>>,
    /// `"ambient"` or `"ball"`.
    pub projection: Option<String>,
}

/// Command-line overrides shared by all subcommands.
#[derive(Clone, Debug, Default, clap::Args)]
pub struct CommonArgs {
    /// JSON configuration file; flags below override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Family selector: example1 | example2.
    #[arg(long)]
    pub family: Option<String>,
    /// First factor curvature (negative); `--k1` also serves example1's k.
    #[arg(long, allow_hyphen_values = true)]
    pub k1: Option<f64>,
    /// Second factor curvature (negative for example2, omitted for example1).
    #[arg(long, allow_hyphen_values = true)]
    pub k2: Option<f64>,
    #[arg(long)]
    pub lambda1: Option<f64>,
    #[arg(long)]
    pub lambda2: Option<f64>,
    /// Grid resolution as NSxNT, e.g. 16x16.
    #[arg(long)]
    pub grid: Option<String>,
    /// Parameter rectangle as s0,s1,t0,t1.
    #[arg(long, allow_hyphen_values = true)]
    pub rect: Option<String>,
    /// Number of per-curve samples for the Frenet checks.
    #[arg(long)]
    pub curve_samples: Option<usize>,
    /// Output path (CSV for build/curvatures, JSON for verify).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Tolerance override, repeatable: --tol <check>=<value>.
    #[arg(long = "tol", value_name = "CHECK=VALUE")]
    pub tol: Vec<String>,
    /// Export projection: ambient | ball.
    #[arg(long)]
    pub projection: Option<String>,
}

/// Fully resolved run configuration.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub family: Family<f64>,
    pub grid: GridSpec<f64>,
    pub curve_samples: usize,
    pub out: Option<PathBuf>,
    pub checks: Vec<CheckSpec>,
    pub projection: Projection,
}

pub fn load_file(path: &PathBuf) -> Result<FileConfig> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read config file {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("config parse error in {}", path.display()))
}

fn parse_grid(s: &str) -> Result<[usize; 2]> {
    let lower = s.to_ascii_lowercase();
    let (a, b) = lower
        .split_once('x')
        .ok_or_else(|| anyhow!("config error: grid must look like 16x16, got {s}"))?;
    Ok([
        a.trim().parse().context("config error: grid ns")?,
        b.trim().parse().context("config error: grid nt")?,
    ])
}

fn parse_rect(s: &str) -> Result<[f64; 4]> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        bail!("config error: rect needs four comma-separated numbers, got {s}");
    }
    let mut rect = [0.0; 4];
    for (slot, part) in rect.iter_mut().zip(&parts) {
        *slot = part
            .parse()
            .with_context(|| format!("config error: rect entry {part}"))?;
    }
    Ok(rect)
}

fn parse_tol(s: &str) -> Result<(String, f64)> {
    let (name, value) = s
        .split_once('=')
        .ok_or_else(|| anyhow!("config error: tolerance override must be check=value, got {s}"))?;
    let value: f64 = value
        .trim()
        .parse()
        .with_context(|| format!("config error: tolerance value in {s}"))?;
    Ok((name.trim().to_string(), value))
}

/// Merges the optional config file with the flags and validates everything,
/// naming the offending field in every error.
pub fn resolve(args: &CommonArgs) -> Result<RunConfig> {
    let file = match &args.config {
        Some(path) => load_file(path)?,
        None => FileConfig::default(),
    };

    let family_name = args
        .family
        .clone()
        .or(file.family.clone())
        .ok_or_else(|| anyhow!("config error: family is required (example1 or example2)"))?;
    let k1 = args.k1.or(file.k1).or(file.k);
    let k2 = args.k2.or(file.k2);
    let lambda1 = args
        .lambda1
        .or(file.lambda1)
        .ok_or_else(|| anyhow!("config error: lambda1 is required"))?;
    let lambda2 = args
        .lambda2
        .or(file.lambda2)
        .ok_or_else(|| anyhow!("config error: lambda2 is required"))?;

    let family = match family_name.as_str() {
        "example1" => {
            let k = k1.ok_or_else(|| anyhow!("config error: k1 (or k) is required"))?;
            Family::example1(k, lambda1, lambda2).map_err(|e| anyhow!("config error: {e}"))?
        }
        "example2" => {
            let k1 = k1.ok_or_else(|| anyhow!("config error: k1 is required"))?;
            let k2 = k2.ok_or_else(|| anyhow!("config error: k2 is required"))?;
            Family::example2(k1, k2, lambda1, lambda2).map_err(|e| anyhow!("config error: {e}"))?
        }
        other => bail!("config error: family must be example1 or example2, got {other}"),
    };

    let rect = match &args.rect {
        Some(s) => parse_rect(s)?,
        None => file.rect.unwrap_or([-1.0, 1.0, -1.0, 1.0]),
    };
    let [ns, nt] = match &args.grid {
        Some(s) => parse_grid(s)?,
        None => file.grid.unwrap_or([16, 16]),
    };
    let grid = GridSpec::new(rect, ns, nt).map_err(|e| anyhow!("config error: {e}"))?;
    let curve_samples = args.curve_samples.or(file.curve_samples).unwrap_or(20);
    if curve_samples < 2 {
        bail!("config error: curve_samples must be at least 2, got {curve_samples}");
    }

    let mut checks = default_checks();
    let mut tolerances = file.tolerances.unwrap_or_default();
    for spec in &args.tol {
        let (name, value) = parse_tol(spec)?;
        tolerances.insert(name, value);
    }
    let disabled = file.disabled_checks.unwrap_or_default();
    apply_overrides(&mut checks, &tolerances, &disabled)
        .map_err(|e| anyhow!("config error: {e}"))?;

    let projection = match args
        .projection
        .clone()
        .or(file.projection.clone())
        .as_deref()
    {
        None | Some("ambient") => Projection::Ambient,
        Some("ball") => Projection::Ball,
        Some(other) => bail!("config error: projection must be ambient or ball, got {other}"),
    };

    Ok(RunConfig {
        family,
        grid,
        curve_samples,
        out: args.out.clone().or(file.out),
        checks,
        projection,
    })
}
