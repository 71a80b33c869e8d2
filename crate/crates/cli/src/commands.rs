//! The three subcommands: sample a family, verify it, tabulate curvatures.

use std::fmt::Write as _;
use std::path::PathBuf;

use anyhow::{anyhow, Context, Result};

use umbilic::families::CurveRegime;
use umbilic::frenet::{frenet_generic, frenet_null, split_product_curves};
use umbilic::metric::{CausalType, DEFAULT_CAUSAL_TOL};
use umbilic::verify::{run_suite, VerificationReport};

use crate::config::{Projection, RunConfig};
use crate::output::{fmt_f64, write_ball_obj, write_grid_csv};

/// Writes the grid CSV (ambient, exact) and, in ball mode, the OBJ mesh of
/// the Poincaré-ball projection of each hyperbolic factor.
pub fn cmd_build(cfg: &RunConfig) -> Result<()> {
    let map = cfg.family.map();
    let out = cfg
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from("surface.csv"));
    write_grid_csv(&out, &map, &cfg.grid)?;
    println!(
        "wrote {} ({} rows)",
        out.display(),
        cfg.grid.ns * cfg.grid.nt
    );
    if cfg.projection == Projection::Ball {
        let obj = out.with_extension("obj");
        write_ball_obj(&obj, &cfg.family.space(), &map, &cfg.grid)?;
        println!("wrote {}", obj.display());
    }
    Ok(())
}

/// Runs the verification suite, writes the JSON report, prints one line per
/// check and names the failing ones on stderr. Returns the overall verdict.
pub fn cmd_verify(cfg: &RunConfig) -> Result<bool> {
    let report = run_suite(&cfg.family, &cfg.grid, cfg.curve_samples, &cfg.checks, None)
        .map_err(|e| anyhow!("{e}"))?;
    let out = cfg
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from("report.json"));
    write_report(&out, &report)?;
    for check in &report.checks {
        println!(
            "check {:<22} {}  (max {:.3e} vs tol {:.0e})",
            check.name,
            if check.pass { "PASS" } else { "FAIL" },
            check.max_residual,
            check.tolerance
        );
    }
    for warning in &report.warnings {
        eprintln!("warning: {warning}");
    }
    for check in report.failing() {
        eprintln!(
            "failed: {} (residual {:e} > tol {:e})",
            check.name, check.max_residual, check.tolerance
        );
    }
    println!(
        "verdict: {} ({} checks, {} grid points)",
        if report.pass { "PASS" } else { "FAIL" },
        report.stats.checks_run,
        report.stats.grid_points
    );
    Ok(report.pass)
}

pub fn write_report(path: &PathBuf, report: &VerificationReport) -> Result<()> {
    let mut json = serde_json::to_string_pretty(report)?;
    json.push('\n');
    std::fs::write(path, json).with_context(|| format!("cannot write {}", path.display()))?;
    println!("wrote {}", path.display());
    Ok(())
}

/// Per factor curve: regime, closed-form squared curvatures, numeric means
/// over the samples, and their absolute differences.
pub fn cmd_curvatures(cfg: &RunConfig) -> Result<()> {
    let family = &cfg.family;
    let split = split_product_curves(&family.map()).map_err(|e| anyhow!("{e}"))?;
    let mut text = String::from(
        "curve,regime,curvature_vector_sq_closed,\
         k1_sq_closed,k1_sq_numeric,k1_sq_abs_diff,\
         k2_sq_closed,k2_sq_numeric,k2_sq_abs_diff,\
         k3_sq_closed,k3_sq_numeric,k3_sq_abs_diff\n",
    );
    for (idx, curve) in [&split.curve1, &split.curve2].into_iter().enumerate() {
        let which = idx + 1;
        let prediction = family.curve_prediction(which);
        let (lo, hi) = if which == 1 {
            (cfg.grid.rect[0], cfg.grid.rect[1])
        } else {
            (cfg.grid.rect[2], cfg.grid.rect[3])
        };
        let n = cfg.curve_samples;
        let mut sums = vec![0.0f64; prediction.curvature_squares.len()];
        for i in 0..n {
            let s = lo + (hi - lo) * i as f64 / (n - 1) as f64;
            let jets = curve.eval_jet1(s);
            let numeric_null = jets
                .derivative_vector(2)
                .causal_type(DEFAULT_CAUSAL_TOL)
                .map_err(|e| anyhow!("{e}"))?
                == CausalType::Lightlike;
            let exact_null = prediction.regime == CurveRegime::LightlikeCurvature;
            anyhow::ensure!(
                numeric_null == exact_null,
                "curve {which}: exact and numeric regime classification disagree at s = {s}"
            );
            let squares = if exact_null {
                frenet_null(&jets, DEFAULT_CAUSAL_TOL)
                    .map_err(|e| anyhow!("{e}"))?
                    .curvature_squares()
            } else {
                frenet_generic(&jets, DEFAULT_CAUSAL_TOL)
                    .map_err(|e| anyhow!("{e}"))?
                    .curvature_squares()
            };
            anyhow::ensure!(
                squares.len() == sums.len(),
                "curve {which}: numeric frame has {} curvatures, closed form has {}",
                squares.len(),
                sums.len()
            );
            for (acc, sq) in sums.iter_mut().zip(&squares) {
                *acc += sq;
            }
        }
        let means: Vec<f64> = sums.iter().map(|s| s / n as f64).collect();

        let regime = match prediction.regime {
            CurveRegime::Generic => "generic",
            CurveRegime::LightlikeCurvature => "lightlike",
        };
        write!(
            text,
            "gamma{which},{regime},{}",
            fmt_f64(prediction.curvature_vector_sq)
        )
        .unwrap();
        for slot in 0..3 {
            match prediction.curvature_squares.get(slot).zip(means.get(slot)) {
                Some((&closed, &numeric)) => {
                    write!(
                        text,
                        ",{},{},{}",
                        fmt_f64(closed),
                        fmt_f64(numeric),
                        fmt_f64((closed - numeric).abs())
                    )
                    .unwrap();
                }
                None => text.push_str(",,,"),
            }
        }
        text.push('\n');
    }
    let out = cfg
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from("curvatures.csv"));
    std::fs::write(&out, text).with_context(|| format!("cannot write {}", out.display()))?;
    println!("wrote {}", out.display());
    Ok(())
}
