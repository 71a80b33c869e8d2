//! Deterministic file writers: CSV samples, OBJ meshes, JSON reports.
//!
//! Floats print through Rust's shortest round-trip formatting, so re-reading
//! a file reproduces the exact IEEE doubles that were written.

use std::fmt::Write as _;
use std::path::Path;

use anyhow::{Context, Result};

use umbilic::geometry::{GridSpec, ProductSpaceForm};
use umbilic::maps::MapDescription;
use umbilic::metric::MVector;

pub fn fmt_f64(x: f64) -> String {
    // collapse negative zero; the sign of zero never carries information here
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x}")
}

/// Grid sample rows: `s, t, x1..xN`, s-major, shortest round-trip decimals.
pub fn write_grid_csv(path: &Path, map: &MapDescription<f64>, grid: &GridSpec<f64>) -> Result<()> {
    let mut text = String::new();
    text.push_str("s,t");
    for i in 1..=map.dim() {
        write!(text, ",x{i}").unwrap();
    }
    text.push('\n');
    for is in 0..grid.ns {
        for it in 0..grid.nt {
            let s = grid.s_at(is);
            let t = grid.t_at(it);
            let p = map.eval_point(s, t);
            write!(text, "{}", fmt_f64(s)).unwrap();
            write!(text, ",{}", fmt_f64(t)).unwrap();
            for &x in p.coords() {
                write!(text, ",{}", fmt_f64(x)).unwrap();
            }
            text.push('\n');
        }
    }
    std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

/// Poincaré-ball projection of one curved factor's block: spatial part over
/// `1 + timelike · |k|^{1/2}`.
fn ball_point(space: &ProductSpaceForm<f64>, p: &MVector<f64>, factor: usize) -> Vec<f64> {
    let range = space.factor_range(factor);
    let k = if factor == 1 { space.k1() } else { space.k2() };
    let block: Vec<f64> = p.coords()[range].to_vec();
    let denom = 1.0 + block[0] * k.abs().sqrt();
    block[1..].iter().map(|&x| x / denom).collect()
}

/// Quad mesh of the ball projection of every hyperbolic factor; one `o`
/// group per factor, `ns*nt` vertices each.
pub fn write_ball_obj(
    path: &Path,
    space: &ProductSpaceForm<f64>,
    map: &MapDescription<f64>,
    grid: &GridSpec<f64>,
) -> Result<()> {
    let mut factors = Vec::new();
    for factor in [1, 2] {
        let k = if factor == 1 { space.k1() } else { space.k2() };
        if k < 0.0 {
            factors.push(factor);
        }
    }
    let mut text = String::new();
    let mut offset = 0usize;
    for factor in factors {
        writeln!(text, "o factor{factor}").unwrap();
        for is in 0..grid.ns {
            for it in 0..grid.nt {
                let p = map.eval_point(grid.s_at(is), grid.t_at(it));
                let b = ball_point(space, &p, factor);
                anyhow::ensure!(
                    b.len() == 3,
                    "OBJ export needs three spatial coordinates per factor, got {}",
                    b.len()
                );
                writeln!(
                    text,
                    "v {} {} {}",
                    fmt_f64(b[0]),
                    fmt_f64(b[1]),
                    fmt_f64(b[2])
                )
                .unwrap();
            }
        }
        for is in 0..grid.ns - 1 {
            for it in 0..grid.nt - 1 {
                let v = |a: usize, b: usize| offset + a * grid.nt + b + 1;
                writeln!(
                    text,
                    "f {} {} {} {}",
                    v(is, it),
                    v(is + 1, it),
                    v(is + 1, it + 1),
                    v(is, it + 1)
                )
                .unwrap();
            }
        }
        offset += grid.ns * grid.nt;
    }
    std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}
