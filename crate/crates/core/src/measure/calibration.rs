//! Calibration certificates: a bounded field σ with `div σ = μ` and
//! `φ°(x, σ) ≤ C` proves the IC with constant `C` for `(μ₋, μ₊)`.

use super::density::CellGrid;
use super::{Density, Density2D, SignedMeasure};
use crate::bv1d::BVFunction1D;
use crate::integrand::Anisotropy;
use crate::{Error, Result};

/// A discrete vector field.
#[derive(Debug, Clone, PartialEq)]
pub enum CalibrationField {
    /// Piecewise-affine σ; its jumps carry the atoms of `div σ`.
    OneD { field: BVFunction1D },
    /// Staggered (MAC) field: `sx` on the `(n0+1)·n1` vertical faces, indexed
    /// `i·n1 + j`; `sy` on the `n0·(n1+1)` horizontal faces, indexed
    /// `i·(n1+1) + j`.
    TwoD { grid: CellGrid, sx: Vec<f64>, sy: Vec<f64> },
}

/// Checks `div σ = μ` cell by cell and returns the certified constant
/// `max φ°(x, σ(x))`. A divergence mismatch above `tol` is an error.
pub fn verify_calibration(sigma: &CalibrationField, mu: &SignedMeasure, phi: &Anisotropy, tol: f64) -> Result<f64> {
    if phi.dim() != mu.dim() {
        return Err(Error::Config(format!(
            "anisotropy dimension {} does not match measure dimension {}",
            phi.dim(),
            mu.dim()
        )));
    }
    match sigma {
        CalibrationField::OneD { field } => verify_1d(field, mu, phi, tol),
        CalibrationField::TwoD { grid, sx, sy } => verify_2d(grid, sx, sy, mu, phi, tol),
    }
}

fn verify_1d(s: &BVFunction1D, mu: &SignedMeasure, phi: &Anisotropy, tol: f64) -> Result<f64> {
    let (a, b) = s.domain();
    if !mu.domain().same_as(&super::Domain::interval(a, b)) {
        return Err(Error::InvalidMeasure(
            "calibration field and measure live on different intervals".into(),
        ));
    }
    let mut pts: Vec<f64> = s.nodes().to_vec();
    pts.extend(mu.atoms().iter().map(|at| at.at[0]));
    if let Some(h) = mu.density_1d() {
        pts.extend(h.breaks().iter().cloned().filter(|x| *x > a && *x < b));
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup_by(|x, y| (*x - *y).abs() < 1e-13);
    let h = mu.density_1d();
    let mut worst = (0.0, String::new());
    let mut note = |gap: f64, what: String| {
        if gap > worst.0 {
            worst = (gap, what);
        }
    };
    // Atoms against the jumps of σ, at interior points.
    for &x in &pts[1..pts.len() - 1] {
        let jump = s.right_limit(x) - s.left_limit(x);
        let m = mu.atom_mass_at(&[x]);
        note((jump - m).abs(), format!("point {x}: jump of σ {jump} vs atom {m}"));
    }
    // Absolutely continuous part against the slopes, per cell.
    for w in pts.windows(2) {
        let (c, d) = (w[0], w[1]);
        let flux = s.left_limit(d) - s.right_limit(c);
        let m = h.map(|h| h.integral(c, d)).unwrap_or(0.0);
        note((flux - m).abs(), format!("cell ({c}, {d}): flux {flux} vs mass {m}"));
    }
    if worst.0 > tol {
        return Err(Error::DivergenceMismatch(worst.1));
    }
    let mut c = 0.0f64;
    let samples = if phi.is_x_dependent() { 8 } else { 0 };
    for w in pts.windows(2) {
        let (l, r) = (w[0], w[1]);
        c = c.max(phi.polar(&[l], &[s.right_limit(l)])?);
        c = c.max(phi.polar(&[r], &[s.left_limit(r)])?);
        for i in 1..=samples {
            let x = l + (r - l) * i as f64 / (samples + 1) as f64;
            c = c.max(phi.polar(&[x], &[s.value(x)])?);
        }
    }
    Ok(c)
}

fn verify_2d(grid: &CellGrid, sx: &[f64], sy: &[f64], mu: &SignedMeasure, phi: &Anisotropy, tol: f64) -> Result<f64> {
    let [n0, n1] = grid.n;
    if sx.len() != (n0 + 1) * n1 || sy.len() != n0 * (n1 + 1) {
        return Err(Error::Config(format!(
            "MAC field on a {n0}×{n1} grid needs {} and {} face values",
            (n0 + 1) * n1,
            n0 * (n1 + 1)
        )));
    }
    let dom = mu.domain();
    let same = (0..2).all(|k| (dom.lo[k] - grid.lo[k]).abs() < 1e-12 && (dom.hi[k] - grid.hi[k]).abs() < 1e-12);
    if !same {
        return Err(Error::InvalidMeasure(
            "calibration grid must cover the measure's domain".into(),
        ));
    }
    let h = grid.h();
    let mut mass = vec![0.0; grid.len()];
    match mu.density() {
        Some(Density::Two(Density2D::Cells { grid: g, mass: m })) if g == grid => mass.copy_from_slice(m),
        Some(Density::Two(d)) => {
            for i in 0..n0 {
                for j in 0..n1 {
                    let (lo, hi) = grid.cell(i, j);
                    mass[grid.index(i, j)] = d.mass_in_rect(lo, hi);
                }
            }
        }
        _ => {}
    }
    for at in mu.atoms() {
        if let Some((i, j)) = grid.locate([at.at[0], at.at[1]]) {
            mass[grid.index(i, j)] += at.mass;
        }
    }
    for c in mu.curves() {
        for (p, w) in c.quadrature(h[0].min(h[1])) {
            if let Some((i, j)) = grid.locate(p) {
                mass[grid.index(i, j)] += w;
            }
        }
    }
    let fx = |i: usize, j: usize| sx[i * n1 + j];
    let fy = |i: usize, j: usize| sy[i * (n1 + 1) + j];
    let mut worst = (0.0, String::new());
    let mut c = 0.0f64;
    for i in 0..n0 {
        for j in 0..n1 {
            let flux = (fx(i + 1, j) - fx(i, j)) * h[1] + (fy(i, j + 1) - fy(i, j)) * h[0];
            let gap = (flux - mass[grid.index(i, j)]).abs();
            if gap > worst.0 {
                worst = (
                    gap,
                    format!("cell ({i}, {j}): flux {flux} vs mass {}", mass[grid.index(i, j)]),
                );
            }
        }
    }
    if worst.0 > tol {
        return Err(Error::DivergenceMismatch(worst.1));
    }
    for i in 0..n0 {
        for j in 0..n1 {
            let s = [0.5 * (fx(i, j) + fx(i + 1, j)), 0.5 * (fy(i, j) + fy(i, j + 1))];
            if s != [0.0, 0.0] {
                c = c.max(phi.polar(&grid.center(i, j), &s)?);
            }
        }
    }
    Ok(c)
}
