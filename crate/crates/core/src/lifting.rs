//! The extra-variable construction `w_◊(x0, x) = x0 + w(x)` on
//! `(0, 1) × Ω`, evaluated on its own rectangular grid.
//!
//! [`evaluate_phi_hat`] never calls the 1D functional code: it sums the
//! lifted one-homogeneous integrand over cells, vertical jump edges and the
//! four sides of the cylinder. [`check_master_identity`] then compares it to
//! the 1D functional, which makes the pair a cross-check of both.

use serde::Serialize;

use crate::bv1d::{evaluate_mf, weighted_distance, BVFunction1D, BoundaryData};
use crate::integrand::{lifted_integrand, Integrand, LiftedIntegrand};
use crate::measure::{Density, Density2D, JordanPair, SignedMeasure};
use crate::quad::{gauss_legendre, pairwise_sum};
use crate::{Error, Result};

pub const DEFAULT_N0: usize = 16;
pub const DEFAULT_CELLS_PER_PIECE: usize = 4;

/// `w_◊` sampled on `n0` rows in `x0` and the cells between `breaks` in `x`.
#[derive(Debug, Clone)]
pub struct CylinderFunction {
    base: BVFunction1D,
    n0: usize,
    breaks: Vec<f64>,
}

pub fn lift(w: &BVFunction1D) -> CylinderFunction {
    lift_with(w, DEFAULT_N0, DEFAULT_CELLS_PER_PIECE, &[])
}

/// `extra` are additional `x` breaks (density breaks, sign changes).
pub fn lift_with(w: &BVFunction1D, n0: usize, per_piece: usize, extra: &[f64]) -> CylinderFunction {
    let (a, b) = w.domain();
    let mut breaks = Vec::new();
    for (c, d, _) in w.pieces_iter() {
        for k in 0..per_piece.max(1) {
            breaks.push(c + (d - c) * k as f64 / per_piece.max(1) as f64);
        }
    }
    breaks.push(b);
    breaks.extend(extra.iter().cloned().filter(|x| *x > a && *x < b));
    breaks.sort_by(f64::total_cmp);
    breaks.dedup_by(|x, y| (*x - *y).abs() < 1e-14);
    CylinderFunction {
        base: w.clone(),
        n0: n0.max(1),
        breaks,
    }
}

impl CylinderFunction {
    pub fn base(&self) -> &BVFunction1D {
        &self.base
    }

    pub fn n0(&self) -> usize {
        self.n0
    }

    pub fn breaks(&self) -> &[f64] {
        &self.breaks
    }

    pub fn eval(&self, x0: f64, x: f64) -> f64 {
        x0 + self.base.value(x)
    }

    /// `(w_◊⁻, w_◊⁺)` at `(x0, x)`.
    pub fn representatives(&self, x0: f64, x: f64) -> (f64, f64) {
        let (lo, hi, _) = self.base.representatives(x);
        (x0 + lo, x0 + hi)
    }

    /// Gradient `(1, w')` on the cell `(breaks[k], breaks[k+1])`.
    pub fn cell_gradient(&self, k: usize) -> [f64; 2] {
        let m = 0.5 * (self.breaks[k] + self.breaks[k + 1]);
        let i = self.base.nodes().partition_point(|&t| t <= m).saturating_sub(1);
        [1.0, self.base.pieces()[i.min(self.base.pieces().len() - 1)].slope]
    }

    /// `(x, height)` of the vertical jump lines; heights do not depend on `x0`.
    pub fn vertical_edges(&self) -> Vec<(f64, f64)> {
        self.base.jumps().iter().map(|j| (j.x, j.right - j.left)).collect()
    }

    fn rows(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        let h = 1.0 / self.n0 as f64;
        (0..self.n0).map(move |i| ((i as f64 + 0.5) * h, h))
    }
}

/// Terms of the lifted functional.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhiHatBreakdown {
    pub bulk_cells: f64,
    pub bulk_edges: f64,
    pub boundary_sides: f64,
    pub boundary_top_bottom: f64,
    pub pairing: f64,
    pub total: f64,
}

const ORDER: usize = 5;

/// Gauss nodes mapped to `(c, d)`.
fn nodes(c: f64, d: f64) -> Vec<(f64, f64)> {
    let (x, w) = gauss_legendre(ORDER);
    let (m, r) = (0.5 * (c + d), 0.5 * (d - c));
    x.iter().zip(w).map(|(t, w)| (m + r * t, r * w)).collect()
}

/// `Φ̂[w_◊]`: the anisotropic total variation of `w_◊`, its boundary
/// penalization against `u0_◊ = x0 + u0` and the pairing with the lifted pair.
pub fn evaluate_phi_hat(
    p: &LiftedIntegrand,
    w: &CylinderFunction,
    u0: &BoundaryData,
    lifted: &JordanPair,
) -> Result<PhiHatBreakdown> {
    if p.anisotropy.dim() != 2 {
        return Err(Error::Config(
            "the cylinder evaluator needs a lift of a 1D integrand".into(),
        ));
    }
    let (a, b) = w.base.domain();
    let v = u0.extension(a, b);
    let pp = |x0: f64, x: f64, xi: [f64; 2]| p.eval(&[x0, x], &xi);

    let mut cells = Vec::new();
    let mut tb = Vec::new();
    for k in 0..w.breaks.len() - 1 {
        let (c, d) = (w.breaks[k], w.breaks[k + 1]);
        let g = w.cell_gradient(k);
        // w − u0 is affine on the cell; split at its zero so |·| stays affine.
        let dl = w.base.right_limit(c) - v.value(c);
        let dr = w.base.left_limit(d) - v.value(d);
        let mut cuts = vec![c, d];
        if dl * dr < 0.0 {
            cuts.insert(1, c + (d - c) * dl / (dl - dr));
        }
        for (x0, h0) in w.rows() {
            for (x, wt) in nodes(c, d) {
                cells.push(h0 * wt * pp(x0, x, g));
            }
        }
        for s in cuts.windows(2) {
            for (x, wt) in nodes(s[0], s[1]) {
                let gap = w.base.right_limit(x) - v.value(x);
                // Bottom {0} × Ω has inward normal (1, 0), top (−1, 0).
                tb.push(wt * pp(0.0, x, [gap, 0.0]));
                tb.push(wt * pp(1.0, x, [-gap, 0.0]));
            }
        }
    }
    let mut edges = Vec::new();
    for (x, jump) in w.vertical_edges() {
        for (x0, h0) in w.rows() {
            edges.push(h0 * pp(x0, x, [0.0, jump]));
        }
    }
    let mut sides = Vec::new();
    for (x0, h0) in w.rows() {
        sides.push(h0 * pp(x0, a, [0.0, w.base.trace_a() - u0.a]));
        sides.push(h0 * pp(x0, b, [0.0, -(w.base.trace_b() - u0.b)]));
    }
    let pairing = lifted_pairing(w, lifted)?;
    let (bulk_cells, bulk_edges) = (pairwise_sum(&cells), pairwise_sum(&edges));
    let (boundary_sides, boundary_top_bottom) = (pairwise_sum(&sides), pairwise_sum(&tb));
    Ok(PhiHatBreakdown {
        bulk_cells,
        bulk_edges,
        boundary_sides,
        boundary_top_bottom,
        pairing,
        total: bulk_cells + bulk_edges + boundary_sides + boundary_top_bottom + pairing,
    })
}

/// `∫ w_◊⁻ dμ₊◊ − ∫ w_◊⁺ dμ₋◊` by vertical-segment quadrature.
fn lifted_pairing(w: &CylinderFunction, lifted: &JordanPair) -> Result<f64> {
    let part = |mu: &SignedMeasure, upper: bool| -> Result<f64> {
        if mu.dim() != 2 {
            return Err(Error::InvalidMeasure("expected a lifted measure".into()));
        }
        let mut s = Vec::new();
        let pick = |x0: f64, x: f64| {
            let (lo, hi) = w.representatives(x0, x);
            if upper {
                hi
            } else {
                lo
            }
        };
        for at in mu.atoms() {
            s.push(at.mass * pick(at.at[0], at.at[1]));
        }
        for c in mu.curves() {
            for (q, m) in c.quadrature(1.0 / w.n0 as f64) {
                s.push(m * pick(q[0], q[1]));
            }
        }
        match mu.density() {
            Some(Density::Two(Density2D::Extruded { base, x0 })) => {
                let mut br = w.breaks.clone();
                br.extend(base.breaks().iter().cloned());
                br.sort_by(f64::total_cmp);
                br.dedup();
                for k in br.windows(2) {
                    for (t, h0) in w.rows() {
                        let t = x0.0 + (x0.1 - x0.0) * t;
                        let h0 = h0 * (x0.1 - x0.0);
                        for (x, wt) in nodes(k[0], k[1]) {
                            s.push(h0 * wt * base.eval(x) * (t + w.base.value(x)));
                        }
                    }
                }
            }
            Some(Density::Two(Density2D::Cells { grid, mass })) => {
                // The cell centre stands in for the cell; not exact.
                for i in 0..grid.n[0] {
                    for j in 0..grid.n[1] {
                        let c = grid.center(i, j);
                        s.push(mass[grid.index(i, j)] * w.eval(c[0], c[1]));
                    }
                }
            }
            _ => {}
        }
        Ok(pairwise_sum(&s))
    };
    Ok(part(&lifted.plus, false)? - part(&lifted.minus, true)?)
}

/// Both sides of the rewriting of the functional through the lift, with the
/// rebased integrand `f' = f + shift` on both sides.
#[derive(Debug, Clone, Serialize)]
pub struct IdentityReport {
    pub shift: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub gap: f64,
    pub relative_gap: f64,
    pub phi_hat: PhiHatBreakdown,
    pub distance_term: f64,
    pub half_mass: f64,
}

/// `𝓕'[w] = Φ̂[w_◊] − 2∫f'(·,0)|w − u0| − μ(Ω)/2`, with `𝓕'` the functional
/// of `f' = f + c` (so `𝓕' = 𝓕 + c|Ω|`). The identity is exact, so a gap
/// above `tol·(1 + |lhs|)` is reported as [`Error::IdentityViolation`].
pub fn check_master_identity(
    f: &Integrand,
    u0: &BoundaryData,
    pair: &JordanPair,
    w: &BVFunction1D,
    tol: f64,
) -> Result<IdentityReport> {
    let lifted = lifted_integrand(f)?;
    check_master_identity_with(&lifted, u0, pair, w, tol)
}

pub fn check_master_identity_with(
    lifted: &LiftedIntegrand,
    u0: &BoundaryData,
    pair: &JordanPair,
    w: &BVFunction1D,
    tol: f64,
) -> Result<IdentityReport> {
    let fp = &lifted.rebased;
    let lhs = evaluate_mf(fp, u0, pair, w)?.total;
    let mut extra: Vec<f64> = Vec::new();
    for m in [&pair.plus, &pair.minus] {
        if let Some(h) = m.density_1d() {
            extra.extend(h.breaks().iter().cloned());
        }
    }
    let per_piece = if fp.is_x_dependent() { 16 } else { 1 };
    let cyl = lift_with(w, DEFAULT_N0, per_piece, &extra);
    let phi_hat = evaluate_phi_hat(lifted, &cyl, u0, &pair.lift()?)?;
    let distance_term = weighted_distance(|x| fp.eval(&[x], &[0.0]), fp.is_x_dependent(), w, u0);
    let half_mass = 0.5 * pair.net_mass();
    let rhs = phi_hat.total - 2.0 * distance_term - half_mass;
    let gap = (lhs - rhs).abs();
    let scale = 1.0 + lhs.abs();
    if !(gap <= tol * scale) {
        return Err(Error::IdentityViolation { gap, tol: tol * scale });
    }
    Ok(IdentityReport {
        shift: lifted.shift,
        lhs,
        rhs,
        gap,
        relative_gap: gap / scale,
        phi_hat,
        distance_term,
        half_mass,
    })
}
