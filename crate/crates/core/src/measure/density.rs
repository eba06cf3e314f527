use serde::{Deserialize, Serialize};

use super::geometry::clip_area;
use crate::quad::{gauss, pairwise_sum};
use crate::{Error, Result};

/// Piecewise-linear density on consecutive cells `[bᵢ, bᵢ₊₁]`, linear from
/// `left[i]` to `right[i]`; may jump at breaks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Density1D {
    breaks: Vec<f64>,
    left: Vec<f64>,
    right: Vec<f64>,
}

impl Density1D {
    pub fn new(breaks: Vec<f64>, left: Vec<f64>, right: Vec<f64>) -> Result<Self> {
        let n = breaks.len();
        if n < 2 || left.len() != n - 1 || right.len() != n - 1 {
            return Err(Error::InvalidMeasure(
                "density needs n+1 breaks and n cell values".into(),
            ));
        }
        if breaks.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidMeasure("density breaks must increase".into()));
        }
        if left.iter().chain(&right).chain(&breaks).any(|v| !v.is_finite()) {
            return Err(Error::InvalidMeasure("density values must be finite".into()));
        }
        Ok(Density1D { breaks, left, right })
    }

    /// Continuous interpolant of nodal values.
    pub fn from_nodes(xs: Vec<f64>, vals: Vec<f64>) -> Result<Self> {
        if xs.len() != vals.len() {
            return Err(Error::InvalidMeasure("breaks and values differ in length".into()));
        }
        let left = vals[..vals.len().saturating_sub(1)].to_vec();
        let right = vals.get(1..).map(<[f64]>::to_vec).unwrap_or_default();
        Self::new(xs, left, right)
    }

    pub fn constant(a: f64, b: f64, c: f64) -> Self {
        Density1D {
            breaks: vec![a, b],
            left: vec![c],
            right: vec![c],
        }
    }

    pub fn breaks(&self) -> &[f64] {
        &self.breaks
    }

    pub fn support(&self) -> (f64, f64) {
        (self.breaks[0], *self.breaks.last().unwrap())
    }

    pub fn cells(&self) -> impl Iterator<Item = (f64, f64, f64, f64)> + '_ {
        (0..self.left.len()).map(move |i| (self.breaks[i], self.breaks[i + 1], self.left[i], self.right[i]))
    }

    /// Value a.e.; at interior breaks the right cell is used.
    pub fn eval(&self, x: f64) -> f64 {
        let (a, b) = self.support();
        if x < a || x > b {
            return 0.0;
        }
        let i = match self.breaks.partition_point(|&t| t <= x) {
            0 => 0,
            k => (k - 1).min(self.left.len() - 1),
        };
        let (c, d) = (self.breaks[i], self.breaks[i + 1]);
        let t = (x - c) / (d - c);
        self.left[i] + t * (self.right[i] - self.left[i])
    }

    pub fn total(&self) -> f64 {
        pairwise_sum(
            &self
                .cells()
                .map(|(c, d, l, r)| 0.5 * (d - c) * (l + r))
                .collect::<Vec<_>>(),
        )
    }

    pub fn total_abs(&self) -> f64 {
        let (p, n) = self.split_sign();
        p.total() + n.total()
    }

    /// `∫_c^d H`, exact.
    pub fn integral(&self, c: f64, d: f64) -> f64 {
        self.integral_affine(c, d, 1.0, 0.0)
    }

    /// `∫_c^d H(x)(v + s(x − c)) dx`, exact (Simpson on each overlap).
    pub fn integral_affine(&self, c: f64, d: f64, v: f64, s: f64) -> f64 {
        if d <= c {
            return 0.0;
        }
        let g = |x: f64| v + s * (x - c);
        let start = self.breaks.partition_point(|&t| t <= c).saturating_sub(1);
        let mut parts = Vec::new();
        for i in start..self.left.len() {
            let (p, q) = (self.breaks[i], self.breaks[i + 1]);
            if p >= d {
                break;
            }
            let lo = p.max(c);
            let hi = q.min(d);
            if hi <= lo {
                continue;
            }
            let h = |x: f64| self.left[i] + (x - p) / (q - p) * (self.right[i] - self.left[i]);
            let m = 0.5 * (lo + hi);
            parts.push((hi - lo) / 6.0 * (h(lo) * g(lo) + 4.0 * h(m) * g(m) + h(hi) * g(hi)));
        }
        pairwise_sum(&parts)
    }

    /// `(H₊, H₋)`, inserting zero crossings so both stay piecewise linear.
    pub fn split_sign(&self) -> (Density1D, Density1D) {
        let mut br = vec![self.breaks[0]];
        let (mut pl, mut pr, mut nl, mut nr) = (vec![], vec![], vec![], vec![]);
        let mut push = |x1: f64, l: f64, r: f64, br: &mut Vec<f64>| {
            br.push(x1);
            pl.push(l.max(0.0));
            pr.push(r.max(0.0));
            nl.push((-l).max(0.0));
            nr.push((-r).max(0.0));
        };
        for (c, d, l, r) in self.cells() {
            if l * r < 0.0 {
                let z = c + (d - c) * l / (l - r);
                if z > c && z < d {
                    push(z, l, 0.0, &mut br);
                    push(d, 0.0, r, &mut br);
                    continue;
                }
            }
            push(d, l, r, &mut br);
        }
        (
            Density1D {
                breaks: br.clone(),
                left: pl,
                right: pr,
            },
            Density1D {
                breaks: br,
                left: nl,
                right: nr,
            },
        )
    }

    pub fn is_nonnegative(&self) -> bool {
        self.left.iter().chain(&self.right).all(|v| *v >= 0.0)
    }

    /// Whether both densities are positive on a common set of positive length.
    pub fn overlaps(&self, other: &Density1D) -> bool {
        let mut pts: Vec<f64> = self.breaks.iter().chain(&other.breaks).cloned().collect();
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        pts.windows(2).any(|w| {
            [0.25, 0.5, 0.75].iter().any(|t| {
                let x = w[0] + t * (w[1] - w[0]);
                self.eval(x) > 0.0 && other.eval(x) > 0.0
            })
        })
    }

    pub fn scaled(&self, s: f64) -> Density1D {
        Density1D {
            breaks: self.breaks.clone(),
            left: self.left.iter().map(|v| s * v).collect(),
            right: self.right.iter().map(|v| s * v).collect(),
        }
    }
}

/// Uniform `n[0] × n[1]` grid of cells on a box; axis 0 first.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CellGrid {
    pub lo: [f64; 2],
    pub hi: [f64; 2],
    pub n: [usize; 2],
}

impl CellGrid {
    pub fn new(lo: [f64; 2], hi: [f64; 2], n: [usize; 2]) -> Self {
        assert!(n[0] > 0 && n[1] > 0 && hi[0] > lo[0] && hi[1] > lo[1]);
        CellGrid { lo, hi, n }
    }

    pub fn h(&self) -> [f64; 2] {
        [
            (self.hi[0] - self.lo[0]) / self.n[0] as f64,
            (self.hi[1] - self.lo[1]) / self.n[1] as f64,
        ]
    }

    pub fn len(&self) -> usize {
        self.n[0] * self.n[1]
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.n[1] + j
    }

    pub fn line(&self, axis: usize, k: usize) -> f64 {
        self.lo[axis] + (self.hi[axis] - self.lo[axis]) * k as f64 / self.n[axis] as f64
    }

    pub fn cell(&self, i: usize, j: usize) -> ([f64; 2], [f64; 2]) {
        (
            [self.line(0, i), self.line(1, j)],
            [self.line(0, i + 1), self.line(1, j + 1)],
        )
    }

    pub fn center(&self, i: usize, j: usize) -> [f64; 2] {
        let (lo, hi) = self.cell(i, j);
        [0.5 * (lo[0] + hi[0]), 0.5 * (lo[1] + hi[1])]
    }

    /// Cell whose closed rectangle contains `p` (lowest indices on ties).
    pub fn locate(&self, p: [f64; 2]) -> Option<(usize, usize)> {
        let h = self.h();
        let mut ij = [0usize; 2];
        for k in 0..2 {
            if p[k] < self.lo[k] || p[k] > self.hi[k] {
                return None;
            }
            ij[k] = (((p[k] - self.lo[k]) / h[k]).floor() as usize).min(self.n[k] - 1);
        }
        Some((ij[0], ij[1]))
    }

    /// Index range of cells meeting `[lo, hi]`.
    pub fn range(&self, lo: [f64; 2], hi: [f64; 2]) -> [(usize, usize); 2] {
        let h = self.h();
        let mut r = [(0, 0); 2];
        for k in 0..2 {
            let a = ((lo[k] - self.lo[k]) / h[k]).floor().max(0.0) as usize;
            let b = (((hi[k] - self.lo[k]) / h[k]).ceil().max(0.0) as usize).min(self.n[k]);
            r[k] = (a.min(self.n[k]), b);
        }
        r
    }
}

/// Densities on 2D domains.
#[derive(Debug, Clone, PartialEq)]
pub enum Density2D {
    /// Exact mass per cell; the density is treated as constant within a cell
    /// wherever partial-cell masses are needed.
    Cells { grid: CellGrid, mass: Vec<f64> },
    /// `H(x0, x) = base(x)` on `x0 ∈ (lo, hi)`; exact for lifted measures.
    Extruded { base: Density1D, x0: (f64, f64) },
}

impl Density2D {
    /// Cell masses of a pointwise density by adaptive tensor Gauss rules.
    /// Integrable point singularities are fine as long as they do not sit at
    /// a Gauss node; cells are bisected until two levels agree to `tol`.
    pub fn from_fn<F: Fn([f64; 2]) -> f64 + Sync>(grid: CellGrid, f: F, tol: f64) -> Density2D {
        let cell = |k: usize| {
            let (i, j) = (k / grid.n[1], k % grid.n[1]);
            let (lo, hi) = grid.cell(i, j);
            adaptive_cell(&f, lo, hi, tol)
        };
        #[cfg(feature = "parallel")]
        let mass: Vec<f64> = {
            use rayon::prelude::*;
            (0..grid.len()).into_par_iter().map(cell).collect()
        };
        #[cfg(not(feature = "parallel"))]
        let mass: Vec<f64> = (0..grid.len()).map(cell).collect();
        Density2D::Cells { grid, mass }
    }

    pub fn total(&self) -> f64 {
        match self {
            Density2D::Cells { mass, .. } => pairwise_sum(mass),
            Density2D::Extruded { base, x0 } => (x0.1 - x0.0) * base.total(),
        }
    }

    pub fn total_abs(&self) -> f64 {
        match self {
            Density2D::Cells { mass, .. } => mass.iter().map(|m| m.abs()).sum(),
            Density2D::Extruded { base, x0 } => (x0.1 - x0.0) * base.total_abs(),
        }
    }

    pub fn is_nonnegative(&self) -> bool {
        match self {
            Density2D::Cells { mass, .. } => mass.iter().all(|m| *m >= 0.0),
            Density2D::Extruded { base, .. } => base.is_nonnegative(),
        }
    }

    pub fn scaled(&self, s: f64) -> Density2D {
        match self {
            Density2D::Cells { grid, mass } => Density2D::Cells {
                grid: *grid,
                mass: mass.iter().map(|m| s * m).collect(),
            },
            Density2D::Extruded { base, x0 } => Density2D::Extruded {
                base: base.scaled(s),
                x0: *x0,
            },
        }
    }

    pub fn split_sign(&self) -> (Density2D, Density2D) {
        match self {
            Density2D::Cells { grid, mass } => (
                Density2D::Cells {
                    grid: *grid,
                    mass: mass.iter().map(|m| m.max(0.0)).collect(),
                },
                Density2D::Cells {
                    grid: *grid,
                    mass: mass.iter().map(|m| (-m).max(0.0)).collect(),
                },
            ),
            Density2D::Extruded { base, x0 } => {
                let (p, n) = base.split_sign();
                (
                    Density2D::Extruded { base: p, x0: *x0 },
                    Density2D::Extruded { base: n, x0: *x0 },
                )
            }
        }
    }

    pub fn overlaps(&self, other: &Density2D) -> bool {
        match (self, other) {
            (Density2D::Cells { grid: g1, mass: m1 }, Density2D::Cells { grid: g2, mass: m2 }) if g1 == g2 => {
                m1.iter().zip(m2).any(|(a, b)| *a > 0.0 && *b > 0.0)
            }
            (Density2D::Extruded { base: b1, .. }, Density2D::Extruded { base: b2, .. }) => b1.overlaps(b2),
            _ => {
                let (t1, t2) = (self.total_abs(), other.total_abs());
                t1 > 0.0 && t2 > 0.0
            }
        }
    }

    /// Pointwise value a.e. (cell average for `Cells`).
    pub fn eval(&self, p: [f64; 2]) -> f64 {
        match self {
            Density2D::Cells { grid, mass } => match grid.locate(p) {
                Some((i, j)) => {
                    let h = grid.h();
                    mass[grid.index(i, j)] / (h[0] * h[1])
                }
                None => 0.0,
            },
            Density2D::Extruded { base, x0 } => {
                if p[0] < x0.0 || p[0] > x0.1 {
                    0.0
                } else {
                    base.eval(p[1])
                }
            }
        }
    }

    /// Mass of `[lo, hi]`; exact for `Extruded` and for cell-aligned boxes.
    pub fn mass_in_rect(&self, lo: [f64; 2], hi: [f64; 2]) -> f64 {
        match self {
            Density2D::Cells { grid, mass } => {
                let r = grid.range(lo, hi);
                let h = grid.h();
                let mut parts = Vec::new();
                for i in r[0].0..r[0].1 {
                    for j in r[1].0..r[1].1 {
                        let (clo, chi) = grid.cell(i, j);
                        let ox = (chi[0].min(hi[0]) - clo[0].max(lo[0])).max(0.0);
                        let oy = (chi[1].min(hi[1]) - clo[1].max(lo[1])).max(0.0);
                        if ox > 0.0 && oy > 0.0 {
                            let frac = if ox >= h[0] * (1.0 - 1e-12) && oy >= h[1] * (1.0 - 1e-12) {
                                1.0
                            } else {
                                ox * oy / (h[0] * h[1])
                            };
                            parts.push(frac * mass[grid.index(i, j)]);
                        }
                    }
                }
                pairwise_sum(&parts)
            }
            Density2D::Extruded { base, x0 } => {
                let t = (hi[0].min(x0.1) - lo[0].max(x0.0)).max(0.0);
                t * base.integral(lo[1], hi[1])
            }
        }
    }

    /// Mass of a polygon via clipped-area fractions of cells (strips in `x`
    /// for `Extruded`).
    pub fn mass_in_polygon(&self, poly: &[[f64; 2]]) -> f64 {
        let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
        for p in poly {
            for k in 0..2 {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        match self {
            Density2D::Cells { grid, mass } => {
                let r = grid.range(lo, hi);
                let h = grid.h();
                let mut parts = Vec::new();
                for i in r[0].0..r[0].1 {
                    for j in r[1].0..r[1].1 {
                        let (clo, chi) = grid.cell(i, j);
                        let a = clip_area(poly, clo, chi);
                        if a > 0.0 {
                            parts.push(a / (h[0] * h[1]) * mass[grid.index(i, j)]);
                        }
                    }
                }
                pairwise_sum(&parts)
            }
            Density2D::Extruded { base, x0 } => {
                let mut cuts: Vec<f64> = base
                    .breaks()
                    .iter()
                    .cloned()
                    .filter(|b| *b > lo[1] && *b < hi[1])
                    .collect();
                let m = 256;
                cuts.extend((0..=m).map(|k| lo[1] + (hi[1] - lo[1]) * k as f64 / m as f64));
                cuts.sort_by(f64::total_cmp);
                cuts.dedup();
                let parts: Vec<f64> = cuts
                    .windows(2)
                    .map(|w| {
                        let a = clip_area(poly, [x0.0, w[0]], [x0.1, w[1]]);
                        a * base.integral(w[0], w[1]) / (w[1] - w[0])
                    })
                    .collect();
                pairwise_sum(&parts)
            }
        }
    }
}

/// Globally adaptive cubature on one cell: the subregion with the largest
/// error estimate is split first, until the summed estimate meets `tol` or
/// the region budget runs out.
fn adaptive_cell<F: Fn([f64; 2]) -> f64>(f: &F, lo: [f64; 2], hi: [f64; 2], tol: f64) -> f64 {
    const BUDGET: usize = 1500;
    struct Region {
        err: f64,
        val: f64,
        kids: [f64; 4],
        lo: [f64; 2],
        hi: [f64; 2],
    }
    impl PartialEq for Region {
        fn eq(&self, o: &Self) -> bool {
            self.err.total_cmp(&o.err).is_eq()
        }
    }
    impl Eq for Region {}
    impl PartialOrd for Region {
        fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
            Some(self.cmp(o))
        }
    }
    impl Ord for Region {
        fn cmp(&self, o: &Self) -> std::cmp::Ordering {
            self.err.total_cmp(&o.err)
        }
    }
    let region = |lo: [f64; 2], hi: [f64; 2], whole: f64| -> Region {
        let mid = [0.5 * (lo[0] + hi[0]), 0.5 * (lo[1] + hi[1])];
        let q = quadrants(lo, mid, hi);
        let v = [0, 1, 2, 3].map(|k| tensor_gauss(f, q[k].0, q[k].1));
        let val: f64 = v.iter().sum();
        Region {
            err: (val - whole).abs(),
            val,
            kids: v,
            lo,
            hi,
        }
    };
    let mut heap = std::collections::BinaryHeap::new();
    let r = region(lo, hi, tensor_gauss(f, lo, hi));
    let (mut total, mut err) = (r.val, r.err);
    heap.push(r);
    let mut regions = 1;
    while err > tol * (1.0 + total.abs()) && regions < BUDGET {
        let Some(top) = heap.pop() else { break };
        total -= top.val;
        err -= top.err;
        let mid = [0.5 * (top.lo[0] + top.hi[0]), 0.5 * (top.lo[1] + top.hi[1])];
        for (k, (a, b)) in quadrants(top.lo, mid, top.hi).into_iter().enumerate() {
            let r = region(a, b, top.kids[k]);
            total += r.val;
            err += r.err;
            heap.push(r);
        }
        regions += 4;
        if !err.is_finite() || !total.is_finite() {
            break;
        }
    }
    // Re-sum to shed the drift of the running updates.
    heap.iter().map(|r| r.val).sum()
}

fn quadrants(lo: [f64; 2], mid: [f64; 2], hi: [f64; 2]) -> [([f64; 2], [f64; 2]); 4] {
    [
        (lo, mid),
        ([mid[0], lo[1]], [hi[0], mid[1]]),
        ([lo[0], mid[1]], [mid[0], hi[1]]),
        (mid, hi),
    ]
}

fn tensor_gauss<F: Fn([f64; 2]) -> f64>(f: &F, lo: [f64; 2], hi: [f64; 2]) -> f64 {
    gauss(lo[0], hi[0], 5, |x| gauss(lo[1], hi[1], 5, |y| f([x, y])))
}
