//! Isoperimetric conditions `μ₁(A⁺) − μ₂(A¹) ≤ C·P_φ(A)` tested over
//! families of sets.
//!
//! This is a falsifier: a pass over a family is evidence, a witness is a
//! proof of violation (up to quadrature of the densities).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::density::{CellGrid, Density2D};
use super::geometry::{ccw, classify_polygon, classify_rect, polygon_area, Location};
use super::{Domain, SignedMeasure};
use crate::integrand::Anisotropy;
use crate::Result;

pub const IC_TOL: f64 = 1e-9;

/// Human- and machine-readable description of a tested set.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SetDescription {
    Intervals {
        intervals: Vec<(f64, f64)>,
    },
    Rect {
        lo: [f64; 2],
        hi: [f64; 2],
    },
    Rects {
        rects: Vec<([f64; 2], [f64; 2])>,
    },
    Cells {
        grid: CellGrid,
        cells: usize,
        bbox: ([f64; 2], [f64; 2]),
    },
    Polygon {
        label: String,
        vertices: usize,
        area: f64,
    },
}

/// A 2D test set.
#[derive(Debug, Clone, PartialEq)]
pub enum TestSet2D {
    Rect {
        lo: [f64; 2],
        hi: [f64; 2],
    },
    /// Union of rectangles with pairwise disjoint closures.
    Rects(Vec<([f64; 2], [f64; 2])>),
    /// Union of grid cells; the perimeter is that of the pixel boundary.
    Cells {
        grid: CellGrid,
        mask: Vec<bool>,
    },
    /// Simple polygon, counter-clockwise.
    Polygon {
        label: String,
        vertices: Vec<[f64; 2]>,
    },
}

impl TestSet2D {
    pub fn describe(&self) -> SetDescription {
        match self {
            TestSet2D::Rect { lo, hi } => SetDescription::Rect { lo: *lo, hi: *hi },
            TestSet2D::Rects(r) => SetDescription::Rects { rects: r.clone() },
            TestSet2D::Cells { grid, mask } => {
                let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
                for i in 0..grid.n[0] {
                    for j in 0..grid.n[1] {
                        if mask[grid.index(i, j)] {
                            let (a, b) = grid.cell(i, j);
                            for k in 0..2 {
                                lo[k] = lo[k].min(a[k]);
                                hi[k] = hi[k].max(b[k]);
                            }
                        }
                    }
                }
                SetDescription::Cells {
                    grid: *grid,
                    cells: mask.iter().filter(|m| **m).count(),
                    bbox: (lo, hi),
                }
            }
            TestSet2D::Polygon { label, vertices } => SetDescription::Polygon {
                label: label.clone(),
                vertices: vertices.len(),
                area: polygon_area(vertices),
            },
        }
    }

    fn classify(&self, p: [f64; 2]) -> Location {
        const TOL: f64 = 1e-10;
        match self {
            TestSet2D::Rect { lo, hi } => classify_rect(*lo, *hi, p, TOL),
            TestSet2D::Rects(rs) => {
                let mut best = Location::Outside;
                for (lo, hi) in rs {
                    match classify_rect(*lo, *hi, p, TOL) {
                        Location::Interior => return Location::Interior,
                        Location::Boundary => best = Location::Boundary,
                        Location::Outside => {}
                    }
                }
                best
            }
            TestSet2D::Cells { grid, mask } => {
                let h = grid.h();
                let mut cand: [Vec<i64>; 2] = [Vec::new(), Vec::new()];
                for k in 0..2 {
                    let t = (p[k] - grid.lo[k]) / h[k];
                    let r = t.round();
                    if (t - r).abs() < 1e-9 {
                        cand[k] = vec![r as i64 - 1, r as i64];
                    } else {
                        cand[k] = vec![t.floor() as i64];
                    }
                }
                let (mut inside, mut total) = (0, 0);
                for &i in &cand[0] {
                    for &j in &cand[1] {
                        total += 1;
                        if i >= 0
                            && j >= 0
                            && (i as usize) < grid.n[0]
                            && (j as usize) < grid.n[1]
                            && mask[grid.index(i as usize, j as usize)]
                        {
                            inside += 1;
                        }
                    }
                }
                if inside == 0 {
                    Location::Outside
                } else if inside == total {
                    Location::Interior
                } else {
                    Location::Boundary
                }
            }
            TestSet2D::Polygon { vertices, .. } => classify_polygon(vertices, p, TOL),
        }
    }

    /// `Σ φ(x_facet, ν_inward)·length` with facets no longer than `h`.
    pub fn perimeter(&self, phi: &Anisotropy, h: f64) -> f64 {
        let mut parts = Vec::new();
        let mut seg = |p: [f64; 2], q: [f64; 2], nu: [f64; 2], parts: &mut Vec<f64>| {
            let len = (q[0] - p[0]).hypot(q[1] - p[1]);
            if len == 0.0 {
                return;
            }
            let n = if phi.is_x_dependent() {
                (len / h).ceil().max(1.0) as usize
            } else {
                1
            };
            let v = if phi.is_x_dependent() {
                (0..n)
                    .map(|i| {
                        let t = (i as f64 + 0.5) / n as f64;
                        phi.eval(&[p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])], &nu)
                    })
                    .sum::<f64>()
                    / n as f64
            } else {
                phi.eval(&p, &nu)
            };
            parts.push(v * len);
        };
        let rect = |lo: [f64; 2], hi: [f64; 2], parts: &mut Vec<f64>, seg: &mut SegFn| {
            seg(lo, [hi[0], lo[1]], [0.0, 1.0], parts);
            seg([lo[0], hi[1]], hi, [0.0, -1.0], parts);
            seg(lo, [lo[0], hi[1]], [1.0, 0.0], parts);
            seg([hi[0], lo[1]], hi, [-1.0, 0.0], parts);
        };
        match self {
            TestSet2D::Rect { lo, hi } => rect(*lo, *hi, &mut parts, &mut seg),
            TestSet2D::Rects(rs) => {
                for (lo, hi) in rs {
                    rect(*lo, *hi, &mut parts, &mut seg);
                }
            }
            TestSet2D::Cells { grid, mask } => {
                let inm = |i: i64, j: i64| {
                    i >= 0
                        && j >= 0
                        && (i as usize) < grid.n[0]
                        && (j as usize) < grid.n[1]
                        && mask[grid.index(i as usize, j as usize)]
                };
                for i in 0..grid.n[0] as i64 {
                    for j in 0..grid.n[1] as i64 {
                        if !inm(i, j) {
                            continue;
                        }
                        let (lo, hi) = grid.cell(i as usize, j as usize);
                        if !inm(i, j - 1) {
                            seg(lo, [hi[0], lo[1]], [0.0, 1.0], &mut parts);
                        }
                        if !inm(i, j + 1) {
                            seg([lo[0], hi[1]], hi, [0.0, -1.0], &mut parts);
                        }
                        if !inm(i - 1, j) {
                            seg(lo, [lo[0], hi[1]], [1.0, 0.0], &mut parts);
                        }
                        if !inm(i + 1, j) {
                            seg([hi[0], lo[1]], hi, [-1.0, 0.0], &mut parts);
                        }
                    }
                }
            }
            TestSet2D::Polygon { vertices, .. } => {
                let n = vertices.len();
                for k in 0..n {
                    let (p, q) = (vertices[k], vertices[(k + 1) % n]);
                    let len = (q[0] - p[0]).hypot(q[1] - p[1]);
                    if len > 0.0 {
                        let nu = [-(q[1] - p[1]) / len, (q[0] - p[0]) / len];
                        seg(p, q, nu, &mut parts);
                    }
                }
            }
        }
        crate::quad::pairwise_sum(&parts)
    }

    fn density_mass(&self, d: &Density2D) -> f64 {
        match self {
            TestSet2D::Rect { lo, hi } => d.mass_in_rect(*lo, *hi),
            TestSet2D::Rects(rs) => rs.iter().map(|(lo, hi)| d.mass_in_rect(*lo, *hi)).sum(),
            TestSet2D::Cells { grid, mask } => {
                let mut s = Vec::new();
                for i in 0..grid.n[0] {
                    for j in 0..grid.n[1] {
                        if mask[grid.index(i, j)] {
                            let (lo, hi) = grid.cell(i, j);
                            s.push(match d {
                                Density2D::Cells { grid: g, mass } if g == grid => mass[grid.index(i, j)],
                                _ => d.mass_in_rect(lo, hi),
                            });
                        }
                    }
                }
                crate::quad::pairwise_sum(&s)
            }
            TestSet2D::Polygon { vertices, .. } => d.mass_in_polygon(vertices),
        }
    }

    /// `(μ(A⁺), μ(A¹))` for a 2D measure.
    pub fn masses(&self, mu: &SignedMeasure, h: f64) -> (f64, f64) {
        let dm = mu.density_2d().map(|d| self.density_mass(d)).unwrap_or(0.0);
        mu.classify_mass_2d(|p| self.classify(p), dm, h)
    }
}

/// Families of test sets.
#[derive(Debug, Clone)]
pub enum TestSetFamily {
    /// All `(c, d)` with endpoints on `grid`, plus unions of up to
    /// `max_components` intervals with endpoints on the coarser `union_grid`.
    Intervals {
        grid: Vec<f64>,
        union_grid: Vec<f64>,
        max_components: usize,
    },
    /// Explicit 2D sets; `h` bounds facet and curve-quadrature lengths.
    Planar { sets: Vec<TestSet2D>, h: f64 },
}

impl TestSetFamily {
    /// Interval family on `(a, b)`: `n` uniform interior points plus the
    /// atoms and density breaks of the given measures.
    pub fn intervals(a: f64, b: f64, n: usize, measures: &[&SignedMeasure]) -> Self {
        let mut extra = Vec::new();
        for m in measures {
            extra.extend(m.atoms().iter().map(|at| at.at[0]));
            if let Some(h) = m.density_1d() {
                extra.extend(h.breaks().iter().cloned());
            }
        }
        let inside = |x: &f64| *x > a && *x < b;
        let mut grid: Vec<f64> = (1..=n).map(|i| a + (b - a) * i as f64 / (n + 1) as f64).collect();
        grid.extend(extra.iter().cloned().filter(inside));
        grid.sort_by(f64::total_cmp);
        grid.dedup_by(|x, y| (*x - *y).abs() < 1e-13);
        let stride = (n / 10).max(1);
        let mut union_grid: Vec<f64> = (1..=n)
            .step_by(stride)
            .map(|i| a + (b - a) * i as f64 / (n + 1) as f64)
            .collect();
        union_grid.extend(extra.into_iter().filter(inside));
        union_grid.sort_by(f64::total_cmp);
        union_grid.dedup_by(|x, y| (*x - *y).abs() < 1e-13);
        union_grid.truncate(18);
        TestSetFamily::Intervals {
            grid,
            union_grid,
            max_components: 3,
        }
    }

    pub fn planar(h: f64) -> Self {
        TestSetFamily::Planar { sets: Vec::new(), h }
    }

    fn push(&mut self, s: TestSet2D) {
        if let TestSetFamily::Planar { sets, .. } = self {
            sets.push(s);
        }
    }

    pub fn len(&self) -> usize {
        match self {
            TestSetFamily::Intervals { grid, .. } => grid.len() * grid.len().saturating_sub(1) / 2,
            TestSetFamily::Planar { sets, .. } => sets.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All rectangles with sides on `lines` interior lines per axis.
    pub fn with_rectangles(mut self, domain: &Domain, lines: usize) -> Self {
        let ax = |k: usize| -> Vec<f64> {
            (1..=lines)
                .map(|i| domain.lo[k] + (domain.hi[k] - domain.lo[k]) * i as f64 / (lines + 1) as f64)
                .collect()
        };
        let (xs, ys) = (ax(0), ax(1));
        for i in 0..xs.len() {
            for i2 in i + 1..xs.len() {
                for j in 0..ys.len() {
                    for j2 in j + 1..ys.len() {
                        self.push(TestSet2D::Rect {
                            lo: [xs[i], ys[j]],
                            hi: [xs[i2], ys[j2]],
                        });
                    }
                }
            }
        }
        self
    }

    /// Sets `{φ°(x − c) < r}` as polygons with `n_theta` vertices, kept only
    /// when compactly inside `domain`. Pass `euclidean` to get discs.
    pub fn with_polar_balls(
        mut self,
        phi: &Anisotropy,
        centers: &[[f64; 2]],
        radii: &[f64],
        n_theta: usize,
        domain: &Domain,
    ) -> Result<Self> {
        let unit = phi.polar_ball_boundary(&[0.0, 0.0], n_theta)?;
        for c in centers {
            for &r in radii {
                let v: Vec<[f64; 2]> = unit.iter().map(|p| [c[0] + r * p[0], c[1] + r * p[1]]).collect();
                if v.iter().all(|p| domain.contains_strictly(p)) {
                    self.push(TestSet2D::Polygon {
                        label: format!("ball({}, c=({}, {}), r={r})", phi.name(), c[0], c[1]),
                        vertices: ccw(v),
                    });
                }
            }
        }
        Ok(self)
    }

    /// Random connected pixel blobs grown from random seeds, away from the
    /// outer layer of cells.
    pub fn with_blobs(mut self, grid: CellGrid, count: usize, max_cells: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let [nx, ny] = grid.n;
        if nx < 3 || ny < 3 {
            return self;
        }
        for _ in 0..count {
            let mut mask = vec![false; grid.len()];
            let mut cells = vec![(rng.gen_range(1..nx - 1), rng.gen_range(1..ny - 1))];
            mask[grid.index(cells[0].0, cells[0].1)] = true;
            let target = rng.gen_range(1..=max_cells.max(1));
            let mut guard = 0;
            while cells.len() < target && guard < 50 * target {
                guard += 1;
                let (i, j) = cells[rng.gen_range(0..cells.len())];
                let (di, dj) = [(1i64, 0i64), (-1, 0), (0, 1), (0, -1)][rng.gen_range(0..4)];
                let (a, b) = (i as i64 + di, j as i64 + dj);
                if a < 1 || b < 1 || a >= nx as i64 - 1 || b >= ny as i64 - 1 {
                    continue;
                }
                let k = grid.index(a as usize, b as usize);
                if !mask[k] {
                    mask[k] = true;
                    cells.push((a as usize, b as usize));
                }
            }
            self.push(TestSet2D::Cells { grid, mask });
        }
        self
    }

    /// Prisms `(t₁, t₂) × A` over unions of base intervals.
    pub fn with_prisms(mut self, bases: &[Vec<(f64, f64)>], t_pairs: &[(f64, f64)]) -> Self {
        for a in bases {
            for &(t1, t2) in t_pairs {
                let rects: Vec<([f64; 2], [f64; 2])> = a.iter().map(|&(c, d)| ([t1, c], [t2, d])).collect();
                if rects.len() == 1 {
                    self.push(TestSet2D::Rect {
                        lo: rects[0].0,
                        hi: rects[0].1,
                    });
                } else {
                    self.push(TestSet2D::Rects(rects));
                }
            }
        }
        self
    }

    pub fn with_set(mut self, s: TestSet2D) -> Self {
        self.push(s);
        self
    }

    /// Enumerate the interval family (single intervals and unions).
    pub fn interval_sets(&self) -> Vec<Vec<(f64, f64)>> {
        let mut out = Vec::new();
        if let TestSetFamily::Intervals {
            grid,
            union_grid,
            max_components,
        } = self
        {
            for i in 0..grid.len() {
                for j in i + 1..grid.len() {
                    out.push(vec![(grid[i], grid[j])]);
                }
            }
            for m in 2..=*max_components {
                let mut idx: Vec<usize> = (0..2 * m).collect();
                let n = union_grid.len();
                if n < 2 * m {
                    break;
                }
                loop {
                    out.push(
                        (0..m)
                            .map(|c| (union_grid[idx[2 * c]], union_grid[idx[2 * c + 1]]))
                            .collect(),
                    );
                    // next combination of 2m indices out of n
                    let mut k = 2 * m;
                    while k > 0 && idx[k - 1] == n - 2 * m + k - 1 {
                        k -= 1;
                    }
                    if k == 0 {
                        break;
                    }
                    idx[k - 1] += 1;
                    for l in k..2 * m {
                        idx[l] = idx[l - 1] + 1;
                    }
                }
            }
        }
        out
    }
}

/// Outcome of an IC search.
#[derive(Debug, Clone, Serialize)]
pub struct ICReport {
    pub constant_requested: f64,
    pub passed: bool,
    pub worst_ratio: f64,
    pub worst_set: Option<SetDescription>,
    /// The worst set, when it violates the requested constant.
    pub witness: Option<SetDescription>,
    pub tested_sets: usize,
    pub tol: f64,
    pub note: String,
}

type SegFn<'a> = dyn FnMut([f64; 2], [f64; 2], [f64; 2], &mut Vec<f64>) + 'a;

pub fn ic_check(
    mu1: &SignedMeasure,
    mu2: &SignedMeasure,
    phi: &Anisotropy,
    c: f64,
    family: &TestSetFamily,
) -> ICReport {
    ic_check_with_tol(mu1, mu2, phi, c, family, IC_TOL)
}

pub fn ic_check_with_tol(
    mu1: &SignedMeasure,
    mu2: &SignedMeasure,
    phi: &Anisotropy,
    c: f64,
    family: &TestSetFamily,
    tol: f64,
) -> ICReport {
    let (worst, set, n) = match family {
        TestSetFamily::Intervals { .. } => worst_1d(mu1, mu2, phi, family),
        TestSetFamily::Planar { sets, h } => worst_2d(mu1, mu2, phi, sets, *h),
    };
    let passed = worst <= c + tol;
    let note = match family {
        TestSetFamily::Intervals { .. } => "falsifier over intervals and unions of up to 3 intervals".into(),
        TestSetFamily::Planar { .. } => {
            "falsifier over the given planar sets; pixel-boundary perimeters overestimate non-axis-aligned sets".into()
        }
    };
    ICReport {
        constant_requested: c,
        passed,
        worst_ratio: worst,
        witness: if passed { None } else { set.clone() },
        worst_set: set,
        tested_sets: n,
        tol,
        note,
    }
}

struct Line {
    atoms: Vec<(f64, f64)>,
    density: Option<super::Density1D>,
}

impl Line {
    fn new(m: &SignedMeasure) -> Self {
        let mut atoms: Vec<(f64, f64)> = m.atoms().iter().map(|a| (a.at[0], a.mass)).collect();
        atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
        Line {
            atoms,
            density: m.density_1d().cloned(),
        }
    }

    /// `(μ([c, d]), μ((c, d)))`.
    fn mass(&self, c: f64, d: f64) -> (f64, f64) {
        let h = self.density.as_ref().map(|h| h.integral(c, d)).unwrap_or(0.0);
        let (mut closed, mut open) = (h, h);
        for &(x, m) in &self.atoms {
            if x > d {
                break;
            }
            if x >= c {
                closed += m;
                if x > c && x < d {
                    open += m;
                }
            }
        }
        (closed, open)
    }
}

fn worst_1d(
    mu1: &SignedMeasure,
    mu2: &SignedMeasure,
    phi: &Anisotropy,
    family: &TestSetFamily,
) -> (f64, Option<SetDescription>, usize) {
    let (l1, l2) = (Line::new(mu1), Line::new(mu2));
    let sets = family.interval_sets();
    let eval = |s: &Vec<(f64, f64)>| -> f64 {
        let (mut num, mut per) = (0.0, 0.0);
        for &(c, d) in s {
            num += l1.mass(c, d).0 - l2.mass(c, d).1;
            per += phi.eval(&[c], &[1.0]) + phi.eval(&[d], &[-1.0]);
        }
        num / per
    };
    let (w, idx) = max_ratio(&sets, eval);
    (
        w,
        idx.map(|i| SetDescription::Intervals {
            intervals: sets[i].clone(),
        }),
        sets.len(),
    )
}

fn worst_2d(
    mu1: &SignedMeasure,
    mu2: &SignedMeasure,
    phi: &Anisotropy,
    sets: &[TestSet2D],
    h: f64,
) -> (f64, Option<SetDescription>, usize) {
    let eval = |s: &TestSet2D| -> f64 {
        let p = s.perimeter(phi, h);
        if p <= 0.0 {
            return f64::NEG_INFINITY;
        }
        let (m1, _) = s.masses(mu1, h);
        let (_, m2) = s.masses(mu2, h);
        (m1 - m2) / p
    };
    let (w, idx) = max_ratio(sets, eval);
    (w, idx.map(|i| sets[i].describe()), sets.len())
}

/// Max over the family; ties keep the first set so results are reproducible.
fn max_ratio<T: Sync, F: Fn(&T) -> f64 + Sync>(sets: &[T], eval: F) -> (f64, Option<usize>) {
    #[cfg(feature = "parallel")]
    let vals: Vec<f64> = {
        use rayon::prelude::*;
        sets.par_iter().map(&eval).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let vals: Vec<f64> = sets.iter().map(&eval).collect();
    let mut best = (f64::NEG_INFINITY, None);
    for (i, v) in vals.into_iter().enumerate() {
        if v > best.0 {
            best = (v, Some(i));
        }
    }
    if best.1.is_none() {
        best.0 = 0.0;
    }
    best
}

#[cfg(test)]
mod tests {
    use super::super::Curve;
    use super::*;

    #[test]
    fn two_delta_is_borderline() {
        let mu = SignedMeasure::atoms_1d(-1.0, 1.0, &[(0.0, 2.0)]).unwrap();
        let zero = SignedMeasure::zero(Domain::interval(-1.0, 1.0));
        let fam = TestSetFamily::intervals(-1.0, 1.0, 40, &[&mu]);
        let e = Anisotropy::euclidean(1);
        let r = ic_check(&mu, &zero, &e, 1.0, &fam);
        assert!(r.passed && (r.worst_ratio - 1.0).abs() < 1e-15, "{r:?}");
        let r = ic_check(&mu, &zero, &e, 0.99, &fam);
        assert!(!r.passed && r.witness.is_some());
    }

    #[test]
    fn zero_measure_passes_zero() {
        let zero = SignedMeasure::zero(Domain::interval(0.0, 1.0));
        let fam = TestSetFamily::intervals(0.0, 1.0, 10, &[]);
        let r = ic_check(&zero, &zero, &Anisotropy::euclidean(1), 0.0, &fam);
        assert!(r.passed && r.worst_ratio == 0.0);
    }

    #[test]
    fn union_enumeration_counts() {
        let fam = TestSetFamily::Intervals {
            grid: vec![0.1, 0.2, 0.3],
            union_grid: vec![0.1, 0.2, 0.3, 0.4, 0.5, 0.6],
            max_components: 3,
        };
        // 3 singles, C(6,4) = 15 pairs, C(6,6) = 1 triple
        assert_eq!(fam.interval_sets().len(), 3 + 15 + 1);
    }

    #[test]
    fn square_boundary_curve_passes_over_rectangles() {
        let d = Domain::rect([0.0, 0.0], [1.0, 1.0]);
        let k = vec![[0.25, 0.25], [0.75, 0.25], [0.75, 0.75], [0.25, 0.75], [0.25, 0.25]];
        let mu = SignedMeasure::new(
            d.clone(),
            vec![],
            None,
            vec![Curve {
                points: k,
                density: 1.0,
            }],
        )
        .unwrap();
        let zero = SignedMeasure::zero(d.clone());
        let fam = TestSetFamily::planar(1.0 / 64.0).with_rectangles(&d, 15);
        let r = ic_check(&mu, &zero, &Anisotropy::euclidean(2), 1.0, &fam);
        assert!(r.passed, "{r:?}");
        assert!((r.worst_ratio - 1.0).abs() < 1e-12, "{}", r.worst_ratio);
    }

    #[test]
    fn pixel_perimeter_of_a_block() {
        let g = CellGrid::new([0.0, 0.0], [1.0, 1.0], [4, 4]);
        let mut mask = vec![false; 16];
        mask[g.index(1, 1)] = true;
        mask[g.index(1, 2)] = true;
        let s = TestSet2D::Cells { grid: g, mask };
        assert!((s.perimeter(&Anisotropy::euclidean(2), 0.25) - 1.5).abs() < 1e-15);
        assert_eq!(s.classify([0.375, 0.5]), Location::Interior);
        assert_eq!(s.classify([0.25, 0.5]), Location::Boundary);
        assert_eq!(s.classify([0.9, 0.9]), Location::Outside);
    }
}
