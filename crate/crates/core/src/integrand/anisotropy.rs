use std::f64::consts::PI;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::PointFn;
use crate::quad::golden_max;
use crate::{Error, Result};

pub const DEFAULT_POLAR_DIRECTIONS_2D: usize = 512;
pub const DEFAULT_POLAR_DIRECTIONS_ND: usize = 4096;

/// A convex, positively one-homogeneous `φ(x, ·)` with
/// `a|ξ| ≤ φ(x, ξ) ≤ b|ξ|`.
#[derive(Clone)]
pub struct Anisotropy {
    name: String,
    dim: usize,
    eval: PointFn,
    lower: f64,
    upper: f64,
    x_dependent: bool,
    /// Closed-form polar, when known; `polar_with` ignores it.
    exact_polar: Option<PointFn>,
}

impl std::fmt::Debug for Anisotropy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Anisotropy({}, dim {})", self.name, self.dim)
    }
}

impl Anisotropy {
    pub fn new<F>(name: impl Into<String>, dim: usize, lower: f64, upper: f64, f: F) -> Self
    where
        F: Fn(&[f64], &[f64]) -> f64 + Send + Sync + 'static,
    {
        Anisotropy {
            name: name.into(),
            dim,
            eval: Arc::new(f),
            lower,
            upper,
            x_dependent: false,
            exact_polar: None,
        }
    }

    /// Attach a closed-form polar `(x, ξ*) ↦ φ°(x, ξ*)`.
    pub fn with_polar<F>(mut self, f: F) -> Self
    where
        F: Fn(&[f64], &[f64]) -> f64 + Send + Sync + 'static,
    {
        self.exact_polar = Some(Arc::new(f));
        self
    }

    pub fn has_exact_polar(&self) -> bool {
        self.exact_polar.is_some()
    }

    pub fn x_dependent(mut self) -> Self {
        self.x_dependent = true;
        self
    }

    pub fn euclidean(dim: usize) -> Self {
        Self::new("euclidean", dim, 1.0, 1.0, |_, xi| norm2(xi)).with_polar(|_, xs| norm2(xs))
    }

    pub fn scaled(dim: usize, lambda: f64) -> Self {
        Self::new(format!("scaled({lambda})"), dim, lambda, lambda, move |_, xi| {
            lambda * norm2(xi)
        })
        .with_polar(move |_, xs| norm2(xs) / lambda)
    }

    pub fn l1(dim: usize) -> Self {
        Self::new("l1", dim, 1.0, (dim as f64).sqrt(), |_, xi| {
            xi.iter().map(|v| v.abs()).sum()
        })
        .with_polar(|_, xs| xs.iter().fold(0.0, |m, v| m.max(v.abs())))
    }

    pub fn linf(dim: usize) -> Self {
        Self::new("linf", dim, 1.0 / (dim as f64).sqrt(), 1.0, |_, xi| {
            xi.iter().fold(0.0, |m, v| m.max(v.abs()))
        })
        .with_polar(|_, xs| xs.iter().map(|v| v.abs()).sum())
    }

    pub fn lp(dim: usize, p: f64) -> Self {
        let n = dim as f64;
        let e = (1.0 / p - 0.5).abs();
        let (lo, hi) = if p >= 2.0 { (n.powf(-e), 1.0) } else { (1.0, n.powf(e)) };
        let q = if p == 1.0 { f64::INFINITY } else { p / (p - 1.0) };
        Self::new(format!("lp({p})"), dim, lo, hi, move |_, xi| lp_norm(xi, p)).with_polar(move |_, xs| lp_norm(xs, q))
    }

    /// `√(ξᵀ Q ξ)` for symmetric positive definite `Q` (row-major).
    pub fn ellipse(q: Vec<f64>, dim: usize) -> Result<Self> {
        if q.len() != dim * dim {
            return Err(Error::Config(format!("ellipse matrix needs {} entries", dim * dim)));
        }
        let ev = super::symmetric_eigenvalues(&q, dim)?;
        let lmin = ev.iter().cloned().fold(f64::INFINITY, f64::min);
        let lmax = ev.iter().cloned().fold(0.0, f64::max);
        if lmin <= 0.0 {
            return Err(Error::Parameter("ellipse matrix must be positive definite".into()));
        }
        let qinv = invert(&q, dim)?;
        Ok(Self::new("ellipse", dim, lmin.sqrt(), lmax.sqrt(), move |_, xi| {
            quad_form(&q, xi).max(0.0).sqrt()
        })
        .with_polar(move |_, xs| quad_form(&qinv, xs).max(0.0).sqrt()))
    }

    /// `|ξ| + κ ξ₁` with `|κ| < 1`; not even, so mirroring matters.
    pub fn skewed(dim: usize, kappa: f64) -> Result<Self> {
        if kappa.abs() >= 1.0 {
            return Err(Error::Parameter(format!(
                "skewed anisotropy needs |κ| < 1, got {kappa}"
            )));
        }
        Ok(Self::new(
            format!("skewed({kappa})"),
            dim,
            1.0 - kappa.abs(),
            1.0 + kappa.abs(),
            move |_, xi| norm2(xi) + kappa * xi[0],
        ))
    }

    pub fn name(&self) -> &str {
        &self.name
    }
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn bounds(&self) -> (f64, f64) {
        (self.lower, self.upper)
    }
    pub fn is_x_dependent(&self) -> bool {
        self.x_dependent
    }

    #[inline]
    pub fn eval(&self, x: &[f64], xi: &[f64]) -> f64 {
        (self.eval)(x, xi)
    }

    /// `φ̃(x, ξ) = φ(x, −ξ)`.
    pub fn mirrored(&self) -> Anisotropy {
        let inner = self.eval.clone();
        Anisotropy {
            name: format!("{}~", self.name),
            dim: self.dim,
            eval: Arc::new(move |x, xi| {
                let neg: Vec<f64> = xi.iter().map(|v| -v).collect();
                inner(x, &neg)
            }),
            lower: self.lower,
            upper: self.upper,
            x_dependent: self.x_dependent,
            exact_polar: self.exact_polar.clone().map(|p| -> PointFn {
                Arc::new(move |x: &[f64], xs: &[f64]| {
                    let neg: Vec<f64> = xs.iter().map(|v| -v).collect();
                    p(x, &neg)
                })
            }),
        }
    }

    /// `φ°(x, ξ*) = sup_{ξ ≠ 0} ξ*·ξ / φ(x, ξ)`: the closed form when one is
    /// attached, otherwise the search at default resolution.
    pub fn polar(&self, x: &[f64], xi_star: &[f64]) -> Result<f64> {
        if let Some(p) = &self.exact_polar {
            return Ok(p(x, xi_star));
        }
        let n = if self.dim == 2 {
            DEFAULT_POLAR_DIRECTIONS_2D
        } else {
            DEFAULT_POLAR_DIRECTIONS_ND
        };
        self.polar_with(x, xi_star, n).map(|(v, _)| v)
    }

    /// Polar value and a maximising unit direction.
    ///
    /// In 2D the circle is sampled uniformly (the count is rounded up to a
    /// multiple of 4 so the axes are hit exactly) and the best arc is refined
    /// by golden section. In higher dimensions directions are spread on the
    /// sphere and refined by a shrinking pattern search. The returned value is
    /// attained by the returned direction, so it never overestimates.
    pub fn polar_with(&self, x: &[f64], xi_star: &[f64], n_dirs: usize) -> Result<(f64, Vec<f64>)> {
        assert_eq!(xi_star.len(), self.dim);
        let ratio = |d: &[f64]| -> Result<f64> {
            let p = self.eval(x, d);
            if !(p > 1e-12) {
                return Err(Error::DegenerateAnisotropy(format!(
                    "{} at direction {:?} gives {p}",
                    self.name, d
                )));
            }
            Ok(dot(xi_star, d) / p)
        };
        match self.dim {
            1 => {
                let up = ratio(&[1.0])?;
                let dn = ratio(&[-1.0])?;
                Ok(if up >= dn { (up, vec![1.0]) } else { (dn, vec![-1.0]) })
            }
            2 => {
                let n = n_dirs.max(8).div_ceil(4) * 4;
                let step = 2.0 * PI / n as f64;
                let mut best = (f64::NEG_INFINITY, 0.0);
                for i in 0..n {
                    let t = i as f64 * step;
                    let r = ratio(&[t.cos(), t.sin()])?;
                    if r > best.0 {
                        best = (r, t);
                    }
                }
                let mut err = None;
                let (t, r) = golden_max(best.1 - step, best.1 + step, 1e-13, |t| {
                    ratio(&[t.cos(), t.sin()]).unwrap_or_else(|e| {
                        err = Some(e);
                        f64::NEG_INFINITY
                    })
                });
                if let Some(e) = err {
                    return Err(e);
                }
                if r > best.0 {
                    Ok((r, vec![t.cos(), t.sin()]))
                } else {
                    Ok((best.0, vec![best.1.cos(), best.1.sin()]))
                }
            }
            d => {
                let dirs = sphere_points(d, n_dirs);
                let mut best = (f64::NEG_INFINITY, dirs[0].clone());
                for u in &dirs {
                    let r = ratio(u)?;
                    if r > best.0 {
                        best = (r, u.clone());
                    }
                }
                let mut step = 2.0 / (n_dirs as f64).powf(1.0 / (d as f64 - 1.0));
                let mut cand = vec![0.0; d];
                while step > 1e-11 {
                    let mut improved = false;
                    for k in 0..d {
                        for sgn in [1.0, -1.0] {
                            cand.copy_from_slice(&best.1);
                            cand[k] += sgn * step;
                            normalize(&mut cand);
                            let r = ratio(&cand)?;
                            if r > best.0 {
                                best = (r, cand.clone());
                                improved = true;
                            }
                        }
                    }
                    if !improved {
                        step *= 0.5;
                    }
                }
                Ok(best)
            }
        }
    }

    /// Boundary of the unit polar ball `{φ°(x, ·) ≤ 1}` in 2D, sampled at
    /// `n` angles: the vertex at angle `θ` is `e_θ / φ°(x, e_θ)`.
    pub fn polar_ball_boundary(&self, x: &[f64], n: usize) -> Result<Vec<[f64; 2]>> {
        if self.dim != 2 {
            return Err(Error::Config("polar ball boundary is only drawn in 2D".into()));
        }
        (0..n)
            .map(|i| {
                let t = 2.0 * PI * i as f64 / n as f64;
                let e = [t.cos(), t.sin()];
                let v = self.polar(x, &e)?;
                Ok([e[0] / v, e[1] / v])
            })
            .collect()
    }
}

pub(crate) fn norm2(v: &[f64]) -> f64 {
    match v.len() {
        1 => v[0].abs(),
        2 => v[0].hypot(v[1]),
        _ => v.iter().map(|a| a * a).sum::<f64>().sqrt(),
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn quad_form(q: &[f64], v: &[f64]) -> f64 {
    let n = v.len();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            s += v[i] * q[i * n + j] * v[j];
        }
    }
    s
}

fn lp_norm(xi: &[f64], p: f64) -> f64 {
    // Scale first so large entries do not overflow `|v|^p`.
    let m = xi.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if m == 0.0 || p.is_infinite() {
        return m;
    }
    m * xi.iter().map(|v| (v.abs() / m).powf(p)).sum::<f64>().powf(1.0 / p)
}

/// Gauss-Jordan inverse with partial pivoting (row-major).
fn invert(q: &[f64], n: usize) -> Result<Vec<f64>> {
    let mut a = q.to_vec();
    let mut inv = vec![0.0; n * n];
    for i in 0..n {
        inv[i * n + i] = 1.0;
    }
    for c in 0..n {
        let piv = (c..n)
            .max_by(|&i, &j| a[i * n + c].abs().total_cmp(&a[j * n + c].abs()))
            .unwrap();
        if a[piv * n + c].abs() < 1e-300 {
            return Err(Error::Parameter("singular matrix".into()));
        }
        for k in 0..n {
            a.swap(c * n + k, piv * n + k);
            inv.swap(c * n + k, piv * n + k);
        }
        let d = a[c * n + c];
        for k in 0..n {
            a[c * n + k] /= d;
            inv[c * n + k] /= d;
        }
        for r in 0..n {
            if r != c {
                let m = a[r * n + c];
                for k in 0..n {
                    a[r * n + k] -= m * a[c * n + k];
                    inv[r * n + k] -= m * inv[c * n + k];
                }
            }
        }
    }
    Ok(inv)
}

fn normalize(v: &mut [f64]) {
    let n = norm2(v);
    for a in v.iter_mut() {
        *a /= n;
    }
}

/// Quasi-uniform unit vectors: a Fibonacci lattice in 3D, seeded Gaussian
/// directions beyond.
fn sphere_points(d: usize, n: usize) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(n + 2 * d);
    for k in 0..d {
        for s in [1.0, -1.0] {
            let mut e = vec![0.0; d];
            e[k] = s;
            out.push(e);
        }
    }
    if d == 3 {
        let golden = PI * (3.0 - 5f64.sqrt());
        for i in 0..n {
            let z = 1.0 - 2.0 * (i as f64 + 0.5) / n as f64;
            let r = (1.0 - z * z).sqrt();
            let t = golden * i as f64;
            out.push(vec![r * t.cos(), r * t.sin(), z]);
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0x9e37_79b9);
        for _ in 0..n {
            let mut v: Vec<f64> = (0..d).map(|_| gaussian(&mut rng)).collect();
            normalize(&mut v);
            out.push(v);
        }
    }
    out
}

pub(crate) fn gaussian<R: Rng>(rng: &mut R) -> f64 {
    let u: f64 = rng.gen_range(f64::EPSILON..1.0);
    let v: f64 = rng.gen();
    (-2.0 * u.ln()).sqrt() * (2.0 * PI * v).cos()
}
