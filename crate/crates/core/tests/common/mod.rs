//! Oracles and generators shared by the integration tests.
#![allow(dead_code)]

use lingrowth::bv1d::{evaluate_mf, BVFunction1D, BoundaryData, Piece};
use lingrowth::integrand::{integrand_from_key, Integrand};
use lingrowth::measure::{jordan_decompose, Density1D, JordanPair, SignedMeasure};
use rand::Rng;
use serde_json::{json, Value};

pub fn key(k: &str, p: Value) -> Integrand {
    integrand_from_key(k, &p, 1).unwrap()
}

/// 1D integrands satisfying H1–H4, with a short label.
pub fn smooth_library() -> Vec<Integrand> {
    vec![
        key("area", Value::Null),
        key("p-mean", json!({"p": 3.0})),
        key("finsler-quadratic", json!({"g": [[2.0]], "nu0": 0.5})),
        key("huber", json!({"p": 2.0})),
        key("arctan", Value::Null),
        key("weighted-area", json!({"c": 0.5})),
    ]
}

pub fn library() -> Vec<Integrand> {
    let mut v = smooth_library();
    v.push(key("tv", Value::Null));
    v
}

/// Objective of the continuous piecewise-affine profile `w` on `xs`, computed
/// through the exact 1D evaluator rather than the solver's assembly.
pub fn exact_value(f: &Integrand, u0: &BoundaryData, pair: &JordanPair, xs: &[f64], w: &[f64]) -> f64 {
    let u = BVFunction1D::from_values(xs.to_vec(), w.to_vec()).unwrap();
    evaluate_mf(f, u0, pair, &u).unwrap().total
}

/// Golden-section minimum of a convex scalar map after bracketing.
fn line_min<G: FnMut(f64) -> f64>(mut g: G, scale: f64) -> (f64, f64) {
    let g0 = g(0.0);
    let mut step = scale;
    let (mut lo, mut hi);
    if g(step) < g0 {
        lo = 0.0;
        hi = step;
        loop {
            step *= 2.0;
            if g(step) >= g(hi) || step > 1e8 {
                hi = step;
                break;
            }
            lo = hi;
            hi = step;
        }
    } else if g(-step) < g0 {
        hi = 0.0;
        lo = -step;
        loop {
            step *= 2.0;
            if g(-step) >= g(lo) || step > 1e8 {
                lo = -step;
                break;
            }
            hi = lo;
            lo = -step;
        }
    } else {
        lo = -step;
        hi = step;
    }
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let (mut c, mut d) = (hi - r * (hi - lo), lo + r * (hi - lo));
    let (mut gc, mut gd) = (g(c), g(d));
    while hi - lo > 1e-13 * (1.0 + lo.abs().max(hi.abs())) {
        if gc <= gd {
            hi = d;
            d = c;
            gd = gc;
            c = hi - r * (hi - lo);
            gc = g(c);
        } else {
            lo = c;
            c = d;
            gc = gd;
            d = lo + r * (hi - lo);
            gd = g(d);
        }
    }
    let t = 0.5 * (lo + hi);
    let gt = g(t);
    if gt <= g0 {
        (t, gt)
    } else {
        (0.0, g0)
    }
}

/// Exact line searches along the coordinate axes and along indicators of
/// every run of consecutive nodes, swept until nothing improves. Block moves
/// let the search slide past the kinks of total-variation terms where plain
/// coordinate descent stalls.
pub fn block_descent_oracle<F: Fn(&[f64]) -> f64>(obj: F, w0: &[f64]) -> (Vec<f64>, f64) {
    let n = w0.len();
    let mut dirs: Vec<Vec<f64>> = Vec::new();
    for i in 0..n {
        for j in i..n {
            let mut d = vec![0.0; n];
            d[i..=j].iter_mut().for_each(|v| *v = 1.0);
            dirs.push(d);
        }
    }
    let mut w = w0.to_vec();
    let mut val = obj(&w);
    let mut scale = 0.5;
    for _sweep in 0..5000 {
        let before = val;
        for d in &dirs {
            let (t, v) = line_min(
                |t| {
                    let p: Vec<f64> = w.iter().zip(d).map(|(a, b)| a + t * b).collect();
                    obj(&p)
                },
                scale,
            );
            if v < val {
                w.iter_mut().zip(d).for_each(|(a, b)| *a += t * b);
                val = v;
            }
        }
        scale = (scale * 0.5).max(1e-6);
        if before - val <= 1e-15 * (1.0 + val.abs()) && scale <= 1e-6 {
            break;
        }
    }
    (w, val)
}

pub fn affine_start(xs: &[f64], u0: &BoundaryData) -> Vec<f64> {
    let (a, b) = (xs[0], xs[xs.len() - 1]);
    xs.iter().map(|x| u0.a + (u0.b - u0.a) * (x - a) / (b - a)).collect()
}

/// Random piecewise-affine BV function with jumps on `(a, b)`.
pub fn random_bv<R: Rng>(rng: &mut R, a: f64, b: f64, pieces: usize) -> BVFunction1D {
    let mut cuts: Vec<f64> = (0..pieces - 1).map(|_| rng.gen_range(a..b)).collect();
    cuts.sort_by(f64::total_cmp);
    let mut nodes = vec![a];
    for c in cuts {
        if c - nodes[nodes.len() - 1] > 1e-3 * (b - a) && b - c > 1e-3 * (b - a) {
            nodes.push(c);
        }
    }
    nodes.push(b);
    let p = (0..nodes.len() - 1)
        .map(|_| Piece {
            value: rng.gen_range(-2.0..2.0),
            slope: if rng.gen_bool(0.3) {
                0.0
            } else {
                rng.gen_range(-3.0..3.0)
            },
        })
        .collect();
    BVFunction1D::new(nodes, p).unwrap()
}

/// Random signed measure with atoms on the jump set of `u` (so both
/// one-sided values are exercised), free atoms, and sometimes a
/// piecewise-affine density.
pub fn random_pair<R: Rng>(rng: &mut R, u: &BVFunction1D) -> JordanPair {
    let (a, b) = u.domain();
    let mut atoms: Vec<(f64, f64)> = Vec::new();
    for j in u.jumps() {
        if rng.gen_bool(0.5) {
            atoms.push((j.x, rng.gen_range(-2.0..2.0)));
        }
    }
    for _ in 0..rng.gen_range(0..3) {
        let x = rng.gen_range(a + 0.01..b - 0.01);
        if atoms.iter().all(|(y, _)| (x - y).abs() > 1e-6) {
            atoms.push((x, rng.gen_range(-2.0..2.0)));
        }
    }
    let mut mu = SignedMeasure::atoms_1d(a, b, &atoms).unwrap();
    if rng.gen_bool(0.5) {
        let m = rng.gen_range(a + 0.1 * (b - a)..b - 0.1 * (b - a));
        let (l, r) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let h = Density1D::new(vec![a, m, b], vec![l, r], vec![l, rng.gen_range(-1.0..1.0)]).unwrap();
        mu = mu.with_density_1d(h).unwrap();
    }
    jordan_decompose(&mu)
}
