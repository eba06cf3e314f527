use lingrowth::integrand::{anisotropy_from_key, integrand_from_key, lifted_integrand, Anisotropy, Integrand};
use proptest::prelude::*;
use serde_json::{json, Value};

fn integrands2() -> Vec<Integrand> {
    [
        ("area", Value::Null),
        ("tv", Value::Null),
        ("finsler-quadratic", json!({"g": [[2.0, 0.5], [0.5, 1.0]], "nu0": 0.7})),
        ("p-mean", json!({"p": 3.0})),
        ("huber", json!({"p": 1.5})),
        ("arctan", Value::Null),
        ("weighted-area", json!({"c": 0.5})),
    ]
    .into_iter()
    .map(|(k, p)| integrand_from_key(k, &p, 2).unwrap())
    .collect()
}

fn smooth_anisotropies() -> Vec<Anisotropy> {
    [
        ("euclidean", Value::Null),
        ("scaled", json!({"lambda": 2.5})),
        ("lp", json!({"p": 3.0})),
        ("ellipse", json!({"q": [[3.0, 1.0], [1.0, 2.0]]})),
    ]
    .into_iter()
    .map(|(k, p)| anisotropy_from_key(k, &p, 2).unwrap())
    .collect()
}

fn all_anisotropies() -> Vec<Anisotropy> {
    let mut v = smooth_anisotropies();
    v.push(Anisotropy::l1(2));
    v.push(Anisotropy::linf(2));
    v.push(anisotropy_from_key("skewed", &json!({"kappa": 0.5}), 2).unwrap());
    v
}

fn vec2() -> impl Strategy<Value = [f64; 2]> {
    (-5.0..5.0f64, -5.0..5.0f64).prop_map(|(a, b)| [a, b])
}

fn point() -> impl Strategy<Value = [f64; 2]> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(a, b)| [a, b])
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Central-difference gradient, or `None` where one-sided slopes disagree.
fn fd_gradient<G: Fn(&[f64]) -> f64>(g: G, at: [f64; 2], h: f64) -> Option<[f64; 2]> {
    let mut out = [0.0; 2];
    let g0 = g(&at);
    for k in 0..2 {
        let (mut p, mut m) = (at, at);
        p[k] += h;
        m[k] -= h;
        let (gp, gm) = (g(&p), g(&m));
        let (fwd, bwd) = ((gp - g0) / h, (g0 - gm) / h);
        if (fwd - bwd).abs() > 1e-3 {
            return None;
        }
        out[k] = (gp - gm) / (2.0 * h);
    }
    Some(out)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn polar_identity(xs in vec2(), which in 0usize..4) {
        prop_assume!(xs[0].hypot(xs[1]) > 1e-3);
        let phi = &smooth_anisotropies()[which];
        let h = 1e-5 * xs[0].hypot(xs[1]);
        let grad = fd_gradient(|v| phi.polar_with(&[0.0, 0.0], v, 512).unwrap().0, xs, h);
        if let Some(g) = grad {
            let v = phi.eval(&[0.0, 0.0], &g);
            prop_assert!((v - 1.0).abs() <= 1e-4, "{}: φ(∇φ°) = {v}", phi.name());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn anisotropic_cauchy_schwarz(xi in vec2(), xs in vec2(), which in 0usize..7) {
        let phi = &all_anisotropies()[which];
        let x = [0.0, 0.0];
        let rhs = phi.eval(&x, &xi) * phi.polar_with(&x, &xs, 512).unwrap().0;
        prop_assert!(dot(&xi, &xs) <= rhs * (1.0 + 1e-12) + 1e-12);
    }

    #[test]
    fn cauchy_schwarz_equality_at_the_maximiser(xs in vec2(), which in 0usize..7) {
        prop_assume!(xs[0].hypot(xs[1]) > 1e-6);
        let phi = &all_anisotropies()[which];
        let (v, d) = phi.polar_with(&[0.0, 0.0], &xs, 512).unwrap();
        let lhs = dot(&d, &xs);
        prop_assert!((lhs - v * phi.eval(&[0.0, 0.0], &d)).abs() <= 1e-12 * (1.0 + lhs.abs()));
    }

    #[test]
    fn perspective_is_one_homogeneous(x in point(), t in 0.0..3.0f64, xi in vec2(), j in -4i32..5, which in 0usize..7) {
        let f = &integrands2()[which];
        let lam = 2f64.powi(j);
        let scaled = [lam * xi[0], lam * xi[1]];
        let a = f.perspective(&x, lam * t, &scaled).unwrap();
        let b = lam * f.perspective(&x, t, &xi).unwrap();
        if t > 0.0 {
            prop_assert_eq!(a, b);
        } else {
            prop_assert!((a - b).abs() <= 1e-9 * (1.0 + b.abs()));
        }
    }

    #[test]
    fn rebased_perspective_is_monotone_in_t(x in point(), t1 in 0.0..4.0f64, dt in 0.0..4.0f64, xi in vec2(), which in 0usize..7) {
        let f = &integrands2()[which];
        let m = f.h4_constant().unwrap_or(0.0);
        let g = f.shifted(m);
        let lo = g.perspective(&x, t1, &xi).unwrap();
        let hi = g.perspective(&x, t1 + dt, &xi).unwrap();
        prop_assert!(lo <= hi + 1e-12 * (1.0 + hi.abs()), "{}: {lo} > {hi}", g.name());
    }

    #[test]
    fn sub_recession_bound(x in point(), xi in vec2(), z in vec2(), which in 0usize..7) {
        let f = &integrands2()[which];
        let sum = [xi[0] + z[0], xi[1] + z[1]];
        let lhs = f.eval(&x, &sum);
        let rhs = f.eval(&x, &xi) + f.recession_default(&x, &z).unwrap();
        prop_assert!(lhs <= rhs + 1e-12 * (1.0 + rhs.abs()));
    }

    #[test]
    fn gradient_bounded_by_recession(x in point(), xi in vec2(), theta in 0.0..std::f64::consts::TAU, which in 0usize..7) {
        let f = &integrands2()[which];
        let h = 1e-5 * (1.0 + xi[0].hypot(xi[1]));
        if let Some(g) = fd_gradient(|v| f.eval(&x, v), xi, h) {
            let nu = [theta.cos(), theta.sin()];
            let up = f.recession_default(&x, &nu).unwrap();
            let dn = f.recession_default(&x, &[-nu[0], -nu[1]]).unwrap();
            let d = dot(&g, &nu);
            prop_assert!(d <= up * (1.0 + 1e-6) + 1e-6, "{}: ∇f·ν = {d} > {up}", f.name());
            prop_assert!(-d <= dn * (1.0 + 1e-6) + 1e-6);
        }
    }

    #[test]
    fn lifted_dominates_recession(x in point(), xi0 in -3.0..3.0f64, xi in vec2(), which in 0usize..7) {
        let f = &integrands2()[which];
        let p = lifted_integrand(f).unwrap();
        let v = p.eval(&[0.5, x[0], x[1]], &[xi0, xi[0], xi[1]]);
        let r = f.recession_default(&x, &xi).unwrap();
        prop_assert!(v >= r * (1.0 - 1e-12) - 1e-12);
    }
}

#[test]
fn lifted_area_is_the_euclidean_norm() {
    let f = integrand_from_key("area", &Value::Null, 2).unwrap();
    let p = lifted_integrand(&f).unwrap();
    assert_eq!(p.shift, 0.0);
    let v = p.eval(&[0.3, 0.1, 0.2], &[2.0, 3.0, 6.0]);
    assert!((v - 7.0).abs() < 1e-12);
}

#[test]
fn lifted_at_unit_height_is_the_rebased_integrand() {
    for f in integrands2() {
        let p = lifted_integrand(&f).unwrap();
        let x = [0.4, -0.3];
        let xi = [1.5, -0.5];
        let v = p.eval(&[0.5, x[0], x[1]], &[1.0, xi[0], xi[1]]);
        assert!((v - (f.eval(&x, &xi) + p.shift)).abs() < 1e-12, "{}", f.name());
    }
}

#[test]
fn h4_failure_is_detected() {
    let f = integrand_from_key("h4fail", &json!({"theta": 0.5}), 2).unwrap();
    assert!(lifted_integrand(&f).is_err());
}
