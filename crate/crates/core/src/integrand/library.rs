use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::f64::consts::FRAC_PI_2;

use super::anisotropy::{norm2, quad_form};
use super::{Anisotropy, Integrand};
use crate::{Error, Result};

pub const INTEGRAND_KEYS: &[&str] = &[
    "area",
    "tv",
    "finsler-quadratic",
    "p-mean",
    "huber",
    "arctan",
    "h4fail",
    "weighted-area",
];

pub const ANISOTROPY_KEYS: &[&str] = &["euclidean", "scaled", "l1", "linf", "lp", "ellipse", "skewed"];

/// `{"key": ..., "params": {...}, "dim": N}` as read from config files.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct IntegrandSpec {
    pub key: String,
    #[serde(default)]
    pub params: Value,
    #[serde(default = "one")]
    pub dim: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct AnisotropySpec {
    pub key: String,
    #[serde(default)]
    pub params: Value,
    #[serde(default = "two")]
    pub dim: usize,
}

fn one() -> usize {
    1
}
fn two() -> usize {
    2
}

impl IntegrandSpec {
    pub fn build(&self) -> Result<Integrand> {
        integrand_from_key(&self.key, &self.params, self.dim)
    }
}

impl AnisotropySpec {
    pub fn build(&self) -> Result<Anisotropy> {
        anisotropy_from_key(&self.key, &self.params, self.dim)
    }
}

fn num(params: &Value, name: &str, default: Option<f64>) -> Result<f64> {
    match params.get(name) {
        Some(v) => v
            .as_f64()
            .ok_or_else(|| Error::Config(format!("parameter `{name}` must be a number"))),
        None => default.ok_or_else(|| Error::Config(format!("missing parameter `{name}`"))),
    }
}

fn matrix(params: &Value, name: &str, dim: usize) -> Result<Option<Vec<f64>>> {
    let Some(v) = params.get(name) else {
        return Ok(None);
    };
    let rows = v
        .as_array()
        .ok_or_else(|| Error::Config(format!("`{name}` must be an array of rows")))?;
    let mut out = Vec::with_capacity(dim * dim);
    for r in rows {
        let r = r
            .as_array()
            .ok_or_else(|| Error::Config(format!("`{name}` rows must be arrays")))?;
        for e in r {
            out.push(
                e.as_f64()
                    .ok_or_else(|| Error::Config(format!("`{name}` entries must be numbers")))?,
            );
        }
    }
    if out.len() != dim * dim || rows.len() != dim {
        return Err(Error::Config(format!("`{name}` must be {dim}×{dim}")));
    }
    for i in 0..dim {
        for j in 0..i {
            if (out[i * dim + j] - out[j * dim + i]).abs() > 1e-12 {
                return Err(Error::Parameter(format!("`{name}` must be symmetric")));
            }
        }
    }
    Ok(Some(out))
}

fn check_known(params: &Value, allowed: &[&str]) -> Result<()> {
    match params {
        Value::Null => Ok(()),
        Value::Object(m) => {
            for k in m.keys() {
                if !allowed.contains(&k.as_str()) {
                    return Err(Error::Config(format!("unknown parameter `{k}`")));
                }
            }
            Ok(())
        }
        _ => Err(Error::Config("params must be an object".into())),
    }
}

/// Build one of the library integrands.
///
/// | key                 | `f(x, ξ)`                                   |
/// |---------------------|---------------------------------------------|
/// | `area`              | `√(1 + |ξ|²)`                               |
/// | `tv`                | `|ξ|`                                       |
/// | `finsler-quadratic` | `√(ν0² + ξᵀGξ)`                             |
/// | `p-mean`            | `(1 + |ξ|^p)^{1/p}`                         |
/// | `huber`             | `|ξ|^p/p` for `|ξ| ≤ 1`, else `|ξ| − (p−1)/p` |
/// | `arctan`            | `|ξ| arctan|ξ|`                             |
/// | `h4fail`            | `1 + |ξ| − (1 + |ξ|)^θ`                     |
/// | `weighted-area`     | `(1 + c x₁²) √(1 + |ξ|²)`                   |
///
/// `huber` and `arctan` are quadratic at the origin, so the lower bound
/// `α|ξ| ≤ f` only holds away from `ξ = 0`; the declared `α` is the one at
/// infinity and the sampled check reports the failure near zero.
pub fn integrand_from_key(key: &str, params: &Value, dim: usize) -> Result<Integrand> {
    if dim == 0 {
        return Err(Error::Config("dimension must be positive".into()));
    }
    let f = match key {
        "area" => {
            check_known(params, &[])?;
            Integrand::new("area", dim, 1.0, 1.0, |_, xi| {
                let n = norm2(xi);
                (1.0 + n * n).sqrt()
            })
            .with_recession(|_, xi| norm2(xi))
            .with_h4(0.0)
        }
        "tv" => {
            check_known(params, &[])?;
            Integrand::new("tv", dim, 1.0, 1.0, |_, xi| norm2(xi)).homogeneous()
        }
        "finsler-quadratic" => {
            check_known(params, &["g", "nu0"])?;
            let nu0 = num(params, "nu0", Some(1.0))?;
            let g = matrix(params, "g", dim)?.unwrap_or_else(|| identity(dim));
            let ev = symmetric_eigenvalues(&g, dim)?;
            let lmin = ev.iter().cloned().fold(f64::INFINITY, f64::min);
            let lmax = ev.iter().cloned().fold(0.0, f64::max);
            if lmin <= 0.0 {
                return Err(Error::Parameter("G must be positive definite".into()));
            }
            let g2 = g.clone();
            Integrand::new(
                "finsler-quadratic",
                dim,
                lmin.sqrt(),
                lmax.sqrt().max(nu0.abs()),
                move |_, xi| (nu0 * nu0 + quad_form(&g, xi)).sqrt(),
            )
            .with_recession(move |_, xi| quad_form(&g2, xi).max(0.0).sqrt())
            .with_h4(0.0)
        }
        "p-mean" => {
            check_known(params, &["p"])?;
            let p = num(params, "p", Some(2.0))?;
            if !(p >= 1.0) {
                return Err(Error::Parameter(format!("p-mean needs p ≥ 1, got {p}")));
            }
            Integrand::new(format!("p-mean({p})"), dim, 1.0, 1.0, move |_, xi| {
                let n = norm2(xi);
                // (1 + n^p)^{1/p} = max(1, n) (1 + min/max^p)^{1/p}
                let (hi, lo) = if n > 1.0 { (n, 1.0) } else { (1.0, n) };
                hi * (1.0 + (lo / hi).powf(p)).powf(1.0 / p)
            })
            .with_recession(|_, xi| norm2(xi))
            .with_h4(0.0)
        }
        "huber" => {
            check_known(params, &["p"])?;
            let p = num(params, "p", Some(2.0))?;
            if !(p > 1.0) {
                return Err(Error::Parameter(format!("huber needs p > 1, got {p}")));
            }
            Integrand::new(format!("huber({p})"), dim, 1.0, 1.0, move |_, xi| {
                let n = norm2(xi);
                if n <= 1.0 {
                    n.powf(p) / p
                } else {
                    n - (p - 1.0) / p
                }
            })
            .with_recession(|_, xi| norm2(xi))
            .with_h4((p - 1.0) / p)
        }
        "arctan" => {
            check_known(params, &[])?;
            Integrand::new("arctan", dim, 1.0, FRAC_PI_2, |_, xi| {
                let n = norm2(xi);
                n * n.atan()
            })
            .with_recession(|_, xi| FRAC_PI_2 * norm2(xi))
            .with_h4(1.0)
        }
        "h4fail" => {
            check_known(params, &["theta"])?;
            let t = num(params, "theta", Some(0.5))?;
            if !(t > 0.0 && t < 1.0) {
                return Err(Error::Parameter(format!("h4fail needs θ in (0, 1), got {t}")));
            }
            Integrand::new(format!("h4fail({t})"), dim, 1.0 - t, 1.0, move |_, xi| {
                let n = norm2(xi);
                1.0 + n - (1.0 + n).powf(t)
            })
            .with_recession(|_, xi| norm2(xi))
        }
        "weighted-area" => {
            check_known(params, &["c"])?;
            let c = num(params, "c", Some(1.0))?;
            if !(c >= 0.0) {
                return Err(Error::Parameter(format!("weighted-area needs c ≥ 0, got {c}")));
            }
            Integrand::new(format!("weighted-area({c})"), dim, 1.0, 1.0 + c, move |x, xi| {
                let n = norm2(xi);
                (1.0 + c * x[0] * x[0]) * (1.0 + n * n).sqrt()
            })
            .with_recession(move |x, xi| (1.0 + c * x[0] * x[0]) * norm2(xi))
            .with_h4(0.0)
            .x_dependent()
        }
        _ => return Err(Error::UnknownKey(key.to_string())),
    };
    Ok(f)
}

pub fn anisotropy_from_key(key: &str, params: &Value, dim: usize) -> Result<Anisotropy> {
    if dim == 0 {
        return Err(Error::Config("dimension must be positive".into()));
    }
    match key {
        "euclidean" => {
            check_known(params, &[])?;
            Ok(Anisotropy::euclidean(dim))
        }
        "scaled" => {
            check_known(params, &["lambda"])?;
            let l = num(params, "lambda", None)?;
            if !(l > 0.0) {
                return Err(Error::Parameter("scaled anisotropy needs λ > 0".into()));
            }
            Ok(Anisotropy::scaled(dim, l))
        }
        "l1" => {
            check_known(params, &[])?;
            Ok(Anisotropy::l1(dim))
        }
        "linf" => {
            check_known(params, &[])?;
            Ok(Anisotropy::linf(dim))
        }
        "lp" => {
            check_known(params, &["p"])?;
            let p = num(params, "p", None)?;
            if !(p >= 1.0) {
                return Err(Error::Parameter("lp anisotropy needs p ≥ 1".into()));
            }
            Ok(Anisotropy::lp(dim, p))
        }
        "ellipse" => {
            check_known(params, &["q"])?;
            let q = matrix(params, "q", dim)?.ok_or_else(|| Error::Config("missing `q`".into()))?;
            Anisotropy::ellipse(q, dim)
        }
        "skewed" => {
            check_known(params, &["kappa"])?;
            Anisotropy::skewed(dim, num(params, "kappa", None)?)
        }
        _ => Err(Error::UnknownKey(key.to_string())),
    }
}

fn identity(n: usize) -> Vec<f64> {
    let mut m = vec![0.0; n * n];
    for i in 0..n {
        m[i * n + i] = 1.0;
    }
    m
}

/// Eigenvalues of a symmetric row-major matrix by cyclic Jacobi rotations.
pub fn symmetric_eigenvalues(m: &[f64], n: usize) -> Result<Vec<f64>> {
    if m.len() != n * n || m.iter().any(|v| !v.is_finite()) {
        return Err(Error::Parameter("matrix must be finite and square".into()));
    }
    let mut a = m.to_vec();
    for _sweep in 0..64 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j] * a[i * n + j])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    Ok((0..n).map(|i| a[i * n + i]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn jacobi_two_by_two() {
        let mut ev = symmetric_eigenvalues(&[2.0, 1.0, 1.0, 2.0], 2).unwrap();
        ev.sort_by(f64::total_cmp);
        assert!((ev[0] - 1.0).abs() < 1e-12 && (ev[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn unknown_keys_and_params() {
        assert!(matches!(
            integrand_from_key("nope", &Value::Null, 1),
            Err(Error::UnknownKey(_))
        ));
        assert!(integrand_from_key("huber", &json!({"q": 2}), 1).is_err());
        assert!(integrand_from_key("h4fail", &json!({"theta": 1.5}), 1).is_err());
    }

    #[test]
    fn every_key_builds() {
        for k in INTEGRAND_KEYS {
            let f = integrand_from_key(k, &Value::Null, 2).unwrap();
            assert!(f.eval(&[0.1, 0.2], &[0.3, 0.4]).is_finite());
        }
        for k in ANISOTROPY_KEYS {
            let p = match *k {
                "scaled" => json!({"lambda": 2.0}),
                "lp" => json!({"p": 3.0}),
                "ellipse" => json!({"q": [[2.0, 0.5], [0.5, 1.0]]}),
                "skewed" => json!({"kappa": 0.3}),
                _ => Value::Null,
            };
            let a = anisotropy_from_key(k, &p, 2).unwrap();
            assert!(a.eval(&[0.0, 0.0], &[1.0, 0.0]) > 0.0);
        }
    }

    #[test]
    fn spec_json_round_trip() {
        let s: IntegrandSpec =
            serde_json::from_str(r#"{"key":"finsler-quadratic","params":{"g":[[2,0],[0,1]],"nu0":0.5},"dim":2}"#)
                .unwrap();
        let f = s.build().unwrap();
        assert!((f.eval(&[0.0, 0.0], &[1.0, 0.0]) - (0.25f64 + 2.0).sqrt()).abs() < 1e-15);
        let back: IntegrandSpec = serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
        assert_eq!(back, s);
    }
}
