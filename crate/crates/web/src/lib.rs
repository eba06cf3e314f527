//! Browser bindings. Every export takes and returns JSON strings; the
//! `*_json` functions hold the logic so they can be tested natively.

use lingrowth::bv1d::BoundaryData;
use lingrowth::experiments::run_experiment;
use lingrowth::integrand::{AnisotropySpec, IntegrandSpec};
use lingrowth::measure::{Domain, JordanPair, PairSpec};
use lingrowth::solver::{minimize, SolveConfig};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

type Res = Result<String, String>;

fn parse<T: serde::de::DeserializeOwned>(s: &str, what: &str) -> Result<T, String> {
    serde_json::from_str(s).map_err(|e| format!("{what}: {e}"))
}

/// Boundaries of the unit ball `{φ < 1}` and of the polar ball `{φ° < 1}`
/// as `[[x, y], ...]` polygons.
pub fn balls_json(anisotropy: &str, n: usize) -> Res {
    let spec: AnisotropySpec = parse(anisotropy, "anisotropy")?;
    let phi = spec.build().map_err(|e| e.to_string())?;
    if phi.dim() != 2 {
        return Err("the demo draws planar anisotropies only".into());
    }
    let n = n.clamp(8, 2048);
    let o = [0.0, 0.0];
    let mut unit = Vec::with_capacity(n);
    for i in 0..n {
        let t = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
        let e = [t.cos(), t.sin()];
        let r = 1.0 / phi.eval(&o, &e);
        unit.push([r * e[0], r * e[1]]);
    }
    let polar = phi.polar_ball_boundary(&o, n).map_err(|e| e.to_string())?;
    Ok(json!({"name": phi.name(), "unit": unit, "polar": polar}).to_string())
}

/// The borderline infimum table: `a_k` with its closed form where known.
pub fn borderline_json(params: &str) -> Res {
    let p: Value = parse(params, "params")?;
    let t = run_experiment("borderline-area", &p).map_err(|e| e.to_string())?;
    Ok(json!({"columns": t.columns, "rows": t.rows, "summary": t.summary}).to_string())
}

#[derive(serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct MinimizeInput {
    integrand: IntegrandSpec,
    #[serde(default)]
    u0: [f64; 2],
    #[serde(default)]
    domain: Option<[f64; 2]>,
    #[serde(default)]
    measures: Option<PairSpec>,
    #[serde(default)]
    solver: SolveConfig,
}

/// A 1D minimisation: status, value, the profile and any IC certificate.
pub fn minimize_json(config: &str) -> Res {
    let c: MinimizeInput = parse(config, "config")?;
    let f = c.integrand.build().map_err(|e| e.to_string())?;
    let pair = match (&c.measures, c.domain) {
        (Some(p), _) => p.build().map_err(|e| e.to_string())?,
        (None, Some([a, b])) if a < b => JordanPair::zero(Domain::interval(a, b)),
        _ => return Err("give `measures` or a non-empty `domain`".into()),
    };
    let r = minimize(&f, &BoundaryData::new(c.u0[0], c.u0[1]), &pair, &c.solver).map_err(|e| e.to_string())?;
    let profile: Vec<[f64; 2]> =
        r.w.nodes()
            .iter()
            .flat_map(|&x| {
                let (l, rr) = (r.w.left_limit(x), r.w.right_limit(x));
                if l == rr {
                    vec![[x, l]]
                } else {
                    vec![[x, l], [x, rr]]
                }
            })
            .collect();
    Ok(json!({
        "status": r.status,
        "value": r.value,
        "iterations": r.iterations,
        "profile": profile,
        "certificate": r.certificate,
    })
    .to_string())
}

fn js(r: Res) -> Result<String, JsError> {
    r.map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn balls(anisotropy: &str, n: usize) -> Result<String, JsError> {
    js(balls_json(anisotropy, n))
}

#[wasm_bindgen]
pub fn borderline(params: &str) -> Result<String, JsError> {
    js(borderline_json(params))
}

#[wasm_bindgen(js_name = minimize1d)]
pub fn minimize_1d(config: &str) -> Result<String, JsError> {
    js(minimize_json(config))
}
