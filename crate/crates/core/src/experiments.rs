//! Scripted quantitative examples: the borderline anisotropic area
//! functional, the role of the H4 bound for coercivity, and the vectorial
//! semicontinuity counterexample.
//!
//! Each runner returns an [`ExperimentTable`] (one row per `k`) with the
//! closed-form value next to the computed one wherever one exists.

use std::f64::consts::PI;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::integrand::{Anisotropy, AnisotropySpec};
use crate::quad::{gauss_composite, pairwise_sum};
use crate::{Error, Result};

pub const EXPERIMENTS: &[&str] = &["borderline-area", "remark-h4", "vectorial"];

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentTable {
    pub name: String,
    pub params: Value,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub summary: Map<String, Value>,
}

impl ExperimentTable {
    /// RFC 4180 CSV with `#` footer lines appended verbatim.
    pub fn to_csv(&self, footer: &[String]) -> String {
        let mut s = self.columns.join(",");
        s.push('\n');
        for r in &self.rows {
            let cells: Vec<String> = r.iter().map(|v| format_number(*v)).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        for line in footer {
            s.push_str("# ");
            s.push_str(line);
            s.push('\n');
        }
        s
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }
}

/// Shortest round-trip decimal, so output is byte-stable.
pub fn format_number(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{v:?}")
    }
}

pub fn run_experiment(name: &str, params: &Value) -> Result<ExperimentTable> {
    let params = if params.is_null() { json!({}) } else { params.clone() };
    let parse = |e: serde_json::Error| Error::Config(format!("{name} params: {e}"));
    match name {
        "borderline-area" => run_borderline_area(&serde_json::from_value(params).map_err(parse)?),
        "remark-h4" => run_remark_h4(&serde_json::from_value(params).map_err(parse)?),
        "vectorial" => run_vectorial(&serde_json::from_value(params).map_err(parse)?),
        _ => Err(Error::UnknownKey(name.to_string())),
    }
}

/// A star-shaped domain `{r < ρ(θ)}` integrated on a radial × angular grid
/// (midpoints in `s = r/ρ` and in `θ`), or on a Cartesian grid that refuses
/// the cell containing the origin.
#[derive(Clone)]
pub struct QuadratureDomain2D {
    rho: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    pub n_r: usize,
    pub n_theta: usize,
    /// The integrands of interest blow up like `1/r` at the origin.
    pub singular_at_origin: bool,
}

impl std::fmt::Debug for QuadratureDomain2D {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "QuadratureDomain2D({} × {})", self.n_r, self.n_theta)
    }
}

/// A quadrature node: position, polar data and weight.
#[derive(Debug, Clone, Copy)]
pub struct Node2D {
    pub x: [f64; 2],
    pub theta_index: usize,
    /// `r / ρ(θ)`.
    pub s: f64,
    pub weight: f64,
}

impl QuadratureDomain2D {
    pub fn star<R: Fn(f64) -> f64 + Send + Sync + 'static>(rho: R, n_r: usize, n_theta: usize) -> Self {
        QuadratureDomain2D {
            rho: Arc::new(rho),
            n_r: n_r.max(1),
            n_theta: n_theta.max(3),
            singular_at_origin: true,
        }
    }

    pub fn disc(r: f64, n_r: usize, n_theta: usize) -> Self {
        Self::star(move |_| r, n_r, n_theta)
    }

    pub fn thetas(&self) -> Vec<f64> {
        (0..self.n_theta)
            .map(|j| 2.0 * PI * (j as f64 + 0.5) / self.n_theta as f64)
            .collect()
    }

    pub fn radius(&self, theta: f64) -> f64 {
        (self.rho)(theta)
    }

    pub fn contains(&self, p: [f64; 2]) -> bool {
        p[0].hypot(p[1]) < self.radius(p[1].atan2(p[0]).rem_euclid(2.0 * PI))
    }

    /// Radial nodes; the Jacobian `r dr dθ = ρ² s ds dθ` is in the weight,
    /// so integrands with a `1/r` singularity stay bounded.
    pub fn nodes(&self) -> Result<Vec<Node2D>> {
        let dt = 2.0 * PI / self.n_theta as f64;
        let ds = 1.0 / self.n_r as f64;
        let mut out = Vec::with_capacity(self.n_r * self.n_theta);
        for (j, t) in self.thetas().into_iter().enumerate() {
            let rho = self.radius(t);
            if !(rho.is_finite() && rho > 0.0) {
                return Err(Error::Singularity(format!("boundary radius {rho} at angle {t}")));
            }
            for i in 0..self.n_r {
                let s = (i as f64 + 0.5) * ds;
                out.push(Node2D {
                    x: [rho * s * t.cos(), rho * s * t.sin()],
                    theta_index: j,
                    s,
                    weight: rho * rho * s * ds * dt,
                });
            }
        }
        Ok(out)
    }

    pub fn integrate<G: Fn(&Node2D) -> f64>(&self, g: G) -> Result<f64> {
        let nodes = self.nodes()?;
        let vals: Vec<f64> = nodes.iter().map(|n| n.weight * g(n)).collect();
        if vals.iter().any(|v| !v.is_finite()) {
            return Err(Error::Singularity("non-finite integrand value at a radial node".into()));
        }
        Ok(pairwise_sum(&vals))
    }

    pub fn area(&self) -> Result<f64> {
        self.integrate(|_| 1.0)
    }

    /// Midpoint rule on an `n × n` grid over `[−R, R]²`; the origin cell is
    /// skipped and its area returned as the excluded-mass bound factor.
    pub fn integrate_cartesian<G: Fn([f64; 2]) -> f64>(&self, g: G, half_width: f64, n: usize) -> Result<(f64, f64)> {
        let h = 2.0 * half_width / n as f64;
        let mut vals = Vec::new();
        let mut excluded = 0.0;
        for i in 0..n {
            for j in 0..n {
                let lo = [-half_width + i as f64 * h, -half_width + j as f64 * h];
                let c = [lo[0] + 0.5 * h, lo[1] + 0.5 * h];
                if !self.contains(c) {
                    continue;
                }
                let has_origin = lo[0] <= 0.0 && lo[0] + h >= 0.0 && lo[1] <= 0.0 && lo[1] + h >= 0.0;
                if has_origin && self.singular_at_origin {
                    excluded += h * h;
                    continue;
                }
                let v = g(c);
                if !v.is_finite() {
                    return Err(Error::Singularity(format!("integrand not finite at {c:?}")));
                }
                vals.push(v * h * h);
            }
        }
        Ok((pairwise_sum(&vals), excluded))
    }

    /// Inscribed polygon through the boundary points at the grid angles,
    /// counter-clockwise.
    pub fn boundary_polygon(&self) -> Vec<[f64; 2]> {
        self.thetas()
            .into_iter()
            .map(|t| {
                let r = self.radius(t);
                [r * t.cos(), r * t.sin()]
            })
            .collect()
    }
}

fn default_k_borderline() -> Vec<f64> {
    (0..=10).map(|j| 2f64.powi(j)).collect()
}
fn default_euclidean() -> AnisotropySpec {
    AnisotropySpec {
        key: "euclidean".into(),
        params: Value::Null,
        dim: 2,
    }
}
fn four_hundred() -> usize {
    400
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BorderlineParams {
    #[serde(default = "default_euclidean")]
    pub anisotropy: AnisotropySpec,
    #[serde(default = "default_k_borderline")]
    pub k: Vec<f64>,
    #[serde(default = "four_hundred")]
    pub n_r: usize,
    #[serde(default = "four_hundred")]
    pub n_theta: usize,
}

impl Default for BorderlineParams {
    fn default() -> Self {
        serde_json::from_value(json!({})).unwrap()
    }
}

/// `|{φ̃° < 1}|` where a closed form is known.
fn closed_form_area(spec: &AnisotropySpec) -> Option<f64> {
    match spec.key.as_str() {
        "euclidean" => Some(PI),
        // φ = λ|·| so φ̃° = |·|/λ.
        "scaled" => spec.params.get("lambda")?.as_f64().map(|l| PI * l * l),
        // φ = ‖·‖₁ has polar ‖·‖∞: the unit square; φ = ‖·‖∞ gives the diamond.
        "l1" => Some(4.0),
        "linf" => Some(2.0),
        // φ = √(ξᵀQξ) has polar √(ξᵀQ⁻¹ξ): an ellipse of area π√det Q.
        "ellipse" => {
            let q = spec.params.get("q")?;
            let e = |i: usize, j: usize| q.get(i)?.get(j)?.as_f64();
            let det = e(0, 0)? * e(1, 1)? - e(0, 1)? * e(1, 0)?;
            Some(PI * det.sqrt())
        }
        _ => None,
    }
}

/// Star-shaped description of `{φ̃° < 1}`: `ρ(θ) = 1/φ̃°(e_θ)`.
pub fn polar_unit_ball(phi: &Anisotropy, n_r: usize, n_theta: usize) -> Result<(QuadratureDomain2D, Vec<f64>)> {
    if phi.dim() != 2 || phi.is_x_dependent() {
        return Err(Error::Config(
            "the borderline example needs an x-independent 2D anisotropy".into(),
        ));
    }
    let tilde = phi.mirrored();
    let dom0 = QuadratureDomain2D::disc(1.0, n_r, n_theta);
    let rho: Vec<f64> = dom0
        .thetas()
        .iter()
        .map(|t| tilde.polar(&[0.0, 0.0], &[t.cos(), t.sin()]).map(|v| 1.0 / v))
        .collect::<Result<_>>()?;
    let table = rho.clone();
    let n = n_theta.max(3);
    let dom = QuadratureDomain2D::star(
        move |t| {
            // Exact at the grid angles; linear in between.
            let u = t.rem_euclid(2.0 * PI) / (2.0 * PI) * n as f64 - 0.5;
            let j = u.floor();
            let w = u - j;
            let a = table[(j as i64).rem_euclid(n as i64) as usize];
            let b = table[(j as i64 + 1).rem_euclid(n as i64) as usize];
            (1.0 - w) * a + w * b
        },
        n_r,
        n,
    );
    Ok((dom, rho))
}

pub fn run_borderline_area(p: &BorderlineParams) -> Result<ExperimentTable> {
    if p.k.iter().any(|k| !(*k > 0.0)) {
        return Err(Error::Parameter("k must be positive".into()));
    }
    let phi = p.anisotropy.build()?;
    let (dom, _) = polar_unit_ball(&phi, p.n_r, p.n_theta)?;
    let tilde = phi.mirrored();
    let polar = |x: [f64; 2]| tilde.polar(&[0.0, 0.0], &x);
    // ∇φ̃° is 0-homogeneous, so one central difference at e_θ (step 1e-5,
    // scaled by the radius 1) serves the whole ray.
    let d = 1e-5;
    let mut grad_phi = Vec::with_capacity(dom.n_theta);
    for t in dom.thetas() {
        let e = [t.cos(), t.sin()];
        let gx = (polar([e[0] + d, e[1]])? - polar([e[0] - d, e[1]])?) / (2.0 * d);
        let gy = (polar([e[0], e[1] + d])? - polar([e[0], e[1] - d])?) / (2.0 * d);
        // ∇u₁ = −∇φ̃°.
        grad_phi.push(phi.eval(&[0.0, 0.0], &[-gx, -gy]));
    }
    let area = dom.area()?;
    // u₁/φ̃° = (1 − s)/s at a radial node.
    let int_u_over = dom.integrate(|n| (1.0 - n.s) / n.s)?;
    let int_phi_grad = dom.integrate(|n| grad_phi[n.theta_index])?;
    let poly = dom.boundary_polygon();
    let per = crate::measure::TestSet2D::Polygon {
        label: "unit polar ball".into(),
        vertices: poly,
    }
    .perimeter(&phi, f64::INFINITY);
    let area_exact = closed_form_area(&p.anisotropy);
    let oracle_area = area_exact.unwrap_or(area);
    let mut rows = Vec::new();
    for &k in &p.k {
        let a_k = dom.integrate(|n| (1.0 + k * k * grad_phi[n.theta_index].powi(2)).sqrt())? - k * int_u_over;
        let bound = dom.integrate(|n| 1.0 / (1.0 + k * grad_phi[n.theta_index]))?;
        let oracle = oracle_area * ((1.0 + k * k).sqrt() - k);
        rows.push(vec![k, a_k, oracle, (a_k - oracle).abs(), bound]);
    }
    let vals: Vec<f64> = rows.iter().map(|r| r[1]).collect();
    let mut summary = Map::new();
    summary.insert("area".into(), json!(area));
    summary.insert("area_closed_form".into(), json!(area_exact));
    summary.insert("int_u1_over_polar".into(), json!(int_u_over));
    summary.insert("int_phi_grad_u1".into(), json!(int_phi_grad));
    summary.insert("extremality_residual".into(), json!((int_u_over - int_phi_grad).abs()));
    summary.insert("perimeter".into(), json!(per));
    summary.insert("two_area".into(), json!(2.0 * area));
    summary.insert("perimeter_gap".into(), json!((per - 2.0 * area).abs()));
    summary.insert(
        "strictly_decreasing".into(),
        json!(vals.windows(2).all(|w| w[1] < w[0])),
    );
    summary.insert("all_positive".into(), json!(vals.iter().all(|v| *v > 0.0)));
    Ok(ExperimentTable {
        name: "borderline-area".into(),
        params: serde_json::to_value(p).unwrap(),
        columns: ["k", "a_k", "a_k_closed_form", "gap", "upper_bound"]
            .map(String::from)
            .to_vec(),
        rows,
        summary,
    })
}

fn default_k_h4() -> Vec<u32> {
    (1..=6).collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RemarkH4Params {
    #[serde(default = "default_k_h4")]
    pub k: Vec<u32>,
}

/// On `B₂(0)`: `v_k = k²·clamp(1 − k(|x| − 1), 0, 1)`,
/// `f(ξ) = |ξ| + 1 − √(|ξ| + 1)` and `μ₋ = |x|⁻¹ L²`.
pub fn run_remark_h4(p: &RemarkH4Params) -> Result<ExperimentTable> {
    if p.k.contains(&0) {
        return Err(Error::Parameter("k ≥ 1".into()));
    }
    let f = |t: f64| t + 1.0 - (t + 1.0).sqrt();
    let mut rows = Vec::new();
    for &k in &p.k {
        let kf = k as f64;
        let v = move |r: f64| kf * kf * (1.0 - kf * (r - 1.0)).clamp(0.0, 1.0);
        // Radial profile derivative by central differences; Gauss nodes sit
        // strictly inside the pieces, away from the kinks.
        let dv = |r: f64| {
            let h = 1e-7;
            ((v(r + h) - v(r - h)) / (2.0 * h)).abs()
        };
        let breaks = [0.0, 1.0, 1.0 + 1.0 / kf, 2.0];
        let radial = |g: &dyn Fn(f64) -> f64| 2.0 * PI * gauss_composite(&breaks, 5, |r| g(r) * r);
        let tv = radial(&dv);
        let pair = 2.0 * PI * gauss_composite(&breaks, 5, &v);
        let func = radial(&|r| f(dv(r))) - pair;
        let tv_cf = PI * (2.0 * kf * kf + kf);
        let func_cf = PI * (1.0 - (kf.powi(3) + 1.0).sqrt()) * (2.0 / kf + 1.0 / (kf * kf));
        rows.push(vec![
            kf,
            tv,
            pair,
            tv_cf,
            (tv - pair).abs() / tv_cf,
            func,
            func_cf,
            (func - func_cf).abs(),
        ]);
    }
    let vals: Vec<f64> = rows.iter().map(|r| r[5]).collect();
    let mut summary = Map::new();
    summary.insert(
        "strictly_decreasing".into(),
        json!(vals.windows(2).all(|w| w[1] < w[0])),
    );
    summary.insert(
        "max_functional_gap".into(),
        json!(rows.iter().map(|r| r[7]).fold(0.0f64, f64::max)),
    );
    summary.insert(
        "max_identity_relative_gap".into(),
        json!(rows.iter().map(|r| r[4]).fold(0.0f64, f64::max)),
    );
    Ok(ExperimentTable {
        name: "remark-h4".into(),
        params: serde_json::to_value(p).unwrap(),
        columns: [
            "k",
            "total_variation",
            "pairing",
            "closed_form",
            "identity_relative_gap",
            "functional",
            "functional_closed_form",
            "functional_gap",
        ]
        .map(String::from)
        .to_vec(),
        rows,
        summary,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VectorialMode {
    Length,
    Nonparametric,
}

fn one() -> f64 {
    1.0
}
fn nine_tenths() -> f64 {
    0.9
}
fn length() -> VectorialMode {
    VectorialMode::Length
}
fn default_k_vec() -> Vec<u32> {
    vec![1, 2, 4, 8, 16, 32]
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VectorialParams {
    #[serde(default = "one")]
    pub eps: f64,
    #[serde(default = "nine_tenths")]
    pub theta: f64,
    #[serde(default = "length")]
    pub mode: VectorialMode,
    #[serde(default = "default_k_vec")]
    pub k: Vec<u32>,
}

/// Piecewise-constant `R²`-valued function on `(−1, 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct VecStep {
    pub breaks: Vec<f64>,
    pub values: Vec<[f64; 2]>,
}

impl VecStep {
    /// `∫f(Dw) + |w(1) − (1,0)| + |w(−1) − (−1,0)| − 2θ w₂(0)`; for the
    /// nonparametric length the absolutely continuous part adds `|Ω| = 2`.
    /// `w₂(0)` is read off the piece containing 0 (the function is constant
    /// near 0 in all uses here).
    pub fn functional(&self, theta: f64, mode: VectorialMode) -> f64 {
        let d = |a: [f64; 2], b: [f64; 2]| (a[0] - b[0]).hypot(a[1] - b[1]);
        let jumps: f64 = self.values.windows(2).map(|w| d(w[0], w[1])).sum();
        let bd = d(self.values[self.values.len() - 1], [1.0, 0.0]) + d(self.values[0], [-1.0, 0.0]);
        let k = self.breaks.partition_point(|&b| b <= 0.0).saturating_sub(1);
        let ac = match mode {
            VectorialMode::Length => 0.0,
            VectorialMode::Nonparametric => 2.0,
        };
        ac + jumps + bd - 2.0 * theta * self.values[k][1]
    }

    pub fn l1_distance(&self, other: &VecStep) -> f64 {
        let mut pts: Vec<f64> = self.breaks.iter().chain(&other.breaks).cloned().collect();
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        let at = |s: &VecStep, x: f64| {
            s.values[s
                .breaks
                .partition_point(|&b| b <= x)
                .saturating_sub(1)
                .min(s.values.len() - 1)]
        };
        pts.windows(2)
            .map(|w| {
                let m = 0.5 * (w[0] + w[1]);
                let (a, b) = (at(self, m), at(other, m));
                (w[1] - w[0]) * (a[0] - b[0]).hypot(a[1] - b[1])
            })
            .sum()
    }
}

pub fn run_vectorial(p: &VectorialParams) -> Result<ExperimentTable> {
    if !(p.theta > 0.0 && p.theta < 1.0) || !(p.eps > 0.0) {
        return Err(Error::Parameter(format!(
            "need eps > 0 and theta in (0, 1), got {} and {}",
            p.eps, p.theta
        )));
    }
    let limit = 2.0 * p.theta / (1.0 - p.theta * p.theta);
    if p.eps >= limit {
        return Err(Error::Parameter(format!(
            "eps = {} ≥ 2θ/(1−θ²) = {limit}: the sequence no longer beats the limit strictly",
            p.eps
        )));
    }
    if p.k.contains(&0) {
        return Err(Error::Parameter("k ≥ 1".into()));
    }
    let u = VecStep {
        breaks: vec![-1.0, 0.0],
        values: vec![[-1.0, 0.0], [1.0, 0.0]],
    };
    let fu = u.functional(p.theta, p.mode);
    let add = if p.mode == VectorialMode::Nonparametric {
        2.0
    } else {
        0.0
    };
    let closed = add + 2.0 * ((1.0 + p.eps * p.eps).sqrt() - p.theta * p.eps);
    let mut rows = Vec::new();
    for &k in &p.k {
        let r = 1.0 / k as f64;
        let uk = VecStep {
            breaks: vec![-1.0, -r, r],
            values: vec![[-1.0, 0.0], [0.0, p.eps], [1.0, 0.0]],
        };
        let fk = uk.functional(p.theta, p.mode);
        rows.push(vec![k as f64, fk, closed, fu, fu - fk, uk.l1_distance(&u)]);
    }
    let mut summary = Map::new();
    summary.insert("functional_limit".into(), json!(fu));
    summary.insert("functional_sequence_closed_form".into(), json!(closed));
    summary.insert("margin".into(), json!(fu - closed));
    summary.insert("eps_limit".into(), json!(limit));
    Ok(ExperimentTable {
        name: "vectorial".into(),
        params: serde_json::to_value(p).unwrap(),
        columns: [
            "k",
            "functional_uk",
            "closed_form",
            "functional_u",
            "margin",
            "l1_distance",
        ]
        .map(String::from)
        .to_vec(),
        rows,
        summary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn isotropic_borderline_values() {
        let t = run_borderline_area(&BorderlineParams::default()).unwrap();
        let a = t.column("a_k").unwrap();
        assert!((a[0] - PI * (2f64.sqrt() - 1.0)).abs() < 1e-3, "{}", a[0]);
        assert!(*a.last().unwrap() < 1e-2);
        assert_eq!(t.summary["strictly_decreasing"], json!(true));
        assert!(t.summary["extremality_residual"].as_f64().unwrap() < 1e-3);
        assert!(t.summary["perimeter_gap"].as_f64().unwrap() < 1e-3);
    }

    #[test]
    fn disc_area_to_1e4() {
        let d = QuadratureDomain2D::disc(1.0, 400, 400);
        assert!((d.area().unwrap() - PI).abs() < 1e-4 * PI);
        // ∫ 1/|x| over the unit disc = 2π; the radial rule is exact here.
        let v = d.integrate(|n| 1.0 / n.s).unwrap();
        assert!((v - 2.0 * PI).abs() < 1e-10);
        let (c, excluded) = d.integrate_cartesian(|_| 1.0, 1.0, 200).unwrap();
        assert!((c + excluded - PI).abs() < 1e-2);
    }

    #[test]
    fn remark_h4_closed_forms() {
        let t = run_remark_h4(&RemarkH4Params { k: vec![1, 4] }).unwrap();
        let tv = t.column("total_variation").unwrap();
        let f = t.column("functional").unwrap();
        assert!((tv[0] - 3.0 * PI).abs() < 1e-3);
        assert!((f[0] - 3.0 * PI * (1.0 - 2f64.sqrt())).abs() < 1e-3);
        assert!((f[1] - PI * (1.0 - 65f64.sqrt()) * 9.0 / 16.0).abs() < 1e-2);
        assert!(f[1] < f[0]);
    }

    #[test]
    fn vectorial_values() {
        let p = VectorialParams {
            eps: 1.0,
            theta: 0.9,
            mode: VectorialMode::Length,
            k: vec![1, 3],
        };
        let t = run_vectorial(&p).unwrap();
        let f = t.column("functional_uk").unwrap();
        assert!((f[0] - 2.0 * (2f64.sqrt() - 0.9)).abs() < 1e-12);
        assert_eq!(t.column("functional_u").unwrap()[0], 2.0);
        let p = VectorialParams {
            mode: VectorialMode::Nonparametric,
            ..p
        };
        let t = run_vectorial(&p).unwrap();
        assert!((t.column("functional_uk").unwrap()[0] - 3.02842712474619).abs() < 1e-12);
        assert_eq!(t.column("functional_u").unwrap()[0], 4.0);
        let bad = VectorialParams { eps: 20.0, ..p };
        assert!(matches!(run_vectorial(&bad), Err(Error::Parameter(_))));
    }

    #[test]
    fn csv_is_stable() {
        let t = run_vectorial(&serde_json::from_value(json!({"k": [1]})).unwrap()).unwrap();
        let a = t.to_csv(&["experiment=vectorial".into()]);
        assert_eq!(a, t.to_csv(&["experiment=vectorial".into()]));
        assert!(a.starts_with("k,functional_uk,"));
        assert!(a.ends_with("# experiment=vectorial\n"));
    }
}
