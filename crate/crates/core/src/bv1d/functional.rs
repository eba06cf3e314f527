use serde::Serialize;

use super::{abs_linear_integral, BVFunction1D, BoundaryData};
use crate::integrand::Integrand;
use crate::measure::{pairing, JordanPair};
use crate::quad::{gauss, pairwise_sum};
use crate::{Error, Result};

/// Per-term values of the relaxed functional; `total` is their sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FunctionalBreakdown {
    pub bulk_ac: f64,
    pub bulk_jump: f64,
    pub boundary: f64,
    pub measure_pairing: f64,
    pub total: f64,
}

/// `(∫ f(x, w') dx, Σ f∞(x_j, right − left))`.
fn bulk_parts(f: &Integrand, u: &BVFunction1D) -> Result<(f64, f64)> {
    let ac: Vec<f64> = u
        .pieces_iter()
        .map(|(c, d, p)| {
            if f.is_x_dependent() {
                gauss(c, d, 5, |x| f.eval(&[x], &[p.slope]))
            } else {
                (d - c) * f.eval(&[0.5 * (c + d)], &[p.slope])
            }
        })
        .collect();
    let mut jumps = Vec::new();
    for j in u.jumps() {
        jumps.push(f.recession_default(&[j.x], &[j.right - j.left])?);
    }
    Ok((pairwise_sum(&ac), pairwise_sum(&jumps)))
}

/// `∫_Ω f(·, Du)`: absolutely continuous part plus jump part.
pub fn functional_of_measures(f: &Integrand, u: &BVFunction1D) -> Result<f64> {
    check_dim(f)?;
    let (ac, j) = bulk_parts(f, u)?;
    Ok(ac + j)
}

/// `f∞(a, u(a⁺) − u0(a)) + f∞(b, −(u(b⁻) − u0(b)))`: inward normals are
/// `+1` at `a` and `−1` at `b`.
pub fn boundary_term(f: &Integrand, u: &BVFunction1D, u0: &BoundaryData) -> Result<f64> {
    check_dim(f)?;
    let (a, b) = u.domain();
    let at_a = f.recession_default(&[a], &[u.trace_a() - u0.a])?;
    let at_b = f.recession_default(&[b], &[-(u.trace_b() - u0.b)])?;
    Ok(at_a + at_b)
}

/// The full functional with its breakdown.
pub fn evaluate_mf(
    f: &Integrand,
    u0: &BoundaryData,
    pair: &JordanPair,
    u: &BVFunction1D,
) -> Result<FunctionalBreakdown> {
    check_dim(f)?;
    let (bulk_ac, bulk_jump) = bulk_parts(f, u)?;
    let boundary = boundary_term(f, u, u0)?;
    let measure_pairing = pairing(pair, u)?;
    Ok(FunctionalBreakdown {
        bulk_ac,
        bulk_jump,
        boundary,
        measure_pairing,
        total: bulk_ac + bulk_jump + boundary + measure_pairing,
    })
}

/// `∫ f(·, w') + ∫ w dμ` for continuous `w` (no boundary term: the class has
/// the traces built in).
pub fn w11_functional(f: &Integrand, pair: &JordanPair, w: &BVFunction1D) -> Result<f64> {
    if w.has_jumps() {
        return Err(Error::InvalidFunction(
            "W^{1,1} functional needs a continuous function".into(),
        ));
    }
    Ok(functional_of_measures(f, w)? + pairing(pair, w)?)
}

/// `∫ g(x) |w − v| dx` where `v` is the affine extension of `u0`; pieces are
/// split at sign changes so the integrand is affine in `x` on each part.
pub fn weighted_distance<G: Fn(f64) -> f64>(g: G, x_dependent: bool, w: &BVFunction1D, u0: &BoundaryData) -> f64 {
    let (a, b) = w.domain();
    let v = u0.extension(a, b);
    let d = w.add(&v.affine_map(-1.0, 0.0)).expect("same domain");
    let mut parts = Vec::new();
    for (c, e, p) in d.pieces_iter() {
        let (u, z) = (p.value, p.value + p.slope * (e - c));
        if !x_dependent {
            parts.push(g(0.5 * (c + e)) * abs_linear_integral(u, z, e - c));
            continue;
        }
        let mut cuts = vec![c, e];
        if u * z < 0.0 {
            cuts.insert(1, c + (e - c) * u / (u - z));
        }
        for k in cuts.windows(2) {
            parts.push(gauss(k[0], k[1], 5, |x| g(x) * (p.value + p.slope * (x - c)).abs()));
        }
    }
    pairwise_sum(&parts)
}

fn check_dim(f: &Integrand) -> Result<()> {
    if f.dim() != 1 {
        return Err(Error::Config(format!(
            "1D evaluation needs a 1D integrand, got dim {}",
            f.dim()
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrand::integrand_from_key;
    use crate::measure::{jordan_decompose, Domain, SignedMeasure};
    use serde_json::Value;

    fn area() -> Integrand {
        integrand_from_key("area", &Value::Null, 1).unwrap()
    }

    #[test]
    fn affine_and_step() {
        let u = BVFunction1D::from_values(vec![0.0, 1.0], vec![0.0, 1.0]).unwrap();
        assert!((functional_of_measures(&area(), &u).unwrap() - 2f64.sqrt()).abs() < 1e-15);
        let u = BVFunction1D::step(vec![0.0, 0.5, 1.0], vec![0.0, 1.0]).unwrap();
        assert!((functional_of_measures(&area(), &u).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn asymmetric_recession_at_the_boundary() {
        // f∞(s) = 2s₊ + s₋
        let f = Integrand::new("asym", 1, 1.0, 2.0, |_, xi| 2.0 * xi[0].max(0.0) + (-xi[0]).max(0.0)).homogeneous();
        let u = BVFunction1D::constant(0.0, 1.0, 1.0);
        assert_eq!(boundary_term(&f, &u, &BoundaryData::zero()).unwrap(), 3.0);
        let tv = integrand_from_key("tv", &Value::Null, 1).unwrap();
        let u = BVFunction1D::from_values(vec![0.0, 1.0], vec![2.0, 1.0]).unwrap();
        assert_eq!(boundary_term(&tv, &u, &BoundaryData::new(0.0, 1.0)).unwrap(), 2.0);
    }

    #[test]
    fn zero_data_gives_f_at_zero() {
        let f = integrand_from_key("weighted-area", &serde_json::json!({"c": 3.0}), 1).unwrap();
        let pair = jordan_decompose(&SignedMeasure::zero(Domain::interval(-1.0, 1.0)));
        let u = BVFunction1D::constant(-1.0, 1.0, 0.0);
        let r = evaluate_mf(&f, &BoundaryData::zero(), &pair, &u).unwrap();
        // ∫_{-1}^{1} (1 + 3x²) dx = 4
        assert!((r.total - 4.0).abs() < 1e-13);
    }

    #[test]
    fn weighted_distance_splits_at_crossings() {
        let w = BVFunction1D::from_values(vec![0.0, 1.0], vec![-1.0, 1.0]).unwrap();
        let d = weighted_distance(|x| x, true, &w, &BoundaryData::zero());
        // ∫_0^1 x |2x − 1| dx = 1/4
        assert!((d - 0.25).abs() < 1e-14, "{d}");
    }
}
